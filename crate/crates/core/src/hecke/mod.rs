//! The Hecke ring of GL_r(A): integer combinations of double cosets
//! Γ·diag(a_1, …, a_r)·Γ, multiplied by counting intermediate lattices.

mod algebra;
mod element;
mod express;
mod qbinom;

pub use algebra::{psi_map, HeckeAlgebra};
pub use element::HeckeElement;
pub use express::{evaluate, express_in_generators, GenPoly};
pub use qbinom::{q_binomial, q_binomial_or_zero};
