//! Function-field arithmetic over A = F_q[t]: finite fields, polynomials,
//! Laurent series in 1/t, lattices over A, Hecke algebras of A-lattices,
//! Goss polynomials and rank-2 u-expansions of Drinfeld modular forms.

pub mod cosets;
pub mod error;
pub mod expansion;
pub mod field;
pub mod goss;
pub mod hecke;
pub mod json;
pub mod lattice;
pub mod laurent;
pub mod poly;
pub mod ratfunc;
pub mod ring;
pub mod suite;

pub use error::{Error, Result};
pub use field::{Field, Fq, FqContext};
pub use laurent::LaurentSeries;
pub use poly::PolyA;
pub use ratfunc::RationalFunction;
