//! Rank-2 u-expansions: rank-1 data for A, Eisenstein series, coefficient
//! forms and the Hecke operator attached to a prime p.

mod forms;
mod hecke_action;
mod rank1;
mod useries;

pub use forms::{congruence_allows, congruence_violations, ExpansionContext, Inversion, USubst};
pub use hecke_action::{
    eigenvalue_of, hecke_action, nonexample_coefficient, output_truncation, torsion_lattice, Eigen,
    NonExample, TorsionLattice,
};
pub use rank1::{stratum_lambda, stratum_lambda_degree, Rank1, Rank1Module, Stratum};
pub use useries::{PowerTable, USeries};
