//! Hyperderivatives `D_n` through the Taylor homomorphism, higher Serre
//! operators, differential exponents and a u-series oracle.

pub mod oracle;
pub mod ops;
pub mod stages;
pub mod tables;
pub mod taylor;

pub use oracle::dn_on_useries;
pub use ops::{
    differential_exponent, dn, hecke_candidates, partial_e, serre_partial, taylor_of, taylor_with, EpsilonReport,
    HeckeCandidate,
};
pub use stages::{run_stages, stages_needed, StageState};
pub use tables::{build_tables, TaylorTables};
pub use taylor::TaylorPoly;
