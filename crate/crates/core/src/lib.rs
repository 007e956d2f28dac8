//! Exact computation with Drinfeld quasi-modular forms for `F_q[θ]`.
//!
//! The ring of quasi-modular forms is `C[E, g, h]`. This crate provides
//! exact arithmetic in `K = F_q(θ)`, u-expansions at infinity, the
//! hyperderivatives `D_n` via the Taylor homomorphism, higher Serre
//! operators, and extremal-form search by fraction-free elimination.

pub mod algebra;
pub mod context;
pub mod error;
pub mod expr;
pub mod extremal;
pub mod forms;
pub mod hyperderive;
pub mod useries;
pub mod verify;

pub use context::Context;
pub use error::{Error, Result};
