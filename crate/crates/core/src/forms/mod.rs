//! Symbolic quasi-modular forms in `C[E, g, h]`.

pub mod divide;
pub mod eval;
pub mod families;
pub mod form;
pub mod grading;

pub use divide::{bareiss_det, divides, e_coefficients, resultant_in_e};
pub use eval::{evaluate, nu_infty, Evaluator, NuPolicy};
pub use families::{Families, SeqName};
pub use form::{FormJson, Mono, QMForm, RawForm};
pub use grading::{grading_of, max_weight, Grading};
