//! Exact arithmetic over `F_q`, `A = F_q[θ]` and `K = F_q(θ)`.

pub mod binom;
pub mod brackets;
pub mod field;
pub mod kelem;
pub mod matrix;
pub mod poly;

pub use binom::binom_char_p;
pub use brackets::{bracket, carlitz_factorial, lprod};
pub use field::{FieldDesc, Fq, FqElem, GaloisField};
pub use kelem::KElem;
pub use matrix::{FfEchelon, KMatrix};
pub use poly::ThetaPoly;
