//! u-expansions at infinity: the Carlitz module, Goss polynomials,
//! Eisenstein series, and the expansions of `E`, `g`, `h`, `Δ`.

pub mod base;
pub mod carlitz;
pub mod eisenstein;
pub mod goss;
pub mod series;

pub use base::{base_expansions, BaseExpansions};
pub use carlitz::{carlitz_action, monics_of_degree, u_of_az, AdditivePoly};
pub use eisenstein::{eisenstein_gk, false_eisenstein};
pub use goss::GossTable;
pub use series::{SeriesJson, USeries};
