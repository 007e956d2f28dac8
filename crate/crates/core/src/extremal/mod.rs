//! Graded spaces, extremal forms and vanishing spectra.

pub mod basis;
pub mod bounds;
pub mod spectrum;
pub mod table;

pub use basis::{basis, GradedBasis};
pub use bounds::{verify_multiplicity, BoundCheck, MultiplicityReport};
pub use spectrum::{extremal_form, extremal_in, proportional, SearchPolicy, SpectrumReport};
pub use table::{experiments_table, CellStatus, ExperimentsTable, Expected, TableOptions, TableRow};
