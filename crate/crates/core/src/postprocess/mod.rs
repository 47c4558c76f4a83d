//! Error norms, convergence rates and VTK output.

pub mod errors;
pub mod vtk;

pub use errors::{convergence_rates, integrate_difference_norms, ErrorReport, Norm};
pub use vtk::write_vtk;
