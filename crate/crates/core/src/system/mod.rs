//! Degrees of freedom, sparse storage, assembly and Dirichlet constraints.

pub mod assembly;
pub mod constraints;
pub mod dofs;
pub mod hierarchical;
pub mod sparse;

pub use assembly::{assemble_interface_flux_rhs, assemble_matrix, assemble_rhs, LinearSystem};
pub use constraints::{apply_constraints, interpolate_boundary_values, Constraints};
pub use dofs::DofHandler;
pub use hierarchical::HierarchicalTransform;
pub use sparse::CsrMatrix;
