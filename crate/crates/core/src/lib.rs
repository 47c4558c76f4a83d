//! Locally modified parametric finite elements for elliptic interface problems.
//!
//! A fixed quadrilateral patch mesh is subdivided patch-locally so that the
//! interface given by a level set is resolved by sub-cell edges. Each patch
//! carries nine nodes; interface patches are split into eight triangles,
//! all other patches into four quadrilaterals.

pub mod driver;
pub mod error;
pub mod fe_values;
pub mod levelset;
pub mod mesh;
pub mod postprocess;
pub mod problems;
pub mod ref_fem;
pub mod simulation;
pub mod solvers;
pub mod system;

pub use error::{Error, Result};
