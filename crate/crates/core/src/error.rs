use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while building, assembling or solving an interface problem.
#[derive(Debug, Error)]
pub enum Error {
    #[error("edge cut search did not converge (last residual {residual:e})")]
    NoConvergence { residual: f64 },

    #[error("patch {patch} has an unsupported interface cut: {reason}")]
    InvalidCut { patch: usize, reason: String },

    #[error("patch {patch}: lines defining the interior node are parallel")]
    DegenerateMapping { patch: usize },

    #[error("patch {patch}: singular jacobian (det = {det:e})")]
    SingularJacobian { patch: usize, det: f64 },

    #[error("patches request different positions for shared edge node {node}")]
    ConflictingNodeMove { node: usize },

    #[error("non-positive diagonal entry {value:e} in row {row}")]
    NonpositiveDiagonal { row: usize, value: f64 },

    #[error("solver did not converge in {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
