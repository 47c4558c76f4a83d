//! Command-line experiments: the refinement study and the interface sweep.

pub mod config;
pub mod run;

pub use config::{BasisChoice, Cli, RunConfig};
pub use run::{
    run, run_example1, run_example2, Example1Row, Example2Output, Example2Row, STATS_OFFSETS,
};
