//! Benchmark instance generators, a run harness over natural and extended
//! formulations, and CSV output of the resulting statistics.

pub mod families;
pub mod instance;
pub mod output;
pub mod run;

use thiserror::Error;

pub use instance::{block_rng, Family, Form, InstanceSpec, Variant};
pub use run::{build_problem, run_matrix, run_spec, RunOptions, RunRecord};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid size for {family}: {reason}")]
    InvalidSize { family: Family, reason: String },
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Model(#[from] exocone::ModelError),
    #[error(transparent)]
    Cone(#[from] exocone::ConeError),
    #[error(transparent)]
    Bridge(#[from] exocone::BridgeError),
    #[error(transparent)]
    Solver(#[from] exocone::solver::SolverError),
    #[error(transparent)]
    Interp(#[from] exocone::interp::InterpError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(family: Family, reason: impl Into<String>) -> BenchError {
    BenchError::InvalidSize { family, reason: reason.into() }
}
