//! Command plumbing shared by the `nmk` binary and the tests: errors with
//! exit codes, the result cache, run manifests and the sweep suites.

mod cache;
mod manifest;
mod suites;

use thiserror::Error;

use crate::complex::ComplexError;
use crate::graph::GraphError;
use crate::homology::HomologyError;
use crate::morse::MorseError;
use crate::rainbow::RainbowError;

pub use cache::{betti_cached, digest_hex, Cache, CACHE_DIR_ENV};
pub use manifest::RunManifest;
pub use suites::{run_suite, AuditReport, CaseResult, SweepOptions, SweepSummary, SUITES};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failure(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Rainbow(#[from] RainbowError),
}

fn graph_code(e: &GraphError) -> i32 {
    match e {
        GraphError::CapExceeded { .. } | GraphError::TooManyVertices(_) => EXIT_CAP,
        GraphError::CriteriaDisagree => EXIT_FAILURE,
        _ => EXIT_USAGE,
    }
}

fn complex_code(e: &ComplexError) -> i32 {
    match e {
        ComplexError::CapExceeded { .. } => EXIT_CAP,
        ComplexError::Graph(g) => graph_code(g),
        _ => EXIT_FAILURE,
    }
}

impl CliError {
    /// 0 pass, 1 violation or failure, 2 usage or parse error, 3 resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Json(_) => EXIT_USAGE,
            CliError::Failure(_) | CliError::Io(_) => EXIT_FAILURE,
            CliError::Graph(e) => graph_code(e),
            CliError::Complex(e) => complex_code(e),
            CliError::Homology(e) => match e {
                HomologyError::CapExceeded { .. } => EXIT_CAP,
                HomologyError::NotPrime(_) | HomologyError::UnknownField(_) => EXIT_USAGE,
                HomologyError::Complex(c) => complex_code(c),
                _ => EXIT_FAILURE,
            },
            CliError::Morse(e) => match e {
                MorseError::Complex(c) => complex_code(c),
                MorseError::Graph(g) => graph_code(g),
                MorseError::Precondition(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            },
            CliError::Rainbow(e) => match e {
                RainbowError::Parse { .. } | RainbowError::EdgeOutsideHost { .. } => EXIT_USAGE,
                RainbowError::CapExceeded { .. } => EXIT_CAP,
                RainbowError::Graph(g) => graph_code(g),
                RainbowError::Complex(c) => complex_code(c),
                _ => EXIT_FAILURE,
            },
        }
    }
}
