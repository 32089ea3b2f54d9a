//! Command implementations and reports for the `helixlab` binary.

pub mod commands;
pub mod config;
pub mod report;
pub mod suite;

use thiserror::Error;

use helixlab_core::GeomError;

pub use commands::{cmd_analyze, cmd_lemma_la, cmd_offsets, cmd_project, cmd_sol, cmd_suite, run};
pub use config::{Cli, Command, Options, RunConfig, SEED_ENV};
pub use report::{Report, Summary};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for bad input, 1 for failures during evaluation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Geom(e) => match e {
                GeomError::InvalidParam { .. }
                | GeomError::UnknownChart(_)
                | GeomError::Parse { .. }
                | GeomError::DimensionMismatch(_)
                | GeomError::VerticalDirection { .. }
                | GeomError::ImmersionDegeneratesAtT { .. }
                | GeomError::InsufficientGrid { .. }
                | GeomError::NotHypersurface { .. }
                | GeomError::NonPositiveDefinite { .. } => 2,
                _ => 1,
            },
            CliError::Io { .. } => 1,
        }
    }
}
