//! Batch drivers behind the `squashsim` binary. Each command computes its
//! rows first and writes CSV/SVG afterwards, so the same functions back the
//! acceptance tests.

pub mod appendix;
pub mod bounds_check;
pub mod config;
pub mod demo;
pub mod figure3;
pub mod output;
pub mod sample;
pub mod svg;

use std::path::PathBuf;

use fock_core::Exec;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{context}: {message}")]
    Backend { context: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }

    pub fn backend(context: impl Into<String>, err: impl std::fmt::Display) -> Self {
        CliError::Backend { context: context.into(), message: err.to_string() }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Debug)]
pub struct Context {
    pub seed: u64,
    pub exec: Exec,
    pub out: PathBuf,
}

/// What a command did: whether its checks passed, a few summary lines for
/// the terminal, and the files written.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub passed: bool,
    pub summary: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}
