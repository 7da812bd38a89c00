//! Command-line front end for the `chanmask` library.
//!
//! Each `cmd_*` function writes its report to the given writer and returns an
//! [`Exit`] status: 0 for a positive result (maskable, verified), 1 for a
//! definitive negative verdict, 2 for malformed input or IO failure.

pub mod args;
pub mod commands;
pub mod files;
pub mod json;
mod render;

use std::io::Write;

use thiserror::Error;

pub use args::Cli;
pub use commands::{
    cmd_bloch, cmd_decide, cmd_demo_classical, cmd_synthesize, cmd_verify, DemoOptions, Settings,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Positive = 0,
    Negative = 1,
    InputError = 2,
}

impl Exit {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    /// A file or argument violates the input schema.
    #[error("invalid input: {0}")]
    Schema(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] chanmask::Error),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

impl CliError {
    pub fn schema(msg: impl Into<String>) -> Self {
        CliError::Schema(msg.into())
    }
}

/// Runs a parsed command line; errors are reported on `err` with exit code 2.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    match commands::dispatch(cli, out) {
        Ok(exit) => exit,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            Exit::InputError
        }
    }
}
