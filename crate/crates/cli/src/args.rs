use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "chanmask",
    version,
    about = "Decide, synthesize and verify maskers for families of quantum channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Decision tolerance (overrides the family file; default 1e-8).
    #[arg(long)]
    pub tol: Option<f64>,

    /// Verification tolerance (overrides the family file; default 1e-9).
    #[arg(long)]
    pub verify_tol: Option<f64>,

    /// Seed for the random coefficients in simultaneous diagonalization (default 0).
    #[arg(long)]
    pub seed: Option<u64>,

    /// Emit the report as JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a channel family is maskable.
    Decide {
        family: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Synthesize a masker for a maskable family and write it to a file.
    Synthesize {
        family: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Check that a masker file hides every channel of a family.
    Verify {
        family: PathBuf,
        masker: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Print the Bloch affine form, unitality and pure fixed points of a qubit channel.
    Bloch {
        channel: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Exhaustive classical no-go search followed by the quantum Fourier masker.
    DemoClassical {
        /// Alphabet size (at most 4 for the exhaustive search).
        #[arg(short, long, default_value_t = 2)]
        d: usize,
        /// A permutation as comma-separated images, e.g. `1,0`; repeatable.
        /// Defaults to the identity and the cyclic shift.
        #[arg(long = "perm", value_delimiter = ';')]
        perms: Vec<String>,
        /// Random stochastic channels added to the quantum check.
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[command(flatten)]
        flags: Flags,
    },
}
