use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qblob",
    version,
    about = "Gaussian states as phase-space ellipsoids"
)]
pub struct Cli {
    /// Reduced Planck constant; overrides any value in the input file.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub hbar: Option<f64>,

    /// Append M boundary points of each 2-D ellipse or conjugate-plane section.
    #[arg(long = "emit-boundary", value_name = "M", global = true)]
    pub emit_boundary: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Repr {
    State,
    Fermi,
    Blob,
    Micro,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert between state, Fermi ellipsoid, quantum blob and microlocal pair.
    Convert {
        #[arg(long, value_enum)]
        from: Repr,
        #[arg(long, value_enum)]
        to: Repr,
        input: PathBuf,
    },
    /// Capacity report for a state (Fermi ellipsoid and blob) or an ellipsoid.
    Capacity { input: PathBuf },
    /// First K Ekeland-Hofer capacities with (N, j) provenance.
    Eh {
        #[arg(long, default_value_t = 4)]
        k: usize,
        input: PathBuf,
    },
    /// Quantum condition report for a covariance matrix.
    Check { input: PathBuf },
    /// CSV of the Wigner function of an n = 1 state on [-W, W]^2.
    Wigner {
        /// `W:N`, half-width and points per axis.
        #[arg(long, value_name = "W:N")]
        grid: String,
        input: PathBuf,
    },
    /// Pre-Iwasawa factors of a symplectic matrix.
    Iwasawa { input: PathBuf },
    /// Brute-force oracle agreement reports for a state.
    Oracle {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        input: PathBuf,
    },
}
