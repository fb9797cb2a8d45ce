use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qcp", version, about = "Complete-positivity checks for diagonal affine qudit maps")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub output: OutputFormat,

    /// Verdict tolerance: margins within ±tol are reported as boundary.
    #[arg(long, env = "QCP_TOLERANCE", default_value_t = 1e-9, global = true)]
    pub tolerance: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Qft,
    Choi,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a channel or state file against its constraints.
    Validate {
        file: PathBuf,
    },
    /// Decide complete positivity of a channel.
    CheckCp(CheckCpArgs),
    /// Choi spectrum of a channel, or the channel of a spectrum with --invert.
    ChoiSpectrum {
        file: PathBuf,
        /// Read a spectrum file ({d, n, mu}) and emit the unital channel with that μ-vector.
        #[arg(long)]
        invert: bool,
    },
    /// Kraus operators of a CP channel.
    Kraus {
        file: PathBuf,
    },
    /// Apply a channel to a state.
    Apply {
        channel: PathBuf,
        state: PathBuf,
    },
    /// CP interval of the depolarizing parameter.
    DepolarizingRange {
        #[arg(long)]
        d: usize,
    },
    /// Fidelity of the best depolarizing approximation to the universal NOT.
    UnotFidelity {
        #[arg(long)]
        d: usize,
    },
    /// Test the sufficient displacement bound ‖c‖ ≤ μ_min.
    SufficientC {
        file: PathBuf,
    },
    /// Largest t keeping λ + t·direction CP.
    RayScan {
        channel: PathBuf,
        /// JSON file holding the direction as [[re, im], ...] or {"direction": [...]}.
        #[arg(long)]
        direction: PathBuf,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, required = true)]
        bracket: Vec<f64>,
    },
}

#[derive(Debug, Args)]
pub struct CheckCpArgs {
    /// Channel file. Omit to use --depolarizing.
    #[arg(required_unless_present = "depolarizing", conflicts_with = "depolarizing")]
    pub file: Option<PathBuf>,

    /// Depolarizing parameter p of E(ρ) = pρ + (1 − p)I/d.
    #[arg(long, allow_negative_numbers = true, requires = "d")]
    pub depolarizing: Option<f64>,

    #[arg(long)]
    pub d: Option<usize>,

    #[arg(long, default_value_t = 1)]
    pub n: usize,

    /// Test to run. Defaults to qft for unital maps and choi otherwise.
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
}
