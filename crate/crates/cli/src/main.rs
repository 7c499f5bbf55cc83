//! `qsparse` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 input or numerical error,
//! 3 work budget or time limit exceeded.

mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DATA: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "qsparse", version, about = "Sparse qubit-state analysis: encoding, partial traces, entropies")]
pub struct Cli {
    /// Worker threads; defaults to all available cores.
    #[arg(long, global = true, env = "QSPARSE_THREADS")]
    pub threads: Option<usize>,

    /// Report entropies and mutual information in bits instead of nats.
    #[arg(long, global = true)]
    pub bits: bool,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Encode a fermionic wavefunction into a qubit state.
    Encode(EncodeArgs),
    /// Reduced density matrix of a qubit subset.
    Trace(TraceArgs),
    /// Pairwise mutual-information matrix.
    Mi(MiArgs),
    /// Entropy of growing active spaces.
    Sweep(SweepArgs),
    /// Expectation value of a Pauli-sum observable.
    Expect(ExpectArgs),
    /// One-body reduced density matrix and natural occupations.
    Rdm(RdmArgs),
    /// Time the direct and quadratic traces on synthetic states.
    Bench(BenchArgs),
    /// Write a built-in or custom mapping as a Majorana string file.
    ConvertMapping(ConvertMappingArgs),
}

#[derive(Args, Debug)]
pub struct EncodeArgs {
    /// Wavefunction file (text or binary).
    pub input: PathBuf,
    /// Mapping name (jw, parity) or path to a mapping file.
    #[arg(long, default_value = "jw")]
    pub mapping: String,
    /// Re-express the wavefunction relative to its reference determinant first.
    #[arg(long)]
    pub particle_hole: bool,
    /// Reference determinant; defaults to the file's reference, then the leading determinant.
    #[arg(long, requires = "particle_hole")]
    pub reference: Option<String>,
    /// Keep the product form instead of expanding to computational basis labels.
    #[arg(long)]
    pub general: bool,
    /// Write the binary state format.
    #[arg(long, conflicts_with = "general", requires = "out")]
    pub binary: bool,
    /// Largest admissible number of expanded terms.
    #[arg(long, default_value_t = 1 << 24)]
    pub cap: u64,
    /// Output path; the state goes to stdout when omitted.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TraceMethodArg {
    /// Hash-table registers over basis labels.
    Direct,
    /// Ordered-tree registers over basis labels.
    Ordered,
    /// Hash registers keyed by the positions of the ones.
    Ones,
    /// Pairwise product-form contraction.
    Quadratic,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    /// Qubit state file.
    pub input: PathBuf,
    /// Kept qubits, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub keep: Vec<usize>,
    #[arg(long, value_enum, default_value = "direct")]
    pub method: TraceMethodArg,
    /// Pair-operation budget of the quadratic method.
    #[arg(long, default_value_t = qsparse::trace::DEFAULT_WORK_BUDGET)]
    pub budget: f64,
    /// Largest admissible expansion of a product-form input.
    #[arg(long, default_value_t = 1 << 24)]
    pub cap: u64,
    /// Write the binary matrix format.
    #[arg(long, requires = "out")]
    pub binary: bool,
    /// Output path for the matrix; only the summary is printed when omitted.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct MiArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,
    #[arg(long, default_value_t = 1 << 24)]
    pub cap: u64,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    /// Write an SVG heatmap.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepMethodArg {
    Fermi,
    Noon,
    MaxEntropy,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderingArg {
    Interleaved,
    Blocked,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "max-entropy")]
    pub method: SweepMethodArg,
    /// Active-space sizes; defaults to 1..=N (even sizes only for noon).
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Electron count for the fermi method; defaults to the state header.
    #[arg(long)]
    pub electrons: Option<usize>,
    /// Spatial natural occupations for the noon method.
    #[arg(long)]
    pub occupations: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "interleaved")]
    pub ordering: OrderingArg,
    #[arg(long, value_enum, default_value = "json")]
    pub format: TableFormat,
    #[arg(long, default_value_t = 1 << 24)]
    pub cap: u64,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    /// Write an SVG line plot.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExpectArgs {
    pub input: PathBuf,
    /// Pauli-sum file.
    #[arg(long)]
    pub observable: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PairingArg {
    Paired,
    SpinOrbital,
}

#[derive(Args, Debug)]
pub struct RdmArgs {
    pub input: PathBuf,
    /// Mapping name or file; defaults to the state header, then jw.
    #[arg(long)]
    pub mapping: Option<String>,
    #[arg(long, value_enum, default_value = "paired")]
    pub pairing: PairingArg,
    #[arg(long, default_value_t = 1 << 24)]
    pub cap: u64,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchMethodArg {
    Direct,
    Quadratic,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegisterArg {
    Hashed,
    Ordered,
    Ones,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Benchmark family; only the synthetic hydrogen-chain-like family is built in.
    #[arg(long, default_value = "hydrogen-chain-synthetic")]
    pub family: String,
    #[arg(long, value_delimiter = ',', default_values_t = [2000, 4000, 8000, 16000, 32000])]
    pub chi: Vec<usize>,
    #[arg(long = "n", value_delimiter = ',', default_values_t = [40, 80])]
    pub num_qubits: Vec<usize>,
    #[arg(long, value_enum, default_value = "both")]
    pub method: BenchMethodArg,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    /// Number of kept qubits.
    #[arg(long, default_value_t = 1)]
    pub kept: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = qsparse::trace::DEFAULT_WORK_BUDGET)]
    pub budget: f64,
    /// Per-configuration time limit in seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
    #[arg(long, value_enum, default_value = "hashed")]
    pub register: RegisterArg,
    /// JSON file with all records and fits.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// SVG log-log plot of time against χ.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConvertMappingArgs {
    /// Built-in name (jw, parity) or a mapping file to validate and rewrite.
    pub source: String,
    /// Number of modes for a built-in mapping.
    #[arg(long)]
    pub modes: Option<usize>,
    /// Also print the Hamming distances of each Majorana pair.
    #[arg(long)]
    pub distances: bool,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

/// Errors caused by inconsistent arguments rather than bad data.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Signals that a command finished but hit its budget somewhere.
#[derive(Debug)]
pub struct BudgetExhausted(pub String);

impl std::fmt::Display for BudgetExhausted {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BudgetExhausted {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    if err.downcast_ref::<BudgetExhausted>().is_some() {
        return EXIT_BUDGET;
    }
    match err.downcast_ref::<qsparse::Error>() {
        Some(e) if e.is_budget() => EXIT_BUDGET,
        _ => EXIT_DATA,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };

    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            log::warn!("thread pool already configured: {e}");
        }
    }

    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
