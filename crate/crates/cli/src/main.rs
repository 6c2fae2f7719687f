//! `switchlab`: lemma checks, codec round-trips, parameter sweeps, sampling
//! and enumeration of restriction distributions.
//!
//! Exit codes: 0 success, 1 a requested check failed, 2 bad input.

mod commands;
mod instance;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "switchlab", version, about = "Switching-lemma verification toolkit")]
struct Cli {
    /// Worker thread cap (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Lift the enumeration size guards.
    #[arg(long, global = true)]
    unsafe_sizes: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare |S| against a lemma's bounds; prints a JSON report.
    Check(CheckArgs),
    /// Exhaustive encode/decode sweep over one formula or a built-in corpus.
    Roundtrip(RoundtripArgs),
    /// CSV over a grid of p, q and s values.
    Sweep(SweepArgs),
    /// Draw restrictions from a distribution; CSV.
    Sample(SampleArgs),
    /// List every restriction with its exact weight; CSV.
    Enumerate(EnumerateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Sample,
}

#[derive(Args, Debug, Clone)]
pub struct InstanceArgs {
    /// Lemma: 1 independent, 2 block, 3 pigeonhole.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub lemma: u8,

    /// Formula file (`dnf n r` or `php n` header).
    #[arg(long)]
    pub dnf: Option<PathBuf>,

    /// Block structure file; defaults to singleton blocks.
    #[arg(long)]
    pub blocks: Option<PathBuf>,

    /// Pigeonhole reply-index limit: `none`, `regime` or an integer.
    #[arg(long, default_value = "none")]
    pub index_limit: String,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub inst: InstanceArgs,

    /// Star probability, as a/b.
    #[arg(long)]
    pub p: Option<String>,

    /// Block-star or hole-unset probability, as a/b.
    #[arg(long)]
    pub q: Option<String>,

    /// Depth threshold; comma-separated for several checks.
    #[arg(long, value_delimiter = ',', required = true)]
    pub s: Vec<usize>,

    #[arg(long, value_enum, default_value = "exact")]
    pub mode: ModeArg,

    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct RoundtripArgs {
    #[command(flatten)]
    pub inst: InstanceArgs,

    /// Universe size (holes for lemma 3) of the built-in corpus, used when
    /// no --dnf is given.
    #[arg(long)]
    pub n: Option<usize>,

    /// Term width of corpus formulas.
    #[arg(long, default_value_t = 2)]
    pub r: usize,

    /// Maximum terms per corpus formula (default depends on n).
    #[arg(long)]
    pub terms: Option<usize>,

    /// Random extra corpus formulas for lemma 3 at n >= 3.
    #[arg(long, default_value_t = 500)]
    pub random: usize,

    #[arg(long, default_value = "1/16")]
    pub p: String,

    #[arg(long, default_value = "1/16")]
    pub q: String,

    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub s: Vec<usize>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Damage every witness before decoding (fault injection).
    #[arg(long, hide = true)]
    pub corrupt_witness: bool,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub inst: InstanceArgs,

    /// Comma-separated rationals.
    #[arg(long, default_value = "")]
    pub p: String,

    #[arg(long, default_value = "")]
    pub q: String,

    /// Comma-separated depths.
    #[arg(long, default_value = "")]
    pub s: String,

    #[arg(long, value_enum, default_value = "exact")]
    pub mode: ModeArg,

    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct DistArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub lemma: u8,

    /// Universe size (holes for lemma 3); taken from --dnf or --blocks if given.
    #[arg(long)]
    pub n: Option<usize>,

    #[arg(long)]
    pub dnf: Option<PathBuf>,

    #[arg(long)]
    pub blocks: Option<PathBuf>,

    #[arg(long)]
    pub p: Option<String>,

    #[arg(long)]
    pub q: Option<String>,

    /// With --dnf, adds a column telling whether the tree has height >= s.
    #[arg(long)]
    pub s: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub dist: DistArgs,

    #[arg(long, default_value_t = 10)]
    pub count: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub dist: DistArgs,
}

/// Errors that map to exit code 2.
#[derive(Debug)]
pub struct InputError(pub anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let unsafe_sizes = cli.unsafe_sizes;
    let result = match &cli.command {
        Command::Check(a) => commands::check(a, unsafe_sizes),
        Command::Roundtrip(a) => commands::roundtrip(a, unsafe_sizes),
        Command::Sweep(a) => commands::sweep(a, unsafe_sizes),
        Command::Sample(a) => commands::sample(a),
        Command::Enumerate(a) => commands::enumerate(a, unsafe_sizes),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
