//! Benchmark CLI: run seeded Monte Carlo experiments for the selection and
//! retrieval algorithms, sweep parameter grids, and run the fault-free
//! exactness gate.
//!
//! Exit codes: 0 success, 1 acceptance/verification failure, 2 invalid
//! configuration.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use noisy_select::ftmin_fast::CoreMode;
use noisy_select::harness::{
    run_trials, sweep, verify_exactness, write_run_csv, write_run_json, write_sweep_csv,
    write_sweep_json, Algorithm, ExperimentConfig, ReportFormat, SweepGrid, VerifyOutcome,
    VERIFY_SEEDS, VERIFY_SIZES,
};
use noisy_select::ProfileKind;

#[derive(Debug, Parser)]
#[command(
    name = "noisy-select",
    about = "Fault-tolerant selection under unreliable comparisons: Monte Carlo experiment driver",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment cell and emit per-trial reports.
    Run(RunArgs),
    /// Run a grid of cells and emit one summary row per cell.
    Sweep(SweepArgs),
    /// Fault-free exactness gate over every algorithm.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    FindMin,
    Tournament,
    TruncatedTournament,
    FindOneDense,
    FindOne,
    ReductionTournament,
    FtminFastDense,
    Ftmin,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Algorithm {
        match a {
            AlgoArg::FindMin => Algorithm::FindMin,
            AlgoArg::Tournament => Algorithm::Tournament,
            AlgoArg::TruncatedTournament => Algorithm::TruncatedTournament,
            AlgoArg::FindOneDense => Algorithm::FindOneDense,
            AlgoArg::FindOne => Algorithm::FindOne,
            AlgoArg::ReductionTournament => Algorithm::ReductionTournament,
            AlgoArg::FtminFastDense => Algorithm::FtminFastDense,
            AlgoArg::Ftmin => Algorithm::Ftmin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProfileArg {
    Paper,
    Practical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CoreArg {
    Tournament,
    Fast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Algorithm to run.
    #[arg(long, value_enum)]
    algo: AlgoArg,
    /// Fault probability per comparison/query (0 <= p < 1/2).
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// Failure budget for find-min.
    #[arg(long, default_value_t = 0.1)]
    q: f64,
    /// Trials per cell.
    #[arg(long, default_value_t = 100)]
    trials: u32,
    /// Master seed; falls back to NOISY_SELECT_SEED, then 0.
    #[arg(long, env = "NOISY_SELECT_SEED", default_value_t = 0)]
    seed: u64,
    /// Constants profile.
    #[arg(long, value_enum, default_value_t = ProfileArg::Paper)]
    profile: ProfileArg,
    /// Candidate-set multiplier override (practical profile only).
    #[arg(long)]
    gamma: Option<f64>,
    /// Repetition-count scale in (0, 1] (practical profile only).
    #[arg(long = "rep-scale")]
    rep_scale: Option<f64>,
    /// Tournament match-length growth base.
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Truncated-tournament rounds (defaults to ceil(log2 log2 N)).
    #[arg(long = "i-max")]
    i_max: Option<u32>,
    /// Dense core for the full pipeline.
    #[arg(long, value_enum, default_value_t = CoreArg::Fast)]
    core: CoreArg,
    /// Record wall time per trial (makes output non-reproducible).
    #[arg(long, default_value_t = false)]
    timing: bool,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of elements.
    #[arg(long)]
    n: usize,
    /// Target rank threshold (defaults: 1 for find-min, 3n/4 for dense
    /// algorithms; required otherwise).
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated element counts.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Comma-separated target thresholds.
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    /// Comma-separated fault probabilities (defaults to the common --p).
    #[arg(long = "ps", value_delimiter = ',')]
    ps: Option<Vec<f64>>,
}

fn config_from(common: &CommonArgs, n: usize, k: Option<usize>) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(common.algo.into(), n);
    cfg.k = k;
    cfg.p = common.p;
    cfg.q = common.q;
    cfg.trials = common.trials;
    cfg.seed = common.seed;
    cfg.profile = match common.profile {
        ProfileArg::Paper => ProfileKind::PaperFaithful,
        ProfileArg::Practical => ProfileKind::Practical,
    };
    cfg.gamma = common.gamma;
    cfg.repetition_scale = common.rep_scale;
    cfg.alpha = common.alpha;
    cfg.i_max = common.i_max;
    cfg.core = match common.core {
        CoreArg::Tournament => CoreMode::WorstCase,
        CoreArg::Fast => CoreMode::Expected,
    };
    cfg.timing = common.timing;
    cfg
}

fn open_output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout()),
    })
}

fn format_of(args: &CommonArgs) -> ReportFormat {
    match args.format {
        FormatArg::Csv => ReportFormat::Csv,
        FormatArg::Json => ReportFormat::Json,
    }
}

fn run_command(args: &RunArgs) -> noisy_select::Result<()> {
    let cfg = config_from(&args.common, args.n, args.k);
    cfg.validate()?;
    let (trials, summary) = run_trials(&cfg)?;
    let mut out = open_output(&args.common.out)?;
    match format_of(&args.common) {
        ReportFormat::Csv => write_run_csv(&mut out, &cfg, &trials, &summary)?,
        ReportFormat::Json => write_run_json(&mut out, &cfg, &trials, &summary)?,
    }
    eprintln!(
        "{}: n={} k={} p={} trials={} success_rate={:.4} mean_comparisons={:.1} mean_queries={:.1}",
        summary.algorithm,
        summary.n,
        summary.k,
        summary.p,
        summary.trials,
        summary.success_rate,
        summary.mean_comparisons,
        summary.mean_queries
    );
    Ok(())
}

fn sweep_command(args: &SweepArgs) -> noisy_select::Result<()> {
    let base = config_from(&args.common, args.n.first().copied().unwrap_or(0), None);
    let grid = SweepGrid {
        ns: args.n.clone(),
        ks: args.k.clone(),
        ps: args.ps.clone().unwrap_or_else(|| vec![args.common.p]),
    };
    let rows = sweep(&base, &grid)?;
    let mut out = open_output(&args.common.out)?;
    match format_of(&args.common) {
        ReportFormat::Csv => write_sweep_csv(&mut out, &base, &rows)?,
        ReportFormat::Json => write_sweep_json(&mut out, &base, &rows)?,
    }
    for r in &rows {
        eprintln!(
            "{}: n={} k={} p={} success_rate={:.4} ci=[{:.4},{:.4}] mean_comparisons={:.1} reference={:.1}",
            r.algorithm, r.n, r.k, r.p, r.success_rate, r.ci_low, r.ci_high,
            r.mean_comparisons, r.reference
        );
    }
    Ok(())
}

fn verify_command() -> noisy_select::Result<bool> {
    println!(
        "exactness gate: {} algorithms x sizes {:?} x {} seeds at p = 0",
        Algorithm::ALL.len(),
        VERIFY_SIZES,
        VERIFY_SEEDS
    );
    match verify_exactness()? {
        VerifyOutcome::Pass { cases } => {
            println!("PASS verify: {cases} cases exact");
            Ok(true)
        }
        VerifyOutcome::Fail(f) => {
            println!(
                "FAIL verify: algorithm={} n={} seed={}: {}",
                f.algorithm, f.n, f.seed, f.detail
            );
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run_command(args).map(|()| true),
        Command::Sweep(args) => sweep_command(args).map(|()| true),
        Command::Verify => verify_command(),
    };
    match result {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
