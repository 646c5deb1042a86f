use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use thinsort::bench::{
    bounds_report, default_sizes, fit_records, parse_methods, read_csv, run_plan, sweep_s,
    write_csv, write_sweep, BenchError, MethodSpec, RunPlan, SweepConfig, TrialRecord,
    DEFAULT_METHODS, DEFAULT_TRIALS,
};
use thinsort::generators::GeneratorKind;
use thinsort::pivot::TBfprtMode;
use thinsort::sort::Strategy;

#[derive(Parser)]
#[command(
    name = "thinsort",
    version,
    about = "Comparison-counting quicksort laboratory with stride-sampled pivot selectors"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct MeasureArgs {
    /// Comma-separated input sizes
    #[arg(long, value_delimiter = ',', default_values_t = default_sizes())]
    sizes: Vec<usize>,
    /// Trials per method and size
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Master seed; every trial derives its own seed from it
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Input family: random, ascending, descending or adversary
    #[arg(long, default_value = "random")]
    generator: GeneratorKind,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Median-of-three pivots on subranges smaller than the sampling window
    #[arg(long)]
    adaptive_small: bool,
    /// t-bfprt: take the exact median of the sample, not its median of medians
    #[arg(long)]
    bfprt_full_median: bool,
    /// t-bfprt: select on the strided positions in place instead of a copy
    #[arg(long)]
    bfprt_in_place: bool,
}

impl MeasureArgs {
    fn tbfprt_mode(&self) -> TBfprtMode {
        TBfprtMode { full_median: self.bfprt_full_median, in_place: self.bfprt_in_place }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Sort seeded inputs under each method, one CSV row per trial
    Run {
        /// Comma-separated methods, each `name` or `name:s`
        #[arg(long, default_value = DEFAULT_METHODS)]
        methods: String,
        #[command(flatten)]
        measure: MeasureArgs,
    },
    /// Read a run's CSV and fit a*n*ln(n) + b*n per method
    Fit {
        /// CSV produced by `run`
        csv: PathBuf,
        /// Only fit this method (`name` or `name:s`)
        #[arg(long)]
        method: Option<MethodSpec>,
    },
    /// Re-measure one thinned strategy across several thinning values
    SweepS {
        /// t-bfprt or t-pmed3l
        #[arg(long, default_value = "t-bfprt")]
        strategy: Strategy,
        /// Comma-separated thinning values
        #[arg(long, value_delimiter = ',', default_values_t = vec![1usize, 5, 10, 20, 40])]
        s_values: Vec<usize>,
        #[command(flatten)]
        measure: MeasureArgs,
    },
    /// Print closed-form coefficient bounds for a thinned strategy
    Bounds {
        /// t-bfprt or t-pmed3l
        #[arg(long, default_value = "t-bfprt")]
        strategy: Strategy,
        /// Thinning parameter
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Per-level selection cost coefficient at s = 1
        #[arg(long, default_value_t = 0.0)]
        c1: f64,
        /// Input size for the selection overhead estimate
        #[arg(long, default_value_t = 1e6)]
        n: f64,
    },
}

fn open_out(out: &Option<PathBuf>) -> Result<Box<dyn Write>, BenchError> {
    Ok(match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_run(methods: &str, measure: &MeasureArgs) -> Result<(), BenchError> {
    let plan = RunPlan {
        methods: parse_methods(methods)?,
        sizes: measure.sizes.clone(),
        trials: measure.trials,
        master_seed: measure.seed,
        generator: measure.generator,
        adaptive_small: measure.adaptive_small,
        tbfprt_mode: measure.tbfprt_mode(),
    };
    let records = run_plan(&plan)?;
    write_csv(open_out(&measure.out)?, &records)
}

fn cmd_fit(csv: &Path, method: Option<MethodSpec>) -> Result<(), BenchError> {
    let records = read_csv(File::open(csv)?)?;
    let records: Vec<TrialRecord> = match method {
        Some(m) => records
            .into_iter()
            .filter(|r| r.method == m.strategy && r.s as usize == m.s)
            .collect(),
        None => records,
    };
    if records.is_empty() {
        return Err(BenchError::InsufficientData("no matching records in the CSV".into()));
    }
    let fits = fit_records(&records)?;
    for f in &fits {
        if f.distinct_sizes < 3 {
            return Err(BenchError::InsufficientData(format!(
                "method '{}' covers {} distinct sizes, need at least 3 to fit",
                f.method, f.distinct_sizes
            )));
        }
    }
    let mut out = io::stdout().lock();
    writeln!(out, "method,s,sizes,a,b,a_stderr,b_stderr,residual_rms")?;
    for f in &fits {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            f.method.strategy,
            f.method.s,
            f.distinct_sizes,
            f.fit.a,
            f.fit.b,
            f.fit.a_stderr,
            f.fit.b_stderr,
            f.fit.residual_rms
        )?;
    }
    Ok(())
}

fn cmd_sweep(
    strategy: Strategy,
    s_values: Vec<usize>,
    measure: &MeasureArgs,
) -> Result<(), BenchError> {
    let mut distinct = measure.sizes.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(BenchError::InsufficientData(format!(
            "sweep needs at least 3 distinct sizes, got {}",
            distinct.len()
        )));
    }
    let cfg = SweepConfig {
        strategy,
        s_values,
        sizes: measure.sizes.clone(),
        trials: measure.trials,
        master_seed: measure.seed,
        generator: measure.generator,
        adaptive_small: measure.adaptive_small,
        tbfprt_mode: measure.tbfprt_mode(),
    };
    let points = sweep_s(&cfg)?;
    write_sweep(open_out(&measure.out)?, &points)
}

fn cmd_bounds(strategy: Strategy, s: usize, c1: f64, n: f64) -> Result<(), BenchError> {
    if !(n >= 2.0) {
        return Err(BenchError::InvalidPlan(format!("n must be at least 2, got {}", n)));
    }
    let report = bounds_report(strategy, s, c1, n)?;
    writeln!(io::stdout().lock(), "{}", report)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.cmd {
        Cmd::Run { methods, measure } => cmd_run(&methods, &measure),
        Cmd::Fit { csv, method } => cmd_fit(&csv, method),
        Cmd::SweepS { strategy, s_values, measure } => cmd_sweep(strategy, s_values, &measure),
        Cmd::Bounds { strategy, s, c1, n } => cmd_bounds(strategy, s, c1, n),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
