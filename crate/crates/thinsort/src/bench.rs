//! Measurement orchestration: expand a run plan into trials, execute them in
//! parallel with per-trial seeds, and turn the records into CSV, fits and
//! sweeps.

use crate::analysis::{
    fit_nlnn, pmed3l_best_coeff, pmed3l_depth_estimate, tbfprt_worst_coeff_lower,
    tbfprt_worst_coeff_upper, AnalysisError, FitResult,
};
use crate::generators::{generate, GeneratorError, GeneratorKind, GeneratorSpec};
use crate::pivot::TBfprtMode;
use crate::sort::{quicksort, SortConfig, Strategy};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io;
use std::str::FromStr;
use thiserror::Error;

pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_METHODS: &str = "rand,med3,pmed9,t-bfprt:1,t-bfprt:40,t-pmed3l:3,t-pmed3l:40";

/// Powers of two from 2^10 through 2^20.
pub fn default_sizes() -> Vec<usize> {
    (10..=20).map(|e| 1usize << e).collect()
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    InvalidPlan(String),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{0}")]
    InsufficientData(String),
}

impl BenchError {
    /// Process exit code for this failure: 1 for a bad request, 2 for I/O,
    /// 3 for data too thin to analyze.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::InvalidPlan(_) | BenchError::Generator(_) => 1,
            BenchError::Io(_) | BenchError::Csv(_) => 2,
            BenchError::Analysis(_) | BenchError::InsufficientData(_) => 3,
        }
    }
}

/// One pivot strategy plus its thinning parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MethodSpec {
    pub strategy: Strategy,
    pub s: usize,
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.strategy.uses_s() {
            write!(f, "{}:{}", self.strategy, self.s)
        } else {
            write!(f, "{}", self.strategy)
        }
    }
}

impl FromStr for MethodSpec {
    type Err = String;

    /// Accepts `name` or `name:s`, e.g. `med3`, `t-bfprt:40`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (name, s) = match text.split_once(':') {
            None => (text, None),
            Some((name, s_text)) => {
                let s: usize = s_text
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad thinning parameter '{}' in '{}'", s_text, text))?;
                (name, Some(s))
            }
        };
        let strategy: Strategy = name.trim().parse()?;
        match s {
            Some(0) => Err(format!("thinning parameter must be at least 1 in '{}'", text)),
            Some(s) if !strategy.uses_s() => Err(format!(
                "strategy '{}' takes no thinning parameter (got '{}:{}')",
                strategy, strategy, s
            )),
            Some(s) => Ok(MethodSpec { strategy, s }),
            None => Ok(MethodSpec { strategy, s: 1 }),
        }
    }
}

/// Parses a comma-separated method list such as
/// `"rand,med3,t-bfprt:1,t-bfprt:40"`.
pub fn parse_methods(text: &str) -> Result<Vec<MethodSpec>, BenchError> {
    let methods: Vec<MethodSpec> = text
        .split(',')
        .map(|part| part.trim().parse::<MethodSpec>())
        .collect::<Result<_, _>>()
        .map_err(BenchError::InvalidPlan)?;
    if methods.is_empty() {
        return Err(BenchError::InvalidPlan("empty method list".into()));
    }
    Ok(methods)
}

/// A full measurement matrix: every method crossed with every size, `trials`
/// times each.
#[derive(Clone, Debug)]
pub struct RunPlan {
    pub methods: Vec<MethodSpec>,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    pub generator: GeneratorKind,
    pub adaptive_small: bool,
    pub tbfprt_mode: TBfprtMode,
}

impl RunPlan {
    pub fn new(methods: Vec<MethodSpec>, sizes: Vec<usize>, trials: usize, seed: u64) -> Self {
        RunPlan {
            methods,
            sizes,
            trials,
            master_seed: seed,
            generator: GeneratorKind::RandomDistinct,
            adaptive_small: false,
            tbfprt_mode: TBfprtMode::default(),
        }
    }
}

/// One measured sort. Field order is the CSV column order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub method: Strategy,
    pub s: u64,
    pub n: u64,
    pub trial: u64,
    pub seed: u64,
    pub comparisons: u64,
    pub swaps: u64,
    pub max_depth: u64,
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable per-trial seed: a hash chain over the master seed and the trial
/// coordinates, so any single trial can be reproduced without replaying the
/// plan and no two cells share an input.
pub fn trial_seed(master: u64, strategy: Strategy, s: usize, n: usize, trial: usize) -> u64 {
    let mut h = mix(master ^ 0x9e37_79b9_7f4a_7c15);
    for b in strategy.name().bytes() {
        h = mix(h ^ u64::from(b));
    }
    for part in [s as u64, n as u64, trial as u64] {
        h = mix(h ^ part);
    }
    h
}

const ENGINE_SALT: u64 = 0x5EED_00D5_EED0_0D5E;

fn validate_plan(plan: &RunPlan) -> Result<(), BenchError> {
    let err = |msg: String| Err(BenchError::InvalidPlan(msg));
    if plan.methods.is_empty() {
        return err("no methods to run".into());
    }
    if plan.sizes.is_empty() {
        return err("no input sizes to run".into());
    }
    if plan.trials == 0 {
        return err("trials must be at least 1".into());
    }
    if let Some(&n) = plan.sizes.iter().find(|&&n| n < 2) {
        return err(format!("input size {} is below the minimum of 2", n));
    }
    for m in &plan.methods {
        if m.s < 1 {
            return err(format!("method '{}' has thinning parameter 0", m.strategy));
        }
        if plan.generator == GeneratorKind::TBfprtAdversary {
            if m.s < 2 {
                return err(format!(
                    "adversarial inputs are built for s >= 2; method '{}' has s = {}",
                    m, m.s
                ));
            }
            if let Some(&n) = plan.sizes.iter().find(|&&n| n < 5 * m.s) {
                return err(format!(
                    "adversarial inputs need n >= 5*s; size {} is too small for '{}'",
                    n, m
                ));
            }
        }
    }
    Ok(())
}

fn run_trial(plan: &RunPlan, m: MethodSpec, n: usize, trial: usize) -> TrialRecord {
    let seed = trial_seed(plan.master_seed, m.strategy, m.s, n, trial);
    let spec = GeneratorSpec { kind: plan.generator, n, s: m.s, seed };
    let mut data = generate(&spec).expect("plan validation admits every generated input");
    // The engine draws pivots from a seed derived from the input seed, so the
    // two ChaCha streams never coincide.
    let mut cfg = SortConfig::new(m.strategy, m.s, mix(seed ^ ENGINE_SALT));
    cfg.adaptive_small = plan.adaptive_small;
    cfg.tbfprt_mode = plan.tbfprt_mode;
    let c = quicksort(&mut data, &cfg);
    assert!(data.windows(2).all(|w| w[0] <= w[1]), "sort postcondition violated");
    TrialRecord {
        method: m.strategy,
        s: m.s as u64,
        n: n as u64,
        trial: trial as u64,
        seed,
        comparisons: c.comparisons(),
        swaps: c.swaps,
        max_depth: c.max_depth,
    }
}

/// Runs the whole matrix. Trials execute in parallel but the returned order
/// and every count are independent of thread scheduling: row order is
/// method-major, then size, then trial.
pub fn run_plan(plan: &RunPlan) -> Result<Vec<TrialRecord>, BenchError> {
    validate_plan(plan)?;
    let mut jobs = Vec::new();
    for &m in &plan.methods {
        for &n in &plan.sizes {
            for trial in 0..plan.trials {
                jobs.push((m, n, trial));
            }
        }
    }
    Ok(jobs.par_iter().map(|&(m, n, trial)| run_trial(plan, m, n, trial)).collect())
}

pub fn write_csv<W: io::Write>(w: W, records: &[TrialRecord]) -> Result<(), BenchError> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in records {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(r: R) -> Result<Vec<TrialRecord>, BenchError> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for rec in rdr.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}

/// Per-method fit of mean comparisons against `a*n*ln(n) + b*n`.
#[derive(Clone, Copy, Debug)]
pub struct MethodFit {
    pub method: MethodSpec,
    pub distinct_sizes: usize,
    pub fit: FitResult,
}

/// Groups records by method, averages comparisons per size, and fits each
/// group. Groups come back in first-appearance order.
pub fn fit_records(records: &[TrialRecord]) -> Result<Vec<MethodFit>, BenchError> {
    if records.is_empty() {
        return Err(BenchError::InsufficientData("no records to fit".into()));
    }
    let mut order: Vec<(Strategy, usize)> = Vec::new();
    let mut groups: HashMap<(Strategy, usize), BTreeMap<u64, (f64, u64)>> = HashMap::new();
    for r in records {
        let key = (r.method, r.s as usize);
        if !groups.contains_key(&key) {
            order.push(key);
        }
        let cell = groups.entry(key).or_default().entry(r.n).or_insert((0.0, 0));
        cell.0 += r.comparisons as f64;
        cell.1 += 1;
    }
    let mut out = Vec::new();
    for (strategy, s) in order {
        let points: Vec<(f64, f64)> = groups[&(strategy, s)]
            .iter()
            .map(|(&n, &(sum, count))| (n as f64, sum / count as f64))
            .collect();
        let fit = fit_nlnn(&points)?;
        out.push(MethodFit {
            method: MethodSpec { strategy, s },
            distinct_sizes: points.len(),
            fit,
        });
    }
    Ok(out)
}

/// Sweep of the thinning parameter for one strategy.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub strategy: Strategy,
    pub s_values: Vec<usize>,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    pub generator: GeneratorKind,
    pub adaptive_small: bool,
    pub tbfprt_mode: TBfprtMode,
}

#[derive(Clone, Copy, Debug)]
pub struct SweepPoint {
    pub s: usize,
    pub a: f64,
    pub b: f64,
    pub a_stderr: f64,
    pub b_stderr: f64,
}

pub fn sweep_s(cfg: &SweepConfig) -> Result<Vec<SweepPoint>, BenchError> {
    if !cfg.strategy.uses_s() {
        return Err(BenchError::InvalidPlan(format!(
            "strategy '{}' ignores the thinning parameter; sweep one of t-bfprt, t-pmed3l",
            cfg.strategy
        )));
    }
    if cfg.s_values.is_empty() {
        return Err(BenchError::InvalidPlan("no thinning values to sweep".into()));
    }
    let mut out = Vec::new();
    for &s in &cfg.s_values {
        let plan = RunPlan {
            methods: vec![MethodSpec { strategy: cfg.strategy, s }],
            sizes: cfg.sizes.clone(),
            trials: cfg.trials,
            master_seed: cfg.master_seed,
            generator: cfg.generator,
            adaptive_small: cfg.adaptive_small,
            tbfprt_mode: cfg.tbfprt_mode,
        };
        let fits = fit_records(&run_plan(&plan)?)?;
        let f = fits[0].fit;
        out.push(SweepPoint { s, a: f.a, b: f.b, a_stderr: f.a_stderr, b_stderr: f.b_stderr });
    }
    Ok(out)
}

pub fn write_sweep<W: io::Write>(mut w: W, points: &[SweepPoint]) -> Result<(), BenchError> {
    writeln!(w, "# a approaches 1/ln(2) = {} from above as s grows", std::f64::consts::LOG2_E)?;
    writeln!(w, "s,a,b,a_stderr,b_stderr")?;
    for p in points {
        writeln!(w, "{},{},{},{},{}", p.s, p.a, p.b, p.a_stderr, p.b_stderr)?;
    }
    Ok(())
}

/// Closed-form coefficient bounds for the two thinned strategies.
#[derive(Clone, Copy, Debug)]
pub enum BoundsReport {
    TBfprt { s: usize, c1: f64, upper: f64, lower: f64 },
    TPMed3L { s: usize, n: f64, best_coeff: f64, depth_estimate: f64 },
}

pub fn bounds_report(
    strategy: Strategy,
    s: usize,
    c1: f64,
    n: f64,
) -> Result<BoundsReport, BenchError> {
    if s < 1 {
        return Err(BenchError::InvalidPlan("thinning parameter must be at least 1".into()));
    }
    match strategy {
        Strategy::TBfprt => Ok(BoundsReport::TBfprt {
            s,
            c1,
            upper: tbfprt_worst_coeff_upper(s, c1),
            lower: tbfprt_worst_coeff_lower(s, c1),
        }),
        Strategy::TPMed3L => Ok(BoundsReport::TPMed3L {
            s,
            n,
            best_coeff: pmed3l_best_coeff(s),
            depth_estimate: pmed3l_depth_estimate(n, s),
        }),
        other => Err(BenchError::InvalidPlan(format!(
            "closed-form bounds cover t-bfprt and t-pmed3l, not '{}'",
            other
        ))),
    }
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BoundsReport::TBfprt { s, c1, upper, lower } => {
                writeln!(f, "t-bfprt s={} c1={}", s, c1)?;
                writeln!(f, "  worst-case coefficient upper bound (1 + c1/s) / H(0.3/s): {:.6}", upper)?;
                write!(f, "  worst-case coefficient lower bound 1.443 * (1 + c1/s):     {:.6}", lower)
            }
            BoundsReport::TPMed3L { s, n, best_coeff, depth_estimate } => {
                writeln!(f, "t-pmed3l s={}", s)?;
                writeln!(f, "  best-case coefficient 1.443 + 1.924/s: {:.6}", best_coeff)?;
                write!(
                    f,
                    "  selection comparisons at n={:e}, s * n^(1 - log3(2)) * ln(n): {:.2}",
                    n, depth_estimate
                )
            }
        }
    }
}
