//! Experiment driver: learner × stream runs with regret accounting, sweeps
//! over one axis, result files and the verification suite.
//!
//! The expectation over the learner's internal randomness is realized as a
//! mean over a seed list. The stream is materialized once per experiment and
//! replayed for every seed (oblivious adversary).

pub mod io;
pub mod verify;

use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::eigen::{top_k_value, EigenConfig};
use crate::error::{Error, Result};
use crate::learners::{
    default_meg_eta, default_sigma2, FplLearner, FtlLearner, MegLearner, OnlineLearner,
    SkippingLearner,
};
use crate::matrix::{Instance, SymmetricMatrix};
use crate::perturb::NoiseMode;
use crate::streams::{generate, StreamSpec};

/// Slack on the per-trial gain cap.
const GAIN_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LearnerKind {
    Fpl,
    Ftl,
    Skip,
    Meg,
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fpl" => Ok(Self::Fpl),
            "ftl" => Ok(Self::Ftl),
            "skip" => Ok(Self::Skip),
            "meg" => Ok(Self::Meg),
            other => Err(Error::InvalidArgument(format!("unknown learner '{other}'"))),
        }
    }
}

impl std::fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Fpl => "fpl",
            Self::Ftl => "ftl",
            Self::Skip => "skip",
            Self::Meg => "meg",
        })
    }
}

/// Noise variance: either the instance-kind default or an explicit value.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum Sigma2 {
    #[default]
    Auto,
    Value(f64),
}

impl FromStr for Sigma2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(Self::Auto);
        }
        s.parse::<f64>()
            .ok()
            .filter(|v| *v >= 0.0 && v.is_finite())
            .map(Self::Value)
            .ok_or_else(|| Error::InvalidArgument(format!("sigma2 must be 'auto' or a real >= 0, got '{s}'")))
    }
}

impl std::fmt::Display for Sigma2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Auto => f.write_str("auto"),
            Self::Value(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LearnerParams {
    pub kind: LearnerKind,
    pub sigma2: Sigma2,
    /// MEG step size; `None` picks the horizon-tuned default.
    pub eta: Option<f64>,
    /// Seed here is the published tie-break seed, shared by every run seed.
    pub eigen: EigenConfig,
    pub noise_mode: NoiseMode,
}

impl LearnerParams {
    pub fn new(kind: LearnerKind) -> Self {
        Self {
            kind,
            sigma2: Sigma2::Auto,
            eta: None,
            eigen: EigenConfig::default(),
            noise_mode: NoiseMode::FixedScaled,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub learner: LearnerParams,
    pub stream: StreamSpec,
    pub k: usize,
    pub seeds: Vec<u64>,
    /// Trials between comparator evaluations; the horizon is always reported.
    pub report_every: usize,
}

impl ExperimentConfig {
    pub fn new(learner: LearnerParams, stream: StreamSpec, k: usize) -> Self {
        let report_every = (stream.horizon / 100).max(1);
        Self {
            learner,
            stream,
            k,
            seeds: (0..20).collect(),
            report_every,
        }
    }

    pub fn with_seeds(mut self, seeds: impl IntoIterator<Item = u64>) -> Self {
        self.seeds = seeds.into_iter().collect();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::InvalidArgument("seed list is empty".into()));
        }
        if self.report_every == 0 {
            return Err(Error::InvalidArgument("report interval must be at least 1".into()));
        }
        if self.k == 0 || self.k > self.stream.n {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= k <= n, got k={} n={}",
                self.k, self.stream.n
            )));
        }
        self.learner.eigen.validate()
    }

    /// Parameters after defaults are filled in.
    pub fn resolve(&self) -> Result<Resolved> {
        let sparse = self.stream.is_sparse()?;
        let n = self.stream.n;
        let sigma2 = match self.learner.kind {
            LearnerKind::Fpl => Some(match self.learner.sigma2 {
                Sigma2::Auto => default_sigma2(n, self.k, sparse),
                Sigma2::Value(v) => v,
            }),
            _ => None,
        };
        let eta = match self.learner.kind {
            LearnerKind::Meg => Some(
                self.learner
                    .eta
                    .unwrap_or_else(|| default_meg_eta(n, self.k, self.stream.horizon)),
            ),
            _ => None,
        };
        Ok(Resolved { sparse, sigma2, eta })
    }
}

/// Defaults resolved against the stream.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Resolved {
    pub sparse: bool,
    pub sigma2: Option<f64>,
    pub eta: Option<f64>,
}

/// Derives an independent sub-seed (splitmix64 finalizer).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Builds the learner for one run seed.
pub fn build_learner(config: &ExperimentConfig, resolved: &Resolved, seed: u64) -> Result<Box<dyn OnlineLearner>> {
    let n = config.stream.n;
    let k = config.k;
    let p = &config.learner;
    Ok(match p.kind {
        LearnerKind::Fpl => Box::new(FplLearner::new(
            n,
            k,
            resolved.sigma2.expect("resolved"),
            p.noise_mode,
            derive_seed(seed, 1),
            p.eigen,
        )?),
        LearnerKind::Ftl => Box::new(FtlLearner::new(n, k, p.eigen)?),
        LearnerKind::Skip => Box::new(SkippingLearner::new(n, k, derive_seed(seed, 2), p.eigen)?),
        LearnerKind::Meg => Box::new(MegLearner::new(n, k, resolved.eta.expect("resolved"))?),
    })
}

/// One reporting point, aggregated over seeds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegretRecord {
    pub t: usize,
    pub cumulative_gain_mean: f64,
    pub cumulative_gain_stderr: f64,
    /// `λ₁:ₖ(X_{≤t})`.
    pub comparator: f64,
    pub regret_mean: f64,
    pub regret_stderr: f64,
    pub wall_ms_per_trial: f64,
}

impl RegretRecord {
    /// Equality on every field except wall time, bit-exact.
    pub fn same_values(&self, other: &Self) -> bool {
        self.t == other.t
            && self.cumulative_gain_mean.to_bits() == other.cumulative_gain_mean.to_bits()
            && self.cumulative_gain_stderr.to_bits() == other.cumulative_gain_stderr.to_bits()
            && self.comparator.to_bits() == other.comparator.to_bits()
            && self.regret_mean.to_bits() == other.regret_mean.to_bits()
            && self.regret_stderr.to_bits() == other.regret_stderr.to_bits()
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub records: Vec<RegretRecord>,
    pub resolved: Resolved,
    /// Final regret of each seed, in seed-list order.
    pub final_regrets: Vec<f64>,
    /// Trials, summed over seeds, whose eigensolver hit its iteration cap.
    pub nonconverged_trials: usize,
}

impl RunOutput {
    pub fn last(&self) -> &RegretRecord {
        self.records.last().expect("a run has at least the t = 0 record")
    }
}

/// Reporting points: 0, every `every` trials, and the horizon.
pub fn report_points(horizon: usize, every: usize) -> Vec<usize> {
    let mut pts: Vec<usize> = (0..=horizon).step_by(every).collect();
    if *pts.last().unwrap() != horizon {
        pts.push(horizon);
    }
    pts
}

/// `λ₁:ₖ(X_{≤t})` at each point.
pub fn comparators(instances: &[Instance], n: usize, k: usize, points: &[usize]) -> Result<Vec<f64>> {
    let mut cumulative = SymmetricMatrix::zeros(n);
    let mut seen = 0;
    let mut out = Vec::with_capacity(points.len());
    for &t in points {
        while seen < t {
            cumulative.add_instance_assign(&instances[seen]);
            seen += 1;
        }
        out.push(if t == 0 { 0.0 } else { top_k_value(&cumulative, k)? });
    }
    Ok(out)
}

struct SeedTrace {
    gains: Vec<f64>,
    wall_ms: Vec<f64>,
    nonconverged: usize,
}

fn run_seed(
    config: &ExperimentConfig,
    resolved: &Resolved,
    instances: &[Instance],
    points: &[usize],
    seed: u64,
) -> Result<SeedTrace> {
    let mut learner = build_learner(config, resolved, seed)?;
    let (n, k) = (config.stream.n, config.k);
    let mut gains = vec![0.0];
    let mut wall_ms = vec![0.0];
    let mut total = 0.0;
    let mut clock = Instant::now();
    let mut next = 1;

    for (idx, inst) in instances.iter().enumerate() {
        let t = idx + 1;
        let violation = |message: String, digest: u64| Error::InvariantViolation {
            trial: t,
            message,
            digest,
        };
        let prediction = learner.predict()?;
        if let Err(e) = prediction.check(n, k) {
            return Err(violation(e.to_string(), learner.state_digest()));
        }
        let g = prediction.gain(inst);
        let cap = if inst.is_sparse() { 1.0 } else { k as f64 };
        if !(g >= -GAIN_TOL && g <= cap + GAIN_TOL) {
            return Err(violation(
                format!("gain {g} outside [0, {cap}]"),
                learner.state_digest(),
            ));
        }
        total += g;
        learner.update(inst)?;

        if next < points.len() && points[next] == t {
            let span = (t - points[next - 1]) as f64;
            wall_ms.push(clock.elapsed().as_secs_f64() * 1e3 / span);
            gains.push(total);
            clock = Instant::now();
            next += 1;
        }
    }
    Ok(SeedTrace {
        gains,
        wall_ms,
        nonconverged: learner.nonconverged_trials(),
    })
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    if xs.len() < 2 {
        return (m, 0.0);
    }
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    (m, (var / xs.len() as f64).sqrt())
}

/// Runs every seed against the same materialized stream.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let instances = generate(&config.stream)?;
    run_on(config, &instances)
}

/// [`run`] on an already materialized stream.
pub fn run_on(config: &ExperimentConfig, instances: &[Instance]) -> Result<RunOutput> {
    config.validate()?;
    if let Some(bad) = instances.iter().position(|x| x.dim() != config.stream.n) {
        return Err(Error::InvalidArgument(format!(
            "instance {} has dimension {}, learner expects {}",
            bad + 1,
            instances[bad].dim(),
            config.stream.n
        )));
    }
    let resolved = config.resolve()?;
    let horizon = instances.len();
    let points = report_points(horizon, config.report_every);
    let comparator = comparators(instances, config.stream.n, config.k, &points)?;

    let traces: Vec<SeedTrace> = config
        .seeds
        .par_iter()
        .map(|&s| run_seed(config, &resolved, instances, &points, s))
        .collect::<Result<_>>()?;

    let records = points
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let gains: Vec<f64> = traces.iter().map(|tr| tr.gains[i]).collect();
            let (g_mean, g_err) = mean_stderr(&gains);
            let regrets: Vec<f64> = gains.iter().map(|g| comparator[i] - g).collect();
            let (r_mean, r_err) = mean_stderr(&regrets);
            let wall: Vec<f64> = traces.iter().map(|tr| tr.wall_ms[i]).collect();
            RegretRecord {
                t,
                cumulative_gain_mean: g_mean,
                cumulative_gain_stderr: g_err,
                comparator: comparator[i],
                regret_mean: r_mean,
                regret_stderr: r_err,
                wall_ms_per_trial: mean_stderr(&wall).0,
            }
        })
        .collect();

    let last = points.len() - 1;
    Ok(RunOutput {
        records,
        resolved,
        final_regrets: traces.iter().map(|tr| comparator[last] - tr.gains[last]).collect(),
        nonconverged_trials: traces.iter().map(|tr| tr.nonconverged).sum(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    Horizon,
    Dim,
    Sigma2,
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "t" | "horizon" => Ok(Self::Horizon),
            "n" | "dim" => Ok(Self::Dim),
            "sigma2" => Ok(Self::Sigma2),
            other => Err(Error::InvalidArgument(format!("unknown sweep axis '{other}'"))),
        }
    }
}

impl std::fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Horizon => "T",
            Self::Dim => "n",
            Self::Sigma2 => "sigma2",
        })
    }
}

/// Final-point summary of one sweep value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub horizon: usize,
    pub comparator: f64,
    pub cumulative_gain_mean: f64,
    pub regret_mean: f64,
    pub regret_stderr: f64,
    pub wall_ms_per_trial: f64,
}

/// Repeats [`run`] with one axis replaced by each value in turn.
pub fn sweep(base: &ExperimentConfig, axis: SweepAxis, values: &[f64]) -> Result<Vec<SweepRow>> {
    values
        .iter()
        .map(|&v| {
            let mut cfg = base.clone();
            match axis {
                SweepAxis::Horizon => {
                    if !(v >= 1.0 && v.fract() == 0.0) {
                        return Err(Error::InvalidArgument(format!("horizon must be a positive integer, got {v}")));
                    }
                    cfg.stream.horizon = v as usize;
                    cfg.report_every = cfg.report_every.min(cfg.stream.horizon);
                }
                SweepAxis::Dim => {
                    if !(v >= 1.0 && v.fract() == 0.0) {
                        return Err(Error::InvalidArgument(format!("dimension must be a positive integer, got {v}")));
                    }
                    cfg.stream.n = v as usize;
                }
                SweepAxis::Sigma2 => cfg.learner.sigma2 = Sigma2::Value(v),
            }
            let out = run(&cfg)?;
            let last = out.last();
            Ok(SweepRow {
                value: v,
                horizon: last.t,
                comparator: last.comparator,
                cumulative_gain_mean: last.cumulative_gain_mean,
                regret_mean: last.regret_mean,
                regret_stderr: last.regret_stderr,
                wall_ms_per_trial: out
                    .records
                    .iter()
                    .skip(1)
                    .map(|r| r.wall_ms_per_trial)
                    .sum::<f64>()
                    / (out.records.len() - 1).max(1) as f64,
            })
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`. `None` when fewer than two
/// points or any coordinate is non-positive.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 || xs.iter().chain(ys).any(|&v| v.is_nan() || v <= 0.0) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / lx.len() as f64;
    let my = ly.iter().sum::<f64>() / ly.len() as f64;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streams::StreamKind;

    #[test]
    fn report_point_layout() {
        assert_eq!(report_points(10, 3), vec![0, 3, 6, 9, 10]);
        assert_eq!(report_points(6, 3), vec![0, 3, 6]);
        assert_eq!(report_points(0, 5), vec![0]);
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(0.5)).collect();
        assert!((loglog_slope(&xs, &ys).unwrap() - 0.5).abs() < 1e-12);
        assert!(loglog_slope(&xs, &[1.0, -1.0, 2.0, 3.0]).is_none());
        assert!(loglog_slope(&[1.0], &[1.0]).is_none());
    }

    #[test]
    fn parse_flags() {
        assert_eq!("auto".parse::<Sigma2>().unwrap(), Sigma2::Auto);
        assert_eq!("0.5".parse::<Sigma2>().unwrap(), Sigma2::Value(0.5));
        assert!("-1".parse::<Sigma2>().is_err());
        assert_eq!("meg".parse::<LearnerKind>().unwrap(), LearnerKind::Meg);
        assert!("xyz".parse::<LearnerKind>().is_err());
        assert_eq!("T".parse::<SweepAxis>().unwrap(), SweepAxis::Horizon);
    }

    #[test]
    fn ftl_repeated_instance_regret_at_most_one() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rep.txt");
        let x = vec![0.6, 0.0, 0.8];
        let insts = vec![Instance::sparse(x).unwrap(); 50];
        crate::streams::write_instance_file(&path, &insts).unwrap();
        let stream = StreamSpec::new(StreamKind::FromFile { path }, 3, 50, 0);
        let mut cfg = ExperimentConfig::new(LearnerParams::new(LearnerKind::Ftl), stream, 1).with_seeds([0]);
        cfg.report_every = 10;
        let out = run(&cfg).unwrap();
        let first = out.records[0];
        assert_eq!((first.t, first.comparator, first.cumulative_gain_mean, first.regret_mean), (0, 0.0, 0.0, 0.0));
        let last = out.last();
        assert!((last.comparator - 50.0).abs() < 1e-9);
        assert!(last.regret_mean <= 1.0 + 1e-9 && last.regret_mean >= -1e-9);
    }

    #[test]
    fn empty_sweep_is_empty() {
        let stream = StreamSpec::new(StreamKind::SparseIid { spike: 1.0 }, 4, 10, 0);
        let cfg = ExperimentConfig::new(LearnerParams::new(LearnerKind::Fpl), stream, 1);
        assert!(sweep(&cfg, SweepAxis::Dim, &[]).unwrap().is_empty());
    }

    #[test]
    fn config_validation() {
        let stream = StreamSpec::new(StreamKind::SparseIid { spike: 1.0 }, 4, 10, 0);
        let cfg = ExperimentConfig::new(LearnerParams::new(LearnerKind::Fpl), stream, 1);
        assert!(cfg.clone().with_seeds([]).validate().is_err());
        let mut bad = cfg.clone();
        bad.report_every = 0;
        assert!(bad.validate().is_err());
        let mut bad = cfg;
        bad.k = 5;
        assert!(run(&bad).is_err());
    }
}
