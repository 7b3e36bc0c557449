//! Verification suite: each check runs an experiment or a property sweep,
//! compares the measurement with its threshold and reports pass/fail.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::eigen::{full_decompose, top_k, EigenConfig};
use crate::error::Result;
use crate::harness::{
    loglog_slope, run, run_on, ExperimentConfig, LearnerKind, LearnerParams, RegretRecord,
    Sigma2, SweepAxis,
};
use crate::learners::{
    cap_eigenvalues, default_meg_eta, default_sigma2, FplLearner, MegLearner, OnlineLearner,
};
use crate::matrix::{Instance, SymmetricMatrix};
use crate::perturb::{estimate_max_eigenvalue, GoeSampler, NoiseMode};
use crate::streams::{generate, StreamKind, StreamSpec};

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Run only checks whose id contains this substring.
    pub filter: Option<String>,
    /// Forces σ² in the sparse-bound check (negative control).
    pub sparse_sigma2: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    /// Set when a failure is downgraded because the measurement is too noisy.
    pub warning: bool,
    pub measured: String,
    pub expected: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match (self.passed, self.warning) {
            (true, false) => "PASS",
            (true, true) => "WARN",
            (false, _) => "FAIL",
        };
        write!(
            f,
            "[{tag}] {:<15} {} | measured: {} | expected: {} | {:.1}s",
            self.id, self.title, self.measured, self.expected, self.seconds
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub criteria: Vec<CriterionReport>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

type Check = fn(&VerifyOptions) -> CriterionReport;

/// Every check in suite order.
pub const CHECKS: &[(&str, Check)] = &[
    ("eigen-oracle", eigen_oracle),
    ("btl-inequality", btl_inequality),
    ("goe", goe_statistics),
    ("sparse-bound", sparse_bound),
    ("dense-bound", dense_bound),
    ("slope", sublinear_slope),
    ("ftl-linear", ftl_linear),
    ("degenerate-fpl", degenerate_fpl),
    ("meg", meg_reference),
    ("timing", timing_signature),
    ("skipping", skipping_leader),
];

/// Runs every check selected by `opts.filter`, printing one line each.
pub fn verify(opts: &VerifyOptions) -> VerifyReport {
    let mut report = VerifyReport::default();
    for (id, check) in CHECKS {
        if let Some(f) = &opts.filter {
            if !id.contains(f.as_str()) {
                continue;
            }
        }
        let r = check(opts);
        println!("{r}");
        report.criteria.push(r);
    }
    report
}

struct Timer(Instant);

impl Timer {
    fn start() -> Self {
        Self(Instant::now())
    }

    fn secs(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

fn report(
    id: &'static str,
    title: &'static str,
    passed: bool,
    measured: String,
    expected: String,
    seconds: f64,
) -> CriterionReport {
    CriterionReport {
        id,
        title,
        passed,
        warning: false,
        measured,
        expected,
        seconds,
    }
}

fn errored(id: &'static str, title: &'static str, e: crate::Error, seconds: f64) -> CriterionReport {
    report(id, title, false, format!("error: {e}"), "no error".into(), seconds)
}

/// Comparator and cumulative gain never decrease along a run.
pub fn monotone(records: &[RegretRecord]) -> bool {
    records.windows(2).all(|w| {
        w[1].comparator >= w[0].comparator - 1e-9
            && w[1].cumulative_gain_mean >= w[0].cumulative_gain_mean - 1e-9
    })
}

fn goe_like(n: usize, rng: &mut ChaCha8Rng) -> SymmetricMatrix {
    SymmetricMatrix::from_lower_fn(n, |_, _| StandardNormal.sample(rng))
}

/// Top-k Rayleigh value against the dense oracle on random symmetric matrices.
pub fn eigen_oracle(_: &VerifyOptions) -> CriterionReport {
    const ID: &str = "eigen-oracle";
    const TITLE: &str = "top_k vs dense oracle, 500 matrices";
    let timer = Timer::start();
    let mut rng = ChaCha8Rng::seed_from_u64(0xE16E);
    let cfg = EigenConfig::default();
    let mut worst_value: f64 = 0.0;
    let mut worst_recon: f64 = 0.0;
    for _ in 0..500 {
        let n = rng.random_range(4..=32);
        let k = rng.random_range(1..=n);
        let a = goe_like(n, &mut rng);
        let d = full_decompose(&a);
        let exact = d.top_k_sum(k);
        let r = match top_k(&a, k, &cfg) {
            Ok(r) => r,
            Err(e) => return errored(ID, TITLE, e, timer.secs()),
        };
        worst_value = worst_value.max((r.rayleigh_value - exact).abs());
        worst_recon = worst_recon.max(d.reconstruct().add_scaled(-1.0, &a).frobenius_norm());
    }
    let secs = timer.secs();
    report(
        ID,
        TITLE,
        worst_value <= 1e-6 && worst_recon < 1e-10 && secs < 30.0,
        format!("max |Δ value| = {worst_value:.2e}, max recon = {worst_recon:.2e}"),
        "≤ 1e-6, < 1e-10, < 30 s".into(),
        secs,
    )
}

/// Smallest per-trial slack `rhs - lhs` of the be-the-leader inequality
/// `λ₁:ₖ(X_{≤t}+N_t) − λ₁:ₖ(X_{<t}+N_{t−1}) ≤ tr(P̃_t(X_t+N_t−N_{t−1}))`
/// along a full FPL run, with `P̃_t` from the dense oracle.
pub fn btl_min_slack(
    instances: &[Instance],
    k: usize,
    sigma2: f64,
    mode: NoiseMode,
    seed: u64,
) -> Result<f64> {
    let n = instances[0].dim();
    let mut fpl = FplLearner::new(n, k, sigma2, mode, seed, EigenConfig::default())?;
    let mut prev_noise = SymmetricMatrix::zeros(n);
    let mut worst = f64::INFINITY;
    for inst in instances {
        let noise = fpl.current_noise()?;
        let x = inst.to_matrix();
        let before = fpl.state().cumulative.add_scaled(1.0, &prev_noise);
        let after = fpl.state().cumulative.add_scaled(1.0, &x).add_scaled(1.0, &noise);
        let d_after = full_decompose(&after);
        let lhs = d_after.top_k_sum(k) - full_decompose(&before).top_k_sum(k);
        let increment = x.add_scaled(1.0, &noise).add_scaled(-1.0, &prev_noise);
        let rhs = d_after.top_k_basis(k)?.rayleigh_value(&increment);
        worst = worst.min(rhs - lhs);

        fpl.predict()?;
        fpl.update(inst)?;
        prev_noise = noise;
    }
    Ok(worst)
}

fn interleave(a: Vec<Instance>, b: Vec<Instance>) -> Vec<Instance> {
    a.into_iter().zip(b).flat_map(|(x, y)| [x, y]).collect()
}

pub fn btl_inequality(_: &VerifyOptions) -> CriterionReport {
    const ID: &str = "btl-inequality";
    const TITLE: &str = "per-trial be-the-leader inequality, 10 runs";
    let timer = Timer::start();
    let (n, k, horizon) = (10, 2, 200);
    let mut worst = f64::INFINITY;
    for r in 0..10u64 {
        let sparse = StreamSpec::new(StreamKind::SparseIid { spike: 3.0 }, n, horizon / 2, 100 + r);
        let dense = StreamSpec::new(
            StreamKind::DenseIid {
                profile: None,
                rotate_each_trial: r % 3 == 0,
            },
            n,
            horizon / 2,
            200 + r,
        );
        let outcome = generate(&sparse).and_then(|s| {
            let d = generate(&dense)?;
            let stream = interleave(s, d);
            let mode = if r % 2 == 0 { NoiseMode::FixedScaled } else { NoiseMode::Incremental };
            let sigma2 = if r < 5 { 1.0 } else { default_sigma2(n, k, true) };
            btl_min_slack(&stream, k, sigma2, mode, r)
        });
        match outcome {
            Ok(s) => worst = worst.min(s),
            Err(e) => return errored(ID, TITLE, e, timer.secs()),
        }
    }
    let secs = timer.secs();
    report(
        ID,
        TITLE,
        worst >= -1e-7 && secs < 60.0,
        format!("min slack = {worst:.3e}"),
        "≥ -1e-7 at every trial, < 60 s".into(),
        secs,
    )
}

pub fn goe_statistics(_: &VerifyOptions) -> CriterionReport {
    const ID: &str = "goe";
    const TITLE: &str = "GOE entry variances and E[λ_max]";
    let timer = Timer::start();
    let sigma2 = 1.0;
    let n = 20;
    let mut sampler = GoeSampler::new(n, sigma2, 0x60E).expect("valid sampler");
    let (mut off, mut diag) = (Vec::new(), Vec::new());
    while off.len() < 100_000 || diag.len() < 100_000 {
        let m = sampler.sample();
        for i in 0..n {
            diag.push(m.get(i, i));
            for j in 0..i {
                off.push(m.get(i, j));
            }
        }
    }
    off.truncate(100_000);
    diag.truncate(100_000);
    let var = |xs: &[f64]| {
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
    };
    let (v_off, v_diag) = (var(&off), var(&diag));
    let lam = estimate_max_eigenvalue(100, 1.0, 200, 0x1A3).unwrap_or(f64::NAN);
    let edge = (2.0 * 100.0f64).sqrt();
    let ok = (v_off / 0.5 - 1.0).abs() <= 0.05
        && (v_diag / 1.0 - 1.0).abs() <= 0.05
        && (12.5..=14.2).contains(&lam);
    let secs = timer.secs();
    report(
        ID,
        TITLE,
        ok && secs < 60.0,
        format!(
            "var off-diag = {v_off:.4}, var diag = {v_diag:.4}, E[λ_max](n=100) = {lam:.3} \
             (edge σ√(2n) = {edge:.2}; √(nσ²) = 10 not asserted)"
        ),
        "0.5 ± 5%, 1.0 ± 5%, [12.5, 14.2]".into(),
        secs,
    )
}

fn bound_check(
    id: &'static str,
    title: &'static str,
    configs: Vec<(&'static str, ExperimentConfig)>,
    bound: f64,
    budget_secs: f64,
) -> CriterionReport {
    let timer = Timer::start();
    let mut parts = Vec::new();
    let mut ok = true;
    for (label, cfg) in configs {
        match run(&cfg) {
            Ok(out) => {
                let last = *out.last();
                let limit = bound + 3.0 * last.regret_stderr;
                ok &= last.regret_mean <= limit && monotone(&out.records);
                parts.push(format!(
                    "{label}: {:.1} ± {:.1} (limit {:.1})",
                    last.regret_mean, last.regret_stderr, limit
                ));
            }
            Err(e) => return errored(id, title, e, timer.secs()),
        }
    }
    let secs = timer.secs();
    report(
        id,
        title,
        ok && secs < budget_secs,
        parts.join("; "),
        format!("mean final regret ≤ {bound:.1} + 3·stderr, < {budget_secs:.0} s"),
        secs,
    )
}

fn fpl_params(sigma2: Sigma2) -> LearnerParams {
    LearnerParams {
        sigma2,
        ..LearnerParams::new(LearnerKind::Fpl)
    }
}

pub fn sparse_bound(opts: &VerifyOptions) -> CriterionReport {
    let (n, k, horizon) = (16usize, 2usize, 10_000usize);
    let sigma2 = opts.sparse_sigma2.map(Sigma2::Value).unwrap_or(Sigma2::Auto);
    let bound = 2.0 * (n as f64).powf(0.25) * ((k * horizon) as f64).sqrt();
    let adversarial = StreamSpec::new(
        StreamKind::AdversarialAlternating {
            tie_break: EigenConfig::default(),
        },
        n,
        horizon,
        0,
    );
    let iid = StreamSpec::new(StreamKind::SparseIid { spike: 2.0 }, n, horizon, 1);
    bound_check(
        "sparse-bound",
        "FPL sparse regret bound, n=16 k=2 T=1e4",
        vec![
            ("adversarial", ExperimentConfig::new(fpl_params(sigma2), adversarial, k)),
            ("sparse-iid", ExperimentConfig::new(fpl_params(sigma2), iid, k)),
        ],
        bound,
        300.0,
    )
}

pub fn dense_bound(_: &VerifyOptions) -> CriterionReport {
    let (n, k, horizon) = (16usize, 2usize, 5_000usize);
    let bound = 2.0 * k as f64 * ((n * horizon) as f64).sqrt();
    let stream = StreamSpec::new(
        StreamKind::DenseIid {
            profile: None,
            rotate_each_trial: false,
        },
        n,
        horizon,
        2,
    );
    bound_check(
        "dense-bound",
        "FPL dense regret bound, n=16 k=2 T=5000",
        vec![("dense-iid", ExperimentConfig::new(fpl_params(Sigma2::Auto), stream, k))],
        bound,
        300.0,
    )
}

/// T values of the sublinearity sweep.
pub const SLOPE_HORIZONS: [usize; 4] = [1250, 2500, 5000, 10_000];

pub fn sublinear_slope(_: &VerifyOptions) -> CriterionReport {
    const ID: &str = "slope";
    const TITLE: &str = "log-log regret slope in T, adversarial stream";
    let timer = Timer::start();
    let (n, k) = (16, 1);
    let stream = StreamSpec::new(
        StreamKind::AdversarialAlternating {
            tie_break: EigenConfig::default(),
        },
        n,
        *SLOPE_HORIZONS.last().unwrap(),
        0,
    );
    let mut base = ExperimentConfig::new(fpl_params(Sigma2::Auto), stream, k);
    base.report_every = 1250;
    let values: Vec<f64> = SLOPE_HORIZONS.iter().map(|&t| t as f64).collect();
    let rows = match super::sweep(&base, SweepAxis::Horizon, &values) {
        Ok(r) => r,
        Err(e) => return errored(ID, TITLE, e, timer.secs()),
    };
    let regrets: Vec<f64> = rows.iter().map(|r| r.regret_mean).collect();
    let slope = loglog_slope(&values, &regrets);
    let secs = timer.secs();
    report(
        ID,
        TITLE,
        slope.is_some_and(|s| s <= 0.65) && secs < 600.0,
        format!(
            "slope = {} (regrets {})",
            slope.map_or("undefined".into(), |s| format!("{s:.3}")),
            regrets.iter().map(|r| format!("{r:.1}")).collect::<Vec<_>>().join(", ")
        ),
        "≤ 0.65, < 600 s".into(),
        secs,
    )
}

pub fn ftl_linear(_: &VerifyOptions) -> CriterionReport {
    const ID: &str = "ftl-linear";
    const TITLE: &str = "FTL linear regret vs FPL, adversarial n=2";
    let timer = Timer::start();
    let horizon = 1000;
    let stream = StreamSpec::new(
        StreamKind::AdversarialAlternating {
            tie_break: EigenConfig::default(),
        },
        2,
        horizon,
        0,
    );
    let instances = match generate(&stream) {
        Ok(s) => s,
        Err(e) => return errored(ID, TITLE, e, timer.secs()),
    };
    let ftl = ExperimentConfig::new(LearnerParams::new(LearnerKind::Ftl), stream.clone(), 1).with_seeds([0]);
    let fpl = ExperimentConfig::new(fpl_params(Sigma2::Auto), stream, 1);
    let (ftl_out, fpl_out) = match (run_on(&ftl, &instances), run_on(&fpl, &instances)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return errored(ID, TITLE, e, timer.secs()),
    };
    let r_ftl = ftl_out.last().regret_mean;
    let r_fpl = fpl_out.last().regret_mean;
    let t = horizon as f64;
    let secs = timer.secs();
    report(
        ID,
        TITLE,
        r_ftl >= 0.4 * t && r_fpl <= 0.3 * t && secs < 60.0,
        format!("FTL regret = {r_ftl:.1}, FPL regret = {r_fpl:.1}"),
        format!("FTL ≥ {:.0}, FPL ≤ {:.0}", 0.4 * t, 0.3 * t),
        secs,
    )
}

pub fn degenerate_fpl(_: &VerifyOptions) -> CriterionReport {
    const ID: &str = "degenerate-fpl";
    const TITLE: &str = "FPL(σ²=0) ≡ FTL, 10 random configs";
    let timer = Timer::start();
    let mut rng = ChaCha8Rng::seed_from_u64(0xDE6);
    let mut identical = 0;
    for c in 0..10 {
        let n = rng.random_range(2..=12);
        let k = rng.random_range(1..=n);
        let horizon = rng.random_range(20..=200);
        let eigen = EigenConfig::default().with_seed(rng.random());
        let kind = match c % 4 {
            0 => StreamKind::SparseIid { spike: rng.random_range(0.0..5.0) },
            1 => StreamKind::DenseIid {
                profile: None,
                rotate_each_trial: rng.random(),
            },
            2 => StreamKind::AdversarialAlternating { tie_break: eigen },
            _ => StreamKind::DiagonalExpert { weights: None },
        };
        let stream = StreamSpec::new(kind, n, horizon, rng.random());
        let seeds: Vec<u64> = (0..3).map(|_| rng.random()).collect();
        let mut fpl = ExperimentConfig::new(fpl_params(Sigma2::Value(0.0)), stream.clone(), k)
            .with_seeds(seeds.clone());
        fpl.learner.eigen = eigen;
        fpl.learner.noise_mode = if rng.random() { NoiseMode::FixedScaled } else { NoiseMode::Incremental };
        fpl.report_every = rng.random_range(1..=horizon);
        let mut ftl = fpl.clone();
        ftl.learner = LearnerParams {
            eigen,
            ..LearnerParams::new(LearnerKind::Ftl)
        };
        match (run(&fpl), run(&ftl)) {
            (Ok(a), Ok(b)) => {
                if a.records.len() == b.records.len()
                    && a.records.iter().zip(&b.records).all(|(x, y)| x.same_values(y))
                {
                    identical += 1;
                }
            }
            (Err(e), _) | (_, Err(e)) => return errored(ID, TITLE, e, timer.secs()),
        }
    }
    report(
        ID,
        TITLE,
        identical == 10,
        format!("{identical}/10 bit-identical record sequences"),
        "10/10".into(),
        timer.secs(),
    )
}

/// Vector exponentiated gradient with capping on the diagonal: the oracle
/// MEG must reproduce on standard-basis streams.
pub fn scalar_capped_eg(n: usize, k: usize, eta: f64, hits: &[usize]) -> Vec<Vec<f64>> {
    let mut w = vec![k as f64 / n as f64; n];
    let mut trajectory = vec![w.clone()];
    for &i in hits {
        w[i] *= eta.exp();
        // Cap: find the smallest set of top entries such that rescaling the
        // rest to fill the remaining trace keeps them all at most 1.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| w[b].partial_cmp(&w[a]).unwrap());
        let mut capped = 0;
        let factor = loop {
            let rest: f64 = order[capped..].iter().map(|&j| w[j]).sum();
            let factor = (k - capped) as f64 / rest;
            if w[order[capped]] * factor <= 1.0 {
                break factor;
            }
            capped += 1;
        };
        for (pos, &j) in order.iter().enumerate() {
            w[j] = if pos < capped { 1.0 } else { w[j] * factor };
        }
        trajectory.push(w.clone());
    }
    trajectory
}

pub fn meg_reference(_: &VerifyOptions) -> CriterionReport {
    const ID: &str = "meg";
    const TITLE: &str = "MEG capping invariants and diagonal oracle";
    let timer = Timer::start();
    let (n, k, horizon) = (8, 2, 500);

    // Capping on random spectra.
    let mut rng = ChaCha8Rng::seed_from_u64(0x3E6);
    let mut worst_trace: f64 = 0.0;
    let mut worst_max: f64 = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let m = rng.random_range(2..=20);
        let kk = rng.random_range(1..m);
        let vals: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..3.0f64).powi(3) + 1e-6).collect();
        match cap_eigenvalues(&vals, kk) {
            Ok(c) => {
                worst_trace = worst_trace.max((c.iter().sum::<f64>() - kk as f64).abs());
                worst_max = worst_max.max(c.iter().cloned().fold(f64::MIN, f64::max));
            }
            Err(e) => return errored(ID, TITLE, e, timer.secs()),
        }
    }

    let stream = StreamSpec::new(StreamKind::DiagonalExpert { weights: None }, n, horizon, 5);
    let instances = match generate(&stream) {
        Ok(s) => s,
        Err(e) => return errored(ID, TITLE, e, timer.secs()),
    };
    let hits: Vec<usize> = instances
        .iter()
        .map(|x| match x {
            Instance::Sparse(v) => v.iter().position(|&c| c == 1.0).unwrap(),
            Instance::Dense(_) => unreachable!("diagonal streams are sparse"),
        })
        .collect();
    let eta = default_meg_eta(n, k, horizon);
    let oracle = scalar_capped_eg(n, k, eta, &hits);
    let mut meg = MegLearner::new(n, k, eta).expect("valid MEG");
    let mut worst_entry: f64 = 0.0;
    for (t, inst) in instances.iter().enumerate() {
        let w = meg.parameter();
        worst_trace = worst_trace.max((w.eigenvalues().iter().sum::<f64>() - k as f64).abs());
        worst_max = worst_max.max(w.eigenvalues()[0]);
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { oracle[t][i] } else { 0.0 };
                worst_entry = worst_entry.max((w.matrix().get(i, j) - want).abs());
            }
        }
        if let Err(e) = meg.update(inst) {
            return errored(ID, TITLE, e, timer.secs());
        }
    }
    report(
        ID,
        TITLE,
        worst_trace <= 1e-8 && worst_max <= 1.0 + 1e-10 && worst_entry <= 1e-8,
        format!(
            "max |tr - k| = {worst_trace:.2e}, max λ = {worst_max:.12}, max |W - oracle| = {worst_entry:.2e}"
        ),
        "≤ 1e-8, ≤ 1 + 1e-10, ≤ 1e-8".into(),
        timer.secs(),
    )
}

/// Mean seconds per trial of `trials` predict+update rounds.
fn per_trial_seconds(learner: &mut dyn OnlineLearner, instances: &[Instance]) -> Result<f64> {
    let start = Instant::now();
    for inst in instances {
        learner.predict()?;
        learner.update(inst)?;
    }
    Ok(start.elapsed().as_secs_f64() / instances.len() as f64)
}

/// Per-trial time ratios (n=512 over n=256) for FPL and MEG, repeated
/// `repeats` times. Returns `(fpl_ratios, meg_ratios)`.
pub fn timing_ratios(repeats: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let k = 4;
    let fixed_budget = EigenConfig {
        max_iterations: 20,
        convergence_tol: 1e-300,
        seed: 0,
    };
    let mut fpl_ratios = Vec::new();
    let mut meg_ratios = Vec::new();
    let streams: Vec<Vec<Instance>> = [256usize, 512]
        .iter()
        .map(|&n| generate(&StreamSpec::new(StreamKind::SparseIid { spike: 2.0 }, n, 100, 3)))
        .collect::<Result<_>>()?;
    for rep in 0..repeats {
        let mut fpl_t = Vec::new();
        let mut meg_t = Vec::new();
        for insts in &streams {
            let n = insts[0].dim();
            let mut fpl = FplLearner::new(
                n,
                k,
                default_sigma2(n, k, true),
                NoiseMode::FixedScaled,
                rep as u64,
                fixed_budget,
            )?;
            fpl_t.push(per_trial_seconds(&mut fpl, insts)?);
            let mut meg = MegLearner::new(n, k, default_meg_eta(n, k, 100))?;
            meg_t.push(per_trial_seconds(&mut meg, &insts[..8])?);
        }
        fpl_ratios.push(fpl_t[1] / fpl_t[0]);
        meg_ratios.push(meg_t[1] / meg_t[0]);
    }
    Ok((fpl_ratios, meg_ratios))
}

fn relative_spread(xs: &[f64]) -> f64 {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (hi - lo) / m
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    v[v.len() / 2]
}

pub fn timing_signature(_: &VerifyOptions) -> CriterionReport {
    const ID: &str = "timing";
    const TITLE: &str = "per-trial cost ratio n=512/n=256";
    let timer = Timer::start();
    let (fpl, meg) = match timing_ratios(3) {
        Ok(r) => r,
        Err(e) => return errored(ID, TITLE, e, timer.secs()),
    };
    let (f, m) = (median(&fpl), median(&meg));
    let noise = relative_spread(&fpl).max(relative_spread(&meg));
    let ok = (3.0..=6.0).contains(&f) && m >= 6.5;
    let secs = timer.secs();
    let mut r = report(
        ID,
        TITLE,
        ok && secs < 600.0,
        format!("FPL ratio = {f:.2}, MEG ratio = {m:.2}, timer spread = {:.0}%", noise * 100.0),
        "FPL in [3, 6], MEG ≥ 6.5".into(),
        secs,
    );
    if !r.passed && noise > 0.10 {
        r.passed = true;
        r.warning = true;
    }
    r
}

pub fn skipping_leader(_: &VerifyOptions) -> CriterionReport {
    const ID: &str = "skipping";
    const TITLE: &str = "Follow the Skipping Leader exploratory runs";
    let timer = Timer::start();
    let (n, k, horizon) = (16, 1, 2000);
    let streams = [
        ("sparse-iid", StreamKind::SparseIid { spike: 2.0 }),
        (
            "adversarial",
            StreamKind::AdversarialAlternating {
                tie_break: EigenConfig::default(),
            },
        ),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (label, kind) in streams {
        let cfg = ExperimentConfig::new(
            LearnerParams::new(LearnerKind::Skip),
            StreamSpec::new(kind, n, horizon, 4),
            k,
        )
        .with_seeds(0..10);
        match run(&cfg) {
            Ok(out) => {
                ok &= monotone(&out.records) && out.records.len() == 101;
                let last = out.last();
                parts.push(format!(
                    "{label}: regret {:.1} ± {:.1} over {} points",
                    last.regret_mean,
                    last.regret_stderr,
                    out.records.len()
                ));
            }
            Err(e) => return errored(ID, TITLE, e, timer.secs()),
        }
    }
    report(
        ID,
        TITLE,
        ok,
        parts.join("; "),
        "completes with valid invariants (no bound)".into(),
        timer.secs(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_oracle_hand_case() {
        // n=3, k=2, one hit on coordinate 0 with e^η = 2.4:
        // (1.6, 2/3, 2/3) → cap 1.6 → rest rescaled to (0.5, 0.5).
        let eta = 2.4f64.ln();
        let w = scalar_capped_eg(3, 2, eta, &[0]);
        assert!((w[1][0] - 1.0).abs() < 1e-12);
        assert!((w[1][1] - 0.5).abs() < 1e-12);
        assert!((w[1][2] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn filter_selects_by_id() {
        let opts = VerifyOptions {
            filter: Some("degenerate".into()),
            sparse_sigma2: None,
        };
        let r = verify(&opts);
        assert_eq!(r.criteria.len(), 1);
        assert_eq!(r.criteria[0].id, "degenerate-fpl");
    }
}
