//! Online PCA learners behind one predict/update interface.
//!
//! * [`FplLearner`]: Follow the Perturbed Leader with GOE noise. Predicts the
//!   top-k eigenspace of `X_{<t} + N_t`.
//! * [`FtlLearner`]: Follow the Leader, the noise-free special case.
//! * [`SkippingLearner`]: Follow the Leader on the sub-stream kept by fair
//!   coin flips.
//! * [`MegLearner`]: Matrix Exponentiated Gradient with eigenvalue capping,
//!   a reference baseline scored by its expected gain `tr(W X)`.
//!
//! Prediction and update are separate calls so a driver can score the
//! prediction on the instance before the learner sees it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eigen::{full_decompose, top_k, EigenConfig, FullDecomposition};
use crate::error::{Error, Result};
use crate::matrix::{self, trace_inner_product, Instance, ProjectionBasis, SymmetricMatrix};
use crate::perturb::{GoeSampler, NoiseMode, NoiseSchedule};

/// Slack for mixture-parameter invariants.
pub mod tol {
    pub const MIXTURE_PSD: f64 = 1e-9;
    pub const MIXTURE_TRACE: f64 = 1e-8;
    pub const MIXTURE_MAX_EIG: f64 = 1e-8;
}

/// Log of the smallest eigenvalue MEG keeps before taking logarithms.
const MIN_LOG_EIGENVALUE: f64 = -690.775_527_898_213_7; // ln(1e-300)

/// Noise variance prescribed for the instance kind: `1/(k√n)` for sparse
/// streams, `1` for dense ones.
pub fn default_sigma2(n: usize, k: usize, sparse: bool) -> f64 {
    if sparse {
        1.0 / (k as f64 * (n as f64).sqrt())
    } else {
        1.0
    }
}

/// Baseline MEG step size `√(8 ln(n/k) / T)`.
pub fn default_meg_eta(n: usize, k: usize, horizon: usize) -> f64 {
    (8.0 * (n as f64 / k as f64).ln() / horizon.max(1) as f64).sqrt()
}

/// PSD matrix with trace `k` and eigenvalues at most 1.
#[derive(Clone, Debug, PartialEq)]
pub struct MixtureParameter {
    matrix: SymmetricMatrix,
    eigenvalues: Vec<f64>,
}

impl MixtureParameter {
    /// Validates a candidate parameter against the capped-trace set.
    pub fn from_matrix(matrix: SymmetricMatrix, k: usize) -> Result<Self> {
        let eigenvalues = full_decompose(&matrix).eigenvalues;
        let p = Self {
            matrix,
            eigenvalues,
        };
        p.check(k)?;
        Ok(p)
    }

    pub fn matrix(&self) -> &SymmetricMatrix {
        &self.matrix
    }

    /// Spectrum, non-increasing.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn check(&self, k: usize) -> Result<()> {
        let lo = *self.eigenvalues.last().unwrap();
        let hi = self.eigenvalues[0];
        let tr: f64 = self.eigenvalues.iter().sum();
        if lo < -tol::MIXTURE_PSD {
            return Err(Error::InvalidArgument(format!("mixture not PSD: λ_min = {lo}")));
        }
        if hi > 1.0 + tol::MIXTURE_MAX_EIG {
            return Err(Error::InvalidArgument(format!("mixture λ_max = {hi} exceeds 1")));
        }
        if (tr - k as f64).abs() > tol::MIXTURE_TRACE {
            return Err(Error::InvalidArgument(format!("mixture trace {tr}, expected {k}")));
        }
        Ok(())
    }
}

/// What a learner plays in one trial.
#[derive(Clone, Debug)]
pub enum Prediction {
    Basis(ProjectionBasis),
    Mixture(MixtureParameter),
}

impl Prediction {
    /// `tr(P X)` for a projection, `tr(W X)` (expected gain) for a mixture.
    pub fn gain(&self, inst: &Instance) -> f64 {
        match self {
            Prediction::Basis(u) => matrix::gain(u, inst),
            Prediction::Mixture(w) => match inst {
                Instance::Sparse(x) => w.matrix.quadratic_form(x),
                Instance::Dense(m) => trace_inner_product(&w.matrix, m),
            },
        }
    }

    pub fn check(&self, n: usize, k: usize) -> Result<()> {
        match self {
            Prediction::Basis(u) => {
                if u.dim() != n || u.rank() != k {
                    return Err(Error::InvalidArgument(format!(
                        "basis is {}x{}, expected {n}x{k}",
                        u.dim(),
                        u.rank()
                    )));
                }
                let err = u.orthonormality_error();
                if err > matrix::tol::ORTHONORMAL {
                    return Err(Error::InvalidArgument(format!(
                        "basis not orthonormal (error {err:e})"
                    )));
                }
                Ok(())
            }
            Prediction::Mixture(w) => w.check(k),
        }
    }

    pub fn as_basis(&self) -> Option<&ProjectionBasis> {
        match self {
            Prediction::Basis(u) => Some(u),
            Prediction::Mixture(_) => None,
        }
    }
}

/// Common driver interface.
pub trait OnlineLearner: Send {
    fn name(&self) -> &'static str;
    fn dim(&self) -> usize;
    fn rank(&self) -> usize;
    /// Index of the trial about to be predicted, starting at 1.
    fn trial(&self) -> usize;
    /// Plays trial `self.trial()`. Does not touch the data state.
    fn predict(&mut self) -> Result<Prediction>;
    /// Reveals the instance and advances to the next trial.
    fn update(&mut self, inst: &Instance) -> Result<()>;
    /// Trials whose eigensolver ran out of iterations.
    fn nonconverged_trials(&self) -> usize {
        0
    }
    /// Fingerprint of the learner's numeric state.
    fn state_digest(&self) -> u64;
}

/// Cumulative data matrix plus trial counter shared by the leader-type learners.
#[derive(Clone, Debug)]
pub struct LeaderState {
    pub n: usize,
    pub k: usize,
    pub cumulative: SymmetricMatrix,
    pub trial: usize,
    pub eigen: EigenConfig,
    nonconverged: usize,
}

impl LeaderState {
    pub fn new(n: usize, k: usize, eigen: EigenConfig) -> Result<Self> {
        if n == 0 || k == 0 || k > n {
            return Err(Error::InvalidArgument(format!("need 1 <= k <= n, got n={n} k={k}")));
        }
        eigen.validate()?;
        Ok(Self {
            n,
            k,
            cumulative: SymmetricMatrix::zeros(n),
            trial: 1,
            eigen,
            nonconverged: 0,
        })
    }

    fn check_dim(&self, inst: &Instance) -> Result<()> {
        if inst.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: inst.dim(),
            });
        }
        Ok(())
    }

    fn leader(&mut self, target: &SymmetricMatrix) -> Result<Prediction> {
        if target.is_zero() {
            log::debug!("trial {}: zero target, seeded tie-break basis", self.trial);
        }
        let r = top_k(target, self.k, &self.eigen)?;
        if !r.converged {
            self.nonconverged += 1;
            log::warn!(
                "trial {}: top-k solver stopped after {} iterations without converging",
                self.trial,
                r.iterations
            );
        }
        Ok(Prediction::Basis(r.basis))
    }

    fn absorb(&mut self, inst: &Instance) -> Result<()> {
        self.check_dim(inst)?;
        self.cumulative.add_instance_assign(inst);
        self.trial += 1;
        Ok(())
    }
}

/// Follow the Perturbed Leader with GOE noise `N_t`.
#[derive(Clone, Debug)]
pub struct FplLearner {
    state: LeaderState,
    schedule: NoiseSchedule,
}

impl FplLearner {
    pub fn new(
        n: usize,
        k: usize,
        sigma2: f64,
        mode: NoiseMode,
        noise_seed: u64,
        eigen: EigenConfig,
    ) -> Result<Self> {
        let state = LeaderState::new(n, k, eigen)?;
        let schedule = NoiseSchedule::new(mode, GoeSampler::new(n, sigma2, noise_seed)?);
        Ok(Self { state, schedule })
    }

    pub fn state(&self) -> &LeaderState {
        &self.state
    }

    pub fn sigma2(&self) -> f64 {
        self.schedule.sigma2()
    }

    /// `N_t` for the current trial; same draw the prediction uses.
    pub fn current_noise(&mut self) -> Result<SymmetricMatrix> {
        self.schedule.noise_at(self.state.trial)
    }

    /// `X_{<t} + N_t`.
    pub fn perturbed_cumulative(&mut self) -> Result<SymmetricMatrix> {
        self.schedule.perturb(&self.state.cumulative, self.state.trial)
    }
}

impl OnlineLearner for FplLearner {
    fn name(&self) -> &'static str {
        "fpl"
    }

    fn dim(&self) -> usize {
        self.state.n
    }

    fn rank(&self) -> usize {
        self.state.k
    }

    fn trial(&self) -> usize {
        self.state.trial
    }

    fn predict(&mut self) -> Result<Prediction> {
        let target = self.perturbed_cumulative()?;
        self.state.leader(&target)
    }

    fn update(&mut self, inst: &Instance) -> Result<()> {
        self.state.absorb(inst)
    }

    fn nonconverged_trials(&self) -> usize {
        self.state.nonconverged
    }

    fn state_digest(&self) -> u64 {
        self.state.cumulative.digest() ^ self.state.trial as u64
    }
}

/// Follow the Leader: the top-k eigenspace of `X_{<t}`.
#[derive(Clone, Debug)]
pub struct FtlLearner {
    state: LeaderState,
}

impl FtlLearner {
    pub fn new(n: usize, k: usize, eigen: EigenConfig) -> Result<Self> {
        Ok(Self {
            state: LeaderState::new(n, k, eigen)?,
        })
    }

    pub fn state(&self) -> &LeaderState {
        &self.state
    }
}

impl OnlineLearner for FtlLearner {
    fn name(&self) -> &'static str {
        "ftl"
    }

    fn dim(&self) -> usize {
        self.state.n
    }

    fn rank(&self) -> usize {
        self.state.k
    }

    fn trial(&self) -> usize {
        self.state.trial
    }

    fn predict(&mut self) -> Result<Prediction> {
        let target = self.state.cumulative.clone();
        self.state.leader(&target)
    }

    fn update(&mut self, inst: &Instance) -> Result<()> {
        self.state.absorb(inst)
    }

    fn nonconverged_trials(&self) -> usize {
        self.state.nonconverged
    }

    fn state_digest(&self) -> u64 {
        self.state.cumulative.digest() ^ self.state.trial as u64
    }
}

/// Follow the Skipping Leader: FTL on `Σ_{q<t} α_q X_q` with fair coins `α_q`.
#[derive(Clone, Debug)]
pub struct SkippingLearner {
    state: LeaderState,
    coins: ChaCha8Rng,
    kept: usize,
}

impl SkippingLearner {
    pub fn new(n: usize, k: usize, mask_seed: u64, eigen: EigenConfig) -> Result<Self> {
        Ok(Self {
            state: LeaderState::new(n, k, eigen)?,
            coins: ChaCha8Rng::seed_from_u64(mask_seed),
            kept: 0,
        })
    }

    pub fn state(&self) -> &LeaderState {
        &self.state
    }

    /// Instances absorbed so far.
    pub fn kept(&self) -> usize {
        self.kept
    }

    /// Update with an externally drawn coin.
    pub fn update_with_coin(&mut self, inst: &Instance, keep: bool) -> Result<()> {
        self.state.check_dim(inst)?;
        if keep {
            self.state.cumulative.add_instance_assign(inst);
            self.kept += 1;
        }
        self.state.trial += 1;
        Ok(())
    }
}

impl OnlineLearner for SkippingLearner {
    fn name(&self) -> &'static str {
        "skip"
    }

    fn dim(&self) -> usize {
        self.state.n
    }

    fn rank(&self) -> usize {
        self.state.k
    }

    fn trial(&self) -> usize {
        self.state.trial
    }

    fn predict(&mut self) -> Result<Prediction> {
        let target = self.state.cumulative.clone();
        self.state.leader(&target)
    }

    /// Draws the coin from the learner's own stream, matching
    /// [`crate::perturb::sample_skip_mask`] on the same seed.
    fn update(&mut self, inst: &Instance) -> Result<()> {
        let keep = self.coins.random_bool(0.5);
        self.update_with_coin(inst, keep)
    }

    fn nonconverged_trials(&self) -> usize {
        self.state.nonconverged
    }

    fn state_digest(&self) -> u64 {
        self.state.cumulative.digest() ^ (self.state.trial as u64) ^ ((self.kept as u64) << 32)
    }
}

/// Caps a spectrum onto `{Σ w = k, 0 ≤ w ≤ 1}`: the largest entries that
/// would exceed 1 are set to 1 and the rest rescaled multiplicatively until
/// nothing exceeds 1. Input values must be non-negative, with at least `k`
/// of them positive.
pub fn cap_eigenvalues(values: &[f64], k: usize) -> Result<Vec<f64>> {
    if values.iter().any(|&v| !v.is_finite() || v < 0.0) {
        return Err(Error::InvalidArgument("capping needs finite non-negative values".into()));
    }
    let logs: Vec<f64> = values.iter().map(|&v| v.ln()).collect();
    Ok(cap_log_eigenvalues(&logs, k)?.into_iter().map(f64::exp).collect())
}

/// [`cap_eigenvalues`] on log-values, returning capped log-values (all `≤ 0`).
/// Scale-free, so callers may pass unnormalized exponents.
pub fn cap_log_eigenvalues(logs: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = logs.len();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("capping needs 1 <= k <= n, got k={k} n={n}")));
    }
    let positive = logs.iter().filter(|v| v.is_finite()).count();
    if positive < k || logs.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
        return Err(Error::InvalidArgument(format!(
            "capping infeasible: {positive} positive values for trace {k}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| logs[j].total_cmp(&logs[i]).then(i.cmp(&j)));

    let mut capped = 0;
    let offset = loop {
        let rest = &order[capped..];
        let offset = ((k - capped) as f64).ln() - log_sum_exp(rest.iter().map(|&i| logs[i]));
        if logs[rest[0]] + offset <= 0.0 || capped + 1 == k {
            break offset;
        }
        capped += 1;
    };
    let mut out = vec![0.0; n];
    for &i in &order[capped..] {
        out[i] = (logs[i] + offset).min(0.0);
    }
    Ok(out)
}

fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Matrix Exponentiated Gradient over the capped-trace set.
///
/// Keeps `W_t` in eigen form: eigenvectors plus log-eigenvalues.
#[derive(Clone, Debug)]
pub struct MegLearner {
    n: usize,
    k: usize,
    eta: f64,
    trial: usize,
    /// Column-major eigenvectors of `W_t`.
    vectors: Vec<f64>,
    log_values: Vec<f64>,
}

impl MegLearner {
    /// Starts from `W₁ = (k/n) I`.
    pub fn new(n: usize, k: usize, eta: f64) -> Result<Self> {
        if n == 0 || k == 0 || k > n {
            return Err(Error::InvalidArgument(format!("need 1 <= k <= n, got n={n} k={k}")));
        }
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::InvalidArgument(format!("learning rate {eta} must be >= 0")));
        }
        let mut vectors = vec![0.0; n * n];
        for i in 0..n {
            vectors[i * n + i] = 1.0;
        }
        Ok(Self {
            n,
            k,
            eta,
            trial: 1,
            vectors,
            log_values: vec![(k as f64 / n as f64).ln(); n],
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    fn decomposition(&self, values: Vec<f64>) -> FullDecomposition {
        FullDecomposition {
            eigenvalues: values,
            eigenvectors: self.vectors.clone(),
        }
    }

    /// Current parameter `W_t`.
    pub fn parameter(&self) -> MixtureParameter {
        let values: Vec<f64> = self.log_values.iter().map(|v| v.exp()).collect();
        let matrix = self.decomposition(values.clone()).reassemble_with(&values);
        let mut eigenvalues = values;
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        MixtureParameter {
            matrix,
            eigenvalues,
        }
    }

    /// `W′ = exp(log W + ηX)`, then capped back onto the parameter set.
    pub fn step(&mut self, inst: &Instance) -> Result<()> {
        if inst.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: inst.dim(),
            });
        }
        let clamped: Vec<f64> = self
            .log_values
            .iter()
            .map(|v| v.max(MIN_LOG_EIGENVALUE))
            .collect();
        let mut exponent = self.decomposition(clamped.clone()).reassemble_with(&clamped);
        match inst {
            Instance::Sparse(x) => exponent.rank_one_update_scaled_assign(self.eta, x),
            Instance::Dense(m) => exponent.add_scaled_assign(self.eta, m),
        }
        let eig = full_decompose(&exponent);
        self.log_values = cap_log_eigenvalues(&eig.eigenvalues, self.k)?;
        self.vectors = eig.eigenvectors;
        Ok(())
    }
}

impl OnlineLearner for MegLearner {
    fn name(&self) -> &'static str {
        "meg"
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn rank(&self) -> usize {
        self.k
    }

    fn trial(&self) -> usize {
        self.trial
    }

    fn predict(&mut self) -> Result<Prediction> {
        Ok(Prediction::Mixture(self.parameter()))
    }

    fn update(&mut self, inst: &Instance) -> Result<()> {
        self.step(inst)?;
        self.trial += 1;
        Ok(())
    }

    fn state_digest(&self) -> u64 {
        let mut m = SymmetricMatrix::zeros(self.n);
        for (i, v) in self.log_values.iter().enumerate() {
            m.set(i, i, *v);
        }
        m.digest() ^ self.trial as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::full_decompose;

    fn e(n: usize, i: usize) -> Instance {
        Instance::basis(n, i)
    }

    #[test]
    fn fpl_zero_noise_zero_data_is_tie_break() {
        let mut l = FplLearner::new(4, 2, 0.0, NoiseMode::FixedScaled, 1, EigenConfig::default())
            .unwrap();
        let p = l.predict().unwrap();
        assert!(p.check(4, 2).is_ok());
    }

    #[test]
    fn ftl_on_separated_spectrum() {
        let mut l = FplLearner::new(3, 1, 0.0, NoiseMode::FixedScaled, 1, EigenConfig::default())
            .unwrap();
        for _ in 0..5 {
            l.update(&e(3, 0)).unwrap();
        }
        for _ in 0..2 {
            l.update(&e(3, 1)).unwrap();
        }
        let p = l.predict().unwrap();
        let u = p.as_basis().unwrap();
        assert!((u.column(0)[0].abs() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn fpl_matches_dense_oracle_on_perturbed_matrix() {
        let cfg = EigenConfig::default();
        let mut l = FplLearner::new(4, 1, 1.0, NoiseMode::FixedScaled, 17, cfg).unwrap();
        // Drive to trial 4 with cumulative diag(3,1,0,0).
        l.update(&e(4, 0)).unwrap();
        l.update(&e(4, 0)).unwrap();
        l.update(&e(4, 0)).unwrap();
        l.state.cumulative = SymmetricMatrix::from_diag(&[3.0, 1.0, 0.0, 0.0]);
        assert_eq!(l.trial(), 4);
        let p = l.predict().unwrap();
        let u = p.as_basis().unwrap().column(0).to_vec();

        let mut noise = GoeSampler::new(4, 1.0, 17).unwrap();
        let n = noise.sample();
        let target = SymmetricMatrix::from_diag(&[3.0, 1.0, 0.0, 0.0]).add_scaled(2.0, &n);
        let d = full_decompose(&target);
        let v = d.eigenvector(0);
        let cos: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
        assert!((cos.abs() - 1.0).abs() < 1e-8, "cos {cos}");
    }

    #[test]
    fn leader_updates() {
        let mut l = FtlLearner::new(3, 1, EigenConfig::default()).unwrap();
        l.update(&e(3, 0)).unwrap();
        assert_eq!(l.state().cumulative, SymmetricMatrix::from_diag(&[1.0, 0.0, 0.0]));
        assert_eq!(l.trial(), 2);
        l.update(&e(3, 0)).unwrap();
        assert_eq!(l.state().cumulative, SymmetricMatrix::from_diag(&[2.0, 0.0, 0.0]));

        let mut l = FtlLearner::new(3, 1, EigenConfig::default()).unwrap();
        let half = Instance::dense(SymmetricMatrix::identity(3).scaled(0.5)).unwrap();
        l.update(&half).unwrap();
        assert!((l.state().cumulative.trace() - 1.5).abs() < 1e-15);
        assert!(matches!(l.update(&e(4, 0)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn ftl_diag() {
        let mut l = FtlLearner::new(2, 1, EigenConfig::default()).unwrap();
        l.update(&e(2, 0)).unwrap();
        l.update(&e(2, 0)).unwrap();
        l.update(&e(2, 1)).unwrap();
        let p = l.predict().unwrap();
        assert!((p.gain(&e(2, 0)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn skipping_masks() {
        let cfg = EigenConfig::default();
        let stream: Vec<Instance> = (0..10).map(|t| e(3, t % 3)).collect();

        let mut skip = SkippingLearner::new(3, 1, 0, cfg).unwrap();
        let mut ftl = FtlLearner::new(3, 1, cfg).unwrap();
        for x in &stream {
            let a = skip.predict().unwrap();
            let b = ftl.predict().unwrap();
            assert_eq!(a.as_basis(), b.as_basis());
            skip.update_with_coin(x, true).unwrap();
            ftl.update(x).unwrap();
        }

        let mut skip = SkippingLearner::new(3, 1, 0, cfg).unwrap();
        let first = skip.predict().unwrap();
        for x in &stream {
            skip.update_with_coin(x, false).unwrap();
            assert!(skip.state().cumulative.is_zero());
            assert_eq!(skip.predict().unwrap().as_basis(), first.as_basis());
        }
    }

    #[test]
    fn skipping_locks_onto_kept_direction() {
        let mut skip = SkippingLearner::new(2, 1, 0, EigenConfig::default()).unwrap();
        for m in 0..6 {
            if m > 0 {
                let p = skip.predict().unwrap();
                assert!((p.gain(&e(2, 0)) - 1.0).abs() < 1e-12);
            }
            skip.update_with_coin(&e(2, 0), true).unwrap();
            skip.update_with_coin(&e(2, 1), false).unwrap();
            assert_eq!(
                skip.state().cumulative,
                SymmetricMatrix::from_diag(&[(m + 1) as f64, 0.0])
            );
        }
    }

    #[test]
    fn capping_hand_example() {
        let w = cap_eigenvalues(&[1.6, 0.3, 0.1], 2).unwrap();
        for (g, want) in w.iter().zip([1.0, 0.75, 0.25]) {
            assert!((g - want).abs() < 1e-12, "{w:?}");
        }
    }

    #[test]
    fn capping_needs_support() {
        assert!(cap_eigenvalues(&[1.0, 0.0, 0.0], 2).is_err());
        assert!(cap_eigenvalues(&[1.0, 1.0], 3).is_err());
        let w = cap_eigenvalues(&[5.0, 5.0, 0.0], 2).unwrap();
        assert_eq!(w, vec![1.0, 1.0, 0.0]);
    }

    #[test]
    fn meg_zero_step_is_identity() {
        let mut m = MegLearner::new(2, 1, 0.0).unwrap();
        let before = m.parameter();
        m.update(&e(2, 0)).unwrap();
        let after = m.parameter();
        for (a, b) in before.matrix().as_slice().iter().zip(after.matrix().as_slice()) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(MegLearner::new(2, 3, 0.1).is_err());
    }

    #[test]
    fn meg_invariants_after_updates() {
        let mut m = MegLearner::new(5, 2, 0.7).unwrap();
        for t in 0..40 {
            m.update(&e(5, t % 2)).unwrap();
            let p = m.predict().unwrap();
            p.check(5, 2).unwrap();
        }
        let w = m.parameter();
        assert!(w.eigenvalues()[0] <= 1.0 + 1e-10);
        assert!((w.eigenvalues().iter().sum::<f64>() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn mixture_validation() {
        assert!(MixtureParameter::from_matrix(SymmetricMatrix::from_diag(&[1.0, 1.0, 0.0]), 2).is_ok());
        assert!(MixtureParameter::from_matrix(SymmetricMatrix::from_diag(&[1.5, 0.5, 0.0]), 2).is_err());
        assert!(MixtureParameter::from_matrix(SymmetricMatrix::from_diag(&[0.5, 0.5, 0.5]), 2).is_err());
    }

    #[test]
    fn sigma2_defaults() {
        assert_eq!(default_sigma2(16, 2, false), 1.0);
        assert!((default_sigma2(16, 2, true) - 0.125).abs() < 1e-15);
        assert!((default_meg_eta(8, 2, 500) - (8.0 * 4f64.ln() / 500.0).sqrt()).abs() < 1e-15);
    }
}
