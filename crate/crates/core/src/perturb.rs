//! Random perturbations: GOE noise matrices, the two equivalent noise
//! schedules used by Follow the Perturbed Leader, and the Bernoulli skip mask
//! of Follow the Skipping Leader.
//!
//! All generators are ChaCha8 streams seeded from a `u64`. Output is
//! reproducible run to run on one platform; the Gaussian transform relies on
//! `f64` transcendental functions, so bit patterns may drift across
//! platforms or libm versions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::eigen::full_decompose;
use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;

/// Sampler of `N = (G + Gᵀ)/2` with `G_ij ~ N(0, σ²)` i.i.d.
#[derive(Clone, Debug)]
pub struct GoeSampler {
    dim: usize,
    sigma2: f64,
    sigma: f64,
    rng: ChaCha8Rng,
}

impl GoeSampler {
    /// `sigma2 = 0` is accepted and yields the zero matrix every draw.
    pub fn new(dim: usize, sigma2: f64, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if !(sigma2 >= 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "sigma2 must be finite and non-negative, got {sigma2}"
            )));
        }
        Ok(Self {
            dim,
            sigma2,
            sigma: sigma2.sqrt(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// One fresh draw. Consumes `n²` normal variates, row-major over `G`.
    pub fn sample(&mut self) -> SymmetricMatrix {
        let n = self.dim;
        let g: Vec<f64> = (0..n * n)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut self.rng);
                self.sigma * z
            })
            .collect();
        SymmetricMatrix::from_lower_fn(n, |i, j| {
            if i == j {
                g[i * n + i]
            } else {
                0.5 * (g[i * n + j] + g[j * n + i])
            }
        })
    }
}

/// How `N_t` is produced across trials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NoiseMode {
    /// One draw `N`, reused as `√t · N`.
    #[default]
    FixedScaled,
    /// `N_t = Σ_{q ≤ t} N⁽q⁾` with a fresh draw per trial.
    Incremental,
}

impl std::str::FromStr for NoiseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(NoiseMode::FixedScaled),
            "incremental" => Ok(NoiseMode::Incremental),
            other => Err(Error::InvalidArgument(format!("unknown noise mode '{other}'"))),
        }
    }
}

impl std::fmt::Display for NoiseMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NoiseMode::FixedScaled => "fixed",
            NoiseMode::Incremental => "incremental",
        })
    }
}

/// Time-indexed noise `N_t` whose entries have variance growing linearly in `t`.
#[derive(Clone, Debug)]
pub struct NoiseSchedule {
    mode: NoiseMode,
    sampler: GoeSampler,
    /// FixedScaled: the single draw. Incremental: the running sum.
    cached: Option<SymmetricMatrix>,
    /// Last trial served, 0 before the first query.
    last_t: usize,
}

impl NoiseSchedule {
    pub fn new(mode: NoiseMode, sampler: GoeSampler) -> Self {
        Self {
            mode,
            sampler,
            cached: None,
            last_t: 0,
        }
    }

    pub fn mode(&self) -> NoiseMode {
        self.mode
    }

    pub fn sigma2(&self) -> f64 {
        self.sampler.sigma2()
    }

    pub fn dim(&self) -> usize {
        self.sampler.dim()
    }

    /// `N_t`. Incremental mode requires `t = 1, 2, 3, …` in order; repeating
    /// the last `t` returns the same matrix.
    pub fn noise_at(&mut self, t: usize) -> Result<SymmetricMatrix> {
        let scale = self.advance(t)?;
        let base = self.cached.as_ref().expect("advanced schedule has state");
        Ok(if scale == 1.0 { base.clone() } else { base.scaled(scale) })
    }

    /// `base + N_t`, without materializing the scaled noise.
    pub fn perturb(&mut self, base: &SymmetricMatrix, t: usize) -> Result<SymmetricMatrix> {
        if base.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: base.dim(),
            });
        }
        let scale = self.advance(t)?;
        let noise = self.cached.as_ref().expect("advanced schedule has state");
        Ok(base.add_scaled(scale, noise))
    }

    /// Readies state for trial `t` and returns the factor applied to `cached`.
    fn advance(&mut self, t: usize) -> Result<f64> {
        if t == 0 {
            return Err(Error::InvalidArgument("trial index starts at 1".into()));
        }
        match self.mode {
            NoiseMode::FixedScaled => {
                if self.cached.is_none() {
                    self.cached = Some(self.sampler.sample());
                }
                self.last_t = t;
                Ok((t as f64).sqrt())
            }
            NoiseMode::Incremental => {
                if t == self.last_t {
                    return Ok(1.0);
                }
                if t != self.last_t + 1 {
                    return Err(Error::OutOfOrder {
                        expected: self.last_t + 1,
                        got: t,
                    });
                }
                let draw = self.sampler.sample();
                match self.cached.as_mut() {
                    Some(sum) => sum.add_scaled_assign(1.0, &draw),
                    None => self.cached = Some(draw),
                }
                self.last_t = t;
                Ok(1.0)
            }
        }
    }
}

/// `T` fair coin flips; `true` keeps the instance.
pub fn sample_skip_mask<R: Rng + ?Sized>(rng: &mut R, horizon: usize) -> Result<Vec<bool>> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("skip mask horizon must be at least 1".into()));
    }
    Ok((0..horizon).map(|_| rng.random_bool(0.5)).collect())
}

/// Monte Carlo mean of `λ_max(N)` over `samples` independent GOE draws.
pub fn estimate_max_eigenvalue(dim: usize, sigma2: f64, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let mut sampler = GoeSampler::new(dim, sigma2, seed)?;
    let total: f64 = (0..samples)
        .map(|_| full_decompose(&sampler.sample()).eigenvalues[0])
        .sum();
    Ok(total / samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn variance(xs: &[f64]) -> f64 {
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
    }

    #[test]
    fn zero_variance_gives_zero() {
        let mut s = GoeSampler::new(4, 0.0, 1).unwrap();
        assert!(s.sample().is_zero());
    }

    #[test]
    fn rejects_bad_sigma2() {
        assert!(GoeSampler::new(3, -1.0, 0).is_err());
        assert!(GoeSampler::new(3, f64::NAN, 0).is_err());
        assert!(GoeSampler::new(0, 1.0, 0).is_err());
    }

    #[test]
    fn draws_are_symmetric_and_seeded() {
        let mut a = GoeSampler::new(7, 1.3, 42).unwrap();
        let mut b = GoeSampler::new(7, 1.3, 42).unwrap();
        for _ in 0..3 {
            let x = a.sample();
            let y = b.sample();
            assert_eq!(x.as_slice(), y.as_slice());
            for i in 0..7 {
                for j in 0..7 {
                    assert_eq!(x.get(i, j).to_bits(), x.get(j, i).to_bits());
                }
            }
        }
    }

    #[test]
    fn off_diagonal_variance_is_half_sigma2() {
        let mut s = GoeSampler::new(20, 1.0, 7).unwrap();
        let mut off = Vec::new();
        while off.len() < 100_000 {
            let m = s.sample();
            for i in 0..20 {
                for j in 0..i {
                    off.push(m.get(i, j));
                }
            }
        }
        off.truncate(100_000);
        let v = variance(&off);
        assert!((0.47..=0.53).contains(&v), "variance {v}");
    }

    #[test]
    fn fixed_scaled_schedule() {
        let sampler = GoeSampler::new(5, 1.0, 3).unwrap();
        let mut s = NoiseSchedule::new(NoiseMode::FixedScaled, sampler);
        let n1 = s.noise_at(1).unwrap();
        let n4 = s.noise_at(4).unwrap();
        for (a, b) in n1.as_slice().iter().zip(n4.as_slice()) {
            assert_eq!(2.0 * a, *b);
        }
        let base = SymmetricMatrix::identity(5);
        let p = s.perturb(&base, 4).unwrap();
        assert_eq!(p, base.add_scaled(1.0, &n4));
    }

    #[test]
    fn incremental_schedule_order() {
        let sampler = GoeSampler::new(3, 1.0, 3).unwrap();
        let mut s = NoiseSchedule::new(NoiseMode::Incremental, sampler);
        assert!(matches!(s.noise_at(2), Err(Error::OutOfOrder { .. })));
        let a = s.noise_at(1).unwrap();
        let again = s.noise_at(1).unwrap();
        assert_eq!(a, again);
        s.noise_at(2).unwrap();
        assert!(s.noise_at(4).is_err());
        assert!(s.noise_at(0).is_err());
    }

    #[test]
    fn incremental_sums_draws() {
        let mut reference = GoeSampler::new(4, 2.0, 8).unwrap();
        let mut s = NoiseSchedule::new(NoiseMode::Incremental, GoeSampler::new(4, 2.0, 8).unwrap());
        let mut sum = SymmetricMatrix::zeros(4);
        for t in 1..=5 {
            sum.add_scaled_assign(1.0, &reference.sample());
            assert_eq!(s.noise_at(t).unwrap(), sum);
        }
    }

    #[test]
    fn incremental_diagonal_variance_grows_linearly() {
        let mut diag = Vec::new();
        for seed in 0..2000u64 {
            let mut s =
                NoiseSchedule::new(NoiseMode::Incremental, GoeSampler::new(20, 1.0, seed).unwrap());
            for t in 1..9 {
                s.noise_at(t).unwrap();
            }
            let n9 = s.noise_at(9).unwrap();
            diag.push(n9.get(0, 0));
        }
        let v = variance(&diag);
        assert!((8.0..=10.0).contains(&v), "variance {v}");
    }

    #[test]
    fn skip_mask_properties() {
        let mut r1 = ChaCha8Rng::seed_from_u64(5);
        let mut r2 = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(sample_skip_mask(&mut r1, 5).unwrap(), sample_skip_mask(&mut r2, 5).unwrap());
        assert!(sample_skip_mask(&mut r1, 0).is_err());
        let mask = sample_skip_mask(&mut r1, 100_000).unwrap();
        let mean = mask.iter().filter(|&&b| b).count() as f64 / 1e5;
        assert!((0.494..=0.506).contains(&mean), "mean {mean}");
    }

    #[test]
    fn max_eigenvalue_scalar_case() {
        let m = estimate_max_eigenvalue(1, 1.0, 10_000, 11).unwrap();
        assert!(m.abs() <= 0.05, "mean {m}");
        assert!(estimate_max_eigenvalue(3, 1.0, 0, 0).is_err());
    }

    #[test]
    fn max_eigenvalue_scales_with_sigma() {
        let a = estimate_max_eigenvalue(30, 1.0, 200, 1).unwrap();
        let b = estimate_max_eigenvalue(30, 4.0, 200, 1).unwrap();
        let r = b / a;
        assert!((1.9..=2.1).contains(&r), "ratio {r}");
    }
}
