//! Eigensolvers.
//!
//! [`top_k`] is the per-trial workhorse: block subspace iteration on the
//! shifted matrix `A + cI` with `c = max_row_abs_sum(A)`, re-orthonormalized
//! by QR every step and finished with a Rayleigh-Ritz rotation. The block
//! carries a few extra columns beyond `k` so that convergence of the top-k
//! Ritz values depends on the gap to eigenvalue `b + 1` rather than `k + 1`.
//!
//! [`full_decompose`] is the dense oracle used by the comparator, by MEG and
//! by tests.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::{dot, ProjectionBasis, SymmetricMatrix};

/// Minimum number of extra block columns carried by [`top_k`].
pub const MIN_OVERSAMPLE: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenConfig {
    pub max_iterations: usize,
    /// Relative change of the top-k Rayleigh value below which iteration stops.
    pub convergence_tol: f64,
    /// Seed of the random start block, which also breaks ties.
    pub seed: u64,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self {
            max_iterations: 1000,
            convergence_tol: 1e-8,
            seed: 0,
        }
    }
}

impl EigenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be at least 1".into()));
        }
        if !(self.convergence_tol > 0.0 && self.convergence_tol < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "convergence_tol {} not in (0, 1)",
                self.convergence_tol
            )));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Output of [`top_k`].
#[derive(Clone, Debug)]
pub struct TopK {
    pub basis: ProjectionBasis,
    /// `tr(UᵀAU)` of the returned basis.
    pub rayleigh_value: f64,
    pub iterations: usize,
    /// False when `max_iterations` ran out; `basis` is then the last iterate.
    pub converged: bool,
}

/// Block size used by [`top_k`] for a given `(n, k)`. Blocks covering at
/// least half the space are widened to the whole space.
pub fn block_size(n: usize, k: usize) -> usize {
    let b = n.min(k + k.max(MIN_OVERSAMPLE));
    if 2 * b >= n {
        n
    } else {
        b
    }
}

/// Orthonormal basis of an approximate top-k invariant subspace of `a`.
pub fn top_k(a: &SymmetricMatrix, k: usize, cfg: &EigenConfig) -> Result<TopK> {
    let n = a.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "k = {k} out of range for dimension {n}"
        )));
    }
    cfg.validate()?;

    let b = block_size(n, k);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut block: Vec<f64> = (0..n * b).map(|_| StandardNormal.sample(&mut rng)).collect();
    orthonormalize(&mut block, n, b, &mut rng);

    if a.is_zero() {
        let basis = ProjectionBasis::from_columns_unchecked(n, k, block[..n * k].to_vec());
        return Ok(TopK {
            basis,
            rayleigh_value: 0.0,
            iterations: 0,
            converged: true,
        });
    }

    // The block spans the whole space: one Rayleigh-Ritz step is exact.
    if b == n {
        let image = a.mul_block(&block, b);
        let (_, vecs) = small_symmetric_eigen(&gram(&block, &image, n, b), b);
        let mut cols = rotate(&block, &vecs, n, b, k);
        orthonormalize(&mut cols, n, k, &mut rng);
        let basis = ProjectionBasis::from_columns_unchecked(n, k, cols);
        let rayleigh_value = basis.rayleigh_value(a);
        return Ok(TopK {
            basis,
            rayleigh_value,
            iterations: 1,
            converged: true,
        });
    }

    let shift = a.max_row_abs_sum();
    let shifted = a.shifted(shift);
    let mut previous: Option<f64> = None;
    let mut converged = false;
    let mut iterations = 0;
    let mut ritz_vectors;

    loop {
        iterations += 1;
        let image = shifted.mul_block(&block, b);
        let (theta, vecs) = small_symmetric_eigen(&gram(&block, &image, n, b), b);
        ritz_vectors = vecs;
        let value: f64 = theta[..k].iter().sum::<f64>() - k as f64 * shift;
        // Next block: the image, ordered by Ritz value.
        let next = rotate(&image, &ritz_vectors, n, b, b);
        if let Some(prev) = previous {
            let bound = cfg.convergence_tol * (1.0 + value.abs());
            if (value - prev).abs() <= bound
                && ritz_residual(&block, &next, &ritz_vectors, &theta, n, b, k) <= bound
            {
                converged = true;
                break;
            }
        }
        previous = Some(value);
        if iterations == cfg.max_iterations {
            break;
        }
        block = next;
        orthonormalize(&mut block, n, b, &mut rng);
    }

    let mut cols = rotate(&block, &ritz_vectors, n, b, k);
    orthonormalize(&mut cols, n, k, &mut rng);
    let basis = ProjectionBasis::from_columns_unchecked(n, k, cols);
    let rayleigh_value = basis.rayleigh_value(a);
    Ok(TopK {
        basis,
        rayleigh_value,
        iterations,
        converged,
    })
}

/// `Σᵢ ‖A yᵢ − θᵢ yᵢ‖` over the leading `k` Ritz pairs, where `image`
/// already holds `A yᵢ`. Each Ritz value lies within its residual norm of
/// an eigenvalue.
fn ritz_residual(
    block: &[f64],
    image: &[f64],
    vecs: &[f64],
    theta: &[f64],
    n: usize,
    b: usize,
    k: usize,
) -> f64 {
    let y = rotate(block, vecs, n, b, k);
    (0..k)
        .map(|i| {
            let r: Vec<f64> = (0..n).map(|r| image[i * n + r] - theta[i] * y[i * n + r]).collect();
            dot(&r, &r).sqrt()
        })
        .sum()
}

/// `UᵀW` for column-major `n × b` blocks, symmetrized.
fn gram(u: &[f64], w: &[f64], n: usize, b: usize) -> Vec<f64> {
    let mut h = vec![0.0; b * b];
    for i in 0..b {
        for j in 0..=i {
            let v = 0.5
                * (dot(&u[i * n..(i + 1) * n], &w[j * n..(j + 1) * n])
                    + dot(&u[j * n..(j + 1) * n], &w[i * n..(i + 1) * n]));
            h[i * b + j] = v;
            h[j * b + i] = v;
        }
    }
    h
}

/// First `k` columns of `U V` for column-major `U` (`n × b`) and row-major `V` (`b × b`).
fn rotate(u: &[f64], v: &[f64], n: usize, b: usize, k: usize) -> Vec<f64> {
    let mut cols = vec![0.0; n * k];
    for c in 0..k {
        let out = &mut cols[c * n..(c + 1) * n];
        for j in 0..b {
            let coef = v[j * b + c];
            if coef != 0.0 {
                for (o, &x) in out.iter_mut().zip(&u[j * n..(j + 1) * n]) {
                    *o += coef * x;
                }
            }
        }
    }
    cols
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. Columns that
/// collapse numerically are replaced by fresh random directions.
fn orthonormalize(block: &mut [f64], n: usize, b: usize, rng: &mut ChaCha8Rng) {
    for c in 0..b {
        loop {
            let original = norm_of(&block[c * n..(c + 1) * n]);
            for _ in 0..2 {
                for p in 0..c {
                    let (done, rest) = block.split_at_mut(c * n);
                    let q = &done[p * n..(p + 1) * n];
                    let v = &mut rest[..n];
                    let proj = dot(q, v);
                    v.iter_mut().zip(q).for_each(|(x, y)| *x -= proj * y);
                }
            }
            let v = &mut block[c * n..(c + 1) * n];
            let nrm = norm_of(v);
            if nrm > 1e-10 * original && nrm > f64::MIN_POSITIVE {
                v.iter_mut().for_each(|x| *x /= nrm);
                break;
            }
            for x in v.iter_mut() {
                *x = StandardNormal.sample(rng);
            }
        }
    }
}

fn norm_of(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Eigen-decomposition of a small dense symmetric row-major matrix by
/// Householder tridiagonalization followed by implicit QL. Returns the
/// eigenvalues in descending order and the eigenvectors as the columns of a
/// row-major `b × b` array.
pub(crate) fn small_symmetric_eigen(h: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = h.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e, n);
    tridiagonal_ql(&mut v, &mut d, &mut e, n);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].total_cmp(&d[i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut vecs = vec![0.0; n * n];
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            vecs[r * n + new] = v[r * n + old];
        }
    }
    (values, vecs)
}

/// Householder reduction to tridiagonal form; `v` is overwritten with the
/// accumulated orthogonal transform, `d`/`e` receive the diagonal and
/// sub-diagonal.
fn tridiagonalize(v: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize) {
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
                v[j * n + i] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[j * n + i] = f;
                g = e[j] + v[j * n + j] * f;
                for k in j + 1..i {
                    g += v[k * n + j] * d[k];
                    e[k] += v[k * n + j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k * n + j] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
            }
        }
        d[i] = h;
    }
    for i in 0..n.saturating_sub(1) {
        v[(n - 1) * n + i] = v[i * n + i];
        v[i * n + i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k * n + i + 1] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[k * n + i + 1] * v[k * n + j];
                }
                for k in 0..=i {
                    v[k * n + j] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[k * n + i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
        v[(n - 1) * n + j] = 0.0;
    }
    v[(n - 1) * n + n - 1] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL on the tridiagonal `(d, e)`, accumulating rotations into `v`.
fn tridiagonal_ql(v: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize) {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            for _iter in 0..200 {
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        h = v[k * n + i + 1];
                        v[k * n + i + 1] = s * v[k * n + i] + c * h;
                        v[k * n + i] = c * v[k * n + i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

/// Full symmetric eigendecomposition `A = QΛQᵀ`.
#[derive(Clone, Debug)]
pub struct FullDecomposition {
    /// Non-increasing.
    pub eigenvalues: Vec<f64>,
    /// Column-major `n × n`; column `i` pairs with `eigenvalues[i]`.
    pub eigenvectors: Vec<f64>,
}

impl FullDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, i: usize) -> &[f64] {
        let n = self.dim();
        &self.eigenvectors[i * n..(i + 1) * n]
    }

    pub fn top_k_sum(&self, k: usize) -> f64 {
        self.eigenvalues[..k].iter().sum()
    }

    /// Basis of the leading `k` eigenvectors.
    pub fn top_k_basis(&self, k: usize) -> Result<ProjectionBasis> {
        let n = self.dim();
        if k == 0 || k > n {
            return Err(Error::InvalidArgument(format!(
                "k = {k} out of range for dimension {n}"
            )));
        }
        Ok(ProjectionBasis::from_columns_unchecked(
            n,
            k,
            self.eigenvectors[..n * k].to_vec(),
        ))
    }

    /// `Q f(Λ) Qᵀ`, mirrored from the lower triangle so the result is
    /// exactly symmetric.
    pub fn reassemble_with(&self, values: &[f64]) -> SymmetricMatrix {
        let n = self.dim();
        assert_eq!(values.len(), n);
        let q = nalgebra::DMatrix::from_column_slice(n, n, &self.eigenvectors);
        let mut scaled = q.clone();
        for (c, &lam) in values.iter().enumerate() {
            scaled.column_mut(c).scale_mut(lam);
        }
        let full = scaled * q.transpose();
        SymmetricMatrix::from_lower_fn(n, |i, j| full[(i, j)])
    }

    pub fn reconstruct(&self) -> SymmetricMatrix {
        self.reassemble_with(&self.eigenvalues)
    }
}

/// Dense eigendecomposition, eigenvalues sorted descending. Each eigenvector's
/// largest-magnitude component is made positive so the output is canonical.
///
/// Panics if the underlying QL iteration fails to converge.
pub fn full_decompose(a: &SymmetricMatrix) -> FullDecomposition {
    let n = a.dim();
    let eig = a
        .to_nalgebra()
        .try_symmetric_eigen(f64::EPSILON, 1_000_000)
        .unwrap_or_else(|| {
            panic!(
                "symmetric eigendecomposition failed to converge (n = {n}, |A|_F = {})",
                a.frobenius_norm()
            )
        });
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = Vec::with_capacity(n * n);
    for &i in &order {
        let col = eig.eigenvectors.column(i);
        let lead = col
            .iter()
            .copied()
            .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        let sign = if lead < 0.0 { -1.0 } else { 1.0 };
        eigenvectors.extend(col.iter().map(|x| sign * x));
    }
    FullDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Exact sum of the `k` largest eigenvalues.
pub fn top_k_value(a: &SymmetricMatrix, k: usize) -> Result<f64> {
    if k == 0 || k > a.dim() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} out of range for dimension {}",
            a.dim()
        )));
    }
    Ok(full_decompose(a).top_k_sum(k))
}

/// Largest principal angle (radians) between the spans of two bases.
pub fn max_principal_angle(u: &ProjectionBasis, v: &ProjectionBasis) -> f64 {
    assert_eq!(u.dim(), v.dim(), "dimension mismatch");
    assert_eq!(u.rank(), v.rank(), "rank mismatch");
    let k = u.rank();
    // Singular values of UᵀV are the cosines; take eigenvalues of MᵀM.
    let m: Vec<f64> = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .map(|(i, j)| dot(u.column(i), v.column(j)))
        .collect();
    let mut mtm = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            mtm[i * k + j] = (0..k).map(|r| m[r * k + i] * m[r * k + j]).sum();
        }
    }
    let (vals, _) = small_symmetric_eigen(&mtm, k);
    let smallest = vals.last().copied().unwrap_or(1.0).clamp(0.0, 1.0);
    (1.0 - smallest).max(0.0).sqrt().asin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_sym(n: usize, seed: u64) -> SymmetricMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SymmetricMatrix::from_lower_fn(n, |_, _| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn top_k_diagonal() {
        let a = SymmetricMatrix::from_diag(&[3.0, 2.0, 1.0]);
        let r = top_k(&a, 2, &EigenConfig::default()).unwrap();
        assert!((r.rayleigh_value - 5.0).abs() < 1e-10);
        for col in r.basis.columns() {
            assert!(col[2].abs() < 1e-6);
        }
    }

    #[test]
    fn top_k_identity_any_basis() {
        let a = SymmetricMatrix::identity(20);
        for k in [1, 3, 20] {
            let r = top_k(&a, k, &EigenConfig::default()).unwrap();
            assert!((r.rayleigh_value - k as f64).abs() < 1e-12);
            assert!(r.basis.orthonormality_error() < 1e-10);
        }
    }

    #[test]
    fn top_k_matches_dense_oracle() {
        let a = random_sym(8, 11);
        let r = top_k(&a, 3, &EigenConfig::default()).unwrap();
        let exact = full_decompose(&a).top_k_sum(3);
        assert!((r.rayleigh_value - exact).abs() < 1e-6);

        let a = random_sym(40, 12);
        let r = top_k(&a, 3, &EigenConfig::default()).unwrap();
        assert!(r.converged);
        let exact = full_decompose(&a).top_k_sum(3);
        assert!((r.rayleigh_value - exact).abs() < 1e-6);
        assert!(r.rayleigh_value <= exact + 1e-9);
    }

    #[test]
    fn top_k_zero_matrix_returns_seeded_basis() {
        let a = SymmetricMatrix::zeros(5);
        let r1 = top_k(&a, 2, &EigenConfig::default().with_seed(9)).unwrap();
        let r2 = top_k(&a, 2, &EigenConfig::default().with_seed(9)).unwrap();
        let r3 = top_k(&a, 2, &EigenConfig::default().with_seed(10)).unwrap();
        assert_eq!(r1.basis, r2.basis);
        assert_ne!(r1.basis, r3.basis);
        assert!(r1.basis.orthonormality_error() < 1e-12);
    }

    #[test]
    fn top_k_rejects_bad_k() {
        let a = SymmetricMatrix::identity(3);
        assert!(top_k(&a, 0, &EigenConfig::default()).is_err());
        assert!(top_k(&a, 4, &EigenConfig::default()).is_err());
        assert!(top_k_value(&a, 4).is_err());
    }

    #[test]
    fn top_k_reports_non_convergence() {
        let a = random_sym(60, 3);
        let cfg = EigenConfig {
            max_iterations: 1,
            ..EigenConfig::default()
        };
        let r = top_k(&a, 2, &cfg).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 1);
        assert!(r.basis.orthonormality_error() < 1e-10);
    }

    #[test]
    fn top_k_value_cases() {
        let a = SymmetricMatrix::from_diag(&[5.0, 1.0, 0.0]);
        assert!((top_k_value(&a, 1).unwrap() - 5.0).abs() < 1e-12);
        assert!((top_k_value(&a, 3).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn top_k_value_dominates_random_rayleigh() {
        let a = random_sym(10, 4);
        let exact = top_k_value(&a, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let mut block: Vec<f64> = (0..40).map(|_| StandardNormal.sample(&mut rng)).collect();
            orthonormalize(&mut block, 10, 4, &mut rng);
            let u = ProjectionBasis::from_columns(10, 4, block).unwrap();
            assert!(u.rayleigh_value(&a) <= exact + 1e-12);
        }
    }

    #[test]
    fn full_decompose_analytic() {
        let d = full_decompose(&SymmetricMatrix::identity(3));
        assert_eq!(d.eigenvalues.len(), 3);
        for v in &d.eigenvalues {
            assert!((v - 1.0).abs() < 1e-14);
        }

        let a = SymmetricMatrix::from_row_major(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let d = full_decompose(&a);
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] + 1.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = d.eigenvector(0);
        assert!((v0[0] - h).abs() < 1e-14 && (v0[1] - h).abs() < 1e-14);
        let v1 = d.eigenvector(1);
        assert!((v1[0].abs() - h).abs() < 1e-14 && (v1[0] + v1[1]).abs() < 1e-14);

        // [[2,1],[1,2]] has roots 3 and 1.
        let a = SymmetricMatrix::from_row_major(2, vec![2.0, 1.0, 1.0, 2.0]).unwrap();
        let d = full_decompose(&a);
        assert!((d.eigenvalues[0] - 3.0).abs() < 1e-10);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-10);

        // [[2,-1,0],[-1,2,-1],[0,-1,2]] has roots 2+√2, 2, 2-√2.
        let a = SymmetricMatrix::from_row_major(
            3,
            vec![2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0],
        )
        .unwrap();
        let d = full_decompose(&a);
        let s = 2f64.sqrt();
        for (got, want) in d.eigenvalues.iter().zip([2.0 + s, 2.0, 2.0 - s]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn full_decompose_reconstructs() {
        let a = random_sym(6, 6);
        let d = full_decompose(&a);
        let err = d.reconstruct().add_scaled(-1.0, &a).frobenius_norm();
        assert!(err < 1e-10, "reconstruction error {err}");
        let q = ProjectionBasis::from_columns(6, 6, d.eigenvectors.clone()).unwrap();
        assert!(q.orthonormality_error() < 1e-9);
        assert!(d.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn small_solver_matches_oracle() {
        let a = random_sym(7, 8);
        let (vals, vecs) = small_symmetric_eigen(a.as_slice(), 7);
        for c in 0..7 {
            let col: Vec<f64> = (0..7).map(|r| vecs[r * 7 + c]).collect();
            let ac = a.mul_vec(&col);
            for r in 0..7 {
                assert!((ac[r] - vals[c] * col[r]).abs() < 1e-12);
            }
        }
        let d = full_decompose(&a);
        for (x, y) in vals.iter().zip(&d.eigenvalues) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn principal_angle_basics() {
        let e = ProjectionBasis::standard(4, 2).unwrap();
        assert!(max_principal_angle(&e, &e) < 1e-7);
        let f = ProjectionBasis::from_columns(
            4,
            2,
            vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        )
        .unwrap();
        assert!((max_principal_angle(&e, &f) - std::f64::consts::FRAC_PI_2).abs() < 1e-7);
    }
}
