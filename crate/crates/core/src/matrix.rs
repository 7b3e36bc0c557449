//! Dense symmetric matrices, trial instances and rank-k projection bases.
//!
//! Everything here is a plain value type. The full square is stored; the
//! symmetric accessors and the update kernels keep `a[i][j] == a[j][i]`
//! bit-exactly.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::Hasher;

use crate::error::{Error, Result};

/// Numerical slack used by the invariant checks.
pub mod tol {
    /// Allowed deviation of a sparse instance from unit norm.
    pub const UNIT_NORM: f64 = 1e-12;
    /// Allowed eigenvalue excursion outside `[0, 1]` for dense instances.
    pub const DENSE_SPECTRUM: f64 = 1e-9;
    /// Allowed deviation of `UᵀU` from the identity.
    pub const ORTHONORMAL: f64 = 1e-10;
    /// Allowed error of `P² = P` and `tr P = k` for an implied projector.
    pub const PROJECTOR: f64 = 1e-9;
}

/// Dense `n × n` real symmetric matrix.
#[derive(Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = d;
        }
        m
    }

    /// Builds a matrix from the lower triangle produced by `f(i, j)` with `j <= i`.
    pub fn from_lower_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                let v = f(i, j);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v;
            }
        }
        m
    }

    /// Builds a matrix from a row-major square array, which must be exactly symmetric.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be at least 1".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        for i in 0..dim {
            for j in 0..i {
                if data[i * dim + j] != data[j * dim + i] {
                    return Err(Error::InvalidArgument(format!(
                        "entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
            }
        }
        Ok(Self { dim, data })
    }

    /// `x xᵀ` for an arbitrary vector.
    pub fn outer(x: &[f64]) -> Self {
        Self::from_lower_fn(x.len(), |i, j| x[i] * x[j])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Sets `(i, j)` and `(j, i)` together.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    /// Row-major view of the full square.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest absolute row sum, an upper bound on the spectral radius.
    pub fn max_row_abs_sum(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    /// `self + c·I`.
    pub fn shifted(&self, c: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.data[i * self.dim + i] += c;
        }
        m
    }

    /// Returns `A + cB`.
    pub fn add_scaled(&self, c: f64, other: &SymmetricMatrix) -> SymmetricMatrix {
        let mut out = self.clone();
        out.add_scaled_assign(c, other);
        out
    }

    /// `A ← A + cB`.
    pub fn add_scaled_assign(&mut self, c: f64, other: &SymmetricMatrix) {
        check_dims(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    /// Returns `A + x xᵀ`. The caller guarantees `‖x‖ = 1` when the result is
    /// meant to accumulate sparse instances; see [`Instance::sparse`].
    pub fn rank_one_update(&self, x: &[f64]) -> SymmetricMatrix {
        let mut out = self.clone();
        out.rank_one_update_assign(x);
        out
    }

    /// `A ← A + x xᵀ` in `O(n²)`.
    pub fn rank_one_update_assign(&mut self, x: &[f64]) {
        self.rank_one_update_scaled_assign(1.0, x);
    }

    /// `A ← A + c·x xᵀ`.
    pub fn rank_one_update_scaled_assign(&mut self, c: f64, x: &[f64]) {
        check_dims(self.dim, x.len());
        let n = self.dim;
        for i in 0..n {
            let cxi = c * x[i];
            let row = &mut self.data[i * n..(i + 1) * n];
            for (a, &xj) in row.iter_mut().zip(x) {
                *a += cxi * xj;
            }
        }
    }

    /// Adds an instance in place: rank-one for sparse, full add for dense.
    pub fn add_instance_assign(&mut self, inst: &Instance) {
        match inst {
            Instance::Sparse(x) => self.rank_one_update_assign(x),
            Instance::Dense(m) => self.add_scaled_assign(1.0, m),
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        check_dims(self.dim, x.len());
        (0..self.dim).map(|i| dot(self.row(i), x)).collect()
    }

    /// `xᵀ A x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        dot(x, &self.mul_vec(x))
    }

    /// `A · U` for a column-major `n × cols` block.
    pub fn mul_block(&self, block: &[f64], cols: usize) -> Vec<f64> {
        let n = self.dim;
        assert_eq!(block.len(), n * cols, "block has wrong length");
        let mut out = vec![0.0; n * cols];
        for c in 0..cols {
            let x = &block[c * n..(c + 1) * n];
            let y = &mut out[c * n..(c + 1) * n];
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = dot(self.row(i), x);
            }
        }
        out
    }

    /// Stable fingerprint of the exact bit pattern, for run diagnostics.
    pub fn digest(&self) -> u64 {
        let mut h = DefaultHasher::new();
        h.write_usize(self.dim);
        for v in &self.data {
            h.write_u64(v.to_bits());
        }
        h.finish()
    }

    pub(crate) fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }
}

impl fmt::Debug for SymmetricMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymmetricMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// `tr(AB) = Σᵢⱼ Aᵢⱼ Bᵢⱼ` for symmetric arguments.
pub fn trace_inner_product(a: &SymmetricMatrix, b: &SymmetricMatrix) -> f64 {
    check_dims(a.dim, b.dim);
    a.data.iter().zip(&b.data).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

#[inline]
fn check_dims(expected: usize, got: usize) {
    assert!(
        expected == got,
        "dimension mismatch: expected {expected}, got {got}"
    );
}

/// The data revealed in one trial.
#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    /// Unit vector `x`, standing for the rank-one matrix `x xᵀ`.
    Sparse(Vec<f64>),
    /// PSD matrix with spectrum in `[0, 1]`.
    Dense(SymmetricMatrix),
}

impl Instance {
    /// Wraps a vector that must already have unit norm.
    pub fn sparse(x: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidInstance("empty vector".into()));
        }
        let nrm = norm(&x);
        if (nrm - 1.0).abs() > tol::UNIT_NORM {
            return Err(Error::InvalidInstance(format!(
                "sparse instance has norm {nrm}, expected 1"
            )));
        }
        Ok(Instance::Sparse(x))
    }

    /// Normalizes `x` to unit length. Fails on the zero vector.
    pub fn sparse_normalized(mut x: Vec<f64>) -> Result<Self> {
        let nrm = norm(&x);
        if !nrm.is_finite() || nrm <= 0.0 {
            return Err(Error::InvalidInstance(format!(
                "cannot normalize vector of norm {nrm}"
            )));
        }
        x.iter_mut().for_each(|v| *v /= nrm);
        Ok(Instance::Sparse(x))
    }

    /// Wraps a matrix whose eigenvalues must lie in `[0, 1]`.
    pub fn dense(m: SymmetricMatrix) -> Result<Self> {
        let eig = crate::eigen::full_decompose(&m);
        let hi = eig.eigenvalues[0];
        let lo = *eig.eigenvalues.last().unwrap();
        if lo < -tol::DENSE_SPECTRUM || hi > 1.0 + tol::DENSE_SPECTRUM {
            return Err(Error::InvalidInstance(format!(
                "dense instance spectrum [{lo}, {hi}] not within [0, 1]"
            )));
        }
        Ok(Instance::Dense(m))
    }

    /// Standard basis vector `e_i` of length `dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut x = vec![0.0; dim];
        x[i] = 1.0;
        Instance::Sparse(x)
    }

    pub fn dim(&self) -> usize {
        match self {
            Instance::Sparse(x) => x.len(),
            Instance::Dense(m) => m.dim(),
        }
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self, Instance::Sparse(_))
    }

    /// The instance as an explicit matrix.
    pub fn to_matrix(&self) -> SymmetricMatrix {
        match self {
            Instance::Sparse(x) => SymmetricMatrix::outer(x),
            Instance::Dense(m) => m.clone(),
        }
    }

    /// `tr(X²)`; equals 1 for sparse instances.
    pub fn squared_frobenius(&self) -> f64 {
        match self {
            Instance::Sparse(x) => dot(x, x).powi(2),
            Instance::Dense(m) => trace_inner_product(m, m),
        }
    }
}

/// `n × k` matrix with orthonormal columns, representing `P = UUᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionBasis {
    dim: usize,
    rank: usize,
    /// Column-major.
    cols: Vec<f64>,
}

impl ProjectionBasis {
    /// Validates orthonormality of a column-major `dim × rank` array.
    pub fn from_columns(dim: usize, rank: usize, cols: Vec<f64>) -> Result<Self> {
        if rank == 0 || rank > dim {
            return Err(Error::InvalidArgument(format!(
                "rank {rank} out of range for dimension {dim}"
            )));
        }
        if cols.len() != dim * rank {
            return Err(Error::DimensionMismatch {
                expected: dim * rank,
                got: cols.len(),
            });
        }
        let basis = Self { dim, rank, cols };
        let err = basis.orthonormality_error();
        if err > tol::ORTHONORMAL {
            return Err(Error::InvalidArgument(format!(
                "columns are not orthonormal (max |UᵀU - I| = {err:e})"
            )));
        }
        Ok(basis)
    }

    pub(crate) fn from_columns_unchecked(dim: usize, rank: usize, cols: Vec<f64>) -> Self {
        debug_assert_eq!(cols.len(), dim * rank);
        Self { dim, rank, cols }
    }

    /// First `rank` standard basis vectors.
    pub fn standard(dim: usize, rank: usize) -> Result<Self> {
        let mut cols = vec![0.0; dim * rank];
        for c in 0..rank.min(dim) {
            cols[c * dim + c] = 1.0;
        }
        Self::from_columns(dim, rank, cols)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn column(&self, c: usize) -> &[f64] {
        &self.cols[c * self.dim..(c + 1) * self.dim]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.cols.chunks_exact(self.dim)
    }

    pub fn as_column_major(&self) -> &[f64] {
        &self.cols
    }

    /// `max |UᵀU - I|` entrywise.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..self.rank {
            for b in 0..=a {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot(self.column(a), self.column(b)) - target).abs());
            }
        }
        worst
    }

    /// Materializes `P = UUᵀ`.
    pub fn projector(&self) -> SymmetricMatrix {
        let mut p = SymmetricMatrix::zeros(self.dim);
        for col in self.columns() {
            p.rank_one_update_assign(col);
        }
        p
    }

    /// `tr(UᵀAU)`.
    pub fn rayleigh_value(&self, a: &SymmetricMatrix) -> f64 {
        check_dims(self.dim, a.dim());
        self.columns().map(|u| a.quadratic_form(u)).sum()
    }
}

/// Gain `tr(UUᵀ X)` of a rank-k projection on one instance.
///
/// Sparse instances use `‖Uᵀx‖²` so the projector is never formed.
pub fn gain(basis: &ProjectionBasis, inst: &Instance) -> f64 {
    check_dims(basis.dim(), inst.dim());
    match inst {
        Instance::Sparse(x) => basis.columns().map(|u| dot(u, x).powi(2)).sum(),
        Instance::Dense(m) => basis.rayleigh_value(m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sym(n: usize, rng: &mut impl Rng) -> SymmetricMatrix {
        SymmetricMatrix::from_lower_fn(n, |_, _| rng.random_range(-1.0..1.0))
    }

    fn random_unit(n: usize, rng: &mut impl Rng) -> Vec<f64> {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let nrm = norm(&x);
        x.into_iter().map(|v| v / nrm).collect()
    }

    /// Orthonormal columns by classical Gram-Schmidt, kept separate from the
    /// library's QR so the gain oracle does not share code with it.
    fn random_basis(n: usize, k: usize, rng: &mut impl Rng) -> ProjectionBasis {
        let mut cols: Vec<Vec<f64>> = Vec::new();
        while cols.len() < k {
            let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            for _ in 0..2 {
                for c in &cols {
                    let p = dot(c, &v);
                    v.iter_mut().zip(c).for_each(|(a, b)| *a -= p * b);
                }
            }
            let nrm = norm(&v);
            cols.push(v.into_iter().map(|a| a / nrm).collect());
        }
        ProjectionBasis::from_columns(n, k, cols.concat()).unwrap()
    }

    #[test]
    fn trace_inner_product_identity_and_diag() {
        let i3 = SymmetricMatrix::identity(3);
        assert_eq!(trace_inner_product(&i3, &i3), 3.0);
        let a = SymmetricMatrix::from_diag(&[1.0, 2.0]);
        let b = SymmetricMatrix::from_diag(&[3.0, 4.0]);
        assert_eq!(trace_inner_product(&a, &b), 11.0);
    }

    #[test]
    fn trace_inner_product_matches_double_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_sym(6, &mut rng);
        let b = random_sym(6, &mut rng);
        let mut brute = 0.0;
        for i in 0..6 {
            for j in 0..6 {
                brute += a.get(i, j) * b.get(j, i);
            }
        }
        assert!((trace_inner_product(&a, &b) - brute).abs() < 1e-12);
        assert_eq!(trace_inner_product(&a, &b), trace_inner_product(&b, &a));
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn trace_inner_product_rejects_mismatch() {
        trace_inner_product(&SymmetricMatrix::zeros(2), &SymmetricMatrix::zeros(3));
    }

    #[test]
    fn gain_aligned_and_orthogonal() {
        let u = ProjectionBasis::standard(3, 1).unwrap();
        assert_eq!(gain(&u, &Instance::basis(3, 0)), 1.0);
        assert_eq!(gain(&u, &Instance::basis(3, 1)), 0.0);
    }

    #[test]
    fn gain_matches_materialized_projector() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random_basis(5, 2, &mut rng);
        let x = random_unit(5, &mut rng);
        // P and x xᵀ built by hand.
        let mut p = [0.0; 25];
        for c in u.columns() {
            for i in 0..5 {
                for j in 0..5 {
                    p[i * 5 + j] += c[i] * c[j];
                }
            }
        }
        let mut expected = 0.0;
        for i in 0..5 {
            for j in 0..5 {
                expected += p[i * 5 + j] * x[j] * x[i];
            }
        }
        let got = gain(&u, &Instance::sparse(x.clone()).unwrap());
        assert!((got - expected).abs() < 1e-12);
        let dense = gain(&u, &Instance::Dense(SymmetricMatrix::outer(&x)));
        assert!((dense - expected).abs() < 1e-12);
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn gain_rejects_mismatch() {
        let u = ProjectionBasis::standard(3, 1).unwrap();
        gain(&u, &Instance::basis(4, 0));
    }

    #[test]
    fn add_scaled_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_sym(4, &mut rng);
        let b = random_sym(4, &mut rng);
        assert_eq!(a.add_scaled(0.0, &b), a);
        assert_eq!(SymmetricMatrix::zeros(4).add_scaled(1.0, &b), b);
        assert!(a.add_scaled(-1.0, &a).is_zero());
    }

    #[test]
    fn rank_one_update_cases() {
        let z = SymmetricMatrix::zeros(3).rank_one_update(&[1.0, 0.0, 0.0]);
        assert_eq!(z, SymmetricMatrix::from_diag(&[1.0, 0.0, 0.0]));
        let m = SymmetricMatrix::identity(2).rank_one_update(&[0.0, 1.0]);
        assert_eq!(m, SymmetricMatrix::from_diag(&[1.0, 2.0]));

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_sym(7, &mut rng);
        let x = random_unit(7, &mut rng);
        let mut explicit = vec![0.0; 49];
        for i in 0..7 {
            for j in 0..7 {
                explicit[i * 7 + j] = a.get(i, j) + x[i] * x[j];
            }
        }
        let got = a.rank_one_update(&x);
        for (g, e) in got.as_slice().iter().zip(&explicit) {
            assert!((g - e).abs() < 1e-15);
        }
    }

    #[test]
    fn projector_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_basis(6, 3, &mut rng);
        let p = u.projector();
        assert!((p.trace() - 3.0).abs() < tol::PROJECTOR);
        for i in 0..6 {
            let pi = p.mul_vec(p.row(i));
            for j in 0..6 {
                assert!((pi[j] - p.get(i, j)).abs() < tol::PROJECTOR);
            }
        }
    }

    #[test]
    fn instance_validation() {
        assert!(Instance::sparse(vec![1.0, 1.0]).is_err());
        assert!(Instance::sparse(vec![0.6, 0.8]).is_ok());
        assert!(Instance::sparse_normalized(vec![0.0, 0.0]).is_err());
        assert!(Instance::dense(SymmetricMatrix::from_diag(&[1.5, 0.0])).is_err());
        assert!(Instance::dense(SymmetricMatrix::from_diag(&[-0.1, 0.0])).is_err());
        assert!(Instance::dense(SymmetricMatrix::from_diag(&[1.0, 0.5])).is_ok());
        assert!(ProjectionBasis::from_columns(2, 1, vec![1.0, 1.0]).is_err());
        assert!(ProjectionBasis::from_columns(2, 3, vec![0.0; 6]).is_err());
    }

    #[test]
    fn from_row_major_requires_symmetry() {
        assert!(SymmetricMatrix::from_row_major(2, vec![1.0, 2.0, 3.0, 4.0]).is_err());
        assert!(SymmetricMatrix::from_row_major(2, vec![1.0, 2.0, 2.0, 4.0]).is_ok());
    }
}
