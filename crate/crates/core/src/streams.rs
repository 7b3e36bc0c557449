//! Instance-sequence generators and the instance file format.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::distr::weighted::WeightedIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::eigen::{top_k, EigenConfig, FullDecomposition};
use crate::error::{Error, Result};
use crate::matrix::{norm, tol, Instance, SymmetricMatrix};

/// Which generator to run, with its kind-specific parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum StreamKind {
    /// `x_t = normalize(√ρ·v + g_t)` around a fixed seeded unit direction `v`.
    SparseIid { spike: f64 },
    /// `X_t = Q Λ_t Qᵀ` with `Λ_t` i.i.d. uniform on `[0, profile_i]`.
    DenseIid {
        /// Per-eigenvalue upper bounds in `[0, 1]`; `None` means all ones.
        profile: Option<Vec<f64>>,
        /// Draw a fresh `Q` every trial instead of once per stream.
        rotate_each_trial: bool,
    },
    /// Plays against noise-free Follow the Leader with the given
    /// (published) tie-break configuration, for `k = 1`.
    AdversarialAlternating { tie_break: EigenConfig },
    /// Standard basis vectors drawn from a fixed categorical distribution.
    /// `None` draws the weights from the stream seed.
    DiagonalExpert { weights: Option<Vec<f64>> },
    FromFile { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq)]
pub struct StreamSpec {
    pub kind: StreamKind,
    pub n: usize,
    pub horizon: usize,
    pub seed: u64,
}

impl StreamSpec {
    pub fn new(kind: StreamKind, n: usize, horizon: usize, seed: u64) -> Self {
        Self {
            kind,
            n,
            horizon,
            seed,
        }
    }

    /// Whether the stream emits sparse (rank-one) instances. File streams
    /// read the answer from their header.
    pub fn is_sparse(&self) -> Result<bool> {
        Ok(match &self.kind {
            StreamKind::DenseIid { .. } => false,
            StreamKind::FromFile { path } => read_header(path)?.1,
            _ => true,
        })
    }
}

/// Produces exactly `spec.horizon` instances.
pub fn generate(spec: &StreamSpec) -> Result<Vec<Instance>> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::InvalidArgument("stream dimension must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match &spec.kind {
        StreamKind::SparseIid { spike } => sparse_iid(n, spec.horizon, *spike, &mut rng),
        StreamKind::DenseIid {
            profile,
            rotate_each_trial,
        } => dense_iid(n, spec.horizon, profile.as_deref(), *rotate_each_trial, &mut rng),
        StreamKind::AdversarialAlternating { tie_break } => {
            adversarial_alternating(n, spec.horizon, tie_break)
        }
        StreamKind::DiagonalExpert { weights } => {
            diagonal_expert(n, spec.horizon, weights.as_deref(), &mut rng)
        }
        StreamKind::FromFile { path } => {
            let file = read_instance_file(path)?;
            if file.n != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: file.n,
                });
            }
            if file.instances.len() < spec.horizon {
                return Err(Error::InvalidArgument(format!(
                    "{} holds {} instances, horizon is {}",
                    path.display(),
                    file.instances.len(),
                    spec.horizon
                )));
            }
            let mut instances = file.instances;
            instances.truncate(spec.horizon);
            Ok(instances)
        }
    }
}

fn gaussian_vec(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// The spike direction `v` a `SparseIid` stream with this seed uses.
pub fn sparse_spike_direction(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    unit_direction(n, &mut rng)
}

fn unit_direction(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v = gaussian_vec(n, rng);
        let nrm = norm(&v);
        if nrm > 1e-12 {
            return v.into_iter().map(|x| x / nrm).collect();
        }
    }
}

fn sparse_iid(n: usize, horizon: usize, spike: f64, rng: &mut ChaCha8Rng) -> Result<Vec<Instance>> {
    if !(spike >= 0.0 && spike.is_finite()) {
        return Err(Error::InvalidArgument(format!("spike must be >= 0, got {spike}")));
    }
    let v = unit_direction(n, rng);
    let amp = spike.sqrt();
    let mut out = Vec::with_capacity(horizon);
    while out.len() < horizon {
        let g = gaussian_vec(n, rng);
        let x: Vec<f64> = v.iter().zip(&g).map(|(a, b)| amp * a + b).collect();
        if let Ok(inst) = Instance::sparse_normalized(x) {
            out.push(inst);
        }
    }
    Ok(out)
}

/// Haar-distributed orthogonal matrix, column-major.
pub(crate) fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let g = nalgebra::DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..n {
        if r[(c, c)] < 0.0 {
            q.column_mut(c).neg_mut();
        }
    }
    q.as_slice().to_vec()
}

fn dense_iid(
    n: usize,
    horizon: usize,
    profile: Option<&[f64]>,
    rotate_each_trial: bool,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Instance>> {
    let caps = match profile {
        Some(p) => {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.len(),
                });
            }
            if p.iter().any(|&c| !(0.0..=1.0).contains(&c)) {
                return Err(Error::InvalidArgument("eigenvalue profile must lie in [0, 1]".into()));
            }
            p.to_vec()
        }
        None => vec![1.0; n],
    };
    let mut q = random_orthogonal(n, rng);
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        if rotate_each_trial {
            q = random_orthogonal(n, rng);
        }
        let values: Vec<f64> = caps.iter().map(|c| c * rng.random::<f64>()).collect();
        let basis = FullDecomposition {
            eigenvalues: values.clone(),
            eigenvectors: q.clone(),
        };
        out.push(Instance::Dense(basis.reassemble_with(&values)));
    }
    Ok(out)
}

/// Against noise-free FTL with tie-break `tie_break`, for `k = 1`: `e₁` first,
/// then the unit vector in `span{e₁, e₂}` orthogonal to FTL's prediction.
/// FTL, replaying the same matrix arithmetic, gains nothing after trial 1.
fn adversarial_alternating(n: usize, horizon: usize, tie_break: &EigenConfig) -> Result<Vec<Instance>> {
    if n < 2 {
        return Err(Error::InvalidArgument("adversarial stream needs n >= 2".into()));
    }
    let mut cumulative = SymmetricMatrix::zeros(n);
    let mut out = Vec::with_capacity(horizon);
    for t in 1..=horizon {
        let x = if t == 1 {
            basis_vec(n, 0)
        } else {
            let leader = top_k(&cumulative, 1, tie_break)?;
            let u = leader.basis.column(0);
            let (p, q) = (u[0], u[1]);
            let len = (p * p + q * q).sqrt();
            if len > 1e-12 {
                let mut x = vec![0.0; n];
                x[0] = -q / len;
                x[1] = p / len;
                x
            } else {
                basis_vec(n, 0)
            }
        };
        cumulative.rank_one_update_assign(&x);
        out.push(Instance::Sparse(x));
    }
    Ok(out)
}

fn basis_vec(n: usize, i: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    x[i] = 1.0;
    x
}

fn diagonal_expert(
    n: usize,
    horizon: usize,
    weights: Option<&[f64]>,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Instance>> {
    let w: Vec<f64> = match weights {
        Some(w) if w.len() != n => {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: w.len(),
            })
        }
        Some(w) => w.to_vec(),
        None => (0..n).map(|_| rng.random::<f64>() + 1e-3).collect(),
    };
    let dist = WeightedIndex::new(&w)
        .map_err(|e| Error::InvalidArgument(format!("bad categorical weights: {e}")))?;
    Ok((0..horizon)
        .map(|_| Instance::basis(n, dist.sample(rng)))
        .collect())
}

/// Parsed instance file.
#[derive(Clone, Debug)]
pub struct InstanceFile {
    pub n: usize,
    pub sparse: bool,
    pub instances: Vec<Instance>,
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn parse_header(path: &Path, line: &str) -> Result<(usize, bool)> {
    let tok: Vec<&str> = line.split_whitespace().collect();
    if tok.len() != 4 || tok[0] != "n" || tok[2] != "kind" {
        return Err(parse_err(path, 1, "expected header 'n <dim> kind <sparse|dense>'"));
    }
    let n: usize = tok[1]
        .parse()
        .map_err(|_| parse_err(path, 1, format!("bad dimension '{}'", tok[1])))?;
    if n == 0 {
        return Err(parse_err(path, 1, "dimension must be at least 1"));
    }
    let sparse = match tok[3] {
        "sparse" => true,
        "dense" => false,
        other => return Err(parse_err(path, 1, format!("unknown kind '{other}'"))),
    };
    Ok((n, sparse))
}

fn read_header(path: &Path) -> Result<(usize, bool)> {
    let text = fs::read_to_string(path)?;
    let first = text.lines().next().unwrap_or("");
    parse_header(path, first)
}

fn parse_row(path: &Path, line_no: usize, line: &str, expected: usize) -> Result<Vec<f64>> {
    let vals: Vec<f64> = line
        .split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(path, line_no, format!("bad number '{t}'")))
        })
        .collect::<Result<_>>()?;
    if vals.len() != expected {
        return Err(parse_err(
            path,
            line_no,
            format!("expected {expected} values, found {}", vals.len()),
        ));
    }
    Ok(vals)
}

/// Reads the instance file format:
///
/// ```text
/// n <dim> kind <sparse|dense>
/// ```
///
/// then one instance per line for `sparse` (normalized on load), or for
/// `dense` one lower triangle per instance (row `i` holds `i + 1` values)
/// with instances separated by blank lines.
pub fn read_instance_file(path: &Path) -> Result<InstanceFile> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let (n, sparse) = parse_header(path, header)?;
    let mut instances = Vec::new();

    if sparse {
        for (no, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let x = parse_row(path, no, line, n)?;
            let nrm = norm(&x);
            if (nrm - 1.0).abs() > 1e-6 {
                log::warn!("{}:{no}: row norm {nrm}, normalizing", path.display());
            }
            let inst = if (nrm - 1.0).abs() <= tol::UNIT_NORM {
                Instance::sparse(x)
            } else {
                Instance::sparse_normalized(x)
            }
            .map_err(|e| parse_err(path, no, e.to_string()))?;
            instances.push(inst);
        }
    } else {
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut start = 0;
        for (no, line) in lines {
            if line.trim().is_empty() {
                if !rows.is_empty() {
                    return Err(parse_err(
                        path,
                        no,
                        format!("instance starting at line {start} has {} of {n} rows", rows.len()),
                    ));
                }
                continue;
            }
            if rows.is_empty() {
                start = no;
            }
            rows.push(parse_row(path, no, line, rows.len() + 1)?);
            if rows.len() == n {
                let m = SymmetricMatrix::from_lower_fn(n, |i, j| rows[i][j]);
                let inst = Instance::dense(m).map_err(|e| parse_err(path, start, e.to_string()))?;
                instances.push(inst);
                rows.clear();
            }
        }
        if !rows.is_empty() {
            return Err(parse_err(
                path,
                start,
                format!("truncated instance: {} of {n} rows", rows.len()),
            ));
        }
    }
    Ok(InstanceFile {
        n,
        sparse,
        instances,
    })
}

/// Writes instances in the format [`read_instance_file`] accepts. All
/// instances must share one kind and dimension.
pub fn write_instance_file(path: &Path, instances: &[Instance]) -> Result<()> {
    let first = instances
        .first()
        .ok_or_else(|| Error::InvalidArgument("nothing to write".into()))?;
    let n = first.dim();
    let sparse = first.is_sparse();
    let mut out = format!("n {n} kind {}\n", if sparse { "sparse" } else { "dense" });
    for (idx, inst) in instances.iter().enumerate() {
        if inst.dim() != n || inst.is_sparse() != sparse {
            return Err(Error::InvalidArgument(format!(
                "instance {idx} does not match the first instance's kind/dimension"
            )));
        }
        match inst {
            Instance::Sparse(x) => {
                let row: Vec<String> = x.iter().map(|v| format!("{v:e}")).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
            Instance::Dense(m) => {
                if idx > 0 {
                    out.push('\n');
                }
                for i in 0..n {
                    let row: Vec<String> = (0..=i).map(|j| format!("{:e}", m.get(i, j))).collect();
                    writeln!(out, "{}", row.join(" ")).unwrap();
                }
            }
        }
    }
    fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::full_decompose;
    use crate::learners::{FtlLearner, OnlineLearner};

    #[test]
    fn huge_spike_aligns_with_direction() {
        let spec = StreamSpec::new(StreamKind::SparseIid { spike: 1e6 }, 6, 50, 3);
        let v = sparse_spike_direction(6, 3);
        for inst in generate(&spec).unwrap() {
            let Instance::Sparse(x) = inst else { panic!() };
            let cos: f64 = x.iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!(cos.clamp(-1.0, 1.0).acos() < 1e-2);
            assert!((norm(&x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dense_instances_are_bounded_psd() {
        for rotate in [false, true] {
            let spec = StreamSpec::new(
                StreamKind::DenseIid {
                    profile: None,
                    rotate_each_trial: rotate,
                },
                5,
                30,
                1,
            );
            for inst in generate(&spec).unwrap() {
                let d = full_decompose(&inst.to_matrix());
                assert!(d.eigenvalues[0] <= 1.0 + 1e-9);
                assert!(*d.eigenvalues.last().unwrap() >= -1e-9);
            }
        }
    }

    #[test]
    fn adversarial_counts_balance() {
        let spec = StreamSpec::new(
            StreamKind::AdversarialAlternating {
                tie_break: EigenConfig::default(),
            },
            2,
            6,
            0,
        );
        let mut cum = SymmetricMatrix::zeros(2);
        for inst in generate(&spec).unwrap() {
            cum.add_instance_assign(&inst);
        }
        assert!((cum.get(0, 0) - 3.0).abs() < 1e-12);
        assert!((cum.get(1, 1) - 3.0).abs() < 1e-12);
        assert!(generate(&StreamSpec::new(
            StreamKind::AdversarialAlternating {
                tie_break: EigenConfig::default()
            },
            1,
            3,
            0
        ))
        .is_err());
    }

    #[test]
    fn adversarial_starves_matched_ftl() {
        let cfg = EigenConfig::default().with_seed(77);
        let spec = StreamSpec::new(StreamKind::AdversarialAlternating { tie_break: cfg }, 3, 200, 0);
        let stream = generate(&spec).unwrap();
        let mut ftl = FtlLearner::new(3, 1, cfg).unwrap();
        let mut total = 0.0;
        for (t, inst) in stream.iter().enumerate() {
            let g = ftl.predict().unwrap().gain(inst);
            if t > 0 {
                assert!(g < 1e-12, "trial {} gain {g}", t + 1);
            }
            total += g;
            ftl.update(inst).unwrap();
        }
        assert!(total <= 1.0 + 1e-9);
    }

    #[test]
    fn diagonal_expert_emits_basis_vectors() {
        let spec = StreamSpec::new(StreamKind::DiagonalExpert { weights: None }, 4, 100, 9);
        for inst in generate(&spec).unwrap() {
            let Instance::Sparse(x) = inst else { panic!() };
            assert_eq!(x.iter().filter(|&&v| v == 1.0).count(), 1);
            assert_eq!(x.iter().filter(|&&v| v == 0.0).count(), 3);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = StreamSpec::new(StreamKind::SparseIid { spike: 2.0 }, 5, 20, 4);
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = StreamSpec { seed: 5, ..spec.clone() };
        assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn file_round_trip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let sparse = generate(&StreamSpec::new(StreamKind::SparseIid { spike: 1.0 }, 3, 4, 1)).unwrap();
        let p = dir.path().join("s.txt");
        write_instance_file(&p, &sparse).unwrap();
        let back = read_instance_file(&p).unwrap();
        assert!(back.sparse);
        assert_eq!(back.instances, sparse);

        let dense = generate(&StreamSpec::new(
            StreamKind::DenseIid {
                profile: None,
                rotate_each_trial: false,
            },
            3,
            2,
            1,
        ))
        .unwrap();
        let p = dir.path().join("d.txt");
        write_instance_file(&p, &dense).unwrap();
        let back = read_instance_file(&p).unwrap();
        assert!(!back.sparse);
        assert_eq!(back.instances, dense);

        let p = dir.path().join("bad.txt");
        fs::write(&p, "n 2 kind sparse\n1 0\n0.5 zz\n").unwrap();
        match read_instance_file(&p) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        fs::write(&p, "n 2 kind dense\n1\n0 1\n\n1\n").unwrap();
        assert!(matches!(read_instance_file(&p), Err(Error::Parse { line: 5, .. })));
        fs::write(&p, "n 2 kind dense\n2\n0 1\n").unwrap();
        assert!(matches!(read_instance_file(&p), Err(Error::Parse { line: 2, .. })));
        fs::write(&p, "dim 2\n").unwrap();
        assert!(matches!(read_instance_file(&p), Err(Error::Parse { line: 1, .. })));

        fs::write(&p, "n 2 kind sparse\n3 4\n").unwrap();
        let f = read_instance_file(&p).unwrap();
        assert_eq!(f.instances[0], Instance::Sparse(vec![0.6, 0.8]));
    }
}
