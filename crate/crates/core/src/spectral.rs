//! Singular-value pairs of antisymmetric matrices.
//!
//! A real antisymmetric matrix has eigenvalues `±i q_j` (plus zeros), and its
//! singular values are the `q_j`, each appearing twice. [`singular_pairs`]
//! collapses each pair to one `q_j`; these are the weights of the canonical
//! Lévy-area representation of the chaos integral.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::asymptotics::WeightSequenceSpec;
use crate::error::{numeric, validation, Error, Result};

const ANTISYMMETRY_TOL: f64 = 1e-12;
const ZERO_TOL: f64 = 1e-12;
const PAIR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct AntisymmetricMatrix {
    inner: DMatrix<f64>,
}

impl AntisymmetricMatrix {
    pub fn new(inner: DMatrix<f64>) -> Result<Self> {
        if !inner.is_square() || inner.nrows() == 0 {
            return Err(validation(format!(
                "matrix must be square and non-empty, got {}x{}",
                inner.nrows(),
                inner.ncols()
            )));
        }
        if inner.iter().any(|v| !v.is_finite()) {
            return Err(validation("matrix has non-finite entries"));
        }
        let scale = inner.amax().max(1.0);
        let defect = (&inner + inner.transpose()).amax();
        if defect > ANTISYMMETRY_TOL * scale {
            return Err(validation(format!("matrix is not antisymmetric: max |A + Aᵀ| = {defect:e}")));
        }
        Ok(Self { inner })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(validation("rows of unequal length or non-square matrix"));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Direct sum of canonical blocks `[[0, q], [−q, 0]]`.
    pub fn canonical(q: &[f64]) -> Result<Self> {
        let n = 2 * q.len();
        let mut m = DMatrix::zeros(n, n);
        for (j, &v) in q.iter().enumerate() {
            m[(2 * j, 2 * j + 1)] = v;
            m[(2 * j + 1, 2 * j)] = -v;
        }
        Self::new(m)
    }

    /// JSON array of rows, e.g. `[[0, 1], [-1, 0]]`.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let rows: Vec<Vec<f64>> =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
        Self::from_rows(&rows)
    }

    /// Comma-separated rows; blank lines and `#` comments are skipped.
    pub fn from_csv_str(s: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(',')
                .map(|f| {
                    f.trim().parse::<f64>().map_err(|e| {
                        Error::Parse(format!("matrix CSV line {}: {f:?}: {e}", lineno + 1))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }

    /// Loads a `.json` or CSV file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json_str(&text),
            _ => Self::from_csv_str(&text),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.inner.norm_squared()
    }

    /// `Uᵀ A U` for orthogonal `U`.
    pub fn conjugate(&self, u: &DMatrix<f64>) -> Result<Self> {
        let m = u.transpose() * &self.inner * u;
        // Re-antisymmetrize rounding noise.
        Self::new((&m - m.transpose()) * 0.5)
    }
}

/// Ordered singular-value pairs `q₁ ≥ q₂ ≥ … > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    q: Vec<f64>,
}

impl SpectralData {
    pub fn new(q: Vec<f64>) -> Result<Self> {
        if q.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(validation("singular values must be positive and finite"));
        }
        if q.windows(2).any(|w| w[0] < w[1]) {
            return Err(validation("singular values must be non-increasing"));
        }
        Ok(Self { q })
    }

    /// First `truncation` terms of a weight sequence used as `q_j`.
    pub fn from_weights(w: &WeightSequenceSpec, truncation: usize) -> Result<Self> {
        w.validate()?;
        let mut q = w.take(truncation);
        q.sort_by(|a, b| b.total_cmp(a));
        Self::new(q)
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// Trace norm `‖ω‖₁ = 2 Σ q_j`.
    pub fn one_norm(&self) -> f64 {
        2.0 * self.q.iter().sum::<f64>()
    }

    /// `‖ω‖²_HS = 2 Σ q_j²`.
    pub fn hs_norm_sq(&self) -> f64 {
        2.0 * self.q.iter().map(|v| v * v).sum::<f64>()
    }

    pub fn truncate(&self, j: usize) -> Self {
        Self { q: self.q.iter().copied().take(j).collect() }
    }
}

/// Groups sorted (descending) values into clusters of relative width
/// [`PAIR_TOL`].
fn clusters(values: &[f64], scale: f64) -> Vec<&[f64]> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i - 1] - values[i] > PAIR_TOL * scale {
            out.push(&values[start..i]);
            start = i;
        }
    }
    out
}

/// The pairs `{q_j}` with eigenvalues of `A` equal to `{±i q_j} ∪ {0, …}`.
pub fn singular_pairs(a: &AntisymmetricMatrix) -> Result<SpectralData> {
    let mut sv: Vec<f64> = a.inner.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(SpectralData { q: Vec::new() });
    }
    let kept: Vec<f64> = sv.into_iter().filter(|&s| s > ZERO_TOL * top).collect();
    let mut q = Vec::with_capacity(kept.len() / 2);
    for c in clusters(&kept, top) {
        if c.len() % 2 != 0 {
            return Err(numeric(format!(
                "singular value cluster near {} has odd multiplicity {}",
                c[0],
                c.len()
            )));
        }
        let mean = c.iter().sum::<f64>() / c.len() as f64;
        q.extend(std::iter::repeat_n(mean, c.len() / 2));
    }
    SpectralData::new(q)
}

/// Leading principal `k×k` block, zero-padded back to the full dimension.
pub fn project(a: &AntisymmetricMatrix, k: usize) -> Result<AntisymmetricMatrix> {
    let n = a.dim();
    if k == 0 || k > n {
        return Err(validation(format!("projection rank {k} outside 1..={n}")));
    }
    let m = DMatrix::from_fn(n, n, |i, j| if i < k && j < k { a.inner[(i, j)] } else { 0.0 });
    Ok(AntisymmetricMatrix { inner: m })
}

/// Whether every singular pair of the rank-`k` projection is dominated by the
/// corresponding pair of `A`.
pub fn interlace_check(a: &AntisymmetricMatrix, k: usize) -> Result<bool> {
    let full = singular_pairs(a)?;
    let part = singular_pairs(&project(a, k)?)?;
    if part.len() > full.len() {
        return Ok(false);
    }
    Ok(part.q.iter().zip(&full.q).all(|(p, f)| *p <= f + 1e-10))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random_antisymmetric(n: usize, rng: &mut ChaCha8Rng) -> AntisymmetricMatrix {
        let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
        AntisymmetricMatrix::new((&g - g.transpose()) * 0.5).unwrap()
    }

    fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
        g.qr().q()
    }

    #[test]
    fn canonical_blocks() {
        let a = AntisymmetricMatrix::from_rows(&[vec![0.0, 2.5], vec![-2.5, 0.0]]).unwrap();
        let s = singular_pairs(&a).unwrap();
        assert!(s.len() == 1 && (s.q()[0] - 2.5).abs() < 1e-14);
        let a = AntisymmetricMatrix::canonical(&[1.0, 3.0]).unwrap();
        let s = singular_pairs(&a).unwrap();
        assert!((s.q()[0] - 3.0).abs() < 1e-14 && (s.q()[1] - 1.0).abs() < 1e-14);
        assert!((s.one_norm() - 8.0).abs() < 1e-13);
        assert!((s.hs_norm_sq() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_pairs_collapse() {
        let a = AntisymmetricMatrix::canonical(&[2.0, 2.0, 0.5]).unwrap();
        let s = singular_pairs(&a).unwrap();
        assert_eq!(s.len(), 3);
        assert!((s.q()[1] - 2.0).abs() < 1e-13);
    }

    #[test]
    fn frobenius_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = random_antisymmetric(6, &mut rng);
            let s = singular_pairs(&a).unwrap();
            assert!((s.hs_norm_sq() - a.frobenius_sq()).abs() < 1e-10 * a.frobenius_sq());
        }
    }

    #[test]
    fn odd_dimension_drops_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_antisymmetric(7, &mut rng);
        assert_eq!(singular_pairs(&a).unwrap().len(), 3);
    }

    #[test]
    fn rejects_non_antisymmetric() {
        assert!(AntisymmetricMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).is_err());
        assert!(AntisymmetricMatrix::from_rows(&[vec![0.0, 1.0]]).is_err());
        assert!(AntisymmetricMatrix::from_rows(&[vec![1.0]]).is_err());
    }

    #[test]
    fn ata_eigenvalues_come_in_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..1000 {
            let n = 2 + trial % 15;
            let a = random_antisymmetric(n, &mut rng);
            let ata = a.matrix().transpose() * a.matrix();
            let mut ev: Vec<f64> = SymmetricEigen::new(ata).eigenvalues.iter().copied().collect();
            ev.sort_by(|x, y| y.total_cmp(x));
            let top = ev[0];
            let nonzero: Vec<f64> = ev.into_iter().filter(|&v| v > 1e-10 * top).collect();
            assert_eq!(nonzero.len() % 2, 0, "n={n}");
            for pair in nonzero.chunks(2) {
                assert!((pair[0] - pair[1]).abs() <= 1e-9 * top, "n={n} {pair:?}");
            }
        }
    }

    #[test]
    fn norms_invariant_under_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let n = rng.random_range(2..12);
            let a = random_antisymmetric(n, &mut rng);
            let u = random_orthogonal(n, &mut rng);
            let s = singular_pairs(&a).unwrap();
            let t = singular_pairs(&a.conjugate(&u).unwrap()).unwrap();
            assert!((s.one_norm() - t.one_norm()).abs() < 1e-10 * s.one_norm());
            assert!((s.hs_norm_sq() - t.hs_norm_sq()).abs() < 1e-10 * s.hs_norm_sq());
        }
    }

    #[test]
    fn projection_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_antisymmetric(6, &mut rng);
        assert_eq!(project(&a, 6).unwrap(), a);
        assert!(project(&a, 1).unwrap().matrix().amax() == 0.0);
        assert!(project(&a, 0).is_err() && project(&a, 7).is_err());

        let mut prev = f64::INFINITY;
        for k in 1..=6 {
            let d = (project(&a, k).unwrap().matrix() - a.matrix()).norm();
            assert!(d <= prev + 1e-15);
            prev = d;
        }
        assert_eq!(prev, 0.0);
    }

    #[test]
    fn interlacing() {
        let a = AntisymmetricMatrix::canonical(&[3.0, 1.0]).unwrap();
        assert!(interlace_check(&a, 4).unwrap());
        assert!(interlace_check(&a, 2).unwrap());
        let sub = singular_pairs(&project(&a, 2).unwrap()).unwrap();
        assert!(sub.len() == 1 && (sub.q()[0] - 3.0).abs() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..1000 {
            let a = random_antisymmetric(8, &mut rng);
            let k = rng.random_range(1..=8);
            assert!(interlace_check(&a, k).unwrap());
        }
    }

    #[test]
    fn parses_csv_and_json() {
        let a = AntisymmetricMatrix::from_csv_str("# block\n0, 1.5\n-1.5, 0\n").unwrap();
        let b = AntisymmetricMatrix::from_json_str("[[0, 1.5], [-1.5, 0]]").unwrap();
        assert_eq!(a, b);
        assert!(matches!(AntisymmetricMatrix::from_csv_str("0, x\n1, 0"), Err(Error::Parse(_))));
        assert!(AntisymmetricMatrix::from_json_str("[[0, 1], [1, 0]]").is_err());
    }

    #[test]
    fn spectral_data_validation() {
        assert!(SpectralData::new(vec![1.0, 2.0]).is_err());
        assert!(SpectralData::new(vec![1.0, 0.0]).is_err());
        let g = WeightSequenceSpec::geometric(0.5, 0.5).unwrap();
        let s = SpectralData::from_weights(&g, 50).unwrap();
        assert!((s.one_norm() - 2.0).abs() < 1e-14);
        assert_eq!(s.truncate(3).len(), 3);
    }
}
