//! Ground-state energy of `−½ u″ + |x|^p u` on the real line.
//!
//! The operator is truncated to `[−L, L]` with Dirichlet walls and discretized
//! by second-order central differences on a uniform grid, which yields a
//! symmetric tridiagonal matrix. Its smallest eigenvalue is located by Sturm
//! sequence bisection, and a Richardson table over successive grid halvings
//! removes the leading `h²`, `h⁴`, … error terms.

use serde::{Deserialize, Serialize};

use crate::error::{domain, numeric, validation, Result};

/// Potential values are clamped here so that very large `p` behaves like a
/// hard wall instead of overflowing.
const POTENTIAL_CAP: f64 = 1e200;
const MAX_BISECTIONS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenConfig {
    /// Domain truncation `L`; the problem is solved on `[−L, L]`.
    pub half_width: f64,
    /// Number of grid subintervals of the coarsest level (`n − 1` interior nodes).
    pub grid_points: usize,
    /// Number of grid halvings combined by Richardson extrapolation.
    pub richardson_levels: usize,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self { half_width: 12.0, grid_points: 4096, richardson_levels: 2 }
    }
}

impl EigenConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(validation(format!("half width must be positive, got {}", self.half_width)));
        }
        if self.grid_points < 64 {
            return Err(validation(format!("need at least 64 grid points, got {}", self.grid_points)));
        }
        if self.richardson_levels == 0 || self.richardson_levels > 8 {
            return Err(validation(format!(
                "richardson levels must lie in 1..=8, got {}",
                self.richardson_levels
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    /// Extrapolated ground-state energy `λ₁(p)`.
    pub value: f64,
    /// Size of the last Richardson correction.
    pub error_estimate: f64,
    /// Raw lowest eigenvalues, coarsest grid first.
    pub raw: Vec<f64>,
}

/// Symmetric tridiagonal discretization with constant off-diagonal.
struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    fn schrodinger(p: f64, half_width: f64, intervals: usize) -> (Self, Vec<f64>) {
        let h = 2.0 * half_width / intervals as f64;
        let kinetic = 1.0 / (h * h);
        let nodes: Vec<f64> = (1..intervals).map(|i| -half_width + i as f64 * h).collect();
        let diag = nodes
            .iter()
            .map(|x| kinetic + x.abs().powf(p).min(POTENTIAL_CAP))
            .collect();
        (Self { diag, off: -0.5 * kinetic }, nodes)
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let b2 = self.off * self.off;
        let mut count = 0;
        let mut q = 1.0;
        for (i, &a) in self.diag.iter().enumerate() {
            q = if i == 0 { a - x } else { a - x - b2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (a.abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn lowest_eigenvalue(&self, wall: f64) -> Result<f64> {
        let min_diag = self.diag.iter().copied().fold(f64::INFINITY, f64::min);
        let mut hi = if wall.is_finite() && wall > 0.0 && self.count_below(wall) >= 1 {
            wall.min(min_diag)
        } else {
            min_diag
        };
        let mut lo = 0.0;
        if self.count_below(lo) != 0 || self.count_below(hi) == 0 {
            // The first can only happen if the potential were negative.
            hi = hi.max(min_diag * (1.0 + 1e-12));
            if self.count_below(hi) == 0 {
                return Err(numeric(format!("no eigenvalue bracketed in [0, {hi}]")));
            }
        }
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 4.0 * f64::EPSILON * hi || mid <= lo || mid >= hi {
                return Ok(0.5 * (lo + hi));
            }
            if self.count_below(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(numeric(format!(
            "bisection did not converge: bracket [{lo}, {hi}] after {MAX_BISECTIONS} steps"
        )))
    }

    /// Thomas solve of `(A − shift·I) x = rhs`.
    fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let b = self.off;
        let mut denom = self.diag[0] - shift;
        c[0] = b / denom;
        d[0] = rhs[0] / denom;
        for i in 1..n {
            denom = self.diag[i] - shift - b * c[i - 1];
            c[i] = b / denom;
            d[i] = (rhs[i] - b * d[i - 1]) / denom;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d[i] - c[i] * x[i + 1];
        }
        x
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(domain(format!("lambda1 requires p >= 1, got {p}")));
    }
    Ok(())
}

/// Ground-state value `λ₁(p)` with a Richardson error estimate.
pub fn lambda1(p: f64, cfg: &EigenConfig) -> Result<EigenResult> {
    check_p(p)?;
    cfg.validate()?;
    let wall = cfg.half_width.powf(p);
    let mut raw = Vec::with_capacity(cfg.richardson_levels + 1);
    for level in 0..=cfg.richardson_levels {
        let (mat, _) = Tridiagonal::schrodinger(p, cfg.half_width, cfg.grid_points << level);
        raw.push(mat.lowest_eigenvalue(wall)?);
    }
    // Romberg-style table on h², h⁴, ...
    let mut row = raw.clone();
    let mut error_estimate = 0.0;
    for col in 1..=cfg.richardson_levels {
        let factor = 4f64.powi(col as i32) - 1.0;
        let next: Vec<f64> = row.windows(2).map(|w| w[1] + (w[1] - w[0]) / factor).collect();
        error_estimate = (next[next.len() - 1] - row[row.len() - 1]).abs();
        row = next;
    }
    let value = row[0];
    if !value.is_finite() || value <= 0.0 {
        return Err(numeric(format!("extrapolated eigenvalue {value} from raw levels {raw:?}")));
    }
    Ok(EigenResult { value, error_estimate, raw })
}

/// Ground state on the coarsest grid, normalized to unit discrete `L²` norm.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub nodes: Vec<f64>,
    pub amplitude: Vec<f64>,
    pub energy: f64,
}

impl GroundState {
    /// `max_i |u(x_i) − u(−x_i)| / max_i |u(x_i)|`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.amplitude.len();
        let peak = self.amplitude.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        (0..n)
            .map(|i| (self.amplitude[i] - self.amplitude[n - 1 - i]).abs())
            .fold(0.0, f64::max)
            / peak
    }
}

/// Ground-state vector by inverse iteration at the bisected eigenvalue.
pub fn ground_state(p: f64, cfg: &EigenConfig) -> Result<GroundState> {
    check_p(p)?;
    cfg.validate()?;
    let (mat, nodes) = Tridiagonal::schrodinger(p, cfg.half_width, cfg.grid_points);
    let energy = mat.lowest_eigenvalue(cfg.half_width.powf(p))?;
    let h = 2.0 * cfg.half_width / cfg.grid_points as f64;
    let shift = energy - 1e-9 * energy.max(1.0);
    let mut u = vec![1.0; nodes.len()];
    for _ in 0..4 {
        u = mat.solve_shifted(shift, &u);
        let norm = (u.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(numeric("inverse iteration broke down"));
        }
        let sign = if u[nodes.len() / 2] < 0.0 { -1.0 } else { 1.0 };
        u.iter_mut().for_each(|v| *v *= sign / norm);
    }
    Ok(GroundState { nodes, amplitude: u, energy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    /// Ai′ from its Maclaurin series; accurate for |x| ≲ 3.
    fn airy_ai_prime(x: f64) -> f64 {
        const AI0: f64 = 0.355_028_053_887_817_2;
        const AIP0: f64 = -0.258_819_403_792_806_8;
        // Ai = AI0·f + AIP0·g with f = Σ a_k x^{3k}, g = Σ b_k x^{3k+1}.
        let x3 = x * x * x;
        let (mut fp, mut gp) = (0.0, 1.0);
        let mut a = 1.0; // coefficient of x^{3k} in f
        let mut b = 1.0; // coefficient of x^{3k+1} in g
        for k in 1..60 {
            let kf = k as f64;
            a *= x3 / ((3.0 * kf - 1.0) * (3.0 * kf));
            b *= x3 / ((3.0 * kf) * (3.0 * kf + 1.0));
            // a and b already carry the power x^{3k}
            fp += a * 3.0 * kf / x;
            gp += b * (3.0 * kf + 1.0);
        }
        AI0 * fp + AIP0 * gp
    }

    fn first_airy_prime_zero() -> f64 {
        let (mut lo, mut hi) = (-1.5, -0.5);
        let flo = airy_ai_prime(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (airy_ai_prime(mid) > 0.0) == (flo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn airy_oracle() {
        let a1 = first_airy_prime_zero();
        assert!((a1 + 1.018_792_971_647_471).abs() < 1e-12, "{a1}");
        let lam = -a1 / 2f64.powf(1.0 / 3.0);
        assert!((lam - 0.808_617).abs() < 1e-6);
    }

    #[test]
    fn harmonic_oscillator() {
        let r = lambda1(2.0, &EigenConfig::default()).unwrap();
        assert!((r.value - FRAC_1_SQRT_2).abs() < 1e-6, "{r:?}");
        assert!(r.error_estimate < 1e-6);
    }

    #[test]
    fn linear_potential_matches_airy() {
        let lam = -first_airy_prime_zero() / 2f64.powf(1.0 / 3.0);
        let r = lambda1(1.0, &EigenConfig::default()).unwrap();
        assert!((r.value - lam).abs() < 1e-5, "{} vs {lam}", r.value);
    }

    #[test]
    fn square_well_limit() {
        // The soft edge of |x|^p widens the effective well, so the energy
        // approaches π²/8 from below, slowly in p.
        let cfg = EigenConfig { half_width: 2.0, ..EigenConfig::default() };
        let well = PI * PI / 8.0;
        let gaps: Vec<f64> = [50.0, 200.0, 1000.0]
            .iter()
            .map(|&p| well - lambda1(p, &cfg).unwrap().value)
            .collect();
        assert!(gaps.iter().all(|&g| g > 0.0), "{gaps:?}");
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
        assert!(gaps[1] < 0.15 && gaps[2] < 0.03, "{gaps:?}");
    }

    #[test]
    fn richardson_differences_shrink() {
        let cfg = EigenConfig { grid_points: 256, richardson_levels: 3, ..EigenConfig::default() };
        for p in [2.0, 3.0] {
            let raw = lambda1(p, &cfg).unwrap().raw;
            let d: Vec<f64> = raw.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
            for pair in d.windows(2) {
                let ratio = pair[0] / pair[1];
                assert!((ratio - 4.0).abs() < 0.2, "p={p} ratio {ratio} raw {raw:?}");
            }
        }
    }

    #[test]
    fn independent_of_truncation() {
        for p in [1.0, 2.0, 3.0, 4.0] {
            // Same mesh width on both domains.
            let a = lambda1(p, &EigenConfig { half_width: 10.0, grid_points: 4000, richardson_levels: 2 }).unwrap();
            let b = lambda1(p, &EigenConfig { half_width: 14.0, grid_points: 5600, richardson_levels: 2 }).unwrap();
            assert!((a.value - b.value).abs() < 1e-9, "p={p}: {} vs {}", a.value, b.value);
        }
    }

    #[test]
    fn ground_state_is_even() {
        for p in [1.0, 2.0, 5.0] {
            let g = ground_state(p, &EigenConfig::default()).unwrap();
            assert!(g.asymmetry() < 1e-8, "p={p}: {}", g.asymmetry());
            assert!(g.amplitude.iter().all(|&v| v > -1e-12));
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(lambda1(0.5, &EigenConfig::default()), Err(crate::Error::Domain(_))));
        let cfg = EigenConfig { grid_points: 10, ..EigenConfig::default() };
        assert!(lambda1(2.0, &cfg).is_err());
        let cfg = EigenConfig { half_width: -1.0, ..EigenConfig::default() };
        assert!(lambda1(2.0, &cfg).is_err());
    }
}
