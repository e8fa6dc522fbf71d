use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{validation, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    /// Asymptotic p-value from the Kolmogorov distribution.
    pub p_value: f64,
    pub n: usize,
    pub m: usize,
}

impl KsResult {
    pub fn critical_value(&self, alpha: f64) -> f64 {
        ks_critical_value(alpha, self.n, self.m)
    }

    /// Statistic below the asymptotic critical value at level `alpha`.
    pub fn passes(&self, alpha: f64) -> bool {
        self.statistic < self.critical_value(alpha)
    }
}

/// `P(K > x)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.0 {
        // Jacobi-transformed series, fast for small x.
        let c = -PI * PI / (8.0 * x * x);
        let s: f64 = (1..=20).map(|k| ((2 * k - 1) as f64).powi(2)).map(|j| (c * j).exp()).sum();
        (1.0 - (2.0 * PI).sqrt() / x * s).clamp(0.0, 1.0)
    } else {
        let mut s = 0.0;
        for k in 1..=100 {
            let t = (-2.0 * (k * k) as f64 * x * x).exp();
            s += if k % 2 == 1 { t } else { -t };
            if t < 1e-18 {
                break;
            }
        }
        (2.0 * s).clamp(0.0, 1.0)
    }
}

/// Asymptotic two-sample critical value `c(α) √((n+m)/(nm))`.
pub fn ks_critical_value(alpha: f64, n: usize, m: usize) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

fn sorted(x: &[f64]) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(validation("KS test needs non-empty samples"));
    }
    if x.iter().any(|v| v.is_nan()) {
        return Err(validation("KS test samples contain NaN"));
    }
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Two-sample Kolmogorov–Smirnov test.
pub fn ks_two_sample(x: &[f64], y: &[f64]) -> Result<KsResult> {
    let (a, b) = (sorted(x)?, sorted(y)?);
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < n && j < m {
        let v = a[i].min(b[j]);
        while i < n && a[i] == v {
            i += 1;
        }
        while j < m && b[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let en = (n as f64 * m as f64 / (n + m) as f64).sqrt();
    Ok(KsResult { statistic: d, p_value: kolmogorov_survival(en * d), n, m })
}

/// One-sample Kolmogorov–Smirnov test against a continuous distribution function.
pub fn ks_one_sample(x: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    let a = sorted(x)?;
    let n = a.len() as f64;
    let d = a
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = cdf(v);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0f64, f64::max);
    Ok(KsResult { statistic: d, p_value: kolmogorov_survival(n.sqrt() * d), n: a.len(), m: usize::MAX })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use rand::seq::SliceRandom;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn normals(seed: u64, n: usize, shift: f64) -> Vec<f64> {
        let mut rng = RngStream::new(seed, 0).rng();
        (0..n).map(|_| rng.sample::<f64, _>(StandardNormal) + shift).collect()
    }

    #[test]
    fn identical_samples() {
        let x = normals(1, 500, 0.0);
        let r = ks_two_sample(&x, &x).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn shuffled_copy_is_identical() {
        let x = normals(2, 1000, 0.0);
        let mut y = x.clone();
        y.shuffle(&mut RngStream::new(3, 0).rng());
        assert_eq!(ks_two_sample(&x, &y).unwrap().statistic, 0.0);
    }

    #[test]
    fn independent_same_law_p_values_look_uniform() {
        let p: Vec<f64> = (0..60)
            .map(|s| ks_two_sample(&normals(100 + s, 400, 0.0), &normals(500 + s, 400, 0.0)).unwrap().p_value)
            .collect();
        let low = p.iter().filter(|&&v| v < 0.1).count();
        assert!(low <= 15, "{low} of 60 below 0.1");
        let mean = p.iter().sum::<f64>() / p.len() as f64;
        assert!((mean - 0.5).abs() < 0.15, "{mean}");
    }

    #[test]
    fn shifted_normals_are_detected() {
        let r = ks_two_sample(&normals(4, 10_000, 0.0), &normals(5, 10_000, 0.5)).unwrap();
        assert!(r.p_value < 1e-6, "{r:?}");
        assert!(!r.passes(0.01));
    }

    #[test]
    fn survival_function_values() {
        // Classical quantiles of the Kolmogorov distribution.
        assert!((kolmogorov_survival(1.3581) - 0.05).abs() < 1e-4);
        assert!((kolmogorov_survival(1.6276) - 0.01).abs() < 1e-4);
        // Both series agree near the switch point.
        let c = -PI * PI / 8.0;
        let small: f64 = 1.0 - (2.0 * PI).sqrt() * (1..=20).map(|k| (c * ((2 * k - 1) as f64).powi(2)).exp()).sum::<f64>();
        assert!((small - kolmogorov_survival(1.0)).abs() < 1e-12);
        assert!((ks_critical_value(0.01, 100, 100) - 1.6276 * 0.02f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn one_sample_against_normal_cdf() {
        let x = normals(6, 5000, 0.0);
        let cdf = |v: f64| 0.5 * libm::erfc(-v / std::f64::consts::SQRT_2);
        assert!(ks_one_sample(&x, cdf).unwrap().p_value > 0.001);
        let y = normals(7, 5000, 0.2);
        assert!(ks_one_sample(&y, cdf).unwrap().p_value < 1e-6);
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(ks_two_sample(&[], &[1.0]).is_err());
    }
}
