use serde::{Deserialize, Serialize};

use super::EstimateResult;
use crate::error::{validation, Result};

/// Small-ball estimates on a strictly decreasing grid of `ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeGrid {
    epsilons: Vec<f64>,
    estimates: Vec<EstimateResult>,
}

impl ProbeGrid {
    pub fn new(epsilons: Vec<f64>, estimates: Vec<EstimateResult>) -> Result<Self> {
        if epsilons.is_empty() || epsilons.len() != estimates.len() {
            return Err(validation("probe grid needs one estimate per epsilon"));
        }
        if epsilons.iter().any(|&e| !(e > 0.0 && e.is_finite()))
            || epsilons.windows(2).any(|w| w[0] <= w[1])
        {
            return Err(validation("probe epsilons must be positive and strictly decreasing"));
        }
        Ok(Self { epsilons, estimates })
    }

    pub fn epsilons(&self) -> &[f64] {
        &self.epsilons
    }

    pub fn estimates(&self) -> &[EstimateResult] {
        &self.estimates
    }

    /// `K̂(ε) = −ε^α |log ε|^β log P̂(ε)`, `None` where the estimate is not positive.
    pub fn k_hat(&self, alpha: f64, beta: f64) -> Vec<Option<f64>> {
        self.epsilons
            .iter()
            .zip(&self.estimates)
            .map(|(&e, r)| {
                (r.estimate > 0.0 && !r.zero_hits)
                    .then(|| -e.powf(alpha) * e.ln().abs().powf(beta) * r.estimate.ln())
            })
            .collect()
    }
}

/// `K̂(ε)` values with a linear extrapolation to `ε = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantFit {
    /// `(ε, K̂(ε))` for the retained points, in grid order.
    pub points: Vec<(f64, f64)>,
    /// Epsilons whose estimate was not positive.
    pub dropped: Vec<f64>,
    /// Intercept of the least-squares line through the last three points.
    pub extrapolated: f64,
    /// `|K̂(ε_k) − K̂_extrap|` along the grid.
    pub distances: Vec<f64>,
    pub distances_non_increasing: bool,
}

pub fn extract_constant(pg: &ProbeGrid, alpha: f64, beta: f64) -> Result<ConstantFit> {
    let mut points = Vec::new();
    let mut dropped = Vec::new();
    for (&e, k) in pg.epsilons.iter().zip(pg.k_hat(alpha, beta)) {
        match k {
            Some(k) => points.push((e, k)),
            None => dropped.push(e),
        }
    }
    if points.is_empty() {
        return Err(validation("no positive estimates on the probe grid"));
    }
    let tail = &points[points.len().saturating_sub(3)..];
    let extrapolated = if tail.len() == 1 {
        tail[0].1
    } else {
        let n = tail.len() as f64;
        let mx = tail.iter().map(|p| p.0).sum::<f64>() / n;
        let my = tail.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = tail.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = tail.iter().map(|p| (p.0 - mx).powi(2)).sum();
        my - sxy / sxx * mx
    };
    let distances: Vec<f64> = points.iter().map(|p| (p.1 - extrapolated).abs()).collect();
    let distances_non_increasing = distances.windows(2).all(|w| w[1] <= w[0]);
    Ok(ConstantFit { points, dropped, extrapolated, distances, distances_non_increasing })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(p: f64) -> EstimateResult {
        EstimateResult { estimate: p, std_error: 0.0, samples: 1, seed: 0, stream_id: 0, zero_hits: false }
    }

    fn grid(eps: &[f64], p: impl Fn(f64) -> f64) -> ProbeGrid {
        ProbeGrid::new(eps.to_vec(), eps.iter().map(|&e| exact(p(e))).collect()).unwrap()
    }

    const EPS: [f64; 5] = [0.4, 0.3, 0.2, 0.15, 0.1];

    #[test]
    fn exact_model_is_recovered() {
        let k = 1.7;
        let fit = extract_constant(&grid(&EPS, |e| (-k / e).exp()), 1.0, 0.0).unwrap();
        for &(_, kh) in &fit.points {
            assert!((kh - k).abs() < 1e-12);
        }
        assert!((fit.extrapolated - k).abs() < 1e-12);
    }

    #[test]
    fn first_order_correction_is_removed() {
        let k = 1.7;
        let fit = extract_constant(&grid(&EPS, |e| (-k / e).exp() * (1.0 + e)), 1.0, 0.0).unwrap();
        // K̂(ε) = K − ε log(1+ε) = K − ε² + O(ε³).
        assert!((fit.extrapolated - k).abs() < 0.2f64.powi(2) * k, "{}", fit.extrapolated);
        assert!(fit.distances_non_increasing, "{:?}", fit.distances);
    }

    #[test]
    fn log_factor_weighting() {
        let (k, beta) = (0.8, 1.5);
        let p = |e: f64| (-k / (e * e.ln().abs().powf(beta))).exp();
        let fit = extract_constant(&grid(&EPS, p), 1.0, beta).unwrap();
        assert!((fit.extrapolated - k).abs() < 1e-12);
    }

    #[test]
    fn non_positive_points_are_dropped() {
        let mut est: Vec<_> = EPS.iter().map(|&e| exact((-1.0 / e).exp())).collect();
        est[4] = EstimateResult { estimate: 0.0, zero_hits: true, ..est[4] };
        let fit = extract_constant(&ProbeGrid::new(EPS.to_vec(), est).unwrap(), 1.0, 0.0).unwrap();
        assert_eq!(fit.dropped, vec![0.1]);
        assert_eq!(fit.points.len(), 4);
    }

    #[test]
    fn grid_validation() {
        assert!(ProbeGrid::new(vec![0.1, 0.2], vec![exact(0.1), exact(0.2)]).is_err());
        assert!(ProbeGrid::new(vec![0.1], vec![]).is_err());
    }
}
