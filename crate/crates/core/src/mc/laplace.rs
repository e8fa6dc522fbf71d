use std::f64::consts::LN_2;

use super::{run_batched, EstimateResult, McConfig};
use crate::asymptotics::Partition;
use crate::error::{domain, Result};
use crate::paths::{ClockSpec, TimeGrid};

/// `log cosh x` without overflow.
pub fn log_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

fn check_lambda_t(lambda: f64, t: f64) -> Result<()> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(domain(format!("lambda must be non-negative, got {lambda}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("t must be positive, got {t}")));
    }
    Ok(())
}

/// `log E exp(−λ ∫₀ᵗ B²) = −½ log cosh(t√(2λ))`.
pub fn oracle_log_laplace_intbm2(lambda: f64, t: f64) -> Result<f64> {
    check_lambda_t(lambda, t)?;
    Ok(-0.5 * log_cosh(t * (2.0 * lambda).sqrt()))
}

/// `E exp(−λ ∫₀ᵗ B²) = cosh(t√(2λ))^{−1/2}`.
pub fn oracle_laplace_intbm2(lambda: f64, t: f64) -> Result<f64> {
    Ok(oracle_log_laplace_intbm2(lambda, t)?.exp())
}

/// `log E exp(−λ Σ_j q_j² ∫₀ᵗ (X_j² + Y_j²)) = −Σ_j log cosh(t q_j √(2λ))`.
pub fn oracle_log_laplace_chaos(q: &[f64], lambda: f64, t: f64) -> Result<f64> {
    check_lambda_t(lambda, t)?;
    let r = t * (2.0 * lambda).sqrt();
    Ok(-q.iter().map(|qj| log_cosh(qj * r)).sum::<f64>())
}

/// `Π_j cosh(t q_j √(2λ))^{−1}`.
pub fn oracle_laplace_chaos(q: &[f64], lambda: f64, t: f64) -> Result<f64> {
    Ok(oracle_log_laplace_chaos(q, lambda, t)?.exp())
}

/// Empirical Laplace constant `−λ^{−a} log φ(λ)` from a log-transform value.
pub fn laplace_slope(log_value: f64, lambda: f64, pow_exponent: f64) -> f64 {
    -lambda.powf(-pow_exponent) * log_value
}

/// `E exp(−λ Σ_i d_i Δ_i C)` for each `λ`, on shared clock samples. Missing
/// partition weights count as 1.
pub fn estimate_laplace_multi(
    clock: &ClockSpec,
    part: &Partition,
    lambdas: &[f64],
    cfg: &McConfig,
) -> Result<Vec<EstimateResult>> {
    cfg.validate()?;
    for &l in lambdas {
        check_lambda_t(l, 1.0)?;
    }
    let grid = TimeGrid::aligned(part, cfg.steps)?;
    let ones = vec![1.0; part.len()];
    let d = part.weights().unwrap_or(&ones);
    let m = run_batched(
        cfg,
        lambdas.len(),
        || vec![0.0; grid.len()],
        |inc, i, out| {
            inc.iter_mut().for_each(|c| *c = 0.0);
            clock.accumulate_increments(&grid, &mut cfg.sample_stream(i).substream(0).rng(), inc);
            let mut s = 0.0;
            let mut start = 0;
            for (&mark, di) in grid.marks().iter().zip(d) {
                s += di * inc[start..mark].iter().sum::<f64>();
                start = mark;
            }
            for (slot, &l) in out.iter_mut().zip(lambdas) {
                *slot = (-l * s).exp();
            }
        },
    );
    Ok(m.iter().map(|mo| mo.result(cfg, false)).collect())
}

pub fn estimate_laplace(
    clock: &ClockSpec,
    part: &Partition,
    lambda: f64,
    cfg: &McConfig,
) -> Result<EstimateResult> {
    Ok(estimate_laplace_multi(clock, part, &[lambda], cfg)?.remove(0))
}
