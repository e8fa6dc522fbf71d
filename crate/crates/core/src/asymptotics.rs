//! Closed-form small-deviation constants.
//!
//! Everything here is a pure function of its arguments. The conventions are:
//!
//! * An [`AsymptoticOrder`] `(α, β, K)` encodes
//!   `lim ε^α |log ε|^β log P(X ≤ ε) = −K` for a positive random variable `X`.
//! * The matching Laplace-side statement is a [`LaplaceOrder`]: `log E e^{−λX}`
//!   behaves like `−L λ^{α/(1+α)} (log λ)^{−β/(1+α)}`.
//! * `‖ω‖₁` is the trace norm, i.e. twice the sum of the singular-value pairs
//!   `q_j` of the antisymmetric operator.
//! * Per-interval clock constants `K_i` carry the `κ_p` factor, so that the
//!   chaos clock constant `(1/8)‖ω‖₁²(Δ_i t)²` plugs directly into
//!   [`tsb_constant`].

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{domain, validation, Result};

/// `κ₂`, the weighted `L²` small-ball constant of Brownian motion.
pub const KAPPA_2: f64 = 0.125;

/// Ratio between the `d²`-parameterized chaos clock constant and the
/// `d`-parameterized one evaluated at `d²` (two Brownian motions per singular
/// value pair versus one per basis vector).
pub const CHAOS_CLOCK_CONVENTION_FACTOR: f64 = 4.0;

fn check_finite_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and positive, got {v}")))
    }
}

/// Small-ball order `(α, β, K)` of a positive random variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticOrder {
    alpha: f64,
    beta: f64,
    big_k: f64,
}

impl AsymptoticOrder {
    pub fn new(alpha: f64, beta: f64, big_k: f64) -> Result<Self> {
        check_finite_positive("alpha", alpha)?;
        check_finite_positive("K", big_k)?;
        if !beta.is_finite() {
            return Err(domain(format!("beta must be finite, got {beta}")));
        }
        Ok(Self { alpha, beta, big_k })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn big_k(&self) -> f64 {
        self.big_k
    }
}

/// Laplace-transform order: `log E e^{−λX} ~ −L λ^{a} (log λ)^{−b}` with
/// `a = α/(1+α)` and `b = β/(1+α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceOrder {
    pow_exponent: f64,
    log_exponent: f64,
    big_l: f64,
}

impl LaplaceOrder {
    pub fn new(pow_exponent: f64, log_exponent: f64, big_l: f64) -> Result<Self> {
        if !(pow_exponent > 0.0 && pow_exponent < 1.0) {
            return Err(domain(format!(
                "invalid Laplace order: power exponent must lie in (0,1), got {pow_exponent}"
            )));
        }
        if !log_exponent.is_finite() {
            return Err(domain("invalid Laplace order: log exponent must be finite"));
        }
        check_finite_positive("L", big_l)?;
        Ok(Self { pow_exponent, log_exponent, big_l })
    }

    pub fn pow_exponent(&self) -> f64 {
        self.pow_exponent
    }

    pub fn log_exponent(&self) -> f64 {
        self.log_exponent
    }

    pub fn big_l(&self) -> f64 {
        self.big_l
    }
}

/// Exponential Tauberian conversion from the small-ball side to the Laplace side.
pub fn tauberian_forward(o: &AsymptoticOrder) -> LaplaceOrder {
    let (a, b, k) = (o.alpha, o.beta, o.big_k);
    let big_l = (1.0 + a).powf(1.0 + b / (1.0 + a)) * (a.powf(-a) * k).powf(1.0 / (1.0 + a));
    LaplaceOrder {
        pow_exponent: a / (1.0 + a),
        log_exponent: b / (1.0 + a),
        big_l,
    }
}

/// Inverse of [`tauberian_forward`].
pub fn tauberian_inverse(l: &LaplaceOrder) -> AsymptoticOrder {
    let s = l.pow_exponent;
    let alpha = s / (1.0 - s);
    let beta = l.log_exponent * (1.0 + alpha);
    let lead = (1.0 + alpha).powf(1.0 + beta / (1.0 + alpha));
    let big_k = alpha.powf(alpha) * (l.big_l / lead).powf(1.0 + alpha);
    AsymptoticOrder { alpha, beta, big_k }
}

fn theta_log_cdf(x: f64) -> f64 {
    // (4/π) Σ_k (−1)^k/(2k+1) exp(−(2k+1)²π²/(8x²)), with the k = 0 exponent
    // factored out so the sum stays representable for tiny x.
    let c = PI * PI / (8.0 * x * x);
    let mut sum = 0.0;
    let mut k = 0u32;
    loop {
        let n = f64::from(2 * k + 1);
        let term = (-(n * n - 1.0) * c).exp() / n;
        if term < 1e-17 {
            break;
        }
        sum += if k.is_multiple_of(2) { term } else { -term };
        k += 1;
    }
    (4.0 / PI).ln() - c + sum.ln()
}

fn gauss_complement(x: f64) -> f64 {
    // 1 − P = 2 Σ_k (−1)^k erfc((2k+1)x/√2)
    let mut sum = 0.0;
    let mut k = 0u32;
    loop {
        let n = f64::from(2 * k + 1);
        let term = libm::erfc(n * x / SQRT_2);
        if term < 1e-18 {
            break;
        }
        sum += if k.is_multiple_of(2) { term } else { -term };
        k += 1;
    }
    2.0 * sum
}

/// `P(sup_{[0,1]} |B| ≤ x)` through the theta series, accurate for small `x`.
pub fn sup_bm_cdf_theta(x: f64) -> f64 {
    theta_log_cdf(x).exp()
}

/// `P(sup_{[0,1]} |B| ≤ x)` through the reflected Gaussian series, accurate for
/// large `x`.
pub fn sup_bm_cdf_gauss(x: f64) -> f64 {
    1.0 - gauss_complement(x)
}

const SERIES_SWITCH: f64 = 1.0;

/// `log P(sup_{[0,1]} |B| ≤ x)`, finite for every `x > 0`.
pub fn sup_bm_log_cdf(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(domain(format!("sup_bm_cdf requires x > 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if x <= SERIES_SWITCH {
        Ok(theta_log_cdf(x))
    } else {
        Ok((-gauss_complement(x)).ln_1p())
    }
}

/// Distribution function of the supremum of `|B|` over `[0,1]`.
pub fn sup_bm_cdf(x: f64) -> Result<f64> {
    if x.is_infinite() && x > 0.0 {
        return Ok(1.0);
    }
    if x > SERIES_SWITCH {
        return Ok(sup_bm_cdf_gauss(x));
    }
    Ok(sup_bm_log_cdf(x)?.exp())
}

/// Two-sided bound `(2/π)e^{−π²/(8x²)} ≤ P(sup|B| ≤ x) ≤ (4/π)e^{−π²/(8x²)}`.
pub fn chung_bounds(x: f64) -> (f64, f64) {
    let e = (-PI * PI / (8.0 * x * x)).exp();
    (2.0 / PI * e, 4.0 / PI * e)
}

/// `κ_p = 2^{2/p} p (λ₁(p)/(2+p))^{(2+p)/2}`.
pub fn kappa_p(p: f64, lambda1: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(domain(format!("kappa_p requires p >= 1, got {p}")));
    }
    check_finite_positive("lambda1", lambda1)?;
    Ok(2f64.powf(2.0 / p) * p * (lambda1 / (2.0 + p)).powf((2.0 + p) / 2.0))
}

/// Times `0 = t₀ < t₁ < … < t_m` with optional small-ball windows `(a_i, b_i)`
/// and optional decreasing clock weights `d_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    times: Vec<f64>,
    windows: Option<Vec<(f64, f64)>>,
    weights: Option<Vec<f64>>,
}

impl Partition {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(validation("partition needs at least one time"));
        }
        let mut prev = 0.0;
        for &t in &times {
            if !(t.is_finite() && t > prev) {
                return Err(validation(format!(
                    "partition times must be finite and strictly increasing from 0, got {times:?}"
                )));
            }
            prev = t;
        }
        Ok(Self { times, windows: None, weights: None })
    }

    /// Single interval `[0, t]`.
    pub fn single(t: f64) -> Result<Self> {
        Self::new(vec![t])
    }

    pub fn with_windows(mut self, windows: Vec<(f64, f64)>) -> Result<Self> {
        if windows.len() != self.times.len() {
            return Err(validation(format!(
                "expected {} windows, got {}",
                self.times.len(),
                windows.len()
            )));
        }
        let mut prev_b = 0.0;
        for &(a, b) in &windows {
            if !(a >= prev_b && b > a && b.is_finite()) {
                return Err(validation(format!(
                    "windows must interlace as 0 <= a1 < b1 <= a2 < b2 <= ..., got {windows:?}"
                )));
            }
            prev_b = b;
        }
        self.windows = Some(windows);
        Ok(self)
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.times.len() {
            return Err(validation(format!(
                "expected {} weights, got {}",
                self.times.len(),
                weights.len()
            )));
        }
        let decreasing = weights.windows(2).all(|w| w[0] > w[1]);
        if !decreasing || weights.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
            return Err(validation(format!(
                "weights must be positive and strictly decreasing, got {weights:?}"
            )));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("non-empty partition")
    }

    /// `Δ_i t = t_i − t_{i−1}`.
    pub fn increments(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.times
            .iter()
            .map(|&t| {
                let d = t - prev;
                prev = t;
                d
            })
            .collect()
    }

    pub fn windows(&self) -> Option<&[(f64, f64)]> {
        self.windows.as_deref()
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    fn require_windows(&self) -> Result<&[(f64, f64)]> {
        self.windows()
            .ok_or_else(|| validation("partition has no windows"))
    }

    fn require_weights(&self) -> Result<&[f64]> {
        self.weights()
            .ok_or_else(|| validation("partition has no weights"))
    }
}

/// `(Σ_i (d_i^α K_i)^{1/(1+α)})^{1+α}`, the clock-sum constant for weighted
/// increments `Σ d_i Δ_i C`.
pub fn clock_sum_constant(alpha: f64, weights: &[f64], per_interval_k: &[f64]) -> Result<f64> {
    check_finite_positive("alpha", alpha)?;
    if weights.len() != per_interval_k.len() {
        return Err(validation("weights and per-interval constants differ in length"));
    }
    let s: f64 = weights
        .iter()
        .zip(per_interval_k)
        .map(|(&d, &k)| (d.powf(alpha) * k).powf(1.0 / (1.0 + alpha)))
        .sum();
    Ok(s.powf(1.0 + alpha))
}

/// Clock constants for `C(t) = ∫₀ᵗ |B|^p` under partition weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpClockOrder {
    pub alpha: f64,
    pub per_interval: Vec<f64>,
    pub combined: f64,
}

/// Per-interval constants `K_i = κ_p (Δ_i t)^{(2+p)/p}` and the combined
/// constant of `Σ d_i Δ_i C` with `α = 2/p`.
pub fn weighted_lp_clock_order(p: f64, kappa: f64, part: &Partition) -> Result<LpClockOrder> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(domain(format!("p must be >= 1, got {p}")));
    }
    check_finite_positive("kappa", kappa)?;
    let weights = part.require_weights()?;
    let alpha = 2.0 / p;
    let per_interval: Vec<f64> = part
        .increments()
        .iter()
        .map(|dt| kappa * dt.powf((2.0 + p) / p))
        .collect();
    let combined = clock_sum_constant(alpha, weights, &per_interval)?;
    Ok(LpClockOrder { alpha, per_interval, combined })
}

/// Exponents `(2α/(1+α), β/(1+α))` of the sup small-ball probability of
/// `B(C(t))` when the clock has order `(α, β)`.
pub fn tsb_exponents(alpha: f64, beta: f64) -> (f64, f64) {
    (2.0 * alpha / (1.0 + alpha), beta / (1.0 + alpha))
}

/// Small-ball constant for the joint window event of a time-changed Brownian
/// motion.
pub fn tsb_constant(alpha: f64, beta: f64, per_interval_k: &[f64], b: &[f64]) -> Result<f64> {
    check_finite_positive("alpha", alpha)?;
    if per_interval_k.len() != b.len() || b.is_empty() {
        return Err(validation(format!(
            "tsb_constant: {} interval constants versus {} window bounds",
            per_interval_k.len(),
            b.len()
        )));
    }
    for (&k, &bi) in per_interval_k.iter().zip(b) {
        check_finite_positive("K_i", k)?;
        if !(bi > 0.0) {
            return Err(domain(format!("window bound must be positive, got {bi}")));
        }
    }
    let e = beta / (1.0 + alpha);
    let lead = 2f64.powf(-e)
        * (1.0 + alpha).powf(1.0 + e)
        * (PI * PI / (8.0 * alpha)).powf(alpha / (1.0 + alpha));
    let sum: f64 = per_interval_k
        .iter()
        .zip(b)
        .map(|(&k, &bi)| (k / bi.powf(2.0 * alpha)).powf(1.0 / (1.0 + alpha)))
        .sum();
    Ok(lead * sum)
}

/// Iterated process `X(C(t))` with `−ε^θ log P(sup_{[0,t]}|X| ≤ ε) → κ t^ρ` and
/// clock order `(α, 0, K(t))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IteratedSpec {
    theta: f64,
    kappa: f64,
    rho: f64,
    clock_order: AsymptoticOrder,
}

impl IteratedSpec {
    pub fn new(theta: f64, kappa: f64, rho: f64, clock_order: AsymptoticOrder) -> Result<Self> {
        check_finite_positive("theta", theta)?;
        check_finite_positive("kappa", kappa)?;
        check_finite_positive("rho", rho)?;
        if clock_order.beta != 0.0 {
            return Err(domain("iterated processes take a clock order with beta = 0"));
        }
        Ok(Self { theta, kappa, rho, clock_order })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn clock_order(&self) -> &AsymptoticOrder {
        &self.clock_order
    }

    /// Exponent `αθ/(ρ+α)` applied to `ε` in the limit.
    pub fn exponent(&self) -> f64 {
        let a = self.clock_order.alpha;
        a * self.theta / (self.rho + a)
    }
}

/// `(ρ+α)(κ^α ρ^{−ρ} α^{−α} K^ρ)^{1/(ρ+α)}`.
pub fn iterated_first_order_constant(s: &IteratedSpec) -> f64 {
    let a = s.clock_order.alpha;
    let k = s.clock_order.big_k;
    let r = s.rho;
    (r + a) * (s.kappa.powf(a) * r.powf(-r) * a.powf(-a) * k.powf(r)).powf(1.0 / (r + a))
}

/// Time exponent `ρ = θH` of an `H`-self-similar outer process.
pub fn self_similar_time_exponent(theta: f64, hurst: f64) -> f64 {
    theta * hurst
}

/// Positive weight sequences `a_j` for sums `Σ a_j ζ_j` of i.i.d. copies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WeightSequenceSpec {
    /// Finite list of weights.
    Explicit { weights: Vec<f64> },
    /// `a_j = lead · j^{−exponent}` for `j ≥ 1`.
    Polynomial { lead: f64, exponent: f64 },
    /// `a_j = lead · ratio^j` for `j ≥ 0`.
    Geometric { lead: f64, ratio: f64 },
}

impl WeightSequenceSpec {
    pub fn explicit(weights: Vec<f64>) -> Result<Self> {
        let s = Self::Explicit { weights };
        s.validate()?;
        Ok(s)
    }

    pub fn polynomial(lead: f64, exponent: f64) -> Result<Self> {
        let s = Self::Polynomial { lead, exponent };
        s.validate()?;
        Ok(s)
    }

    pub fn geometric(lead: f64, ratio: f64) -> Result<Self> {
        let s = Self::Geometric { lead, ratio };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Explicit { weights } => {
                if weights.is_empty() || weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
                    return Err(validation("explicit weights must be a non-empty list of positive reals"));
                }
            }
            Self::Polynomial { lead, exponent } => {
                check_finite_positive("lead", *lead).map_err(|e| validation(e.to_string()))?;
                if !(*exponent > 1.0) || !exponent.is_finite() {
                    return Err(validation(format!(
                        "polynomial decay needs exponent > 1, got {exponent}"
                    )));
                }
            }
            Self::Geometric { lead, ratio } => {
                check_finite_positive("lead", *lead).map_err(|e| validation(e.to_string()))?;
                if !(*ratio > 0.0 && *ratio < 1.0) {
                    return Err(validation(format!("geometric ratio must lie in (0,1), got {ratio}")));
                }
            }
        }
        Ok(())
    }

    /// The first `n` weights (fewer for a shorter explicit list).
    pub fn take(&self, n: usize) -> Vec<f64> {
        match self {
            Self::Explicit { weights } => weights.iter().copied().take(n).collect(),
            Self::Polynomial { lead, exponent } => {
                (1..=n).map(|j| lead * (j as f64).powf(-exponent)).collect()
            }
            Self::Geometric { lead, ratio } => {
                (0..n).map(|j| lead * ratio.powi(j as i32)).collect()
            }
        }
    }

    /// `Σ_j a_j^s`; errors when the sum diverges.
    pub fn power_sum(&self, s: f64) -> Result<f64> {
        self.validate()?;
        match self {
            Self::Explicit { weights } => Ok(weights.iter().map(|w| w.powf(s)).sum()),
            Self::Geometric { lead, ratio } => Ok(lead.powf(s) / (1.0 - ratio.powf(s))),
            Self::Polynomial { lead, exponent } => {
                let z = exponent * s;
                if !(z > 1.0) {
                    return Err(validation(format!(
                        "weights j^-{exponent} raised to {s} are not summable"
                    )));
                }
                Ok(lead.powf(s) * zeta(z))
            }
        }
    }
}

/// Riemann zeta for `s > 1`: direct sum plus an Euler–Maclaurin tail, with
/// remainder below `1e−12` relative.
fn zeta(s: f64) -> f64 {
    const N: usize = 1000;
    let head: f64 = (1..N).map(|j| (j as f64).powf(-s)).sum();
    let n = N as f64;
    let np = n.powf(-s);
    let tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * np + s * np / (12.0 * n)
        - s * (s + 1.0) * (s + 2.0) * np / (720.0 * n.powi(3))
        + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * np / (30240.0 * n.powi(5));
    head + tail
}

/// `K (Σ_j a_j^{α/(1+α)})^{1+α}` for i.i.d. copies with order `(α, 0, K)`.
pub fn weighted_sum_constant(base: &AsymptoticOrder, w: &WeightSequenceSpec) -> Result<f64> {
    if base.beta != 0.0 {
        return Err(validation("weighted sums are only supported for beta = 0"));
    }
    let a = base.alpha;
    if let WeightSequenceSpec::Polynomial { exponent, .. } = w {
        let gamma = (1.0 + a) / a;
        if !(*exponent > gamma) {
            return Err(validation(format!(
                "polynomial decay exponent {exponent} must exceed (1+α)/α = {gamma}"
            )));
        }
    }
    let s = w.power_sum(a / (1.0 + a))?;
    Ok(base.big_k * s.powf(1.0 + a))
}

/// Laplace-slope sandwich for `Σ a_j ζ_j` with `a_j ≤ ã_j`: the product bound
/// gives the lower slope (from `a`), domination gives the upper slope (from `ã`).
/// Slopes are the constants `L` with `log E e^{−λS} ≈ −L λ^{α/(1+α)}`.
pub fn weighted_sum_laplace_bounds(
    base: &AsymptoticOrder,
    weights: &[f64],
    dominating: &WeightSequenceSpec,
) -> Result<(f64, f64)> {
    let dom = dominating.take(weights.len());
    if dom.len() < weights.len() || weights.iter().zip(&dom).any(|(a, d)| a > d) {
        return Err(validation("weights are not dominated termwise"));
    }
    let lower = weighted_sum_constant(base, &WeightSequenceSpec::explicit(weights.to_vec())?)?;
    let upper = weighted_sum_constant(base, dominating)?;
    let conv = |k: f64| -> Result<f64> {
        Ok(tauberian_forward(&AsymptoticOrder::new(base.alpha, 0.0, k)?).big_l)
    };
    Ok((conv(lower)?, conv(upper)?))
}

/// `(π/4)‖ω‖₁ Σ_i Δ_i t / b_i`.
pub fn chaos_sup_constant(omega_one_norm: f64, part: &Partition) -> Result<f64> {
    check_finite_positive("omega one-norm", omega_one_norm)?;
    let windows = part.require_windows()?;
    let s: f64 = part
        .increments()
        .iter()
        .zip(windows)
        .map(|(dt, &(_, b))| dt / b)
        .sum();
    Ok(FRAC_PI_4 * omega_one_norm * s)
}

/// Per-interval clock constants `K_i = (1/8)‖ω‖₁²(Δ_i t)²` of the chaos clock.
pub fn chaos_clock_interval_constants(omega_one_norm: f64, part: &Partition) -> Vec<f64> {
    part.increments()
        .iter()
        .map(|dt| KAPPA_2 * omega_one_norm * omega_one_norm * dt * dt)
        .collect()
}

/// `(1/8)‖ω‖₁² (Σ_i d_i^{1/2} Δ_i t)²` for `Σ d_i Δ_i ⟨Z⟩`.
pub fn chaos_clock_constant(omega_one_norm: f64, part: &Partition) -> Result<f64> {
    check_finite_positive("omega one-norm", omega_one_norm)?;
    let weights = part.require_weights()?;
    let s: f64 = part
        .increments()
        .iter()
        .zip(weights)
        .map(|(dt, d)| d.sqrt() * dt)
        .sum();
    Ok(KAPPA_2 * omega_one_norm * omega_one_norm * s * s)
}

/// `(1/2)‖ω‖₁² (Σ_i d_i Δ_i t)²` for `Σ d_i² Δ_i C` with one Brownian motion per
/// basis direction. Equals [`CHAOS_CLOCK_CONVENTION_FACTOR`] times
/// [`chaos_clock_constant`] evaluated at the squared weights.
pub fn chaos_clock_constant_squared_weights(omega_one_norm: f64, part: &Partition) -> Result<f64> {
    check_finite_positive("omega one-norm", omega_one_norm)?;
    let weights = part.require_weights()?;
    let s: f64 = part
        .increments()
        .iter()
        .zip(weights)
        .map(|(dt, d)| d * dt)
        .sum();
    Ok(0.5 * omega_one_norm * omega_one_norm * s * s)
}
