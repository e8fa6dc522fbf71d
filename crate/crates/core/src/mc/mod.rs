//! Monte Carlo estimators, exact oracles and constant extraction.
//!
//! Every estimator draws sample `i` from its own child stream of the
//! configured [`RngStream`], so results depend only on the configuration.
//! Samples are grouped into fixed batches for parallelism and the batch
//! summaries are merged in batch order.

mod extract;
mod ks;
mod laplace;
mod smallball;

pub use extract::{extract_constant, ConstantFit, ProbeGrid};
pub use ks::{kolmogorov_survival, ks_critical_value, ks_one_sample, ks_two_sample, KsResult};
pub use laplace::{
    estimate_laplace, estimate_laplace_multi, laplace_slope, log_cosh, oracle_laplace_chaos,
    oracle_laplace_intbm2, oracle_log_laplace_chaos, oracle_log_laplace_intbm2,
};
pub use smallball::{
    bridge_stay_probability, estimate_smallball_conditional, estimate_smallball_conditional_multi,
    estimate_smallball_raw, sample_sups, Process, SupMonitor,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{validation, Result};
use crate::rng::RngStream;
use crate::{DEFAULT_SAMPLES, DEFAULT_STEPS};

/// Sample budget, discretization and provenance shared by all estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub samples: usize,
    pub steps: usize,
    pub seed: u64,
    pub stream_id: u64,
    pub batch_size: usize,
    pub monitor: SupMonitor,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            steps: DEFAULT_STEPS,
            seed: 0,
            stream_id: 0,
            batch_size: 1000,
            monitor: SupMonitor::Grid,
        }
    }
}

impl McConfig {
    pub fn new(samples: usize, steps: usize, seed: u64) -> Self {
        Self { samples, steps, seed, ..Self::default() }
    }

    pub fn with_stream(mut self, stream_id: u64) -> Self {
        self.stream_id = stream_id;
        self
    }

    pub fn with_monitor(mut self, monitor: SupMonitor) -> Self {
        self.monitor = monitor;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(validation("need at least two samples"));
        }
        if self.steps < 2 {
            return Err(validation("need at least two grid steps"));
        }
        if self.batch_size == 0 {
            return Err(validation("batch size must be positive"));
        }
        Ok(())
    }

    /// Stream of sample `index`.
    pub fn sample_stream(&self, index: u64) -> RngStream {
        RngStream::new(self.seed, self.stream_id).substream(index)
    }
}

/// Mean of a sample with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub estimate: f64,
    /// Standard error, or the 95% one-sided upper bound when `zero_hits`.
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub stream_id: u64,
    /// No sample hit the event; `estimate` is 0 and `std_error` holds the
    /// Clopper–Pearson upper bound.
    #[serde(default)]
    pub zero_hits: bool,
}

impl EstimateResult {
    /// Whether `value` lies within `k` standard errors of the estimate.
    pub fn within(&self, value: f64, k: f64) -> bool {
        (self.estimate - value).abs() <= k * self.std_error
    }

    /// Sample variance implied by the standard error.
    pub fn variance(&self) -> f64 {
        self.std_error * self.std_error * self.samples as f64
    }

    /// JSON record `{op, params, estimate, stdError, samples, seed}`.
    pub fn to_record(&self, op: &str, params: serde_json::Value) -> serde_json::Value {
        serde_json::json!({
            "op": op,
            "params": params,
            "estimate": self.estimate,
            "stdError": self.std_error,
            "samples": self.samples,
            "seed": self.seed,
            "streamId": self.stream_id,
            "zeroHits": self.zero_hits,
        })
    }
}

/// One-sided 95% Clopper–Pearson upper bound after zero hits in `n` trials.
pub fn clopper_pearson_zero(n: u64) -> f64 {
    1.0 - 0.05f64.powf(1.0 / n as f64)
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub(crate) fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub(crate) fn merge(&mut self, o: &Moments) {
        if o.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *o;
            return;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        self.mean += d * o.n as f64 / n as f64;
        self.m2 += o.m2 + d * d * (self.n as f64) * (o.n as f64) / n as f64;
        self.n = n;
    }

    pub(crate) fn result(&self, cfg: &McConfig, indicator: bool) -> EstimateResult {
        let var = if self.n > 1 { (self.m2 / (self.n - 1) as f64).max(0.0) } else { 0.0 };
        let zero = indicator && self.mean == 0.0;
        EstimateResult {
            estimate: self.mean,
            std_error: if zero {
                clopper_pearson_zero(self.n)
            } else {
                (var / self.n as f64).sqrt()
            },
            samples: self.n,
            seed: cfg.seed,
            stream_id: cfg.stream_id,
            zero_hits: zero,
        }
    }
}

/// Runs `sample(index, out)` for every sample index, where `out` receives one
/// value per output slot, and returns the merged moments of each slot.
pub(crate) fn run_batched<S, F>(cfg: &McConfig, outputs: usize, init: impl Fn() -> S + Sync, sample: F) -> Vec<Moments>
where
    F: Fn(&mut S, u64, &mut [f64]) + Sync,
{
    let n = cfg.samples as u64;
    let bs = cfg.batch_size as u64;
    let batches = n.div_ceil(bs);
    let per_batch: Vec<Vec<Moments>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut state = init();
            let mut acc = vec![Moments::default(); outputs];
            let mut out = vec![0.0; outputs];
            for i in b * bs..((b + 1) * bs).min(n) {
                sample(&mut state, i, &mut out);
                for (a, &v) in acc.iter_mut().zip(&out) {
                    a.push(v);
                }
            }
            acc
        })
        .collect();
    let mut total = vec![Moments::default(); outputs];
    for acc in &per_batch {
        for (t, a) in total.iter_mut().zip(acc) {
            t.merge(a);
        }
    }
    total
}

/// Collects one value per sample, in sample order.
pub(crate) fn collect_batched<S, F>(cfg: &McConfig, init: impl Fn() -> S + Sync, sample: F) -> Vec<f64>
where
    F: Fn(&mut S, u64) -> f64 + Sync,
{
    let n = cfg.samples as u64;
    let bs = cfg.batch_size as u64;
    let batches = n.div_ceil(bs);
    let per_batch: Vec<Vec<f64>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut state = init();
            (b * bs..((b + 1) * bs).min(n)).map(|i| sample(&mut state, i)).collect()
        })
        .collect();
    per_batch.concat()
}
