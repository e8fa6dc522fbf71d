use rand::{Rng, RngCore};
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{collect_batched, run_batched, EstimateResult, McConfig};
use crate::asymptotics::{sup_bm_cdf, Partition};
use crate::error::{domain, validation, Result};
use crate::paths::{chaos_increments, ClockSpec, TimeGrid};
use crate::rng::{RngStream, SimRng};

/// Process whose running sup enters the window event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Process {
    /// `Z = B`.
    Brownian,
    /// `Z = B(C)` for an independent clock.
    TimeChanged { clock: ClockSpec },
    /// `Z = Σ q_j A_j` built from Lévy areas.
    ChaosDirect { q: Vec<f64> },
}

/// How the running supremum is observed between grid nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupMonitor {
    /// Maximum over grid nodes only.
    #[default]
    Grid,
    /// Grid nodes plus exact Brownian-bridge crossing draws on every step.
    /// Only valid for conditionally Gaussian processes.
    Bridge,
}

/// Probability that a Brownian bridge from `x` to `y` with total variance `v`
/// stays inside `(−c, c)`.
pub fn bridge_stay_probability(x: f64, y: f64, v: f64, c: f64) -> f64 {
    if x.abs() >= c || y.abs() >= c {
        return 0.0;
    }
    if v <= 0.0 {
        return 1.0;
    }
    let e_up = 2.0 * (c - x) * (c - y) / v;
    let e_lo = 2.0 * (c + x) * (c + y) / v;
    if e_up.min(e_lo) > 50.0 {
        return 1.0;
    }
    let d = y - x;
    let w = 2.0 * c;
    let s = 2.0 * c - x - y;
    let denom = 2.0 * v;
    let term = |k: f64| {
        let a = ((d + 2.0 * k * w).powi(2) - d * d) / denom;
        let b = ((s + 2.0 * k * w).powi(2) - d * d) / denom;
        (-a).exp() - (-b).exp()
    };
    let mut g = term(0.0);
    for k in 1..=1000 {
        let kf = k as f64;
        let (tp, tm) = (term(kf), term(-kf));
        g += tp + tm;
        if tp.abs() + tm.abs() < 1e-18 {
            break;
        }
    }
    g.clamp(0.0, 1.0)
}

/// Levels `a_i ε`, `b_i ε` of the joint window event, sorted.
struct WindowEvent {
    levels: Vec<f64>,
    lo: Vec<Option<usize>>,
    hi: Vec<usize>,
    marks: Vec<usize>,
}

impl WindowEvent {
    fn new(part: &Partition, eps: f64, grid: &TimeGrid) -> Result<Self> {
        let windows = part
            .windows()
            .ok_or_else(|| validation("small-ball estimation needs sup windows on the partition"))?;
        let mut levels: Vec<f64> = windows
            .iter()
            .flat_map(|&(a, b)| [a * eps, b * eps])
            .filter(|&l| l > 0.0)
            .collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let find = |l: f64| levels.iter().position(|&v| v == l).expect("level present");
        let lo = windows.iter().map(|&(a, _)| (a > 0.0).then(|| find(a * eps))).collect();
        let hi = windows.iter().map(|&(_, b)| find(b * eps)).collect();
        Ok(Self { levels, lo, hi, marks: grid.marks().to_vec() })
    }

    /// Walks the path step by step; `next(k)` returns `(Z(t_{k+1}), Var step)`.
    fn holds(&self, mut uniforms: Option<&mut StepUniforms>, mut next: impl FnMut(usize) -> (f64, f64)) -> bool {
        let n = *self.marks.last().expect("non-empty partition");
        let mut exceeded = 0usize;
        let mut window = 0usize;
        let mut x = 0.0f64;
        for k in 0..n {
            let (y, v) = next(k);
            let gm = x.abs().max(y.abs());
            while exceeded < self.levels.len() && self.levels[exceeded] <= gm {
                exceeded += 1;
            }
            if let Some(u) = uniforms.as_deref_mut() {
                let mut draw = None;
                while exceeded < self.levels.len() {
                    let g = bridge_stay_probability(x, y, v, self.levels[exceeded]);
                    if g >= 1.0 {
                        break;
                    }
                    let uk = *draw.get_or_insert_with(|| u.at(k));
                    if uk < g {
                        break;
                    }
                    exceeded += 1;
                }
            }
            if exceeded > self.hi[window] {
                return false;
            }
            if k + 1 == self.marks[window] {
                if let Some(lo) = self.lo[window] {
                    if exceeded <= lo {
                        return false;
                    }
                }
                window += 1;
            }
            x = y;
        }
        true
    }
}

/// One uniform per grid step, fixed by the step index, so paths stay coupled
/// across levels.
struct StepUniforms(SimRng);

impl StepUniforms {
    fn at(&mut self, k: usize) -> f64 {
        self.0.set_word_pos(2 * k as u128);
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

struct Scratch {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self { a: vec![0.0; n], b: vec![0.0; n] }
    }
}

fn sample_event(
    process: &Process,
    grid: &TimeGrid,
    event: &WindowEvent,
    monitor: SupMonitor,
    stream: RngStream,
    scratch: &mut Scratch,
) -> bool {
    let mut noise = stream.substream(1).rng();
    let mut uniforms = match monitor {
        SupMonitor::Bridge => Some(StepUniforms(stream.substream(2).rng())),
        SupMonitor::Grid => None,
    };
    let gaussian_walk = |var: &[f64], noise: &mut SimRng, u: Option<&mut StepUniforms>| {
        let mut z = 0.0;
        event.holds(u, |k| {
            let v = var[k];
            let g: f64 = noise.sample(StandardNormal);
            z += v.sqrt() * g;
            (z, v)
        })
    };
    match process {
        Process::Brownian => gaussian_walk(grid.steps(), &mut noise, uniforms.as_mut()),
        Process::TimeChanged { clock } => {
            scratch.a.iter_mut().for_each(|c| *c = 0.0);
            clock.accumulate_increments(grid, &mut stream.substream(0).rng(), &mut scratch.a);
            gaussian_walk(&scratch.a, &mut noise, uniforms.as_mut())
        }
        Process::ChaosDirect { q } => {
            scratch.a.iter_mut().for_each(|c| *c = 0.0);
            scratch.b.iter_mut().for_each(|c| *c = 0.0);
            chaos_increments(q, grid.steps(), &mut noise, &mut scratch.a, &mut scratch.b);
            let dz = &scratch.a;
            let mut z = 0.0;
            event.holds(None, |k| {
                z += dz[k];
                (z, 0.0)
            })
        }
    }
}

fn check_process(process: &Process, monitor: SupMonitor) -> Result<()> {
    match process {
        Process::ChaosDirect { q } if q.is_empty() => Err(validation("chaos process needs weights")),
        Process::ChaosDirect { .. } if monitor == SupMonitor::Bridge => Err(validation(
            "bridge monitoring needs a conditionally Gaussian process; use the grid monitor",
        )),
        _ => Ok(()),
    }
}

/// Indicator mean of `⋂_i {a_i ε ≤ M(t_i) ≤ b_i ε}` over simulated paths.
pub fn estimate_smallball_raw(
    process: &Process,
    part: &Partition,
    eps: f64,
    cfg: &McConfig,
) -> Result<EstimateResult> {
    cfg.validate()?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(domain(format!("epsilon must be positive, got {eps}")));
    }
    check_process(process, cfg.monitor)?;
    let grid = TimeGrid::aligned(part, cfg.steps)?;
    let event = WindowEvent::new(part, eps, &grid)?;
    let m = run_batched(
        cfg,
        1,
        || Scratch::new(grid.len()),
        |scratch, i, out| {
            let hit = sample_event(process, &grid, &event, cfg.monitor, cfg.sample_stream(i), scratch);
            out[0] = if hit { 1.0 } else { 0.0 };
        },
    );
    Ok(m[0].result(cfg, true))
}

/// `sup_{[0,t]} |Z|` on the uniform grid, one value per sample.
pub fn sample_sups(process: &Process, horizon: f64, cfg: &McConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    check_process(process, SupMonitor::Grid)?;
    let grid = TimeGrid::uniform(cfg.steps, horizon)?;
    Ok(collect_batched(
        cfg,
        || Scratch::new(grid.len()),
        |scratch, i| {
            let stream = cfg.sample_stream(i);
            let mut noise = stream.substream(1).rng();
            let mut z = 0.0f64;
            let mut sup = 0.0f64;
            let mut walk = |inc: &mut dyn FnMut(usize) -> f64| {
                for k in 0..grid.len() {
                    z += inc(k);
                    sup = sup.max(z.abs());
                }
            };
            match process {
                Process::Brownian => {
                    walk(&mut |k| grid.steps()[k].sqrt() * noise.sample::<f64, _>(StandardNormal))
                }
                Process::TimeChanged { clock } => {
                    scratch.a.iter_mut().for_each(|c| *c = 0.0);
                    clock.accumulate_increments(&grid, &mut stream.substream(0).rng(), &mut scratch.a);
                    let var = &scratch.a;
                    walk(&mut |k| var[k].sqrt() * noise.sample::<f64, _>(StandardNormal))
                }
                Process::ChaosDirect { q } => {
                    scratch.a.iter_mut().for_each(|c| *c = 0.0);
                    scratch.b.iter_mut().for_each(|c| *c = 0.0);
                    chaos_increments(q, grid.steps(), &mut noise, &mut scratch.a, &mut scratch.b);
                    let dz = &scratch.a;
                    walk(&mut |k| dz[k])
                }
            }
            sup
        },
    ))
}

/// `E[F(ε/√C(t))]` with `F` the law of `sup_{[0,1]}|B|`, for each `ε`, on
/// shared clock samples.
pub fn estimate_smallball_conditional_multi(
    clock: &ClockSpec,
    horizon: f64,
    eps: &[f64],
    cfg: &McConfig,
) -> Result<Vec<EstimateResult>> {
    cfg.validate()?;
    if let Some(e) = eps.iter().find(|&&e| !(e > 0.0)) {
        return Err(domain(format!("epsilon must be positive, got {e}")));
    }
    let grid = TimeGrid::uniform(cfg.steps, horizon)?;
    let m = run_batched(
        cfg,
        eps.len(),
        || (),
        |_, i, out| {
            let c = clock.total_on(&grid, &mut cfg.sample_stream(i).substream(0).rng());
            for (slot, &e) in out.iter_mut().zip(eps) {
                *slot = if c > 0.0 { sup_bm_cdf(e / c.sqrt()).unwrap_or(0.0) } else { 1.0 };
            }
        },
    );
    Ok(m.iter().map(|mo| mo.result(cfg, false)).collect())
}

/// Conditional estimate of `P(sup_{[0,t]} |B(C)| ≤ ε)`.
pub fn estimate_smallball_conditional(
    clock: &ClockSpec,
    horizon: f64,
    eps: f64,
    cfg: &McConfig,
) -> Result<EstimateResult> {
    Ok(estimate_smallball_conditional_multi(clock, horizon, &[eps], cfg)?.remove(0))
}
