use std::path::PathBuf;

use clap::{ArgGroup, Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use smallball::asymptotics::{
    chaos_clock_constant, chaos_sup_constant, kappa_p, sup_bm_cdf, tauberian_forward,
    tauberian_inverse, tsb_constant, weighted_sum_constant, AsymptoticOrder, LaplaceOrder,
    Partition, WeightSequenceSpec,
};
use smallball::mc::{
    estimate_laplace_multi, estimate_smallball_conditional_multi, estimate_smallball_raw,
    extract_constant, oracle_laplace_chaos, oracle_laplace_intbm2, EstimateResult, ProbeGrid,
    Process, SupMonitor,
};
use smallball::paths::{
    simulate_bm, simulate_chaos_direct, simulate_chaos_matrix, simulate_levy_area,
    simulate_time_changed, ClockSpec, PathGrid, StepWeight, TimeGrid,
};
use smallball::rng::RngStream;
use smallball::schrodinger::{lambda1 as ground_energy, EigenConfig};
use smallball::spectral::{singular_pairs, AntisymmetricMatrix, SpectralData};
use smallball::verify::run_all;

use crate::config::{Format, Settings};
use crate::error::CliError;
use crate::output::Report;

type Out = Result<Report, CliError>;

fn params<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

/// `geometric:LEAD,RATIO`, `polynomial:LEAD,EXPONENT` or `explicit:W1,W2,...`.
pub fn parse_weights(s: &str) -> Result<WeightSequenceSpec, CliError> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| CliError::usage(format!("weight sequence '{s}' should look like geometric:0.5,0.5")))?;
    let nums: Vec<f64> = rest
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::usage(format!("bad number in '{s}': {e}")))?;
    let pair = |name: &str| -> Result<(f64, f64), CliError> {
        match nums[..] {
            [a, b] => Ok((a, b)),
            _ => Err(CliError::usage(format!("{name} weights take two numbers"))),
        }
    };
    Ok(match kind {
        "geometric" => {
            let (l, r) = pair("geometric")?;
            WeightSequenceSpec::geometric(l, r)?
        }
        "polynomial" => {
            let (l, e) = pair("polynomial")?;
            WeightSequenceSpec::polynomial(l, e)?
        }
        "explicit" => WeightSequenceSpec::explicit(nums)?,
        other => return Err(CliError::usage(format!("unknown weight sequence kind '{other}'"))),
    })
}

/// Partition with windows `(a_i, b_i)`; `b` defaults to 1 on a single
/// interval and `a` to `(0, b_1, b_2, …)`.
fn partition(t: &[f64], a: &[f64], b: &[f64]) -> Result<Partition, CliError> {
    let part = Partition::new(t.to_vec())?;
    let b = if b.is_empty() && t.len() == 1 { vec![1.0] } else { b.to_vec() };
    if b.len() != t.len() {
        return Err(CliError::usage("give one --b value per partition time"));
    }
    let a = if a.is_empty() {
        std::iter::once(0.0).chain(b.iter().copied()).take(b.len()).collect()
    } else {
        a.to_vec()
    };
    if a.len() != b.len() {
        return Err(CliError::usage("give one --a value per partition time"));
    }
    Ok(part.with_windows(a.into_iter().zip(b).collect())?)
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("mode").required(true).args(
    ["chaos_sup", "chaos_clock", "kappa", "tauberian", "tsb", "weighted_sum", "sup_cdf"]
)))]
pub struct ConstantsArgs {
    /// (π/4)‖ω‖₁ Σ Δt_i / b_i
    #[arg(long)]
    pub chaos_sup: bool,
    /// (1/8)‖ω‖₁² (Σ d_i^{1/2} Δt_i)²
    #[arg(long)]
    pub chaos_clock: bool,
    /// κ_p from the ground-state energy λ₁(p)
    #[arg(long)]
    pub kappa: bool,
    /// Laplace constant L of the order (α, β, K); with --inverse, K from L
    #[arg(long)]
    pub tauberian: bool,
    #[arg(long, requires = "tauberian")]
    pub inverse: bool,
    /// Small-ball constant of B(C) from per-interval clock constants --k
    #[arg(long)]
    pub tsb: bool,
    /// K (Σ a_j^{α/(1+α)})^{1+α} for --weights
    #[arg(long)]
    pub weighted_sum: bool,
    /// P(sup_[0,1] |B| ≤ x)
    #[arg(long)]
    pub sup_cdf: bool,
    #[arg(long, default_value_t = 1.0)]
    pub omega_one_norm: f64,
    /// Partition times
    #[arg(long, value_delimiter = ',', default_values_t = [1.0])]
    pub t: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub a: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub b: Vec<f64>,
    /// Interval weights d_i
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    /// Constant K (L with --inverse); one per interval for --tsb
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<f64>,
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub x: Option<f64>,
}

fn first_k(a: &ConstantsArgs) -> Result<f64, CliError> {
    a.k.first().copied().ok_or_else(|| CliError::usage("--k is required"))
}

pub fn constants(a: &ConstantsArgs) -> Out {
    let mut rep = Report::new("constants", params(a), Format::Text);
    let mut put = |name: &str, v: f64| {
        rep.row(json!({"constant": name, "value": v}));
        rep.line(format!("{v:.10}"));
    };
    if a.chaos_sup {
        put("chaos_sup", chaos_sup_constant(a.omega_one_norm, &partition(&a.t, &a.a, &a.b)?)?);
    } else if a.chaos_clock {
        let d = if a.d.is_empty() { vec![1.0; a.t.len()] } else { a.d.clone() };
        let part = Partition::new(a.t.clone())?.with_weights(d)?;
        put("chaos_clock", chaos_clock_constant(a.omega_one_norm, &part)?);
    } else if a.kappa {
        let l = ground_energy(a.p, &EigenConfig::default())?;
        put("kappa", kappa_p(a.p, l.value)?);
    } else if a.tauberian {
        let k = first_k(a)?;
        if a.inverse {
            let shape = tauberian_forward(&AsymptoticOrder::new(a.alpha, a.beta, 1.0)?);
            let l = LaplaceOrder::new(shape.pow_exponent(), shape.log_exponent(), k)?;
            put("small_ball_constant", tauberian_inverse(&l).big_k());
        } else {
            put("laplace_constant", tauberian_forward(&AsymptoticOrder::new(a.alpha, a.beta, k)?).big_l());
        }
    } else if a.tsb {
        let b = if a.b.is_empty() { vec![1.0; a.k.len()] } else { a.b.clone() };
        put("time_changed_sup", tsb_constant(a.alpha, a.beta, &a.k, &b)?);
    } else if a.weighted_sum {
        let w = parse_weights(a.weights.as_deref().ok_or_else(|| CliError::usage("--weights is required"))?)?;
        put("weighted_sum", weighted_sum_constant(&AsymptoticOrder::new(a.alpha, 0.0, first_k(a)?)?, &w)?);
    } else if a.sup_cdf {
        put("sup_cdf", sup_bm_cdf(a.x.ok_or_else(|| CliError::usage("--x is required"))?)?);
    }
    Ok(rep)
}

#[derive(Debug, Args, Serialize)]
pub struct Lambda1Args {
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 12.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 4096)]
    pub grid_points: usize,
    #[arg(long, default_value_t = 2)]
    pub levels: usize,
}

pub fn lambda1(a: &Lambda1Args) -> Out {
    let cfg = EigenConfig { half_width: a.half_width, grid_points: a.grid_points, richardson_levels: a.levels };
    let r = ground_energy(a.p, &cfg)?;
    let mut rep = Report::new("lambda1", params(a), Format::Text);
    rep.row(json!({"p": a.p, "lambda1": r.value, "errorEstimate": r.error_estimate}));
    rep.line(format!("{:.10}", r.value));
    Ok(rep)
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("source").args(["matrix", "q", "weights"])))]
pub struct SpectralArgs {
    /// Antisymmetric matrix as JSON rows or CSV
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<f64>,
    #[arg(long)]
    pub weights: Option<String>,
}

pub fn spectral(a: &SpectralArgs, s: &Settings) -> Out {
    let data = if let Some(path) = &a.matrix {
        singular_pairs(&AntisymmetricMatrix::load(path)?)?
    } else if !a.q.is_empty() {
        SpectralData::new(a.q.clone())?
    } else if let Some(w) = &a.weights {
        SpectralData::from_weights(&parse_weights(w)?, s.truncation)?
    } else {
        return Err(CliError::usage("give --matrix, --q or --weights"));
    };
    let mut rep = Report::new("spectral", params(a), Format::Text);
    for (j, q) in data.q().iter().enumerate() {
        rep.row(json!({"j": j + 1, "q": q}));
        rep.line(format!("q_{} = {q:.12}", j + 1));
    }
    rep.line(format!("one_norm = {:.12}", data.one_norm()));
    rep.line(format!("hs_norm_sq = {:.12}", data.hs_norm_sq()));
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClockKind {
    IntegratedSquare,
    Power,
    Chaos,
    Linear,
}

/// Clock and chaos-weight options.
#[derive(Debug, Clone, Args, Serialize)]
pub struct ClockArgs {
    #[arg(long, value_enum, default_value_t = ClockKind::IntegratedSquare)]
    pub clock: ClockKind,
    /// Exponent of the power functional clock
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Knots of the step weight ρ̃
    #[arg(long, value_delimiter = ',')]
    pub rho_knots: Vec<f64>,
    /// Values of ρ̃, one more than knots
    #[arg(long, value_delimiter = ',', default_values_t = [1.0])]
    pub rho_values: Vec<f64>,
    /// Slope of the linear clock
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
    /// Explicit chaos weights q_j
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<f64>,
    /// Chaos weight sequence, truncated at --truncation
    #[arg(long, default_value = "geometric:0.5,0.5")]
    pub weights: String,
}

impl ClockArgs {
    fn chaos_q(&self, s: &Settings) -> Result<Vec<f64>, CliError> {
        let data = if self.q.is_empty() {
            SpectralData::from_weights(&parse_weights(&self.weights)?, s.truncation)?
        } else {
            SpectralData::new(self.q.clone())?
        };
        Ok(data.q().to_vec())
    }

    fn clock(&self, s: &Settings) -> Result<ClockSpec, CliError> {
        Ok(match self.clock {
            ClockKind::IntegratedSquare => ClockSpec::integrated_square(),
            ClockKind::Power => {
                ClockSpec::power(self.p, StepWeight::new(self.rho_knots.clone(), self.rho_values.clone())?)?
            }
            ClockKind::Chaos => ClockSpec::chaos(self.chaos_q(s)?)?,
            ClockKind::Linear => ClockSpec::linear(self.rate)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimProcess {
    Bm,
    LevyArea,
    Chaos,
    TimeChanged,
    Matrix,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = SimProcess::Bm)]
    pub process: SimProcess,
    #[arg(long, default_value_t = 1.0)]
    pub horizon: f64,
    #[command(flatten)]
    pub clock: ClockArgs,
    /// Antisymmetric matrix for --process matrix
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

fn path_rows(rep: &mut Report, path: &PathGrid) {
    for (k, v) in path.values().iter().enumerate() {
        rep.row(json!({"time": path.time(k), "value": v}));
    }
}

pub fn simulate(a: &SimulateArgs, s: &Settings) -> Out {
    let stream = RngStream::new(s.seed, s.stream);
    let mut rng = stream.substream(1).rng();
    let path = match a.process {
        SimProcess::Bm => simulate_bm(s.steps, a.horizon, &mut rng)?,
        SimProcess::LevyArea => simulate_levy_area(s.steps, a.horizon, &mut rng)?,
        SimProcess::Chaos => simulate_chaos_direct(&a.clock.chaos_q(s)?, s.steps, a.horizon, &mut rng)?.z,
        SimProcess::TimeChanged => {
            let grid = TimeGrid::uniform(s.steps, a.horizon)?;
            let inc = a.clock.clock(s)?.increments_on(&grid, &mut stream.substream(0).rng());
            simulate_time_changed(&inc, a.horizon, &mut rng)?
        }
        SimProcess::Matrix => {
            let path = a.matrix.as_ref().ok_or_else(|| CliError::usage("--process matrix needs --matrix"))?;
            simulate_chaos_matrix(&AntisymmetricMatrix::load(path)?, s.steps, a.horizon, &mut rng)?
        }
    };
    let mut rep = Report::new("simulate", params(a), Format::Csv);
    path_rows(&mut rep, &path);
    rep.line(format!("sup_abs = {:.12}", path.sup_abs()));
    rep.line(format!("final = {:.12}", path.last()));
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BallProcess {
    Bm,
    Chaos,
    TimeChanged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    Raw,
    Conditional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monitor {
    Grid,
    Bridge,
}

#[derive(Debug, Args, Serialize)]
pub struct SmallballArgs {
    #[arg(long, value_enum, default_value_t = BallProcess::Bm)]
    pub process: BallProcess,
    #[command(flatten)]
    pub clock: ClockArgs,
    /// Probe radii, largest first
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Estimator::Raw)]
    pub estimator: Estimator,
    #[arg(long, value_enum, default_value_t = Monitor::Grid)]
    pub monitor: Monitor,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0])]
    pub t: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub a: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub b: Vec<f64>,
    /// Report K̂(ε) = −ε^α |log ε|^β log P̂ and its extrapolation
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
}

fn estimate_row(eps: f64, r: &EstimateResult) -> Value {
    json!({"eps": eps, "estimate": r.estimate, "stdError": r.std_error, "samples": r.samples, "zeroHits": r.zero_hits})
}

pub fn smallball(a: &SmallballArgs, s: &Settings) -> Out {
    let mut cfg = s.mc();
    let results: Vec<EstimateResult> = match a.estimator {
        Estimator::Conditional => {
            if a.t.len() != 1 {
                return Err(CliError::usage("the conditional estimator needs a single interval"));
            }
            let clock = match a.process {
                BallProcess::Bm => ClockSpec::linear(1.0)?,
                BallProcess::Chaos => ClockSpec::chaos(a.clock.chaos_q(s)?)?,
                BallProcess::TimeChanged => a.clock.clock(s)?,
            };
            estimate_smallball_conditional_multi(&clock, a.t[0], &a.eps, &cfg)?
        }
        Estimator::Raw => {
            cfg.monitor = match a.monitor {
                Monitor::Grid => SupMonitor::Grid,
                Monitor::Bridge => SupMonitor::Bridge,
            };
            let process = match a.process {
                BallProcess::Bm => Process::Brownian,
                BallProcess::Chaos => Process::ChaosDirect { q: a.clock.chaos_q(s)? },
                BallProcess::TimeChanged => Process::TimeChanged { clock: a.clock.clock(s)? },
            };
            let part = partition(&a.t, &a.a, &a.b)?;
            a.eps
                .iter()
                .map(|&e| estimate_smallball_raw(&process, &part, e, &cfg))
                .collect::<Result<_, _>>()?
        }
    };
    let mut rep = Report::new("smallball", params(a), Format::Json);
    let fit = match a.alpha {
        Some(alpha) => Some(extract_constant(&ProbeGrid::new(a.eps.clone(), results.clone())?, alpha, a.beta)?),
        None => None,
    };
    rep.line(format!("{:>10} {:>16} {:>12}", "eps", "estimate", "std_error"));
    for (&e, r) in a.eps.iter().zip(&results) {
        let mut row = estimate_row(e, r);
        if let Some(f) = &fit {
            let k = f.points.iter().find(|p| p.0 == e).map(|p| p.1);
            row["kHat"] = json!(k);
            row["kExtrapolated"] = json!(f.extrapolated);
        }
        rep.row(row);
        rep.line(format!("{e:>10} {:>16.8e} {:>12.4e}{}", r.estimate, r.std_error, if r.zero_hits { " (no hits)" } else { "" }));
    }
    if let Some(f) = &fit {
        rep.line(format!(
            "K_hat extrapolated = {:.6}; distances non-increasing: {}",
            f.extrapolated, f.distances_non_increasing
        ));
    }
    Ok(rep)
}

#[derive(Debug, Args, Serialize)]
pub struct LaplaceArgs {
    #[command(flatten)]
    pub clock: ClockArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambda: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0])]
    pub t: Vec<f64>,
    /// Interval weights d_i (default 1)
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<f64>,
    /// Add the closed-form value where one exists
    #[arg(long)]
    pub oracle: bool,
}

pub fn laplace(a: &LaplaceArgs, s: &Settings) -> Out {
    let clock = a.clock.clock(s)?;
    let mut part = Partition::new(a.t.clone())?;
    if !a.d.is_empty() {
        part = part.with_weights(a.d.clone())?;
    }
    let est = estimate_laplace_multi(&clock, &part, &a.lambda, &s.mc())?;
    let d0 = a.d.first().copied().unwrap_or(1.0);
    let oracle = |l: f64| -> Result<Option<f64>, CliError> {
        if !a.oracle || a.t.len() != 1 {
            return Ok(None);
        }
        Ok(match &clock {
            ClockSpec::PowerFunctional { p, weight } if *p == 2.0 && weight.eval(0.0) == 1.0 && weight.eval(f64::MAX) == 1.0 => {
                Some(oracle_laplace_intbm2(l * d0, a.t[0])?)
            }
            ClockSpec::Chaos { q } => Some(oracle_laplace_chaos(q, l * d0, a.t[0])?),
            ClockSpec::Linear { rate } => Some((-l * d0 * rate * a.t[0]).exp()),
            _ => None,
        })
    };
    let mut rep = Report::new("laplace", params(a), Format::Json);
    rep.line(format!("{:>10} {:>14} {:>12} {:>14}", "lambda", "estimate", "std_error", "oracle"));
    for (&l, r) in a.lambda.iter().zip(&est) {
        let o = oracle(l)?;
        rep.row(json!({"lambda": l, "estimate": r.estimate, "stdError": r.std_error, "samples": r.samples, "oracle": o}));
        let os = o.map(|v| format!("{v:.8}")).unwrap_or_else(|| "-".into());
        rep.line(format!("{l:>10} {:>14.8} {:>12.4e} {os:>14}", r.estimate, r.std_error));
    }
    Ok(rep)
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Criterion numbers to run (default all)
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u8>,
}

pub fn verify(a: &VerifyArgs, s: &Settings) -> Result<(Report, u8), CliError> {
    let reports = run_all(s.seed, &a.only)?;
    let mut rep = Report::new("verify", params(a), Format::Text);
    let mut failed = 0;
    for r in &reports {
        failed += usize::from(!r.passed);
        rep.row(json!({"id": r.id, "title": r.title, "passed": r.passed, "detail": r.detail}));
        rep.line(r.to_string());
    }
    rep.line(if failed == 0 {
        format!("all {} criteria passed", reports.len())
    } else {
        format!("{failed} of {} criteria failed", reports.len())
    });
    Ok((rep, u8::from(failed > 0)))
}

#[derive(Debug, Args, Serialize)]
pub struct LilDemoArgs {
    #[command(flatten)]
    pub clock: ClockArgs,
    #[arg(long, default_value_t = 1000.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 30)]
    pub checkpoints: usize,
}

pub const LIL_BANNER: &str = "# demonstration only, no pass/fail";

pub fn lil_demo(a: &LilDemoArgs, s: &Settings) -> Out {
    let q = a.clock.chaos_q(s)?;
    let target = chaos_sup_constant(
        SpectralData::new(q.clone())?.one_norm(),
        &Partition::single(1.0)?.with_windows(vec![(0.0, 1.0)])?,
    )?;
    let mut rng = RngStream::new(s.seed, s.stream).substream(1).rng();
    let path = simulate_chaos_direct(&q, s.steps, a.horizon, &mut rng)?.z;
    let sup = path.running_sup_abs();
    let t0 = std::f64::consts::E.powf(std::f64::consts::E).max(path.dt());
    if a.horizon <= t0 || a.checkpoints < 2 {
        return Err(CliError::usage(format!("the horizon must exceed e^e = {t0:.3} and checkpoints must be at least 2")));
    }
    let mut p = params(a);
    p["banner"] = json!(LIL_BANNER.trim_start_matches("# "));
    let mut rep = Report::new("lil-demo", p, Format::Csv);
    rep.line(LIL_BANNER);
    rep.line(format!("# liminf (log log t / t) sup_[0,t] |Z| is (pi/4)||omega||_1 = {target:.10}"));
    let ratio = (a.horizon / t0).ln() / (a.checkpoints - 1) as f64;
    let n = path.step_count();
    for i in 0..a.checkpoints {
        let t = t0 * (ratio * i as f64).exp();
        let k = ((t / a.horizon * n as f64).round() as usize).min(n);
        let tk = path.time(k);
        let scaled = tk.ln().ln() / tk * sup[k];
        rep.row(json!({"t": tk, "sup": sup[k], "scaled": scaled, "target": target}));
        rep.line(format!("t = {tk:>12.3}  scaled sup = {scaled:.6}"));
    }
    Ok(rep)
}
