//! Small-deviation asymptotics for Brownian motion run on an independent random
//! clock, with applications to stochastic integrals in the second Wiener chaos.
//!
//! The crate is split into pure evaluators and stochastic machinery:
//!
//! * [`asymptotics`] evaluates the closed-form constants (exponential Tauberian
//!   conversion, clock sums, time-changed and chaos small-ball constants).
//! * [`schrodinger`] computes the ground-state value `λ₁(p)` of
//!   `−½ d²/dx² + |x|^p` that enters the weighted `L^p` constant `κ_p`.
//! * [`spectral`] turns an antisymmetric matrix into its singular-value pairs.
//! * [`paths`] simulates Brownian paths, random clocks, Lévy areas and chaos
//!   integrals on uniform grids.
//! * [`mc`] holds the Monte Carlo estimators, exact oracles, constant
//!   extraction and the two-sample Kolmogorov–Smirnov test.
//! * [`verify`] runs the acceptance checks end to end.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod mc;
pub mod paths;
pub mod rng;
pub mod schrodinger;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};

/// Default number of grid steps for path simulation.
pub const DEFAULT_STEPS: usize = 1 << 14;
/// Default truncation of geometric chaos weight sequences.
pub const DEFAULT_TRUNCATION: usize = 50;
/// Default Monte Carlo sample budget.
pub const DEFAULT_SAMPLES: usize = 100_000;
