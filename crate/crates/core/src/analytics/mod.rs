//! Reference curves, the speed-up factor, and the exhaustive optimality check.

mod classical;
mod curve;
mod optimality;
pub mod quadrature;
mod speedup;

pub use classical::{classical_entropy, classical_entropy_curve, DEFAULT_REL_TOL};
pub use curve::{EntropyCurve, Provenance};
pub use optimality::{verify_optimality, OptimalityConfig, OptimalityReport, RootChoice};
pub use speedup::{speedup_factor, tail_speedup_factor, SpeedupPoint, TAIL_PREFACTOR};

use crate::error::{Error, Result};

/// `P(t) = e^(−8γt)·P0` under continuous optimal feedback.
pub fn feedback_entropy(p0: f64, gamma: f64, t: f64) -> f64 {
    (-8.0 * gamma * t).exp() * p0
}

/// Analytic feedback curve at the given times.
pub fn feedback_entropy_curve(p0: f64, gamma: f64, times: &[f64]) -> Result<EntropyCurve> {
    check_p0(p0)?;
    check_gamma(gamma)?;
    let values = times.iter().map(|&t| feedback_entropy(p0, gamma, t)).collect();
    EntropyCurve::new(times.to_vec(), values, Provenance::Analytic)
}

/// Discrete feedback recursion `(1 − 8γΔt)^n·P0` at the step boundaries `nΔt`.
pub fn discrete_feedback_curve(p0: f64, gamma: f64, dt: f64, n_steps: usize) -> Result<EntropyCurve> {
    check_p0(p0)?;
    let m = crate::measurement::strength_from_rate(gamma, dt)?;
    let factor = 1.0 - m.b() * m.b();
    let mut values = Vec::with_capacity(n_steps + 1);
    let mut p = p0;
    for _ in 0..=n_steps {
        values.push(p);
        p *= factor;
    }
    let times = (0..=n_steps).map(|n| n as f64 * dt).collect();
    EntropyCurve::new(times, values, Provenance::DiscreteExact)
}

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("gamma", format!("{gamma} must be positive")))
    }
}

pub(crate) fn check_p0(p0: f64) -> Result<()> {
    if (0.0..=0.5).contains(&p0) {
        Ok(())
    } else {
        Err(Error::invalid("p0", format!("{p0} is outside [0, 1/2]")))
    }
}
