//! Mean linear entropy without feedback, starting from the completely mixed state:
//!
//! `P_c(t) = e^(−4γt)/√(8πt) ∫ e^(−x²/2t) / cosh(√(8γ)·x) dx`.
//!
//! With `x = √t·u` this is `(e^(−4γt)/2)·E[sech(√(8γt)·u)]` for standard
//! normal `u`, which is what gets integrated.

use super::curve::{EntropyCurve, Provenance};
use super::quadrature::{integrate, QuadOptions};
use super::check_gamma;
use crate::error::{Error, Result};

pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// Integration cut-off: the Gaussian weight is below 1e-18 of its peak past here.
fn cutoff() -> f64 {
    (2.0 * 1e18f64.ln()).sqrt()
}

fn sech(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

fn check_rel_tol(rel_tol: f64) -> Result<()> {
    if (1e-14..=1e-6).contains(&rel_tol) {
        Ok(())
    } else {
        Err(Error::invalid("rel-tol", format!("{rel_tol} is outside [1e-14, 1e-6]")))
    }
}

pub(crate) fn classical_entropy_unchecked(gamma: f64, t: f64, rel_tol: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.5);
    }
    let c = (8.0 * gamma * t).sqrt();
    let norm = (2.0 * std::f64::consts::PI).sqrt().recip();
    let integrand = |u: f64| norm * (-0.5 * u * u).exp() * sech(c * u);
    let opts = QuadOptions {
        rel_tol,
        abs_tol: 0.0,
        limit: 4000,
    };
    // Symmetric integrand: twice the half line.
    let half = integrate(integrand, 0.0, cutoff(), 8, &opts)?;
    Ok((-4.0 * gamma * t).exp() * half.value)
}

/// `P_c(t)` to relative tolerance `rel_tol`.
pub fn classical_entropy(gamma: f64, t: f64, rel_tol: f64) -> Result<f64> {
    check_gamma(gamma)?;
    check_rel_tol(rel_tol)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid("t", format!("{t} must be non-negative")));
    }
    classical_entropy_unchecked(gamma, t, rel_tol)
}

pub fn classical_entropy_curve(gamma: f64, times: &[f64], rel_tol: f64) -> Result<EntropyCurve> {
    check_gamma(gamma)?;
    check_rel_tol(rel_tol)?;
    let values = times
        .iter()
        .map(|&t| classical_entropy(gamma, t, rel_tol))
        .collect::<Result<Vec<_>>>()?;
    EntropyCurve::new(times.to_vec(), values, Provenance::Quadrature)
}
