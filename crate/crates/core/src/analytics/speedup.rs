//! Time to reach a target entropy with and without feedback, from `P0 = 1/2`.

use serde::{Deserialize, Serialize};

use super::check_gamma;
use super::classical::classical_entropy;
use crate::error::{Error, Result};

/// Prefactor `C` of the long-time tail `P_c ≈ C·(γt)^(−1/2)·e^(−4γt)`, `C = √π/8`.
pub const TAIL_PREFACTOR: f64 = 0.221_556_731_363_189_5;

const MIXED_ENTROPY: f64 = 0.5;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedupPoint {
    pub final_entropy: f64,
    /// `1 − 2P`, the squared Bloch length.
    pub purity: f64,
    pub t_feedback: f64,
    pub t_classical: f64,
    pub factor: f64,
}

fn check_target(final_entropy: f64) -> Result<()> {
    if final_entropy >= MIXED_ENTROPY || final_entropy.is_nan() {
        return Err(Error::TargetUnreachable(final_entropy));
    }
    if final_entropy <= 0.0 {
        return Err(Error::invalid(
            "final-p",
            format!("{final_entropy} must be positive"),
        ));
    }
    Ok(())
}

/// Bisection for the root of a decreasing function on `[lo, hi]`.
fn bisect_decreasing<F: FnMut(f64) -> Result<f64>>(mut f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Ratio of the no-feedback first-passage time to the feedback one for the
/// mean entropy to fall to `final_entropy`.
pub fn speedup_factor(final_entropy: f64, gamma: f64, rel_tol: f64) -> Result<SpeedupPoint> {
    check_gamma(gamma)?;
    check_target(final_entropy)?;
    let t_feedback = (MIXED_ENTROPY / final_entropy).ln() / (8.0 * gamma);

    let gap = |t: f64| classical_entropy(gamma, t, rel_tol).map(|p| p - final_entropy);
    let mut lo = 0.0;
    let mut hi = t_feedback;
    let mut doublings = 0;
    while gap(hi)? > 0.0 {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 64 {
            return Err(Error::BracketFailure(format!(
                "no-feedback entropy stays above {final_entropy}"
            )));
        }
    }
    let t_classical = bisect_decreasing(gap, lo, hi)?;
    Ok(SpeedupPoint {
        final_entropy,
        purity: 1.0 - 2.0 * final_entropy,
        t_feedback,
        t_classical,
        factor: t_classical / t_feedback,
    })
}

/// Same ratio with the no-feedback time taken from the asymptotic tail
/// `C·(γt)^(−1/2)·e^(−4γt) = P`, i.e. `2·ln(C(t)/P) / ln(P0/P)` with
/// `C(t) = C·(γt)^(−1/2)`. Only meaningful for small targets.
pub fn tail_speedup_factor(final_entropy: f64, gamma: f64) -> Result<SpeedupPoint> {
    check_gamma(gamma)?;
    check_target(final_entropy)?;
    let log_target = final_entropy.ln();
    let gap = |tau: f64| Ok(TAIL_PREFACTOR.ln() - 0.5 * tau.ln() - 4.0 * tau - log_target);
    let mut hi = 1.0;
    while gap(hi)? > 0.0 {
        hi *= 2.0;
    }
    let tau = bisect_decreasing(gap, 0.0, hi)?;
    let t_feedback = (MIXED_ENTROPY / final_entropy).ln() / (8.0 * gamma);
    let t_classical = tau / gamma;
    Ok(SpeedupPoint {
        final_entropy,
        purity: 1.0 - 2.0 * final_entropy,
        t_feedback,
        t_classical,
        factor: t_classical / t_feedback,
    })
}
