//! Feedback rotations applied between measurement steps.
//!
//! The optimal rule tips the Bloch vector back onto the equator along its own
//! meridian. The rotation axis `(−sin φ, cos φ, 0)` is orthogonal to both the
//! z-axis and the vector's xy-projection, so the azimuth `φ` never changes and
//! the axis stays fixed along a run; only the angle varies.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bloch::{azimuth, polar_angle, rotate, BlochState, Rotation};
use crate::error::{Error, Result};

/// Which correction to apply after each measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Strategy {
    /// Minimal rotation onto the equator.
    Optimal,
    /// No feedback.
    None,
    /// Rotate along the meridian until the polar angle equals the target.
    FixedTheta(f64),
    /// Tilt toward the equator by the listed angle after measurement `k`
    /// (1-based); no rotation once the list runs out.
    CustomSchedule(Vec<f64>),
}

impl Strategy {
    pub fn validate(&self) -> Result<()> {
        match self {
            Strategy::FixedTheta(theta) if !(0.0..=PI).contains(theta) => Err(Error::invalid(
                "strategy",
                format!("fixed-theta target {theta} is outside [0, pi]"),
            )),
            Strategy::CustomSchedule(angles) if angles.iter().any(|a| !a.is_finite()) => {
                Err(Error::invalid("strategy", "custom schedule has non-finite angles"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Optimal => f.write_str("optimal"),
            Strategy::None => f.write_str("none"),
            Strategy::FixedTheta(theta) => write!(f, "fixed-theta={theta:?}"),
            Strategy::CustomSchedule(angles) => {
                f.write_str("custom=")?;
                for (i, a) in angles.iter().enumerate() {
                    if i > 0 {
                        f.write_str(":")?;
                    }
                    write!(f, "{a:?}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_angle = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid("strategy", format!("cannot parse angle {v:?}")))
        };
        let strategy = match s {
            "optimal" => Strategy::Optimal,
            "none" => Strategy::None,
            _ => {
                if let Some(v) = s.strip_prefix("fixed-theta=") {
                    Strategy::FixedTheta(parse_angle(v)?)
                } else if let Some(v) = s.strip_prefix("custom=") {
                    let angles = if v.is_empty() {
                        Vec::new()
                    } else {
                        v.split(':').map(parse_angle).collect::<Result<_>>()?
                    };
                    Strategy::CustomSchedule(angles)
                } else {
                    return Err(Error::invalid(
                        "strategy",
                        format!("unknown strategy {s:?} (expected optimal, none, fixed-theta=X or custom=a:b:...)"),
                    ));
                }
            }
        };
        strategy.validate()?;
        Ok(strategy)
    }
}

impl TryFrom<String> for Strategy {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Strategy> for String {
    fn from(s: Strategy) -> String {
        s.to_string()
    }
}

/// A rotation chosen by a feedback rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackCommand {
    pub rotation: Rotation,
    /// Signed rotation angle about `(−sin φ, cos φ, 0)`.
    pub alpha: f64,
    /// The `φ` the axis was built from; `0` by convention on the z-axis.
    pub axis_azimuth: f64,
}

impl FeedbackCommand {
    fn tilt(state: &BlochState, alpha: f64) -> Self {
        let phi = azimuth(state).unwrap_or(0.0);
        Self {
            rotation: Rotation::about_meridian_normal(phi, alpha),
            alpha,
            axis_azimuth: phi,
        }
    }

    pub fn identity() -> Self {
        Self {
            rotation: Rotation::about_meridian_normal(0.0, 0.0),
            alpha: 0.0,
            axis_azimuth: 0.0,
        }
    }
}

/// Minimal-angle rotation taking `az` to zero while keeping `φ`.
///
/// `α = atan2(az, r)` with `r` the transverse length. For a post-measurement
/// state `(√(1−b²)·a, ±b)` this is `tan⁻¹[±b / (√(1−2P)·√(1−b²))]`.
pub fn optimal_correction(state: &BlochState) -> FeedbackCommand {
    if state.az() == 0.0 {
        return FeedbackCommand::tilt(state, 0.0);
    }
    FeedbackCommand::tilt(state, state.az().atan2(state.transverse_norm()))
}

/// Rotation along the meridian to polar angle `target`.
pub fn tilt_to_polar_angle(state: &BlochState, target: f64) -> FeedbackCommand {
    if state.norm_sqr() == 0.0 {
        return FeedbackCommand::identity();
    }
    FeedbackCommand::tilt(state, target - polar_angle(state))
}

/// Correction chosen by `strategy` after `measurements` completed steps.
pub fn correction(strategy: &Strategy, state: &BlochState, measurements: usize) -> FeedbackCommand {
    match strategy {
        Strategy::Optimal => optimal_correction(state),
        Strategy::None => FeedbackCommand::identity(),
        Strategy::FixedTheta(theta) => tilt_to_polar_angle(state, *theta),
        Strategy::CustomSchedule(angles) => {
            let angle = measurements
                .checked_sub(1)
                .and_then(|k| angles.get(k))
                .copied()
                .unwrap_or(0.0);
            if angle == 0.0 || state.az() == 0.0 {
                FeedbackCommand::identity()
            } else {
                FeedbackCommand::tilt(state, angle.copysign(state.az()))
            }
        }
    }
}

/// Applies the strategy's correction and returns the rotated state.
pub fn apply_strategy(strategy: &Strategy, state: &BlochState, measurements: usize) -> BlochState {
    let cmd = correction(strategy, state, measurements);
    if cmd.alpha == 0.0 {
        *state
    } else {
        rotate(state, &cmd.rotation)
    }
}

/// Magnitude of the optimal correction after measurement `n` of the exact
/// feedback recursion, whose pre-measurement entropy is `(1 − b²)^(n−1)·P0`.
pub fn alpha_schedule(n: usize, b_step: f64, p0: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n", "step index starts at 1"));
    }
    if !(b_step > 0.0 && b_step < 1.0) {
        return Err(Error::invalid("b", format!("{b_step} is outside (0, 1)")));
    }
    if !(0.0..=0.5).contains(&p0) {
        return Err(Error::invalid("p0", format!("{p0} is outside [0, 1/2]")));
    }
    let b2 = b_step * b_step;
    let exponent = i32::try_from(n - 1).unwrap_or(i32::MAX);
    let entropy = (1.0 - b2).powi(exponent) * p0;
    let transverse = (1.0 - 2.0 * entropy).sqrt() * (1.0 - b2).sqrt();
    Ok(b_step.atan2(transverse))
}

/// Linearized continuum feedback angle `√(8γ)·dW / √(1 − 2P(0)e^(−8γt))`.
pub fn continuum_alpha(p0: f64, gamma: f64, t: f64, dw: f64) -> Result<f64> {
    let denom = 1.0 - 2.0 * p0 * (-8.0 * gamma * t).exp();
    if denom <= 0.0 {
        return Err(Error::FeedbackDivergence);
    }
    Ok((8.0 * gamma).sqrt() * dw / denom.sqrt())
}

/// Same angle without the small-angle expansion: `atan` of the argument.
pub fn continuum_alpha_exact(p0: f64, gamma: f64, t: f64, dw: f64) -> Result<f64> {
    let denom = 1.0 - 2.0 * p0 * (-8.0 * gamma * t).exp();
    if denom < 0.0 || (denom == 0.0 && dw == 0.0) {
        return Err(Error::FeedbackDivergence);
    }
    Ok(((8.0 * gamma).sqrt() * dw).atan2(denom.sqrt()))
}
