//! The two-outcome partial measurement of σz.
//!
//! `Ω± = √κ |±⟩⟨±| + √(1−κ) |∓⟩⟨∓|`. Both operators are diagonal in the
//! σz basis, so an outcome rescales the populations by `κ` and `1 − κ` and
//! the coherences by `√(κ(1−κ))`. Writing `c = 2κ − 1` and `b = |c|`:
//!
//! ```text
//! p±   = (1 ± c·az) / 2
//! az'  = (az ± c) / (1 ± c·az)
//! ax'  = √(1 − b²)·ax / (1 ± c·az)      (ay likewise)
//! ```

use serde::{Deserialize, Serialize};

use crate::bloch::{linear_entropy, BlochState};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementStrength {
    kappa: f64,
    b: f64,
}

impl MeasurementStrength {
    pub fn from_kappa(kappa: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&kappa) {
            return Err(Error::invalid("kappa", format!("{kappa} is outside [0, 1]")));
        }
        Ok(Self {
            kappa,
            b: (2.0 * kappa - 1.0).abs(),
        })
    }

    /// Strength with `b` given directly, taking `κ = (1 + b)/2`.
    pub fn from_b(b: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&b) {
            return Err(Error::invalid("b", format!("{b} is outside [0, 1]")));
        }
        Ok(Self {
            kappa: 0.5 * (1.0 + b),
            b,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `2κ − 1`, the signed contrast between the two outcomes.
    pub fn contrast(&self) -> f64 {
        2.0 * self.kappa - 1.0
    }
}

/// `κ = 1/2 − √(2γΔt)`, so that `b² = 8γΔt`.
pub fn strength_from_rate(gamma: f64, dt: f64) -> Result<MeasurementStrength> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::invalid("gamma", format!("{gamma} must be positive")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt", format!("{dt} must be positive")));
    }
    let x = 2.0 * gamma * dt;
    if x > 0.25 {
        return Err(Error::StepTooLarge(x));
    }
    let root = x.sqrt();
    Ok(MeasurementStrength {
        kappa: 0.5 - root,
        b: 2.0 * root,
    })
}

/// Result of one application of the measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    /// `+1` for `Ω₊`, `−1` for `Ω₋`.
    pub sign: i8,
    pub probability: f64,
    pub post_state: BlochState,
}

/// Born-rule probabilities `(p₊, p₋)`.
pub fn outcome_probabilities(state: &BlochState, m: &MeasurementStrength) -> (f64, f64) {
    let shift = m.contrast() * state.az();
    (0.5 * (1.0 + shift), 0.5 * (1.0 - shift))
}

/// Normalized `Ω_s ρ Ω_s†` for the outcome `sign`.
pub fn conditional_state(state: &BlochState, m: &MeasurementStrength, sign: i8) -> BlochState {
    let c = if sign >= 0 { m.contrast() } else { -m.contrast() };
    let norm = 1.0 + c * state.az();
    if norm == 0.0 {
        // Zero-probability outcome; there is no posterior to speak of.
        return *state;
    }
    let coherence = (1.0 - m.b() * m.b()).max(0.0).sqrt() / norm;
    let (post, _) = BlochState::clamped(
        coherence * state.ax(),
        coherence * state.ay(),
        (state.az() + c) / norm,
    );
    post
}

/// Applies the measurement once. Outcome `+1` occurs iff `u < p₊`.
pub fn measure_step(state: &BlochState, m: &MeasurementStrength, u: f64) -> StepOutcome {
    let (p_plus, p_minus) = outcome_probabilities(state, m);
    let (sign, probability) = if u < p_plus { (1, p_plus) } else { (-1, p_minus) };
    StepOutcome {
        sign,
        probability,
        post_state: conditional_state(state, m, sign),
    }
}

/// Both branches of the measurement as `(probability, posterior)` pairs, `+` first.
pub fn branches(state: &BlochState, m: &MeasurementStrength) -> [(f64, BlochState); 2] {
    let (p_plus, p_minus) = outcome_probabilities(state, m);
    [
        (p_plus, conditional_state(state, m, 1)),
        (p_minus, conditional_state(state, m, -1)),
    ]
}

/// Mean reduction of linear entropy over both outcomes, by enumeration.
pub fn expected_purification(state: &BlochState, m: &MeasurementStrength) -> f64 {
    let after: f64 = branches(state, m)
        .iter()
        .map(|(p, s)| p * linear_entropy(s))
        .sum();
    linear_entropy(state) - after
}

/// Closed form of the mean entropy reduction for a state with entropy `entropy`
/// whose Bloch vector makes angle `theta` with the z-axis:
///
/// `Δ = b²·P·(1 − (1−2P)cos²θ) / (1 − (1−2P)·b²·cos²θ)`.
///
/// Largest at `θ = π/2`, where it equals `b²P`.
pub fn average_purification(entropy: f64, theta: f64, m: &MeasurementStrength) -> f64 {
    let b2 = m.b() * m.b();
    let r2 = 1.0 - 2.0 * entropy;
    let cos2 = theta.cos().powi(2);
    let denom = 1.0 - r2 * b2 * cos2;
    if denom <= 0.0 {
        // Projective measurement of an eigenstate: nothing left to learn.
        return 0.0;
    }
    b2 * entropy * (1.0 - r2 * cos2) / denom
}
