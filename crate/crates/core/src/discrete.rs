//! Finite sequences of the two-outcome measurement with feedback in between.

use rand::Rng;

use crate::bloch::{linear_entropy, rotate, BlochState};
use crate::error::{Error, Result};
use crate::feedback::{alpha_schedule, correction, Strategy};
use crate::measurement::{branches, measure_step, MeasurementStrength};

/// One row of a discrete run. Row 0 is the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteRecord {
    pub step: usize,
    pub entropy: f64,
    /// Signed feedback angle applied after this measurement.
    pub alpha: f64,
    /// `α_n` from the closed-form schedule; only for the optimal strategy.
    pub alpha_schedule: Option<f64>,
    /// `+1`/`−1`, or `0` for the initial row.
    pub outcome: i8,
    /// Whether both outcomes of this measurement led to the same entropy.
    pub outcome_independent: bool,
    pub state: BlochState,
}

/// Runs `n_steps` measurements of strength `b` from an equatorial state with
/// entropy `p0`, applying `strategy` after each. Outcomes are drawn from `rng`.
pub fn run_discrete<R: Rng + ?Sized>(
    p0: f64,
    b: f64,
    n_steps: usize,
    strategy: &Strategy,
    rng: &mut R,
) -> Result<Vec<DiscreteRecord>> {
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::invalid("b", format!("{b} is outside (0, 1)")));
    }
    strategy.validate()?;
    let m = MeasurementStrength::from_b(b)?;
    let mut state = BlochState::equatorial_with_entropy(p0)?;

    let mut records = Vec::with_capacity(n_steps + 1);
    records.push(DiscreteRecord {
        step: 0,
        entropy: linear_entropy(&state),
        alpha: 0.0,
        alpha_schedule: None,
        outcome: 0,
        outcome_independent: true,
        state,
    });

    for step in 1..=n_steps {
        let [(_, plus), (_, minus)] = branches(&state, &m);
        let outcome_independent = (linear_entropy(&plus) - linear_entropy(&minus)).abs() <= 1e-12;

        let outcome = measure_step(&state, &m, rng.random::<f64>());
        let cmd = correction(strategy, &outcome.post_state, step);
        state = if cmd.alpha == 0.0 {
            outcome.post_state
        } else {
            rotate(&outcome.post_state, &cmd.rotation)
        };
        let schedule = match strategy {
            Strategy::Optimal => Some(alpha_schedule(step, b, p0)?),
            _ => None,
        };
        records.push(DiscreteRecord {
            step,
            entropy: linear_entropy(&state),
            alpha: cmd.alpha,
            alpha_schedule: schedule,
            outcome: outcome.sign,
            outcome_independent,
            state,
        });
    }
    Ok(records)
}

/// `(1 − b²)^n · P0`, the entropy after `n` optimally corrected steps.
pub fn optimal_entropy_after(p0: f64, b: f64, n: usize) -> f64 {
    let exponent = i32::try_from(n).unwrap_or(i32::MAX);
    (1.0 - b * b).powi(exponent) * p0
}
