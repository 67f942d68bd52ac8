//! Time stepping of the conditioned state under continuous σz measurement,
//!
//! `dρ = −γ[σz,[σz,ρ]]dt + √(2γ)(σzρ + ρσz − 2⟨σz⟩ρ)dW`,
//!
//! which in Bloch form reads
//!
//! ```text
//! dax = −4γ·ax·dt − 2√(2γ)·az·ax·dW      (ay likewise)
//! daz =  2√(2γ)·(1 − az²)·dW
//! ```
//!
//! Two discretizations are provided. [`sde_step`] is plain Euler–Maruyama on
//! these components. [`kraus_step`] applies the first-order measurement
//! operator `M = (1 − γdt)I + √(2γ)·dY·σz` to ρ and renormalizes, with the
//! record increment `dY = dW + 2√(2γ)⟨σz⟩dt`; it agrees with Euler–Maruyama
//! to first order but keeps the state positive and leaves pure states pure.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::analytics::{EntropyCurve, Provenance};
use crate::bloch::{linear_entropy, rotate, BlochState};
use crate::error::{Error, Result};
use crate::feedback::{correction, Strategy};

/// Stability budget on `8γdt`.
pub const MAX_STEP_STRENGTH: f64 = 0.1;

/// Distribution of the Wiener increments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    /// `dW = ±√dt` with equal probability: the record of the two-outcome
    /// measurement sequence. Matches the Gaussian in mean and variance.
    #[default]
    TwoPoint,
    /// `dW ~ N(0, dt)`.
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    EulerMaruyama,
    #[default]
    Kraus,
}

impl std::str::FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-point" => Ok(NoiseKind::TwoPoint),
            "gaussian" => Ok(NoiseKind::Gaussian),
            _ => Err(Error::invalid("noise", format!("unknown noise kind {s:?}"))),
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euler-maruyama" => Ok(Scheme::EulerMaruyama),
            "kraus" => Ok(Scheme::Kraus),
            _ => Err(Error::invalid("scheme", format!("unknown scheme {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SdeConfig {
    pub gamma: f64,
    pub dt: f64,
    pub total_time: f64,
    #[serde(default)]
    pub noise: NoiseKind,
    #[serde(default)]
    pub scheme: Scheme,
}

impl SdeConfig {
    pub fn new(gamma: f64, dt: f64, total_time: f64) -> Result<Self> {
        let cfg = Self {
            gamma,
            dt,
            total_time,
            noise: NoiseKind::default(),
            scheme: Scheme::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_noise(mut self, noise: NoiseKind) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::invalid("gamma", format!("{} must be positive", self.gamma)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid("dt", format!("{} must be positive", self.dt)));
        }
        if !(self.total_time >= 0.0 && self.total_time.is_finite()) {
            return Err(Error::invalid(
                "time",
                format!("{} must be non-negative", self.total_time),
            ));
        }
        let strength = 8.0 * self.gamma * self.dt;
        if strength > MAX_STEP_STRENGTH {
            return Err(Error::invalid(
                "dt",
                format!("8*gamma*dt = {strength} exceeds the stability budget {MAX_STEP_STRENGTH}"),
            ));
        }
        Ok(())
    }

    /// Number of steps, `total_time / dt` rounded to the nearest integer.
    pub fn n_steps(&self) -> usize {
        (self.total_time / self.dt).round() as usize
    }
}

/// One Wiener increment `dW`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WienerIncrement(pub f64);

impl WienerIncrement {
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, dt: f64, noise: NoiseKind) -> Self {
        let scale = dt.sqrt();
        match noise {
            NoiseKind::TwoPoint => {
                if rng.random::<f64>() < 0.5 {
                    Self(scale)
                } else {
                    Self(-scale)
                }
            }
            NoiseKind::Gaussian => {
                let z: f64 = rng.sample(StandardNormal);
                Self(scale * z)
            }
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepResult {
    pub state: BlochState,
    /// Set when round-off pushed `|a|` past 1 and the vector was pulled back.
    pub clamped: bool,
}

/// Euler–Maruyama step in Bloch coordinates, then a radial clamp to `|a| ≤ 1`.
pub fn sde_step(state: &BlochState, gamma: f64, dt: f64, dw: WienerIncrement) -> StepResult {
    let [ax, ay, az] = state.components();
    let root = 2.0 * (2.0 * gamma).sqrt();
    let shrink = 1.0 - 4.0 * gamma * dt - root * az * dw.0;
    let (state, clamped) = BlochState::clamped(ax * shrink, ay * shrink, az + root * (1.0 - az * az) * dw.0);
    StepResult { state, clamped }
}

/// Normalized `MρM†` with `M = (1 − γdt)I + √(2γ)·dY·σz`.
pub fn kraus_step(state: &BlochState, gamma: f64, dt: f64, dw: WienerIncrement) -> StepResult {
    let [ax, ay, az] = state.components();
    let root = (2.0 * gamma).sqrt();
    let record = dw.0 + 2.0 * root * az * dt;
    let s = root * record;
    let u = 1.0 - gamma * dt;
    let (up, down) = (u + s, u - s);
    let (up2, down2) = (up * up, down * down);
    let weight_up = up2 * (1.0 + az);
    let weight_down = down2 * (1.0 - az);
    let trace = weight_up + weight_down;
    if trace.is_nan() || trace <= 0.0 {
        return StepResult {
            state: *state,
            clamped: false,
        };
    }
    let coherence = 2.0 * up * down / trace;
    let (state, clamped) = BlochState::clamped(
        coherence * ax,
        coherence * ay,
        (weight_up - weight_down) / trace,
    );
    StepResult { state, clamped }
}

pub fn step(scheme: Scheme, state: &BlochState, gamma: f64, dt: f64, dw: WienerIncrement) -> StepResult {
    match scheme {
        Scheme::EulerMaruyama => sde_step(state, gamma, dt, dw),
        Scheme::Kraus => kraus_step(state, gamma, dt, dw),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub curve: EntropyCurve,
    pub final_state: BlochState,
    pub clamp_events: u64,
    pub steps: usize,
}

/// Indices of the recorded step boundaries: every `record_every`-th one plus the last.
pub fn recorded_steps(n_steps: usize, record_every: usize) -> Vec<usize> {
    let stride = record_every.max(1);
    let mut steps: Vec<usize> = (0..=n_steps).step_by(stride).collect();
    if steps.last() != Some(&n_steps) {
        steps.push(n_steps);
    }
    steps
}

/// Integrates one trajectory, applying `strategy` as an exact rotation after
/// every step, and records `P` at the boundaries given by `record_every`.
pub fn simulate_trajectory<R: Rng + ?Sized>(
    initial: &BlochState,
    cfg: &SdeConfig,
    strategy: &Strategy,
    rng: &mut R,
    record_every: usize,
) -> Result<Trajectory> {
    cfg.validate()?;
    strategy.validate()?;
    if record_every == 0 {
        return Err(Error::invalid("record-every", "must be at least 1"));
    }
    let n_steps = cfg.n_steps();
    let capacity = n_steps / record_every + 2;
    let mut times = Vec::with_capacity(capacity);
    let mut values = Vec::with_capacity(capacity);
    let mut clamp_events = 0u64;

    let mut state = *initial;
    times.push(0.0);
    values.push(linear_entropy(&state));
    for k in 1..=n_steps {
        let dw = WienerIncrement::sample(rng, cfg.dt, cfg.noise);
        let out = step(cfg.scheme, &state, cfg.gamma, cfg.dt, dw);
        clamp_events += u64::from(out.clamped);
        let cmd = correction(strategy, &out.state, k);
        state = if cmd.alpha == 0.0 {
            out.state
        } else {
            rotate(&out.state, &cmd.rotation)
        };
        if k % record_every == 0 || k == n_steps {
            times.push(k as f64 * cfg.dt);
            values.push(linear_entropy(&state));
        }
    }

    Ok(Trajectory {
        curve: EntropyCurve::new(times, values, Provenance::MonteCarlo)?,
        final_state: state,
        clamp_events,
        steps: n_steps,
    })
}
