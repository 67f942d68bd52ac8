//! Single-qubit states of knowledge in Bloch form and rigid rotations.
//!
//! A state is stored as its Bloch vector `a`, with `ρ = (I + a·σ)/2`. Every
//! operation used by the simulator (entropy, rotations, angles) is a closed
//! form in the three components, so trace and hermiticity hold by
//! construction. The 2×2 matrix view exists for cross-checks.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on `|a|² ≤ 1` and on unit-axis checks.
pub const NORM_EPS: f64 = 1e-12;

/// Qubit state `ρ = (I + a·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochState {
    ax: f64,
    ay: f64,
    az: f64,
}

impl BlochState {
    pub fn new(ax: f64, ay: f64, az: f64) -> Result<Self> {
        let norm_sqr = ax * ax + ay * ay + az * az;
        if !norm_sqr.is_finite() || norm_sqr > 1.0 + NORM_EPS {
            return Err(Error::OutsideBlochBall(norm_sqr.sqrt()));
        }
        Ok(Self { ax, ay, az })
    }

    /// The completely mixed state `I/2`.
    pub const fn mixed() -> Self {
        Self {
            ax: 0.0,
            ay: 0.0,
            az: 0.0,
        }
    }

    /// State on the +x axis with the given linear entropy.
    pub fn equatorial_with_entropy(entropy: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&entropy) {
            return Err(Error::invalid("p0", format!("{entropy} is outside [0, 1/2]")));
        }
        Ok(Self {
            ax: (1.0 - 2.0 * entropy).sqrt(),
            ay: 0.0,
            az: 0.0,
        })
    }

    /// Builds a state from components that may have left the ball through
    /// round-off, pulling the vector radially back onto the unit sphere.
    /// The flag reports whether a clamp happened.
    pub fn clamped(ax: f64, ay: f64, az: f64) -> (Self, bool) {
        let norm_sqr = ax * ax + ay * ay + az * az;
        if norm_sqr > 1.0 {
            let scale = norm_sqr.sqrt().recip();
            (
                Self {
                    ax: ax * scale,
                    ay: ay * scale,
                    az: az * scale,
                },
                true,
            )
        } else {
            (Self { ax, ay, az }, false)
        }
    }

    pub(crate) const fn from_parts(ax: f64, ay: f64, az: f64) -> Self {
        Self { ax, ay, az }
    }

    pub fn ax(&self) -> f64 {
        self.ax
    }

    pub fn ay(&self) -> f64 {
        self.ay
    }

    pub fn az(&self) -> f64 {
        self.az
    }

    pub fn components(&self) -> [f64; 3] {
        [self.ax, self.ay, self.az]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.ax * self.ax + self.ay * self.ay + self.az * self.az
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Length of the projection onto the xy-plane.
    pub fn transverse_norm(&self) -> f64 {
        self.ax.hypot(self.ay)
    }

    /// `⟨σz⟩`.
    pub fn expectation_z(&self) -> f64 {
        self.az
    }

    /// Linear entropy `1 − Tr ρ²`.
    pub fn linear_entropy(&self) -> f64 {
        linear_entropy(self)
    }

    /// Density matrix in the `{|+⟩, |−⟩}` (σz eigen-) basis.
    pub fn density_matrix(&self) -> [[Complex64; 2]; 2] {
        let half = 0.5;
        [
            [
                Complex64::new(half * (1.0 + self.az), 0.0),
                Complex64::new(half * self.ax, -half * self.ay),
            ],
            [
                Complex64::new(half * self.ax, half * self.ay),
                Complex64::new(half * (1.0 - self.az), 0.0),
            ],
        ]
    }

    /// Inverse of [`BlochState::density_matrix`]; ignores any anti-hermitian part.
    pub fn from_density_matrix(rho: &[[Complex64; 2]; 2]) -> Result<Self> {
        let trace = (rho[0][0] + rho[1][1]).re;
        let ax = (rho[0][1] + rho[1][0]).re / trace;
        let ay = (rho[1][0] - rho[0][1]).im / trace;
        let az = (rho[0][0] - rho[1][1]).re / trace;
        Self::new(ax, ay, az)
    }
}

/// Feedback unitary `exp[−i(α/2) n·σ]`, stored as the axis `n` and angle `α`.
/// On Bloch vectors it acts as a right-handed rotation by `α` about `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    axis: [f64; 3],
    angle: f64,
}

impl Rotation {
    pub fn new(axis: [f64; 3], angle: f64) -> Result<Self> {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !angle.is_finite() || !norm.is_finite() || (norm - 1.0).abs() > NORM_EPS {
            return Err(Error::NonUnitAxis(norm));
        }
        Ok(Self { axis, angle })
    }

    pub fn identity() -> Self {
        Self {
            axis: [0.0, 0.0, 1.0],
            angle: 0.0,
        }
    }

    /// Rotation about the in-plane axis `(−sin φ, cos φ, 0)`. A positive angle
    /// tips the +z pole toward the direction `(cos φ, sin φ, 0)`.
    pub fn about_meridian_normal(azimuth: f64, angle: f64) -> Self {
        let (s, c) = azimuth.sin_cos();
        Self {
            axis: [-s, c, 0.0],
            angle,
        }
    }

    pub fn axis(&self) -> [f64; 3] {
        self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn inverse(&self) -> Self {
        Self {
            axis: self.axis,
            angle: -self.angle,
        }
    }

    /// The SU(2) matrix `exp[−i(α/2) n·σ] = cos(α/2) I − i sin(α/2) n·σ`.
    pub fn unitary(&self) -> [[Complex64; 2]; 2] {
        let (s, c) = (0.5 * self.angle).sin_cos();
        let [nx, ny, nz] = self.axis;
        [
            [Complex64::new(c, -s * nz), Complex64::new(-s * ny, -s * nx)],
            [Complex64::new(s * ny, -s * nx), Complex64::new(c, s * nz)],
        ]
    }
}

/// `P(ρ) = 1 − Tr ρ² = (1 − |a|²)/2`.
pub fn linear_entropy(state: &BlochState) -> f64 {
    (0.5 * (1.0 - state.norm_sqr())).clamp(0.0, 0.5)
}

/// Rodrigues rotation of the Bloch vector, equal to `U ρ U†`.
pub fn rotate(state: &BlochState, rotation: &Rotation) -> BlochState {
    if rotation.angle == 0.0 {
        return *state;
    }
    let [nx, ny, nz] = rotation.axis;
    let v = state.components();
    let (s, c) = rotation.angle.sin_cos();
    let dot = nx * v[0] + ny * v[1] + nz * v[2];
    let cross = [
        ny * v[2] - nz * v[1],
        nz * v[0] - nx * v[2],
        nx * v[1] - ny * v[0],
    ];
    let k = dot * (1.0 - c);
    BlochState::from_parts(
        v[0] * c + cross[0] * s + nx * k,
        v[1] * c + cross[1] * s + ny * k,
        v[2] * c + cross[2] * s + nz * k,
    )
}

/// `φ = atan2(ay, ax)` in `[0, 2π)`.
pub fn azimuth(state: &BlochState) -> Result<f64> {
    if state.ax == 0.0 && state.ay == 0.0 {
        return Err(Error::DegenerateAzimuth);
    }
    let phi = state.ay.atan2(state.ax);
    Ok(if phi < 0.0 { (phi + TAU) % TAU } else { phi })
}

/// Angle between `a` and the z-axis. The completely mixed state gets `π/2`.
pub fn polar_angle(state: &BlochState) -> f64 {
    let norm = state.norm();
    if norm == 0.0 {
        return FRAC_PI_2;
    }
    (state.az / norm).clamp(-1.0, 1.0).acos().clamp(0.0, PI)
}
