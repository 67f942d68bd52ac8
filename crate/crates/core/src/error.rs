use thiserror::Error;

/// Errors raised by the simulation and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rotation axis is not a unit vector (|n| = {0})")]
    NonUnitAxis(f64),

    #[error("azimuth is undefined for a Bloch vector on the z-axis")]
    DegenerateAzimuth,

    #[error("Bloch vector lies outside the unit ball (|a| = {0})")]
    OutsideBlochBall(f64),

    #[error("measurement step too large: 2*gamma*dt = {0} exceeds 1/4")]
    StepTooLarge(f64),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("feedback angle diverges for a completely mixed state at t = 0")]
    FeedbackDivergence,

    #[error("target entropy {0} is not reachable from the completely mixed state")]
    TargetUnreachable(f64),

    #[error("quadrature failed to converge: estimated error {error:e} exceeds {requested:e}")]
    QuadratureNonConvergence { error: f64, requested: f64 },

    #[error("root bracketing failed: {0}")]
    BracketFailure(String),

    #[error("enumeration needs {required} nodes, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of a numerical procedure rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNonConvergence { .. } | Error::BracketFailure(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
