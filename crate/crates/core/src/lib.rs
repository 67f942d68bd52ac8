//! Continuous weak measurement of a single qubit and the Hamiltonian feedback
//! rule that purifies it fastest.
//!
//! The crate covers the discrete two-outcome measurement and its continuum
//! limit, the optimal rotation onto the Bloch equator, seeded Monte Carlo
//! ensembles, and the reference curves used to check them: the closed-form
//! feedback entropy, the no-feedback entropy by quadrature, the speed-up
//! factor, and an exhaustive small-tree optimality check.

pub mod analytics;
pub mod bloch;
pub mod discrete;
pub mod ensemble;
mod error;
pub mod feedback;
pub mod measurement;
pub mod sde;

pub use bloch::{azimuth, linear_entropy, polar_angle, rotate, BlochState, Rotation};
pub use error::{Error, Result};
pub use feedback::Strategy;
