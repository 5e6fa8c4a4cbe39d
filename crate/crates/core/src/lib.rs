//! Finite-dimensional quantum kinematics.
//!
//! Builds the clock/shift pair `{U, V}` on N states, the scaled Hermitian pair
//! `{P, Q}` and the angle/angular-momentum pair `{Θ, M}`, and measures how the
//! finite-N objects approach their continuum counterparts as N grows.
//!
//! Only odd N is supported by the kinematics modules.

pub mod angular;
pub mod error;
pub mod hilbert;
pub mod kinematics;
pub mod limits;
pub mod schwinger;

pub use error::{Error, Result};
pub use hilbert::{Complex, LinearOperator, StateVector};
