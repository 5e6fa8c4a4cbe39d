//! Angle and angular momentum: the `δ = 0` end of the scaled pair.
//!
//! `M` keeps the unscaled spectrum `j·m0` while `Θ` has eigenvalues
//! `j'·(2π/N)·θ0`, confined to `[-π·θ0, π·θ0)` for every N. The reference
//! angle is zero.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::hilbert::{
    check_label, check_odd_dim, label, root_of_unity, root_of_unity_product, Complex,
    LinearOperator, StateVector,
};
use crate::kinematics::{check_unit, grid, grid_spacings, slot_values, GridLabel, KinematicsConfig};
use crate::schwinger::shift_power;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularConfig {
    n: usize,
    m0: f64,
    theta0: f64,
}

impl AngularConfig {
    pub fn new(n: usize, m0: f64, theta0: f64) -> Result<Self> {
        check_odd_dim(n)?;
        check_unit("m0", m0)?;
        check_unit("theta0", theta0)?;
        Ok(Self { n, m0, theta0 })
    }

    pub fn natural(n: usize) -> Result<Self> {
        Self::new(n, 1.0, 1.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m0(&self) -> f64 {
        self.m0
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn hbar_eff(&self) -> f64 {
        self.m0 * self.theta0
    }

    /// The same geometry as a scaled pair at `δ = 0` with `(p0, q0) = (m0, θ0)`.
    pub fn as_kinematics(&self) -> KinematicsConfig {
        KinematicsConfig::new(self.n, 0.0, self.m0, self.theta0)
            .expect("angular config is a valid δ = 0 config")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngularPair {
    config: AngularConfig,
    dtheta: f64,
    m: LinearOperator,
    theta: LinearOperator,
    m_grid: Vec<GridLabel>,
    theta_grid: Vec<GridLabel>,
}

impl AngularPair {
    pub fn config(&self) -> &AngularConfig {
        &self.config
    }

    pub fn n(&self) -> usize {
        self.config.n
    }

    /// `2π·θ0/N`.
    pub fn dtheta(&self) -> f64 {
        self.dtheta
    }

    /// Diagonal in the `|v>` basis.
    pub fn m(&self) -> &LinearOperator {
        &self.m
    }

    /// Diagonal in the `|u>` basis.
    pub fn theta(&self) -> &LinearOperator {
        &self.theta
    }

    pub fn m_grid(&self) -> &[GridLabel] {
        &self.m_grid
    }

    pub fn theta_grid(&self) -> &[GridLabel] {
        &self.theta_grid
    }
}

pub fn build_angular_pair(config: &AngularConfig) -> Result<AngularPair> {
    let n = config.n;
    check_odd_dim(n)?;
    let (_, dtheta) = grid_spacings(n, 0.0, config.m0, config.theta0);
    let m_values = (0..n)
        .map(|s| Complex::new(label(s, n) as f64 * config.m0, 0.0))
        .collect();
    Ok(AngularPair {
        config: *config,
        dtheta,
        m: LinearOperator::v_diagonal(m_values),
        theta: LinearOperator::u_diagonal(slot_values(n, dtheta)),
        m_grid: grid(n, config.m0),
        theta_grid: grid(n, dtheta),
    })
}

/// Representative of `theta` in `[-π·θ0, π·θ0)`.
pub fn theta_wrap(theta: f64, theta0: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::NonFinite("angle"));
    }
    check_unit("theta0", theta0)?;
    let half = PI * theta0;
    let period = TAU * theta0;
    let mut r = (theta + half).rem_euclid(period) - half;
    if r >= half {
        r -= period;
    }
    Ok(r.max(-half))
}

/// Raises angle labels by `steps`, wrapping across the `±π·θ0` boundary.
pub fn angle_shift_operator(pair: &AngularPair, steps: i64) -> LinearOperator {
    shift_power(pair.n(), -steps)
}

pub fn angle_shift(pair: &AngularPair, psi: &StateVector, steps: i64) -> Result<StateVector> {
    angle_shift_operator(pair, steps).apply(psi)
}

/// `exp(iΘ/θ0)`, diagonal with entries `exp(2πi j'/N)`.
pub fn exp_theta_operator(pair: &AngularPair) -> LinearOperator {
    let n = pair.n();
    LinearOperator::u_diagonal((0..n).map(|s| root_of_unity(label(s, n), n)).collect())
}

/// `<θ_{j_theta}|m_{j_m}> = N^{-1/2} exp(2πi j_theta j_m/N)`.
pub fn theta_m_overlap(pair: &AngularPair, j_theta: i64, j_m: i64) -> Result<Complex> {
    let n = pair.n();
    check_label(j_theta, n)?;
    check_label(j_m, n)?;
    Ok(root_of_unity_product(j_theta, j_m, n) / (n as f64).sqrt())
}
