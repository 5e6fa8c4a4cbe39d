//! Convergence diagnostics for the large-N behaviour of the finite pairs.
//!
//! Finite-N kernels are compared with continuum kernels after dividing by
//! the square root of the dimensionless grid cell, which is how a discrete
//! projector `|p><p|` turns into `|p><p| dp` in the limit.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::angular::{build_angular_pair, theta_m_overlap, AngularConfig};
use crate::error::{Error, Result};
use crate::hilbert::{check_label, dft_overlap, half_width, label, Complex, StateVector};
use crate::kinematics::{
    build_canonical_pair, commutator_expectation, grid_spacings, KinematicsConfig,
};
use crate::schwinger::v_eigenvector;

pub const COMMUTATOR_GAP: &str = "commutator_gap";

/// Number of largest-N points used by slope fits.
pub const SLOPE_WINDOW: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestStateSpec {
    /// `ψ_j ∝ exp(-(q_j - q_c)² / (4σ²q0²))` with `q_c` the grid point `center`.
    Gaussian { center: i64, sigma: f64 },
    /// `|u_j>`.
    Basis(i64),
    /// `|v_j>`.
    PlaneWave(i64),
    Uniform,
}

impl Default for TestStateSpec {
    fn default() -> Self {
        TestStateSpec::Gaussian {
            center: 0,
            sigma: 1.0,
        }
    }
}

pub fn make_state(spec: &TestStateSpec, config: &KinematicsConfig) -> Result<StateVector> {
    let n = config.n();
    match *spec {
        TestStateSpec::Gaussian { center, sigma } => {
            if !(sigma.is_finite() && sigma > 0.0) {
                return Err(Error::InvalidSigma(sigma));
            }
            check_label(center, n)?;
            let (_, dq) = config.spacings();
            let width = 2.0 * sigma * config.q0();
            let amps: Vec<f64> = (0..n)
                .map(|s| {
                    let x = (label(s, n) - center) as f64 * dq / width;
                    (-x * x).exp()
                })
                .collect();
            StateVector::from_real(&amps)?.normalized()
        }
        TestStateSpec::Basis(j) => StateVector::basis_label(n, j),
        TestStateSpec::PlaneWave(j) => {
            check_label(j, n)?;
            v_eigenvector(n, j)
        }
        TestStateSpec::Uniform => v_eigenvector(n, 0),
    }
}

/// Largest `|ψ|²` on the two edge labels relative to the peak `|ψ|²`.
pub fn boundary_tail_ratio(psi: &StateVector) -> f64 {
    let n = psi.dim();
    let h = half_width(n);
    let peak = psi.amps().iter().map(|a| a.norm_sqr()).fold(0.0, f64::max);
    let edge = psi.at_label(h).norm_sqr().max(psi.at_label(-h).norm_sqr());
    edge / peak
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub delta: f64,
    pub metric: String,
    pub value: f64,
    pub aux: Option<f64>,
}

impl ConvergenceRow {
    fn order(&self, other: &Self) -> Ordering {
        self.metric
            .cmp(&other.metric)
            .then(self.delta.total_cmp(&other.delta))
            .then(self.n.cmp(&other.n))
            .then_with(|| match (self.aux, other.aux) {
                (Some(a), Some(b)) => a.total_cmp(&b),
                (a, b) => a.is_some().cmp(&b.is_some()),
            })
    }
}

/// Rows kept sorted by `(metric, delta, N)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceTable {
    rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rows(rows: Vec<ConvergenceRow>) -> Result<Self> {
        let mut table = Self::new();
        for row in rows {
            table.push(row)?;
        }
        Ok(table)
    }

    pub fn push(&mut self, row: ConvergenceRow) -> Result<()> {
        if !row.value.is_finite() || !row.delta.is_finite() || row.aux.is_some_and(|a| !a.is_finite()) {
            return Err(Error::NonFinite("table value"));
        }
        let at = self.rows.partition_point(|r| r.order(&row) != Ordering::Greater);
        self.rows.insert(at, row);
        Ok(())
    }

    pub fn rows(&self) -> &[ConvergenceRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `(N, value)` pairs of one metric at one `δ`, in increasing N.
    pub fn series(&self, metric: &str, delta: f64) -> Vec<(usize, f64)> {
        self.rows
            .iter()
            .filter(|r| r.metric == metric && r.delta == delta)
            .map(|r| (r.n, r.value))
            .collect()
    }

    pub fn deltas(&self, metric: &str) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for r in self.rows.iter().filter(|r| r.metric == metric) {
            if out.last() != Some(&r.delta) {
                out.push(r.delta);
            }
        }
        out
    }
}

/// `|<[Q, P]> - i·p0·q0|` for every `(N, δ)`; `aux` holds the boundary tail
/// ratio of the test state.
pub fn commutator_sweep(
    ns: &[usize],
    deltas: &[f64],
    spec: &TestStateSpec,
    p0: f64,
    q0: f64,
) -> Result<ConvergenceTable> {
    if ns.is_empty() {
        return Err(Error::EmptyList("N values"));
    }
    if deltas.is_empty() {
        return Err(Error::EmptyList("delta values"));
    }
    let grid: Vec<(usize, f64)> = ns
        .iter()
        .flat_map(|&n| deltas.iter().map(move |&d| (n, d)))
        .collect();
    let rows = grid
        .par_iter()
        .map(|&(n, delta)| {
            let config = KinematicsConfig::new(n, delta, p0, q0)?;
            let pair = build_canonical_pair(&config)?;
            let psi = make_state(spec, &config)?;
            let value = commutator_expectation(&pair, &psi)?;
            let gap = (value - Complex::new(0.0, config.hbar_eff())).norm();
            Ok(ConvergenceRow {
                n,
                delta,
                metric: COMMUTATOR_GAP.to_string(),
                value: gap,
                aux: Some(boundary_tail_ratio(&psi)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ConvergenceTable::from_rows(rows)
}

/// Pointwise `(j_theta, error)` of the measure-normalized `<θ|m>` against
/// `(2π m0 θ0)^{-1/2} exp(iθm/(m0θ0))`, both expressed in natural units.
pub fn kernel_error_profile(config: &AngularConfig, j_m: i64) -> Result<Vec<(i64, f64)>> {
    let pair = build_angular_pair(config)?;
    check_label(j_m, pair.n())?;
    let hbar = config.hbar_eff();
    let measure = (pair.dtheta() / config.theta0()).sqrt();
    let norm = 1.0 / (TAU * hbar).sqrt();
    let m = j_m as f64 * config.m0();
    pair.theta_grid()
        .iter()
        .map(|t| {
            let finite = theta_m_overlap(&pair, t.index, j_m)? / measure;
            let continuum = Complex::from_polar(norm, t.value * m / hbar) * hbar.sqrt();
            Ok((t.index, (finite - continuum).norm()))
        })
        .collect()
}

pub fn kernel_error(config: &AngularConfig, j_m: i64) -> Result<f64> {
    Ok(kernel_error_profile(config, j_m)?
        .into_iter()
        .map(|(_, e)| e)
        .fold(0.0, f64::max))
}

/// Pointwise `(j_q, error)` of the measure-normalized `<q|p>` against
/// `(2π p0 q0)^{-1/2} exp(ipq/(p0q0))`, both expressed in natural units.
pub fn cartesian_kernel_profile(config: &KinematicsConfig, j_p: i64) -> Result<Vec<(i64, f64)>> {
    let pair = build_canonical_pair(config)?;
    let n = pair.n();
    check_label(j_p, n)?;
    let hbar = config.hbar_eff();
    let measure = ((pair.dp() / config.p0()) * (pair.dq() / config.q0())).sqrt();
    let norm = 1.0 / (TAU * hbar).sqrt();
    let p = j_p as f64 * pair.dp();
    pair.q_grid()
        .iter()
        .map(|q| {
            let finite = dft_overlap(j_p, q.index, n)?.conj() / measure;
            let continuum = Complex::from_polar(norm, p * q.value / hbar) * hbar.sqrt();
            Ok((q.index, (finite - continuum).norm()))
        })
        .collect()
}

pub fn cartesian_kernel_error(config: &KinematicsConfig, j_p: i64) -> Result<f64> {
    Ok(cartesian_kernel_profile(config, j_p)?
        .into_iter()
        .map(|(_, e)| e)
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacingReport {
    pub dp: f64,
    pub dq: f64,
    /// `2π·p0·q0/N`.
    pub product: f64,
}

/// Grid spacings at `δ` in `[0, 2)`; `δ = 0` gives the angular geometry with
/// `(p0, q0)` read as `(m0, θ0)`.
pub fn spacing_report(n: usize, delta: f64, p0: f64, q0: f64) -> Result<SpacingReport> {
    KinematicsConfig::new(n, delta, p0, q0)?;
    let (dp, dq) = grid_spacings(n, delta, p0, q0);
    Ok(SpacingReport {
        dp,
        dq,
        product: TAU * p0 * q0 / n as f64,
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Log-log slopes of `(Δp, Δq)` against N over the [`SLOPE_WINDOW`] largest N.
pub fn spacing_slopes(ns: &[usize], delta: f64, p0: f64, q0: f64) -> Result<(f64, f64)> {
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 2 {
        return Err(Error::EmptyList("need at least two N values for a slope"));
    }
    let window = &ns[ns.len().saturating_sub(SLOPE_WINDOW)..];
    let mut dp = Vec::with_capacity(window.len());
    let mut dq = Vec::with_capacity(window.len());
    for &n in window {
        let r = spacing_report(n, delta, p0, q0)?;
        dp.push((n as f64, r.dp));
        dq.push((n as f64, r.dq));
    }
    Ok((loglog_slope(&dp), loglog_slope(&dq)))
}
