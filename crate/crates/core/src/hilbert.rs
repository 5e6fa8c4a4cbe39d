//! States and operators on an N-state space.
//!
//! The computational basis is the clock eigenbasis, `|u_n> = e_n`. The shift
//! eigenbasis is `|v_k> = N^{-1/2} sum_n exp(+2πi kn/N) |u_n>`, so that
//! `<v_k|u_n> = N^{-1/2} exp(-2πi kn/N)`.
//!
//! Symmetric labels `j` in `[-(N-1)/2, (N-1)/2]` live in storage slot
//! `j mod N`; [`slot`] and [`label`] are the only conversions between the two.
//!
//! Every phase `exp(2πi m/N)` is evaluated from the integer `m` reduced mod N
//! before a single `sin_cos` call, so large exponents lose no precision.

use std::f64::consts::TAU;
use std::ops::RangeInclusive;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub type Complex = Complex64;

/// Largest dimension for which dense expansions are part of the test contract.
pub const DENSE_LIMIT: usize = 1025;

pub fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDimension(n));
    }
    Ok(())
}

pub fn check_odd_dim(n: usize) -> Result<()> {
    check_dim(n)?;
    if n.is_multiple_of(2) {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(())
}

/// `(N-1)/2`, the largest symmetric label.
pub fn half_width(n: usize) -> i64 {
    (n as i64 - 1) / 2
}

/// Symmetric labels `-(N-1)/2 ..= (N-1)/2`.
pub fn labels(n: usize) -> RangeInclusive<i64> {
    let h = half_width(n);
    -h..=h
}

/// Storage slot of a label (any integer, wrapped cyclically).
pub fn slot(label: i64, n: usize) -> usize {
    label.rem_euclid(n as i64) as usize
}

/// Symmetric label stored at `slot`.
pub fn label(slot: usize, n: usize) -> i64 {
    let s = (slot % n) as i64;
    if s > half_width(n) {
        s - n as i64
    } else {
        s
    }
}

pub fn check_label(index: i64, n: usize) -> Result<()> {
    let half = half_width(n);
    if index < -half || index > half {
        return Err(Error::IndexOutOfRange { index, half });
    }
    Ok(())
}

fn reduce_symmetric(m: i128, n: usize) -> i64 {
    let n = n as i128;
    let r = m.rem_euclid(n);
    (if 2 * r > n { r - n } else { r }) as i64
}

/// `exp(2πi m/N)`.
pub fn root_of_unity(m: i64, n: usize) -> Complex {
    phase_from_reduced(reduce_symmetric(m as i128, n), n)
}

/// `exp(2πi ab/N)` with the product formed and reduced in integers.
pub fn root_of_unity_product(a: i64, b: i64, n: usize) -> Complex {
    let nn = n as i128;
    let ab = (a as i128).rem_euclid(nn) * (b as i128).rem_euclid(nn);
    phase_from_reduced(reduce_symmetric(ab, n), n)
}

fn phase_from_reduced(r: i64, n: usize) -> Complex {
    if r == 0 {
        return Complex::new(1.0, 0.0);
    }
    let (s, c) = (TAU * r as f64 / n as f64).sin_cos();
    Complex::new(c, s)
}

/// `<v_k|u_n> = N^{-1/2} exp(-2πi kn/N)`.
pub fn dft_overlap(k: i64, n: i64, dim: usize) -> Result<Complex> {
    check_dim(dim)?;
    let norm = 1.0 / (dim as f64).sqrt();
    Ok(root_of_unity_product(k, n, dim).conj() * norm)
}

/// Dense unitary with entry `(k, n) = <v_k|u_n>`.
pub fn dft_matrix(dim: usize) -> Result<LinearOperator> {
    check_dim(dim)?;
    let norm = 1.0 / (dim as f64).sqrt();
    let m = DMatrix::from_fn(dim, dim, |k, n| {
        root_of_unity_product(k as i64, n as i64, dim).conj() * norm
    });
    Ok(LinearOperator::dense(m))
}

/// A ket in the `|u>` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex>) -> Result<Self> {
        check_dim(amps.len())?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("state amplitude"));
        }
        Ok(Self { amps })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    /// `e_slot`.
    pub fn basis(dim: usize, slot_index: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut amps = vec![Complex::new(0.0, 0.0); dim];
        amps[slot_index % dim] = Complex::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// `|u_j>` for a symmetric label `j`.
    pub fn basis_label(dim: usize, j: i64) -> Result<Self> {
        check_dim(dim)?;
        check_label(j, dim)?;
        Self::basis(dim, slot(j, dim))
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Complex> {
        self.amps
    }

    /// Amplitude at symmetric label `j`.
    pub fn at_label(&self, j: i64) -> Complex {
        self.amps[slot(j, self.dim())]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NonFinite("state norm"));
        }
        let inv = 1.0 / norm;
        self.amps.iter_mut().for_each(|a| *a *= inv);
        Ok(self)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Storage forms of an N×N operator.
#[derive(Debug, Clone, PartialEq)]
pub enum Repr {
    Dense(DMatrix<Complex>),
    /// Eigenvalue on `|u_n>` at slot n.
    UDiagonal(Vec<Complex>),
    /// Eigenvalue on `|v_k>` at slot k.
    VDiagonal(Vec<Complex>),
    /// `A e_n = phases[n] e_{(n - step) mod N}`, with `step` in `1..N`.
    PhasedShift { step: usize, phases: Vec<Complex> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    dim: usize,
    repr: Repr,
}

impl LinearOperator {
    pub fn identity(dim: usize) -> Self {
        Self::u_diagonal(vec![Complex::new(1.0, 0.0); dim])
    }

    pub fn dense(m: DMatrix<Complex>) -> Self {
        assert!(m.is_square(), "operator matrix must be square");
        Self {
            dim: m.nrows(),
            repr: Repr::Dense(m),
        }
    }

    pub fn u_diagonal(values: Vec<Complex>) -> Self {
        Self {
            dim: values.len(),
            repr: Repr::UDiagonal(values),
        }
    }

    pub fn v_diagonal(values: Vec<Complex>) -> Self {
        Self {
            dim: values.len(),
            repr: Repr::VDiagonal(values),
        }
    }

    /// A zero step is stored as the equivalent u-diagonal operator, so equal
    /// operators have equal representations.
    pub fn phased_shift(step: i64, phases: Vec<Complex>) -> Self {
        let dim = phases.len();
        let step = slot(step, dim);
        if step == 0 {
            return Self::u_diagonal(phases);
        }
        Self {
            dim,
            repr: Repr::PhasedShift { step, phases },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        check_same_dim(self.dim, psi.dim())?;
        let x = psi.amps();
        let amps = match &self.repr {
            Repr::Dense(m) => {
                let v = DVector::from_column_slice(x);
                (m * v).iter().copied().collect()
            }
            Repr::UDiagonal(d) => d.iter().zip(x).map(|(d, a)| d * a).collect(),
            Repr::VDiagonal(d) => apply_v_diagonal(d, x),
            Repr::PhasedShift { step, phases } => {
                let n = self.dim;
                let mut out = vec![Complex::new(0.0, 0.0); n];
                for (i, (a, p)) in x.iter().zip(phases).enumerate() {
                    out[(i + n - step) % n] = p * a;
                }
                out
            }
        };
        Ok(StateVector { amps })
    }

    pub fn to_dense(&self) -> DMatrix<Complex> {
        let n = self.dim;
        match &self.repr {
            Repr::Dense(m) => m.clone(),
            Repr::UDiagonal(d) => DMatrix::from_diagonal(&DVector::from_column_slice(d)),
            Repr::VDiagonal(d) => {
                // entry (m, n) depends only on (m - n) mod N
                let inv_n = 1.0 / n as f64;
                let column: Vec<Complex> = (0..n as i64)
                    .map(|diff| {
                        d.iter()
                            .enumerate()
                            .map(|(k, dk)| dk * root_of_unity_product(k as i64, diff, n))
                            .sum::<Complex>()
                            * inv_n
                    })
                    .collect();
                DMatrix::from_fn(n, n, |r, c| column[(r + n - c) % n])
            }
            Repr::PhasedShift { step, phases } => {
                let mut m = DMatrix::zeros(n, n);
                for (c, p) in phases.iter().enumerate() {
                    m[((c + n - step) % n, c)] = *p;
                }
                m
            }
        }
    }

    /// `max |A^† A - I|`, entrywise.
    pub fn unitarity_residual(&self) -> f64 {
        match &self.repr {
            Repr::UDiagonal(d) | Repr::VDiagonal(d) | Repr::PhasedShift { phases: d, .. } => d
                .iter()
                .map(|z| (z.norm_sqr() - 1.0).abs())
                .fold(0.0, f64::max),
            Repr::Dense(m) => {
                let g = m.adjoint() * m;
                max_abs_diff(&g, &DMatrix::identity(self.dim, self.dim))
            }
        }
    }

    /// `max |A - A^†|`, entrywise.
    pub fn hermiticity_residual(&self) -> f64 {
        match &self.repr {
            Repr::UDiagonal(d) | Repr::VDiagonal(d) => {
                d.iter().map(|z| 2.0 * z.im.abs()).fold(0.0, f64::max)
            }
            _ => {
                let m = self.to_dense();
                max_abs_diff(&m, &m.adjoint())
            }
        }
    }

    /// Sum of the diagonal entries in the `|u>` basis.
    pub fn trace(&self) -> Complex {
        match &self.repr {
            Repr::Dense(m) => m.trace(),
            Repr::UDiagonal(d) | Repr::VDiagonal(d) => d.iter().sum(),
            Repr::PhasedShift { .. } => Complex::new(0.0, 0.0),
        }
    }
}

fn apply_v_diagonal(values: &[Complex], x: &[Complex]) -> Vec<Complex> {
    let n = x.len();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut buf = x.to_vec();
    forward.process(&mut buf);
    for (c, d) in buf.iter_mut().zip(values) {
        *c *= d;
    }
    inverse.process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// `<psi|A|psi>`.
pub fn expectation(op: &LinearOperator, psi: &StateVector) -> Result<Complex> {
    let a_psi = op.apply(psi)?;
    psi.inner(&a_psi)
}

pub fn max_abs_diff(a: &DMatrix<Complex>, b: &DMatrix<Complex>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
