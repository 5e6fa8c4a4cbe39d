//! The clock/shift pair `{U, V}`.
//!
//! `U |u_k> = exp(2πi k/N) |u_k>` is diagonal in the computational basis and
//! `V |u_n> = |u_{n-1}>` (cyclic) is a pure permutation. Powers are built
//! directly from the exponent reduced mod N, so `U^N` and `V^N` come out as
//! the identity representation itself.

use crate::error::Result;
use crate::hilbert::{
    check_dim, check_odd_dim, root_of_unity_product, Complex, LinearOperator, StateVector,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    U,
    V,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchwingerPair {
    dim: usize,
    u: LinearOperator,
    v: LinearOperator,
}

impl SchwingerPair {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn u(&self) -> &LinearOperator {
        &self.u
    }

    pub fn v(&self) -> &LinearOperator {
        &self.v
    }

    pub fn power(&self, which: Generator, s: i64) -> LinearOperator {
        match which {
            Generator::U => clock_power(self.dim, s),
            Generator::V => shift_power(self.dim, s),
        }
    }
}

pub fn build_pair(n: usize) -> Result<SchwingerPair> {
    check_odd_dim(n)?;
    Ok(SchwingerPair {
        dim: n,
        u: clock_power(n, 1),
        v: shift_power(n, 1),
    })
}

pub fn pair_power(pair: &SchwingerPair, which: Generator, s: i64) -> LinearOperator {
    pair.power(which, s)
}

/// `U^s` for any integer `s`.
pub(crate) fn clock_power(n: usize, s: i64) -> LinearOperator {
    LinearOperator::u_diagonal(
        (0..n as i64)
            .map(|k| root_of_unity_product(k, s, n))
            .collect(),
    )
}

/// `V^s` for any integer `s`: `|u_n> -> |u_{n-s}>`.
pub(crate) fn shift_power(n: usize, s: i64) -> LinearOperator {
    LinearOperator::phased_shift(s, vec![Complex::new(1.0, 0.0); n])
}

/// `exp(2πi jl/N)`.
pub fn weyl_phase(j: i64, l: i64, n: usize) -> Result<Complex> {
    check_dim(n)?;
    Ok(root_of_unity_product(j, l, n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylReport {
    pub max_residual: f64,
    /// The `(j, l)` attaining the maximum, if any pair was checked.
    pub worst: Option<(i64, i64)>,
    pub pairs_checked: usize,
}

/// Checks `V^l U^j = exp(2πi jl/N) U^j V^l` on every basis vector.
///
/// With the shift acting as `|u_n> -> |u_{n-1}>`, this is the ordering in
/// which the phase is `+2πi jl/N`.
pub fn verify_weyl(pair: &SchwingerPair, sample: &[(i64, i64)]) -> WeylReport {
    let n = pair.dim();
    let mut report = WeylReport {
        max_residual: 0.0,
        worst: None,
        pairs_checked: 0,
    };
    for &(j, l) in sample {
        let uj = pair.power(Generator::U, j);
        let vl = pair.power(Generator::V, l);
        let phase = root_of_unity_product(j, l, n);
        let mut residual: f64 = 0.0;
        for s in 0..n {
            let e = StateVector::basis(n, s).expect("valid dimension");
            let uv = uj.apply(&vl.apply(&e).unwrap()).unwrap();
            let vu = vl.apply(&uj.apply(&e).unwrap()).unwrap();
            for (a, b) in vu.amps().iter().zip(uv.amps()) {
                residual = residual.max((a - phase * b).norm());
            }
        }
        if report.worst.is_none() || residual > report.max_residual {
            report.max_residual = residual;
            report.worst = Some((j, l));
        }
        report.pairs_checked += 1;
    }
    report
}

/// All `(j, l)` with `0 <= j, l < N`.
pub fn full_grid(n: usize) -> Vec<(i64, i64)> {
    let n = n as i64;
    (0..n).flat_map(|j| (0..n).map(move |l| (j, l))).collect()
}

/// `|v_k>` in the computational basis.
pub fn v_eigenvector(n: usize, k: i64) -> Result<StateVector> {
    check_dim(n)?;
    let norm = 1.0 / (n as f64).sqrt();
    StateVector::new(
        (0..n as i64)
            .map(|m| root_of_unity_product(k, m, n) * norm)
            .collect(),
    )
}

/// `max_{k,n} | |<v_k|u_n>|^2 - 1/N |`.
pub fn mutual_unbiasedness_residual(n: usize) -> Result<f64> {
    check_dim(n)?;
    let target = 1.0 / n as f64;
    let mut worst: f64 = 0.0;
    for k in 0..n as i64 {
        for m in 0..n as i64 {
            let z = crate::hilbert::dft_overlap(k, m, n)?;
            worst = worst.max((z.norm_sqr() - target).abs());
        }
    }
    Ok(worst)
}
