//! The scaled Hermitian pair `{P, Q}`.
//!
//! With `ε = sqrt(2π/N)`, `Q` is diagonal in the `|u>` basis with eigenvalues
//! `j·ε^(2-δ)·q0` and `P` is diagonal in the `|v>` basis with eigenvalues
//! `j·ε^δ·p0`, for symmetric labels `j`. The exponent `δ` only redistributes
//! the cell `Δp·Δq = 2π·p0·q0/N` between the two grids.
//!
//! Shifts by whole grid steps are the Schwinger powers: a `q`-shift is
//! `V^s`, a `p`-shift is `U^s`.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::hilbert::{
    check_dim, check_odd_dim, label, labels, Complex, LinearOperator, Repr, StateVector,
};
use crate::schwinger::{clock_power, shift_power};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicsConfig {
    n: usize,
    delta: f64,
    p0: f64,
    q0: f64,
}

impl KinematicsConfig {
    /// Accepts `δ` in `[0, 2)`; the Cartesian constructors further require `δ > 0`.
    pub fn new(n: usize, delta: f64, p0: f64, q0: f64) -> Result<Self> {
        check_odd_dim(n)?;
        if !(0.0..2.0).contains(&delta) {
            return Err(Error::DeltaOutOfRange(delta, "[0, 2)"));
        }
        check_unit("p0", p0)?;
        check_unit("q0", q0)?;
        Ok(Self { n, delta, p0, q0 })
    }

    /// `p0 = q0 = 1`.
    pub fn natural(n: usize, delta: f64) -> Result<Self> {
        Self::new(n, delta, 1.0, 1.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn q0(&self) -> f64 {
        self.q0
    }

    /// `p0·q0`, the effective Planck constant.
    pub fn hbar_eff(&self) -> f64 {
        self.p0 * self.q0
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(self.n, delta, self.p0, self.q0)
    }

    /// `(Δp, Δq)`.
    pub fn spacings(&self) -> (f64, f64) {
        grid_spacings(self.n, self.delta, self.p0, self.q0)
    }
}

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::InvalidUnit { name, value });
    }
    Ok(())
}

fn check_open_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 2.0) {
        return Err(Error::DeltaOutOfRange(delta, "(0, 2)"));
    }
    Ok(())
}

/// `sqrt(2π/N)`.
pub fn epsilon(n: usize) -> Result<f64> {
    check_dim(n)?;
    Ok((TAU / n as f64).sqrt())
}

/// `Δp = ε^δ·p0` and `Δq = (2π·p0·q0/N) / Δp`.
///
/// `Δq` is formed from the cell rather than from `ε^(2-δ)` so that the
/// product of the two spacings stays within one ulp of `2π·p0·q0/N`.
pub(crate) fn grid_spacings(n: usize, delta: f64, p0: f64, q0: f64) -> (f64, f64) {
    let nf = n as f64;
    let dp = p0 * (TAU / nf).sqrt().powf(delta);
    let cell = TAU * p0 * q0 / nf;
    (dp, cell / dp)
}

/// An eigenvalue together with its symmetric label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridLabel {
    pub index: i64,
    pub value: f64,
}

pub(crate) fn grid(n: usize, spacing: f64) -> Vec<GridLabel> {
    labels(n)
        .map(|index| GridLabel {
            index,
            value: index as f64 * spacing,
        })
        .collect()
}

/// Per-slot eigenvalues `label(slot)·spacing`.
pub(crate) fn slot_values(n: usize, spacing: f64) -> Vec<Complex> {
    (0..n)
        .map(|s| Complex::new(label(s, n) as f64 * spacing, 0.0))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalPair {
    config: KinematicsConfig,
    dp: f64,
    dq: f64,
    p: LinearOperator,
    q: LinearOperator,
    p_grid: Vec<GridLabel>,
    q_grid: Vec<GridLabel>,
}

impl CanonicalPair {
    pub fn config(&self) -> &KinematicsConfig {
        &self.config
    }

    pub fn n(&self) -> usize {
        self.config.n
    }

    pub fn dp(&self) -> f64 {
        self.dp
    }

    pub fn dq(&self) -> f64 {
        self.dq
    }

    /// Diagonal in the `|v>` basis.
    pub fn p(&self) -> &LinearOperator {
        &self.p
    }

    /// Diagonal in the `|u>` basis.
    pub fn q(&self) -> &LinearOperator {
        &self.q
    }

    pub fn p_grid(&self) -> &[GridLabel] {
        &self.p_grid
    }

    pub fn q_grid(&self) -> &[GridLabel] {
        &self.q_grid
    }
}

/// Builds the pair for any `δ` in `[0, 2)`, including the angular endpoint.
pub fn build_scaled_pair(config: &KinematicsConfig) -> CanonicalPair {
    let n = config.n;
    let (dp, dq) = config.spacings();
    CanonicalPair {
        config: *config,
        dp,
        dq,
        p: LinearOperator::v_diagonal(slot_values(n, dp)),
        q: LinearOperator::u_diagonal(slot_values(n, dq)),
        p_grid: grid(n, dp),
        q_grid: grid(n, dq),
    }
}

/// The Cartesian pair; `δ` must lie in the open interval `(0, 2)`.
pub fn build_canonical_pair(config: &KinematicsConfig) -> Result<CanonicalPair> {
    check_open_delta(config.delta)?;
    Ok(build_scaled_pair(config))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    P,
    Q,
}

/// `exp(i q'P/(p0q0))` with `q' = steps·Δq`, i.e. `V^steps`: `|q> -> |q - q'>`.
pub fn q_shift_operator(pair: &CanonicalPair, steps: i64) -> LinearOperator {
    shift_power(pair.n(), steps)
}

/// `exp(i p'Q/(p0q0))` with `p' = steps·Δp`, i.e. `U^steps`: `|p> -> |p + p'>`.
pub fn p_shift_operator(pair: &CanonicalPair, steps: i64) -> LinearOperator {
    clock_power(pair.n(), steps)
}

pub fn shift_in_q(pair: &CanonicalPair, psi: &StateVector, q_steps: i64) -> Result<StateVector> {
    q_shift_operator(pair, q_steps).apply(psi)
}

pub fn shift_in_p(pair: &CanonicalPair, psi: &StateVector, p_steps: i64) -> Result<StateVector> {
    p_shift_operator(pair, p_steps).apply(psi)
}

/// Whole number of grid steps in `displacement`; anything off the grid is rejected.
pub fn steps_for_displacement(displacement: f64, spacing: f64) -> Result<i64> {
    if !displacement.is_finite() {
        return Err(Error::NonFinite("displacement"));
    }
    let ratio = displacement / spacing;
    let steps = ratio.round();
    if (ratio - steps).abs() > 1e-9 * steps.abs().max(1.0) || steps.abs() > i64::MAX as f64 {
        return Err(Error::OffGrid {
            displacement,
            spacing,
        });
    }
    Ok(steps as i64)
}

/// Shift by a physical displacement `q'`, which must be a multiple of `Δq`.
pub fn shift_in_q_by(pair: &CanonicalPair, psi: &StateVector, q_prime: f64) -> Result<StateVector> {
    let steps = steps_for_displacement(q_prime, pair.dq)?;
    shift_in_q(pair, psi, steps)
}

/// Shift by a physical displacement `p'`, which must be a multiple of `Δp`.
pub fn shift_in_p_by(pair: &CanonicalPair, psi: &StateVector, p_prime: f64) -> Result<StateVector> {
    let steps = steps_for_displacement(p_prime, pair.dp)?;
    shift_in_p(pair, psi, steps)
}

/// Product of the individual shifts, built as a single shift by the summed steps.
pub fn compose_shifts(pair: &CanonicalPair, steps: &[i64], direction: Direction) -> LinearOperator {
    let n = pair.n() as i64;
    let total = steps
        .iter()
        .fold(0i64, |acc, s| (acc + s.rem_euclid(n)) % n);
    match direction {
        Direction::P => p_shift_operator(pair, total),
        Direction::Q => q_shift_operator(pair, total),
    }
}

/// `<psi|[Q, P]|psi>`, formed as `<psi|QP psi> - <psi|PQ psi>` with `P`
/// applied through the DFT.
pub fn commutator_expectation(pair: &CanonicalPair, psi: &StateVector) -> Result<Complex> {
    let qp = pair.q.apply(&pair.p.apply(psi)?)?;
    let pq = pair.p.apply(&pair.q.apply(psi)?)?;
    Ok(psi.inner(&qp)? - psi.inner(&pq)?)
}

fn u_basis_diagonal(op: &LinearOperator) -> Vec<Complex> {
    let n = op.dim();
    match op.repr() {
        Repr::UDiagonal(d) => d.clone(),
        // every diagonal entry of a v-diagonal operator is the mean eigenvalue
        Repr::VDiagonal(d) => vec![d.iter().sum::<Complex>() / n as f64; n],
        _ => op.to_dense().diagonal().iter().copied().collect(),
    }
}

/// `Tr [Q, P]`, which vanishes identically at finite N.
pub fn commutator_trace(pair: &CanonicalPair) -> Complex {
    let q = u_basis_diagonal(&pair.q);
    let p = u_basis_diagonal(&pair.p);
    let qp: Complex = q.iter().zip(&p).map(|(a, b)| a * b).sum();
    let pq: Complex = p.iter().zip(&q).map(|(a, b)| a * b).sum();
    qp - pq
}

/// The same pair at a different `δ`: `Q` scales by `ε^(δ-δ')` and `P` by `ε^(δ'-δ)`.
pub fn rescale_delta(pair: &CanonicalPair, delta_new: f64) -> Result<CanonicalPair> {
    check_open_delta(delta_new)?;
    if delta_new == pair.config.delta {
        return Ok(pair.clone());
    }
    build_canonical_pair(&pair.config.with_delta(delta_new)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{dft_overlap, max_abs_diff, slot, DENSE_LIMIT};
    use crate::schwinger::v_eigenvector;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn natural(n: usize, delta: f64) -> CanonicalPair {
        build_canonical_pair(&KinematicsConfig::natural(n, delta).unwrap()).unwrap()
    }

    fn ulps(a: f64, b: f64) -> f64 {
        let m = a.abs().max(b.abs());
        let ulp = f64::from_bits(m.to_bits() + 1) - m;
        (a - b).abs() / ulp
    }

    fn gaussian(pair: &CanonicalPair, sigma: f64) -> StateVector {
        let amps: Vec<f64> = (0..pair.n())
            .map(|s| {
                let q = label(s, pair.n()) as f64 * pair.dq();
                (-q * q / (4.0 * sigma * sigma)).exp()
            })
            .collect();
        StateVector::from_real(&amps).unwrap().normalized().unwrap()
    }

    fn dense_expm(op: &LinearOperator, coeff: Complex) -> DMatrix<Complex> {
        (op.to_dense() * coeff).exp()
    }

    #[test]
    fn epsilon_values() {
        assert!((epsilon(1).unwrap() - 2.506_628_274_631_000_5).abs() < 1e-15);
        assert!((epsilon(9).unwrap() - 0.835_542_758_210_333_5).abs() < 1e-15);
        assert!(epsilon(0).is_err());
        // divide, sqrt, square and multiply each round once: 2 ulp is the floor
        for n in 1..=1025usize {
            let e = epsilon(n).unwrap();
            assert!(ulps(e * e * n as f64, TAU) <= 2.0, "N={n}");
        }
    }

    #[test]
    fn config_validation() {
        assert_eq!(
            KinematicsConfig::natural(4, 1.0),
            Err(Error::UnsupportedDimension(4))
        );
        assert!(matches!(
            KinematicsConfig::natural(5, 2.0),
            Err(Error::DeltaOutOfRange(..))
        ));
        assert!(KinematicsConfig::natural(5, -0.1).is_err());
        assert!(KinematicsConfig::new(5, 1.0, 0.0, 1.0).is_err());
        assert!(KinematicsConfig::new(5, 1.0, 1.0, f64::NAN).is_err());
        let c = KinematicsConfig::new(5, 0.5, 2.0, 3.0).unwrap();
        assert_eq!(c.hbar_eff(), 6.0);
        // δ = 0 is a valid config, but not a Cartesian pair
        let c0 = KinematicsConfig::natural(5, 0.0).unwrap();
        assert!(build_canonical_pair(&c0).is_err());
    }

    #[test]
    fn q_grid_at_unit_delta() {
        let pair = natural(5, 1.0);
        let expect = [-2.241_996_486_559_171_5, -1.120_998_243_279_585_7, 0.0, 1.120_998_243_279_585_7, 2.241_996_486_559_171_5];
        for (g, e) in pair.q_grid().iter().zip(expect) {
            assert!((g.value - e).abs() < 1e-14);
        }
        assert_eq!(pair.q_grid()[0].index, -2);
    }

    #[test]
    fn spacing_product_is_the_cell() {
        for delta in [0.1, 0.5, 1.0, 1.3, 1.99] {
            let pair = natural(5, delta);
            assert!((pair.dp() * pair.dq() - 1.256_637_061_435_917_3).abs() < 1e-15);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..500 {
            let n = 2 * rng.gen_range(0..1000usize) + 1;
            let cfg = KinematicsConfig::new(
                n,
                rng.gen_range(0.0..2.0),
                rng.gen_range(0.01..100.0),
                rng.gen_range(0.01..100.0),
            )
            .unwrap();
            let (dp, dq) = cfg.spacings();
            let cell = TAU * cfg.p0() * cfg.q0() / n as f64;
            assert!(ulps(dp * dq, cell) <= 1.0);
        }
    }

    #[test]
    fn symmetric_spectra_are_traceless() {
        let pair = natural(3, 1.0);
        assert_eq!(pair.p().trace(), Complex::new(0.0, 0.0));
        assert_eq!(pair.q().trace(), Complex::new(0.0, 0.0));
    }

    #[test]
    fn dense_forms_are_hermitian() {
        for n in [1usize, 3, 33, 257, DENSE_LIMIT] {
            let pair = natural(n, 0.7);
            let p = LinearOperator::dense(pair.p().to_dense());
            let q = LinearOperator::dense(pair.q().to_dense());
            assert!(p.hermiticity_residual() <= 1e-12, "N={n}");
            assert!(q.hermiticity_residual() <= 1e-12, "N={n}");
        }
    }

    #[test]
    fn p_eigenvectors_are_shift_eigenvectors() {
        let n = 9;
        let pair = natural(n, 1.3);
        for g in pair.p_grid() {
            let v = v_eigenvector(n, g.index).unwrap();
            let pv = pair.p().apply(&v).unwrap();
            let expect = StateVector::new(v.amps().iter().map(|a| a * g.value).collect()).unwrap();
            assert!(pv.max_abs_diff(&expect) <= 1e-12);
            for h in pair.q_grid() {
                let z = dft_overlap(g.index, h.index, n).unwrap();
                assert!((z.norm() - 1.0 / (n as f64).sqrt()).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn q_shift_examples() {
        let pair = natural(3, 1.0);
        let psi = StateVector::basis_label(3, 1).unwrap();
        assert_eq!(shift_in_q(&pair, &psi, 0).unwrap(), psi);
        assert_eq!(
            shift_in_q(&pair, &psi, 1).unwrap(),
            StateVector::basis_label(3, 0).unwrap()
        );
        let edge = StateVector::basis_label(3, -1).unwrap();
        assert_eq!(
            shift_in_q(&pair, &edge, 1).unwrap(),
            StateVector::basis_label(3, 1).unwrap()
        );
    }

    #[test]
    fn p_shift_examples() {
        let pair = natural(5, 1.0);
        let psi = v_eigenvector(5, 1).unwrap();
        assert_eq!(shift_in_p(&pair, &psi, 0).unwrap(), psi);
        let out = shift_in_p(&pair, &psi, 2).unwrap();
        assert!(out.max_abs_diff(&v_eigenvector(5, 3).unwrap()) <= 1e-12);
        assert_eq!(p_shift_operator(&pair, 5), LinearOperator::identity(5));
    }

    #[test]
    fn shifts_match_dense_exponentials() {
        for n in [1usize, 3, 7, 15, 33] {
            for delta in [0.3, 1.0, 1.8] {
                let pair = natural(n, delta);
                let hbar = pair.config().hbar_eff();
                for steps in [-4i64, -1, 1, 2, 5] {
                    let q_prime = steps as f64 * pair.dq();
                    let oracle = dense_expm(pair.p(), Complex::new(0.0, q_prime / hbar));
                    let got = q_shift_operator(&pair, steps).to_dense();
                    assert!(max_abs_diff(&got, &oracle) <= 1e-10, "N={n} δ={delta} q {steps}");

                    let p_prime = steps as f64 * pair.dp();
                    let oracle = dense_expm(pair.q(), Complex::new(0.0, p_prime / hbar));
                    let got = p_shift_operator(&pair, steps).to_dense();
                    assert!(max_abs_diff(&got, &oracle) <= 1e-10, "N={n} δ={delta} p {steps}");
                }
            }
        }
    }

    #[test]
    fn physical_displacements_on_and_off_grid() {
        let pair = natural(7, 0.6);
        let psi = StateVector::basis_label(7, 2).unwrap();
        let by_value = shift_in_q_by(&pair, &psi, 3.0 * pair.dq()).unwrap();
        assert_eq!(by_value, shift_in_q(&pair, &psi, 3).unwrap());
        let by_value = shift_in_p_by(&pair, &psi, -2.0 * pair.dp()).unwrap();
        assert_eq!(by_value, shift_in_p(&pair, &psi, -2).unwrap());

        assert!(matches!(
            shift_in_q_by(&pair, &psi, 0.5 * pair.dq()),
            Err(Error::OffGrid { .. })
        ));
        assert!(matches!(
            shift_in_p_by(&pair, &psi, 1.25 * pair.dp()),
            Err(Error::OffGrid { .. })
        ));
        assert!(shift_in_q_by(&pair, &psi, f64::INFINITY).is_err());
    }

    #[test]
    fn composition_examples() {
        let p3 = natural(3, 1.0);
        for dir in [Direction::P, Direction::Q] {
            assert_eq!(compose_shifts(&p3, &[], dir), LinearOperator::identity(3));
            assert_eq!(compose_shifts(&p3, &[1, 1, 1], dir), LinearOperator::identity(3));
        }

        let p7 = natural(7, 1.0);
        for dir in [Direction::P, Direction::Q] {
            let composed = compose_shifts(&p7, &[2, -5, 4], dir);
            let single = compose_shifts(&p7, &[1], dir);
            assert_eq!(composed, single);
            let product = [2i64, -5, 4]
                .iter()
                .map(|&s| compose_shifts(&p7, &[s], dir).to_dense())
                .fold(DMatrix::identity(7, 7), |acc, m| m * acc);
            assert!(max_abs_diff(&product, &single.to_dense()) <= 1e-12);
        }
    }

    #[test]
    fn commutator_on_smooth_state_is_near_i() {
        let pair = natural(101, 1.0);
        let psi = gaussian(&pair, 1.0);
        let value = commutator_expectation(&pair, &psi).unwrap();
        assert!((value - Complex::new(0.0, 1.0)).norm() <= 1e-6, "{value}");
    }

    #[test]
    fn commutator_on_boundary_state_is_far_from_i() {
        let n = 101;
        let pair = natural(n, 1.0);
        let psi = StateVector::basis_label(n, (n as i64 - 1) / 2).unwrap();
        let value = commutator_expectation(&pair, &psi).unwrap();
        assert!((value - Complex::new(0.0, 1.0)).norm() > 0.1);
    }

    #[test]
    fn commutator_matches_dense_oracle() {
        let n = 33;
        let pair = natural(n, 0.8);
        let p = pair.p().to_dense();
        let q = pair.q().to_dense();
        let c = &q * &p - &p * &q;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let psi = StateVector::new(
            (0..n)
                .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        )
        .unwrap()
        .normalized()
        .unwrap();
        let x = nalgebra::DVector::from_column_slice(psi.amps());
        let oracle = (x.adjoint() * &c * &x)[(0, 0)];
        let got = commutator_expectation(&pair, &psi).unwrap();
        assert!((got - oracle).norm() <= 1e-12);
        assert!(got.re.abs() <= 1e-13);
    }

    #[test]
    fn commutator_is_traceless() {
        for n in [1usize, 3, 51, 401] {
            for delta in [0.25, 1.0, 1.75] {
                let pair = natural(n, delta);
                assert_eq!(commutator_trace(&pair), Complex::new(0.0, 0.0));
            }
        }
        // hence the maximally mixed average is 0, not i·p0q0
        let pair = natural(9, 1.0);
        let dense = {
            let p = pair.p().to_dense();
            let q = pair.q().to_dense();
            &q * &p - &p * &q
        };
        assert!(dense.trace().norm() <= 1e-13);
    }

    #[test]
    fn rescaling_examples() {
        let pair = natural(9, 1.0);
        assert_eq!(rescale_delta(&pair, 1.0).unwrap(), pair);
        assert!(rescale_delta(&pair, 0.0).is_err());
        assert!(rescale_delta(&pair, 2.0).is_err());

        let eps = epsilon(9).unwrap();
        let half = rescale_delta(&pair, 0.5).unwrap();
        for (new, old) in half.q_grid().iter().zip(pair.q_grid()) {
            assert!((new.value - eps.powf(0.5) * old.value).abs() <= 1e-14 * old.value.abs().max(1.0));
        }
        for (new, old) in half.p_grid().iter().zip(pair.p_grid()) {
            assert!((new.value - eps.powf(-0.5) * old.value).abs() <= 1e-14 * old.value.abs().max(1.0));
        }
        assert!(ulps(half.dp() * half.dq(), pair.dp() * pair.dq()) <= 2.0);

        let back = rescale_delta(&rescale_delta(&pair, 1.5).unwrap(), 1.0).unwrap();
        for (a, b) in back.q_grid().iter().zip(pair.q_grid()) {
            assert!(ulps(a.value, b.value) <= 1.0);
        }
        for (a, b) in back.p_grid().iter().zip(pair.p_grid()) {
            assert!(ulps(a.value, b.value) <= 1.0);
        }
    }

    #[test]
    fn grids_are_stored_at_label_slots() {
        let pair = natural(5, 1.0);
        match pair.q().repr() {
            Repr::UDiagonal(d) => {
                for g in pair.q_grid() {
                    assert_eq!(d[slot(g.index, 5)].re, g.value);
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
