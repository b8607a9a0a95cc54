//! Variances, the Mandelstam-Tamm time deviation, and the time-energy bound
//! `dT2 dH >= 1/2`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::lattice::{SpinorState, StateVector};
use crate::operators::{hermiticity_defect, LinearOperator};

pub const HERMITICITY_LIMIT: f64 = 1e-10;
pub const NORM_LIMIT: f64 = 1e-9;
pub const DRIFT_THRESHOLD: f64 = 1e-10;
pub const BOUND_SLACK: f64 = 1e-9;

/// One evaluation of the Mandelstam-Tamm machinery in a fixed state.
#[derive(Debug, Clone, Copy)]
pub struct UncertaintyReport {
    pub delta_a: f64,
    pub delta_h: f64,
    /// `<dA/dt> = -i <[A, H]>`.
    pub drift: f64,
    /// `delta_a / |drift|`.
    pub delta_t2: f64,
    /// `delta_t2 * delta_h`, to be compared against 1/2.
    pub bound_lhs: f64,
    pub satisfied: bool,
}

fn check_normalized(norm: f64) -> Result<()> {
    if (norm - 1.0).abs() > NORM_LIMIT {
        return Err(Error::UnnormalizedState {
            deviation: (norm - 1.0).abs(),
        });
    }
    Ok(())
}

fn check_self_adjoint(a: &LinearOperator) -> Result<()> {
    let defect = hermiticity_defect(a);
    if defect > HERMITICITY_LIMIT {
        return Err(Error::NonHermitian {
            defect,
            limit: HERMITICITY_LIMIT,
        });
    }
    Ok(())
}

fn deviation_from_flat(a: &LinearOperator, flat: &[C64], step: f64) -> Result<f64> {
    let av = a.apply_flat(flat);
    let mean: C64 = flat.iter().zip(&av).map(|(x, y)| x.conj() * y).sum::<C64>() * step;
    // <(A - <A>)^2> stays non-negative without the catastrophic cancellation
    // of <A^2> - <A>^2 near eigenstates.
    let var: f64 = av
        .iter()
        .zip(flat)
        .map(|(y, x)| (y - x * mean.re).norm_sqr())
        .sum::<f64>()
        * step;
    if var < -1e-12 {
        return Err(Error::InvalidGrid(format!(
            "variance {var:.3e} is negative beyond round-off"
        )));
    }
    Ok(var.max(0.0).sqrt())
}

/// Standard deviation `sqrt(<A^2> - <A>^2)` of a self-adjoint operator in a
/// normalized state. Small negative round-off is clamped to zero.
pub fn variance(a: &LinearOperator, state: &StateVector) -> Result<f64> {
    check_self_adjoint(a)?;
    check_normalized(state.norm())?;
    deviation_from_flat(a, state.amplitudes(), state.grid().step())
}

/// As [`variance`], for two-component states.
pub fn variance_spinor(a: &LinearOperator, state: &SpinorState) -> Result<f64> {
    check_self_adjoint(a)?;
    check_normalized(state.norm())?;
    deviation_from_flat(a, &state.to_flat(), state.grid().step())
}

/// `<psi| [A, B] |psi>` via four matrix-vector products.
pub fn average_commutator(
    a: &LinearOperator,
    b: &LinearOperator,
    state: &StateVector,
) -> Result<C64> {
    if a.grid() != b.grid() || a.spin_dim() != b.spin_dim() {
        return Err(Error::GridMismatch(
            "average_commutator: operator shapes differ".into(),
        ));
    }
    check_normalized(state.norm())?;
    let ab = a.apply(&b.apply(state)?)?;
    let ba = b.apply(&a.apply(state)?)?;
    Ok(state.inner(&ab) - state.inner(&ba))
}

/// Mandelstam-Tamm time deviation `dT2 = dA / |<dA/dt>|` and the bound
/// `dT2 dH >= 1/2`, evaluated in `state`.
pub fn mt_time_deviation(
    a: &LinearOperator,
    h: &LinearOperator,
    state: &StateVector,
) -> Result<UncertaintyReport> {
    check_self_adjoint(a)?;
    check_self_adjoint(h)?;
    let avg = average_commutator(a, h, state)?;
    let drift_c = C64::new(0.0, -1.0) * avg;
    if drift_c.im.abs() > DRIFT_THRESHOLD {
        return Err(Error::ComplexDrift { imag: drift_c.im });
    }
    let drift = drift_c.re;
    if drift.abs() <= DRIFT_THRESHOLD {
        return Err(Error::ZeroDrift {
            drift_abs: drift.abs(),
            threshold: DRIFT_THRESHOLD,
        });
    }
    // Both operators were already gated above; skip re-checking per call.
    let delta_a = deviation_from_flat(a, state.amplitudes(), state.grid().step())?;
    let delta_h = deviation_from_flat(h, state.amplitudes(), state.grid().step())?;
    let delta_t2 = delta_a / drift.abs();
    let bound_lhs = delta_t2 * delta_h;
    Ok(UncertaintyReport {
        delta_a,
        delta_h,
        drift,
        delta_t2,
        bound_lhs,
        satisfied: bound_lhs >= 0.5 - BOUND_SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{gaussian_state, Grid, Representation};
    use crate::operators::{coordinate_operator, multiplication_real};
    use crate::time_ops::{
        free_hamiltonian, linear_potential_hamiltonian, position_in_momentum_rep, t2_mandelstam,
    };

    fn momentum_grid(n: usize, pmax: f64) -> Grid {
        let dp = pmax / n as f64;
        Grid::new(n, 0.5 * dp, dp, Representation::Momentum).unwrap()
    }

    #[test]
    fn eigenstate_has_zero_deviation() {
        let g = Grid::new(4, 0.0, 0.5, Representation::Position).unwrap();
        let a = coordinate_operator(g).unwrap();
        let psi = StateVector::basis(g, 2).unwrap();
        assert!(variance(&a, &psi).unwrap() < 1e-12);
    }

    #[test]
    fn two_level_superposition_deviation_is_half() {
        let g = Grid::new(2, 0.0, 1.0, Representation::Position).unwrap();
        let a = multiplication_real(g, |x| x).unwrap(); // diag(0, 1)
        let amp = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = StateVector::new(g, vec![amp, amp]).unwrap();
        let d = variance(&a, &psi).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn gaussian_momentum_deviation_matches_sigma() {
        let g = momentum_grid(512, 4.0);
        let sigma = 0.05;
        let psi = gaussian_state(g, 2.0, sigma, -10.0).unwrap();
        let p = coordinate_operator(g).unwrap();
        let d = variance(&p, &psi).unwrap();
        assert!((d - sigma).abs() < 1e-6, "deviation {d}");
    }

    #[test]
    fn variance_rejects_bad_inputs() {
        let g = momentum_grid(32, 4.0);
        let p = coordinate_operator(g).unwrap();
        let mut psi = StateVector::basis(g, 16).unwrap();
        psi.amplitudes_mut()[16] *= 2.0;
        assert!(matches!(
            variance(&p, &psi),
            Err(Error::UnnormalizedState { .. })
        ));

        let skew = multiplication_real(g, |x| x)
            .unwrap()
            .compose(&position_in_momentum_rep(g).unwrap())
            .unwrap();
        let psi = gaussian_state(g, 2.0, 0.1, 0.0).unwrap();
        assert!(matches!(
            variance(&skew, &psi),
            Err(Error::NonHermitian { .. })
        ));
    }

    #[test]
    fn variance_is_shift_invariant() {
        let g = momentum_grid(256, 4.0);
        let psi = gaussian_state(g, 2.0, 0.1, -3.0).unwrap();
        let p = coordinate_operator(g).unwrap();
        let base = variance(&p, &psi).unwrap();
        for c in [1.0, 1e3] {
            let shifted = multiplication_real(g, |x| x + c).unwrap();
            let d = variance(&shifted, &psi).unwrap();
            assert!(
                (d - base).abs() < 1e-9 * c.max(1.0),
                "c = {c}: {d} vs {base}"
            );
        }
    }

    #[test]
    fn linear_potential_drift_is_exact() {
        let g = momentum_grid(256, 4.0);
        let m = 1.0;
        let grav = 0.5;
        let h = linear_potential_hamiltonian(m, grav, g).unwrap();
        let a = coordinate_operator(g).unwrap();
        let psi = gaussian_state(g, 2.0, 0.08, -4.0).unwrap();
        let report = mt_time_deviation(&a, &h, &psi).unwrap();
        assert!(
            (report.drift + m * grav).abs() < 1e-12,
            "drift {}",
            report.drift
        );
        assert!(report.satisfied);
    }

    #[test]
    fn stationary_state_yields_zero_drift_error() {
        let g = momentum_grid(64, 4.0);
        let h = free_hamiltonian(1.0, g).unwrap();
        // Any state is "stationary" for A = p under the free H: [p, H] = 0.
        let a = coordinate_operator(g).unwrap();
        let psi = gaussian_state(g, 2.0, 0.1, 0.0).unwrap();
        assert!(matches!(
            mt_time_deviation(&a, &h, &psi),
            Err(Error::ZeroDrift { .. })
        ));
    }

    #[test]
    fn robertson_bound_holds_for_random_states() {
        let g = momentum_grid(128, 4.0);
        let h = free_hamiltonian(1.0, g).unwrap();
        let x = position_in_momentum_rep(g).unwrap();
        for seed in 0..200u64 {
            let raw = crate::rng::complex_normal_vec(seed, 7, 128);
            let psi = StateVector::new(g, raw).unwrap().normalized().unwrap();
            let report = mt_time_deviation(&x, &h, &psi).unwrap();
            assert!(
                report.satisfied,
                "seed {seed}: bound_lhs = {}",
                report.bound_lhs
            );
            // Robertson oracle: dA dH >= |<[A,H]>| / 2.
            let comm = average_commutator(&x, &h, &psi).unwrap();
            assert!(report.delta_a * report.delta_h >= 0.5 * comm.norm() - 1e-9);
        }
    }

    #[test]
    fn average_commutator_examples() {
        let g = momentum_grid(512, 4.0);
        let x = position_in_momentum_rep(g).unwrap();
        let p = coordinate_operator(g).unwrap();
        let psi = gaussian_state(g, 2.0, 0.05, -10.0).unwrap();
        // [x, p] averages to i on interior states.
        let avg = average_commutator(&x, &p, &psi).unwrap();
        assert!((avg - C64::new(0.0, 1.0)).norm() < 1e-8, "avg {avg}");
        // [A, A] averages to zero.
        let zero = average_commutator(&p, &p, &psi).unwrap();
        assert_eq!(zero, C64::default());
    }

    #[test]
    fn t2_average_conjugation_is_exact_in_the_defining_state() {
        let g = momentum_grid(256, 4.0);
        let h = linear_potential_hamiltonian(1.0, 0.5, g).unwrap();
        let a = coordinate_operator(g).unwrap();
        let psi = gaussian_state(g, 2.0, 0.08, -4.0).unwrap();
        let bundle = t2_mandelstam(&a, &h, &psi).unwrap();
        let avg = average_commutator(&h, &bundle.operator, &psi).unwrap();
        assert!(
            (avg - C64::new(0.0, 1.0)).norm() < 1e-8,
            "<[H, T2]> = {avg}"
        );
    }
}
