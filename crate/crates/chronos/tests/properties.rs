//! Property tests for the structural invariants: transform unitarity,
//! diagonal algebra exactness, hermiticity preservation, and the shift
//! dichotomy's norm accounting.

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use chronos::energy_shift::{embed, restrict, restricted_shift, v_shift_full, EnergyLatticePair};
use chronos::lattice::{
    momentum_to_position_onto, position_to_momentum, Grid, Representation, StateVector,
};
use chronos::operators::{
    commutator, coordinate_operator, derivative_operator, hermiticity_defect, multiplication_real,
    symmetrize, DerivativeScheme,
};
use chronos::rng;
use chronos::uncertainty::variance;

fn random_state(grid: Grid, seed: u64) -> StateVector {
    let raw = rng::complex_normal_vec(seed, 13, grid.len());
    StateVector::new(grid, raw).unwrap().normalized().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Position <-> momentum is unitary and invertible on arbitrary grids.
    #[test]
    fn fourier_transform_is_unitary(
        n in 16usize..96,
        dx in 0.05f64..2.0,
        origin_frac in -2.0f64..2.0,
        seed in 0u64..u64::MAX / 2,
    ) {
        let xg = Grid::new(n, origin_frac * n as f64 * dx / 4.0, dx, Representation::Position)
            .unwrap();
        let psi = random_state(xg, seed);
        let phi = position_to_momentum(&psi).unwrap();
        prop_assert!((phi.norm() - 1.0).abs() < 1e-12);
        let back = momentum_to_position_onto(&phi, &xg).unwrap();
        let err = back
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        prop_assert!(err < 1e-12, "round trip error {err}");
    }

    /// Products of diagonal operators collapse to the diagonal of the
    /// pointwise product, exactly.
    #[test]
    fn diagonal_algebra_is_exact(
        n in 4usize..48,
        a0 in -3.0f64..3.0,
        a1 in -3.0f64..3.0,
        b0 in -3.0f64..3.0,
        b1 in -3.0f64..3.0,
    ) {
        let grid = Grid::new(n, 0.25, 0.5, Representation::Momentum).unwrap();
        let f = multiplication_real(grid, |p| a0 + a1 * p).unwrap();
        let g = multiplication_real(grid, |p| b0 + b1 * p * p).unwrap();
        let fg = f.compose(&g).unwrap();
        let direct = multiplication_real(grid, |p| (a0 + a1 * p) * (b0 + b1 * p * p)).unwrap();
        let diff = fg
            .matrix()
            .iter()
            .zip(direct.matrix())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        prop_assert_eq!(diff, 0.0);
    }

    /// symmetrize keeps self-adjoint pairs self-adjoint; so does i [A, B].
    #[test]
    fn hermiticity_is_preserved(
        n in 8usize..64,
        c0 in -2.0f64..2.0,
        c1 in -2.0f64..2.0,
    ) {
        let grid = Grid::new(n, 0.25, 0.5, Representation::Momentum).unwrap();
        let x = derivative_operator(grid, DerivativeScheme::Spectral)
            .unwrap()
            .scale(C64::new(0.0, 1.0));
        let b = multiplication_real(grid, |p| c0 + c1 * p).unwrap();
        let s = symmetrize(&x, &b).unwrap();
        prop_assert!(hermiticity_defect(&s) <= 1e-12);
        let ic = commutator(&x, &b).unwrap().scale(C64::new(0.0, 1.0));
        prop_assert!(hermiticity_defect(&ic) <= 1e-12);
    }

    /// Norm accounting of the restricted shift: defect is exactly the mass
    /// the restriction discards, and the dilation picture is bitwise equal.
    #[test]
    fn restricted_shift_accounts_for_every_bit_of_mass(
        levels in 4usize..48,
        seed in 0u64..u64::MAX / 2,
        j_frac in -1.0f64..1.0,
    ) {
        let pair = EnergyLatticePair::new(levels, 0.5).unwrap();
        let psi = random_state(pair.half(), seed);
        let j = (j_frac * levels as f64) as i64;
        let (out, rep) = restricted_shift(&psi, j).unwrap();

        // Naimark-dilation consistency, bitwise.
        let dilated = restrict(&v_shift_full(&embed(&psi).unwrap(), j).unwrap()).unwrap();
        prop_assert_eq!(out.amplitudes(), dilated.amplitudes());

        // defect = input^2 - output^2 up to round-off.
        let gap = rep.input_norm * rep.input_norm
            - rep.output_norm * rep.output_norm
            - rep.defect;
        prop_assert!(gap.abs() < 1e-13, "accounting gap {gap}");
        prop_assert!(rep.defect >= 0.0);

        // Downward shifts lose exactly the lowest bins.
        if j < 0 {
            let head = psi.mass_on(0..j.unsigned_abs() as usize);
            prop_assert_eq!(rep.defect.to_bits(), head.to_bits());
        }
    }

    /// The deviation is invariant under constant shifts of the observable.
    #[test]
    fn deviation_shift_invariance(
        n in 16usize..96,
        c in -1000.0f64..1000.0,
        seed in 0u64..u64::MAX / 2,
    ) {
        let grid = Grid::new(n, 0.25, 0.5, Representation::Momentum).unwrap();
        let psi = random_state(grid, seed);
        let p = coordinate_operator(grid).unwrap();
        let shifted = multiplication_real(grid, |q| q + c).unwrap();
        let base = variance(&p, &psi).unwrap();
        let moved = variance(&shifted, &psi).unwrap();
        prop_assert!((base - moved).abs() < 1e-9 * c.abs().max(1.0));
    }
}
