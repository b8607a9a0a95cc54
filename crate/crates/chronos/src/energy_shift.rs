//! Energy lattice, energy-shift operator and generator, the half-line
//! restriction, and the physical/unphysical transition dichotomy.
//!
//! Shift dynamics are exact integer lattice translations; the generator
//! `S = +i d/dE` (fourth-order stencil) is used only for the derivative-side
//! checks, so discretization error never contaminates the structural claims:
//! the bilateral shift is norm-preserving, its half-line restriction is an
//! isometry upward and loses exactly the lowest bins downward, and the
//! transition amplitude is a Kronecker delta or exactly zero.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::lattice::{Grid, Representation, StateVector};
use crate::operators::{
    coordinate_operator, derivative_operator, DerivativeScheme, LinearOperator,
};
use crate::time_ops::{TimeOperatorBundle, TimeOperatorKind};

const I: C64 = C64::new(0.0, 1.0);

/// A full-line energy lattice `k dE, k in [-M, M]` paired with its
/// non-negative half `k dE, k in [0, M]`.
#[derive(Debug, Clone)]
pub struct EnergyLatticePair {
    full: Grid,
    half: Grid,
    delta_e: f64,
    levels: usize,
}

impl EnergyLatticePair {
    pub fn new(levels: usize, delta_e: f64) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidGrid(format!(
                "energy lattice needs M >= 2, got {levels}"
            )));
        }
        if !(delta_e > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "delta_e must be positive, got {delta_e}"
            )));
        }
        let full = Grid::new(
            2 * levels + 1,
            -(levels as f64) * delta_e,
            delta_e,
            Representation::EnergyFullLine,
        )?;
        let half = Grid::new(levels + 1, 0.0, delta_e, Representation::EnergyHalfLine)?;
        Ok(EnergyLatticePair {
            full,
            half,
            delta_e,
            levels,
        })
    }

    pub fn full(&self) -> Grid {
        self.full
    }

    pub fn half(&self) -> Grid {
        self.half
    }

    pub fn delta_e(&self) -> f64 {
        self.delta_e
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    fn check_shift(&self, j: i64) -> Result<()> {
        if j.unsigned_abs() as usize > self.levels {
            return Err(Error::ShiftOutOfRange {
                j,
                levels: self.levels,
            });
        }
        Ok(())
    }
}

/// Norm bookkeeping for one application of a shift.
#[derive(Debug, Clone, Copy)]
pub struct ShiftReport {
    pub j: i64,
    pub input_norm: f64,
    pub output_norm: f64,
    /// Probability mass lost to the restriction, summed directly over the
    /// dropped bins so that the dichotomy checks are bit-exact.
    pub defect: f64,
}

/// Physical/unphysical classification of a shifted eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateClass {
    Physical,
    Unphysical,
}

/// `H(0) = diag(E)` on either energy grid. `H(e) = H(0) + e` is a diagonal
/// shift of the same matrix.
pub fn hamiltonian_h0(grid: Grid) -> Result<LinearOperator> {
    match grid.rep() {
        Representation::EnergyHalfLine | Representation::EnergyFullLine => {
            coordinate_operator(grid)
        }
        other => Err(Error::GridMismatch(format!(
            "hamiltonian_h0 expects an energy grid, got {other:?}"
        ))),
    }
}

/// Energy-shift generator `S = +i d/dE` on the full lattice, with the sign
/// fixed so that `[H(0), S] = -i` on interior states.
pub fn shift_generator_full(lattice: &EnergyLatticePair) -> Result<LinearOperator> {
    Ok(derivative_operator(lattice.full, DerivativeScheme::CentralDifference4)?.scale(I))
}

/// Exact lattice translation `(V(e) psi)_k = psi_{k - j}` with `e = j dE` on
/// the full lattice. Amplitudes translated past either end are dropped;
/// interior states shift unitarily.
pub fn v_shift_full(state: &StateVector, j: i64) -> Result<StateVector> {
    if state.grid().rep() != Representation::EnergyFullLine {
        return Err(Error::GridMismatch(
            "v_shift_full expects a full-line state".into(),
        ));
    }
    let n = state.grid().len();
    let levels = (n - 1) / 2;
    if j.unsigned_abs() as usize > levels {
        return Err(Error::ShiftOutOfRange { j, levels });
    }
    let mut out = vec![C64::default(); n];
    for k in 0..n {
        let src = k as i64 - j;
        if src >= 0 && (src as usize) < n {
            out[k] = state.amplitudes()[src as usize];
        }
    }
    StateVector::new(*state.grid(), out)
}

/// Truncation of a full-line state to the non-negative half lattice.
pub fn restrict(state: &StateVector) -> Result<StateVector> {
    if state.grid().rep() != Representation::EnergyFullLine {
        return Err(Error::GridMismatch(
            "restrict expects a full-line state".into(),
        ));
    }
    let n = state.grid().len();
    let levels = (n - 1) / 2;
    if 2 * levels + 1 != n {
        return Err(Error::GridMismatch(
            "full-line lattice must have odd size".into(),
        ));
    }
    let half = Grid::new(
        levels + 1,
        0.0,
        state.grid().step(),
        Representation::EnergyHalfLine,
    )?;
    StateVector::new(half, state.amplitudes()[levels..].to_vec())
}

/// Zero-filled embedding of a half-line state into the full lattice.
pub fn embed(state: &StateVector) -> Result<StateVector> {
    if state.grid().rep() != Representation::EnergyHalfLine {
        return Err(Error::GridMismatch(
            "embed expects a half-line state".into(),
        ));
    }
    let half_n = state.grid().len();
    let levels = half_n - 1;
    let full = Grid::new(
        2 * levels + 1,
        -(levels as f64) * state.grid().step(),
        state.grid().step(),
        Representation::EnergyFullLine,
    )?;
    let mut amps = vec![C64::default(); 2 * levels + 1];
    amps[levels..].copy_from_slice(state.amplitudes());
    StateVector::new(full, amps)
}

/// The restricted shift `restrict . V(e) . embed` on half-line states,
/// with a report of the norm defect. Upward shifts are isometries (until the
/// finite window's top edge interferes); downward shifts lose exactly the
/// mass on the lowest `|j|` bins.
pub fn restricted_shift(state: &StateVector, j: i64) -> Result<(StateVector, ShiftReport)> {
    if state.grid().rep() != Representation::EnergyHalfLine {
        return Err(Error::GridMismatch(
            "restricted_shift expects a half-line state".into(),
        ));
    }
    let m = state.grid().len() - 1;
    if j.unsigned_abs() as usize > m {
        return Err(Error::ShiftOutOfRange { j, levels: m });
    }
    let shifted = restrict(&v_shift_full(&embed(state)?, j)?)?;

    let de = state.grid().step();
    let amps = state.amplitudes();
    // `+ 0.0` turns the -0.0 of an empty sum into +0.0 for bit comparisons.
    let defect = if j < 0 {
        let cut = j.unsigned_abs() as usize;
        amps[..cut].iter().map(|z| z.norm_sqr()).sum::<f64>() * de + 0.0
    } else {
        let keep_top = m + 1 - j as usize;
        amps[keep_top..].iter().map(|z| z.norm_sqr()).sum::<f64>() * de + 0.0
    };
    let report = ShiftReport {
        j,
        input_norm: state.norm(),
        output_norm: shifted.norm(),
        defect,
    };
    Ok((shifted, report))
}

/// The time operator of the half-line system: the corner block
/// `T = P S P` of the full-lattice generator, promising `[H(0), T] = -i`.
pub fn restricted_generator(lattice: &EnergyLatticePair) -> Result<TimeOperatorBundle> {
    let s = shift_generator_full(lattice)?;
    let m = lattice.levels;
    let n_half = m + 1;
    let mut block = ndarray::Array2::default((n_half, n_half));
    for i in 0..n_half {
        for j in 0..n_half {
            block[[i, j]] = s.matrix()[[m + i, m + j]];
        }
    }
    let op = LinearOperator::from_matrix(lattice.half, 1, block)?;
    Ok(TimeOperatorBundle {
        operator: op,
        kind: TimeOperatorKind::RestrictionT,
        expected_commutator_sign: TimeOperatorKind::RestrictionT.commutator_sign(),
        defining_state: None,
        drift: None,
    })
}

/// Lattice transition amplitude `C(E', E, e) = <E', 0 | E, e>` with
/// `e = j dE`, as a vector over `E'`. A Kronecker delta when the shifted
/// level stays on the physical half line, identically zero when it drops
/// below it.
pub fn transition_amplitude(e_idx: usize, j: i64, lattice: &EnergyLatticePair) -> Result<Vec<C64>> {
    if e_idx > lattice.levels {
        return Err(Error::InvalidGrid(format!(
            "level index {e_idx} exceeds M = {}",
            lattice.levels
        )));
    }
    lattice.check_shift(j)?;
    let target = e_idx as i64 + j;
    let n_half = lattice.levels + 1;
    let mut out = vec![C64::default(); n_half];
    if target < 0 {
        return Ok(out); // unphysical: amplitude vanishes identically
    }
    if target > lattice.levels as i64 {
        return Err(Error::AboveLatticeTop {
            index: target,
            levels: lattice.levels,
        });
    }
    out[target as usize] = C64::new(1.0, 0.0);
    Ok(out)
}

/// A shifted eigenstate is physical exactly when `E + j dE >= 0`
/// (the boundary `E + e = 0` belongs to the closed physical spectrum).
pub fn classify_state(e_idx: usize, j: i64, lattice: &EnergyLatticePair) -> Result<StateClass> {
    if e_idx > lattice.levels {
        return Err(Error::InvalidGrid(format!(
            "level index {e_idx} exceeds M = {}",
            lattice.levels
        )));
    }
    lattice.check_shift(j)?;
    Ok(if e_idx as i64 + j >= 0 {
        StateClass::Physical
    } else {
        StateClass::Unphysical
    })
}

fn masked_relative_diff(a: &[C64], b: &[C64], norm_ref: &[C64], margin: usize) -> f64 {
    let n = a.len();
    let mut acc = 0.0;
    for k in margin..n.saturating_sub(margin) {
        acc += (a[k] - b[k]).norm_sqr();
    }
    let norm: f64 = norm_ref.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    acc.sqrt() / norm
}

/// Heisenberg-like equation in the shift parameter: the centered finite
/// difference of `F(e) = V^+(e) F V(e)` (for `F = H(0)`) against
/// `i [F(e), S]`, evaluated in action on `state`. Returns the interior
/// relative residual.
pub fn heisenberg_like_residual(
    lattice: &EnergyLatticePair,
    j: i64,
    state: &StateVector,
    margin: usize,
) -> Result<f64> {
    let h0 = hamiltonian_h0(lattice.full)?;
    let s = shift_generator_full(lattice)?;
    let de = lattice.delta_e;

    // F(e) psi = V^+(e) H0 V(e) psi via exact shifts.
    let f_at = |jj: i64, psi: &StateVector| -> Result<StateVector> {
        let up = v_shift_full(psi, jj)?;
        let hup = h0.apply(&up)?;
        v_shift_full(&hup, -jj)
    };
    let plus = f_at(j + 1, state)?;
    let minus = f_at(j - 1, state)?;
    let lhs: Vec<C64> = plus
        .amplitudes()
        .iter()
        .zip(minus.amplitudes())
        .map(|(p, m)| (p - m) / (2.0 * de))
        .collect();

    // i [F(e), S] psi, with F(e) applied through the same shift sandwich.
    let spsi = s.apply(state)?;
    let f_spsi = f_at(j, &spsi)?;
    let s_fpsi = s.apply(&f_at(j, state)?)?;
    let rhs: Vec<C64> = f_spsi
        .amplitudes()
        .iter()
        .zip(s_fpsi.amplitudes())
        .map(|(a, b)| I * (a - b))
        .collect();

    Ok(masked_relative_diff(&lhs, &rhs, state.amplitudes(), margin))
}

/// Schrodinger-like equation in the shift parameter:
/// `-i d/de |t, e> = S |t, e>`, with the derivative realized as a centered
/// finite difference of the exact shifts. Returns the interior relative
/// residual.
pub fn schrodinger_like_residual(
    lattice: &EnergyLatticePair,
    j: i64,
    state: &StateVector,
    margin: usize,
) -> Result<f64> {
    let s = shift_generator_full(lattice)?;
    let de = lattice.delta_e;
    let plus = v_shift_full(state, j + 1)?;
    let minus = v_shift_full(state, j - 1)?;
    let lhs: Vec<C64> = plus
        .amplitudes()
        .iter()
        .zip(minus.amplitudes())
        .map(|(p, m)| -I * (p - m) / (2.0 * de))
        .collect();
    let rhs = s.apply(&v_shift_full(state, j)?)?;
    Ok(masked_relative_diff(
        &lhs,
        rhs.amplitudes(),
        state.amplitudes(),
        margin,
    ))
}

/// Deterministic interior Gaussian on an energy grid, for lattice tests.
pub fn energy_gaussian(grid: Grid, center: f64, sigma: f64) -> Result<StateVector> {
    StateVector::from_fn(grid, |e| {
        C64::new(
            (-(e - center) * (e - center) / (4.0 * sigma * sigma)).exp(),
            0.0,
        )
    })
    .normalized()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_pair() -> EnergyLatticePair {
        EnergyLatticePair::new(8, 1.0).unwrap()
    }

    #[test]
    fn lattice_pair_layout() {
        let pair = small_pair();
        assert_eq!(pair.full().len(), 17);
        assert_eq!(pair.half().len(), 9);
        assert_eq!(pair.full().point(0), -8.0);
        assert_eq!(pair.full().point(8), 0.0);
        assert_eq!(pair.half().point(0), 0.0);
        // Half grid is the non-negative sub-block of the full grid.
        for k in 0..9 {
            assert_eq!(pair.half().point(k), pair.full().point(8 + k));
        }
    }

    #[test]
    fn basis_levels_are_orthonormal_in_the_lattice_measure() {
        let pair = EnergyLatticePair::new(8, 0.25).unwrap();
        for i in 0..9 {
            let ei = StateVector::basis(pair.half(), i).unwrap();
            for j in 0..9 {
                let ej = StateVector::basis(pair.half(), j).unwrap();
                let overlap = ei.inner(&ej);
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((overlap.re - expected).abs() < 1e-15);
                assert_eq!(overlap.im, 0.0);
            }
        }
    }

    #[test]
    fn hamiltonian_h0_examples() {
        let half = Grid::new(4, 0.0, 1.0, Representation::EnergyHalfLine).unwrap();
        let h = hamiltonian_h0(half).unwrap();
        assert_eq!(
            h.diagonal().iter().map(|z| z.re).collect::<Vec<_>>(),
            vec![0.0, 1.0, 2.0, 3.0]
        );

        let full = Grid::new(5, -2.0, 1.0, Representation::EnergyFullLine).unwrap();
        let h = hamiltonian_h0(full).unwrap();
        assert_eq!(
            h.diagonal().iter().map(|z| z.re).collect::<Vec<_>>(),
            vec![-2.0, -1.0, 0.0, 1.0, 2.0]
        );

        // H(e) = H(0) + e shifts the diagonal.
        let he = h.add(&LinearOperator::identity(full, 1)).unwrap();
        assert_eq!(
            he.diagonal().iter().map(|z| z.re).collect::<Vec<_>>(),
            vec![-1.0, 0.0, 1.0, 2.0, 3.0]
        );
    }

    #[test]
    fn v_shift_moves_basis_vectors_exactly() {
        let pair = small_pair();
        // Basis vector at E = 2 dE (full index 10), shifted by +3.
        let e2 = StateVector::basis(pair.full(), 10).unwrap();
        let shifted = v_shift_full(&e2, 3).unwrap();
        let expected = StateVector::basis(pair.full(), 13).unwrap();
        assert_eq!(shifted.amplitudes(), expected.amplitudes());

        // j = 0 is the identity.
        let same = v_shift_full(&e2, 0).unwrap();
        assert_eq!(same.amplitudes(), e2.amplitudes());

        // Interior up-then-down round trip is exact.
        let back = v_shift_full(&shifted, -3).unwrap();
        assert_eq!(back.amplitudes(), e2.amplitudes());

        assert!(matches!(
            v_shift_full(&e2, 9),
            Err(Error::ShiftOutOfRange { .. })
        ));
    }

    #[test]
    fn shifted_basis_vector_gains_j_delta_e_of_energy() {
        let pair = small_pair();
        let h0 = hamiltonian_h0(pair.full()).unwrap();
        let e2 = StateVector::basis(pair.full(), 10).unwrap(); // E = 2
        let shifted = v_shift_full(&e2, 3).unwrap(); // should be the E = 5 eigenvector
        let hpsi = h0.apply(&shifted).unwrap();
        for (k, (a, b)) in hpsi
            .amplitudes()
            .iter()
            .zip(shifted.amplitudes())
            .enumerate()
        {
            assert!((a - b * C64::new(5.0, 0.0)).norm() < 1e-15, "index {k}");
        }
    }

    #[test]
    fn restrict_and_embed_are_partial_inverses() {
        let pair = small_pair();
        let half_state = StateVector::basis(pair.half(), 0).unwrap();
        let embedded = embed(&half_state).unwrap();
        assert_eq!(embedded.grid().rep(), Representation::EnergyFullLine);
        // e0 sits at E = 0, i.e. the center of the full lattice.
        assert!(embedded.amplitudes()[8].norm() > 0.0);
        let back = restrict(&embedded).unwrap();
        assert_eq!(back.amplitudes(), half_state.amplitudes());

        // A state supported only on E < 0 restricts to zero.
        let neg = StateVector::basis(pair.full(), 2).unwrap();
        let cut = restrict(&neg).unwrap();
        assert!(cut.amplitudes().iter().all(|z| *z == C64::default()));

        // norm^2 after restriction drops by exactly the negative-side mass.
        let mut mixed = StateVector::zeros(pair.full());
        mixed.amplitudes_mut()[2] = C64::new(0.6, 0.0);
        mixed.amplitudes_mut()[12] = C64::new(0.8, 0.0);
        let kept = restrict(&mixed).unwrap();
        let neg_mass = mixed.mass_on(0..8);
        assert!((kept.norm_sq() - (mixed.norm_sq() - neg_mass)).abs() < 1e-15);
    }

    #[test]
    fn restricted_shift_dichotomy_examples() {
        let pair = small_pair();
        // e0 shifted up is e1 with no defect.
        let e0 = StateVector::basis(pair.half(), 0).unwrap();
        let (up, report) = restricted_shift(&e0, 1).unwrap();
        let e1 = StateVector::basis(pair.half(), 1).unwrap();
        assert_eq!(up.amplitudes(), e1.amplitudes());
        assert_eq!(report.defect, 0.0);
        assert_eq!(report.input_norm, report.output_norm);

        // e0 shifted down falls off the half line entirely.
        let (down, report) = restricted_shift(&e0, -1).unwrap();
        assert!(down.amplitudes().iter().all(|z| *z == C64::default()));
        assert_eq!(report.defect, 1.0);
        assert_eq!(report.output_norm, 0.0);

        // Mixed state (0.6, 0.8, 0, ...) with dE = 1: defect is the lowest-bin mass.
        let mut mixed = StateVector::zeros(pair.half());
        mixed.amplitudes_mut()[0] = C64::new(0.6, 0.0);
        mixed.amplitudes_mut()[1] = C64::new(0.8, 0.0);
        let (out, report) = restricted_shift(&mixed, -1).unwrap();
        assert_eq!(out.amplitudes()[0], C64::new(0.8, 0.0));
        assert!(out.amplitudes()[1..].iter().all(|z| *z == C64::default()));
        assert_eq!(report.defect, 0.6f64 * 0.6f64);
    }

    #[test]
    fn naimark_dilation_consistency_is_bitwise() {
        let pair = small_pair();
        let raw = crate::rng::complex_normal_vec(5, 3, 9);
        let psi = StateVector::new(pair.half(), raw)
            .unwrap()
            .normalized()
            .unwrap();
        for j in -8..=8 {
            let (via_op, _) = restricted_shift(&psi, j).unwrap();
            let dilated = restrict(&v_shift_full(&embed(&psi).unwrap(), j).unwrap()).unwrap();
            assert_eq!(via_op.amplitudes(), dilated.amplitudes(), "j = {j}");
        }
    }

    #[test]
    fn transition_amplitude_is_delta_or_zero() {
        let pair = EnergyLatticePair::new(16, 0.5).unwrap();
        // E = 2 dE shifted by +3 lands exactly on E' = 5 dE.
        let row = transition_amplitude(2, 3, &pair).unwrap();
        for (k, z) in row.iter().enumerate() {
            let expected = if k == 5 {
                C64::new(1.0, 0.0)
            } else {
                C64::default()
            };
            assert_eq!(*z, expected);
        }
        // E = 2 dE shifted by -5 leaves the physical half line: all zeros.
        let row = transition_amplitude(2, -5, &pair).unwrap();
        assert!(row.iter().all(|z| *z == C64::default()));

        // Total probability is 0 or 1, never in between.
        for e_idx in 0..=8usize {
            for j in -10..=8i64 {
                let row = transition_amplitude(e_idx, j, &pair).unwrap();
                let total: f64 = row.iter().map(|z| z.norm_sqr()).sum();
                assert!(total == 0.0 || total == 1.0);
                let class = classify_state(e_idx, j, &pair).unwrap();
                match class {
                    StateClass::Physical => assert_eq!(total, 1.0),
                    StateClass::Unphysical => assert_eq!(total, 0.0),
                }
            }
        }
    }

    #[test]
    fn classification_includes_the_boundary() {
        let pair = small_pair();
        assert_eq!(classify_state(0, 0, &pair).unwrap(), StateClass::Physical);
        assert_eq!(
            classify_state(2, -5, &pair).unwrap(),
            StateClass::Unphysical
        );
        assert_eq!(classify_state(2, -2, &pair).unwrap(), StateClass::Physical);
    }

    #[test]
    fn restriction_generator_conjugation() {
        let pair = EnergyLatticePair::new(1024, 1.0 / 64.0).unwrap();
        let bundle = restricted_generator(&pair).unwrap();
        assert_eq!(bundle.expected_commutator_sign, -1.0);
        let h0 = hamiltonian_h0(pair.half()).unwrap();
        let center = 8.0;
        let sigma = 25.0 / 64.0;
        let psi = energy_gaussian(pair.half(), center, sigma).unwrap();
        let resid = crate::time_ops::conjugacy_residual(&h0, &bundle, &psi, 2);
        assert!(resid < 1e-6, "restriction conjugation residual {resid}");
    }

    #[test]
    fn restriction_matches_negated_arrival_operator_on_the_interior_block() {
        // T = P S P and the energy-representation arrival operator -i d/dE
        // share their interior stencils with opposite sign; only the rows
        // touched by the restriction or the one-sided ends differ.
        let pair = EnergyLatticePair::new(64, 0.25).unwrap();
        let t_restricted = restricted_generator(&pair).unwrap();
        let t_arrival = crate::time_ops::t_kg_energy_rep(pair.half()).unwrap();
        let n = pair.half().len();
        for i in 2..n - 2 {
            for j in 0..n {
                let a = t_restricted.operator.matrix()[[i, j]];
                let b = -t_arrival.operator.matrix()[[i, j]];
                assert_eq!(a, b, "row {i}, col {j}");
            }
        }
    }

    #[test]
    fn boundary_supported_state_sees_a_large_residual() {
        // States supported at E = 0 are outside the restriction's contract;
        // the boundary residual is reported, not asserted small.
        let pair = EnergyLatticePair::new(64, 0.25).unwrap();
        let bundle = restricted_generator(&pair).unwrap();
        let h0 = hamiltonian_h0(pair.half()).unwrap();
        let e0 = StateVector::basis(pair.half(), 0).unwrap();
        let resid = crate::time_ops::conjugacy_residual_flat(
            &h0,
            &bundle.operator,
            e0.amplitudes(),
            -1.0,
            0,
        );
        assert!(
            resid > 1e-1,
            "boundary residual unexpectedly small: {resid}"
        );
    }

    #[test]
    fn shift_parameter_equations_hold() {
        let pair = EnergyLatticePair::new(512, 1.0 / 32.0).unwrap();
        let psi = energy_gaussian(pair.full(), 0.0, 30.0 / 32.0).unwrap();
        // F(e) is linear in e, so the centered difference is exact and only
        // the stencil error of S remains.
        let heis = heisenberg_like_residual(&pair, 2, &psi, 2).unwrap();
        assert!(heis < 1e-6, "Heisenberg-like residual {heis}");
        // The state-side derivative is a genuine centered difference of the
        // exact flow: second order in the lattice spacing.
        let de = pair.delta_e();
        let schr = schrodinger_like_residual(&pair, 2, &psi, 2).unwrap();
        assert!(schr < de * de, "Schrodinger-like residual {schr}");
    }

    #[test]
    fn generator_eigenaction_sign() {
        // S = +i d/dE applied to exp(-i tau E) multiplies by +tau.
        let pair = EnergyLatticePair::new(512, 1.0 / 32.0).unwrap();
        let s = shift_generator_full(&pair).unwrap();
        let tau = 0.6;
        let samples: Vec<C64> = pair
            .full()
            .points()
            .map(|e| C64::from_polar(1.0, -tau * e))
            .collect();
        let out = s.apply_flat(&samples);
        let n = samples.len();
        for k in 2..n - 2 {
            assert!((out[k] - samples[k] * tau).norm() < 1e-8, "row {k}");
        }
    }
}
