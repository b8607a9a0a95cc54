//! The nine experiment implementations.

use num_complex::Complex64 as C64;

use super::{spinor_suite, standard_momentum_grid, Check, ExperimentConfig, ExperimentReport};
use crate::dynamics::{classical_arrival_oracle, expectation_series, ClassicalEnsemble};
use crate::energy_shift::{
    classify_state, energy_gaussian, hamiltonian_h0, restricted_generator, restricted_shift,
    shift_generator_full, transition_amplitude, EnergyLatticePair, StateClass,
};
use crate::error::{Error, Result};
use crate::lattice::{
    gaussian_state, momentum_to_energy, momentum_to_energy_onto, Grid, Representation, StateVector,
};
use crate::operators::{commutator, coordinate_operator, hermiticity_defect, multiplication_real};
use crate::rng;
use crate::time_ops::{
    action_diff_flat, conjugacy_residual, conjugacy_residual_flat, conjugacy_residual_spinor,
    dirac_hamiltonian, dirac_mass_shell_deviation, entrywise_diff, free_hamiltonian,
    kg_hamiltonian, linear_potential_hamiltonian, position_in_momentum_rep, proper_time,
    t1_from_dynamical, t2_mandelstam, t_dirac, t_free_nonrel, t_kg_energy_rep, t_kg_momentum,
    t_relativistic_general, DiracAlgebra,
};
use crate::uncertainty::{average_commutator, mt_time_deviation};

fn packet(cfg: &ExperimentConfig, grid: Grid) -> Result<StateVector> {
    gaussian_state(
        grid,
        cfg.get("p0"),
        cfg.get_positive("sigma_p")?,
        cfg.get("x0"),
    )
}

fn masked_relative_diff(a: &[C64], b: &[C64], margin: usize) -> f64 {
    let n = a.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for k in margin..n.saturating_sub(margin) {
        num += (a[k] - b[k]).norm_sqr();
        den += b[k].norm_sqr();
    }
    num.sqrt() / den.sqrt().max(f64::MIN_POSITIVE)
}

pub(super) fn commutators(cfg: &ExperimentConfig, report: &mut ExperimentReport) -> Result<()> {
    let n = cfg.get_usize("n", 2)?;
    let grid = standard_momentum_grid(n, cfg.get_positive("p_max")?)?;
    let x = position_in_momentum_rep(grid)?;
    let p = coordinate_operator(grid)?;
    let psi = packet(cfg, grid)?;

    // [x, p] acts as +i on interior states.
    let r = conjugacy_residual_flat(&x, &p, psi.amplitudes(), 1.0, 0);
    report.push(Check::at_most("comm.x_p.residual", r, 1e-8));

    // [A, A] vanishes identically.
    let self_comm = commutator(&p, &p)?;
    report.push(Check::exactly(
        "comm.self.frobenius",
        self_comm.frobenius(),
        0.0,
    ));

    // Symmetrized products of self-adjoint operators stay self-adjoint,
    // i [A, B] likewise.
    let sym = crate::operators::symmetrize(&x, &p)?;
    report.push(Check::at_most(
        "sym.hermiticity_defect",
        hermiticity_defect(&sym),
        1e-12,
    ));
    let icomm = commutator(&x, &p)?.scale(C64::new(0.0, 1.0));
    report.push(Check::at_most(
        "icomm.hermiticity_defect",
        hermiticity_defect(&icomm),
        1e-12,
    ));

    // Energy lattice: [H(0), S] = -i on interior states.
    let pair = EnergyLatticePair::new(cfg.get_usize("levels", 2)?, cfg.get_positive("delta_e")?)?;
    let s = shift_generator_full(&pair)?;
    let h0 = hamiltonian_h0(pair.full())?;
    let span = pair.full().span();
    let psi_e = energy_gaussian(
        pair.full(),
        pair.full().point(0) + 0.5 * span,
        28.0 * pair.delta_e(),
    )?;
    let r = conjugacy_residual_flat(&h0, &s, psi_e.amplitudes(), -1.0, 2);
    report.push(Check::at_most("comm.h0_shift_generator.residual", r, 1e-6));
    Ok(())
}

pub(super) fn mt_bound(cfg: &ExperimentConfig, report: &mut ExperimentReport) -> Result<()> {
    let n = cfg.get_usize("n", 2)?;
    let grid = standard_momentum_grid(n, cfg.get_positive("p_max")?)?;
    let states = cfg.get_usize("states", 1)?;
    let h = free_hamiltonian(cfg.get_positive("m")?, grid)?;
    let x = position_in_momentum_rep(grid)?;

    let mut min_bound = f64::INFINITY;
    let mut violations = 0usize;
    let mut degenerate = 0usize;
    for i in 0..states {
        let raw = rng::complex_normal_vec(report.seed, 1000 + i as u64, n);
        let psi = StateVector::new(grid, raw)?.normalized()?;
        match mt_time_deviation(&x, &h, &psi) {
            Ok(rep) => {
                min_bound = min_bound.min(rep.bound_lhs);
                if !rep.satisfied {
                    violations += 1;
                }
            }
            Err(Error::ZeroDrift { .. }) => degenerate += 1,
            Err(e) => return Err(e),
        }
    }
    report.push(Check::exactly("mt.violations", violations as f64, 0.0));
    report.push(Check::exactly(
        "mt.zero_drift_states",
        degenerate as f64,
        0.0,
    ));
    report.push(Check::at_least("mt.min_bound_lhs", min_bound, 0.5 - 1e-9));
    Ok(())
}

pub(super) fn t2_linear_potential(
    cfg: &ExperimentConfig,
    report: &mut ExperimentReport,
) -> Result<()> {
    let grid = standard_momentum_grid(cfg.get_usize("n", 2)?, cfg.get_positive("p_max")?)?;
    let m = cfg.get_positive("m")?;
    let g = cfg.get_positive("g")?;
    let h = linear_potential_hamiltonian(m, g, grid)?;
    let a = coordinate_operator(grid)?;
    let psi = packet(cfg, grid)?;

    let bundle = t2_mandelstam(&a, &h, &psi)?;
    let drift = bundle.drift.expect("T2 bundle records its drift");
    report.push(Check::at_most(
        "t2.drift_error",
        (drift + m * g).abs(),
        1e-12,
    ));

    let closed_form = multiplication_real(grid, |p| p / (m * g))?;
    report.push(Check::at_most(
        "t2.entrywise_vs_p_over_mg",
        entrywise_diff(&bundle.operator, &closed_form),
        1e-12,
    ));
    report.push(Check::at_most(
        "t2.hermiticity_defect",
        hermiticity_defect(&bundle.operator),
        1e-12,
    ));
    report.push(Check::at_most(
        "t2.conjugation_residual",
        conjugacy_residual(&h, &bundle, &psi, 0),
        1e-6,
    ));
    let avg = average_commutator(&h, &bundle.operator, &psi)?;
    report.push(Check::at_most(
        "t2.average_conjugation_error",
        (avg - C64::new(0.0, 1.0)).norm(),
        1e-8,
    ));
    Ok(())
}

pub(super) fn kg_equivalence(cfg: &ExperimentConfig, report: &mut ExperimentReport) -> Result<()> {
    let grid = standard_momentum_grid(cfg.get_usize("n", 2)?, cfg.get_positive("p_max")?)?;
    let m = cfg.get_positive("m")?;
    let de = cfg.get_positive("delta_e")?;
    let psi = packet(cfg, grid)?;
    let h = kg_hamiltonian(m, grid)?;
    let t_kg = t_kg_momentum(m, grid)?;

    // Two algebraic routes to the measure factor agree at the packet center.
    let p0 = cfg.get("p0");
    let e0 = (p0 * p0 + m * m).sqrt();
    let via_jacobian = (e0 / p0).sqrt();
    let via_measure = (e0 * e0 / (e0 * e0 - m * m)).powf(0.25);
    report.push(Check::at_most(
        "kg.measure_factor_consistency",
        (via_jacobian - via_measure).abs(),
        1e-12,
    ));

    // The measure change preserves probability.
    let phi_auto = momentum_to_energy(&psi, m)?;
    report.push(Check::at_most(
        "kg.measure_norm_error",
        (phi_auto.norm_sq() - psi.norm_sq()).abs(),
        1e-6,
    ));

    // Conjugating the momentum form by the measure map gives -i d/dE.
    let p_top = grid.point(grid.len() - 1);
    let e_top = (p_top * p_top + m * m).sqrt() + 8.0 * de;
    let n_e = (e_top / de).ceil() as usize + 1;
    let egrid = Grid::new(n_e, 0.0, de, Representation::EnergyHalfLine)?;
    let t_e = t_kg_energy_rep(egrid)?;
    let phi = momentum_to_energy_onto(&psi, m, &egrid)?;
    let t_psi = t_kg.operator.apply(&psi)?;
    let lhs = momentum_to_energy_onto(&t_psi, m, &egrid)?;
    let rhs = t_e.operator.apply(&phi)?;
    report.push(Check::at_most(
        "kg.conjugation_residual",
        masked_relative_diff(lhs.amplitudes(), rhs.amplitudes(), 2),
        1e-6,
    ));

    // The general symmetrized construction with H = diag(E) acts like the
    // chain-rule form on interior states.
    let t_gen = t_relativistic_general(&h, grid)?;
    report.push(Check::at_most(
        "kg.general_vs_chain_rule_action",
        action_diff_flat(&t_gen, &t_kg.operator, &[psi.amplitudes().to_vec()]),
        1e-6,
    ));

    // And in the energy representation the conjugation [H, T] = +i holds.
    let h_e = hamiltonian_h0(egrid)?;
    let psi_e = energy_gaussian(egrid, 0.55 * egrid.span(), 30.0 * de)?;
    report.push(Check::at_most(
        "kg.energy_rep_conjugation_residual",
        conjugacy_residual(&h_e, &t_e, &psi_e, 2),
        1e-6,
    ));
    Ok(())
}

pub(super) fn dirac_reduction(cfg: &ExperimentConfig, report: &mut ExperimentReport) -> Result<()> {
    let grid = standard_momentum_grid(cfg.get_usize("n", 2)?, cfg.get_positive("p_max")?)?;
    let m = cfg.get_positive("m")?;
    let algebra = DiracAlgebra::standard();
    report.push(Check::at_most(
        "dirac.algebra_defect",
        algebra.max_relation_defect(),
        1e-15,
    ));

    report.push(Check::exactly(
        "dirac.mass_shell_deviation",
        dirac_mass_shell_deviation(m, grid, &algebra)?,
        0.0,
    ));

    let h = dirac_hamiltonian(m, grid, &algebra)?;
    let t_closed = t_dirac(m, grid, &algebra)?;
    report.push(Check::at_most(
        "dirac.hermiticity_defect",
        hermiticity_defect(&t_closed.operator),
        1e-12,
    ));

    let spinors = spinor_suite(grid, 4)?;
    let flats: Vec<Vec<C64>> = spinors.iter().map(|s| s.to_flat()).collect();
    let t_gen = t_relativistic_general(&h, grid)?;
    report.push(Check::at_most(
        "dirac.general_vs_closed_form_action",
        action_diff_flat(&t_gen, &t_closed.operator, &flats),
        1e-6,
    ));

    let worst_conj = spinors
        .iter()
        .map(|s| conjugacy_residual_spinor(&h, &t_closed, s, 0))
        .fold(0.0, f64::max);
    report.push(Check::at_most(
        "dirac.conjugation_residual",
        worst_conj,
        1e-6,
    ));

    // tau = -T_non entrywise, and the closed form uses it.
    let tau = proper_time(m, grid)?;
    let t_non = t_free_nonrel(m, grid)?;
    report.push(Check::exactly(
        "dirac.proper_time_negation",
        entrywise_diff(&tau.operator, &t_non.operator.scale(C64::new(-1.0, 0.0))),
        0.0,
    ));
    Ok(())
}

pub(super) fn drift_law(cfg: &ExperimentConfig, report: &mut ExperimentReport) -> Result<()> {
    let grid = standard_momentum_grid(cfg.get_usize("n", 2)?, cfg.get_positive("p_max")?)?;
    let m = cfg.get_positive("m")?;
    let steps = cfg.get_usize("time_steps", 2)?;
    let t_max = cfg.get_positive("t_max")?;
    let times: Vec<f64> = (0..steps)
        .map(|k| t_max * k as f64 / (steps - 1) as f64)
        .collect();

    // Free T1 under the free Hamiltonian: slope -1.
    let h = free_hamiltonian(m, grid)?;
    let x = position_in_momentum_rep(grid)?;
    let t1 = t1_from_dynamical(&x, &h)?;
    let psi = packet(cfg, grid)?;
    let series = expectation_series(&t1.operator, &psi, &h, &times)?;
    report.push(Check::at_most(
        "drift.t1_slope_error",
        (series.fitted_slope + 1.0).abs(),
        1e-3,
    ));
    report.push(Check::at_most(
        "drift.t1_fit_residual",
        series.fit_residual,
        1e-3,
    ));
    report.push(Check::at_most(
        "drift.t1_max_imag",
        series.max_abs_imag,
        1e-9,
    ));

    // Half-line restriction under H(0): the opposite sign convention, slope +1.
    let pair = EnergyLatticePair::new(cfg.get_usize("levels", 2)?, cfg.get_positive("delta_e")?)?;
    let t_restricted = restricted_generator(&pair)?;
    let h0 = hamiltonian_h0(pair.half())?;
    let psi_e = energy_gaussian(pair.half(), 0.5 * pair.half().span(), 25.0 * pair.delta_e())?;
    let series = expectation_series(&t_restricted.operator, &psi_e, &h0, &times)?;
    report.push(Check::at_most(
        "drift.restriction_slope_error",
        (series.fitted_slope - 1.0).abs(),
        1e-3,
    ));
    report.push(Check::at_most(
        "drift.restriction_max_imag",
        series.max_abs_imag,
        1e-9,
    ));
    Ok(())
}

pub(super) fn shift_dichotomy(cfg: &ExperimentConfig, report: &mut ExperimentReport) -> Result<()> {
    let levels = cfg.get_usize("levels", 2)?;
    let de = cfg.get_positive("delta_e")?;
    let e_max = cfg.get_usize("e_max", 0)?;
    let j_max = cfg.get_i64("j_max")?.unsigned_abs() as i64;
    if e_max + j_max as usize > levels {
        return Err(Error::Config(format!(
            "sweep would leave the lattice: e_max + j_max = {} > levels = {levels}",
            e_max + j_max as usize
        )));
    }
    let pair = EnergyLatticePair::new(levels, de)?;

    let mut output_mismatches = 0usize;
    let mut defect_bit_mismatches = 0usize;
    let mut isometry_violations = 0usize;
    let mut accounting_error = 0.0f64;
    for e_idx in 0..=e_max {
        let basis = StateVector::basis(pair.half(), e_idx)?;
        for j in -j_max..=j_max {
            let (out, rep) = restricted_shift(&basis, j)?;
            let target = e_idx as i64 + j;
            let expected = if target >= 0 {
                StateVector::basis(pair.half(), target as usize)?
            } else {
                StateVector::zeros(pair.half())
            };
            if out.amplitudes() != expected.amplitudes() {
                output_mismatches += 1;
            }
            let expected_defect = if target >= 0 {
                0.0
            } else {
                basis.mass_on(0..j.unsigned_abs() as usize)
            };
            if rep.defect.to_bits() != expected_defect.to_bits() {
                defect_bit_mismatches += 1;
            }
            if j >= 0 && rep.output_norm.to_bits() != rep.input_norm.to_bits() {
                isometry_violations += 1;
            }
            accounting_error = accounting_error.max(
                (rep.input_norm * rep.input_norm - rep.output_norm * rep.output_norm - rep.defect)
                    .abs(),
            );
        }
    }
    report.push(Check::exactly(
        "shift.output_mismatches",
        output_mismatches as f64,
        0.0,
    ));
    report.push(Check::exactly(
        "shift.defect_bit_mismatches",
        defect_bit_mismatches as f64,
        0.0,
    ));
    report.push(Check::exactly(
        "shift.isometry_violations",
        isometry_violations as f64,
        0.0,
    ));
    report.push(Check::at_most(
        "shift.norm_accounting_error",
        accounting_error,
        1e-14,
    ));

    // Two-bin state (0.6, 0.8, 0, ...): shifting down by one drops exactly
    // the lowest-bin mass 0.36 dE.
    let mut two_bin = StateVector::zeros(pair.half());
    two_bin.amplitudes_mut()[0] = C64::new(0.6, 0.0);
    two_bin.amplitudes_mut()[1] = C64::new(0.8, 0.0);
    let (out, rep) = restricted_shift(&two_bin, -1)?;
    let expected_defect = 0.6f64 * 0.6f64 * de;
    report.push(Check::exactly(
        "shift.two_bin_defect_error",
        (rep.defect - expected_defect).abs(),
        0.0,
    ));
    report.push(Check::exactly(
        "shift.two_bin_survivor_error",
        (out.amplitudes()[0] - C64::new(0.8, 0.0)).norm(),
        0.0,
    ));
    Ok(())
}

pub(super) fn transition_matrix(
    cfg: &ExperimentConfig,
    report: &mut ExperimentReport,
) -> Result<()> {
    let levels = cfg.get_usize("levels", 2)?;
    let de = cfg.get_positive("delta_e")?;
    let pair = EnergyLatticePair::new(levels, de)?;
    let e_idx = cfg.get_usize("e_idx", 0)?;
    let j = cfg.get_i64("j")?;
    let e_max = cfg.get_usize("e_max", 0)?;
    let j_max = cfg.get_i64("j_max")?.unsigned_abs() as i64;
    if e_max + j_max as usize > levels {
        return Err(Error::Config(format!(
            "sweep would leave the lattice: e_max + j_max = {} > levels = {levels}",
            e_max + j_max as usize
        )));
    }

    // Highlighted amplitude row.
    let row = transition_amplitude(e_idx, j, &pair)?;
    let target = e_idx as i64 + j;
    let highlight_ok = if target < 0 {
        row.iter().all(|z| *z == C64::default())
    } else {
        row.iter().enumerate().all(|(k, z)| {
            if k as i64 == target {
                *z == C64::new(1.0, 0.0)
            } else {
                *z == C64::default()
            }
        })
    };
    report.push(Check::exactly(
        "transition.highlight_ok",
        if highlight_ok { 1.0 } else { 0.0 },
        1.0,
    ));

    // Exhaustive sweep: every row is exactly a Kronecker delta or exactly
    // zero, and the classification matches.
    let mut dichotomy_violations = 0usize;
    let mut probability_violations = 0usize;
    for e in 0..=e_max {
        for jj in -j_max..=j_max {
            let row = transition_amplitude(e, jj, &pair)?;
            let class = classify_state(e, jj, &pair)?;
            let total: f64 = row.iter().map(|z| z.norm_sqr()).sum();
            let expected_total = match class {
                StateClass::Physical => 1.0,
                StateClass::Unphysical => 0.0,
            };
            if total != expected_total {
                probability_violations += 1;
            }
            let tgt = e as i64 + jj;
            let exact = row.iter().enumerate().all(|(k, z)| {
                if tgt >= 0 && k as i64 == tgt {
                    *z == C64::new(1.0, 0.0)
                } else {
                    *z == C64::default()
                }
            });
            if !exact {
                dichotomy_violations += 1;
            }
        }
    }
    report.push(Check::exactly(
        "transition.dichotomy_violations",
        dichotomy_violations as f64,
        0.0,
    ));
    report.push(Check::exactly(
        "transition.probability_violations",
        probability_violations as f64,
        0.0,
    ));
    Ok(())
}

pub(super) fn classical_compare(
    cfg: &ExperimentConfig,
    report: &mut ExperimentReport,
) -> Result<()> {
    let grid = standard_momentum_grid(cfg.get_usize("n", 2)?, cfg.get_positive("p_max")?)?;
    let m = cfg.get_positive("m")?;
    let p0 = cfg.get("p0");
    let sigma_p = cfg.get_positive("sigma_p")?;
    let x0 = cfg.get("x0");
    let samples = cfg.get_usize("samples", 1)?;

    let psi = gaussian_state(grid, p0, sigma_p, x0)?;
    let h = free_hamiltonian(m, grid)?;
    let x = position_in_momentum_rep(grid)?;
    let t1 = t1_from_dynamical(&x, &h)?;
    let t1_expect = t1.operator.expectation(&psi)?;
    report.push(Check::at_most(
        "classical.t1_expectation_imag",
        t1_expect.im.abs(),
        1e-9,
    ));

    let t_non = t_free_nonrel(m, grid)?;
    let non_expect = t_non.operator.expectation(&psi)?;
    report.push(Check::at_most(
        "classical.t1_vs_closed_form",
        (t1_expect.re - non_expect.re).abs(),
        1e-6,
    ));

    let sigma_x = 1.0 / (2.0 * sigma_p);
    let ensemble = ClassicalEnsemble::from_gaussian_marginals(
        samples,
        m,
        x0,
        sigma_x,
        p0,
        sigma_p,
        report.seed,
    )?;
    let (mc_mean, mc_stderr) = classical_arrival_oracle(&ensemble)?;
    report.push(Check::at_most("classical.mc_stderr", mc_stderr, 0.1));
    report.push(Check::at_most(
        "classical.quantum_minus_classical",
        (t1_expect.re - mc_mean).abs(),
        3.0 * (mc_stderr + 0.03),
    ));
    Ok(())
}
