//! The Klein-Gordon arrival-time operator across representations.
//!
//! In momentum variables the operator is
//! `T = -i [ (E/p) d/dp - m^2/(2 E (E^2 - m^2)) ]`; after the measure change
//! to the energy representation it becomes plain `-i d/dE`. This example
//! verifies the conjugation numerically and shows the correction term at a
//! reference point.
//!
//! # Running
//! ```bash
//! cargo run --example klein_gordon_chain
//! ```

use chronos::experiments::standard_momentum_grid;
use chronos::lattice::{gaussian_state, momentum_to_energy_onto, Grid, Representation};
use chronos::time_ops::{
    action_diff_flat, conjugacy_residual, kg_correction, kg_hamiltonian, t_kg_energy_rep,
    t_kg_momentum, t_relativistic_general,
};

fn main() {
    let m = 1.0;
    let grid = standard_momentum_grid(1024, 4.0).unwrap();
    let t_p = t_kg_momentum(m, grid).unwrap();
    let h = kg_hamiltonian(m, grid).unwrap();

    println!("correction term -m^2/(2 E (E^2 - m^2)):");
    for p in [0.5, 1.0, 2.0, 3.0] {
        println!("  p = {p}: {:+.6}", kg_correction(m, p));
    }
    println!(
        "  (at p = 1, m = 1 this is -1/(2 sqrt 2) = {:.6})",
        -0.25f64 * 2.0f64.sqrt()
    );

    // Conjugation [H, T] = +i in the momentum representation.
    let psi = gaussian_state(grid, 2.0, 0.15, -1.0).unwrap();
    println!(
        "\nmomentum representation: |([H, T] - i) psi| / |psi| = {:.3e}",
        conjugacy_residual(&h, &t_p, &psi, 0)
    );

    // The general symmetrized construction agrees with the chain-rule form.
    let t_gen = t_relativistic_general(&h, grid).unwrap();
    println!(
        "general symmetrization vs chain rule, in action: {:.3e}",
        action_diff_flat(&t_gen, &t_p.operator, &[psi.amplitudes().to_vec()])
    );

    // Conjugate by the measure map and compare with -i d/dE.
    let de = 0.0045;
    let p_top = grid.point(grid.len() - 1);
    let e_top = (p_top * p_top + m * m).sqrt() + 8.0 * de;
    let egrid = Grid::new(
        (e_top / de).ceil() as usize + 1,
        0.0,
        de,
        Representation::EnergyHalfLine,
    )
    .unwrap();
    let t_e = t_kg_energy_rep(egrid).unwrap();

    let phi = momentum_to_energy_onto(&psi, m, &egrid).unwrap();
    let t_psi = t_p.operator.apply(&psi).unwrap();
    let lhs = momentum_to_energy_onto(&t_psi, m, &egrid).unwrap();
    let rhs = t_e.operator.apply(&phi).unwrap();
    let n_e = egrid.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 2..n_e - 2 {
        num += (lhs.amplitudes()[k] - rhs.amplitudes()[k]).norm_sqr();
        den += rhs.amplitudes()[k].norm_sqr();
    }
    println!(
        "\nenergy representation ({} points, dE = {de}):",
        egrid.len()
    );
    println!(
        "  |map(T psi) - (-i d/dE) map(psi)| / |(-i d/dE) map(psi)| = {:.3e}",
        num.sqrt() / den.sqrt()
    );

    // In the energy representation the operator is a bare derivative.
    let h_e = chronos::energy_shift::hamiltonian_h0(egrid).unwrap();
    let psi_e =
        chronos::energy_shift::energy_gaussian(egrid, 0.55 * egrid.span(), 30.0 * de).unwrap();
    println!(
        "  [H, -i d/dE] conjugation residual there: {:.3e}",
        conjugacy_residual(&h_e, &t_e, &psi_e, 2)
    );
}
