//! The self-adjoint Mandelstam-Tamm time operator and the time-energy bound.
//!
//! For the linear potential H = p^2/2m + m g q the drift <dp/dt> = -m g is a
//! c-number, so T2 = p/(m g) is self-adjoint and canonically conjugate to H
//! in the full operator sense. For a free particle the same construction with
//! A = x yields dT2 dH >= 1/2 state by state.
//!
//! # Running
//! ```bash
//! cargo run --example mandelstam_tamm
//! ```

use chronos::experiments::standard_momentum_grid;
use chronos::lattice::{gaussian_state, StateVector};
use chronos::operators::{coordinate_operator, hermiticity_defect};
use chronos::rng;
use chronos::time_ops::{
    free_hamiltonian, linear_potential_hamiltonian, position_in_momentum_rep, t2_mandelstam,
};
use chronos::uncertainty::{average_commutator, mt_time_deviation};

fn main() {
    let grid = standard_momentum_grid(512, 4.0).unwrap();
    let m = 1.0;
    let g = 0.5;

    // Linear potential: T2 = p/(m g), conjugation exact in average and in action.
    let h = linear_potential_hamiltonian(m, g, grid).unwrap();
    let a = coordinate_operator(grid).unwrap(); // A = p
    let psi = gaussian_state(grid, 2.0, 0.08, -4.0).unwrap();
    let t2 = t2_mandelstam(&a, &h, &psi).unwrap();
    println!("linear potential (m = {m}, g = {g}):");
    println!(
        "  drift <dp/dt>            = {:.15} (exact -m g = {})",
        t2.drift.unwrap(),
        -m * g
    );
    println!(
        "  hermiticity defect of T2 = {:.3e}",
        hermiticity_defect(&t2.operator)
    );
    let avg = average_commutator(&h, &t2.operator, &psi).unwrap();
    println!(
        "  <[H, T2]>                = {:.12} + {:.12} i (target i)",
        avg.re, avg.im
    );

    // Free particle, A = x: the bound holds for every state.
    let h_free = free_hamiltonian(m, grid).unwrap();
    let x = position_in_momentum_rep(grid).unwrap();
    println!("\nfree particle, A = x, 200 seeded random states:");
    let mut min_bound = f64::INFINITY;
    let mut max_bound = 0.0f64;
    for i in 0..200u64 {
        let raw = rng::complex_normal_vec(7, i, grid.len());
        let state = StateVector::new(grid, raw).unwrap().normalized().unwrap();
        let report = mt_time_deviation(&x, &h_free, &state).unwrap();
        assert!(report.satisfied);
        min_bound = min_bound.min(report.bound_lhs);
        max_bound = max_bound.max(report.bound_lhs);
    }
    println!("  dT2 dH in [{min_bound:.4}, {max_bound:.4}], bound 1/2 never violated");

    // The packet saturates the bound far better than rough random states.
    let report = mt_time_deviation(&x, &h_free, &psi).unwrap();
    println!(
        "\nGaussian packet: dT2 dH = {:.6} (1/2 = 0.5)",
        report.bound_lhs
    );
    println!(
        "  dA = {:.6}, dH = {:.6}, drift = {:.6}",
        report.delta_a, report.delta_h, report.drift
    );
}
