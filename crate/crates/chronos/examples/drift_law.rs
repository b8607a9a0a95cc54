//! The drift law: a canonical conjugate of H advances linearly in time.
//!
//! `d<T>/dt = i <[H, T]>`, so the arrival-time family ([H, T] = +i) drifts
//! with slope -1 while the half-line restriction of the energy-shift
//! generator ([H(0), T] = -i) drifts with slope +1. Both slopes are read off
//! evolved expectation series.
//!
//! # Running
//! ```bash
//! cargo run --example drift_law
//! ```

use chronos::dynamics::expectation_series;
use chronos::energy_shift::{
    energy_gaussian, hamiltonian_h0, restricted_generator, EnergyLatticePair,
};
use chronos::experiments::standard_momentum_grid;
use chronos::lattice::gaussian_state;
use chronos::time_ops::{free_hamiltonian, position_in_momentum_rep, t1_from_dynamical};

fn main() {
    let times: Vec<f64> = (0..21).map(|k| 0.1 * k as f64).collect();

    // Free arrival time: slope -1.
    let grid = standard_momentum_grid(512, 4.0).unwrap();
    let h = free_hamiltonian(1.0, grid).unwrap();
    let x = position_in_momentum_rep(grid).unwrap();
    let t1 = t1_from_dynamical(&x, &h).unwrap();
    let psi = gaussian_state(grid, 2.0, 0.05, -10.0).unwrap();
    let series = expectation_series(&t1.operator, &psi, &h, &times).unwrap();
    println!("free particle, <T1>(t) over t in [0, 2]:");
    for k in [0, 5, 10, 15, 20] {
        println!(
            "  t = {:>4.1}: <T1> = {:+.6}",
            series.times[k], series.values[k]
        );
    }
    println!(
        "  fitted slope {:+.9} (rms residual {:.1e}, max imag {:.1e})",
        series.fitted_slope, series.fit_residual, series.max_abs_imag
    );

    // Half-line restriction: slope +1 under H(0).
    let pair = EnergyLatticePair::new(1024, 1.0 / 64.0).unwrap();
    let t_restricted = restricted_generator(&pair).unwrap();
    let h0 = hamiltonian_h0(pair.half()).unwrap();
    let psi_e =
        energy_gaussian(pair.half(), 0.5 * pair.half().span(), 25.0 * pair.delta_e()).unwrap();
    let series = expectation_series(&t_restricted.operator, &psi_e, &h0, &times).unwrap();
    println!("\nhalf-line restriction, <T>(t) under H(0):");
    for k in [0, 10, 20] {
        println!(
            "  t = {:>4.1}: <T> = {:+.6}",
            series.times[k], series.values[k]
        );
    }
    println!(
        "  fitted slope {:+.9} (opposite sign convention, as promised: [H(0), T] = -i)",
        series.fitted_slope
    );

    // Energy is conserved along the way.
    let conserved = expectation_series(&h, &psi, &h, &times).unwrap();
    println!(
        "\nenergy series slope under its own flow: {:+.2e}",
        conserved.fitted_slope
    );
}
