//! The Dirac arrival-time operator in 1+1 dimensions.
//!
//! With H = alpha1 p + beta m (alpha1 = sigma_x, beta = sigma_z), the general
//! symmetrized arrival operator collapses to the closed form
//! `T = -alpha1 x - beta tau`, where tau is the proper-time operator. The
//! Clifford algebra makes H^2 = (p^2 + m^2) exactly, at the matrix level.
//!
//! # Running
//! ```bash
//! cargo run --example dirac_arrival
//! ```

use chronos::experiments::{spinor_suite, standard_momentum_grid};
use chronos::operators::hermiticity_defect;
use chronos::time_ops::{
    action_diff_flat, conjugacy_residual_spinor, dirac_hamiltonian, dirac_mass_shell_deviation,
    t_dirac, t_relativistic_general, DiracAlgebra,
};
use num_complex::Complex64 as C64;

fn main() {
    let grid = standard_momentum_grid(512, 4.0).unwrap();
    let m = 1.0;
    let algebra = DiracAlgebra::standard();
    println!(
        "Clifford relations (alpha1 = sigma_x, beta = sigma_z): worst defect {:.1e}",
        algebra.max_relation_defect()
    );

    println!(
        "mass shell: max |H^2 - (p^2 + m^2) I| = {:.1e}",
        dirac_mass_shell_deviation(m, grid, &algebra).unwrap()
    );

    let h = dirac_hamiltonian(m, grid, &algebra).unwrap();
    let t_closed = t_dirac(m, grid, &algebra).unwrap();
    println!(
        "closed form T = -alpha1 x - beta tau: hermiticity defect {:.3e}",
        hermiticity_defect(&t_closed.operator)
    );

    println!("\nassembling the general symmetrized operator (1024 x 1024)...");
    let t_gen = t_relativistic_general(&h, grid).unwrap();

    let spinors = spinor_suite(grid, 4).unwrap();
    let flats: Vec<Vec<C64>> = spinors.iter().map(|s| s.to_flat()).collect();
    println!(
        "general vs closed form, in action on 4 interior spinors: {:.3e}",
        action_diff_flat(&t_gen, &t_closed.operator, &flats)
    );

    let worst = spinors
        .iter()
        .map(|s| conjugacy_residual_spinor(&h, &t_closed, s, 0))
        .fold(0.0f64, f64::max);
    println!("conjugation |([H, T] - i) psi| / |psi|: worst {worst:.3e}");

    // A different representation of the algebra gives the same invariants.
    let swapped = DiracAlgebra::new(algebra.beta, algebra.alpha1).unwrap();
    println!(
        "\nswapped representation (alpha1 = sigma_z, beta = sigma_x): algebra defect {:.1e}, \
         mass shell {:.1e}",
        swapped.max_relation_defect(),
        dirac_mass_shell_deviation(m, grid, &swapped).unwrap()
    );
}
