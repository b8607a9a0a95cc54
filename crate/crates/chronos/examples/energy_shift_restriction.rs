//! The energy-shift lattice: bilateral shifts, the half-line restriction,
//! and the physical/unphysical transition dichotomy.
//!
//! On the full energy line the shift V(e) is unitary and H(e) = H(0) + e;
//! restricted to the non-negative half line it becomes a unilateral shift:
//! an isometry upward, an exact-mass loser downward. Transition amplitudes
//! between shifted eigenstates are Kronecker deltas or exactly zero - never
//! anything in between.
//!
//! # Running
//! ```bash
//! cargo run --example energy_shift_restriction
//! ```

use chronos::energy_shift::{
    classify_state, embed, energy_gaussian, hamiltonian_h0, restrict, restricted_generator,
    restricted_shift, transition_amplitude, v_shift_full, EnergyLatticePair, StateClass,
};
use chronos::lattice::StateVector;
use chronos::time_ops::conjugacy_residual;
use num_complex::Complex64 as C64;

fn main() {
    let pair = EnergyLatticePair::new(16, 1.0).unwrap();
    println!(
        "lattice: full line E in [{}, {}], half line E in [0, {}], dE = {}",
        pair.full().point(0),
        pair.full().point(pair.full().len() - 1),
        pair.half().point(pair.half().len() - 1),
        pair.delta_e()
    );

    // Bilateral shift: |E = 2> -> |E = 5> under e = +3, eigenvalue moves along.
    let e2 = StateVector::basis(pair.full(), 16 + 2).unwrap();
    let shifted = v_shift_full(&e2, 3).unwrap();
    let h0 = hamiltonian_h0(pair.full()).unwrap();
    let hpsi = h0.apply(&shifted).unwrap();
    let eigenvalue = shifted.inner(&hpsi).re;
    println!("\nV(+3) moves the E = 2 eigenvector to eigenvalue {eigenvalue}");

    // Unilateral dichotomy on the half line.
    println!("\nrestricted shifts of half-line states:");
    let e0 = StateVector::basis(pair.half(), 0).unwrap();
    let (_, up) = restricted_shift(&e0, 1).unwrap();
    println!("  |0> shifted +1: defect {}", up.defect);
    let (_, down) = restricted_shift(&e0, -1).unwrap();
    println!(
        "  |0> shifted -1: defect {} (the state falls off the half line)",
        down.defect
    );

    let mut two_bin = StateVector::zeros(pair.half());
    two_bin.amplitudes_mut()[0] = C64::new(0.6, 0.0);
    two_bin.amplitudes_mut()[1] = C64::new(0.8, 0.0);
    let (survivor, rep) = restricted_shift(&two_bin, -1).unwrap();
    println!(
        "  (0.6, 0.8, 0, ...) shifted -1: defect {} (= 0.6^2), survivor amplitude {}",
        rep.defect,
        survivor.amplitudes()[0].re
    );

    // The dilation picture: embed, shift bilaterally, restrict.
    let dilated = restrict(&v_shift_full(&embed(&two_bin).unwrap(), -1).unwrap()).unwrap();
    println!(
        "  dilation route agrees bitwise: {}",
        dilated.amplitudes() == survivor.amplitudes()
    );

    // Transition amplitudes: delta or zero.
    println!("\ntransition amplitudes C(E', E = 2, e):");
    for j in [3i64, -1, -5] {
        let row = transition_amplitude(2, j, &pair).unwrap();
        let class = classify_state(2, j, &pair).unwrap();
        let total: f64 = row.iter().map(|z| z.norm_sqr()).sum();
        let peak = row.iter().position(|z| *z != C64::default());
        println!(
            "  e = {j:+}: sum |C|^2 = {total}, {} {}",
            match class {
                StateClass::Physical => "physical,",
                StateClass::Unphysical => "unphysical,",
            },
            match peak {
                Some(k) => format!("delta at E' = {k}"),
                None => "identically zero".to_string(),
            }
        );
    }

    // The restriction is the half-line time operator: [H(0), T] = -i.
    let pair = EnergyLatticePair::new(1024, 1.0 / 64.0).unwrap();
    let bundle = restricted_generator(&pair).unwrap();
    let h0 = hamiltonian_h0(pair.half()).unwrap();
    let psi =
        energy_gaussian(pair.half(), 0.5 * pair.half().span(), 28.0 * pair.delta_e()).unwrap();
    println!(
        "\nrestriction generator on M = 1024: |([H(0), T] + i) psi| / |psi| = {:.3e}",
        conjugacy_residual(&h0, &bundle, &psi, 2)
    );
}
