//! Grids, states, and the unitary maps between representations.
//!
//! Demonstrates:
//! - Fourier-dual grids with the half-integer momentum offset (no p = 0 point)
//! - exact unitarity of the position <-> momentum change of representation
//! - the relativistic measure change p -> E = sqrt(p^2 + m^2)
//!
//! # Running
//! ```bash
//! cargo run --example representation_maps
//! ```

use chronos::lattice::{
    gaussian_state, momentum_to_energy, momentum_to_position_onto, position_to_momentum, Grid,
    Representation, StateVector,
};
use num_complex::Complex64 as C64;

fn main() {
    // A centered position grid and its Fourier dual.
    let n = 256;
    let dx = 0.25;
    let xg = Grid::new(n, -(n as f64) / 2.0 * dx, dx, Representation::Position).unwrap();
    let pg = xg.fourier_dual().unwrap();
    println!(
        "position grid: {} points, x in [{:.2}, {:.2}]",
        n,
        xg.point(0),
        xg.point(n - 1)
    );
    println!(
        "momentum dual: dp = {:.5}, p in [{:.3}, {:.3}], min |p| = {:.5}",
        pg.step(),
        pg.point(0),
        pg.point(n - 1),
        pg.points().map(f64::abs).fold(f64::INFINITY, f64::min)
    );

    // A point mass at x = 0 spreads evenly over all momenta.
    let spike = StateVector::basis(xg, n / 2).unwrap();
    let flat = position_to_momentum(&spike).unwrap();
    let mags: Vec<f64> = flat.amplitudes().iter().map(|z| z.norm()).collect();
    println!(
        "\npoint mass at x = 0: |amplitude| ranges over [{:.6}, {:.6}] (flat)",
        mags.iter().cloned().fold(f64::INFINITY, f64::min),
        mags.iter().cloned().fold(0.0, f64::max),
    );

    // A Gaussian maps to a Gaussian of reciprocal width, unitarily.
    let sigma_x = 2.0;
    let psi = StateVector::from_fn(xg, |x| {
        C64::new((-x * x / (4.0 * sigma_x * sigma_x)).exp(), 0.0)
    })
    .normalized()
    .unwrap();
    let phi = position_to_momentum(&psi).unwrap();
    let p2: f64 = pg
        .points()
        .zip(phi.amplitudes())
        .map(|(p, z)| p * p * z.norm_sqr())
        .sum::<f64>()
        * pg.step();
    println!("\nGaussian with sigma_x = {sigma_x}:");
    println!("  norm after transform     = {:.15}", phi.norm());
    println!("  measured sigma_p         = {:.9}", p2.sqrt());
    println!("  expected 1/(2 sigma_x)   = {:.9}", 1.0 / (2.0 * sigma_x));

    let back = momentum_to_position_onto(&phi, &xg).unwrap();
    let err = back
        .amplitudes()
        .iter()
        .zip(psi.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!("  round-trip max error     = {err:.3e}");

    // Right-movers map onto the half-line energy axis with the Jacobian
    // factor [E^2/(E^2 - m^2)]^(1/4) keeping probability fixed.
    let n = 1024;
    let dp = 4.0 / n as f64;
    let pg = Grid::new(n, 0.5 * dp, dp, Representation::Momentum).unwrap();
    let packet = gaussian_state(pg, 2.0, 0.1, 0.0).unwrap();
    let m = 1.0;
    let in_energy = momentum_to_energy(&packet, m).unwrap();
    println!("\nmeasure change at m = {m}:");
    println!(
        "  energy grid: {} points, dE = {:.5}",
        in_energy.grid().len(),
        in_energy.grid().step()
    );
    println!("  norm^2 before = {:.12}", packet.norm_sq());
    println!("  norm^2 after  = {:.12}", in_energy.norm_sq());
    let p = 2.0f64;
    let e = (p * p + m * m).sqrt();
    println!(
        "  point factor at p = 2: sqrt(E/p) = {:.9}, [E^2/(E^2-m^2)]^0.25 = {:.9}",
        (e / p).sqrt(),
        (e * e / (e * e - m * m)).powf(0.25)
    );
}
