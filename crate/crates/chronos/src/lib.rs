//! Numerical laboratory for quantum time operators on 1-D lattices.
//!
//! The crate builds dense-matrix realizations of three families of time
//! operators and verifies their algebra by direct computation:
//!
//! * operators derived from a dynamical variable (a non-self-adjoint
//!   canonical conjugate of H, and a self-adjoint Mandelstam-Tamm companion
//!   whose conjugacy holds in quantum-mechanical average),
//! * quantized classical arrival times: nonrelativistic, Klein-Gordon in
//!   momentum and energy representations, Dirac in 1+1 dimensions, and the
//!   proper-time operator,
//! * the energy-shift generator on a full-line energy lattice and its
//!   restriction to the physical half line, whose shift dynamics exhibit the
//!   bilateral/unilateral dichotomy and the physical/unphysical transition
//!   selection rule.
//!
//! Everything is desk scale: dense complex matrices up to a few thousand
//! rows, natural units (hbar = c = 1), exact lattice translations where the
//! structure demands exactness, and spectral or fourth-order stencils where a
//! derivative is needed.
//!
//! See the `examples/` directory for one runnable program per capability and
//! the `chronos` binary for the experiment harness
//! (`chronos run --experiment <name> ... --out <path> --format csv|json`).

pub mod dynamics;
pub mod energy_shift;
pub mod error;
pub mod experiments;
pub mod lattice;
pub(crate) mod linalg;
pub mod operators;
pub mod rng;
pub mod time_ops;
pub mod uncertainty;

pub use error::{Error, Result};
pub use lattice::{Grid, Representation, SpinorState, StateVector};
pub use operators::{DerivativeScheme, LinearOperator};

#[cfg(test)]
mod tests {
    // Everything is immutable after construction and freely shareable
    // between threads.
    #[test]
    fn core_values_are_send_and_sync() {
        fn check<T: Send + Sync>() {}
        check::<crate::Grid>();
        check::<crate::StateVector>();
        check::<crate::SpinorState>();
        check::<crate::LinearOperator>();
        check::<crate::time_ops::TimeOperatorBundle>();
        check::<crate::energy_shift::EnergyLatticePair>();
        check::<crate::dynamics::Propagator>();
        check::<crate::dynamics::ClassicalEnsemble>();
        check::<crate::experiments::ExperimentReport>();
    }
}
