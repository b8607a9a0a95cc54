//! Unitary time evolution, expectation time series, and the classical
//! Monte Carlo arrival-time oracle.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::lattice::StateVector;
use crate::linalg;
use crate::operators::{hermiticity_defect, LinearOperator};
use crate::rng;

const HERMITICITY_LIMIT: f64 = 1e-10;

enum Backend {
    /// H is diagonal: evolution is a pure phase per lattice point.
    Diagonal(Vec<f64>),
    /// Dense eigendecomposition `H = U diag(E) U^dagger`.
    Eigen {
        energies: Vec<f64>,
        basis: ndarray::Array2<C64>,
    },
}

/// Reusable propagator `exp(-i H t)` for a fixed self-adjoint H.
pub struct Propagator {
    backend: Backend,
    dim: usize,
}

impl Propagator {
    pub fn new(h: &LinearOperator) -> Result<Self> {
        let defect = hermiticity_defect(h);
        if defect > HERMITICITY_LIMIT {
            return Err(Error::NonHermitian {
                defect,
                limit: HERMITICITY_LIMIT,
            });
        }
        let dim = h.dim();
        let backend = if h.is_diagonal() {
            Backend::Diagonal(h.diagonal().iter().map(|z| z.re).collect())
        } else {
            let (energies, basis) = linalg::hermitian_eigen(h.matrix())?;
            Backend::Eigen { energies, basis }
        };
        Ok(Propagator { backend, dim })
    }

    pub fn evolve_flat(&self, flat: &[C64], t: f64) -> Vec<C64> {
        assert_eq!(flat.len(), self.dim);
        match &self.backend {
            Backend::Diagonal(energies) => flat
                .iter()
                .zip(energies)
                .map(|(z, e)| z * C64::from_polar(1.0, -e * t))
                .collect(),
            Backend::Eigen { energies, basis } => {
                let n = self.dim;
                // a = U^dagger psi
                let mut coeffs = vec![C64::default(); n];
                for k in 0..n {
                    let mut acc = C64::default();
                    for i in 0..n {
                        acc += basis[[i, k]].conj() * flat[i];
                    }
                    coeffs[k] = acc * C64::from_polar(1.0, -energies[k] * t);
                }
                let mut out = vec![C64::default(); n];
                for i in 0..n {
                    let mut acc = C64::default();
                    for k in 0..n {
                        acc += basis[[i, k]] * coeffs[k];
                    }
                    out[i] = acc;
                }
                out
            }
        }
    }

    pub fn evolve(&self, state: &StateVector, t: f64) -> Result<StateVector> {
        if state.grid().len() != self.dim {
            return Err(Error::GridMismatch("propagator dimension mismatch".into()));
        }
        StateVector::new(*state.grid(), self.evolve_flat(state.amplitudes(), t))
    }
}

/// One-shot evolution `exp(-i H t) psi`.
pub fn evolve(state: &StateVector, h: &LinearOperator, t: f64) -> Result<StateVector> {
    Propagator::new(h)?.evolve(state, t)
}

/// Sampled expectation values of an observable along a trajectory, with a
/// least-squares line through them.
#[derive(Debug, Clone)]
pub struct ExpectationSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub fitted_slope: f64,
    pub fit_residual: f64,
    /// Largest imaginary part encountered in the raw expectations; should be
    /// at round-off level for self-adjoint observables.
    pub max_abs_imag: f64,
}

fn fit_line(times: &[f64], values: &[f64]) -> (f64, f64) {
    let n = times.len() as f64;
    let tbar = times.iter().sum::<f64>() / n;
    let vbar = values.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, v) in times.iter().zip(values) {
        num += (t - tbar) * (v - vbar);
        den += (t - tbar) * (t - tbar);
    }
    let slope = if den > 0.0 { num / den } else { 0.0 };
    let intercept = vbar - slope * tbar;
    let rms = (times
        .iter()
        .zip(values)
        .map(|(t, v)| {
            let r = v - (intercept + slope * t);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    (slope, rms)
}

/// Evolves `state0` under H and records `<op>` at each time.
///
/// The observable is not gated on a global hermiticity defect: boundary rows
/// of restricted operators are allowed, and `max_abs_imag` certifies after
/// the fact that the observable acted self-adjointly on the trajectory.
pub fn expectation_series(
    op: &LinearOperator,
    state0: &StateVector,
    h: &LinearOperator,
    times: &[f64],
) -> Result<ExpectationSeries> {
    if times.is_empty() {
        return Err(Error::Config(
            "expectation_series needs at least one time".into(),
        ));
    }
    let prop = Propagator::new(h)?;
    let mut values = Vec::with_capacity(times.len());
    let mut max_abs_imag = 0.0f64;
    for &t in times {
        let psi_t = prop.evolve(state0, t)?;
        let v = op.expectation(&psi_t)?;
        max_abs_imag = max_abs_imag.max(v.im.abs());
        values.push(v.re);
    }
    let (fitted_slope, fit_residual) = fit_line(times, &values);
    Ok(ExpectationSeries {
        times: times.to_vec(),
        values,
        fitted_slope,
        fit_residual,
        max_abs_imag,
    })
}

/// Classical phase-space ensemble with deterministic, counter-based samples.
#[derive(Debug, Clone)]
pub struct ClassicalEnsemble {
    samples: Vec<(f64, f64)>,
    m: f64,
    seed: u64,
}

impl ClassicalEnsemble {
    /// Draws x and p independently from the packet's Gaussian marginals
    /// `x ~ N(x0, sigma_x^2)`, `p ~ N(p0, sigma_p^2)`.
    pub fn from_gaussian_marginals(
        n_samples: usize,
        m: f64,
        x0: f64,
        sigma_x: f64,
        p0: f64,
        sigma_p: f64,
        seed: u64,
    ) -> Result<Self> {
        if n_samples == 0 {
            return Err(Error::Config("ensemble needs at least one sample".into()));
        }
        if !(m > 0.0) || !(sigma_x >= 0.0) || !(sigma_p >= 0.0) {
            return Err(Error::Config("ensemble parameters out of range".into()));
        }
        let samples = (0..n_samples)
            .map(|i| {
                let (zx, zp) = rng::normal_pair(seed, 21, i as u64);
                (x0 + sigma_x * zx, p0 + sigma_p * zp)
            })
            .collect();
        Ok(ClassicalEnsemble { samples, m, seed })
    }

    pub fn from_samples(samples: Vec<(f64, f64)>, m: f64, seed: u64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Config("ensemble needs at least one sample".into()));
        }
        Ok(ClassicalEnsemble { samples, m, seed })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn mass(&self) -> f64 {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The same ensemble with x mirrored; arrival times negate.
    pub fn mirrored(&self) -> Self {
        ClassicalEnsemble {
            samples: self.samples.iter().map(|&(x, p)| (-x, p)).collect(),
            m: self.m,
            seed: self.seed,
        }
    }
}

/// Sample mean and standard error of the classical arrival time
/// `t = -m x / p` over the ensemble.
pub fn classical_arrival_oracle(ensemble: &ClassicalEnsemble) -> Result<(f64, f64)> {
    let n = ensemble.samples.len();
    let mut mean = 0.0;
    for (idx, &(x, p)) in ensemble.samples.iter().enumerate() {
        if p == 0.0 {
            return Err(Error::ZeroMomentumSample { index: idx });
        }
        mean += -ensemble.m * x / p;
    }
    mean /= n as f64;
    if n == 1 {
        return Ok((mean, 0.0));
    }
    let mut ssq = 0.0;
    for &(x, p) in &ensemble.samples {
        let d = -ensemble.m * x / p - mean;
        ssq += d * d;
    }
    let stderr = (ssq / ((n - 1) as f64)).sqrt() / (n as f64).sqrt();
    Ok((mean, stderr))
}
