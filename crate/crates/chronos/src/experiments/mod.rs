//! Named, configurable experiments exercising every module, with
//! machine-readable reports.
//!
//! Configuration is a flat key-value map: defaults per experiment, optionally
//! overridden by a config file (`key = value` lines) and by `--key value`
//! command-line pairs. Unknown keys are rejected. The seed comes from the
//! config, the `CHRONOS_SEED` environment variable, or `--seed`, in
//! increasing order of precedence.

mod report;
mod runs;

pub use report::{emit, fmt_float, render, Check, ExperimentReport, ReportFormat};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::{Grid, Representation, SpinorState, StateVector};
use num_complex::Complex64 as C64;

pub const DEFAULT_SEED: u64 = 20070;

/// The nine named experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Commutators,
    MtBound,
    T2LinearPotential,
    KgEquivalence,
    DiracReduction,
    DriftLaw,
    ShiftDichotomy,
    TransitionMatrix,
    ClassicalCompare,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 9] = [
        ExperimentKind::Commutators,
        ExperimentKind::MtBound,
        ExperimentKind::T2LinearPotential,
        ExperimentKind::KgEquivalence,
        ExperimentKind::DiracReduction,
        ExperimentKind::DriftLaw,
        ExperimentKind::ShiftDichotomy,
        ExperimentKind::TransitionMatrix,
        ExperimentKind::ClassicalCompare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Commutators => "commutators",
            ExperimentKind::MtBound => "mt-bound",
            ExperimentKind::T2LinearPotential => "t2-linear-potential",
            ExperimentKind::KgEquivalence => "kg-equivalence",
            ExperimentKind::DiracReduction => "dirac-reduction",
            ExperimentKind::DriftLaw => "drift-law",
            ExperimentKind::ShiftDichotomy => "shift-dichotomy",
            ExperimentKind::TransitionMatrix => "transition-matrix",
            ExperimentKind::ClassicalCompare => "classical-compare",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.name() == name)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown experiment '{name}'; run `chronos list` for the catalog"
                ))
            })
    }

    pub fn description(self) -> &'static str {
        match self {
            ExperimentKind::Commutators => {
                "canonical commutators on momentum and energy grids, plus hermiticity invariants"
            }
            ExperimentKind::MtBound => {
                "Mandelstam-Tamm bound dT2 dH >= 1/2 over seeded random states"
            }
            ExperimentKind::T2LinearPotential => {
                "self-adjoint T2 = p/(mg) for the linear potential, drift and conjugation"
            }
            ExperimentKind::KgEquivalence => {
                "Klein-Gordon operator: momentum form vs -i d/dE after the measure change"
            }
            ExperimentKind::DiracReduction => {
                "Dirac arrival operator: closed form vs general symmetrization, mass shell"
            }
            ExperimentKind::DriftLaw => {
                "d<T>/dt = -sign under its own Hamiltonian, free and half-line cases"
            }
            ExperimentKind::ShiftDichotomy => {
                "bilateral vs unilateral lattice shifts: isometry up, exact bin loss down"
            }
            ExperimentKind::TransitionMatrix => {
                "transition amplitudes: Kronecker delta for physical shifts, zero otherwise"
            }
            ExperimentKind::ClassicalCompare => {
                "quantum <T1> against the classical Monte Carlo arrival-time oracle"
            }
        }
    }

    /// Flat parameter schema: name, default, one-line description.
    pub fn schema(self) -> &'static [(&'static str, f64, &'static str)] {
        match self {
            ExperimentKind::Commutators => &[
                ("n", 512.0, "momentum grid size"),
                ("p_max", 4.0, "upper edge of the momentum window (0, p_max]"),
                ("m", 1.0, "particle mass"),
                ("p0", 2.0, "packet center momentum"),
                ("sigma_p", 0.05, "packet momentum width"),
                ("x0", -10.0, "packet launch position"),
                (
                    "levels",
                    1024.0,
                    "energy lattice M (full line has 2M+1 points)",
                ),
                ("delta_e", 0.015625, "energy lattice spacing"),
            ],
            ExperimentKind::MtBound => &[
                ("n", 512.0, "momentum grid size"),
                ("p_max", 4.0, "upper edge of the momentum window"),
                ("m", 1.0, "particle mass"),
                ("states", 1000.0, "number of seeded random states"),
            ],
            ExperimentKind::T2LinearPotential => &[
                ("n", 512.0, "momentum grid size"),
                ("p_max", 4.0, "upper edge of the momentum window"),
                ("m", 1.0, "particle mass"),
                ("g", 0.5, "uniform force parameter"),
                ("p0", 2.0, "packet center momentum"),
                ("sigma_p", 0.08, "packet momentum width"),
                ("x0", -4.0, "packet launch position"),
            ],
            ExperimentKind::KgEquivalence => &[
                ("n", 1024.0, "momentum grid size"),
                ("p_max", 4.0, "upper edge of the momentum window"),
                ("m", 1.0, "particle mass"),
                ("p0", 2.0, "packet center momentum"),
                ("sigma_p", 0.15, "packet momentum width"),
                ("x0", -1.0, "packet launch position"),
                (
                    "delta_e",
                    0.0045,
                    "target energy-grid spacing for the measure change",
                ),
            ],
            ExperimentKind::DiracReduction => &[
                ("n", 512.0, "momentum grid size"),
                ("p_max", 4.0, "upper edge of the momentum window"),
                ("m", 1.0, "particle mass"),
            ],
            ExperimentKind::DriftLaw => &[
                ("n", 512.0, "momentum grid size"),
                ("p_max", 4.0, "upper edge of the momentum window"),
                ("m", 1.0, "particle mass"),
                ("p0", 2.0, "packet center momentum"),
                ("sigma_p", 0.05, "packet momentum width"),
                ("x0", -10.0, "packet launch position"),
                ("t_max", 2.0, "end of the time window"),
                ("time_steps", 21.0, "number of sample times in [0, t_max]"),
                ("levels", 1024.0, "energy lattice M for the half-line leg"),
                (
                    "delta_e",
                    0.015625,
                    "energy lattice spacing for the half-line leg",
                ),
            ],
            ExperimentKind::ShiftDichotomy => &[
                ("levels", 256.0, "energy lattice M"),
                ("delta_e", 1.0, "energy lattice spacing"),
                ("e_max", 32.0, "sweep upper bound on the level index"),
                ("j_max", 40.0, "sweep bound on the shift |j|"),
            ],
            ExperimentKind::TransitionMatrix => &[
                ("levels", 256.0, "energy lattice M"),
                ("delta_e", 1.0, "energy lattice spacing"),
                ("e_idx", 2.0, "highlighted level index"),
                ("j", -5.0, "highlighted shift"),
                ("e_max", 32.0, "sweep upper bound on the level index"),
                ("j_max", 40.0, "sweep bound on the shift |j|"),
            ],
            ExperimentKind::ClassicalCompare => &[
                ("n", 512.0, "momentum grid size"),
                ("p_max", 4.0, "upper edge of the momentum window"),
                ("m", 1.0, "particle mass"),
                ("p0", 2.0, "packet center momentum"),
                ("sigma_p", 0.05, "packet momentum width"),
                ("x0", -10.0, "packet launch position"),
                ("samples", 1_000_000.0, "Monte Carlo sample count"),
            ],
        }
    }
}

/// A validated experiment configuration: defaults overlaid with explicit
/// key-value settings, plus the seed.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    params: BTreeMap<String, f64>,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        let params = kind
            .schema()
            .iter()
            .map(|(k, v, _)| (k.to_string(), *v))
            .collect();
        ExperimentConfig {
            kind,
            params,
            seed: DEFAULT_SEED,
        }
    }

    /// Sets one parameter; unknown keys are rejected against the schema.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !self.params.contains_key(key) {
            let known: Vec<&str> = self.kind.schema().iter().map(|(k, _, _)| *k).collect();
            return Err(Error::Config(format!(
                "unknown key '{key}' for experiment '{}'; known keys: {}",
                self.kind.name(),
                known.join(", ")
            )));
        }
        if !value.is_finite() {
            return Err(Error::Config(format!(
                "key '{key}' must be finite, got {value}"
            )));
        }
        self.params.insert(key.to_string(), value);
        Ok(())
    }

    pub fn get(&self, key: &str) -> f64 {
        *self
            .params
            .get(key)
            .unwrap_or_else(|| panic!("schema guarantees key '{key}'"))
    }

    /// Integer-valued parameter with range validation.
    pub fn get_usize(&self, key: &str, min: usize) -> Result<usize> {
        let v = self.get(key);
        if v.fract() != 0.0 || v < 0.0 {
            return Err(Error::Config(format!(
                "key '{key}' must be a non-negative integer, got {v}"
            )));
        }
        let u = v as usize;
        if u < min {
            return Err(Error::Config(format!(
                "key '{key}' must be at least {min}, got {u}"
            )));
        }
        Ok(u)
    }

    pub fn get_i64(&self, key: &str) -> Result<i64> {
        let v = self.get(key);
        if v.fract() != 0.0 {
            return Err(Error::Config(format!(
                "key '{key}' must be an integer, got {v}"
            )));
        }
        Ok(v as i64)
    }

    pub fn get_positive(&self, key: &str) -> Result<f64> {
        let v = self.get(key);
        if !(v > 0.0) {
            return Err(Error::Config(format!(
                "key '{key}' must be positive, got {v}"
            )));
        }
        Ok(v)
    }

    pub fn params(&self) -> Vec<(String, f64)> {
        self.params.iter().map(|(k, v)| (k.clone(), *v)).collect()
    }
}

/// Parses a flat `key = value` config file. `experiment` and `seed` are
/// allowed alongside numeric parameters; unknown keys are rejected later,
/// against the chosen experiment's schema.
pub fn parse_config_file(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "config line {} is not 'key = value': {raw:?}",
                lineno + 1
            )));
        };
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

/// The standard momentum window `(0, p_max]` with `n` points.
pub fn standard_momentum_grid(n: usize, p_max: f64) -> Result<Grid> {
    let dp = p_max / n as f64;
    Grid::new(n, 0.5 * dp, dp, Representation::Momentum)
}

/// The fixed interior Gaussian suite on a momentum grid: `count` packets with
/// staggered centers, widths, and launch positions, all comfortably inside
/// the interior window.
pub fn interior_suite(grid: Grid, count: usize) -> Result<Vec<StateVector>> {
    let span = grid.span();
    let lo = grid.point(0);
    (0..count)
        .map(|i| {
            let center = lo + span * (0.30 + 0.045 * (i % 10) as f64);
            let sigma = span * (0.012 + 0.004 * (i % 3) as f64);
            let x0 = 2.0 * (i as f64 - (count as f64 - 1.0) / 2.0);
            crate::lattice::gaussian_state(grid, center, sigma, x0)
        })
        .collect()
}

/// Interior Gaussian suite on an energy grid (widths tied to the lattice
/// spacing so fourth-order stencils stay in their asymptotic regime).
pub fn energy_suite(grid: Grid, count: usize) -> Result<Vec<StateVector>> {
    let span = grid.span();
    let lo = grid.point(0);
    let de = grid.step();
    (0..count)
        .map(|i| {
            let center = lo + span * (0.35 + 0.03 * (i % 10) as f64);
            let sigma = (30.0 + 2.0 * (i % 3) as f64) * de;
            let omega = 0.1 * (i as f64 - (count as f64 - 1.0) / 2.0);
            StateVector::from_fn(grid, |e| {
                C64::from_polar(
                    (-(e - center) * (e - center) / (4.0 * sigma * sigma)).exp(),
                    omega * e,
                )
            })
            .normalized()
        })
        .collect()
}

/// Interior spinor suite: pairs of staggered scalar suite members.
pub fn spinor_suite(grid: Grid, count: usize) -> Result<Vec<SpinorState>> {
    let scalars = interior_suite(grid, count + 3)?;
    (0..count)
        .map(|i| {
            let mut s = SpinorState::from_components(scalars[i].clone(), scalars[i + 3].clone())?;
            s.normalize()?;
            Ok(s)
        })
        .collect()
}

/// Runs the experiment and assembles its report.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let start = std::time::Instant::now();
    let mut report = ExperimentReport::new(config.kind.name(), config.params(), config.seed);
    match config.kind {
        ExperimentKind::Commutators => runs::commutators(config, &mut report)?,
        ExperimentKind::MtBound => runs::mt_bound(config, &mut report)?,
        ExperimentKind::T2LinearPotential => runs::t2_linear_potential(config, &mut report)?,
        ExperimentKind::KgEquivalence => runs::kg_equivalence(config, &mut report)?,
        ExperimentKind::DiracReduction => runs::dirac_reduction(config, &mut report)?,
        ExperimentKind::DriftLaw => runs::drift_law(config, &mut report)?,
        ExperimentKind::ShiftDichotomy => runs::shift_dichotomy(config, &mut report)?,
        ExperimentKind::TransitionMatrix => runs::transition_matrix(config, &mut report)?,
        ExperimentKind::ClassicalCompare => runs::classical_compare(config, &mut report)?,
    }
    report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}
