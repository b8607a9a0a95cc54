use thiserror::Error;

/// Errors raised by grid construction, operator algebra, and experiments.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("state support violates the interior window: outside mass {outside_mass:.3e} exceeds {limit:.1e}")]
    SupportViolation { outside_mass: f64, limit: f64 },

    #[error("non-finite value {value} at grid point {coordinate}")]
    NonFinite { coordinate: f64, value: String },

    #[error("operator is not self-adjoint: hermiticity defect {defect:.3e} exceeds {limit:.1e}")]
    NonHermitian { defect: f64, limit: f64 },

    #[error("grid contains a point within half a step of zero momentum (|p|min = {pmin_abs:.3e})")]
    ZeroMomentumPoint { pmin_abs: f64 },

    #[error("commutator is numerically singular: sigma_min/sigma_max = {ratio:.3e}")]
    SingularCommutator { ratio: f64 },

    #[error(
        "inverse commutator fails to commute with H: residual {residual:.3e} exceeds {limit:.1e}"
    )]
    PreconditionViolation { residual: f64, limit: f64 },

    #[error("drift |<dA/dt>| = {drift_abs:.3e} is below the zero-drift threshold {threshold:.1e}")]
    ZeroDrift { drift_abs: f64, threshold: f64 },

    #[error("drift has a non-negligible imaginary part: {imag:.3e}")]
    ComplexDrift { imag: f64 },

    #[error("state is not normalized: |norm - 1| = {deviation:.3e}")]
    UnnormalizedState { deviation: f64 },

    #[error("shift j = {j} is out of range for a lattice with M = {levels}")]
    ShiftOutOfRange { j: i64, levels: usize },

    #[error(
        "shifted level index {index} lies above the top of the half-line window (M = {levels})"
    )]
    AboveLatticeTop { index: i64, levels: usize },

    #[error("ensemble contains a zero-momentum sample at index {index}")]
    ZeroMomentumSample { index: usize },

    #[error("matrix is singular at pivot {pivot}")]
    SingularMatrix { pivot: usize },

    #[error("eigensolver failed to converge for eigenvalue {index}")]
    EigenNoConvergence { index: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
