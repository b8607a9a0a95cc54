//! Constructors for every time operator in the laboratory.
//!
//! Sign conventions: the dynamical-variable and quantized-arrival operators
//! satisfy `[H, T] = +i` (equivalently `[T, H] = -i`); the half-line
//! restriction of the energy-shift generator satisfies `[H(0), T] = -i`.
//! Each bundle records which sign its construction promises.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::lattice::{Grid, Representation, SpinorState, StateVector};
use crate::linalg;
use crate::operators::{
    commutator, coordinate_operator, derivative_operator, inverse_momentum, kron_spin,
    multiplication_real, DerivativeScheme, LinearOperator,
};

const I: C64 = C64::new(0.0, 1.0);
const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// Tolerance for the commutant precondition `[([F,H])^-1, H] = 0` checked in
/// action on interior probe states.
pub const T1_COMMUTANT_TOLERANCE: f64 = 1e-8;
/// Singular-value gate for the invertibility of `[F, H]`.
pub const T1_SINGULAR_GATE: f64 = 1e-10;
/// Threshold below which a Mandelstam-Tamm drift counts as zero.
pub const ZERO_DRIFT_THRESHOLD: f64 = 1e-10;

/// A 2x2 Clifford pair for the 1+1-dimensional Dirac sector.
#[derive(Debug, Clone)]
pub struct DiracAlgebra {
    pub alpha1: [[C64; 2]; 2],
    pub beta: [[C64; 2]; 2],
}

fn mat2_mul(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn mat2_max_diff(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((a[i][j] - b[i][j]).norm());
        }
    }
    worst
}

impl DiracAlgebra {
    /// alpha1 = sigma_x, beta = sigma_z. Any 2x2 representation of the
    /// algebra is unitarily equivalent to this one.
    pub fn standard() -> Self {
        DiracAlgebra {
            alpha1: [[ZERO, ONE], [ONE, ZERO]],
            beta: [[ONE, ZERO], [ZERO, -ONE]],
        }
    }

    /// Validates `alpha1^2 = beta^2 = 1` and `alpha1 beta + beta alpha1 = 0`
    /// to 1e-15 per entry.
    pub fn new(alpha1: [[C64; 2]; 2], beta: [[C64; 2]; 2]) -> Result<Self> {
        let algebra = DiracAlgebra { alpha1, beta };
        algebra.validate()?;
        Ok(algebra)
    }

    /// Worst entrywise deviation from `alpha1^2 = beta^2 = 1` and
    /// `{alpha1, beta} = 0`.
    pub fn max_relation_defect(&self) -> f64 {
        let eye = [[ONE, ZERO], [ZERO, ONE]];
        let zero = [[ZERO; 2]; 2];
        let a2 = mat2_mul(&self.alpha1, &self.alpha1);
        let b2 = mat2_mul(&self.beta, &self.beta);
        let ab = mat2_mul(&self.alpha1, &self.beta);
        let ba = mat2_mul(&self.beta, &self.alpha1);
        let anti = [
            [ab[0][0] + ba[0][0], ab[0][1] + ba[0][1]],
            [ab[1][0] + ba[1][0], ab[1][1] + ba[1][1]],
        ];
        mat2_max_diff(&a2, &eye)
            .max(mat2_max_diff(&b2, &eye))
            .max(mat2_max_diff(&anti, &zero))
    }

    pub fn validate(&self) -> Result<()> {
        let worst = self.max_relation_defect();
        if worst > 1e-15 {
            return Err(Error::InvalidGrid(format!(
                "Dirac algebra relations violated by {worst:.3e}"
            )));
        }
        Ok(())
    }
}

/// Which construction produced a time operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeOperatorKind {
    T1,
    T2,
    NonRel,
    KleinGordon,
    KleinGordonEnergyRep,
    Dirac,
    ProperTime,
    RestrictionT,
}

impl TimeOperatorKind {
    /// The sign `s` in the promised commutation relation `[H, T] = s i`.
    pub fn commutator_sign(self) -> f64 {
        match self {
            TimeOperatorKind::T1
            | TimeOperatorKind::T2
            | TimeOperatorKind::NonRel
            | TimeOperatorKind::KleinGordon
            | TimeOperatorKind::KleinGordonEnergyRep
            | TimeOperatorKind::Dirac => 1.0,
            TimeOperatorKind::ProperTime | TimeOperatorKind::RestrictionT => -1.0,
        }
    }
}

/// A constructed time operator together with its promised conjugation sign.
#[derive(Debug, Clone)]
pub struct TimeOperatorBundle {
    pub operator: LinearOperator,
    pub kind: TimeOperatorKind,
    pub expected_commutator_sign: f64,
    /// The state defining the Mandelstam-Tamm denominator, when applicable.
    pub defining_state: Option<StateVector>,
    /// The drift `<dA/dt>` behind a T2 construction, when applicable.
    pub drift: Option<f64>,
}

impl TimeOperatorBundle {
    fn plain(operator: LinearOperator, kind: TimeOperatorKind) -> Self {
        TimeOperatorBundle {
            operator,
            kind,
            expected_commutator_sign: kind.commutator_sign(),
            defining_state: None,
            drift: None,
        }
    }
}

/// Position operator in the momentum representation: `x = i d/dp`
/// (sign fixed by `[x, p] = i` with `p = -i d/dx`).
pub fn position_in_momentum_rep(grid: Grid) -> Result<LinearOperator> {
    grid_expect_momentum(&grid)?;
    Ok(derivative_operator(grid, DerivativeScheme::Spectral)?.scale(I))
}

/// Free nonrelativistic Hamiltonian `p^2 / 2m` as a diagonal momentum-space
/// operator.
pub fn free_hamiltonian(m: f64, grid: Grid) -> Result<LinearOperator> {
    expect_positive_mass(m)?;
    grid_expect_momentum(&grid)?;
    multiplication_real(grid, |p| p * p / (2.0 * m))
}

/// Linear-potential Hamiltonian `p^2/2m + m g q` in the momentum
/// representation (`q = i d/dp`).
pub fn linear_potential_hamiltonian(m: f64, g: f64, grid: Grid) -> Result<LinearOperator> {
    let free = free_hamiltonian(m, grid)?;
    let q = position_in_momentum_rep(grid)?;
    free.add(&q.scale(C64::new(m * g, 0.0)))
}

/// Scalar relativistic Hamiltonian `diag(sqrt(p^2 + m^2))`.
pub fn kg_hamiltonian(m: f64, grid: Grid) -> Result<LinearOperator> {
    grid_expect_momentum(&grid)?;
    multiplication_real(grid, |p| (p * p + m * m).sqrt())
}

/// Dirac Hamiltonian `alpha1 p + beta m` on a momentum grid.
pub fn dirac_hamiltonian(m: f64, grid: Grid, algebra: &DiracAlgebra) -> Result<LinearOperator> {
    algebra.validate()?;
    expect_positive_mass(m)?;
    let p = coordinate_operator(grid)?;
    let eye = LinearOperator::identity(grid, 1);
    kron_spin(&algebra.alpha1, &p)?.add(&kron_spin(&algebra.beta, &eye.scale(C64::new(m, 0.0)))?)
}

fn grid_expect_momentum(grid: &Grid) -> Result<()> {
    if grid.rep() != Representation::Momentum {
        return Err(Error::GridMismatch(format!(
            "expected a momentum grid, got {:?}",
            grid.rep()
        )));
    }
    Ok(())
}

fn expect_positive_mass(m: f64) -> Result<()> {
    if !(m > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "mass must be positive, got {m}"
        )));
    }
    Ok(())
}

/// Interior Gaussian probe states used for per-call precondition checks.
/// Narrow enough that their tails clear both grid edges (and any coordinate
/// singularities like p = 0) at the e-300 level.
fn probe_states(grid: &Grid, spin_dim: usize) -> Vec<Vec<C64>> {
    let n = grid.len();
    let lo = grid.point(0);
    let span = grid.span();
    let sigma = span / 24.0;
    let ramp = std::f64::consts::PI / (8.0 * grid.step());
    [(0.40, 0.0), (0.5, ramp), (0.60, 0.0)]
        .iter()
        .map(|&(frac, xi)| {
            let center = lo + frac * span;
            let scalar: Vec<C64> = grid
                .points()
                .map(|q| {
                    C64::from_polar(
                        (-(q - center) * (q - center) / (4.0 * sigma * sigma)).exp(),
                        q * xi,
                    )
                })
                .collect();
            let mut flat = Vec::with_capacity(n * spin_dim);
            for _ in 0..spin_dim {
                flat.extend_from_slice(&scalar);
            }
            let norm = flat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            flat.iter_mut().for_each(|z| *z /= norm);
            flat
        })
        .collect()
}

fn flat_l2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest value of `|(A B - B A) psi| / |psi|` over the interior probes.
fn commutation_residual_on_probes(a: &LinearOperator, b: &LinearOperator) -> f64 {
    let mut worst = 0.0f64;
    for probe in probe_states(a.grid(), a.spin_dim()) {
        let ab = a.apply_flat(&b.apply_flat(&probe));
        let ba = b.apply_flat(&a.apply_flat(&probe));
        let resid: f64 = ab
            .iter()
            .zip(&ba)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(resid / flat_l2(&probe));
    }
    worst
}

/// Time operator from a dynamical variable F:
/// `T1 = -i [F C^-1 + C^-1 F] / 2` with `C = [F, H]`.
///
/// Preconditions enforced per call: `C` is invertible (smallest singular
/// value above `T1_SINGULAR_GATE` times the largest) and `C^-1` commutes
/// with `H` in action on interior probe states to `T1_COMMUTANT_TOLERANCE`.
pub fn t1_from_dynamical(f: &LinearOperator, h: &LinearOperator) -> Result<TimeOperatorBundle> {
    let c = commutator(f, h)?;
    let (smin, smax) = linalg::singular_value_range(c.matrix())?;
    if smax == 0.0 || smin <= T1_SINGULAR_GATE * smax {
        return Err(Error::SingularCommutator {
            ratio: if smax > 0.0 { smin / smax } else { 0.0 },
        });
    }
    let c_inv = LinearOperator::from_matrix(*c.grid(), c.spin_dim(), linalg::invert(c.matrix())?)?;
    let residual = commutation_residual_on_probes(&c_inv, h);
    if residual > T1_COMMUTANT_TOLERANCE {
        return Err(Error::PreconditionViolation {
            residual,
            limit: T1_COMMUTANT_TOLERANCE,
        });
    }
    let t = f
        .compose(&c_inv)?
        .add(&c_inv.compose(f)?)?
        .scale(C64::new(0.0, -0.5));
    Ok(TimeOperatorBundle::plain(t, TimeOperatorKind::T1))
}

/// Free-motion time-of-arrival operator in the momentum representation:
/// `T_non = -(i m / 2) (p^-1 d/dp + d/dp p^-1)`.
pub fn t_free_nonrel(m: f64, grid: Grid) -> Result<TimeOperatorBundle> {
    expect_positive_mass(m)?;
    let d = derivative_operator(grid, DerivativeScheme::Spectral)?;
    let pinv = inverse_momentum(grid)?;
    let t = pinv
        .compose(&d)?
        .add(&d.compose(&pinv)?)?
        .scale(C64::new(0.0, -0.5 * m));
    Ok(TimeOperatorBundle::plain(t, TimeOperatorKind::NonRel))
}

/// Proper time-of-arrival operator `tau = m (p^-1 x + x p^-1) / 2`,
/// the exact negation of [`t_free_nonrel`].
pub fn proper_time(m: f64, grid: Grid) -> Result<TimeOperatorBundle> {
    let non = t_free_nonrel(m, grid)?;
    Ok(TimeOperatorBundle::plain(
        non.operator.scale(-ONE),
        TimeOperatorKind::ProperTime,
    ))
}

/// Self-adjoint Mandelstam-Tamm operator `T2 = -A / <dA/dt>`, defined
/// relative to `state`. Errors when the drift is complex or below the
/// zero-drift threshold.
pub fn t2_mandelstam(
    a: &LinearOperator,
    h: &LinearOperator,
    state: &StateVector,
) -> Result<TimeOperatorBundle> {
    let c = commutator(a, h)?;
    let avg = c.expectation(state)?;
    let drift_c = -I * avg; // <dA/dt> = -i <[A, H]>
    if drift_c.im.abs() > ZERO_DRIFT_THRESHOLD {
        return Err(Error::ComplexDrift { imag: drift_c.im });
    }
    let drift = drift_c.re;
    if drift.abs() <= ZERO_DRIFT_THRESHOLD {
        return Err(Error::ZeroDrift {
            drift_abs: drift.abs(),
            threshold: ZERO_DRIFT_THRESHOLD,
        });
    }
    let t = a.scale(C64::new(-1.0 / drift, 0.0));
    Ok(TimeOperatorBundle {
        operator: t,
        kind: TimeOperatorKind::T2,
        expected_commutator_sign: TimeOperatorKind::T2.commutator_sign(),
        defining_state: Some(state.clone()),
        drift: Some(drift),
    })
}

/// Symmetrized relativistic arrival-time operator for an arbitrary
/// momentum-space Hamiltonian:
/// `T = -(1/6) [H (p^-1 x + x p^-1) + (p^-1 x + x p^-1) H + p^-1 H x + x H p^-1]`
/// with `x = i d/dp` (tensored with the spin identity when H has spin).
pub fn t_relativistic_general(h: &LinearOperator, grid: Grid) -> Result<LinearOperator> {
    if *h.grid() != grid {
        return Err(Error::GridMismatch(
            "t_relativistic_general: H grid mismatch".into(),
        ));
    }
    let x_s = position_in_momentum_rep(grid)?;
    let pinv_s = inverse_momentum(grid)?;
    let eye2 = [[ONE, ZERO], [ZERO, ONE]];
    let (x, pinv) = if h.spin_dim() == 2 {
        (kron_spin(&eye2, &x_s)?, kron_spin(&eye2, &pinv_s)?)
    } else {
        (x_s, pinv_s)
    };
    let a = pinv.compose(&x)?.add(&x.compose(&pinv)?)?;
    let sum = h
        .compose(&a)?
        .add(&a.compose(h)?)?
        .add(&pinv.compose(h)?.compose(&x)?)?
        .add(&x.compose(h)?.compose(&pinv)?)?;
    Ok(sum.scale(C64::new(-1.0 / 6.0, 0.0)))
}

/// The Klein-Gordon correction term `-m^2 / (2 E (E^2 - m^2))` that
/// accompanies `-i d/dE` when the operator is written in momentum variables.
pub fn kg_correction(m: f64, p: f64) -> f64 {
    let e = (p * p + m * m).sqrt();
    -m * m / (2.0 * e * p * p)
}

/// Klein-Gordon arrival-time operator in momentum variables, built through
/// the chain rule `d/dE = (E/p) d/dp`:
/// `T = -i [ (E/p) d/dp - m^2/(2 E (E^2 - m^2)) ]`.
pub fn t_kg_momentum(m: f64, grid: Grid) -> Result<TimeOperatorBundle> {
    grid_expect_momentum(&grid)?;
    if grid.point(0) <= 0.0 {
        return Err(Error::InvalidGrid(format!(
            "Klein-Gordon momentum operator needs p > 0, grid starts at {}",
            grid.point(0)
        )));
    }
    if m < 0.0 {
        return Err(Error::InvalidGrid(format!(
            "mass must be non-negative, got {m}"
        )));
    }
    let d = derivative_operator(grid, DerivativeScheme::Spectral)?;
    let chain = multiplication_real(grid, |p| (p * p + m * m).sqrt() / p)?;
    let corr = multiplication_real(grid, |p| kg_correction(m, p))?;
    let t = chain.compose(&d)?.add(&corr)?.scale(-I);
    Ok(TimeOperatorBundle::plain(t, TimeOperatorKind::KleinGordon))
}

/// Klein-Gordon arrival-time operator in the energy representation:
/// `T = -i d/dE` on a uniform half-line energy lattice.
pub fn t_kg_energy_rep(grid: Grid) -> Result<TimeOperatorBundle> {
    if grid.rep() != Representation::EnergyHalfLine {
        return Err(Error::GridMismatch(
            "t_kg_energy_rep expects a half-line energy grid".into(),
        ));
    }
    let d = derivative_operator(grid, DerivativeScheme::CentralDifference4)?;
    Ok(TimeOperatorBundle::plain(
        d.scale(-I),
        TimeOperatorKind::KleinGordonEnergyRep,
    ))
}

/// Dirac arrival-time operator in closed form: `T = -alpha1 x - beta tau`.
pub fn t_dirac(m: f64, grid: Grid, algebra: &DiracAlgebra) -> Result<TimeOperatorBundle> {
    algebra.validate()?;
    let x = position_in_momentum_rep(grid)?;
    let tau = proper_time(m, grid)?.operator;
    let t = kron_spin(&algebra.alpha1, &x)?
        .scale(-ONE)
        .add(&kron_spin(&algebra.beta, &tau)?.scale(-ONE))?;
    Ok(TimeOperatorBundle::plain(t, TimeOperatorKind::Dirac))
}

/// Relative residual `|([H, T] - sign * i) psi| / |psi|` with the outermost
/// `margin` grid points of each spin block excluded from the norm.
pub fn conjugacy_residual_flat(
    h: &LinearOperator,
    t: &LinearOperator,
    state: &[C64],
    sign: f64,
    margin: usize,
) -> f64 {
    let n = h.grid().len();
    let spin = h.spin_dim();
    let ht = h.apply_flat(&t.apply_flat(state));
    let th = t.apply_flat(&h.apply_flat(state));
    let target = I * C64::new(sign, 0.0);
    let mut resid = 0.0f64;
    for s in 0..spin {
        for k in margin..n.saturating_sub(margin) {
            let idx = s * n + k;
            let r = ht[idx] - th[idx] - target * state[idx];
            resid += r.norm_sqr();
        }
    }
    resid.sqrt() / flat_l2(state)
}

pub fn conjugacy_residual(
    h: &LinearOperator,
    bundle: &TimeOperatorBundle,
    state: &StateVector,
    margin: usize,
) -> f64 {
    conjugacy_residual_flat(
        h,
        &bundle.operator,
        state.amplitudes(),
        bundle.expected_commutator_sign,
        margin,
    )
}

pub fn conjugacy_residual_spinor(
    h: &LinearOperator,
    bundle: &TimeOperatorBundle,
    state: &SpinorState,
    margin: usize,
) -> f64 {
    conjugacy_residual_flat(
        h,
        &bundle.operator,
        &state.to_flat(),
        bundle.expected_commutator_sign,
        margin,
    )
}

/// Entrywise maximum difference between two operators on the same grid.
pub fn entrywise_diff(a: &LinearOperator, b: &LinearOperator) -> f64 {
    linalg::max_abs_diff(a.matrix(), b.matrix())
}

/// Relative action difference `|(A - B) psi| / |psi|` maximized over a suite
/// of states.
pub fn action_diff_flat(a: &LinearOperator, b: &LinearOperator, states: &[Vec<C64>]) -> f64 {
    let mut worst = 0.0f64;
    for flat in states {
        let av = a.apply_flat(flat);
        let bv = b.apply_flat(flat);
        let d: f64 = av
            .iter()
            .zip(&bv)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(d / flat_l2(flat));
    }
    worst
}

/// Spin identity wrapper for scalar space operators.
pub fn with_spin_identity(op: &LinearOperator) -> Result<LinearOperator> {
    let eye2 = [[ONE, ZERO], [ZERO, ONE]];
    kron_spin(&eye2, op)
}

/// The Dirac squared-Hamiltonian deviation `max |H^2 - (p^2 + m^2) I|`,
/// which vanishes exactly because the 2x2 algebra collapses to diagonals.
pub fn dirac_mass_shell_deviation(m: f64, grid: Grid, algebra: &DiracAlgebra) -> Result<f64> {
    let h = dirac_hamiltonian(m, grid, algebra)?;
    let h2 = h.compose(&h)?;
    let n = grid.len();
    let mut expected: Array2<C64> = Array2::default((2 * n, 2 * n));
    for (k, p) in grid.points().enumerate() {
        let v = C64::new(p * p + m * m, 0.0);
        expected[[k, k]] = v;
        expected[[n + k, n + k]] = v;
    }
    Ok(linalg::max_abs_diff(h2.matrix(), &expected))
}
