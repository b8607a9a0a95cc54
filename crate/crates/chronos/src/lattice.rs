//! Uniform 1-D grids, states on them, and the maps between position,
//! momentum, and energy representations.
//!
//! Natural units (hbar = c = 1) throughout. Momentum grids produced by
//! [`Grid::fourier_dual`] carry the half-integer offset `(k + 1/2 - n/2) * step`
//! so that `p = 0` is never a grid point on even-sized grids and the
//! inverse-momentum operator exists.

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub const INTERIOR_TAIL_LIMIT: f64 = 1e-12;
const INTERIOR_SIGMA_MARGIN: f64 = 5.0;

/// Which variable the grid coordinates represent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Position,
    Momentum,
    EnergyHalfLine,
    EnergyFullLine,
}

/// A uniform 1-D lattice tagged with its representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    origin: f64,
    step: f64,
    rep: Representation,
}

impl Grid {
    pub fn new(n: usize, origin: f64, step: f64, rep: Representation) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 points, got {n}"
            )));
        }
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "step must be positive, got {step}"
            )));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        if rep == Representation::EnergyHalfLine && origin != 0.0 {
            return Err(Error::InvalidGrid(format!(
                "half-line energy grids start at 0, got origin {origin}"
            )));
        }
        Ok(Grid {
            n,
            origin,
            step,
            rep,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    /// Never true: construction requires at least two points.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn rep(&self) -> Representation {
        self.rep
    }

    pub fn point(&self, k: usize) -> f64 {
        self.origin + k as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.point(k))
    }

    pub fn span(&self) -> f64 {
        (self.n - 1) as f64 * self.step
    }

    /// The Fourier-dual grid: position <-> momentum with
    /// `step_p = 2 pi / (n step_x)` and the half-integer momentum offset.
    pub fn fourier_dual(&self) -> Result<Grid> {
        let dual_step = std::f64::consts::TAU / (self.n as f64 * self.step);
        match self.rep {
            Representation::Position => Grid::new(
                self.n,
                (0.5 - self.n as f64 / 2.0) * dual_step,
                dual_step,
                Representation::Momentum,
            ),
            Representation::Momentum => Grid::new(
                self.n,
                -((self.n / 2) as f64) * dual_step,
                dual_step,
                Representation::Position,
            ),
            _ => Err(Error::GridMismatch(
                "fourier_dual is defined for position and momentum grids".into(),
            )),
        }
    }

    fn expect_rep(&self, rep: Representation, what: &str) -> Result<()> {
        if self.rep != rep {
            return Err(Error::GridMismatch(format!(
                "{what} expects a {rep:?} grid, got {:?}",
                self.rep
            )));
        }
        Ok(())
    }
}

/// Complex amplitudes on a grid, with the measure-weighted norm
/// `|psi|^2 = sum |psi_k|^2 step`.
#[derive(Debug, Clone)]
pub struct StateVector {
    grid: Grid,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(grid: Grid, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "amplitude count {} does not match grid size {}",
                amps.len(),
                grid.len()
            )));
        }
        Ok(StateVector { grid, amps })
    }

    pub fn zeros(grid: Grid) -> Self {
        StateVector {
            grid,
            amps: vec![C64::default(); grid.len()],
        }
    }

    /// Normalized basis spike at index `k` (norm 1 in the lattice measure).
    pub fn basis(grid: Grid, k: usize) -> Result<Self> {
        if k >= grid.len() {
            return Err(Error::InvalidGrid(format!(
                "basis index {k} out of range for n = {}",
                grid.len()
            )));
        }
        let mut amps = vec![C64::default(); grid.len()];
        amps[k] = C64::new(1.0 / grid.step().sqrt(), 0.0);
        Ok(StateVector { grid, amps })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> C64) -> Self {
        let amps = grid.points().map(f).collect();
        StateVector { grid, amps }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.step()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::UnnormalizedState { deviation: 1.0 });
        }
        let inv = 1.0 / norm;
        self.amps.iter_mut().for_each(|z| *z *= inv);
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// Measure-weighted inner product `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        debug_assert_eq!(self.grid.len(), other.grid.len());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            * self.grid.step()
    }

    /// Probability mass `sum_k |psi_k|^2 step` over an index range.
    /// (`+ 0.0` normalizes the -0.0 an empty sum would produce.)
    pub fn mass_on(&self, range: std::ops::Range<usize>) -> f64 {
        self.amps[range].iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.step() + 0.0
    }
}

/// Two-component state on a momentum grid (Dirac sector).
/// Flat layout: `[upper(0..n), lower(0..n)]`, matching spin (x) space
/// Kronecker products.
#[derive(Debug, Clone)]
pub struct SpinorState {
    grid: Grid,
    upper: Vec<C64>,
    lower: Vec<C64>,
}

impl SpinorState {
    pub fn new(grid: Grid, upper: Vec<C64>, lower: Vec<C64>) -> Result<Self> {
        grid.expect_rep(Representation::Momentum, "SpinorState")?;
        if upper.len() != grid.len() || lower.len() != grid.len() {
            return Err(Error::GridMismatch(
                "spinor component length mismatch".into(),
            ));
        }
        Ok(SpinorState { grid, upper, lower })
    }

    pub fn from_components(upper: StateVector, lower: StateVector) -> Result<Self> {
        if upper.grid != lower.grid {
            return Err(Error::GridMismatch(
                "spinor components live on different grids".into(),
            ));
        }
        SpinorState::new(upper.grid, upper.amps, lower.amps)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn upper(&self) -> &[C64] {
        &self.upper
    }

    pub fn lower(&self) -> &[C64] {
        &self.lower
    }

    pub fn norm_sq(&self) -> f64 {
        let s: f64 = self
            .upper
            .iter()
            .chain(self.lower.iter())
            .map(|z| z.norm_sqr())
            .sum();
        s * self.grid.step()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::UnnormalizedState { deviation: 1.0 });
        }
        let inv = 1.0 / norm;
        self.upper.iter_mut().for_each(|z| *z *= inv);
        self.lower.iter_mut().for_each(|z| *z *= inv);
        Ok(())
    }

    pub fn to_flat(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(2 * self.grid.len());
        out.extend_from_slice(&self.upper);
        out.extend_from_slice(&self.lower);
        out
    }

    pub fn from_flat(grid: Grid, flat: &[C64]) -> Result<Self> {
        let n = grid.len();
        if flat.len() != 2 * n {
            return Err(Error::GridMismatch("flat spinor length mismatch".into()));
        }
        SpinorState::new(grid, flat[..n].to_vec(), flat[n..].to_vec())
    }
}

/// Normalized Gaussian packet `exp(-(p-p0)^2/(4 sigma^2)) exp(-i p x0)` on a
/// momentum grid. Rejects packets whose tails leak outside the interior
/// window (5 sigma from each grid edge and from p = 0).
pub fn gaussian_state(grid: Grid, p0: f64, sigma_p: f64, x0: f64) -> Result<StateVector> {
    grid.expect_rep(Representation::Momentum, "gaussian_state")?;
    if !(sigma_p > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "sigma_p must be positive, got {sigma_p}"
        )));
    }
    let mut state = StateVector::from_fn(grid, |p| {
        let arg = -(p - p0) * (p - p0) / (4.0 * sigma_p * sigma_p);
        C64::from_polar(arg.exp(), -p * x0)
    });
    state.normalize()?;

    let lo = grid.point(0);
    let hi = grid.point(grid.len() - 1);
    let margin = INTERIOR_SIGMA_MARGIN * sigma_p;
    let outside: f64 = grid
        .points()
        .zip(state.amplitudes())
        .filter(|(p, _)| *p < lo + margin || *p > hi - margin || p.abs() < margin)
        .map(|(_, z)| z.norm_sqr())
        .sum::<f64>()
        * grid.step();
    if outside > INTERIOR_TAIL_LIMIT {
        return Err(Error::SupportViolation {
            outside_mass: outside,
            limit: INTERIOR_TAIL_LIMIT,
        });
    }
    Ok(state)
}

fn fft(data: &mut [C64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(data.len())
    } else {
        planner.plan_fft_forward(data.len())
    };
    fft.process(data);
}

/// Unitary change of representation `psi(x) -> psi(p)`:
/// `psi(p_k) = (dx / sqrt(2 pi)) sum_j exp(-i p_k x_j) psi(x_j)`
/// onto the Fourier-dual momentum grid.
pub fn position_to_momentum(state: &StateVector) -> Result<StateVector> {
    state
        .grid
        .expect_rep(Representation::Position, "position_to_momentum")?;
    let xg = state.grid;
    let pg = xg.fourier_dual()?;
    let n = xg.len();
    let c = pg.origin() / pg.step(); // fractional index offset of the dual grid

    let mut work: Vec<C64> = (0..n)
        .map(|j| {
            let phase = -std::f64::consts::TAU * c * j as f64 / n as f64;
            state.amps[j] * C64::from_polar(1.0, phase)
        })
        .collect();
    fft(&mut work, false);

    let scale = xg.step() / (2.0 * std::f64::consts::PI).sqrt();
    let amps = (0..n)
        .map(|k| work[k] * C64::from_polar(scale, -pg.point(k) * xg.origin()))
        .collect();
    StateVector::new(pg, amps)
}

/// Inverse of [`position_to_momentum`] onto an explicit position grid.
/// The grids must be Fourier-dual: same size and `dp dx = 2 pi / n`.
pub fn momentum_to_position_onto(state: &StateVector, xgrid: &Grid) -> Result<StateVector> {
    state
        .grid
        .expect_rep(Representation::Momentum, "momentum_to_position")?;
    xgrid.expect_rep(Representation::Position, "momentum_to_position target")?;
    let pg = state.grid;
    let n = pg.len();
    if xgrid.len() != n {
        return Err(Error::GridMismatch(
            "dual grids must have equal size".into(),
        ));
    }
    let product = pg.step() * xgrid.step() * n as f64 / std::f64::consts::TAU;
    if (product - 1.0).abs() > 1e-12 {
        return Err(Error::GridMismatch(format!(
            "grids are not Fourier-dual: n dp dx / (2 pi) = {product}"
        )));
    }

    let mut work: Vec<C64> = (0..n)
        .map(|k| state.amps[k] * C64::from_polar(1.0, pg.point(k) * xgrid.origin()))
        .collect();
    fft(&mut work, true);

    let c = pg.origin() / pg.step();
    let scale = pg.step() / (2.0 * std::f64::consts::PI).sqrt();
    let amps = (0..n)
        .map(|j| {
            let phase = std::f64::consts::TAU * c * j as f64 / n as f64;
            work[j] * C64::from_polar(scale, phase)
        })
        .collect();
    StateVector::new(*xgrid, amps)
}

/// Inverse of [`position_to_momentum`] onto the centered dual position grid.
pub fn momentum_to_position(state: &StateVector) -> Result<StateVector> {
    let xgrid = state.grid.fourier_dual()?;
    momentum_to_position_onto(state, &xgrid)
}

/// Four-point Lagrange interpolation through strictly increasing nodes.
/// Evaluation points outside the node range map to zero.
fn cubic_interpolate(xs: &[f64], ys: &[C64], t: f64) -> C64 {
    let n = xs.len();
    debug_assert!(n >= 4);
    if t < xs[0] || t > xs[n - 1] {
        return C64::default();
    }
    // Bracketing interval via binary search.
    let mut lo = 0usize;
    let mut hi = n - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if xs[mid] <= t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let start = lo.saturating_sub(1).min(n - 4);
    let mut acc = C64::default();
    for j in 0..4 {
        let xj = xs[start + j];
        let mut w = 1.0;
        for k in 0..4 {
            if k != j {
                w *= (t - xs[start + k]) / (xj - xs[start + k]);
            }
        }
        acc += ys[start + j] * w;
    }
    acc
}

fn check_positive_momenta(grid: &Grid) -> Result<()> {
    grid.expect_rep(Representation::Momentum, "energy map")?;
    if grid.point(0) <= 0.0 {
        return Err(Error::InvalidGrid(format!(
            "energy map needs strictly positive momenta, grid starts at {}",
            grid.point(0)
        )));
    }
    Ok(())
}

/// Support window `[a, b]` capturing all but `INTERIOR_TAIL_LIMIT` of the mass
/// on each side.
fn support_window(amps: &[C64]) -> (usize, usize) {
    let total: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    let thr = INTERIOR_TAIL_LIMIT * total;
    let mut a = 0usize;
    let mut acc = 0.0;
    for (k, z) in amps.iter().enumerate() {
        acc += z.norm_sqr();
        if acc > thr {
            a = k;
            break;
        }
    }
    let mut b = amps.len() - 1;
    acc = 0.0;
    for (k, z) in amps.iter().enumerate().rev() {
        acc += z.norm_sqr();
        if acc > thr {
            b = k;
            break;
        }
    }
    (a, b.max(a))
}

/// Relativistic change of variable `p -> E = sqrt(p^2 + m^2)` for
/// right-moving states, rescaling amplitudes by `[E^2/(E^2 - m^2)]^(1/4)`
/// (the square root of the Jacobian `dp/dE`) so that
/// `sum |phi|^2 dE = sum |psi|^2 dp`, then resampling onto a uniform
/// half-line energy grid by cubic interpolation.
pub fn momentum_to_energy(state: &StateVector, m: f64) -> Result<StateVector> {
    let grid = energy_grid_for(state, m)?;
    momentum_to_energy_onto(state, m, &grid)
}

/// The uniform half-line energy grid [`momentum_to_energy`] would target for
/// this state: step matched to the finest local level spacing on the
/// state's support window.
pub fn energy_grid_for(state: &StateVector, m: f64) -> Result<Grid> {
    check_positive_momenta(&state.grid)?;
    if m < 0.0 {
        return Err(Error::InvalidGrid(format!(
            "mass must be non-negative, got {m}"
        )));
    }
    let (a, b) = support_window(&state.amps);
    let pa = state.grid.point(a);
    let pb = state.grid.point(b);
    let ea = (pa * pa + m * m).sqrt();
    let eb = (pb * pb + m * m).sqrt();
    let de = (pa / ea) * state.grid.step();
    let top = eb + 8.0 * de;
    let n_e = (top / de).ceil() as usize + 1;
    if n_e > 4_000_000 {
        return Err(Error::InvalidGrid(format!(
            "energy resampling would need {n_e} points; narrow the state or coarsen the grid"
        )));
    }
    Grid::new(n_e.max(4), 0.0, de, Representation::EnergyHalfLine)
}

/// As [`momentum_to_energy`] but onto a caller-supplied energy grid, so that
/// several states can be compared on one lattice.
pub fn momentum_to_energy_onto(state: &StateVector, m: f64, egrid: &Grid) -> Result<StateVector> {
    check_positive_momenta(&state.grid)?;
    egrid.expect_rep(Representation::EnergyHalfLine, "momentum_to_energy target")?;
    let n = state.grid.len();
    if n < 4 {
        return Err(Error::InvalidGrid(
            "energy resampling needs at least 4 points".into(),
        ));
    }
    let mut es = Vec::with_capacity(n);
    let mut scaled = Vec::with_capacity(n);
    for (p, z) in state.grid.points().zip(state.amplitudes()) {
        let e = (p * p + m * m).sqrt();
        es.push(e);
        scaled.push(z * (e / p).sqrt());
    }
    let amps = egrid
        .points()
        .map(|e| cubic_interpolate(&es, &scaled, e))
        .collect();
    StateVector::new(*egrid, amps)
}

/// Inverse of the energy map onto an explicit momentum grid:
/// `psi(p) = phi(E(p)) [(E^2 - m^2)/E^2]^(1/4)`.
pub fn energy_to_momentum(state: &StateVector, m: f64, pgrid: &Grid) -> Result<StateVector> {
    state
        .grid
        .expect_rep(Representation::EnergyHalfLine, "energy_to_momentum")?;
    check_positive_momenta(pgrid)?;
    if state.grid.len() < 4 {
        return Err(Error::InvalidGrid(
            "energy resampling needs at least 4 points".into(),
        ));
    }
    let es: Vec<f64> = state.grid.points().collect();
    let amps = pgrid
        .points()
        .map(|p| {
            let e = (p * p + m * m).sqrt();
            cubic_interpolate(&es, &state.amps, e) * (p / e).sqrt()
        })
        .collect();
    StateVector::new(*pgrid, amps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_grid_basics() {
        let g = Grid::new(4, 0.0, 1.0, Representation::EnergyHalfLine).unwrap();
        let pts: Vec<f64> = g.points().collect();
        assert_eq!(pts, vec![0.0, 1.0, 2.0, 3.0]);

        let g = Grid::new(4, -1.5, 1.0, Representation::Momentum).unwrap();
        let pts: Vec<f64> = g.points().collect();
        assert_eq!(pts, vec![-1.5, -0.5, 0.5, 1.5]);
        assert!(pts.iter().all(|p| *p != 0.0));

        assert!(Grid::new(1, 0.0, 1.0, Representation::Position).is_err());
        assert!(Grid::new(8, 0.0, 0.0, Representation::Position).is_err());
        assert!(Grid::new(8, 0.5, 1.0, Representation::EnergyHalfLine).is_err());
    }

    #[test]
    fn fourier_dual_has_half_integer_offset() {
        let xg = Grid::new(8, -4.0, 1.0, Representation::Position).unwrap();
        let pg = xg.fourier_dual().unwrap();
        let dp = std::f64::consts::TAU / 8.0;
        assert!((pg.step() - dp).abs() < 1e-15);
        assert!((pg.point(0) - (-3.5 * dp)).abs() < 1e-15);
        // No zero point.
        assert!(pg.points().all(|p| p.abs() > 0.4 * dp));
    }

    fn test_packet_grid() -> Grid {
        // p in (0, 4], 512 points.
        let dp = 4.0 / 512.0;
        Grid::new(512, 0.5 * dp, dp, Representation::Momentum).unwrap()
    }

    #[test]
    fn gaussian_state_moments() {
        let grid = test_packet_grid();
        let psi = gaussian_state(grid, 2.0, 0.05, -10.0).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);

        // <p>
        let mean_p: f64 = grid
            .points()
            .zip(psi.amplitudes())
            .map(|(p, z)| p * z.norm_sqr())
            .sum::<f64>()
            * grid.step();
        assert!((mean_p - 2.0).abs() < 1e-9, "mean p = {mean_p}");

        // <x> with x = i d/dp equals the launch position.
        let x_op = crate::operators::derivative_operator(
            grid,
            crate::operators::DerivativeScheme::Spectral,
        )
        .unwrap()
        .scale(C64::new(0.0, 1.0));
        let mean_x = x_op.expectation(&psi).unwrap();
        assert!((mean_x.re + 10.0).abs() < 1e-6, "mean x = {}", mean_x.re);
        assert!(mean_x.im.abs() < 1e-9);
    }

    #[test]
    fn gaussian_state_zero_phase_is_real() {
        let grid = test_packet_grid();
        let psi = gaussian_state(grid, 2.0, 0.05, 0.0).unwrap();
        let max_imag = psi
            .amplitudes()
            .iter()
            .map(|z| z.im.abs())
            .fold(0.0, f64::max);
        assert!(max_imag < 1e-15);
    }

    #[test]
    fn gaussian_state_near_zero_momentum_is_rejected() {
        let grid = test_packet_grid();
        let err = gaussian_state(grid, 0.0, 0.05, 0.0).unwrap_err();
        assert!(matches!(err, Error::SupportViolation { .. }), "{err}");
    }

    #[test]
    fn point_mass_transforms_to_flat_magnitude() {
        let n = 64;
        let xg = Grid::new(n, -(n as f64) / 2.0, 1.0, Representation::Position).unwrap();
        // Spike at x = 0 (index n/2).
        let psi = StateVector::basis(xg, n / 2).unwrap();
        let phi = position_to_momentum(&psi).unwrap();
        let mags: Vec<f64> = phi.amplitudes().iter().map(|z| z.norm()).collect();
        let first = mags[0];
        assert!(mags
            .iter()
            .all(|m| (m - first).abs() < 1e-12 * first.max(1.0)));
    }

    #[test]
    fn transform_round_trip_is_identity() {
        let n = 128;
        let xg = Grid::new(n, -(n as f64) / 2.0 * 0.25, 0.25, Representation::Position).unwrap();
        let raw = crate::rng::complex_normal_vec(3, 1, n);
        let psi = StateVector::new(xg, raw).unwrap().normalized().unwrap();
        let phi = position_to_momentum(&psi).unwrap();
        assert!((phi.norm() - 1.0).abs() < 1e-12);
        let back = momentum_to_position(&phi).unwrap();
        let err: f64 = back
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "round trip error {err}");
    }

    #[test]
    fn gaussian_transforms_to_reciprocal_width_gaussian() {
        // Direct discrete transform sum as an independent oracle.
        let n = 256;
        let dx = 0.25;
        let xg = Grid::new(n, -(n as f64) / 2.0 * dx, dx, Representation::Position).unwrap();
        let sigma_x: f64 = 2.0;
        let psi = StateVector::from_fn(xg, |x| {
            C64::new((-x * x / (4.0 * sigma_x * sigma_x)).exp(), 0.0)
        })
        .normalized()
        .unwrap();
        let phi = position_to_momentum(&psi).unwrap();

        // Oracle: direct sum, no FFT.
        let pg = *phi.grid();
        let scale = dx / (2.0 * std::f64::consts::PI).sqrt();
        for k in (0..n).step_by(37) {
            let p = pg.point(k);
            let direct: C64 = xg
                .points()
                .zip(psi.amplitudes())
                .map(|(x, z)| z * C64::from_polar(1.0, -p * x))
                .sum::<C64>()
                * scale;
            assert!((phi.amplitudes()[k] - direct).norm() < 1e-12);
        }

        // Width in momentum is 1/(2 sigma_x).
        let sigma_p_expected = 1.0 / (2.0 * sigma_x);
        let mean_p2: f64 = pg
            .points()
            .zip(phi.amplitudes())
            .map(|(p, z)| p * p * z.norm_sqr())
            .sum::<f64>()
            * pg.step();
        assert!((mean_p2.sqrt() - sigma_p_expected).abs() < 1e-6);
    }

    #[test]
    fn energy_map_massless_is_resampling_only() {
        let grid = test_packet_grid();
        let psi = gaussian_state(grid, 2.0, 0.1, 0.0).unwrap();
        let phi = momentum_to_energy(&psi, 0.0).unwrap();
        assert_eq!(phi.grid().rep(), Representation::EnergyHalfLine);
        assert!((phi.grid().step() - grid.step()).abs() < 1e-15);
        assert!((phi.norm_sq() - psi.norm_sq()).abs() < 1e-6);
    }

    #[test]
    fn energy_map_point_factor_matches_closed_form() {
        // At p = 1, m = 1: factor [E^2/(E^2-m^2)]^(1/4) = 2^(1/4).
        let e: f64 = 2.0_f64.sqrt();
        let factor = (e / 1.0).sqrt();
        assert!((factor - 2.0_f64.powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn energy_map_preserves_norm_and_round_trips() {
        let n = 1024;
        let dp = 4.0 / n as f64;
        let grid = Grid::new(n, 0.5 * dp, dp, Representation::Momentum).unwrap();
        let psi = gaussian_state(grid, 2.0, 0.1, 0.0).unwrap();
        let phi = momentum_to_energy(&psi, 1.0).unwrap();
        assert!(
            (phi.norm_sq() - 1.0).abs() < 1e-6,
            "norm after measure change: {}",
            phi.norm_sq()
        );
        let back = energy_to_momentum(&phi, 1.0, &grid).unwrap();
        let err: f64 = back
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
            * grid.step().sqrt();
        assert!(err < 1e-6, "round trip error {err}");
    }

    #[test]
    fn energy_map_rejects_nonpositive_momenta() {
        let g = Grid::new(8, -1.75, 0.5, Representation::Momentum).unwrap();
        let psi = StateVector::basis(g, 4).unwrap();
        assert!(momentum_to_energy(&psi, 1.0).is_err());
    }
}
