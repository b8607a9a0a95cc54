//! Dense operator algebra on a grid: differentiation and multiplication
//! matrices, symmetrized products, commutators, and defect measures.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::lattice::{Grid, Representation, SpinorState, StateVector};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeScheme {
    /// Fourier collocation matrix; treats the grid as periodic. Exact on
    /// band-limited samples, machine-accurate on interior-supported states.
    Spectral,
    /// Fourth-order central differences with one-sided rows at the ends.
    CentralDifference4,
}

/// Dense complex matrix bound to a grid and a spin dimension (1 or 2).
#[derive(Debug, Clone)]
pub struct LinearOperator {
    grid: Grid,
    spin_dim: usize,
    mat: Array2<C64>,
}

impl LinearOperator {
    pub fn from_matrix(grid: Grid, spin_dim: usize, mat: Array2<C64>) -> Result<Self> {
        if spin_dim != 1 && spin_dim != 2 {
            return Err(Error::GridMismatch(format!(
                "spin_dim must be 1 or 2, got {spin_dim}"
            )));
        }
        let side = grid.len() * spin_dim;
        if mat.nrows() != side || mat.ncols() != side {
            return Err(Error::GridMismatch(format!(
                "matrix side {} does not match grid.n * spin_dim = {side}",
                mat.nrows()
            )));
        }
        Ok(LinearOperator {
            grid,
            spin_dim,
            mat,
        })
    }

    pub fn identity(grid: Grid, spin_dim: usize) -> Self {
        let side = grid.len() * spin_dim;
        LinearOperator {
            grid,
            spin_dim,
            mat: Array2::eye(side),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn spin_dim(&self) -> usize {
        self.spin_dim
    }

    pub fn rep(&self) -> Representation {
        self.grid.rep()
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.mat
    }

    pub fn adjoint(&self) -> Self {
        LinearOperator {
            grid: self.grid,
            spin_dim: self.spin_dim,
            mat: linalg::conj_transpose(&self.mat),
        }
    }

    pub fn scale(&self, z: C64) -> Self {
        LinearOperator {
            grid: self.grid,
            spin_dim: self.spin_dim,
            mat: self.mat.mapv(|w| w * z),
        }
    }

    fn check_compatible(&self, rhs: &Self, what: &str) -> Result<()> {
        if self.grid != rhs.grid || self.spin_dim != rhs.spin_dim {
            return Err(Error::GridMismatch(format!(
                "{what}: operators live on different grids or spin dimensions"
            )));
        }
        Ok(())
    }

    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs, "compose")?;
        Ok(LinearOperator {
            grid: self.grid,
            spin_dim: self.spin_dim,
            mat: self.mat.dot(&rhs.mat),
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs, "add")?;
        Ok(LinearOperator {
            grid: self.grid,
            spin_dim: self.spin_dim,
            mat: &self.mat + &rhs.mat,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs, "sub")?;
        Ok(LinearOperator {
            grid: self.grid,
            spin_dim: self.spin_dim,
            mat: &self.mat - &rhs.mat,
        })
    }

    pub fn apply_flat(&self, flat: &[C64]) -> Vec<C64> {
        assert_eq!(flat.len(), self.dim());
        // One-column GEMM: hits the SIMD complex kernel, unlike the generic
        // mat-vec fallback.
        let v = ndarray::ArrayView2::from_shape((flat.len(), 1), flat)
            .expect("flat slice is contiguous");
        self.mat.dot(&v).into_raw_vec_and_offset().0
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if self.spin_dim != 1 || *state.grid() != self.grid {
            return Err(Error::GridMismatch(
                "apply: state does not match operator".into(),
            ));
        }
        StateVector::new(self.grid, self.apply_flat(state.amplitudes()))
    }

    pub fn apply_spinor(&self, state: &SpinorState) -> Result<SpinorState> {
        if self.spin_dim != 2 || *state.grid() != self.grid {
            return Err(Error::GridMismatch(
                "apply_spinor: state does not match operator".into(),
            ));
        }
        let flat = self.apply_flat(&state.to_flat());
        SpinorState::from_flat(self.grid, &flat)
    }

    /// Measure-weighted expectation value `<psi|A|psi>`.
    pub fn expectation(&self, state: &StateVector) -> Result<C64> {
        let ap = self.apply(state)?;
        Ok(state.inner(&ap))
    }

    pub fn expectation_spinor(&self, state: &SpinorState) -> Result<C64> {
        let flat = state.to_flat();
        let ap = self.apply_flat(&flat);
        let acc: C64 = flat.iter().zip(&ap).map(|(a, b)| a.conj() * b).sum();
        Ok(acc * self.grid.step())
    }

    /// Measure-weighted matrix element `<bra|A|ket>`.
    pub fn matrix_element(&self, bra: &StateVector, ket: &StateVector) -> Result<C64> {
        let ap = self.apply(ket)?;
        Ok(bra.inner(&ap))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.mat[[i, j]] != C64::default() {
                    return false;
                }
            }
        }
        true
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim()).map(|i| self.mat[[i, i]]).collect()
    }

    pub fn frobenius(&self) -> f64 {
        linalg::frobenius(&self.mat)
    }
}

/// Kronecker product of a 2x2 spin block with a scalar space operator.
pub fn kron_spin(spin: &[[C64; 2]; 2], space: &LinearOperator) -> Result<LinearOperator> {
    if space.spin_dim() != 1 {
        return Err(Error::GridMismatch(
            "kron_spin expects a scalar space operator".into(),
        ));
    }
    LinearOperator::from_matrix(*space.grid(), 2, linalg::kron2(spin, space.matrix()))
}

/// Differentiation matrix `d/dq` on the grid coordinate.
pub fn derivative_operator(grid: Grid, scheme: DerivativeScheme) -> Result<LinearOperator> {
    let n = grid.len();
    let h = grid.step();
    let mut mat = Array2::default((n, n));
    match scheme {
        DerivativeScheme::Spectral => {
            let length = n as f64 * h;
            let scale = std::f64::consts::PI / length;
            for j in 0..n {
                for k in 0..n {
                    if j == k {
                        continue;
                    }
                    let d = j as i64 - k as i64;
                    let angle = std::f64::consts::PI * d as f64 / n as f64;
                    let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
                    let v = if n % 2 == 0 {
                        sign * angle.cos() / angle.sin()
                    } else {
                        sign / angle.sin()
                    };
                    mat[[j, k]] = C64::new(scale * v, 0.0);
                }
            }
        }
        DerivativeScheme::CentralDifference4 => {
            if n < 5 {
                return Err(Error::InvalidGrid(format!(
                    "fourth-order differences need at least 5 points, got {n}"
                )));
            }
            let w = 1.0 / (12.0 * h);
            for j in 2..n - 2 {
                mat[[j, j - 2]] = C64::new(w, 0.0);
                mat[[j, j - 1]] = C64::new(-8.0 * w, 0.0);
                mat[[j, j + 1]] = C64::new(8.0 * w, 0.0);
                mat[[j, j + 2]] = C64::new(-w, 0.0);
            }
            // One-sided fourth-order rows at the ends.
            let first: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
            let second: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];
            for (c, v) in first.iter().enumerate() {
                mat[[0, c]] = C64::new(v * w, 0.0);
                mat[[n - 1, n - 1 - c]] = C64::new(-v * w, 0.0);
            }
            for (c, v) in second.iter().enumerate() {
                mat[[1, c]] = C64::new(v * w, 0.0);
                mat[[n - 2, n - 1 - c]] = C64::new(-v * w, 0.0);
            }
        }
    }
    LinearOperator::from_matrix(grid, 1, mat)
}

/// Diagonal operator acting as multiplication by `f(coordinate)`.
pub fn multiplication_operator(grid: Grid, f: impl Fn(f64) -> C64) -> Result<LinearOperator> {
    let n = grid.len();
    let mut mat = Array2::default((n, n));
    for (k, q) in grid.points().enumerate() {
        let v = f(q);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite {
                coordinate: q,
                value: format!("{v}"),
            });
        }
        mat[[k, k]] = v;
    }
    LinearOperator::from_matrix(grid, 1, mat)
}

/// Multiplication by a real function of the coordinate.
pub fn multiplication_real(grid: Grid, f: impl Fn(f64) -> f64) -> Result<LinearOperator> {
    multiplication_operator(grid, |q| C64::new(f(q), 0.0))
}

/// Multiplication by the coordinate itself (x on position grids, p on
/// momentum grids, E on energy grids).
pub fn coordinate_operator(grid: Grid) -> Result<LinearOperator> {
    multiplication_real(grid, |q| q)
}

/// Diagonal `1/p` on an offset momentum grid.
pub fn inverse_momentum(grid: Grid) -> Result<LinearOperator> {
    if grid.rep() != Representation::Momentum {
        return Err(Error::GridMismatch(
            "inverse_momentum expects a momentum grid".into(),
        ));
    }
    let pmin_abs = grid.points().map(f64::abs).fold(f64::INFINITY, f64::min);
    if pmin_abs < 0.5 * grid.step() * (1.0 - 1e-12) {
        return Err(Error::ZeroMomentumPoint { pmin_abs });
    }
    multiplication_real(grid, |p| 1.0 / p)
}

/// `A B - B A`.
pub fn commutator(a: &LinearOperator, b: &LinearOperator) -> Result<LinearOperator> {
    a.check_compatible(b, "commutator")?;
    let ab = a.mat.dot(&b.mat);
    let ba = b.mat.dot(&a.mat);
    LinearOperator::from_matrix(a.grid, a.spin_dim, ab - ba)
}

/// `(A B + B A) / 2`.
pub fn symmetrize(a: &LinearOperator, b: &LinearOperator) -> Result<LinearOperator> {
    a.check_compatible(b, "symmetrize")?;
    let ab = a.mat.dot(&b.mat);
    let ba = b.mat.dot(&a.mat);
    LinearOperator::from_matrix(a.grid, a.spin_dim, (ab + ba).mapv(|z| z * 0.5))
}

/// `|A - A^dagger|_F / max(1, |A|_F)`.
pub fn hermiticity_defect(a: &LinearOperator) -> f64 {
    let n = a.dim();
    let mut diff = 0.0;
    let mut norm = 0.0;
    for i in 0..n {
        let d = a.mat[[i, i]];
        diff += 4.0 * d.im * d.im;
        norm += d.norm_sqr();
        for j in i + 1..n {
            let upper = a.mat[[i, j]];
            let lower = a.mat[[j, i]];
            diff += 2.0 * (upper - lower.conj()).norm_sqr();
            norm += upper.norm_sqr() + lower.norm_sqr();
        }
    }
    diff.sqrt() / norm.sqrt().max(1.0)
}

/// Hermiticity defect restricted to rows/columns whose space index lies at
/// least `margin` points away from both grid ends (applied per spin block).
pub fn hermiticity_defect_interior(a: &LinearOperator, margin: usize) -> f64 {
    let n = a.grid.len();
    if 2 * margin >= n {
        return 0.0;
    }
    let keep: Vec<usize> = (0..a.spin_dim)
        .flat_map(|s| (margin..n - margin).map(move |k| s * n + k))
        .collect();
    let mut num = 0.0;
    let mut den = 0.0;
    for &i in &keep {
        for &j in &keep {
            let d = a.mat[[i, j]] - a.mat[[j, i]].conj();
            num += d.norm_sqr();
            den += a.mat[[i, j]].norm_sqr();
        }
    }
    num.sqrt() / den.sqrt().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::gaussian_state;

    fn momentum_grid(n: usize, pmax: f64) -> Grid {
        let dp = pmax / n as f64;
        Grid::new(n, 0.5 * dp, dp, Representation::Momentum).unwrap()
    }

    #[test]
    fn spectral_derivative_of_constant_vanishes() {
        let g = Grid::new(32, 0.0, 0.5, Representation::Position).unwrap();
        let d = derivative_operator(g, DerivativeScheme::Spectral).unwrap();
        let ones = vec![C64::new(1.0, 0.0); 32];
        let out = d.apply_flat(&ones);
        assert!(out.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn spectral_derivative_matches_band_limited_oracle() {
        let n = 64;
        let length = 2.0 * std::f64::consts::PI;
        let g = Grid::new(n, 0.0, length / n as f64, Representation::Position).unwrap();
        let d = derivative_operator(g, DerivativeScheme::Spectral).unwrap();
        for wave in [1.0, 3.0, 7.0] {
            let samples: Vec<C64> = g
                .points()
                .map(|x| C64::new((wave * x).sin(), 0.0))
                .collect();
            let expected: Vec<f64> = g.points().map(|x| wave * (wave * x).cos()).collect();
            let out = d.apply_flat(&samples);
            for (z, e) in out.iter().zip(&expected) {
                assert!((z.re - e).abs() < 1e-10, "wave {wave}: {} vs {e}", z.re);
            }
        }
    }

    #[test]
    fn spectral_derivative_is_exactly_antisymmetric() {
        for n in [16usize, 17] {
            let g = Grid::new(n, -1.0, 0.125, Representation::Momentum).unwrap();
            let d = derivative_operator(g, DerivativeScheme::Spectral).unwrap();
            let i_d = d.scale(C64::new(0.0, 1.0));
            assert_eq!(hermiticity_defect(&i_d), 0.0, "n = {n}");
        }
    }

    #[test]
    fn cd4_differentiates_quadratics_exactly_inside() {
        let n = 40;
        let g = Grid::new(n, -2.0, 0.1, Representation::EnergyFullLine).unwrap();
        let d = derivative_operator(g, DerivativeScheme::CentralDifference4).unwrap();
        let samples: Vec<C64> = g.points().map(|x| C64::new(x * x, 0.0)).collect();
        let out = d.apply_flat(&samples);
        for (k, x) in g.points().enumerate().take(n - 2).skip(2) {
            assert!((out[k].re - 2.0 * x).abs() < 1e-11, "row {k}");
        }
        // Interior block of i D is exactly Hermitian; boundary rows are not.
        let i_d = d.scale(C64::new(0.0, 1.0));
        assert_eq!(hermiticity_defect_interior(&i_d, 2), 0.0);
        assert!(hermiticity_defect(&i_d) > 1e-3);
    }

    #[test]
    fn cd4_needs_five_points() {
        let g = Grid::new(4, 0.0, 1.0, Representation::EnergyHalfLine).unwrap();
        assert!(derivative_operator(g, DerivativeScheme::CentralDifference4).is_err());
    }

    #[test]
    fn multiplication_operator_examples() {
        let g = Grid::new(4, -1.5, 1.0, Representation::Momentum).unwrap();
        let m = coordinate_operator(g).unwrap();
        let diag = m.diagonal();
        assert_eq!(
            diag.iter().map(|z| z.re).collect::<Vec<_>>(),
            vec![-1.5, -0.5, 0.5, 1.5]
        );
        let one = multiplication_real(g, |_| 1.0).unwrap();
        assert!(one.is_diagonal());
        assert_eq!(one.matrix(), LinearOperator::identity(g, 1).matrix());

        // sqrt(p^2 + 1) at p = 1 is sqrt(2); use a grid containing p = 1.
        let g2 = Grid::new(4, -2.0, 1.0, Representation::Position).unwrap();
        let e = multiplication_real(g2, |p| (p * p + 1.0).sqrt()).unwrap();
        assert!((e.diagonal()[3].re - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn multiplication_rejects_non_finite_values() {
        let g = Grid::new(4, -1.0, 1.0, Representation::Position).unwrap();
        let err = multiplication_real(g, |x| 1.0 / x).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn inverse_momentum_examples() {
        let g = Grid::new(4, -1.5, 1.0, Representation::Momentum).unwrap();
        let pinv = inverse_momentum(g).unwrap();
        let expected = [-2.0 / 3.0, -2.0, 2.0, 2.0 / 3.0];
        for (z, e) in pinv.diagonal().iter().zip(expected) {
            assert!((z.re - e).abs() < 1e-15);
        }
        let p = coordinate_operator(g).unwrap();
        let prod = p.compose(&pinv).unwrap();
        let eye = LinearOperator::identity(g, 1);
        assert!(linalg::max_abs_diff(prod.matrix(), eye.matrix()) < 1e-14);

        let g_zero = Grid::new(4, -1.0, 1.0, Representation::Momentum).unwrap();
        assert!(matches!(
            inverse_momentum(g_zero),
            Err(Error::ZeroMomentumPoint { .. })
        ));
    }

    #[test]
    fn commutator_of_operator_with_itself_vanishes() {
        let g = momentum_grid(16, 4.0);
        let p = coordinate_operator(g).unwrap();
        let c = commutator(&p, &p).unwrap();
        assert_eq!(c.frobenius(), 0.0);
    }

    #[test]
    fn position_momentum_commutator_acts_as_i_on_interior_states() {
        let g = momentum_grid(512, 4.0);
        let x = derivative_operator(g, DerivativeScheme::Spectral)
            .unwrap()
            .scale(C64::new(0.0, 1.0));
        let p = coordinate_operator(g).unwrap();
        let c = commutator(&x, &p).unwrap();
        let psi = gaussian_state(g, 2.0, 0.05, -10.0).unwrap();
        let cpsi = c.apply(&psi).unwrap();
        let resid: f64 = cpsi
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .map(|(c, s)| (c - C64::new(0.0, 1.0) * s).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let norm: f64 = psi
            .amplitudes()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(resid / norm < 1e-8, "residual {}", resid / norm);
    }

    #[test]
    fn energy_commutator_matches_minus_i_convention() {
        // [diag(E), i d/dE] acts as -i on interior states.
        let n = 512;
        let de = 1.0 / 32.0;
        let g = Grid::new(n, 0.0, de, Representation::EnergyHalfLine).unwrap();
        let s = derivative_operator(g, DerivativeScheme::CentralDifference4)
            .unwrap()
            .scale(C64::new(0.0, 1.0));
        let e = coordinate_operator(g).unwrap();
        let c = commutator(&e, &s).unwrap();
        let center = 0.5 * n as f64 * de;
        let sigma = 30.0 * de;
        let psi = StateVector::from_fn(g, |q| {
            C64::new(
                (-(q - center) * (q - center) / (4.0 * sigma * sigma)).exp(),
                0.0,
            )
        })
        .normalized()
        .unwrap();
        let cpsi = c.apply(&psi).unwrap();
        let resid: f64 = cpsi
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .map(|(c, s)| (c + C64::new(0.0, 1.0) * s).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let norm: f64 = psi
            .amplitudes()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(resid / norm < 1e-6, "residual {}", resid / norm);
    }

    #[test]
    fn symmetrize_examples() {
        let g = Grid::new(2, 0.0, 1.0, Representation::Position).unwrap();
        let eye = LinearOperator::identity(g, 1);
        let s = symmetrize(&eye, &eye).unwrap();
        assert!(linalg::max_abs_diff(s.matrix(), eye.matrix()) < 1e-15);

        let a = multiplication_real(g, |x| x + 1.0).unwrap(); // diag(1, 2)
        let b = multiplication_real(g, |x| x + 3.0).unwrap(); // diag(3, 4)
        let s = symmetrize(&a, &b).unwrap();
        assert_eq!(s.diagonal()[0].re, 3.0);
        assert_eq!(s.diagonal()[1].re, 8.0);
    }

    #[test]
    fn symmetrize_matches_explicit_product_oracle() {
        let g = Grid::new(4, -1.5, 1.0, Representation::Momentum).unwrap();
        let x = derivative_operator(g, DerivativeScheme::Spectral)
            .unwrap()
            .scale(C64::new(0.0, 1.0));
        let pinv = inverse_momentum(g).unwrap();
        let s = symmetrize(&x, &pinv).unwrap();
        // Entrywise oracle from explicit 4x4 multiplication.
        let xm = x.matrix();
        let pm = pinv.matrix();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = C64::default();
                for k in 0..4 {
                    acc += xm[[i, k]] * pm[[k, j]] + pm[[i, k]] * xm[[k, j]];
                }
                acc *= 0.5;
                assert!((s.matrix()[[i, j]] - acc).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn symmetrize_and_i_commutator_preserve_hermiticity() {
        let g = momentum_grid(32, 4.0);
        let x = derivative_operator(g, DerivativeScheme::Spectral)
            .unwrap()
            .scale(C64::new(0.0, 1.0));
        let p = coordinate_operator(g).unwrap();
        let s = symmetrize(&x, &p).unwrap();
        assert!(hermiticity_defect(&s) <= 1e-12);
        let ic = commutator(&x, &p).unwrap().scale(C64::new(0.0, 1.0));
        assert!(hermiticity_defect(&ic) <= 1e-12);
    }

    #[test]
    fn hermiticity_defect_examples() {
        let g = Grid::new(2, 0.0, 1.0, Representation::Position).unwrap();
        let real_diag = multiplication_real(g, |x| 3.0 * x - 1.0).unwrap();
        assert_eq!(hermiticity_defect(&real_diag), 0.0);

        // i times a real antisymmetric matrix is Hermitian.
        let mut anti = Array2::default((2, 2));
        anti[[0, 1]] = C64::new(0.0, 2.0);
        anti[[1, 0]] = C64::new(0.0, -2.0);
        let op = LinearOperator::from_matrix(g, 1, anti).unwrap();
        assert_eq!(hermiticity_defect(&op), 0.0);

        // [[0, 1], [0, 0]] has defect sqrt(2).
        let mut nil = Array2::default((2, 2));
        nil[[0, 1]] = C64::new(1.0, 0.0);
        let op = LinearOperator::from_matrix(g, 1, nil).unwrap();
        assert!((hermiticity_defect(&op) - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn diagonal_products_are_exact() {
        let g = Grid::new(16, 0.25, 0.5, Representation::Momentum).unwrap();
        let f = multiplication_real(g, |p| p * p - 2.0).unwrap();
        let h = multiplication_real(g, |p| 1.0 / (p + 9.0)).unwrap();
        let fg = f.compose(&h).unwrap();
        let direct = multiplication_real(g, |p| (p * p - 2.0) * (1.0 / (p + 9.0))).unwrap();
        assert_eq!(linalg::max_abs_diff(fg.matrix(), direct.matrix()), 0.0);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let g1 = momentum_grid(8, 4.0);
        let g2 = momentum_grid(16, 4.0);
        let a = coordinate_operator(g1).unwrap();
        let b = coordinate_operator(g2).unwrap();
        assert!(commutator(&a, &b).is_err());
        assert!(symmetrize(&a, &b).is_err());
    }
}
