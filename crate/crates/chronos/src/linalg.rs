//! Dense complex linear algebra kernels: Hermitian eigendecomposition,
//! LU inversion, and small helpers shared by the operator modules.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub fn conj_transpose(a: &Array2<C64>) -> Array2<C64> {
    let mut out = Array2::default((a.ncols(), a.nrows()));
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            out[[j, i]] = a[[i, j]].conj();
        }
    }
    out
}

pub fn frobenius(a: &Array2<C64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Kronecker product of a 2x2 spin block with an n x n space matrix.
/// Index convention: flat index = spin * n + space.
pub fn kron2(spin: &[[C64; 2]; 2], m: &Array2<C64>) -> Array2<C64> {
    let n = m.nrows();
    let mut out = Array2::default((2 * n, 2 * n));
    for si in 0..2 {
        for sj in 0..2 {
            let s = spin[si][sj];
            if s == C64::default() {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    out[[si * n + i, sj * n + j]] = s * m[[i, j]];
                }
            }
        }
    }
    out
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and the unitary matrix whose
/// columns are the matching eigenvectors, so that `a = q diag(vals) q^dagger`.
/// Householder reduction to real symmetric tridiagonal form followed by
/// implicit-shift QL iteration.
pub fn hermitian_eigen(a: &Array2<C64>) -> Result<(Vec<f64>, Array2<C64>)> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "hermitian_eigen expects a square matrix");
    if n == 0 {
        return Ok((Vec::new(), Array2::default((0, 0))));
    }
    let mut w = a.clone();
    let mut q: Array2<C64> = Array2::eye(n);

    // Reduce to Hermitian tridiagonal form with two-sided reflectors.
    for k in 0..n.saturating_sub(2) {
        let m = n - (k + 1);
        let mut xnorm2 = 0.0;
        for i in k + 1..n {
            xnorm2 += w[[i, k]].norm_sqr();
        }
        let xnorm = xnorm2.sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = w[[k + 1, k]];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * xnorm;

        let mut v: Vec<C64> = (k + 1..n).map(|i| w[[i, k]]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;

        // p = tau * W v on the trailing block
        let mut p = vec![C64::default(); m];
        for i in 0..m {
            let mut acc = C64::default();
            for j in 0..m {
                acc += w[[k + 1 + i, k + 1 + j]] * v[j];
            }
            p[i] = acc * tau;
        }
        let vp: C64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let kappa = vp * (tau * 0.5);
        let u: Vec<C64> = p.iter().zip(&v).map(|(pi, vi)| pi - kappa * vi).collect();

        for i in 0..m {
            for j in 0..m {
                let delta = v[i] * u[j].conj() + u[i] * v[j].conj();
                w[[k + 1 + i, k + 1 + j]] -= delta;
            }
        }
        w[[k + 1, k]] = alpha;
        w[[k, k + 1]] = alpha.conj();
        for i in k + 2..n {
            w[[i, k]] = C64::default();
            w[[k, i]] = C64::default();
        }

        // Q <- Q (I - tau v v^dagger)
        for r in 0..n {
            let mut acc = C64::default();
            for j in 0..m {
                acc += q[[r, k + 1 + j]] * v[j];
            }
            let acc = acc * tau;
            for j in 0..m {
                q[[r, k + 1 + j]] -= acc * v[j].conj();
            }
        }
    }

    // Rotate column phases so the subdiagonal becomes real non-negative.
    let mut d: Vec<f64> = (0..n).map(|i| w[[i, i]].re).collect();
    let mut e = vec![0.0f64; n];
    let mut phase = C64::new(1.0, 0.0);
    for i in 0..n.saturating_sub(1) {
        let sub = w[[i + 1, i]];
        let mag = sub.norm();
        e[i] = mag;
        if mag > 0.0 {
            phase *= sub / mag;
        }
        for r in 0..n {
            q[[r, i + 1]] *= phase;
        }
    }

    ql_implicit(&mut d, &mut e, &mut q)?;

    // Sort ascending, permuting eigenvector columns to match.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("eigenvalue NaN"));
    let vals: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vecs = Array2::default((n, n));
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vecs[[r, dst]] = q[[r, src]];
        }
    }
    Ok((vals, vecs))
}

/// Implicit-shift QL iteration on a real symmetric tridiagonal matrix,
/// accumulating the real rotations into the complex columns of `q`.
fn ql_implicit(d: &mut [f64], e: &mut [f64], q: &mut Array2<C64>) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::EigenNoConvergence { index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let denom = g + if g >= 0.0 { r } else { -r };
            g = d[m] - d[l] + e[l] / denom;
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in 0..q.nrows() {
                    let zi1 = q[[row, i + 1]];
                    let zi = q[[row, i]];
                    q[[row, i + 1]] = zi * s + zi1 * c;
                    q[[row, i]] = zi * c - zi1 * s;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// LU factorization with partial pivoting.
pub struct Lu {
    lu: Array2<C64>,
    pivots: Vec<usize>,
}

pub fn lu_decompose(a: &Array2<C64>) -> Result<Lu> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let mut lu = a.clone();
    let mut pivots = vec![0usize; n];
    for k in 0..n {
        let mut imax = k;
        let mut vmax = lu[[k, k]].norm();
        for i in k + 1..n {
            let v = lu[[i, k]].norm();
            if v > vmax {
                vmax = v;
                imax = i;
            }
        }
        if vmax == 0.0 {
            return Err(Error::SingularMatrix { pivot: k });
        }
        pivots[k] = imax;
        if imax != k {
            for j in 0..n {
                let tmp = lu[[k, j]];
                lu[[k, j]] = lu[[imax, j]];
                lu[[imax, j]] = tmp;
            }
        }
        let pivot = lu[[k, k]];
        for i in k + 1..n {
            let factor = lu[[i, k]] / pivot;
            lu[[i, k]] = factor;
            if factor != C64::default() {
                for j in k + 1..n {
                    let sub = factor * lu[[k, j]];
                    lu[[i, j]] -= sub;
                }
            }
        }
    }
    Ok(Lu { lu, pivots })
}

impl Lu {
    pub fn solve_in_place(&self, b: &mut [C64]) {
        let n = self.pivots.len();
        assert_eq!(b.len(), n);
        for k in 0..n {
            b.swap(k, self.pivots[k]);
        }
        for i in 0..n {
            for j in 0..i {
                let sub = self.lu[[i, j]] * b[j];
                b[i] -= sub;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let sub = self.lu[[i, j]] * b[j];
                b[i] -= sub;
            }
            b[i] /= self.lu[[i, i]];
        }
    }
}

/// Dense inverse via LU with partial pivoting.
pub fn invert(a: &Array2<C64>) -> Result<Array2<C64>> {
    let n = a.nrows();
    let lu = lu_decompose(a)?;
    let mut out = Array2::default((n, n));
    let mut col = vec![C64::default(); n];
    for j in 0..n {
        col.iter_mut().for_each(|z| *z = C64::default());
        col[j] = C64::new(1.0, 0.0);
        lu.solve_in_place(&mut col);
        for i in 0..n {
            out[[i, j]] = col[i];
        }
    }
    Ok(out)
}

/// Smallest and largest singular values, from the spectrum of `a^dagger a`.
pub fn singular_value_range(a: &Array2<C64>) -> Result<(f64, f64)> {
    let aha = conj_transpose(a).dot(a);
    let (vals, _) = hermitian_eigen(&aha)?;
    let lo = vals.first().copied().unwrap_or(0.0).max(0.0).sqrt();
    let hi = vals.last().copied().unwrap_or(0.0).max(0.0).sqrt();
    Ok((lo, hi))
}
