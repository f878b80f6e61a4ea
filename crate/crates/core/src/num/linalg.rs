//! Dense symmetric-matrix kernels.
//!
//! Everything here is plain row-major `ndarray` code; matrix products go
//! through `ndarray::dot`, which dispatches to a blocked GEMM for `f32`/`f64`.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Symmetric positive-definite matrix together with its lower Cholesky factor.
#[derive(Clone, Debug)]
pub struct SpdMatrix<T> {
    matrix: Array2<T>,
    factor: Array2<T>,
}

impl<T: Real> SpdMatrix<T> {
    /// Validates symmetry and positive definiteness.
    ///
    /// Inputs whose asymmetry is within `sqrt(eps)` relative are symmetrized
    /// as `(M + Mᵀ)/2`; larger asymmetry is rejected. Positive definiteness is
    /// established by a successful Cholesky factorisation.
    pub fn new(matrix: Array2<T>) -> Result<Self> {
        let (r, c) = matrix.dim();
        if r != c {
            return Err(Error::shape("square matrix", format!("{r}x{c}")));
        }
        let asym = relative_asymmetry(matrix.view());
        if asym > T::epsilon().sqrt().as_f64() {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        let matrix = symmetrize(matrix);
        let factor = cholesky_lower_raw(matrix.view())?;
        Ok(Self { matrix, factor })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: Array2::eye(dim),
            factor: Array2::eye(dim),
        }
    }

    pub fn from_diagonal(diag: &[T]) -> Result<Self> {
        let mut m = Array2::zeros((diag.len(), diag.len()));
        for (i, &v) in diag.iter().enumerate() {
            m[[i, i]] = v;
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<T> {
        &self.matrix
    }

    pub fn view(&self) -> ArrayView2<'_, T> {
        self.matrix.view()
    }

    /// Lower-triangular `L` with `L·Lᵀ = self`.
    pub fn factor(&self) -> &Array2<T> {
        &self.factor
    }

    pub fn into_inner(self) -> Array2<T> {
        self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.matrix[[i, j]]
    }

    pub fn log_det(&self) -> T {
        log_det_from_factor(self.factor.view())
    }

    pub fn inverse(&self) -> Result<SpdMatrix<T>> {
        spd_inverse(self)
    }
}

pub(crate) fn relative_asymmetry<T: Real>(m: ArrayView2<T>) -> f64 {
    let n = m.nrows();
    let mut scale = 0.0f64;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            scale = scale.max(m[[i, j]].abs().as_f64());
            if j > i {
                worst = worst.max((m[[i, j]] - m[[j, i]]).abs().as_f64());
            }
        }
    }
    if scale == 0.0 {
        0.0
    } else {
        worst / scale
    }
}

pub(crate) fn symmetrize<T: Real>(mut m: Array2<T>) -> Array2<T> {
    let n = m.nrows();
    let half = T::lit(0.5);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (m[[i, j]] + m[[j, i]]) * half;
            m[[i, j]] = v;
            m[[j, i]] = v;
        }
    }
    m
}

/// Lower Cholesky factor of an SPD matrix.
pub fn cholesky_lower<T: Real>(m: &SpdMatrix<T>) -> Array2<T> {
    m.factor.clone()
}

/// Cholesky factorisation of the lower triangle of `a`.
///
/// Fails with the 0-based index of the first non-positive pivot.
pub fn cholesky_lower_raw<T: Real>(a: ArrayView2<T>) -> Result<Array2<T>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::shape("square matrix", format!("{}x{}", n, a.ncols())));
    }
    let mut l = Array2::<T>::zeros((n, n));
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[[i, j]];
            {
                let li = l.row(i);
                let lj = l.row(j);
                for k in 0..j {
                    s -= li[k] * lj[k];
                }
            }
            if i == j {
                if !(s > T::zero()) || !s.is_finite() {
                    return Err(Error::NotPositiveDefinite { pivot: i });
                }
                l[[i, i]] = s.sqrt();
            } else {
                l[[i, j]] = s / l[[j, j]];
            }
        }
    }
    Ok(l)
}

pub fn log_det_from_factor<T: Real>(l: ArrayView2<T>) -> T {
    let two = T::lit(2.0);
    (0..l.nrows()).map(|i| l[[i, i]].ln()).sum::<T>() * two
}

/// Solves `L x = b` in place for lower-triangular `L`.
pub fn solve_lower_in_place<T: Real>(l: ArrayView2<T>, b: &mut [T]) {
    let n = b.len();
    for i in 0..n {
        let row = l.row(i);
        let mut s = b[i];
        for k in 0..i {
            s -= row[k] * b[k];
        }
        b[i] = s / row[i];
    }
}

/// Solves `Lᵀ x = b` in place for lower-triangular `L`.
pub fn solve_lower_transpose_in_place<T: Real>(l: ArrayView2<T>, b: &mut [T]) {
    let n = b.len();
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= l[[k, i]] * b[k];
        }
        b[i] = s / l[[i, i]];
    }
}

/// Solves `(L Lᵀ) x = b` given the lower factor.
pub fn cholesky_solve<T: Real>(l: ArrayView2<T>, b: ArrayView1<T>) -> Array1<T> {
    let mut x = b.to_vec();
    solve_lower_in_place(l, &mut x);
    solve_lower_transpose_in_place(l, &mut x);
    Array1::from(x)
}

/// Inverse of a lower-triangular matrix (itself lower-triangular).
pub fn lower_triangular_inverse<T: Real>(l: ArrayView2<T>) -> Array2<T> {
    let n = l.nrows();
    let mut inv = Array2::<T>::zeros((n, n));
    for j in 0..n {
        inv[[j, j]] = T::one() / l[[j, j]];
        for i in (j + 1)..n {
            let mut s = T::zero();
            for k in j..i {
                s += l[[i, k]] * inv[[k, j]];
            }
            inv[[i, j]] = -s / l[[i, i]];
        }
    }
    inv
}

/// Solves `Lᵀ X = B` for a dense right-hand side, column by column.
pub fn solve_lower_transpose_matrix<T: Real>(l: ArrayView2<T>, b: ArrayView2<T>) -> Array2<T> {
    let n = l.nrows();
    let mut x = b.to_owned();
    let m = x.ncols();
    for i in (0..n).rev() {
        let lii = l[[i, i]];
        for k in (i + 1)..n {
            let lki = l[[k, i]];
            if lki != T::zero() {
                let (head, tail) = x.view_mut().split_at(Axis(0), k);
                let mut xi = head.index_axis_move(Axis(0), i);
                let xk = tail.index_axis(Axis(0), 0);
                xi.scaled_add(-lki, &xk);
            }
        }
        let mut row = x.row_mut(i);
        row.mapv_inplace(|v| v / lii);
        debug_assert_eq!(row.len(), m);
    }
    x
}

/// Inverse of an SPD matrix via its Cholesky factor.
pub fn spd_inverse<T: Real>(m: &SpdMatrix<T>) -> Result<SpdMatrix<T>> {
    let linv = lower_triangular_inverse(m.factor.view());
    let inv = symmetrize(linv.t().dot(&linv));
    SpdMatrix::new(inv)
}

/// Inverse of a symmetric positive-definite array; convenience wrapper.
pub fn spd_inverse_raw<T: Real>(a: ArrayView2<T>) -> Result<Array2<T>> {
    let l = cholesky_lower_raw(a)?;
    let linv = lower_triangular_inverse(l.view());
    Ok(symmetrize(linv.t().dot(&linv)))
}

/// All eigenvalues of a symmetric matrix, ascending.
///
/// Householder tridiagonalisation followed by implicit QL; computed in `f64`.
pub fn symmetric_eigenvalues<T: Real>(a: ArrayView2<T>) -> Vec<f64> {
    let n = a.nrows();
    if n == 0 {
        return Vec::new();
    }
    let mut w = a.mapv(|v| v.as_f64());
    let (mut d, mut e) = tridiagonalize(&mut w);
    tql_implicit(&mut d, &mut e);
    d.sort_by(|x, y| x.total_cmp(y));
    d
}

pub fn min_eigenvalue<T: Real>(a: ArrayView2<T>) -> f64 {
    symmetric_eigenvalues(a).first().copied().unwrap_or(f64::NAN)
}

/// Reduces symmetric `a` to tridiagonal form; returns (diagonal, off-diagonal)
/// where `e[i]` couples `i` and `i + 1` and `e[n-1] = 0`.
fn tridiagonalize(a: &mut Array2<f64>) -> (Vec<f64>, Vec<f64>) {
    let n = a.nrows();
    let mut e = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<f64> = (k + 1..n).map(|i| a[[i, k]]).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let alpha = if v[0] > 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        e[k] = alpha;
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        let m = v.len();
        let off = k + 1;
        let mut p = vec![0.0; m];
        for i in 0..m {
            let mut s = 0.0;
            for j in 0..m {
                s += a[[off + i, off + j]] * v[j];
            }
            p[i] = beta * s;
        }
        let kk = 0.5 * beta * v.iter().zip(&p).map(|(x, y)| x * y).sum::<f64>();
        let w: Vec<f64> = p.iter().zip(&v).map(|(pi, vi)| pi - kk * vi).collect();
        for i in 0..m {
            for j in 0..m {
                a[[off + i, off + j]] -= v[i] * w[j] + w[i] * v[j];
            }
        }
    }
    if n >= 2 {
        e[n - 2] = a[[n - 1, n - 2]];
    }
    let d = (0..n).map(|i| a[[i, i]]).collect();
    (d, e)
}

fn tql_implicit(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
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
            if iter > 100 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// `XᵀX` for an `n×p` data matrix.
pub fn gram<T: Real>(x: ArrayView2<T>) -> Array2<T> {
    symmetrize(x.t().dot(&x))
}
