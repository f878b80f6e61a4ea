//! Exact solution path of the adaptive-lasso credible-region problem
//!
//! `minimize (β − β̂)ᵀ Q (β − β̂) + Δ Σ_j w_j |β_j|`, `Q = Σ̂⁻¹`, `w_j = β̂_j⁻²`,
//!
//! traced in β-space by a homotopy in `μ = Δ/2` from the empty model down to
//! `μ = 0`, where the solution is `β̂`. Along each segment the active
//! coefficients move linearly; knots are joins and sign-change drops. The
//! Cholesky factor of `Q_AA` is updated by appending rows and by Givens
//! deletions, so one path costs O(m³) for `m` variables.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::error::{Error, Result};

/// Piecewise-linear path `β(Δ)`, with knots in decreasing `Δ`.
#[derive(Clone, Debug)]
pub struct LassoPath {
    deltas: Vec<f64>,
    betas: Vec<Array1<f64>>,
    drops: usize,
}

impl LassoPath {
    /// The penalty at which the solution first becomes zero.
    pub fn terminal_delta(&self) -> f64 {
        self.deltas[0]
    }

    pub fn knots(&self) -> &[f64] {
        &self.deltas
    }

    pub fn knot_betas(&self) -> &[Array1<f64>] {
        &self.betas
    }

    /// Number of knots at which a coefficient left the active set.
    pub fn drop_count(&self) -> usize {
        self.drops
    }

    pub fn dim(&self) -> usize {
        self.betas[0].len()
    }

    /// Solution at penalty `Δ ≥ 0`, interpolated on the exact path.
    pub fn beta_at(&self, delta: f64) -> Array1<f64> {
        let m = self.dim();
        if delta >= self.deltas[0] {
            return Array1::zeros(m);
        }
        let last = self.deltas.len() - 1;
        if delta <= self.deltas[last] {
            return self.betas[last].clone();
        }
        // deltas are decreasing; find k with deltas[k] > delta >= deltas[k+1]
        let k = self.deltas.partition_point(|&d| d > delta) - 1;
        let (d0, d1) = (self.deltas[k], self.deltas[k + 1]);
        let t = (d0 - delta) / (d0 - d1);
        let (b0, b1) = (&self.betas[k], &self.betas[k + 1]);
        Array1::from_shape_fn(m, |j| {
            if b0[j] == 0.0 && b1[j] == 0.0 {
                0.0
            } else if t >= 1.0 {
                b1[j]
            } else {
                b0[j] + t * (b1[j] - b0[j])
            }
        })
    }

    /// Indices of the nonzero coefficients at `Δ`.
    pub fn support_at(&self, delta: f64) -> Vec<usize> {
        self.beta_at(delta)
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0.0)
            .map(|(j, _)| j)
            .collect()
    }
}

/// Lower Cholesky factor of a principal submatrix, grown and shrunk in place.
struct ActiveFactor {
    cap: usize,
    size: usize,
    l: Vec<f64>,
}

impl ActiveFactor {
    fn new(cap: usize) -> Self {
        Self {
            cap,
            size: 0,
            l: vec![0.0; cap * cap],
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.l[i * self.cap + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.l[i * self.cap + j] = v;
    }

    /// Appends a row/column with off-diagonal `col` and diagonal `diag`.
    fn append(&mut self, col: &[f64], diag: f64) -> bool {
        let n = self.size;
        let mut row = col.to_vec();
        for i in 0..n {
            let mut s = row[i];
            for k in 0..i {
                s -= self.at(i, k) * row[k];
            }
            row[i] = s / self.at(i, i);
        }
        let rr = diag - row.iter().map(|v| v * v).sum::<f64>();
        if !(rr > diag * 1e-14) {
            return false;
        }
        for (j, v) in row.into_iter().enumerate() {
            self.set(n, j, v);
        }
        self.set(n, n, rr.sqrt());
        self.size += 1;
        true
    }

    /// Removes row/column `m`, restoring triangularity with Givens rotations.
    fn remove(&mut self, m: usize) {
        let n = self.size;
        for i in m..n - 1 {
            for j in 0..=i + 1 {
                let v = self.at(i + 1, j);
                self.set(i, j, v);
            }
        }
        for k in m..n - 1 {
            let a = self.at(k, k);
            let b = self.at(k, k + 1);
            let r = a.hypot(b);
            let (c, s) = if r == 0.0 { (1.0, 0.0) } else { (a / r, b / r) };
            for i in k..n - 1 {
                let x = self.at(i, k);
                let y = self.at(i, k + 1);
                self.set(i, k, c * x + s * y);
                self.set(i, k + 1, -s * x + c * y);
            }
            self.set(k, k + 1, 0.0);
        }
        for j in 0..n {
            self.set(n - 1, j, 0.0);
        }
        self.size -= 1;
        for i in 0..self.size {
            if self.at(i, i) < 0.0 {
                for r in i..self.size {
                    let v = self.at(r, i);
                    self.set(r, i, -v);
                }
            }
        }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.size;
        let mut x = rhs.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= self.at(i, k) * x[k];
            }
            x[i] = s / self.at(i, i);
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in (i + 1)..n {
                s -= self.at(k, i) * x[k];
            }
            x[i] = s / self.at(i, i);
        }
        x
    }
}

/// Traces the full path for precision `q` (= Σ̂⁻¹) and centre `beta_hat`.
///
/// Coordinates with `β̂_j = 0` carry an infinite weight and never enter.
pub fn lasso_path(q: ArrayView2<f64>, beta_hat: ArrayView1<f64>) -> Result<LassoPath> {
    let m = beta_hat.len();
    if q.dim() != (m, m) {
        return Err(Error::shape(format!("{m}x{m} precision"), format!("{:?}", q.dim())));
    }
    let eligible: Vec<bool> = beta_hat.iter().map(|&b| b != 0.0 && b.is_finite()).collect();
    let w: Vec<f64> = beta_hat
        .iter()
        .map(|&b| if b != 0.0 { 1.0 / (b * b) } else { f64::INFINITY })
        .collect();
    let qb = q.dot(&beta_hat);

    // c = Q(β̂ − β); KKT: c_j = μ w_j s_j on the active set, |c_j| ≤ μ w_j off it
    let ratio = |c: &Array1<f64>, j: usize| c[j].abs() / w[j];
    let mut c = qb.clone();
    let mut mu = 0.0;
    let mut first = None;
    for j in 0..m {
        if eligible[j] && ratio(&c, j) > mu {
            mu = ratio(&c, j);
            first = Some(j);
        }
    }
    let mut beta = Array1::<f64>::zeros(m);
    let mut deltas = vec![2.0 * mu];
    let mut betas = vec![beta.clone()];
    let Some(first) = first else {
        deltas.push(0.0);
        betas.push(beta);
        return Ok(LassoPath { deltas, betas, drops: 0 });
    };

    let mut factor = ActiveFactor::new(m);
    let mut active: Vec<usize> = Vec::with_capacity(m);
    let mut signs: Vec<f64> = Vec::with_capacity(m);
    let mut in_active = vec![false; m];
    let add = |j: usize,
                   active: &mut Vec<usize>,
                   signs: &mut Vec<f64>,
                   in_active: &mut Vec<bool>,
                   factor: &mut ActiveFactor,
                   sign: f64|
     -> Result<()> {
        let col: Vec<f64> = active.iter().map(|&i| q[[i, j]]).collect();
        if !factor.append(&col, q[[j, j]]) {
            return Err(Error::NotPositiveDefinite { pivot: j });
        }
        active.push(j);
        signs.push(sign);
        in_active[j] = true;
        Ok(())
    };
    add(first, &mut active, &mut signs, &mut in_active, &mut factor, c[first].signum())?;

    let mut drops = 0;
    let mut last_dropped: Option<usize> = None;
    let mut last_added: Option<usize> = Some(first);
    let max_steps = 50 * m + 100;
    for _ in 0..max_steps {
        let rhs: Vec<f64> = active.iter().zip(&signs).map(|(&j, &s)| w[j] * s).collect();
        let dir_a = factor.solve(&rhs);
        let mut dir = Array1::<f64>::zeros(m);
        for (&j, &v) in active.iter().zip(&dir_a) {
            dir[j] = v;
        }
        let a = q.dot(&dir);

        let mut step = mu;
        let mut event: Option<(usize, bool)> = None;
        for j in 0..m {
            if !eligible[j] || in_active[j] || Some(j) == last_dropped {
                continue;
            }
            let lim = mu * w[j];
            for (num, den) in [(lim - c[j], w[j] - a[j]), (lim + c[j], w[j] + a[j])] {
                if den > 0.0 {
                    let t = (num / den).max(0.0);
                    if t < step {
                        step = t;
                        event = Some((j, true));
                    }
                }
            }
        }
        for &j in &active {
            if Some(j) == last_added {
                continue;
            }
            if beta[j] * dir[j] < 0.0 {
                let t = -beta[j] / dir[j];
                if t < step {
                    step = t;
                    event = Some((j, false));
                }
            }
        }

        for &j in &active {
            beta[j] += step * dir[j];
        }
        mu -= step;
        let Some((j, joins)) = event else {
            // reached μ = 0: the solution is β̂ on the eligible coordinates
            for &j in &active {
                beta[j] = beta_hat[j];
            }
            deltas.push(0.0);
            betas.push(beta);
            return Ok(LassoPath { deltas, betas, drops });
        };
        if joins {
            c = &qb - &q.dot(&beta);
            let sign = if c[j] >= 0.0 { 1.0 } else { -1.0 };
            add(j, &mut active, &mut signs, &mut in_active, &mut factor, sign)?;
            last_added = Some(j);
            last_dropped = None;
        } else {
            beta[j] = 0.0;
            let pos = active.iter().position(|&i| i == j).expect("active index");
            active.remove(pos);
            signs.remove(pos);
            factor.remove(pos);
            in_active[j] = false;
            drops += 1;
            last_dropped = Some(j);
            last_added = None;
            c = &qb - &q.dot(&beta);
        }
        deltas.push(2.0 * mu);
        betas.push(beta.clone());
    }
    Err(Error::invalid("path", "homotopy did not terminate"))
}

/// Subgradient residual of the optimality conditions at `(β, Δ)`:
/// the largest violation of `2Q(β − β̂) + Δ w∘s = 0` over all coordinates.
pub fn kkt_residual(q: ArrayView2<f64>, beta_hat: ArrayView1<f64>, beta: ArrayView1<f64>, delta: f64) -> f64 {
    let diff = &beta - &beta_hat;
    let grad = q.dot(&diff) * 2.0;
    let mut worst: f64 = 0.0;
    for j in 0..beta.len() {
        let bh = beta_hat[j];
        if bh == 0.0 {
            if beta[j] != 0.0 {
                return f64::INFINITY;
            }
            continue;
        }
        let wj = delta / (bh * bh);
        let r = if beta[j] != 0.0 {
            (grad[j] + wj * beta[j].signum()).abs()
        } else {
            (grad[j].abs() - wj).max(0.0)
        };
        worst = worst.max(r / (1.0 + wj));
    }
    worst
}

/// Computes `Q = Σ̂⁻¹` and traces the path.
pub fn credible_path(sigma_hat: ArrayView2<f64>, beta_hat: ArrayView1<f64>) -> Result<LassoPath> {
    let q: Array2<f64> = crate::num::linalg::spd_inverse_raw(sigma_hat)?;
    lasso_path(q.view(), beta_hat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn factor_append_and_remove_match_fresh_factorisation() {
        let q = array![
            [4.0, 1.0, 0.5, 0.2],
            [1.0, 3.0, 0.3, 0.1],
            [0.5, 0.3, 2.0, 0.4],
            [0.2, 0.1, 0.4, 1.5]
        ];
        let mut f = ActiveFactor::new(4);
        let order = [2usize, 0, 3, 1];
        for (n, &j) in order.iter().enumerate() {
            let col: Vec<f64> = order[..n].iter().map(|&i| q[[i, j]]).collect();
            assert!(f.append(&col, q[[j, j]]));
        }
        f.remove(1);
        let kept = [2usize, 3, 1];
        let rhs = [1.0, -2.0, 0.5];
        let x = f.solve(&rhs);
        for (r, &i) in kept.iter().enumerate() {
            let s: f64 = kept.iter().zip(&x).map(|(&j, &xj)| q[[i, j]] * xj).sum();
            assert!((s - rhs[r]).abs() < 1e-12);
        }
    }

    #[test]
    fn endpoints_of_the_path() {
        let q = array![[2.0, 0.3], [0.3, 1.0]];
        let bh = array![0.8, -0.1];
        let path = lasso_path(q.view(), bh.view()).unwrap();
        assert_eq!(path.support_at(0.0), vec![0, 1]);
        assert_eq!(path.beta_at(0.0), bh);
        assert!(path.support_at(path.terminal_delta()).is_empty());
        assert!(path.support_at(path.terminal_delta() * 1.01).is_empty());
    }

    #[test]
    fn zero_centre_coordinate_is_never_selected() {
        let q = Array2::<f64>::eye(3);
        let bh = array![0.5, 0.0, -0.2];
        let path = lasso_path(q.view(), bh.view()).unwrap();
        assert_eq!(path.support_at(0.0), vec![0, 2]);
        let all_zero = lasso_path(q.view(), array![0.0, 0.0, 0.0].view()).unwrap();
        assert!(all_zero.support_at(0.0).is_empty());
    }

    #[test]
    fn orthogonal_design_soft_thresholds() {
        // Q = I: β_j = sign(β̂_j) max(|β̂_j| − Δ/(2β̂_j²), 0)
        let q = Array2::<f64>::eye(3);
        let bh = array![1.0, -0.5, 0.25];
        let path = lasso_path(q.view(), bh.view()).unwrap();
        for &delta in &[0.0, 0.01, 0.02, 0.05, 0.2, 1.0, 2.5] {
            let b = path.beta_at(delta);
            for j in 0..3 {
                let shrink = delta / (2.0 * bh[j] * bh[j]);
                let expect = bh[j].signum() * (bh[j].abs() - shrink).max(0.0);
                assert!((b[j] - expect).abs() < 1e-12, "Δ={delta} j={j}: {} vs {expect}", b[j]);
            }
        }
        assert!((path.terminal_delta() - 2.0).abs() < 1e-12);
    }
}
