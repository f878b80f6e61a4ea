//! Streaming first and second moments of the node-wise regression coefficients.

use ndarray::{Array1, Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Writes `β_kj = −Ω_kj / Ω_kk` for `j ≠ k`, ascending in `j`, into `out`.
pub fn write_betas<T: Real>(omega: ArrayView2<T>, k: usize, out: &mut [T]) {
    let p = omega.nrows();
    let inv = -T::one() / omega[[k, k]];
    let row = omega.row(k);
    let mut idx = 0;
    for j in 0..p {
        if j != k {
            out[idx] = row[j] * inv;
            idx += 1;
        }
    }
}

/// Per-node running mean and scatter matrix (Welford), with each scatter
/// matrix stored as a packed lower triangle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NodeMoments<T> {
    p: usize,
    count: usize,
    means: Vec<T>,
    scatter: Vec<T>,
}

impl<T: Real> NodeMoments<T> {
    pub fn new(p: usize) -> Self {
        let m = p.saturating_sub(1);
        Self {
            p,
            count: 0,
            means: vec![T::zero(); p * m],
            scatter: vec![T::zero(); p * m * (m + 1) / 2],
        }
    }

    /// Rebuilds the accumulator from per-node means and covariances over
    /// `count` draws.
    pub fn from_summaries(count: usize, means: &[Array1<T>], covariances: &[Array2<T>]) -> Result<Self> {
        let p = means.len();
        if covariances.len() != p {
            return Err(Error::shape(format!("{p} covariance matrices"), covariances.len()));
        }
        let mut out = Self::new(p);
        out.count = count;
        if p < 2 {
            return Ok(out);
        }
        let m = p - 1;
        let packed = out.packed_len();
        let scale = T::from_count(count.max(2) - 1);
        for k in 0..p {
            if means[k].len() != m || covariances[k].dim() != (m, m) {
                return Err(Error::shape(
                    format!("node {}: {m} coefficients", k + 1),
                    format!("{} and {:?}", means[k].len(), covariances[k].dim()),
                ));
            }
            for (dst, &v) in out.means[k * m..(k + 1) * m].iter_mut().zip(means[k].iter()) {
                *dst = v;
            }
            let tri = &mut out.scatter[k * packed..(k + 1) * packed];
            let mut off = 0;
            for i in 0..m {
                for j in 0..=i {
                    tri[off + j] = covariances[k][[i, j]] * scale;
                }
                off += i + 1;
            }
        }
        Ok(out)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn count(&self) -> usize {
        self.count
    }

    fn packed_len(&self) -> usize {
        let m = self.p - 1;
        m * (m + 1) / 2
    }

    /// Adds one precision-matrix draw.
    pub fn push_omega(&mut self, omega: ArrayView2<T>) {
        let p = self.p;
        if p < 2 {
            self.count += 1;
            return;
        }
        let m = p - 1;
        self.count += 1;
        let nf = T::from_count(self.count);
        let weight = (nf - T::one()) / nf;
        let packed = self.packed_len();
        let mut beta = vec![T::zero(); m];
        let mut delta = vec![T::zero(); m];
        for k in 0..p {
            write_betas(omega, k, &mut beta);
            let mean = &mut self.means[k * m..(k + 1) * m];
            for j in 0..m {
                delta[j] = beta[j] - mean[j];
                mean[j] += delta[j] / nf;
            }
            let tri = &mut self.scatter[k * packed..(k + 1) * packed];
            let mut off = 0;
            for i in 0..m {
                let di = delta[i] * weight;
                let row = &mut tri[off..off + i + 1];
                for (r, &dj) in row.iter_mut().zip(&delta[..=i]) {
                    *r += di * dj;
                }
                off += i + 1;
            }
        }
    }

    /// Posterior mean of `β_k` (length `p − 1`).
    pub fn mean(&self, k: usize) -> Array1<T> {
        let m = self.p - 1;
        Array1::from(self.means[k * m..(k + 1) * m].to_vec())
    }

    /// Sample covariance of `β_k` with denominator `count − 1`
    /// (zero when fewer than two draws were seen).
    pub fn covariance(&self, k: usize) -> Array2<T> {
        let m = self.p - 1;
        let packed = self.packed_len();
        let tri = &self.scatter[k * packed..(k + 1) * packed];
        let denom = if self.count > 1 {
            T::from_count(self.count - 1)
        } else {
            T::one()
        };
        let mut out = Array2::zeros((m, m));
        let mut off = 0;
        for i in 0..m {
            for j in 0..=i {
                let v = tri[off + j] / denom;
                out[[i, j]] = v;
                out[[j, i]] = v;
            }
            off += i + 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn betas_by_hand() {
        let omega = array![[2.0, -1.0], [-1.0, 2.0]];
        let mut out = [0.0];
        write_betas(omega.view(), 0, &mut out);
        assert_eq!(out, [0.5]);
        let id = Array2::<f64>::eye(3);
        let mut out = [1.0; 2];
        write_betas(id.view(), 1, &mut out);
        assert_eq!(out, [0.0, 0.0]);
    }

    #[test]
    fn two_draw_moments_by_hand() {
        let mut acc = NodeMoments::<f64>::new(2);
        acc.push_omega(array![[1.0, -1.0], [-1.0, 2.0]].view());
        acc.push_omega(array![[1.0, -3.0], [-3.0, 10.0]].view());
        // node 0: betas 1 and 3; node 1: betas 0.5 and 0.3
        assert_eq!(acc.mean(0)[0], 2.0);
        assert!((acc.covariance(0)[[0, 0]] - 2.0).abs() < 1e-15);
        assert!((acc.mean(1)[0] - 0.4).abs() < 1e-15);
        assert!((acc.covariance(1)[[0, 0]] - 0.02).abs() < 1e-15);
    }

    #[test]
    fn constant_draws_have_zero_covariance() {
        let mut acc = NodeMoments::<f64>::new(3);
        let omega = array![[2.0, 0.5, 0.0], [0.5, 1.0, 0.2], [0.0, 0.2, 1.0]];
        for _ in 0..5 {
            acc.push_omega(omega.view());
        }
        assert!(acc.covariance(1).iter().all(|&v| v == 0.0));
        assert_eq!(acc.mean(1).to_vec(), vec![-0.5, -0.2]);
    }
}
