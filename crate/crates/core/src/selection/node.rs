use ndarray::{Array1, Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::num::linalg::symmetric_eigenvalues;
use crate::sampler::moments::write_betas;
use crate::sampler::ChainSamples;
use crate::scalar::Real;

const RIDGE_EPS: f64 = 1e-8;
const MAX_CONDITION: f64 = 1e12;

/// `β_kj = −Ω_kj / Ω_kk` for `j ≠ k`, ascending in `j`.
pub fn extract_betas<T: Real>(omega: ArrayView2<T>, k: usize) -> Array1<T> {
    let p = omega.nrows();
    let mut out = vec![T::zero(); p.saturating_sub(1)];
    write_betas(omega, k, &mut out);
    Array1::from(out)
}

/// Posterior mean and covariance of node `k`'s regression coefficients.
#[derive(Clone, Debug)]
pub struct NodePosterior<T> {
    pub node: usize,
    pub beta_hat: Array1<T>,
    pub sigma_hat: Array2<T>,
    /// Amount added to the diagonal of `sigma_hat` (0 when none was needed).
    pub ridge_applied: T,
}

impl<T: Real> NodePosterior<T> {
    /// Original node index of each coefficient.
    pub fn neighbour_index(&self, j: usize) -> usize {
        if j < self.node {
            j
        } else {
            j + 1
        }
    }

    /// Builds a posterior from explicit moments, applying the ridge rule.
    pub fn from_moments(node: usize, beta_hat: Array1<T>, sigma_hat: Array2<T>) -> Self {
        let m = beta_hat.len();
        let mut sigma_hat = sigma_hat;
        let ev = symmetric_eigenvalues(sigma_hat.view());
        let (lo, hi) = (ev.first().copied().unwrap_or(0.0), ev.last().copied().unwrap_or(0.0));
        let ill = !(lo > 0.0) || hi / lo > MAX_CONDITION;
        let mut ridge = T::zero();
        if ill && m > 0 {
            let trace = (0..m).map(|i| sigma_hat[[i, i]]).sum::<T>().as_f64();
            let scale = if trace > 0.0 { trace / m as f64 } else { 1.0 };
            ridge = T::lit(RIDGE_EPS * scale);
            for i in 0..m {
                sigma_hat[[i, i]] += ridge;
            }
        }
        Self {
            node,
            beta_hat,
            sigma_hat,
            ridge_applied: ridge,
        }
    }
}

/// Reads node `k`'s posterior moments from a chain.
///
/// A ridge `ε·tr(Σ̂)/(p−1)` with `ε = 1e−8` is added when the covariance
/// condition number exceeds 1e12 (`ε` alone if the covariance vanishes).
pub fn node_posterior<T: Real>(samples: &ChainSamples<T>, k: usize) -> Result<NodePosterior<T>> {
    let p = samples.p();
    if k >= p {
        return Err(Error::invalid("k", format!("node {} out of range for p = {p}", k + 1)));
    }
    if samples.count() < p {
        return Err(Error::InsufficientDraws {
            node: k + 1,
            needed: p,
            found: samples.count(),
        });
    }
    let moments = samples.node_moments();
    Ok(NodePosterior::from_moments(k, moments.mean(k), moments.covariance(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn betas_from_precision() {
        let omega = array![[2.0, -1.0], [-1.0, 2.0]];
        assert_eq!(extract_betas(omega.view(), 0).to_vec(), vec![0.5]);
        let id = Array2::<f64>::eye(4);
        assert!(extract_betas(id.view(), 2).iter().all(|&b| b == 0.0));
    }

    #[test]
    fn constant_chain_gets_a_ridge() {
        let omega = array![[2.0, 0.4, 0.1], [0.4, 1.0, 0.3], [0.1, 0.3, 1.0]];
        let views = vec![omega.view(); 5];
        let samples = ChainSamples::from_omega_draws(3, views);
        let np = node_posterior(&samples, 0).unwrap();
        assert_eq!(np.beta_hat.to_vec(), vec![-0.2, -0.05]);
        assert!(np.ridge_applied > 0.0);
        assert_eq!(np.sigma_hat[[0, 1]], 0.0);
        assert_eq!(np.neighbour_index(0), 1);
        assert_eq!(np.neighbour_index(1), 2);
    }

    #[test]
    fn too_few_draws_is_an_error() {
        let omega = Array2::<f64>::eye(3);
        let samples = ChainSamples::from_omega_draws(3, vec![omega.view(); 2]);
        assert!(matches!(
            node_posterior(&samples, 0),
            Err(Error::InsufficientDraws { needed: 3, found: 2, .. })
        ));
    }
}
