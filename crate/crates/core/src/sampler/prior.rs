//! Marginal prior of the covariance and the group quantities it is built on.

use crate::error::{Error, Result};
use crate::num::linalg::{spd_inverse_raw, SpdMatrix};
use crate::num::special::log_bessel_k;
use crate::scalar::Real;

/// The quantity `g_k` multiplying `d_k` in `tr(DΩ)`, which is `Ω_kk`.
#[inline]
pub fn group_quantity<T: Real>(omega: &SpdMatrix<T>, k: usize) -> T {
    omega.get(k, k)
}

/// `g_k` assembled from the inverses of the leading principal blocks of
/// `Σ = Ω⁻¹`: with `Ω_j = (Σ[..=j, ..=j])⁻¹`,
/// `g_k = Σ_{j>k} Ω_j[k,j]² / Ω_j[j,j] + Ω_k[k,k]`.
///
/// Costs O(p⁴); kept as an independent reference for [`group_quantity`].
pub fn group_quantity_reference<T: Real>(omega: &SpdMatrix<T>, k: usize) -> Result<T> {
    let p = omega.dim();
    if k >= p {
        return Err(Error::invalid("k", format!("node {k} out of range for p = {p}")));
    }
    let sigma = omega.inverse()?;
    let block_inverse = |j: usize| spd_inverse_raw(sigma.view().slice(ndarray::s![..=j, ..=j]));
    let mut g = block_inverse(k)?[[k, k]];
    for j in (k + 1)..p {
        let oj = block_inverse(j)?;
        g += oj[[k, j]] * oj[[k, j]] / oj[[j, j]];
    }
    Ok(g)
}

fn check_lambda<T: Real>(lambda: &[T], p: usize) -> Result<()> {
    if lambda.len() != p {
        return Err(Error::shape(format!("{p} shrinkage values"), lambda.len()));
    }
    if lambda.iter().any(|&l| !(l > T::zero())) {
        return Err(Error::invalid("lambda", "entries must be positive"));
    }
    Ok(())
}

/// Unnormalised log density of `Σ` given `λ` after integrating out `D`.
///
/// Under `Σ | D ~ IW(b, D)` and `d_k ~ InvGamma(b/2 + 1, λ_k²/2)` each `d_k`
/// integral is a GIG normaliser, giving
/// `−(b+2p)/2·log|Σ| + Σ_k [(b + 2 + ν) log λ_k − (ν/2) log g_k + log K_ν(λ_k √g_k)]`
/// with `ν = (p − 3)/2` and `g_k = (Σ⁻¹)_kk`, up to a constant in `(b, p)`.
pub fn log_prior_density<T: Real>(sigma: &SpdMatrix<T>, lambda: &[T], b: T) -> Result<f64> {
    let p = sigma.dim();
    check_lambda(lambda, p)?;
    let omega = sigma.inverse()?;
    let b = b.as_f64();
    let pf = p as f64;
    let nu = (pf - 3.0) / 2.0;
    let mut total = -(b + 2.0 * pf) / 2.0 * sigma.log_det().as_f64();
    for (k, &lam) in lambda.iter().enumerate() {
        let lam = lam.as_f64();
        let g = group_quantity(&omega, k).as_f64();
        total += (b + 2.0 + nu) * lam.ln() - nu / 2.0 * g.ln() + log_bessel_k(nu, lam * g.sqrt());
    }
    Ok(total)
}

/// The closed-form kernel `Σ_k [b log λ_k + (b+p−1)/2 · log ω_{k,kk} − λ_k √g_k]`,
/// where `ω_{k,kk}` is the reciprocal conditional variance of variable `k`
/// given its predecessors and `g_k = (Σ⁻¹)_kk`.
///
/// This is the exponential-tail form of the marginal prior; it differs from
/// [`log_prior_density`] by Bessel-function factors.
pub fn log_prior_kernel_exponential<T: Real>(sigma: &SpdMatrix<T>, lambda: &[T], b: T) -> Result<f64> {
    let p = sigma.dim();
    check_lambda(lambda, p)?;
    let omega = sigma.inverse()?;
    let l = sigma.factor();
    let b = b.as_f64();
    let expo = (b + p as f64 - 1.0) / 2.0;
    let mut total = 0.0;
    for (k, &lam) in lambda.iter().enumerate() {
        let lam = lam.as_f64();
        let cond_precision = 1.0 / (l[[k, k]].as_f64() * l[[k, k]].as_f64());
        let g = group_quantity(&omega, k).as_f64();
        total += b * lam.ln() + expo * cond_precision.ln() - lam * g.sqrt();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn two_by_two_reference_by_hand() {
        let omega = SpdMatrix::new(array![[2.0f64, 1.0], [1.0, 3.0]]).unwrap();
        assert_eq!(group_quantity(&omega, 0), 2.0);
        let r = group_quantity_reference(&omega, 0).unwrap();
        assert!((r - 2.0).abs() < 1e-14);
    }

    #[test]
    fn identity_group_quantity_is_one() {
        let id = SpdMatrix::<f64>::identity(4);
        for k in 0..4 {
            assert_eq!(group_quantity(&id, k), 1.0);
            assert!((group_quantity_reference(&id, k).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn exponential_kernel_in_one_dimension() {
        let sigma = SpdMatrix::new(array![[0.25]]).unwrap();
        let (lam, b) = (1.5f64, 3.0f64);
        let v = log_prior_kernel_exponential(&sigma, &[lam], b).unwrap();
        let omega: f64 = 4.0;
        let expect = b * lam.ln() + b / 2.0 * omega.ln() - lam * omega.sqrt();
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn density_is_permutation_invariant() {
        let sigma = array![[2.0, 0.3, -0.4], [0.3, 1.0, 0.2], [-0.4, 0.2, 1.5]];
        let perm = [2usize, 0, 1];
        let permuted = ndarray::Array2::from_shape_fn((3, 3), |(i, j)| sigma[[perm[i], perm[j]]]);
        let lam = [0.8, 0.8, 0.8];
        let a = log_prior_density(&SpdMatrix::new(sigma).unwrap(), &lam, 3.0).unwrap();
        let b = log_prior_density(&SpdMatrix::new(permuted).unwrap(), &lam, 3.0).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn density_rejects_bad_lambda() {
        let s = SpdMatrix::<f64>::identity(2);
        assert!(log_prior_density(&s, &[1.0], 3.0).is_err());
        assert!(log_prior_density(&s, &[1.0, 0.0], 3.0).is_err());
    }
}
