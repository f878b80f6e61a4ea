use ndarray::Array2;

use crate::error::{Error, Result};
use crate::num::linalg::{spd_inverse_raw, SpdMatrix};
use crate::sampler::hyper::{Hyperparameters, Variant};
use crate::scalar::Real;

/// Current values of the Gibbs sampler's unknowns.
#[derive(Clone, Debug)]
pub struct ChainState<T> {
    pub omega: SpdMatrix<T>,
    pub d: Vec<T>,
    pub lambda: Vec<T>,
    pub iteration: usize,
}

impl<T: Real> ChainState<T> {
    /// Starting point `Ω = (XᵀX/n + 0.01·I)⁻¹`, `d = 1`, `λ` at its prior mean.
    /// With no data the precision starts at the identity.
    pub fn initial(gram: &Array2<T>, n: usize, hyper: &Hyperparameters<T>) -> Result<Self> {
        let p = gram.nrows();
        let omega = if n == 0 {
            SpdMatrix::identity(p)
        } else {
            let mut s = gram / T::from_count(n);
            for i in 0..p {
                s[[i, i]] += T::lit(0.01);
            }
            SpdMatrix::new(spd_inverse_raw(s.view())?)?
        };
        let lambda = match hyper.variant {
            Variant::Riw => hyper.lambda_prior_mean(),
            Variant::IwBaseline => vec![T::one(); p],
        };
        Ok(Self {
            omega,
            d: vec![T::one(); p],
            lambda,
            iteration: 0,
        })
    }

    pub fn p(&self) -> usize {
        self.omega.dim()
    }

    /// Checks positivity of `d` and `λ`; `Ω` is SPD by construction.
    pub fn check(&self) -> Result<()> {
        let p = self.p();
        if self.d.len() != p || self.lambda.len() != p {
            return Err(Error::shape(
                format!("{p} scale and shrinkage entries"),
                format!("{} and {}", self.d.len(), self.lambda.len()),
            ));
        }
        if let Some(k) = self.d.iter().position(|&v| !(v > T::zero()) || !v.is_finite()) {
            return Err(Error::invalid("d", format!("entry {} is {}", k + 1, self.d[k])));
        }
        if let Some(k) = self.lambda.iter().position(|&v| !(v > T::zero()) || !v.is_finite()) {
            return Err(Error::invalid("lambda", format!("entry {} is {}", k + 1, self.lambda[k])));
        }
        Ok(())
    }
}
