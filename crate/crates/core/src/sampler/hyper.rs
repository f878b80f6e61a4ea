use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Prior family for the covariance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Inverse-Wishart with inverse-gamma mixed diagonal scale.
    Riw,
    /// Inverse-Wishart with a single scale `D = d·I`, `d ~ Ga(1, 1)`.
    IwBaseline,
}

/// Law used for the `d_k` update.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionalD {
    /// Inverse Gaussian with mean `λ_k / g_k` and shape `λ_k²`.
    PaperIg,
    /// The exact full conditional GIG((p − 3)/2, g_k, λ_k²).
    ExactGig,
}

/// Law used for the `λ_k` update.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaShape {
    /// Ga(b + a_k + 1, b_k + √g_k).
    PaperPlusOne,
    /// Ga(b + a_k, b_k + √g_k).
    Derived,
    /// The exact full conditional given `d_k`,
    /// density ∝ λ^(a_k + b + 1) exp(−b_k λ − λ²/(2 d_k)).
    FullConditional,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters<T> {
    pub b: T,
    pub a_lambda: Vec<T>,
    pub b_lambda: Vec<T>,
    pub variant: Variant,
    pub conditional_d: ConditionalD,
    pub lambda_shape: LambdaShape,
}

impl<T: Real> Hyperparameters<T> {
    pub fn p(&self) -> usize {
        self.a_lambda.len()
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_conditional_d(mut self, mode: ConditionalD) -> Self {
        self.conditional_d = mode;
        self
    }

    pub fn with_lambda_shape(mut self, mode: LambdaShape) -> Self {
        self.lambda_shape = mode;
        self
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        if !(self.b >= T::lit(3.0)) {
            return Err(Error::invalid("b", format!("must be at least 3, got {}", self.b)));
        }
        if self.a_lambda.len() != p || self.b_lambda.len() != p {
            return Err(Error::shape(
                format!("{p} shrinkage hyperparameters"),
                format!("{} shapes and {} rates", self.a_lambda.len(), self.b_lambda.len()),
            ));
        }
        if self.a_lambda.iter().any(|&a| !(a > T::zero()) || !a.is_finite()) {
            return Err(Error::invalid("a_lambda", "entries must be positive"));
        }
        if self.b_lambda.iter().any(|&b| !(b > T::zero()) || !b.is_finite()) {
            return Err(Error::invalid("b_lambda", "entries must be positive"));
        }
        Ok(())
    }

    /// Prior means `a_k / b_k` of the shrinkage parameters.
    pub fn lambda_prior_mean(&self) -> Vec<T> {
        self.a_lambda
            .iter()
            .zip(&self.b_lambda)
            .map(|(&a, &b)| a / b)
            .collect()
    }
}

/// Default prior for `n` observations of `p` variables.
///
/// The gamma shapes decrease evenly from `n` to `max(n/2, p)`; when that
/// endpoint is not below `n` the sequence is constant at the endpoint.
pub fn default_hyperparameters<T: Real>(n: usize, p: usize) -> Hyperparameters<T> {
    let start = n as f64;
    let end = (n as f64 / 2.0).max(p as f64);
    let a_lambda = if end >= start || p < 2 {
        vec![T::lit(end); p]
    } else {
        let step = (start - end) / (p - 1) as f64;
        (0..p).map(|k| T::lit(start - step * k as f64)).collect()
    };
    Hyperparameters {
        b: T::lit(3.0),
        a_lambda,
        b_lambda: vec![T::one(); p],
        variant: Variant::Riw,
        conditional_d: ConditionalD::PaperIg,
        lambda_shape: LambdaShape::PaperPlusOne,
    }
}
