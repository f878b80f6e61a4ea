//! Single-site Gibbs updates.

use ndarray::Array2;
use rand::Rng;

use crate::error::{Error, Result};
use crate::num::linalg::SpdMatrix;
use crate::num::random::{
    rejection_exhausted, sample_gamma, sample_gig, sample_inverse_gaussian, sample_wishart_inv_scale,
    MAX_PROPOSALS,
};
use crate::sampler::hyper::{ConditionalD, Hyperparameters, LambdaShape, Variant};
use crate::sampler::prior::group_quantity;
use crate::sampler::state::ChainState;
use crate::scalar::Real;

/// Draws `Ω | D, X ~ W(b + n + p − 1, (D + XᵀX)⁻¹)` in the standard
/// parameterisation.
pub fn step_update_omega<T: Real, R: Rng + ?Sized>(
    state: &ChainState<T>,
    gram: &Array2<T>,
    n: usize,
    hyper: &Hyperparameters<T>,
    rng: &mut R,
) -> Result<SpdMatrix<T>> {
    let p = state.p();
    if gram.dim() != (p, p) {
        return Err(Error::shape(format!("{p}x{p} Gram matrix"), format!("{:?}", gram.dim())));
    }
    let mut m = gram.clone();
    for k in 0..p {
        m[[k, k]] += state.d[k];
    }
    let m = SpdMatrix::new(m)?;
    let df = hyper.b + T::from_count(n) + T::from_count(p) - T::one();
    sample_wishart_inv_scale(df, &m, rng)
}

/// Draws every `d_k` given `Ω` and `λ`.
pub fn step_update_d<T: Real, R: Rng + ?Sized>(
    state: &ChainState<T>,
    hyper: &Hyperparameters<T>,
    rng: &mut R,
) -> Result<Vec<T>> {
    let p = state.p();
    let order = (T::from_count(p) - T::lit(3.0)) * T::lit(0.5);
    (0..p)
        .map(|k| {
            let g = group_quantity(&state.omega, k);
            let lam = state.lambda[k];
            match hyper.conditional_d {
                ConditionalD::PaperIg => sample_inverse_gaussian(lam / g, lam * lam, rng),
                ConditionalD::ExactGig => sample_gig(order, g, lam * lam, rng),
            }
        })
        .collect()
}

/// Draws every `λ_k` given `Ω` (and `d_k` for the full-conditional mode).
pub fn step_update_lambda<T: Real, R: Rng + ?Sized>(
    state: &ChainState<T>,
    hyper: &Hyperparameters<T>,
    rng: &mut R,
) -> Result<Vec<T>> {
    let p = state.p();
    (0..p)
        .map(|k| {
            let g = group_quantity(&state.omega, k);
            let a = hyper.a_lambda[k];
            let rate = hyper.b_lambda[k];
            match hyper.lambda_shape {
                LambdaShape::PaperPlusOne => sample_gamma(hyper.b + a + T::one(), rate + g.sqrt(), rng),
                LambdaShape::Derived => sample_gamma(hyper.b + a, rate + g.sqrt(), rng),
                LambdaShape::FullConditional => {
                    sample_lambda_given_d(a + hyper.b + T::lit(2.0), rate, state.d[k], rng)
                }
            }
        })
        .collect()
}

/// Draws from the density ∝ λ^(s−1) exp(−βλ − λ²/(2d)) by rejection from the
/// gamma that touches the quadratic term at the mode.
fn sample_lambda_given_d<T: Real, R: Rng + ?Sized>(shape: T, rate: T, d: T, rng: &mut R) -> Result<T> {
    if !(d > T::zero()) || !d.is_finite() {
        return Err(Error::invalid("d", format!("must be positive and finite, got {d}")));
    }
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let bd = rate * d;
    let mode = (-bd + (bd * bd + four * (shape - T::one()) * d).sqrt()) / two;
    let proposal_rate = rate + mode / d;
    if !(mode > T::zero()) || !proposal_rate.is_finite() {
        return Err(Error::invalid("lambda", format!("degenerate conditional for d = {d}")));
    }
    for _ in 0..MAX_PROPOSALS {
        let x = T::unit_gamma(shape, rng) / proposal_rate;
        let u = T::open01(rng);
        if u.ln() <= -(x - mode) * (x - mode) / (two * d) {
            return Ok(x);
        }
    }
    Err(rejection_exhausted("lambda"))
}

/// Draws the common scale `d` of the inverse-Wishart baseline,
/// `d | Ω ~ Ga(p(b + p − 1)/2 + 1, 1 + tr(Ω)/2)`.
pub fn step_update_d_iw_baseline<T: Real, R: Rng + ?Sized>(
    state: &ChainState<T>,
    hyper: &Hyperparameters<T>,
    rng: &mut R,
) -> Result<T> {
    if hyper.variant != Variant::IwBaseline {
        return Err(Error::Usage(
            "the single-scale update applies only to the inverse-Wishart baseline".into(),
        ));
    }
    let p = T::from_count(state.p());
    let half = T::lit(0.5);
    let trace = (0..state.p()).map(|k| state.omega.get(k, k)).sum::<T>();
    sample_gamma(p * (hyper.b + p - T::one()) * half + T::one(), T::one() + trace * half, rng)
}

fn check_positive<T: Real>(name: &'static str, values: &[T]) -> Result<()> {
    match values.iter().position(|&v| !(v > T::zero()) || !v.is_finite()) {
        Some(k) => Err(Error::invalid(name, format!("entry {} degenerated to {}", k + 1, values[k]))),
        None => Ok(()),
    }
}

/// One full sweep: `Ω`, then `d`, then `λ` (or `Ω` then the common scale for
/// the baseline).
pub fn gibbs_sweep<T: Real, R: Rng + ?Sized>(
    state: &mut ChainState<T>,
    gram: &Array2<T>,
    n: usize,
    hyper: &Hyperparameters<T>,
    rng: &mut R,
) -> Result<()> {
    state.omega = step_update_omega(state, gram, n, hyper, rng)?;
    match hyper.variant {
        Variant::Riw => {
            state.d = step_update_d(state, hyper, rng)?;
            check_positive("d", &state.d)?;
            state.lambda = step_update_lambda(state, hyper, rng)?;
            check_positive("lambda", &state.lambda)?;
        }
        Variant::IwBaseline => {
            let d = step_update_d_iw_baseline(state, hyper, rng)?;
            check_positive("d", &[d])?;
            state.d.iter_mut().for_each(|v| *v = d);
        }
    }
    state.iteration += 1;
    Ok(())
}
