//! Random variate generators built on [`Real`]'s primitive draws.

use ndarray::Array2;
use rand::Rng;

use crate::error::{Error, Result};
use crate::num::linalg::{solve_lower_transpose_matrix, SpdMatrix};
use crate::scalar::Real;

/// Cap on proposals for any rejection sampler; reaching it means the inputs
/// are numerically degenerate.
pub(crate) const MAX_PROPOSALS: usize = 10_000_000;

pub(crate) fn rejection_exhausted(what: &'static str) -> Error {
    Error::invalid(what, format!("no proposal accepted after {MAX_PROPOSALS} attempts"))
}

fn positive<T: Real>(name: &'static str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive and finite, got {v}")))
    }
}

/// Draw from Ga(shape, rate), mean `shape / rate`.
pub fn sample_gamma<T: Real, R: Rng + ?Sized>(shape: T, rate: T, rng: &mut R) -> Result<T> {
    positive("shape", shape)?;
    positive("rate", rate)?;
    Ok(T::unit_gamma(shape, rng) / rate)
}

/// Draw from χ²(df).
pub fn sample_chi_squared<T: Real, R: Rng + ?Sized>(df: T, rng: &mut R) -> Result<T> {
    positive("df", df)?;
    Ok(T::unit_gamma(df * T::lit(0.5), rng) * T::lit(2.0))
}

/// Inverse Gaussian with the given mean and shape, by the transformation
/// method of Michael, Schucany and Haas.
pub fn sample_inverse_gaussian<T: Real, R: Rng + ?Sized>(
    mean: T,
    shape: T,
    rng: &mut R,
) -> Result<T> {
    positive("mean", mean)?;
    positive("shape", shape)?;
    Ok(inverse_gaussian_unchecked(mean, shape, rng))
}

fn inverse_gaussian_unchecked<T: Real, R: Rng + ?Sized>(mu: T, shape: T, rng: &mut R) -> T {
    let nu = T::standard_normal(rng);
    let y = nu * nu;
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let mu_y = mu * y;
    // larger root first; the smaller one is mu²/x_large, which avoids the
    // cancellation in the textbook formula for large y
    let x_large = mu + mu * mu_y / (two * shape) + mu / (two * shape) * (four * shape * mu_y + mu_y * mu_y).sqrt();
    let x_small = mu * mu / x_large;
    let u = T::open01(rng);
    if u <= mu / (mu + x_small) {
        x_small
    } else {
        x_large
    }
}

/// Generalized inverse Gaussian with density ∝ x^(order−1) exp(−(a·x + b/x)/2).
///
/// Order −1/2 is delegated to [`sample_inverse_gaussian`]; all other orders use
/// the exact rejection algorithms of Hörmann and Leydold on the standardized
/// two-parameter form.
pub fn sample_gig<T: Real, R: Rng + ?Sized>(order: T, a: T, b: T, rng: &mut R) -> Result<T> {
    positive("a", a)?;
    positive("b", b)?;
    if !order.is_finite() {
        return Err(Error::invalid("order", "must be finite"));
    }
    if order == T::lit(-0.5) {
        return Ok(inverse_gaussian_unchecked((b / a).sqrt(), b, rng));
    }
    let lambda = order.as_f64();
    let (af, bf) = (a.as_f64(), b.as_f64());
    let omega = (af * bf).sqrt();
    let alpha = (bf / af).sqrt();
    if !(omega > 0.0 && omega.is_finite() && alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid(
            "gig",
            format!("parameters a = {af:e}, b = {bf:e} are outside the representable range"),
        ));
    }
    let y = if lambda < 0.0 {
        1.0 / standard_gig(-lambda, omega, rng)?
    } else {
        standard_gig(lambda, omega, rng)?
    };
    let x = alpha * y;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::invalid("gig", format!("draw {x:e} is not a positive finite number")));
    }
    Ok(T::lit(x))
}

/// Two-parameter GIG with density ∝ x^(λ−1) exp(−ω/2 (x + 1/x)), λ ≥ 0.
fn standard_gig<R: Rng + ?Sized>(lambda: f64, omega: f64, rng: &mut R) -> Result<f64> {
    if lambda > 2.0 || omega > 3.0 {
        gig_rou_shift(lambda, omega, rng)
    } else if lambda >= 1.0 - 2.25 * omega * omega || omega > 0.2 {
        gig_rou_noshift(lambda, omega, rng)
    } else {
        gig_concave(lambda, omega, rng)
    }
}

fn gig_mode(lambda: f64, omega: f64) -> f64 {
    if lambda >= 1.0 {
        ((lambda - 1.0) + ((lambda - 1.0).powi(2) + omega * omega).sqrt()) / omega
    } else {
        omega / ((1.0 - lambda) + ((1.0 - lambda).powi(2) + omega * omega).sqrt())
    }
}

fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    f64::open01(rng)
}

fn gig_rou_noshift<R: Rng + ?Sized>(lambda: f64, omega: f64, rng: &mut R) -> Result<f64> {
    let t = 0.5 * (lambda - 1.0);
    let s = 0.25 * omega;
    let xm = gig_mode(lambda, omega);
    let nc = t * xm.ln() - s * (xm + 1.0 / xm);
    let ym = ((lambda + 1.0) + ((lambda + 1.0).powi(2) + omega * omega).sqrt()) / omega;
    let um = (0.5 * (lambda + 1.0) * ym.ln() - s * (ym + 1.0 / ym) - nc).exp();
    for _ in 0..MAX_PROPOSALS {
        let u = um * uniform(rng);
        let v = uniform(rng);
        let x = u / v;
        if v.ln() <= t * x.ln() - s * (x + 1.0 / x) - nc {
            return Ok(x);
        }
    }
    Err(rejection_exhausted("gig"))
}

fn gig_rou_shift<R: Rng + ?Sized>(lambda: f64, omega: f64, rng: &mut R) -> Result<f64> {
    let t = 0.5 * (lambda - 1.0);
    let s = 0.25 * omega;
    let xm = gig_mode(lambda, omega);
    let nc = t * xm.ln() - s * (xm + 1.0 / xm);
    // the bounding rectangle's u-extent comes from the roots of a cubic
    let a = -(2.0 * (lambda + 1.0) / omega + xm);
    let b = 2.0 * (lambda - 1.0) * xm / omega - 1.0;
    let c = xm;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let fi = (-q / (2.0 * (-(p * p * p) / 27.0).sqrt())).clamp(-1.0, 1.0).acos();
    let fak = 2.0 * (-p / 3.0).sqrt();
    let y1 = fak * (fi / 3.0).cos() - a / 3.0;
    let y2 = fak * (fi / 3.0 + 4.0 / 3.0 * std::f64::consts::PI).cos() - a / 3.0;
    let uplus = (y1 - xm) * (t * y1.ln() - s * (y1 + 1.0 / y1) - nc).exp();
    let uminus = (y2 - xm) * (t * y2.ln() - s * (y2 + 1.0 / y2) - nc).exp();
    for _ in 0..MAX_PROPOSALS {
        let u = uminus + uniform(rng) * (uplus - uminus);
        let v = uniform(rng);
        let x = u / v + xm;
        if x <= 0.0 {
            continue;
        }
        if v.ln() <= t * x.ln() - s * (x + 1.0 / x) - nc {
            return Ok(x);
        }
    }
    Err(rejection_exhausted("gig"))
}

/// Rejection from a three-piece hat (constant, power, exponential) for
/// `0 ≤ λ < 1` and small `ω`.
fn gig_concave<R: Rng + ?Sized>(lambda: f64, omega: f64, rng: &mut R) -> Result<f64> {
    let xm = gig_mode(lambda, omega);
    let x0 = omega / (1.0 - lambda);
    let k0 = ((lambda - 1.0) * xm.ln() - 0.5 * omega * (xm + 1.0 / xm)).exp();
    let a0 = k0 * x0;
    let (k1, a1, k2, a2);
    if x0 >= 2.0 / omega {
        k1 = 0.0;
        a1 = 0.0;
        k2 = x0.powf(lambda - 1.0);
        a2 = k2 * 2.0 * (-omega * x0 / 2.0).exp() / omega;
    } else {
        k1 = (-omega).exp();
        a1 = if lambda == 0.0 {
            k1 * (2.0 / (omega * omega)).ln()
        } else {
            k1 / lambda * ((2.0 / omega).powf(lambda) - x0.powf(lambda))
        };
        k2 = (2.0 / omega).powf(lambda - 1.0);
        a2 = k2 * 2.0 * (-1.0f64).exp() / omega;
    }
    let total = a0 + a1 + a2;
    for _ in 0..MAX_PROPOSALS {
        let mut v = total * uniform(rng);
        let (x, hx);
        if v <= a0 {
            x = x0 * v / a0;
            hx = k0;
        } else {
            v -= a0;
            if v <= a1 {
                if lambda == 0.0 {
                    x = omega * (omega.exp() * v).exp();
                    hx = k1 / x;
                } else {
                    x = (x0.powf(lambda) + lambda / k1 * v).powf(1.0 / lambda);
                    hx = k1 * x.powf(lambda - 1.0);
                }
            } else {
                v -= a1;
                let lo = x0.max(2.0 / omega);
                x = -2.0 / omega * ((-omega / 2.0 * lo).exp() - omega / (2.0 * k2) * v).ln();
                hx = k2 * (-omega / 2.0 * x).exp();
            }
        }
        let u = uniform(rng) * hx;
        if u.ln() <= (lambda - 1.0) * x.ln() - omega / 2.0 * (x + 1.0 / x) {
            return Ok(x);
        }
    }
    Err(rejection_exhausted("gig"))
}

/// Lower-triangular Bartlett factor: `A_ii = sqrt(χ²(df − i))`, `A_ij ~ N(0,1)`.
fn bartlett_factor<T: Real, R: Rng + ?Sized>(df: T, p: usize, rng: &mut R) -> Array2<T> {
    let mut a = Array2::<T>::zeros((p, p));
    for i in 0..p {
        let k = df - T::from_count(i);
        a[[i, i]] = (T::unit_gamma(k * T::lit(0.5), rng) * T::lit(2.0)).sqrt();
        for j in 0..i {
            a[[i, j]] = T::standard_normal(rng);
        }
    }
    a
}

fn check_df<T: Real>(df: T, p: usize) -> Result<()> {
    if !(df > T::from_count(p) - T::one()) || !df.is_finite() {
        return Err(Error::invalid(
            "df",
            format!("must exceed dim - 1 = {}, got {df}", p as i64 - 1),
        ));
    }
    Ok(())
}

/// Standard Wishart W(df, scale), density ∝ |W|^((df−p−1)/2) exp(−½ tr(scale⁻¹ W)).
pub fn sample_wishart_std<T: Real, R: Rng + ?Sized>(
    df: T,
    scale: &SpdMatrix<T>,
    rng: &mut R,
) -> Result<SpdMatrix<T>> {
    let p = scale.dim();
    check_df(df, p)?;
    let a = bartlett_factor(df, p, rng);
    let la = scale.factor().dot(&a);
    SpdMatrix::new(la.dot(&la.t()))
}

/// Standard Wishart W(df, m⁻¹) given `m` rather than the scale itself.
///
/// With `m = U Uᵀ`, `B = U⁻ᵀ A` has `B Bᵀ ~ W(df, m⁻¹)`, so no explicit
/// inverse is formed.
pub fn sample_wishart_inv_scale<T: Real, R: Rng + ?Sized>(
    df: T,
    inv_scale: &SpdMatrix<T>,
    rng: &mut R,
) -> Result<SpdMatrix<T>> {
    let p = inv_scale.dim();
    check_df(df, p)?;
    let a = bartlett_factor(df, p, rng);
    let b = solve_lower_transpose_matrix(inv_scale.factor().view(), a.view());
    SpdMatrix::new(b.dot(&b.t()))
}

/// `n` i.i.d. rows from N(0, cov), returned as an `n×p` matrix.
pub fn sample_mvn_zero<T: Real, R: Rng + ?Sized>(
    cov: &SpdMatrix<T>,
    n: usize,
    rng: &mut R,
) -> Array2<T> {
    let p = cov.dim();
    let z = Array2::from_shape_simple_fn((n, p), || T::standard_normal(rng));
    z.dot(&cov.factor().t())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rng::RngStream;
    use ndarray::array;

    fn mean_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, (v / n).sqrt())
    }

    #[test]
    fn gamma_rejects_bad_parameters() {
        let mut rng = RngStream::new(1, 0);
        assert!(sample_gamma(0.0, 1.0, &mut rng).is_err());
        assert!(sample_gamma(1.0, -1.0, &mut rng).is_err());
        assert!(sample_gamma(f64::NAN, 1.0, &mut rng).is_err());
    }

    #[test]
    fn gamma_mean() {
        let mut rng = RngStream::new(2, 0);
        let xs: Vec<f64> = (0..1_000_000)
            .map(|_| sample_gamma(3.0, 2.0, &mut rng).unwrap())
            .collect();
        let (m, se) = mean_se(&xs);
        assert!((m - 1.5).abs() < 3.0 * se, "mean {m} se {se}");
    }

    #[test]
    fn inverse_gaussian_mean_and_variance() {
        let mut rng = RngStream::new(3, 0);
        let (mu, shape) = (2.0, 4.0);
        let xs: Vec<f64> = (0..400_000)
            .map(|_| sample_inverse_gaussian(mu, shape, &mut rng).unwrap())
            .collect();
        let (m, se) = mean_se(&xs);
        assert!((m - mu).abs() < 3.0 * se);
        let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64;
        // Var = mu³/shape = 2
        assert!((var - 2.0).abs() < 0.05, "var {var}");
    }

    #[test]
    fn inverse_gaussian_extreme_ratio_stays_positive() {
        let mut rng = RngStream::new(4, 0);
        for _ in 0..10_000 {
            let x: f64 = sample_inverse_gaussian(1e3, 1e-3, &mut rng).unwrap();
            assert!(x > 0.0 && x.is_finite());
        }
    }

    #[test]
    fn gig_rejects_bad_parameters() {
        let mut rng = RngStream::new(5, 0);
        assert!(sample_gig(1.0, 0.0, 1.0, &mut rng).is_err());
        assert!(sample_gig(1.0, 1.0, -2.0, &mut rng).is_err());
    }

    #[test]
    fn gig_is_reproducible() {
        let draw = |seed| {
            let mut rng = RngStream::new(seed, 9);
            (0..50)
                .map(|_| sample_gig(-1.0, 2.0, 0.5, &mut rng).unwrap())
                .collect::<Vec<f64>>()
        };
        assert_eq!(draw(1), draw(1));
        assert_ne!(draw(1), draw(2));
    }

    #[test]
    fn wishart_rejects_small_df() {
        let mut rng = RngStream::new(6, 0);
        let s = SpdMatrix::<f64>::identity(3);
        assert!(sample_wishart_std(2.0, &s, &mut rng).is_err());
        assert!(sample_wishart_std(2.5, &s, &mut rng).is_ok());
    }

    #[test]
    fn wishart_inverse_scale_matches_direct_scale_in_mean() {
        let m = SpdMatrix::new(array![[2.0, 0.5], [0.5, 1.0]]).unwrap();
        let scale = m.inverse().unwrap();
        let mut rng = RngStream::new(7, 0);
        let n = 40_000;
        let df = 6.0;
        let mut acc = Array2::<f64>::zeros((2, 2));
        for _ in 0..n {
            acc += sample_wishart_inv_scale(df, &m, &mut rng).unwrap().matrix();
        }
        acc /= n as f64;
        for i in 0..2 {
            for j in 0..2 {
                let expect = df * scale.get(i, j);
                assert!((acc[[i, j]] - expect).abs() < 0.03 * df, "{i}{j}: {} vs {expect}", acc[[i, j]]);
            }
        }
    }

    #[test]
    fn mvn_of_zero_rows_is_empty() {
        let mut rng = RngStream::new(8, 0);
        let x = sample_mvn_zero(&SpdMatrix::<f64>::identity(4), 0, &mut rng);
        assert_eq!(x.dim(), (0, 4));
    }
}
