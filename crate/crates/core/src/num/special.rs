//! Special functions evaluated in `f64`.

/// `ln K_ν(x)` for the modified Bessel function of the second kind, `x > 0`.
///
/// Evaluates `K_ν(x) = ∫₀^∞ exp(−x cosh t) cosh(νt) dt` by the trapezoidal
/// rule in log space. The integrand is analytic and decays doubly
/// exponentially, so a fixed step converges to near machine precision.
pub fn log_bessel_k(nu: f64, x: f64) -> f64 {
    if !(x > 0.0) || !nu.is_finite() {
        return f64::NAN;
    }
    let nu = nu.abs();
    let log_term = |t: f64| -x * t.cosh() + log_cosh(nu * t);
    // integrand peak: x sinh t = ν
    let peak = (nu / x).asinh();
    let lmax = log_term(peak).max(log_term(0.0));
    let h = 0.02;
    let mut sum = 0.5 * (log_term(0.0) - lmax).exp();
    let mut t = h;
    loop {
        let l = log_term(t);
        sum += (l - lmax).exp();
        if t > peak && l < lmax - 60.0 {
            break;
        }
        t += h;
    }
    lmax + (sum * h).ln()
}

fn log_cosh(z: f64) -> f64 {
    let z = z.abs();
    z + (-2.0 * z).exp().ln_1p() - std::f64::consts::LN_2
}
