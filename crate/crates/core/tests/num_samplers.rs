mod common;

use common::{integrate_positive, ks_critical_01, ks_statistic, mean_se, NumericCdf};
use ndarray::{array, Array2};
use riwgm::num::{
    sample_gamma, sample_gig, sample_inverse_gaussian, sample_mvn_zero, sample_wishart_std,
    RngStream, SpdMatrix,
};
use statrs::distribution::{ChiSquared, ContinuousCDF, Exp, Gamma};

fn gig_density(order: f64, a: f64, b: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| ((order - 1.0) * x.ln() - 0.5 * (a * x + b / x)).exp()
}

#[test]
fn scalar_wishart_is_chi_squared() {
    let mut rng = RngStream::new(100, 0);
    let one = SpdMatrix::<f64>::identity(1);
    let df = 4.5;
    let xs: Vec<f64> = (0..100_000)
        .map(|_| sample_wishart_std(df, &one, &mut rng).unwrap().get(0, 0))
        .collect();
    let chi = ChiSquared::new(df).unwrap();
    let d = ks_statistic(&xs, |x| chi.cdf(x));
    assert!(d < ks_critical_01(xs.len()), "KS D = {d}");
}

#[test]
fn wishart_mean_and_diagonal_variance() {
    let scale = SpdMatrix::new(array![[1.0, 0.3, 0.0], [0.3, 2.0, -0.5], [0.0, -0.5, 0.7]]).unwrap();
    let df = 7.0;
    let mut rng = RngStream::new(101, 0);
    let n = 100_000;
    let draws: Vec<Array2<f64>> = (0..n)
        .map(|_| sample_wishart_std(df, &scale, &mut rng).unwrap().into_inner())
        .collect();
    for i in 0..3 {
        for j in 0..3 {
            let xs: Vec<f64> = draws.iter().map(|w| w[[i, j]]).collect();
            let (m, se) = mean_se(&xs);
            let expect = df * scale.get(i, j);
            assert!((m - expect).abs() < 3.0 * se, "E[W{i}{j}] = {m}, expected {expect} (se {se})");
        }
        let xs: Vec<f64> = draws.iter().map(|w| w[[i, i]]).collect();
        let (m, _) = mean_se(&xs);
        let sq: Vec<f64> = xs.iter().map(|x| (x - m).powi(2)).collect();
        let (var, var_se) = mean_se(&sq);
        let expect = 2.0 * df * scale.get(i, i).powi(2);
        assert!((var - expect).abs() < 3.0 * var_se, "Var(W{i}{i}) = {var}, expected {expect}");
    }
}

#[test]
fn bartlett_diagonals_follow_scaled_chi_squared() {
    for p in 1..=4usize {
        let scale = Array2::from_shape_fn((p, p), |(i, j)| if i == j { 1.0 + i as f64 } else { 0.2 });
        let scale = SpdMatrix::new(scale).unwrap();
        let df = p as f64 + 2.5;
        let mut rng = RngStream::new(102, p as u64);
        let n = 50_000;
        let draws: Vec<Array2<f64>> = (0..n)
            .map(|_| sample_wishart_std(df, &scale, &mut rng).unwrap().into_inner())
            .collect();
        for i in 0..p {
            let law = Gamma::new(df / 2.0, 1.0 / (2.0 * scale.get(i, i))).unwrap();
            let xs: Vec<f64> = draws.iter().map(|w| w[[i, i]]).collect();
            let d = ks_statistic(&xs, |x| law.cdf(x));
            assert!(d < ks_critical_01(n), "p={p} i={i}: KS D = {d}");
        }
    }
}

#[test]
fn unit_gamma_is_exponential() {
    let mut rng = RngStream::new(103, 0);
    let xs: Vec<f64> = (0..100_000).map(|_| sample_gamma(1.0, 1.0, &mut rng).unwrap()).collect();
    let law = Exp::new(1.0).unwrap();
    let d = ks_statistic(&xs, |x| law.cdf(x));
    assert!(d < ks_critical_01(xs.len()), "KS D = {d}");
}

#[test]
fn gamma_half_shape_histogram_matches_density() {
    let mut rng = RngStream::new(104, 0);
    let n = 1_000_000;
    let law = Gamma::new(0.5, 1.0).unwrap();
    let width = 0.1;
    let bins = 30;
    let lo = 0.1;
    let mut counts = vec![0usize; bins];
    for _ in 0..n {
        let x: f64 = sample_gamma(0.5, 1.0, &mut rng).unwrap();
        if x >= lo {
            let k = ((x - lo) / width) as usize;
            if k < bins {
                counts[k] += 1;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for (k, &c) in counts.iter().enumerate() {
        let a = lo + k as f64 * width;
        let empirical = c as f64 / n as f64 / width;
        let analytic = (law.cdf(a + width) - law.cdf(a)) / width;
        worst = worst.max((empirical - analytic).abs());
    }
    assert!(worst < 0.02, "sup error {worst}");
}

#[test]
fn gig_half_order_is_inverse_gaussian_mean() {
    let (mu, shape) = (2.0f64, 4.0f64);
    let mut rng = RngStream::new(105, 0);
    let xs: Vec<f64> = (0..1_000_000)
        .map(|_| sample_gig(-0.5, shape / (mu * mu), shape, &mut rng).unwrap())
        .collect();
    let (m, se) = mean_se(&xs);
    assert!((m - mu).abs() < 3.0 * se, "mean {m} se {se}");
}

#[test]
fn gig_order_minus_one_mean_matches_quadrature() {
    let f = gig_density(-1.0, 1.0, 1.0);
    let z = integrate_positive(&f, -30.0, 8.0, 40_000);
    let mean = integrate_positive(|x| x * f(x), -30.0, 8.0, 40_000) / z;
    let mut rng = RngStream::new(106, 0);
    let xs: Vec<f64> = (0..1_000_000).map(|_| sample_gig(-1.0, 1.0, 1.0, &mut rng).unwrap()).collect();
    let (m, _) = mean_se(&xs);
    assert!((m / mean - 1.0).abs() < 0.01, "sample mean {m}, quadrature {mean}");
}

#[test]
fn gig_order_minus_one_median_matches_quadrature() {
    let cdf = NumericCdf::new(gig_density(-1.0, 4.0, 1.0), -25.0, 6.0, 200_000);
    let median = cdf.quantile(0.5);
    let mut rng = RngStream::new(107, 0);
    let n = 200_000;
    let below = (0..n)
        .filter(|_| sample_gig(-1.0, 4.0, 1.0, &mut rng).unwrap() < median)
        .count();
    let frac = below as f64 / n as f64;
    let se = (0.25 / n as f64).sqrt();
    assert!((frac - 0.5).abs() < 3.0 * se, "P(X < median) = {frac}");
}

#[test]
fn gig_all_regimes_pass_ks_against_quadrature() {
    // (order, a, b) chosen to exercise each rejection algorithm and the
    // reciprocal route for negative orders
    let cases = [
        (0.3, 0.1, 0.1),
        (0.0, 0.05, 0.2),
        (0.5, 1.0, 1.0),
        (1.5, 0.2, 0.3),
        (5.0, 2.0, 2.0),
        (0.8, 16.0, 1.0),
        (-2.5, 3.0, 0.2),
        (-1.0, 0.01, 4.0),
        (48.5, 3.0, 20.0),
    ];
    for (idx, &(order, a, b)) in cases.iter().enumerate() {
        let cdf = NumericCdf::new(gig_density(order, a, b), -30.0, 12.0, 200_000);
        let mut rng = RngStream::new(108, idx as u64);
        let n = 50_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_gig(order, a, b, &mut rng).unwrap()).collect();
        let d = ks_statistic(&xs, |x| cdf.eval(x));
        assert!(d < ks_critical_01(n), "GIG({order}, {a}, {b}): KS D = {d}");
    }
}

#[test]
fn inverse_gaussian_passes_ks() {
    let (mu, shape) = (0.7f64, 2.5f64);
    let density = move |x: f64| (-(shape * (x - mu).powi(2)) / (2.0 * mu * mu * x)).exp() * x.powf(-1.5);
    let cdf = NumericCdf::new(density, -25.0, 6.0, 200_000);
    let mut rng = RngStream::new(109, 0);
    let n = 50_000;
    let xs: Vec<f64> = (0..n).map(|_| sample_inverse_gaussian(mu, shape, &mut rng).unwrap()).collect();
    let d = ks_statistic(&xs, |x| cdf.eval(x));
    assert!(d < ks_critical_01(n), "KS D = {d}");
}

fn sample_corr(x: &Array2<f64>, i: usize, j: usize) -> f64 {
    let n = x.nrows() as f64;
    let a = x.column(i);
    let b = x.column(j);
    let ma = a.sum() / n;
    let mb = b.sum() / n;
    let cov = a.iter().zip(b.iter()).map(|(u, v)| (u - ma) * (v - mb)).sum::<f64>();
    let va = a.iter().map(|u| (u - ma).powi(2)).sum::<f64>();
    let vb = b.iter().map(|v| (v - mb).powi(2)).sum::<f64>();
    cov / (va * vb).sqrt()
}

#[test]
fn mvn_identity_is_uncorrelated() {
    let mut rng = RngStream::new(110, 0);
    let x = sample_mvn_zero(&SpdMatrix::<f64>::identity(3), 100_000, &mut rng);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        assert!(sample_corr(&x, i, j).abs() < 0.02);
    }
}

#[test]
fn mvn_recovers_correlation() {
    let mut rng = RngStream::new(111, 0);
    let cov = SpdMatrix::new(array![[1.0, 0.5], [0.5, 1.0]]).unwrap();
    let x = sample_mvn_zero(&cov, 100_000, &mut rng);
    assert!((sample_corr(&x, 0, 1) - 0.5).abs() < 0.01);
}

#[test]
fn samplers_are_reproducible() {
    let run = || {
        let mut rng = RngStream::new(112, 4);
        let w = sample_wishart_std(5.0, &SpdMatrix::<f64>::identity(3), &mut rng).unwrap();
        let g: f64 = sample_gig(-1.0, 2.0, 3.0, &mut rng).unwrap();
        let m = sample_mvn_zero(&SpdMatrix::<f64>::identity(2), 3, &mut rng);
        (w.into_inner(), g, m)
    };
    assert_eq!(run(), run());
}

#[test]
fn single_precision_samplers() {
    let mut rng = RngStream::new(113, 0);
    let xs: Vec<f64> = (0..100_000)
        .map(|_| sample_gamma(3.0f32, 2.0f32, &mut rng).unwrap() as f64)
        .collect();
    let (m, se) = mean_se(&xs);
    assert!((m - 1.5).abs() < 3.0 * se);
    let w = sample_wishart_std(4.0f32, &SpdMatrix::<f32>::identity(2), &mut rng).unwrap();
    assert!(w.get(0, 0) > 0.0);
}
