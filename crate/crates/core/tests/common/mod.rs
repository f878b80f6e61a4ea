#![allow(dead_code)]

use riwgm::num::{sample_wishart_std, RngStream, SpdMatrix};

/// One-sample Kolmogorov–Smirnov statistic.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// Asymptotic Kolmogorov critical value at level 0.01.
pub fn ks_critical_01(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

/// Composite Simpson rule on [a, b] with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// ∫₀^∞ f(x) dx through x = e^u, truncated to u ∈ [lo, hi].
pub fn integrate_positive(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    simpson(|u| {
        let x = u.exp();
        f(x) * x
    }, lo, hi, n)
}

/// Tabulated CDF of an unnormalised density on (0, ∞), built on a log grid
/// by the trapezoid rule and interpolated linearly in log x.
pub struct NumericCdf {
    log_x: Vec<f64>,
    cdf: Vec<f64>,
}

impl NumericCdf {
    pub fn new(density: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Self {
        let h = (hi - lo) / n as f64;
        let log_x: Vec<f64> = (0..=n).map(|i| lo + i as f64 * h).collect();
        let g: Vec<f64> = log_x.iter().map(|&u| density(u.exp()) * u.exp()).collect();
        let mut cdf = vec![0.0; n + 1];
        for i in 1..=n {
            cdf[i] = cdf[i - 1] + 0.5 * h * (g[i] + g[i - 1]);
        }
        let total = cdf[n];
        cdf.iter_mut().for_each(|c| *c /= total);
        Self { log_x, cdf }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let u = x.ln();
        let lo = self.log_x[0];
        let h = self.log_x[1] - lo;
        let pos = (u - lo) / h;
        if pos <= 0.0 {
            return 0.0;
        }
        let i = pos.floor() as usize;
        if i + 1 >= self.log_x.len() {
            return 1.0;
        }
        let t = pos - i as f64;
        self.cdf[i] * (1.0 - t) + self.cdf[i + 1] * t
    }

    pub fn quantile(&self, q: f64) -> f64 {
        let i = self.cdf.partition_point(|&c| c < q).max(1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let t = if c1 > c0 { (q - c0) / (c1 - c0) } else { 0.0 };
        (self.log_x[i - 1] * (1.0 - t) + self.log_x[i] * t).exp()
    }
}

pub mod geweke {
    use ndarray::Array2;
    use riwgm::num::linalg::gram;
    use riwgm::num::{sample_gamma, sample_mvn_zero, sample_wishart_std, RngStream, SpdMatrix};
    use riwgm::sampler::{gibbs_sweep, ChainState, Hyperparameters, Variant};

    pub const NAMES: [&str; 4] = ["omega_11", "lambda_1", "d_1", "trace_omega"];

    /// Scale on which the four statistics are compared.
    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    pub enum Scale {
        Raw,
        Log,
    }

    #[derive(Debug)]
    pub struct Comparison {
        pub name: &'static str,
        pub forward: f64,
        pub forward_se: f64,
        pub successive: f64,
        pub successive_se: f64,
    }

    impl Comparison {
        pub fn z(&self) -> f64 {
            if self.forward == self.successive {
                return 0.0;
            }
            (self.forward - self.successive) / (self.forward_se.powi(2) + self.successive_se.powi(2)).sqrt()
        }
    }

    #[derive(Debug)]
    pub struct Outcome {
        pub comparisons: Vec<Comparison>,
        /// Set when the successive-conditional chain hit a numerical failure.
        pub failure: Option<String>,
    }

    impl Outcome {
        pub fn passes(&self, z_max: f64) -> bool {
            self.failure.is_none() && self.comparisons.iter().all(|c| c.z().abs() <= z_max)
        }
    }

    fn stats(state: &ChainState<f64>, scale: Scale) -> [f64; 4] {
        let p = state.p();
        let tr: f64 = (0..p).map(|k| state.omega.get(k, k)).sum();
        let raw = [state.omega.get(0, 0), state.lambda[0], state.d[0], tr];
        match scale {
            Scale::Raw => raw,
            Scale::Log => raw.map(f64::ln),
        }
    }

    /// Draws (Ω, d, λ) from the prior.
    fn prior_draw(hyper: &Hyperparameters<f64>, p: usize, rng: &mut RngStream) -> ChainState<f64> {
        let (lambda, d) = match hyper.variant {
            Variant::Riw => {
                let lambda: Vec<f64> = (0..p)
                    .map(|k| sample_gamma(hyper.a_lambda[k], hyper.b_lambda[k], rng).unwrap())
                    .collect();
                // d_k ~ InvGamma(b/2 + 1, λ_k²/2)
                let d = lambda
                    .iter()
                    .map(|l| 1.0 / sample_gamma(hyper.b / 2.0 + 1.0, l * l / 2.0, rng).unwrap())
                    .collect();
                (lambda, d)
            }
            Variant::IwBaseline => {
                let d = sample_gamma(1.0, 1.0, rng).unwrap();
                (vec![1.0; p], vec![d; p])
            }
        };
        let inv_d: Vec<f64> = d.iter().map(|v: &f64| 1.0 / v).collect();
        let scale = SpdMatrix::from_diagonal(&inv_d).unwrap();
        let omega = sample_wishart_std(hyper.b + p as f64 - 1.0, &scale, rng).unwrap();
        ChainState { omega, d, lambda, iteration: 0 }
    }

    fn data_gram(omega: &SpdMatrix<f64>, n: usize, rng: &mut RngStream) -> Array2<f64> {
        let sigma = omega.inverse().unwrap();
        gram(sample_mvn_zero(&sigma, n, rng).view())
    }

    fn batch_mean_se(xs: &[f64], batch: usize) -> (f64, f64) {
        let nb = xs.len() / batch;
        let means: Vec<f64> = (0..nb)
            .map(|b| xs[b * batch..(b + 1) * batch].iter().sum::<f64>() / batch as f64)
            .collect();
        let m = means.iter().sum::<f64>() / nb as f64;
        let v = means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (nb as f64 - 1.0);
        (m, (v / nb as f64).sqrt())
    }

    /// Marginal-conditional versus successive-conditional simulation of the
    /// joint law of parameters and data.
    pub fn run(
        hyper: &Hyperparameters<f64>,
        n: usize,
        p: usize,
        forward_draws: usize,
        chain_sweeps: usize,
        seed: u64,
        scale: Scale,
    ) -> Outcome {
        let mut rng = RngStream::new(seed, 0);
        let mut forward: Vec<Vec<f64>> = vec![Vec::with_capacity(forward_draws); 4];
        for _ in 0..forward_draws {
            let s = prior_draw(hyper, p, &mut rng);
            for (i, v) in stats(&s, scale).into_iter().enumerate() {
                forward[i].push(v);
            }
        }
        let mut rng = RngStream::new(seed, 1);
        let mut state = prior_draw(hyper, p, &mut rng);
        let mut g = data_gram(&state.omega, n, &mut rng);
        let mut successive: Vec<Vec<f64>> = vec![Vec::with_capacity(chain_sweeps); 4];
        let mut failure = None;
        for sweep in 0..chain_sweeps {
            if let Err(e) = gibbs_sweep(&mut state, &g, n, hyper, &mut rng) {
                failure = Some(format!("sweep {sweep}: {e}"));
                break;
            }
            let sigma = match state.omega.inverse() {
                Ok(s) => s,
                Err(e) => {
                    failure = Some(format!("sweep {sweep}: {e}"));
                    break;
                }
            };
            g = gram(sample_mvn_zero(&sigma, n, &mut rng).view());
            for (i, v) in stats(&state, scale).into_iter().enumerate() {
                successive[i].push(v);
            }
        }
        let comparisons = (0..4)
            .map(|i| {
                let (fm, fse) = batch_mean_se(&forward[i], 1);
                let (sm, sse) = if successive[i].len() >= 4_000 {
                    batch_mean_se(&successive[i], 2_000)
                } else {
                    (f64::NAN, f64::NAN)
                };
                Comparison {
                    name: NAMES[i],
                    forward: fm,
                    forward_se: fse,
                    successive: sm,
                    successive_se: sse,
                }
            })
            .collect();
        Outcome { comparisons, failure }
    }
}

/// Coordinate-descent solver for
/// `min (β − β̂)ᵀ Q (β − β̂) + Δ Σ_j |β_j| / β̂_j²`.
pub mod lasso_oracle {
    use ndarray::{Array1, ArrayView1, ArrayView2};

    pub fn solve(q: ArrayView2<f64>, beta_hat: ArrayView1<f64>, delta: f64) -> Array1<f64> {
        let m = beta_hat.len();
        let mut beta = beta_hat.to_owned();
        for _ in 0..200_000 {
            let mut change: f64 = 0.0;
            for j in 0..m {
                let bh = beta_hat[j];
                if bh == 0.0 {
                    beta[j] = 0.0;
                    continue;
                }
                let mut r = q[[j, j]] * bh;
                for l in 0..m {
                    if l != j {
                        r -= q[[j, l]] * (beta[l] - beta_hat[l]);
                    }
                }
                let t = delta / (2.0 * bh * bh);
                let new = r.signum() * (r.abs() - t).max(0.0) / q[[j, j]];
                change = change.max((new - beta[j]).abs());
                beta[j] = new;
            }
            if change < 1e-15 {
                break;
            }
        }
        beta
    }
}

/// Random SPD matrix: a Wishart draw with a small diagonal lift.
pub fn random_spd(p: usize, rng: &mut RngStream) -> SpdMatrix<f64> {
    let w = sample_wishart_std(p as f64 + 2.0, &SpdMatrix::identity(p), rng).unwrap();
    let mut m = w.into_inner();
    for i in 0..p {
        m[[i, i]] += 0.1;
    }
    SpdMatrix::new(m).unwrap()
}

/// Log of `∫ IW(Σ; b, D) Π_k InvGamma(d_k; b/2 + 1, λ_k²/2) dD` up to a
/// constant in `(b, p)`. The integrand factorises over `k` because the
/// inverse-Wishart kernel depends on `D` only through `|D|` and `tr(DΩ)`.
pub fn log_mixture_by_quadrature(sigma: &SpdMatrix<f64>, lambda: &[f64], b: f64) -> f64 {
    let p = sigma.dim();
    let omega = sigma.inverse().unwrap();
    let pf = p as f64;
    let alpha = b / 2.0 + 1.0;
    let mut total = -(b + 2.0 * pf) / 2.0 * sigma.log_det();
    for k in 0..p {
        let (g, lam) = (omega.get(k, k), lambda[k]);
        let beta = lam * lam / 2.0;
        let f = |d: f64| {
            ((b + pf - 1.0) / 2.0 * d.ln() - d * g / 2.0 + alpha * beta.ln() - (alpha + 1.0) * d.ln() - beta / d).exp()
        };
        total += integrate_positive(f, -25.0, 12.0, 60_000).ln();
    }
    total
}
