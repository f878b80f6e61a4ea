//! Fractional-Gaussian-noise benchmark: ROC areas along the selection path
//! and FDR point-estimate accuracy, for the regularized prior and the
//! inverse-Wishart baseline.

use std::time::Instant;

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fdr::{fdr_threshold, inclusion_matrix, point_estimate, FdrRule};
use crate::num::random::sample_mvn_zero;
use crate::num::rng::RngStream;
use crate::sampler::{
    default_hyperparameters, run_chain, standardize, ChainConfig, ChainSamples, ConditionalD,
    DataMatrix, Hyperparameters, LambdaShape, Variant,
};
use crate::selection::{build_path, EdgeRule, GridSpec, SelectionPath};
use crate::simbench::metrics::{confusion, roc_auc, ConfusionMetrics};
use crate::simbench::truth::{fgn_covariance, FgnSpec};
use crate::num::linalg::SpdMatrix;

/// Partial-correlation threshold of the moderately strong edge set.
pub const ES1: f64 = 0.1;
/// Partial-correlation threshold of the weak edge set.
pub const ES005: f64 = 0.005;

/// 20 evenly spaced thresholds on [0.005, 0.26].
pub fn default_thresholds() -> Vec<f64> {
    (0..20).map(|i| 0.005 + 0.255 * i as f64 / 19.0).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Riw,
    Iw,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Riw => "riw",
            Method::Iw => "iw",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Case1Config {
    pub n: usize,
    pub p: usize,
    pub hurst: f64,
    pub replicates: usize,
    pub seed: u64,
    pub chain: ChainConfig,
    pub thresholds: Vec<f64>,
    pub eta: f64,
    pub fdr_rule: FdrRule,
    pub grid: GridSpec,
    pub rule: EdgeRule,
    pub conditional_d: ConditionalD,
    pub lambda_shape: LambdaShape,
    pub methods: Vec<Method>,
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
}

impl Case1Config {
    pub fn new(n: usize, p: usize) -> Self {
        Self {
            n,
            p,
            hurst: 0.7,
            replicates: 10,
            seed: 1,
            chain: ChainConfig::default(),
            thresholds: default_thresholds(),
            eta: 0.2,
            fdr_rule: FdrRule::Complemented,
            grid: GridSpec::default(),
            rule: EdgeRule::And,
            conditional_d: ConditionalD::PaperIg,
            lambda_shape: LambdaShape::PaperPlusOne,
            methods: vec![Method::Riw, Method::Iw],
            jobs: 0,
        }
    }

    pub fn hyperparameters(&self, method: Method) -> Hyperparameters<f64> {
        let h = default_hyperparameters(self.n, self.p)
            .with_conditional_d(self.conditional_d)
            .with_lambda_shape(self.lambda_shape);
        match method {
            Method::Riw => h,
            Method::Iw => h.with_variant(Variant::IwBaseline),
        }
    }
}

/// One method on one replicate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReplicateResult {
    pub replicate: usize,
    pub method: Method,
    pub auc_es1: f64,
    pub auc_es005: f64,
    /// ROC area at each configured threshold.
    pub auc_curve: Vec<f64>,
    pub point_es1: ConfusionMetrics,
    pub point_es005: ConfusionMetrics,
    pub zeta: usize,
    pub c_eta: f64,
    pub seconds: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
}

impl MeanSe {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        if xs.is_empty() {
            return Self { mean: f64::NAN, se: f64::NAN };
        }
        let mean = xs.iter().sum::<f64>() / n;
        let se = if xs.len() > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt()
        } else {
            f64::NAN
        };
        Self { mean, se }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub auc_es1: MeanSe,
    pub auc_es005: MeanSe,
    pub auc_curve: Vec<MeanSe>,
    pub sp_es1: MeanSe,
    pub se_es1: MeanSe,
    pub sp_es005: MeanSe,
    pub se_es005: MeanSe,
    pub seconds: MeanSe,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Case1Report {
    pub config: Case1Config,
    pub replicates: Vec<ReplicateResult>,
    pub summaries: Vec<MethodSummary>,
}

impl Case1Report {
    pub fn summary(&self, method: Method) -> Option<&MethodSummary> {
        self.summaries.iter().find(|s| s.method == method)
    }

    /// Results of one method, in replicate order.
    pub fn results(&self, method: Method) -> Vec<&ReplicateResult> {
        self.replicates.iter().filter(|r| r.method == method).collect()
    }
}

/// Standardizes, samples and traces the selection path.
pub fn fit_path(
    data: &DataMatrix<f64>,
    hyper: &Hyperparameters<f64>,
    chain: &ChainConfig,
    grid: &GridSpec,
    rule: EdgeRule,
    rng: &mut RngStream,
) -> Result<(ChainSamples<f64>, SelectionPath)> {
    let samples = run_chain(data, hyper, chain, rng)?;
    let path = build_path(&samples, grid, rule)?;
    Ok((samples, path))
}

/// ROC areas and FDR point-estimate accuracy of one fitted path.
pub fn evaluate_path(
    samples: &ChainSamples<f64>,
    path: &SelectionPath,
    omega0: &SpdMatrix<f64>,
    thresholds: &[f64],
    eta: f64,
    fdr_rule: FdrRule,
) -> Result<(Vec<f64>, [f64; 2], [ConfusionMetrics; 2], usize, f64)> {
    let truth = |c: f64| crate::simbench::truth::true_edge_set(omega0, c);
    let curve = thresholds
        .iter()
        .map(|&c| roc_auc(&path.adjacency_at, &truth(c)))
        .collect::<Result<Vec<_>>>()?;
    let (t1, t005) = (truth(ES1), truth(ES005));
    let aucs = [roc_auc(&path.adjacency_at, &t1)?, roc_auc(&path.adjacency_at, &t005)?];
    let incl = inclusion_matrix(path)?;
    let thr = fdr_threshold(&incl, eta, fdr_rule)?;
    let est = point_estimate(&incl, thr.c_eta, samples.omega_mean().view())?;
    let points = [confusion(&est.adjacency, &t1)?, confusion(&est.adjacency, &t005)?];
    Ok((curve, aucs, points, thr.zeta, thr.c_eta))
}

fn run_replicate(config: &Case1Config, sigma: &SpdMatrix<f64>, omega0: &SpdMatrix<f64>, rep: usize) -> Result<Vec<ReplicateResult>> {
    let root = RngStream::new(config.seed, rep as u64);
    let mut data_rng = root.child(0);
    let x = sample_mvn_zero(sigma, config.n, &mut data_rng);
    let data = standardize(x)?;
    let mut out = Vec::new();
    for (m, &method) in config.methods.iter().enumerate() {
        let start = Instant::now();
        let hyper = config.hyperparameters(method);
        let mut rng = root.child(1 + m as u64);
        let (samples, path) = fit_path(&data, &hyper, &config.chain, &config.grid, config.rule, &mut rng)?;
        let (curve, aucs, points, zeta, c_eta) =
            evaluate_path(&samples, &path, omega0, &config.thresholds, config.eta, config.fdr_rule)?;
        let seconds = start.elapsed().as_secs_f64();
        log::info!(
            "replicate {} {}: ES1 AUC {:.3}, ES005 AUC {:.3}, {seconds:.1}s",
            rep + 1,
            method.name(),
            aucs[0],
            aucs[1]
        );
        out.push(ReplicateResult {
            replicate: rep,
            method,
            auc_es1: aucs[0],
            auc_es005: aucs[1],
            auc_curve: curve,
            point_es1: points[0],
            point_es005: points[1],
            zeta,
            c_eta,
            seconds,
        });
    }
    Ok(out)
}

fn summarise(method: Method, rs: &[&ReplicateResult], curve_len: usize) -> MethodSummary {
    let col = |f: &dyn Fn(&ReplicateResult) -> f64| MeanSe::of(&rs.iter().map(|r| f(r)).collect::<Vec<_>>());
    MethodSummary {
        method,
        auc_es1: col(&|r| r.auc_es1),
        auc_es005: col(&|r| r.auc_es005),
        auc_curve: (0..curve_len).map(|i| col(&|r| r.auc_curve[i])).collect(),
        sp_es1: col(&|r| r.point_es1.sp),
        se_es1: col(&|r| r.point_es1.se),
        sp_es005: col(&|r| r.point_es005.sp),
        se_es005: col(&|r| r.point_es005.se),
        seconds: col(&|r| r.seconds),
    }
}

/// Runs every replicate (in parallel across replicates) and aggregates.
pub fn run_case1(config: &Case1Config) -> Result<Case1Report> {
    if config.replicates == 0 || config.methods.is_empty() {
        return Err(Error::invalid("replicates", "need at least one replicate and one method"));
    }
    let sigma = fgn_covariance(FgnSpec { p: config.p, hurst: config.hurst })?;
    let omega0 = sigma.inverse()?;
    let work = || -> Result<Vec<Vec<ReplicateResult>>> {
        (0..config.replicates)
            .into_par_iter()
            .map(|rep| run_replicate(config, &sigma, &omega0, rep))
            .collect()
    };
    let nested = if config.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::Usage(format!("cannot start {} workers: {e}", config.jobs)))?
            .install(work)?
    } else {
        work()?
    };
    let replicates: Vec<ReplicateResult> = nested.into_iter().flatten().collect();
    let summaries = config
        .methods
        .iter()
        .map(|&m| {
            let rs: Vec<&ReplicateResult> = replicates.iter().filter(|r| r.method == m).collect();
            summarise(m, &rs, config.thresholds.len())
        })
        .collect();
    Ok(Case1Report {
        config: config.clone(),
        replicates,
        summaries,
    })
}

/// Partial correlations of the fGn precision, for reference tables.
pub fn fgn_truth(p: usize, hurst: f64) -> Result<(SpdMatrix<f64>, Array2<f64>)> {
    let omega0 = fgn_covariance(FgnSpec { p, hurst })?.inverse()?;
    let rho = crate::simbench::truth::partial_correlations(&omega0);
    Ok((omega0, rho))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoke_configuration_fills_every_column() {
        let mut cfg = Case1Config::new(60, 10);
        cfg.replicates = 2;
        cfg.chain = ChainConfig {
            iters: 400,
            burnin: 100,
            thin: 1,
            store_draws: false,
        };
        let report = run_case1(&cfg).unwrap();
        assert_eq!(report.replicates.len(), 4);
        for r in &report.replicates {
            assert_eq!(r.auc_curve.len(), 20);
            assert!(r.auc_curve.iter().all(|a| (0.0..=1.0).contains(a)));
            assert!((0.0..=1.0).contains(&r.auc_es1));
        }
        let s = report.summary(Method::Riw).unwrap();
        assert!(s.auc_es1.mean.is_finite() && s.auc_es1.se.is_finite());
        assert_eq!(report.results(Method::Iw).len(), 2);
    }

    #[test]
    fn thresholds_cover_the_range() {
        let t = default_thresholds();
        assert_eq!(t.len(), 20);
        assert_eq!(t[0], 0.005);
        assert!((t[19] - 0.26).abs() < 1e-15);
    }
}
