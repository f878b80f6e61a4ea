use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use riwgm::io::{
    read_chain, read_edges, read_json, read_matrix, read_path, write_case1_report, write_chain, write_confusion,
    write_edges, write_fdr, write_json, write_matrix, write_path, write_roc,
};
use riwgm::num::sample_mvn_zero;
use riwgm::sampler::run_chain_with_progress;
use riwgm::selection::estimate_precision;
use riwgm::simbench::{
    bic_score, confusion, fgn_covariance, hub_degrees, roc_auc, roc_points, run_case1, sparse_precision_generator,
    true_edge_set, Case1Config, FgnSpec, Method, SparseSpec, TruthSpec,
};
use riwgm::{
    build_path, default_hyperparameters, fdr_threshold, inclusion_matrix, point_estimate, standardize, Adjacency,
    ChainConfig, Error, FdrRule, GridSpec, Result, RngStream, SpdMatrix, Variant,
};
use serde_json::json;

use crate::args::{BenchArgs, EvaluateArgs, FdrArgs, FdrRuleArg, FitArgs, OutArg, PriorArg, SelectArgs, SimCase, SimulateArgs};
use crate::config::{Prior, RunConfig};

pub const OUTPUT_ROOT_VAR: &str = "RIWGM_OUTPUT_ROOT";
const RUN_CONFIG: &str = "run.json";

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Resolves `--out` (or the environment default) and creates the directory;
/// its parent must already exist.
fn output_dir(arg: &OutArg, command: &str) -> Result<PathBuf> {
    let dir = match (&arg.out, std::env::var_os(OUTPUT_ROOT_VAR)) {
        (Some(p), _) => p.clone(),
        (None, Some(root)) => PathBuf::from(root).join(command),
        (None, None) => {
            return Err(Error::Usage(format!("no --out given and {OUTPUT_ROOT_VAR} is not set")));
        }
    };
    if !dir.is_dir() {
        std::fs::create_dir(&dir).map_err(io_error(&dir))?;
    }
    Ok(dir)
}

fn threshold_label(c: f64) -> String {
    format!("truth_edges_c{c}.csv")
}

pub fn simulate(a: &SimulateArgs) -> Result<()> {
    if a.n < 2 || a.p < 2 {
        return Err(Error::Usage("--n and --p must be at least 2".into()));
    }
    let out = output_dir(&a.out, "simulate")?;
    let root = RngStream::new(a.seed, 0);
    let (truth, spec) = match a.case {
        SimCase::Fgn => {
            let sigma = fgn_covariance(FgnSpec { p: a.p, hurst: a.hurst })?;
            let spec = json!({"case": "fgn", "n": a.n, "p": a.p, "hurst": a.hurst});
            (TruthSpec::from_precision(sigma.inverse()?), spec)
        }
        SimCase::Sparse => {
            let degree = if a.hubs == 0 { 0 } else { a.hub_degree.unwrap_or(a.p / 4) };
            let s = SparseSpec::new(a.p, a.hubs, degree);
            let truth = sparse_precision_generator(s.clone(), &mut root.child(1))?;
            let spec = json!({
                "case": "sparse", "n": a.n, "p": a.p, "hub_count": a.hubs, "hub_degree_min": degree,
                "background_edges": s.background_edges, "magnitude": [s.magnitude.0, s.magnitude.1],
                "margin": s.margin, "hubs": truth.hubs.iter().map(|h| h + 1).collect::<Vec<_>>(),
            });
            (truth, spec)
        }
    };
    let x = sample_mvn_zero(&truth.covariance()?, a.n, &mut root.child(0));
    write_matrix(&out.join("data.csv"), x.view())?;
    write_matrix(&out.join("precision.csv"), truth.omega0.view())?;
    let support = Adjacency::from_matrix(truth.omega0.view())?;
    write_edges(&out.join("truth_edges.csv"), &support.edges(), &[], &[])?;
    let mut files = vec!["data.csv".to_string(), "precision.csv".into(), "truth_edges.csv".into()];
    for &c in &a.thresholds {
        let name = threshold_label(c);
        write_edges(&out.join(&name), &truth.edges(c).edges(), &[], &[])?;
        files.push(name);
    }
    let record = json!({"seed": a.seed, "spec": spec, "thresholds": a.thresholds, "files": files});
    write_json(&out.join("simulate.json"), &record)
}

pub fn fit(a: &FitArgs) -> Result<()> {
    let base = match &a.config {
        Some(path) => read_json::<RunConfig>(path)?,
        None => RunConfig::default(),
    };
    let config = base.apply(a);
    let data_path = config
        .data_path
        .clone()
        .ok_or_else(|| Error::Usage("no data file: pass --data or set data_path in the config".into()))?;
    let out = output_dir(&a.out, "fit")?;
    let data = standardize(read_matrix(&data_path)?)?;
    let mut hyper = default_hyperparameters::<f64>(data.n(), data.p())
        .with_conditional_d(config.conditional_d)
        .with_lambda_shape(config.lambda_shape.into());
    if config.prior == Prior::Iw {
        hyper = hyper.with_variant(Variant::IwBaseline);
    }
    let chain = ChainConfig {
        iters: config.iters,
        burnin: config.burnin,
        thin: config.thin,
        store_draws: config.store_draws,
    };
    let log_path = out.join("fit.log");
    let mut log = BufWriter::new(File::create(&log_path).map_err(io_error(&log_path))?);
    let start = Instant::now();
    let mut last = 0.0;
    let mut rng = RngStream::new(config.seed, 0);
    let samples = run_chain_with_progress(&data, &hyper, &chain, &mut rng, |it, _| {
        if it % 1000 == 0 || it == chain.iters {
            let t = start.elapsed().as_secs_f64();
            let line = format!("iteration {it}/{}: {t:.3}s elapsed, {:.3}s for this block", chain.iters, t - last);
            log::info!("{line}");
            let _ = writeln!(log, "{line}");
            last = t;
        }
    });
    log.flush().map_err(io_error(&log_path))?;
    let samples = samples?;
    write_chain(&out, &samples)?;
    write_json(&out.join(RUN_CONFIG), &config)
}

/// The run configuration stored beside a chain, or the defaults.
fn chain_config(chain_dir: &Path) -> Result<RunConfig> {
    let path = chain_dir.join(RUN_CONFIG);
    if path.exists() {
        read_json(&path)
    } else {
        Ok(RunConfig::default())
    }
}

pub fn select(a: &SelectArgs) -> Result<()> {
    let config = chain_config(&a.chain)?;
    let samples = read_chain(&a.chain)?;
    let out = output_dir(&a.out, "select")?;
    let grid = GridSpec::Auto {
        count: a.delta_count.unwrap_or(config.delta_count),
        lower_ratio: a.lower_ratio,
    };
    let rule = a.rule.map(Into::into).unwrap_or(config.rule);
    let path = build_path(&samples, &grid, rule)?;
    let inclusion = inclusion_matrix(&path)?;
    write_path(&out, &path, &inclusion)
}

pub fn fdr(a: &FdrArgs) -> Result<()> {
    let stored = read_path(&a.path)?;
    let samples = read_chain(&a.chain)?;
    if samples.p() != stored.manifest.p {
        return Err(Error::DimensionMismatch {
            expected: format!("{} nodes (path)", stored.manifest.p),
            found: format!("{} nodes (chain)", samples.p()),
        });
    }
    let eta = match a.eta {
        Some(e) => e,
        None => chain_config(&a.chain)?.eta,
    };
    let rule = match a.fdr_rule {
        FdrRuleArg::Complemented => FdrRule::Complemented,
        FdrRuleArg::Direct => FdrRule::Direct,
    };
    let out = output_dir(&a.out, "fdr")?;
    let threshold = fdr_threshold(&stored.inclusion, eta, rule)?;
    let estimate = point_estimate(&stored.inclusion, threshold.c_eta, samples.omega_mean().view())?;
    write_fdr(&out, &threshold, &stored.inclusion, &estimate)
}

pub fn evaluate(a: &EvaluateArgs) -> Result<()> {
    let stored = a.path.as_deref().map(read_path).transpose()?;
    let truth_precision = a
        .truth_precision
        .as_deref()
        .map(|p| read_matrix(p).and_then(SpdMatrix::new))
        .transpose()?;
    let p = match (&stored, &truth_precision, a.p) {
        (Some(s), _, _) => s.manifest.p,
        (None, Some(t), _) => t.dim(),
        (None, None, Some(p)) => p,
        _ => return Err(Error::Usage("cannot infer the node count: pass --path, --truth-precision or --p".into())),
    };
    let truth = match (&a.truth, &truth_precision) {
        (Some(path), _) => read_edges(path, p)?,
        (None, Some(omega)) => {
            if omega.dim() != p {
                return Err(Error::DimensionMismatch {
                    expected: format!("{p} nodes"),
                    found: format!("{} nodes in the true precision", omega.dim()),
                });
            }
            true_edge_set(omega, a.threshold)
        }
        (None, None) => return Err(Error::Usage("pass --truth or --truth-precision".into())),
    };
    let out = output_dir(&a.out, "evaluate")?;
    let mut summary = serde_json::Map::new();
    summary.insert("p".into(), json!(p));
    summary.insert("true_edges".into(), json!(truth.edge_count()));
    if let Some(path) = &a.estimate {
        let est = read_edges(path, p)?;
        let m = confusion(&est, &truth)?;
        write_confusion(&out.join("confusion.csv"), "estimate", &m)?;
        summary.insert("confusion".into(), serde_json::to_value(m).expect("plain struct"));
        if let Some(t) = a.hub_threshold {
            let hubs = hub_degrees(&est, t);
            let mut body = String::from("node,degree\n");
            for (k, d) in &hubs {
                body.push_str(&format!("{},{d}\n", k + 1));
            }
            let hub_path = out.join("hubs.csv");
            std::fs::write(&hub_path, body).map_err(io_error(&hub_path))?;
        }
    }
    if let Some(s) = &stored {
        write_roc(&out.join("roc.csv"), &roc_points(&s.graphs, &truth)?)?;
        summary.insert("auc".into(), json!(roc_auc(&s.graphs, &truth)?));
        if let (Some(chain), Some(data)) = (&a.chain, &a.data) {
            let samples = read_chain(chain)?;
            let x = standardize(read_matrix(data)?)?;
            let omega_mean = samples.omega_mean();
            let mut body = String::from("delta,edges,bic\n");
            for (delta, adj) in s.grid.values().iter().zip(&s.graphs) {
                let est = estimate_precision(omega_mean.view(), adj)?;
                let bic = bic_score(est.omega_est.view(), x.x()).unwrap_or(f64::NAN);
                body.push_str(&format!("{delta:.16e},{},{bic:.16e}\n", adj.edge_count()));
            }
            let bic_path = out.join("bic.csv");
            std::fs::write(&bic_path, body).map_err(io_error(&bic_path))?;
        }
    }
    write_json(&out.join("evaluation.json"), &summary)
}

pub fn bench(a: &BenchArgs) -> Result<()> {
    let out = output_dir(&a.out, "bench")?;
    let mut config = Case1Config::new(a.n, a.p);
    config.hurst = a.hurst;
    config.replicates = a.replicates;
    config.jobs = a.jobs;
    config.seed = a.seed;
    config.chain = ChainConfig {
        iters: a.iters,
        burnin: a.burnin,
        thin: a.thin,
        store_draws: false,
    };
    config.eta = a.eta;
    config.rule = a.rule.into();
    config.conditional_d = a.conditional_d.into();
    config.lambda_shape = crate::config::LambdaShapeKey::from(a.lambda_shape).into();
    config.methods = a
        .methods
        .iter()
        .map(|m| match m {
            PriorArg::Riw => Method::Riw,
            PriorArg::Iw => Method::Iw,
        })
        .collect();
    let report = run_case1(&config)?;
    for s in &report.summaries {
        println!(
            "{}: ES1 AUC {:.3} ({:.3}), ES005 AUC {:.3} ({:.3}), SP1 {:.3}, SE1 {:.3}, {:.1}s per replicate",
            s.method.name(),
            s.auc_es1.mean,
            s.auc_es1.se,
            s.auc_es005.mean,
            s.auc_es005.se,
            s.sp_es1.mean,
            s.se_es1.mean,
            s.seconds.mean
        );
    }
    write_case1_report(&out, &report)
}
