use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fdr::{FdrRule, FdrThreshold, InclusionMatrix};
use crate::io::table::{create, io_error, read_edges, read_json, read_matrix, write_edges, write_json, write_matrix};
use crate::sampler::{ChainMeta, ChainSamples, Hyperparameters, NodeMoments, StoredDraw};
use crate::selection::{Adjacency, DeltaGrid, EdgeRule, SelectionPath};
use crate::simbench::{Case1Report, ConfusionMetrics};

pub const CHAIN_META: &str = "meta.json";
pub const OMEGA_MEAN_FILE: &str = "omega_mean.csv";
pub const DRAWS_FILE: &str = "draws.bin";
pub const DRAWS_MAGIC: &[u8; 4] = b"RIWC";
pub const DRAWS_VERSION: u32 = 1;
pub const PATH_MANIFEST: &str = "manifest.json";
pub const INCLUSION_FILE: &str = "inclusion.csv";

/// Parameterisation notes recorded next to every chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub wishart: String,
    pub omega_update_df: String,
    pub beta: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Self {
            wishart: "Sigma ~ IW(b, D) <=> Omega ~ W(b + p - 1, D^-1)".into(),
            omega_update_df: "b + n + p - 1".into(),
            beta: "beta_kj = -omega_kj / omega_kk".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub meta: ChainMeta,
    pub hyperparameters: Option<Hyperparameters<f64>>,
    pub conventions: Conventions,
    pub draws_file: Option<String>,
}

fn node_file(dir: &Path, stem: &str, k: usize) -> PathBuf {
    dir.join("nodes").join(format!("{stem}_{}.csv", k + 1))
}

/// Writes `meta.json`, `omega_mean.csv`, `nodes/beta_hat_k.csv`,
/// `nodes/sigma_hat_k.csv` and, when draws were stored, `draws.bin`.
pub fn write_chain(dir: &Path, samples: &ChainSamples<f64>) -> Result<()> {
    let nodes = dir.join("nodes");
    std::fs::create_dir_all(&nodes).map_err(io_error(&nodes))?;
    let draws_file = match samples.stored_draws() {
        Some(draws) => {
            write_draws(&dir.join(DRAWS_FILE), samples.p(), draws)?;
            Some(DRAWS_FILE.to_string())
        }
        None => None,
    };
    let record = ChainRecord {
        meta: samples.meta().clone(),
        hyperparameters: samples.hyperparameters().cloned(),
        conventions: Conventions::default(),
        draws_file,
    };
    write_json(&dir.join(CHAIN_META), &record)?;
    write_matrix(&dir.join(OMEGA_MEAN_FILE), samples.omega_mean().view())?;
    let moments = samples.node_moments();
    for k in 0..samples.p() {
        let beta = moments.mean(k);
        write_matrix(&node_file(dir, "beta_hat", k), beta.view().insert_axis(ndarray::Axis(1)))?;
        write_matrix(&node_file(dir, "sigma_hat", k), moments.covariance(k).view())?;
    }
    Ok(())
}

/// Reads a chain directory written by [`write_chain`].
pub fn read_chain(dir: &Path) -> Result<ChainSamples<f64>> {
    let record: ChainRecord = read_json(&dir.join(CHAIN_META))?;
    let p = record.meta.p;
    let omega_path = dir.join(OMEGA_MEAN_FILE);
    let omega_mean = read_matrix(&omega_path)?;
    if omega_mean.dim() != (p, p) {
        return Err(Error::shape(format!("{p}x{p} in {}", omega_path.display()), format!("{:?}", omega_mean.dim())));
    }
    let mut means = Vec::with_capacity(p);
    let mut covs = Vec::with_capacity(p);
    for k in 0..p {
        let beta = read_matrix(&node_file(dir, "beta_hat", k))?;
        means.push(beta.column(0).to_owned());
        covs.push(read_matrix(&node_file(dir, "sigma_hat", k))?);
    }
    let moments = NodeMoments::from_summaries(record.meta.retained, &means, &covs)?;
    let samples = ChainSamples::from_parts(omega_mean, moments, record.meta, record.hyperparameters);
    match record.draws_file {
        Some(name) => Ok(samples.with_stored_draws(read_draws(&dir.join(name))?.1)),
        None => Ok(samples),
    }
}

/// Binary draw file: magic, `u32` version, `u64` p, `u64` count, then per draw
/// `Ω` row-major, `d` and `λ`, all little-endian `f64`.
pub fn write_draws(path: &Path, p: usize, draws: &[StoredDraw<f64>]) -> Result<()> {
    let mut out = create(path)?;
    let mut buf = Vec::with_capacity(24 + draws.len() * (p * p + 2 * p) * 8);
    buf.extend_from_slice(DRAWS_MAGIC);
    buf.extend_from_slice(&DRAWS_VERSION.to_le_bytes());
    buf.extend_from_slice(&(p as u64).to_le_bytes());
    buf.extend_from_slice(&(draws.len() as u64).to_le_bytes());
    for d in draws {
        for v in d.omega.iter().chain(&d.d).chain(&d.lambda) {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    out.write_all(&buf).map_err(io_error(path))?;
    out.flush().map_err(io_error(path))
}

pub fn read_draws(path: &Path) -> Result<(usize, Vec<StoredDraw<f64>>)> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path).map_err(io_error(path))?)
        .read_to_end(&mut bytes)
        .map_err(io_error(path))?;
    let bad = |m: &str| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        message: m.to_string(),
    };
    if bytes.len() < 24 || &bytes[..4] != DRAWS_MAGIC {
        return Err(bad("not a draw file"));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != DRAWS_VERSION {
        return Err(bad(&format!("unsupported version {version}")));
    }
    let p = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    let count = u64::from_le_bytes(bytes[16..24].try_into().unwrap()) as usize;
    let per = p * p + 2 * p;
    if bytes.len() != 24 + count * per * 8 {
        return Err(bad(&format!("expected {count} draws of dimension {p}")));
    }
    let values: Vec<f64> = bytes[24..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let draws = values
        .chunks_exact(per)
        .map(|c| StoredDraw {
            omega: Array2::from_shape_vec((p, p), c[..p * p].to_vec()).unwrap(),
            d: c[p * p..p * p + p].to_vec(),
            lambda: c[p * p + p..].to_vec(),
        })
        .collect();
    Ok((p, draws))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathManifest {
    pub p: usize,
    pub rule: EdgeRule,
    pub grid_file: String,
    pub edge_files: Vec<String>,
    pub edge_counts: Vec<usize>,
    pub inclusion_file: String,
    pub terminal_deltas: Vec<f64>,
    pub ridges: Vec<f64>,
}

/// A selection path as read back from disk.
#[derive(Clone, Debug)]
pub struct StoredPath {
    pub manifest: PathManifest,
    pub grid: DeltaGrid,
    pub graphs: Vec<Adjacency>,
    pub inclusion: InclusionMatrix,
}

/// Writes `grid.csv`, `edges/delta_XXX.csv` per grid point, the inclusion
/// matrix and `manifest.json`.
pub fn write_path(dir: &Path, path: &SelectionPath, inclusion: &InclusionMatrix) -> Result<()> {
    let edges_dir = dir.join("edges");
    std::fs::create_dir_all(&edges_dir).map_err(io_error(&edges_dir))?;
    crate::io::write_vector(&dir.join("grid.csv"), "delta", path.grid.values())?;
    let width = path.len().to_string().len().max(3);
    let mut edge_files = Vec::with_capacity(path.len());
    for (r, adj) in path.adjacency_at.iter().enumerate() {
        let name = format!("edges/delta_{:0width$}.csv", r + 1);
        write_edges(&dir.join(&name), &adj.edges(), &[], &[])?;
        edge_files.push(name);
    }
    write_matrix(&dir.join(INCLUSION_FILE), inclusion.p_mat.view())?;
    let manifest = PathManifest {
        p: path.p(),
        rule: path.rule,
        grid_file: "grid.csv".into(),
        edge_files,
        edge_counts: path.adjacency_at.iter().map(Adjacency::edge_count).collect(),
        inclusion_file: INCLUSION_FILE.into(),
        terminal_deltas: path.terminal_deltas.clone(),
        ridges: path.ridges.clone(),
    };
    write_json(&dir.join(PATH_MANIFEST), &manifest)
}

pub fn read_path(dir: &Path) -> Result<StoredPath> {
    let manifest: PathManifest = read_json(&dir.join(PATH_MANIFEST))?;
    let grid = DeltaGrid::new(crate::io::read_vector(&dir.join(&manifest.grid_file))?.to_vec())?;
    if grid.len() != manifest.edge_files.len() {
        return Err(Error::shape(
            format!("{} edge files", grid.len()),
            manifest.edge_files.len(),
        ));
    }
    let graphs = manifest
        .edge_files
        .iter()
        .map(|f| read_edges(&dir.join(f), manifest.p))
        .collect::<Result<Vec<_>>>()?;
    let inclusion = InclusionMatrix::from_matrix(read_matrix(&dir.join(&manifest.inclusion_file))?, grid.len())?;
    if inclusion.p() != manifest.p {
        return Err(Error::shape(format!("{} nodes", manifest.p), inclusion.p()));
    }
    Ok(StoredPath {
        manifest,
        grid,
        graphs,
        inclusion,
    })
}

/// JSON form of an [`FdrThreshold`]; `c_eta` is absent when nothing is
/// selected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdrRecord {
    pub eta: f64,
    pub c_eta: Option<f64>,
    pub zeta: usize,
    pub rule: FdrRule,
    pub min_eigenvalue: f64,
}

/// Writes `fdr.json`, the selected edge list `edges.csv` (with inclusion
/// frequencies), `omega_est.csv` and `graph.dot`.
pub fn write_fdr(
    dir: &Path,
    threshold: &FdrThreshold,
    inclusion: &InclusionMatrix,
    estimate: &crate::selection::GraphEstimate<f64>,
) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(io_error(dir))?;
    let ranked = crate::fdr::ranked_edges(inclusion, threshold.c_eta);
    let edges: Vec<_> = ranked.iter().map(|&(e, _)| e).collect();
    let extra: Vec<Vec<String>> = ranked.iter().map(|&(_, v)| vec![format!("{v:.16e}")]).collect();
    write_edges(&dir.join("edges.csv"), &edges, &["inclusion"], &extra)?;
    write_matrix(&dir.join("omega_est.csv"), estimate.omega_est.view())?;
    crate::io::write_dot(&dir.join("graph.dot"), &estimate.adjacency, "estimate")?;
    let record = FdrRecord {
        eta: threshold.eta,
        c_eta: threshold.c_eta.is_finite().then_some(threshold.c_eta),
        zeta: threshold.zeta,
        rule: threshold.rule,
        min_eigenvalue: estimate.min_eigenvalue,
    };
    write_json(&dir.join("fdr.json"), &record)
}

pub fn read_fdr_record(path: &Path) -> Result<FdrRecord> {
    read_json(path)
}

/// Confusion counts as a one-row CSV.
pub fn write_confusion(path: &Path, label: &str, m: &ConfusionMetrics) -> Result<()> {
    let body = format!(
        "label,tp,tn,fp,fn,sp,se\n{label},{},{},{},{},{:.16e},{:.16e}\n",
        m.tp, m.tn, m.fp, m.fn_, m.sp, m.se
    );
    std::fs::write(path, body).map_err(io_error(path))
}

/// ROC point cloud as `fpr,tpr`.
pub fn write_roc(path: &Path, points: &[(f64, f64)]) -> Result<()> {
    let mut body = String::from("fpr,tpr\n");
    for (f, t) in points {
        body.push_str(&format!("{f:.16e},{t:.16e}\n"));
    }
    std::fs::write(path, body).map_err(io_error(path))
}

/// Writes `metrics.csv` (one row per replicate, method and threshold),
/// `points.csv` (FDR point estimates) and `summary.json`.
pub fn write_case1_report(dir: &Path, report: &Case1Report) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(io_error(dir))?;
    let mut metrics = String::from("replicate,method,threshold,auc\n");
    for r in &report.replicates {
        for (c, auc) in report.config.thresholds.iter().zip(&r.auc_curve) {
            metrics.push_str(&format!("{},{},{c},{auc:.16e}\n", r.replicate + 1, r.method.name()));
        }
    }
    let path = dir.join("metrics.csv");
    std::fs::write(&path, metrics).map_err(io_error(&path))?;
    let mut points = String::from("replicate,method,truth,tp,tn,fp,fn,sp,se,zeta,c_eta,seconds\n");
    for r in &report.replicates {
        for (label, m) in [("es1", &r.point_es1), ("es005", &r.point_es005)] {
            points.push_str(&format!(
                "{},{},{label},{},{},{},{},{:.16e},{:.16e},{},{:.16e},{:.3}\n",
                r.replicate + 1,
                r.method.name(),
                m.tp,
                m.tn,
                m.fp,
                m.fn_,
                m.sp,
                m.se,
                r.zeta,
                r.c_eta,
                r.seconds
            ));
        }
    }
    let path = dir.join("points.csv");
    std::fs::write(&path, points).map_err(io_error(&path))?;
    write_json(&dir.join("summary.json"), report)
}
