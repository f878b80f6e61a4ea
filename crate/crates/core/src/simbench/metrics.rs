//! Graph-recovery metrics.

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::linalg::{gram, SpdMatrix};
use crate::scalar::Real;
use crate::selection::Adjacency;

/// Counts over unordered off-diagonal pairs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMetrics {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    /// `tn / (tn + fp)`, or 1 when the truth has no absent edges.
    pub sp: f64,
    /// `tp / (tp + fn)`, or 1 when the truth has no edges.
    pub se: f64,
}

impl ConfusionMetrics {
    pub fn fpr(&self) -> f64 {
        1.0 - self.sp
    }

    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }
}

pub fn confusion(estimate: &Adjacency, truth: &Adjacency) -> Result<ConfusionMetrics> {
    if estimate.p() != truth.p() {
        return Err(Error::shape(
            format!("{} nodes (truth)", truth.p()),
            format!("{} nodes (estimate)", estimate.p()),
        ));
    }
    let p = truth.p();
    let (mut tp, mut tn, mut fp, mut fn_) = (0, 0, 0, 0);
    for i in 0..p {
        for j in (i + 1)..p {
            match (estimate.get(i, j), truth.get(i, j)) {
                (true, true) => tp += 1,
                (false, false) => tn += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
            }
        }
    }
    let ratio = |num: usize, den: usize| if den == 0 { 1.0 } else { num as f64 / den as f64 };
    Ok(ConfusionMetrics {
        tp,
        tn,
        fp,
        fn_,
        sp: ratio(tn, tn + fp),
        se: ratio(tp, tp + fn_),
    })
}

/// `(FPR, TPR)` of each graph, with `(0, 0)` and `(1, 1)` added, sorted by
/// FPR and then TPR.
pub fn roc_points(path: &[Adjacency], truth: &Adjacency) -> Result<Vec<(f64, f64)>> {
    let mut pts = vec![(0.0, 0.0), (1.0, 1.0)];
    for adj in path {
        let m = confusion(adj, truth)?;
        pts.push((m.fpr(), m.se));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(pts)
}

/// Trapezoidal area under the ROC curve traced by a sequence of graphs.
///
/// Points sharing an FPR are joined vertically in increasing TPR, so a
/// path that ranks every true edge above every false one scores exactly 1.
pub fn roc_auc(path: &[Adjacency], truth: &Adjacency) -> Result<f64> {
    let pts = roc_points(path, truth)?;
    Ok(pts.windows(2).map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0).sum())
}

/// Nodes whose degree exceeds `threshold`, by decreasing degree then index.
pub fn hub_degrees(adjacency: &Adjacency, threshold: usize) -> Vec<(usize, usize)> {
    let mut hubs: Vec<(usize, usize)> = (0..adjacency.p())
        .map(|i| (i, adjacency.degree(i)))
        .filter(|&(_, d)| d > threshold)
        .collect();
    hubs.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    hubs
}

/// `n(−log|Ω̂| + tr(Ω̂ XᵀX/n)) + (log n / n)·#{i ≤ j : ω̂_ij ≠ 0}`.
pub fn bic_score<T: Real>(omega_est: ArrayView2<T>, x: ArrayView2<T>) -> Result<f64> {
    let (n, p) = x.dim();
    if omega_est.dim() != (p, p) {
        return Err(Error::shape(format!("{p}x{p} precision"), format!("{:?}", omega_est.dim())));
    }
    if n == 0 {
        return Err(Error::invalid("data", "no observations"));
    }
    let omega = SpdMatrix::new(omega_est.mapv(|v| v.as_f64())).map_err(|_| {
        Error::invalid("omega_est", "determinant is not positive")
    })?;
    let s = gram(x.mapv(|v| v.as_f64()).view()) / n as f64;
    let trace: f64 = (0..p).map(|i| omega.view().row(i).dot(&s.column(i))).sum();
    let nonzero = (0..p)
        .flat_map(|i| (i..p).map(move |j| (i, j)))
        .filter(|&(i, j)| omega_est[[i, j]] != T::zero())
        .count();
    let nf = n as f64;
    Ok(nf * (-omega.log_det() + trace) + nf.ln() / nf * nonzero as f64)
}

/// Fraction of replicates in which two graph sequences agree exactly.
pub fn agreement(a: &[Adjacency], b: &[Adjacency]) -> f64 {
    if a.is_empty() {
        return 1.0;
    }
    a.iter().zip(b).filter(|(x, y)| x == y).count() as f64 / a.len() as f64
}
