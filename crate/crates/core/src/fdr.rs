//! Bayesian-FDR point estimate of the graph from inclusion frequencies along
//! a selection path.

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::selection::{estimate_precision, Adjacency, GraphEstimate, SelectionPath};

/// Fraction of grid points at which each edge is selected.
#[derive(Clone, Debug, PartialEq)]
pub struct InclusionMatrix {
    pub p_mat: Array2<f64>,
    pub grid_size: usize,
}

impl InclusionMatrix {
    pub fn p(&self) -> usize {
        self.p_mat.nrows()
    }

    /// Upper-triangle entries in row-major `(i, j)` order.
    pub fn upper(&self) -> Vec<((usize, usize), f64)> {
        let p = self.p();
        let mut out = Vec::with_capacity(p * p.saturating_sub(1) / 2);
        for i in 0..p {
            for j in (i + 1)..p {
                out.push(((i, j), self.p_mat[[i, j]]));
            }
        }
        out
    }

    /// Validates a matrix read from elsewhere.
    pub fn from_matrix(p_mat: Array2<f64>, grid_size: usize) -> Result<Self> {
        let p = p_mat.nrows();
        if p_mat.ncols() != p {
            return Err(Error::shape("square inclusion matrix", format!("{:?}", p_mat.dim())));
        }
        for i in 0..p {
            if p_mat[[i, i]] != 0.0 {
                return Err(Error::invalid("inclusion", format!("diagonal entry {} is nonzero", i + 1)));
            }
            for j in 0..p {
                let v = p_mat[[i, j]];
                if !(0.0..=1.0).contains(&v) || v != p_mat[[j, i]] {
                    return Err(Error::invalid(
                        "inclusion",
                        format!("entry ({}, {}) = {v} is not a symmetric probability", i + 1, j + 1),
                    ));
                }
            }
        }
        Ok(Self { p_mat, grid_size })
    }
}

pub fn inclusion_matrix(path: &SelectionPath) -> Result<InclusionMatrix> {
    if path.is_empty() {
        return Err(Error::invalid("path", "no grid points"));
    }
    let p = path.p();
    let mut counts = Array2::<f64>::zeros((p, p));
    for adj in &path.adjacency_at {
        for (i, j) in adj.edges() {
            counts[[i, j]] += 1.0;
            counts[[j, i]] += 1.0;
        }
    }
    let r = path.len();
    Ok(InclusionMatrix {
        p_mat: counts / r as f64,
        grid_size: r,
    })
}

/// Running-average rule for choosing how many edges to keep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FdrRule {
    /// Mean of `1 − P̃_k` over the kept edges is at most `η`.
    #[default]
    Complemented,
    /// Mean of `P̃_k` over the kept edges is at most `η`.
    Direct,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdrThreshold {
    pub eta: f64,
    /// Inclusion frequency cut-off; infinite when nothing is selected.
    pub c_eta: f64,
    /// Number of edges with frequency at least `c_eta`.
    pub zeta: usize,
    pub rule: FdrRule,
}

/// Threshold from a list of frequencies.
///
/// Frequencies are sorted in decreasing order (stable, so equal values keep
/// their input order) and `ζ` is the largest count whose running mean passes
/// the rule. Only counts that end a run of equal values are eligible, so the
/// set `{P ≥ c_η}` has exactly `ζ` members.
pub fn fdr_threshold_from_values(values: &[f64], eta: f64, rule: FdrRule) -> Result<FdrThreshold> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::invalid("eta", format!("must lie in (0, 1), got {eta}")));
    }
    if values.is_empty() {
        return Err(Error::invalid("inclusion", "no off-diagonal entries"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut zeta = 0;
    let mut sum = 0.0;
    for (idx, &v) in sorted.iter().enumerate() {
        sum += match rule {
            FdrRule::Complemented => 1.0 - v,
            FdrRule::Direct => v,
        };
        let count = idx + 1;
        let block_end = count == sorted.len() || sorted[count] != v;
        if block_end && sum / count as f64 <= eta {
            zeta = count;
        }
    }
    let c_eta = if zeta == 0 { f64::INFINITY } else { sorted[zeta - 1] };
    Ok(FdrThreshold { eta, c_eta, zeta, rule })
}

pub fn fdr_threshold(p_mat: &InclusionMatrix, eta: f64, rule: FdrRule) -> Result<FdrThreshold> {
    let values: Vec<f64> = p_mat.upper().into_iter().map(|(_, v)| v).collect();
    fdr_threshold_from_values(&values, eta, rule)
}

/// Edges with inclusion frequency at least `c_eta`, ordered by decreasing
/// frequency then row-major index.
pub fn ranked_edges(p_mat: &InclusionMatrix, c_eta: f64) -> Vec<((usize, usize), f64)> {
    let mut kept: Vec<_> = p_mat.upper().into_iter().filter(|&(_, v)| v >= c_eta).collect();
    kept.sort_by(|a, b| b.1.total_cmp(&a.1));
    kept
}

/// The graph `{(i, j) : P_ij ≥ c_η}` and its masked precision.
pub fn point_estimate<T: Real>(
    p_mat: &InclusionMatrix,
    c_eta: f64,
    omega_mean: ArrayView2<T>,
) -> Result<GraphEstimate<T>> {
    let p = p_mat.p();
    let mut adj = Adjacency::empty(p);
    for ((i, j), v) in p_mat.upper() {
        if v >= c_eta {
            adj.set(i, j, true);
        }
    }
    estimate_precision(omega_mean, &adj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn matrix_from_upper(p: usize, values: &[f64]) -> InclusionMatrix {
        let mut m = Array2::zeros((p, p));
        let mut it = values.iter();
        for i in 0..p {
            for j in (i + 1)..p {
                let v = *it.next().unwrap();
                m[[i, j]] = v;
                m[[j, i]] = v;
            }
        }
        InclusionMatrix::from_matrix(m, 4).unwrap()
    }

    #[test]
    fn hand_case() {
        let t = fdr_threshold_from_values(&[1.0, 0.9, 0.6, 0.2], 0.2, FdrRule::Complemented).unwrap();
        assert_eq!(t.zeta, 3);
        assert_eq!(t.c_eta, 0.6);
        let t = fdr_threshold_from_values(&[0.2, 0.6, 1.0, 0.9], 0.2, FdrRule::Complemented).unwrap();
        assert_eq!((t.zeta, t.c_eta), (3, 0.6));
    }

    #[test]
    fn degenerate_inputs() {
        let t = fdr_threshold_from_values(&[1.0; 6], 0.05, FdrRule::Complemented).unwrap();
        assert_eq!(t.zeta, 6);
        let t = fdr_threshold_from_values(&[0.0; 6], 0.1, FdrRule::Complemented).unwrap();
        assert_eq!(t.zeta, 0);
        assert!(t.c_eta.is_infinite());
        assert!(fdr_threshold_from_values(&[0.5], 0.0, FdrRule::Complemented).is_err());
        assert!(fdr_threshold_from_values(&[0.5], 1.0, FdrRule::Complemented).is_err());
        assert!(fdr_threshold_from_values(&[], 0.1, FdrRule::Complemented).is_err());
    }

    #[test]
    fn direct_rule_keeps_low_frequencies() {
        let t = fdr_threshold_from_values(&[1.0, 0.9, 0.6, 0.2, 0.0, 0.0], 0.5, FdrRule::Direct).unwrap();
        // running means 1, .95, .83, .675, .54, .45
        assert_eq!(t.zeta, 6);
        assert_eq!(t.c_eta, 0.0);
    }

    #[test]
    fn ties_at_the_cut_are_kept_together() {
        // a cut inside the run of 0.5s would pass at count 2 but not at 4
        let t = fdr_threshold_from_values(&[1.0, 0.5, 0.5, 0.5], 0.3, FdrRule::Complemented).unwrap();
        assert_eq!(t.zeta, 1);
        assert_eq!(t.c_eta, 1.0);
    }

    #[test]
    fn point_estimate_hand_case() {
        let pm = matrix_from_upper(3, &[1.0, 0.9, 0.6]);
        let omega = array![[2.0, 0.1, 0.2], [0.1, 2.0, 0.3], [0.2, 0.3, 2.0]];
        let est = point_estimate(&pm, 0.9, omega.view()).unwrap();
        assert_eq!(est.edges, vec![(0, 1), (0, 2)]);
        assert_eq!(est.omega_est[[1, 2]], 0.0);
        let all = point_estimate(&pm, 0.0, omega.view()).unwrap();
        assert_eq!(all.adjacency, Adjacency::complete(3));
        let none = point_estimate(&pm, 1.0 + 1e-12, omega.view()).unwrap();
        assert_eq!(none.adjacency.edge_count(), 0);
        assert_eq!(ranked_edges(&pm, 0.6).len(), 3);
    }

    #[test]
    fn from_matrix_rejects_bad_input() {
        assert!(InclusionMatrix::from_matrix(array![[0.0, 0.5], [0.4, 0.0]], 2).is_err());
        assert!(InclusionMatrix::from_matrix(array![[0.1, 0.5], [0.5, 0.0]], 2).is_err());
        assert!(InclusionMatrix::from_matrix(array![[0.0, 1.5], [1.5, 0.0]], 2).is_err());
    }
}
