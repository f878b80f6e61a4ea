use rayon::prelude::*;

use crate::error::Result;
use crate::sampler::ChainSamples;
use crate::scalar::Real;
use crate::selection::graph::{combine_edges, Adjacency, EdgeRule};
use crate::selection::grid::{DeltaGrid, GridSpec};
use crate::selection::homotopy::{credible_path, LassoPath};
use crate::selection::node::{node_posterior, NodePosterior};

/// Graphs selected along a shared penalty grid.
#[derive(Clone, Debug)]
pub struct SelectionPath {
    pub grid: DeltaGrid,
    pub rule: EdgeRule,
    /// `neighbourhoods[r][k]`: nodes selected by node `k` at grid point `r`.
    pub neighbourhoods: Vec<Vec<Vec<usize>>>,
    /// One graph per grid point.
    pub adjacency_at: Vec<Adjacency>,
    /// Per-node penalty at which the node's neighbourhood first becomes empty.
    pub terminal_deltas: Vec<f64>,
    /// Per-node number of coefficients that left the active set along the path.
    pub drop_counts: Vec<usize>,
    pub ridges: Vec<f64>,
}

impl SelectionPath {
    pub fn p(&self) -> usize {
        self.terminal_deltas.len()
    }

    pub fn len(&self) -> usize {
        self.adjacency_at.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency_at.is_empty()
    }

    /// The same neighbourhoods combined under another rule.
    pub fn with_rule(&self, rule: EdgeRule) -> SelectionPath {
        let mut out = self.clone();
        out.rule = rule;
        out.adjacency_at = self.neighbourhoods.iter().map(|ne| combine_edges(ne, rule)).collect();
        out
    }
}

/// Node posteriors for every node of a chain.
pub fn node_posteriors<T: Real>(samples: &ChainSamples<T>) -> Result<Vec<NodePosterior<T>>> {
    (0..samples.p()).map(|k| node_posterior(samples, k)).collect()
}

/// Neighbourhood of one node at every grid point, as sorted node indices.
pub fn solve_credible_path<T: Real>(np: &NodePosterior<T>, grid: &DeltaGrid) -> Result<Vec<Vec<usize>>> {
    let sigma = np.sigma_hat.mapv(|v| v.as_f64());
    let beta = np.beta_hat.mapv(|v| v.as_f64());
    let path = credible_path(sigma.view(), beta.view())?;
    Ok(grid
        .values()
        .iter()
        .map(|&delta| path.support_at(delta).into_iter().map(|j| np.neighbour_index(j)).collect())
        .collect())
}

/// Traces each node's credible-region path, calibrates the grid and combines
/// neighbourhoods at every grid point.
pub fn build_path<T: Real>(samples: &ChainSamples<T>, grid: &GridSpec, rule: EdgeRule) -> Result<SelectionPath> {
    let posteriors = node_posteriors(samples)?;
    build_path_from_posteriors(&posteriors, grid, rule)
}

pub fn build_path_from_posteriors<T: Real>(
    posteriors: &[NodePosterior<T>],
    grid: &GridSpec,
    rule: EdgeRule,
) -> Result<SelectionPath> {
    let paths: Vec<LassoPath> = posteriors
        .par_iter()
        .map(|np| {
            let sigma = np.sigma_hat.mapv(|v| v.as_f64());
            let beta = np.beta_hat.mapv(|v| v.as_f64());
            credible_path(sigma.view(), beta.view())
        })
        .collect::<Result<_>>()?;
    let terminal: Vec<f64> = paths.iter().map(|p| p.terminal_delta()).collect();
    let grid = match grid {
        GridSpec::Fixed(g) => g.clone(),
        GridSpec::Auto { count, lower_ratio } => {
            let max = terminal.iter().copied().fold(0.0, f64::max);
            let upper = if max > 0.0 { 1.05 * max } else { 1.0 };
            DeltaGrid::zero_and_log_spaced(upper, *count, *lower_ratio)?
        }
    };
    let neighbourhoods: Vec<Vec<Vec<usize>>> = grid
        .values()
        .iter()
        .map(|&delta| {
            posteriors
                .iter()
                .zip(&paths)
                .map(|(np, path)| {
                    path.support_at(delta)
                        .into_iter()
                        .map(|j| np.neighbour_index(j))
                        .collect()
                })
                .collect()
        })
        .collect();
    let adjacency_at = neighbourhoods.iter().map(|ne| combine_edges(ne, rule)).collect();
    Ok(SelectionPath {
        grid,
        rule,
        neighbourhoods,
        adjacency_at,
        terminal_deltas: terminal,
        drop_counts: paths.iter().map(|p| p.drop_count()).collect(),
        ridges: posteriors.iter().map(|np| np.ridge_applied.as_f64()).collect(),
    })
}
