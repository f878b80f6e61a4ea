//! Neighbourhood selection from posterior summaries via penalized credible
//! regions.

pub mod graph;
pub mod grid;
pub mod homotopy;
pub mod node;
pub mod path;

pub use graph::{combine_edges, estimate_precision, Adjacency, EdgeRule, GraphEstimate};
pub use grid::{DeltaGrid, GridSpec};
pub use homotopy::{credible_path, kkt_residual, lasso_path, LassoPath};
pub use node::{extract_betas, node_posterior, NodePosterior};
pub use path::{build_path, build_path_from_posteriors, node_posteriors, solve_credible_path, SelectionPath};
