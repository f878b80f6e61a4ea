//! Gibbs sampling under the regularized inverse-Wishart prior.
//!
//! Convention: `Σ ~ IW(b, D)` means `Ω = Σ⁻¹` follows the standard Wishart
//! with `b + p − 1` degrees of freedom and scale `D⁻¹`.

pub mod chain;
pub mod data;
pub mod hyper;
pub mod moments;
pub mod prior;
pub mod state;
pub mod steps;

pub use chain::{run_chain, run_chain_with_progress, ChainConfig, ChainMeta, ChainSamples, StoredDraw};
pub use data::{standardize, DataMatrix};
pub use hyper::{default_hyperparameters, ConditionalD, Hyperparameters, LambdaShape, Variant};
pub use moments::NodeMoments;
pub use prior::{group_quantity, group_quantity_reference, log_prior_density, log_prior_kernel_exponential};
pub use state::ChainState;
pub use steps::{gibbs_sweep, step_update_d, step_update_d_iw_baseline, step_update_lambda, step_update_omega};
