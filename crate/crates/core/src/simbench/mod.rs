//! Data generators, ground truths and recovery metrics for simulation studies.

pub mod case1;
pub mod metrics;
pub mod truth;

pub use case1::{
    default_thresholds, evaluate_path, fit_path, run_case1, Case1Config, Case1Report, MeanSe, Method,
    MethodSummary, ReplicateResult, ES005, ES1,
};
pub use metrics::{agreement, bic_score, confusion, hub_degrees, roc_auc, roc_points, ConfusionMetrics};
pub use truth::{
    fgn_autocovariance, fgn_covariance, partial_correlations, sparse_precision_generator, true_edge_set,
    FgnSpec, SparseSpec, TruthSpec,
};
