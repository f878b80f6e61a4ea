//! Gaussian graphical model selection under the regularized inverse-Wishart
//! prior.
//!
//! The pipeline is: [`sampler::run_chain`] draws from the posterior of the
//! precision matrix, [`selection::build_path`] turns the node-wise posterior
//! moments into a path of graphs indexed by the penalty `Δ`, and
//! [`fdr::fdr_threshold`] picks a point estimate from the edge inclusion
//! frequencies along that path. [`simbench`] holds the simulation truths and
//! recovery metrics, [`io`] the file formats.
//!
//! Numerical code is generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to one of them.

pub mod error;
pub mod fdr;
pub mod io;
pub mod num;
pub mod sampler;
pub mod scalar;
pub mod selection;
pub mod simbench;

pub use error::{Error, Result};
pub use fdr::{fdr_threshold, inclusion_matrix, point_estimate, FdrRule, FdrThreshold, InclusionMatrix};
pub use num::{RngStream, SpdMatrix};
pub use sampler::{
    default_hyperparameters, run_chain, standardize, ChainConfig, ChainSamples, ConditionalD, DataMatrix,
    Hyperparameters, LambdaShape, Variant,
};
pub use scalar::Real;
pub use selection::{build_path, Adjacency, DeltaGrid, EdgeRule, GraphEstimate, GridSpec, NodePosterior, SelectionPath};

pub type SpdMatrix64 = SpdMatrix<f64>;
pub type ChainSamples64 = ChainSamples<f64>;
pub type Hyperparameters64 = Hyperparameters<f64>;
pub type DataMatrix64 = DataMatrix<f64>;
pub type NodePosterior64 = NodePosterior<f64>;
pub type GraphEstimate64 = GraphEstimate<f64>;

pub type SpdMatrix32 = SpdMatrix<f32>;
pub type ChainSamples32 = ChainSamples<f32>;
pub type Hyperparameters32 = Hyperparameters<f32>;
pub type DataMatrix32 = DataMatrix<f32>;
pub type NodePosterior32 = NodePosterior<f32>;
pub type GraphEstimate32 = GraphEstimate<f32>;
