//! Numerical kernels: linear algebra, random variates, special functions.

pub mod linalg;
pub mod random;
pub mod rng;
pub mod special;

pub use linalg::{cholesky_lower, spd_inverse, symmetric_eigenvalues, SpdMatrix};
pub use random::{
    sample_chi_squared, sample_gamma, sample_gig, sample_inverse_gaussian, sample_mvn_zero,
    sample_wishart_inv_scale, sample_wishart_std,
};
pub use rng::RngStream;
