//! Generating covariances and their true graphs.

use ndarray::Array2;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::linalg::{min_eigenvalue, SpdMatrix};
use crate::scalar::Real;
use crate::selection::Adjacency;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FgnSpec {
    pub p: usize,
    pub hurst: f64,
}

/// Autocovariance of fractional Gaussian noise at lag `k` (unit variance).
pub fn fgn_autocovariance(hurst: f64, k: usize) -> f64 {
    let h2 = 2.0 * hurst;
    let k = k as f64;
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2))
}

/// Toeplitz covariance of `p` consecutive fGn increments.
pub fn fgn_covariance(spec: FgnSpec) -> Result<SpdMatrix<f64>> {
    if !(0.5..=1.0).contains(&spec.hurst) {
        return Err(Error::invalid("hurst", format!("must lie in [0.5, 1], got {}", spec.hurst)));
    }
    if spec.p == 0 {
        return Err(Error::invalid("p", "must be positive"));
    }
    let acf: Vec<f64> = (0..spec.p).map(|k| fgn_autocovariance(spec.hurst, k)).collect();
    let sigma = Array2::from_shape_fn((spec.p, spec.p), |(i, j)| acf[i.abs_diff(j)]);
    SpdMatrix::new(sigma)
}

/// `ρ_ij = −ω_ij / √(ω_ii ω_jj)` off the diagonal, zero on it.
pub fn partial_correlations<T: Real>(omega: &SpdMatrix<T>) -> Array2<f64> {
    let p = omega.dim();
    Array2::from_shape_fn((p, p), |(i, j)| {
        if i == j {
            0.0
        } else {
            let (wij, wii, wjj) = (omega.get(i, j).as_f64(), omega.get(i, i).as_f64(), omega.get(j, j).as_f64());
            -wij / (wii * wjj).sqrt()
        }
    })
}

/// Edges whose absolute partial correlation exceeds `c`.
pub fn true_edge_set<T: Real>(omega: &SpdMatrix<T>, c: f64) -> Adjacency {
    let rho = partial_correlations(omega);
    let p = omega.dim();
    let mut adj = Adjacency::empty(p);
    for i in 0..p {
        for j in (i + 1)..p {
            if rho[[i, j]].abs() > c {
                adj.set(i, j, true);
            }
        }
    }
    adj
}

/// A true precision matrix and its designated hub nodes.
#[derive(Clone, Debug)]
pub struct TruthSpec {
    pub omega0: SpdMatrix<f64>,
    pub hubs: Vec<usize>,
}

impl TruthSpec {
    pub fn from_precision(omega0: SpdMatrix<f64>) -> Self {
        Self { omega0, hubs: Vec::new() }
    }

    pub fn edges(&self, c: f64) -> Adjacency {
        true_edge_set(&self.omega0, c)
    }

    pub fn covariance(&self) -> Result<SpdMatrix<f64>> {
        self.omega0.inverse()
    }
}

/// Settings for [`sparse_precision_generator`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseSpec {
    pub p: usize,
    pub hub_count: usize,
    pub hub_degree_min: usize,
    /// Random non-hub edges added on top of the hub stars.
    pub background_edges: usize,
    /// Off-diagonal magnitudes are uniform on this interval, with random sign.
    pub magnitude: (f64, f64),
    /// Added to each absolute row sum to form the diagonal.
    pub margin: f64,
}

impl SparseSpec {
    pub fn new(p: usize, hub_count: usize, hub_degree_min: usize) -> Self {
        Self {
            p,
            hub_count,
            hub_degree_min,
            background_edges: p,
            magnitude: (0.2, 0.6),
            margin: 0.5,
        }
    }
}

/// Random sparse precision with hub nodes, made SPD by diagonal dominance.
///
/// The first `hub_count` nodes of a random permutation are hubs, each joined
/// to `hub_degree_min` distinct random nodes; `background_edges` further
/// random pairs are then added.
pub fn sparse_precision_generator<R: Rng + ?Sized>(spec: SparseSpec, rng: &mut R) -> Result<TruthSpec> {
    let p = spec.p;
    if p == 0 {
        return Err(Error::invalid("p", "must be positive"));
    }
    if spec.hub_count > p || (spec.hub_count > 0 && spec.hub_degree_min > p - 1) {
        return Err(Error::invalid(
            "hubs",
            format!("{} hubs of degree {} do not fit in {p} nodes", spec.hub_count, spec.hub_degree_min),
        ));
    }
    let (lo, hi) = spec.magnitude;
    if !(lo > 0.0 && hi >= lo) || !(spec.margin > 0.0) {
        return Err(Error::invalid("magnitude", "need 0 < low <= high and a positive margin"));
    }
    let max_edges = p * (p - 1) / 2;
    let mut adj = Adjacency::empty(p);
    let order = sample(rng, p, p).into_vec();
    let hubs: Vec<usize> = order[..spec.hub_count].to_vec();
    for &h in &hubs {
        let others: Vec<usize> = (0..p).filter(|&j| j != h).collect();
        let have = adj.degree(h);
        let need = spec.hub_degree_min.saturating_sub(have);
        let free: Vec<usize> = others.into_iter().filter(|&j| !adj.get(h, j)).collect();
        for idx in sample(rng, free.len(), need.min(free.len())) {
            adj.set(h, free[idx], true);
        }
    }
    let target = (adj.edge_count() + spec.background_edges).min(max_edges);
    while adj.edge_count() < target {
        let i = rng.random_range(0..p);
        let j = rng.random_range(0..p);
        if i != j {
            adj.set(i, j, true);
        }
    }
    let mut omega = Array2::<f64>::zeros((p, p));
    for (i, j) in adj.edges() {
        let mag = lo + (hi - lo) * rng.random::<f64>();
        let v = if rng.random::<bool>() { mag } else { -mag };
        omega[[i, j]] = v;
        omega[[j, i]] = v;
    }
    for i in 0..p {
        let row: f64 = omega.row(i).iter().map(|v| v.abs()).sum();
        omega[[i, i]] = row + spec.margin;
    }
    if !(min_eigenvalue(omega.view()) > 0.0) {
        return Err(Error::NotPositiveDefinite { pivot: 0 });
    }
    Ok(TruthSpec {
        omega0: SpdMatrix::new(omega)?,
        hubs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rng::RngStream;
    use ndarray::array;

    #[test]
    fn fgn_values() {
        let s = fgn_covariance(FgnSpec { p: 6, hurst: 0.7 }).unwrap();
        assert_eq!(s.get(3, 3), 1.0);
        assert!((s.get(2, 3) - 0.5 * (2f64.powf(1.4) - 2.0)).abs() < 1e-15);
        assert!((s.get(2, 3) - 0.319508).abs() < 1e-6);
        let white = fgn_covariance(FgnSpec { p: 5, hurst: 0.5 }).unwrap();
        assert_eq!(white.into_inner(), Array2::<f64>::eye(5));
        assert!(fgn_covariance(FgnSpec { p: 5, hurst: 0.4 }).is_err());
    }

    #[test]
    fn partial_correlation_hand_case() {
        let omega = SpdMatrix::new(array![[2.0, -1.0], [-1.0, 2.0]]).unwrap();
        let rho = partial_correlations(&omega);
        assert_eq!(rho[[0, 1]], 0.5);
        assert_eq!(rho[[0, 0]], 0.0);
    }

    #[test]
    fn thresholded_edges() {
        // partial correlations 0.25, 0.05, −0.2
        let omega = SpdMatrix::new(array![[1.0, -0.25, -0.05], [-0.25, 1.0, 0.2], [-0.05, 0.2, 1.0]]).unwrap();
        assert_eq!(true_edge_set(&omega, 0.1).edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(true_edge_set(&omega, 0.0).edge_count(), 3);
        assert_eq!(true_edge_set(&SpdMatrix::<f64>::identity(4), 0.01).edge_count(), 0);
    }

    #[test]
    fn generator_contracts() {
        let mut rng = RngStream::new(1, 0);
        let mut spec = SparseSpec::new(8, 0, 0);
        spec.background_edges = 0;
        let t = sparse_precision_generator(spec, &mut rng).unwrap();
        assert_eq!(t.edges(0.0).edge_count(), 0);
        for seed in 0..20 {
            let mut rng = RngStream::new(seed, 1);
            let t = sparse_precision_generator(SparseSpec::new(20, 2, 8), &mut rng).unwrap();
            assert!(min_eigenvalue(t.omega0.view()) > 0.0);
            let adj = t.edges(0.0);
            assert_eq!(t.hubs.len(), 2);
            for &h in &t.hubs {
                assert!(adj.degree(h) >= 8);
            }
        }
        assert!(sparse_precision_generator(SparseSpec::new(5, 1, 5), &mut rng).is_err());
    }
}
