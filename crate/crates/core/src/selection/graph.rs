use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::linalg::min_eigenvalue;
use crate::scalar::Real;

/// Symmetric, hollow 0/1 matrix of an undirected graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Adjacency {
    p: usize,
    bits: Vec<bool>,
}

impl Adjacency {
    pub fn empty(p: usize) -> Self {
        Self {
            p,
            bits: vec![false; p * p],
        }
    }

    pub fn complete(p: usize) -> Self {
        let mut a = Self::empty(p);
        for i in 0..p {
            for j in (i + 1)..p {
                a.set(i, j, true);
            }
        }
        a
    }

    /// Builds from 0-based edges; self-loops are ignored.
    pub fn from_edges(p: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut a = Self::empty(p);
        for (i, j) in edges {
            if i >= p || j >= p {
                return Err(Error::invalid("edge", format!("({}, {}) outside 1..={p}", i + 1, j + 1)));
            }
            if i != j {
                a.set(i, j, true);
            }
        }
        Ok(a)
    }

    /// Builds from a square 0/1 (or boolean-like) matrix; the upper triangle
    /// is authoritative.
    pub fn from_matrix<T: Real>(m: ArrayView2<T>) -> Result<Self> {
        let (r, c) = m.dim();
        if r != c {
            return Err(Error::shape("square adjacency", format!("{r}x{c}")));
        }
        let mut a = Self::empty(r);
        for i in 0..r {
            for j in (i + 1)..r {
                a.set(i, j, m[[i, j]] != T::zero());
            }
        }
        Ok(a)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.p + j]
    }

    /// Sets or clears the undirected edge `{i, j}`; the diagonal stays empty.
    pub fn set(&mut self, i: usize, j: usize, on: bool) {
        if i == j {
            return;
        }
        self.bits[i * self.p + j] = on;
        self.bits[j * self.p + i] = on;
    }

    /// Edges `(i, j)` with `i < j`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.p {
            for j in (i + 1)..self.p {
                if self.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count() / 2
    }

    pub fn degree(&self, i: usize) -> usize {
        (0..self.p).filter(|&j| self.get(i, j)).count()
    }

    pub fn is_subset_of(&self, other: &Adjacency) -> bool {
        self.p == other.p && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn to_array<T: Real>(&self) -> Array2<T> {
        Array2::from_shape_fn((self.p, self.p), |(i, j)| if self.get(i, j) { T::one() } else { T::zero() })
    }
}

/// Symmetrisation rule for node-wise neighbourhoods.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeRule {
    /// Keep `{k, l}` only when each node selects the other.
    #[default]
    And,
    /// Keep `{k, l}` when either node selects the other.
    Or,
}

/// Combines per-node neighbourhoods (0-based node indices) into a graph.
pub fn combine_edges(neighbourhoods: &[Vec<usize>], rule: EdgeRule) -> Adjacency {
    let p = neighbourhoods.len();
    let mut directed = vec![false; p * p];
    for (k, ne) in neighbourhoods.iter().enumerate() {
        for &l in ne {
            if l != k && l < p {
                directed[k * p + l] = true;
            }
        }
    }
    let mut a = Adjacency::empty(p);
    for i in 0..p {
        for j in (i + 1)..p {
            let (x, y) = (directed[i * p + j], directed[j * p + i]);
            let on = match rule {
                EdgeRule::And => x && y,
                EdgeRule::Or => x || y,
            };
            a.set(i, j, on);
        }
    }
    a
}

/// A selected graph and its masked precision estimate.
#[derive(Clone, Debug)]
pub struct GraphEstimate<T> {
    pub adjacency: Adjacency,
    pub edges: Vec<(usize, usize)>,
    pub omega_est: Array2<T>,
    pub min_eigenvalue: f64,
}

/// Masks `Ω̂` by the adjacency (diagonal kept) and reports the smallest
/// eigenvalue. An indefinite result is logged, not rejected.
pub fn estimate_precision<T: Real>(omega_mean: ArrayView2<T>, adjacency: &Adjacency) -> Result<GraphEstimate<T>> {
    let p = adjacency.p();
    if omega_mean.dim() != (p, p) {
        return Err(Error::shape(format!("{p}x{p}"), format!("{:?}", omega_mean.dim())));
    }
    let omega_est = Array2::from_shape_fn((p, p), |(i, j)| {
        if i == j || adjacency.get(i, j) {
            omega_mean[[i, j]]
        } else {
            T::zero()
        }
    });
    let min_ev = min_eigenvalue(omega_est.view());
    if !(min_ev > 0.0) {
        log::warn!("masked precision estimate is not positive definite (min eigenvalue {min_ev:e})");
    }
    Ok(GraphEstimate {
        edges: adjacency.edges(),
        adjacency: adjacency.clone(),
        omega_est,
        min_eigenvalue: min_ev,
    })
}
