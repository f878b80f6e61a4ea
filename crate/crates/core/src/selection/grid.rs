use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Increasing penalties `0 ≤ Δ₁ < … < Δ_R` shared by every node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaGrid {
    values: Vec<f64>,
}

/// How the penalty grid is chosen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridSpec {
    /// `Δ = 0` followed by `count − 1` log-spaced values from
    /// `lower_ratio·Δ_max` to `Δ_max`, where `Δ_max` is 1.05 times the largest
    /// terminal knot across nodes.
    Auto { count: usize, lower_ratio: f64 },
    Fixed(DeltaGrid),
}

pub const DEFAULT_GRID_SIZE: usize = 50;
pub const DEFAULT_LOWER_RATIO: f64 = 1e-4;

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::Auto {
            count: DEFAULT_GRID_SIZE,
            lower_ratio: DEFAULT_LOWER_RATIO,
        }
    }
}

impl DeltaGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("grid", "must contain at least one value"));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid("grid", "values must be finite and non-negative"));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("grid", "values must be strictly increasing"));
        }
        Ok(Self { values })
    }

    /// `[0, geomspace(lower_ratio·upper, upper, count − 1)]`.
    pub fn zero_and_log_spaced(upper: f64, count: usize, lower_ratio: f64) -> Result<Self> {
        if count < 2 {
            return Err(Error::invalid("count", "an automatic grid needs at least 2 points"));
        }
        if !(upper > 0.0) || !(lower_ratio > 0.0 && lower_ratio < 1.0) {
            return Err(Error::invalid(
                "grid",
                format!("need upper > 0 and 0 < lower_ratio < 1, got {upper} and {lower_ratio}"),
            ));
        }
        let k = count - 1;
        let lo = (lower_ratio * upper).ln();
        let hi = upper.ln();
        let mut values = vec![0.0];
        values.extend((0..k).map(|i| {
            if k == 1 {
                upper
            } else {
                (lo + (hi - lo) * i as f64 / (k - 1) as f64).exp()
            }
        }));
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_grid_shape() {
        let g = DeltaGrid::zero_and_log_spaced(10.0, 5, 1e-3).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g.values()[0], 0.0);
        assert!((g.values()[1] - 0.01).abs() < 1e-15);
        assert!((g.values()[4] - 10.0).abs() < 1e-12);
        assert!((g.values()[2] / g.values()[1] - 10.0).abs() < 1e-9);
    }

    #[test]
    fn invalid_grids() {
        assert!(DeltaGrid::new(vec![]).is_err());
        assert!(DeltaGrid::new(vec![0.0, 0.0]).is_err());
        assert!(DeltaGrid::new(vec![-1.0]).is_err());
        assert!(DeltaGrid::zero_and_log_spaced(1.0, 1, 0.1).is_err());
        assert!(DeltaGrid::new(vec![0.0]).is_ok());
    }
}
