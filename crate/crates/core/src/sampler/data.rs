use ndarray::{Array2, ArrayView2, Axis};

use crate::error::{Error, Result};
use crate::num::linalg::gram;
use crate::scalar::Real;

/// `n×p` observation matrix, optionally standardized column-wise.
#[derive(Clone, Debug)]
pub struct DataMatrix<T> {
    x: Array2<T>,
    standardized: bool,
    column_means: Vec<T>,
    column_sds: Vec<T>,
}

impl<T: Real> DataMatrix<T> {
    /// Wraps raw observations without transforming them.
    pub fn raw(x: Array2<T>) -> Self {
        let p = x.ncols();
        Self {
            x,
            standardized: false,
            column_means: vec![T::zero(); p],
            column_sds: vec![T::one(); p],
        }
    }

    pub fn x(&self) -> ArrayView2<'_, T> {
        self.x.view()
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn is_standardized(&self) -> bool {
        self.standardized
    }

    pub fn column_means(&self) -> &[T] {
        &self.column_means
    }

    pub fn column_sds(&self) -> &[T] {
        &self.column_sds
    }

    /// `XᵀX`.
    pub fn gram(&self) -> Array2<T> {
        gram(self.x.view())
    }

    /// Undoes the standardization, returning data on the original scale.
    pub fn destandardize(&self) -> Array2<T> {
        let mut out = self.x.clone();
        for (j, mut col) in out.axis_iter_mut(Axis(1)).enumerate() {
            let (m, s) = (self.column_means[j], self.column_sds[j]);
            col.mapv_inplace(|v| v * s + m);
        }
        out
    }
}

/// Centers every column and scales it to unit sample standard deviation
/// (denominator `n − 1`), keeping the original moments.
pub fn standardize<T: Real>(raw: Array2<T>) -> Result<DataMatrix<T>> {
    let (n, p) = raw.dim();
    if n < 2 {
        return Err(Error::invalid("n", format!("need at least 2 observations, got {n}")));
    }
    let nf = T::from_count(n);
    let mut x = raw;
    let mut means = Vec::with_capacity(p);
    let mut sds = Vec::with_capacity(p);
    for (j, mut col) in x.axis_iter_mut(Axis(1)).enumerate() {
        let mean = col.iter().copied().sum::<T>() / nf;
        let ss = col.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>();
        let sd = (ss / (nf - T::one())).sqrt();
        let scale = col.iter().fold(T::zero(), |acc, &v| acc.max(v.abs()));
        if !(sd > scale * T::epsilon() * T::lit(16.0)) || !sd.is_finite() {
            return Err(Error::ConstantColumn { column: j + 1 });
        }
        col.mapv_inplace(|v| (v - mean) / sd);
        means.push(mean);
        sds.push(sd);
    }
    Ok(DataMatrix {
        x,
        standardized: true,
        column_means: means,
        column_sds: sds,
    })
}
