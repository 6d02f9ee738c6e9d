use crate::error::{Error, Result};

/// Default cap on `p * n` stored entries.
pub const DEFAULT_MAX_ENTRIES: usize = 1 << 28;

/// A `p x n` real matrix whose columns `X_1, ..., X_n` are points in `R^p`.
///
/// Storage is column-major so each column is a contiguous slice.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    dim: usize,
    count: usize,
    data: Vec<f64>,
}

impl DataMatrix {
    pub fn zeros(dim: usize, count: usize) -> Result<Self> {
        Self::zeros_capped(dim, count, DEFAULT_MAX_ENTRIES)
    }

    pub fn zeros_capped(dim: usize, count: usize, cap: usize) -> Result<Self> {
        if dim == 0 || count == 0 {
            return Err(Error::InvalidConfig(format!(
                "data matrix needs p >= 1 and n >= 1, got p = {dim}, n = {count}"
            )));
        }
        let requested = dim.saturating_mul(count);
        if requested > cap {
            return Err(Error::Capacity { requested, cap });
        }
        Ok(DataMatrix {
            dim,
            count,
            data: vec![0.0; requested],
        })
    }

    /// Builds from column-major storage.
    pub fn from_col_major(dim: usize, count: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || count == 0 {
            return Err(Error::InvalidConfig(format!(
                "data matrix needs p >= 1 and n >= 1, got p = {dim}, n = {count}"
            )));
        }
        if data.len() != dim * count {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {dim} x {count} matrix, got {}",
                dim * count,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("data matrix entry".into()));
        }
        Ok(DataMatrix { dim, count, data })
    }

    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self> {
        let first = columns.first().ok_or(Error::Empty("data matrix columns"))?;
        let dim = first.as_ref().len();
        let mut data = Vec::with_capacity(dim * columns.len());
        for (i, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            if c.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "column {i} has length {}, expected {dim}",
                    c.len()
                )));
            }
            data.extend_from_slice(c);
        }
        Self::from_col_major(dim, columns.len(), data)
    }

    /// Dimension `p` of each vector.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number `n` of vectors.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn columns(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_col_major(&self) -> &[f64] {
        &self.data
    }

    /// `X_i^T X_j`.
    pub fn inner(&self, i: usize, j: usize) -> f64 {
        dot(self.column(i), self.column(j))
    }

    /// `||X_i||^2`.
    pub fn norm_sq(&self, i: usize) -> f64 {
        dot(self.column(i), self.column(i))
    }

    /// `||X_i - X_j||^2`, summed coordinate by coordinate.
    pub fn dist_sq(&self, i: usize, j: usize) -> f64 {
        self.column(i)
            .iter()
            .zip(self.column(j))
            .fold(0.0, |acc, (a, b)| acc + (a - b) * (a - b))
    }
}

/// Sequential dot product. All squared norms in the crate go through this
/// function so that the summation order is the same everywhere.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_shapes() {
        assert!(matches!(DataMatrix::zeros(0, 3), Err(Error::InvalidConfig(_))));
        assert!(matches!(DataMatrix::zeros(3, 0), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn capacity_is_enforced() {
        let err = DataMatrix::zeros_capped(100, 100, 9_999).unwrap_err();
        assert!(matches!(err, Error::Capacity { requested: 10_000, cap: 9_999 }));
        let err = DataMatrix::zeros(usize::MAX / 2, 4).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }

    #[test]
    fn column_access_and_distances() {
        let x = DataMatrix::from_columns(&[[1.0, 2.0], [3.0, -1.0]]).unwrap();
        assert_eq!(x.column(1), &[3.0, -1.0]);
        assert_eq!(x.inner(0, 1), 1.0);
        assert_eq!(x.norm_sq(0), 5.0);
        assert_eq!(x.dist_sq(0, 1), 13.0);
    }

    #[test]
    fn ragged_columns_rejected() {
        let cols: Vec<Vec<f64>> = vec![vec![1.0, 2.0], vec![1.0]];
        assert!(matches!(
            DataMatrix::from_columns(&cols),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
