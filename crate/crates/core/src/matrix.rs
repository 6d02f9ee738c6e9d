use crate::error::{Error, Result};

/// Dense real symmetric matrix, stored in full row-major form.
///
/// Constructors only ever fill the upper triangle and mirror it, so
/// `get(i, j) == get(j, i)` holds bitwise.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    order: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(order: usize) -> Self {
        SymmetricMatrix {
            order,
            data: vec![0.0; order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        (0..order).for_each(|i| m.data[i * order + i] = 1.0);
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        diag.iter().enumerate().for_each(|(i, &v)| m.data[i * n + i] = v);
        m
    }

    /// Evaluates `f(i, j)` for `i <= j` and mirrors.
    pub fn from_upper_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            for j in i..order {
                let v = f(i, j);
                m.data[i * order + j] = v;
                m.data[j * order + i] = v;
            }
        }
        m
    }

    /// Like [`from_upper_fn`](Self::from_upper_fn) with a fallible entry map.
    pub fn try_from_upper_fn(
        order: usize,
        mut f: impl FnMut(usize, usize) -> Result<f64>,
    ) -> Result<Self> {
        let mut m = Self::zeros(order);
        for i in 0..order {
            for j in i..order {
                let v = f(i, j)?;
                m.data[i * order + j] = v;
                m.data[j * order + i] = v;
            }
        }
        Ok(m)
    }

    /// Builds from the upper triangle of each row, rows given in full.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {n}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        for i in 0..n {
            for j in 0..i {
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::InvalidConfig(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("matrix entry".into()));
        }
        Ok(SymmetricMatrix { order: n, data })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.order).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    /// `tr((self)^2)`, the squared Frobenius norm.
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `self - other`.
    pub fn difference(&self, other: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        self.check_same_order(other)?;
        Ok(SymmetricMatrix {
            order: self.order,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn check_same_order(&self, other: &SymmetricMatrix) -> Result<()> {
        if self.order != other.order {
            return Err(Error::DimensionMismatch(format!(
                "matrices of order {} and {}",
                self.order, other.order
            )));
        }
        Ok(())
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upper_fn_is_mirrored() {
        let m = SymmetricMatrix::from_upper_fn(3, |i, j| (10 * i + j) as f64);
        assert_eq!(m.get(2, 0), m.get(0, 2));
        assert_eq!(m.get(1, 2), 12.0);
        assert_eq!(m.trace(), 0.0 + 11.0 + 22.0);
    }

    #[test]
    fn asymmetric_rows_rejected() {
        assert!(SymmetricMatrix::from_rows(&[[0.0, 1.0], [2.0, 0.0]]).is_err());
        assert!(SymmetricMatrix::from_rows(&[[0.0, 1.0], [1.0, f64::NAN]]).is_err());
        let m = SymmetricMatrix::from_rows(&[[0.0, 4.0], [4.0, 0.0]]).unwrap();
        assert_eq!(m.frobenius_sq(), 32.0);
    }
}
