//! Empirical spectral distributions.

use crate::eigen::eigenvalues_symmetric;
use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;

/// Eigenvalues with `|lambda| <= ZERO_ATOM_REL * ||m||` are treated as zero.
pub const ZERO_ATOM_REL: f64 = 1e-8;

/// Uniform probability measure on a multiset of reals, kept sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDistribution {
    values: Vec<f64>,
}

impl SpectralDistribution {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("spectral distribution"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("eigenvalue".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(SpectralDistribution { values })
    }

    /// ESD of `m`, with the zero atom snapped to exactly 0.
    pub fn of_matrix(m: &SymmetricMatrix) -> Result<Self> {
        let eigs = eigenvalues_symmetric(m)?;
        Ok(Self::from_eigenvalues(eigs))
    }

    /// Sorted eigenvalues of one matrix; near-zero values are set to 0.
    pub fn from_eigenvalues(mut eigs: Vec<f64>) -> Self {
        eigs.sort_by(f64::total_cmp);
        let norm = eigs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let cut = ZERO_ATOM_REL * norm;
        eigs.iter_mut().filter(|v| v.abs() <= cut).for_each(|v| *v = 0.0);
        SpectralDistribution { values: eigs }
    }

    /// Mixture with equal weight per eigenvalue, i.e. the average ESD when
    /// all parts have the same size.
    pub fn pooled(parts: &[SpectralDistribution]) -> Result<Self> {
        Self::new(parts.iter().flat_map(|p| p.values.iter().copied()).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `max |lambda|`, which is the spectral norm of the source matrix.
    pub fn max_abs(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// Number of values `<= x`.
    pub fn count_le(&self, x: f64) -> usize {
        self.values.partition_point(|&v| v <= x)
    }

    /// Number of values `< x`.
    pub fn count_lt(&self, x: f64) -> usize {
        self.values.partition_point(|&v| v < x)
    }

    /// Right-continuous CDF.
    pub fn cdf(&self, x: f64) -> f64 {
        self.count_le(x) as f64 / self.len() as f64
    }

    /// Left limit of the CDF at `x`.
    pub fn cdf_left(&self, x: f64) -> f64 {
        self.count_lt(x) as f64 / self.len() as f64
    }

    /// Smallest value whose CDF reaches `q`, for `q` in `(0, 1]`.
    pub fn quantile(&self, q: f64) -> f64 {
        assert!(q > 0.0 && q <= 1.0, "quantile level must lie in (0, 1]");
        let k = (q * self.len() as f64).ceil() as usize;
        self.values[k.clamp(1, self.len()) - 1]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// `(1/n) sum g(lambda_i)`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.values.iter().map(|&v| g(v)).sum::<f64>() / self.len() as f64
    }
}

/// `esd` operation: normalized step distribution of a nonempty sequence.
pub fn esd(eigs: &[f64]) -> Result<SpectralDistribution> {
    SpectralDistribution::new(eigs.to_vec())
}

/// Number of eigenvalues of `m` with `|lambda| > n * eps * max |lambda|`.
pub fn numerical_rank(m: &SymmetricMatrix) -> Result<usize> {
    let eigs = eigenvalues_symmetric(m)?;
    Ok(rank_of_spectrum(&eigs))
}

pub(crate) fn rank_of_spectrum(eigs: &[f64]) -> usize {
    let top = eigs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if top == 0.0 {
        return 0;
    }
    let cut = eigs.len() as f64 * f64::EPSILON * top;
    eigs.iter().filter(|v| v.abs() > cut).count()
}
