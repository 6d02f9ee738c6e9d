//! Matrices built from a data matrix `X` and a kernel `f`.
//!
//! * `A_ij = f(||X_i - X_j||^2)`, the Euclidean random matrix;
//! * `X^T X`, the Gram matrix;
//! * `M = (f(0) - f(2) + 2 f'(2)) I + f(2) J - 2 f'(2) X^T X`, its linearization;
//! * `B, C, D, E`, the intermediate matrices of the successive Taylor
//!   expansions that connect `A` to `M`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::kernel::{limit_coefficients, taylor_coefficients, Kernel};
use crate::matrix::SymmetricMatrix;

/// Fills the upper triangle row by row in parallel and mirrors it.
fn par_upper<F>(n: usize, entry: F) -> Result<SymmetricMatrix>
where
    F: Fn(usize, usize) -> Result<f64> + Sync,
{
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (i..n).map(|j| entry(i, j)).collect::<Result<Vec<f64>>>())
        .collect::<Result<_>>()?;
    let mut m = SymmetricMatrix::zeros(n);
    let data = m.data_mut();
    for (i, row) in rows.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            let j = i + off;
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    Ok(m)
}

/// `A_ij = f(||X_i - X_j||^2)`, diagonal exactly `f(0)`.
pub fn build_euclidean(x: &DataMatrix, kernel: &Kernel) -> Result<SymmetricMatrix> {
    par_upper(x.count(), |i, j| {
        if i == j {
            return Ok(kernel.f0());
        }
        let v = kernel.evaluate(x.dist_sq(i, j));
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::KernelNonFinite { i, j, value: v })
        }
    })
}

/// `X^T X`.
pub fn build_gram(x: &DataMatrix) -> SymmetricMatrix {
    par_upper(x.count(), |i, j| Ok(x.inner(i, j))).expect("gram entries are infallible")
}

#[inline]
fn linearized_entry(kernel: &Kernel, shift: f64, i: usize, j: usize, inner: f64) -> f64 {
    let off = kernel.f2() - 2.0 * kernel.df2() * inner;
    if i == j {
        shift + off
    } else {
        off
    }
}

/// `M = (f(0) - f(2) + 2 f'(2)) I + f(2) J - 2 f'(2) X^T X`.
pub fn build_linearized(x: &DataMatrix, kernel: &Kernel) -> SymmetricMatrix {
    let shift = limit_coefficients(kernel).shift;
    par_upper(x.count(), |i, j| Ok(linearized_entry(kernel, shift, i, j, x.inner(i, j))))
        .expect("linearized entries are infallible")
}

/// Squared-norm deviations `z_i = ||X_i||^2 - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormDeviations(Vec<f64>);

impl NormDeviations {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn norm_deviations(x: &DataMatrix) -> NormDeviations {
    NormDeviations((0..x.count()).map(|i| x.norm_sq(i) - 1.0).collect())
}

/// The intermediate matrices between `A` and `M`.
///
/// `b` is `None` for kernels without a derivative map, since it needs
/// `f'` away from 2.
#[derive(Debug, Clone)]
pub struct ProofChain {
    pub b: Option<SymmetricMatrix>,
    pub c: SymmetricMatrix,
    pub d: SymmetricMatrix,
    pub e: SymmetricMatrix,
}

/// Builds `B`, `C`, `D`, `E`. For `i != j`, with `s = ||X_i||^2 + ||X_j||^2`
/// and `w = X_i^T X_j`:
///
/// ```text
/// B_ij = f(s) - 2 f'(s) w
/// C_ij = f(s) - 2 f'(2) w
/// D_ij = M_ij + sum_{1 <= k+l <= 3} c_kl z_i^k z_j^l
/// ```
///
/// and `B_ii = C_ii = D_ii = f(0)`. `E` uses the `D` formula on the
/// diagonal as well, so `E - M = sum c_kl Z_k Z_l^T` has rank at most 9
/// (in fact at most 3, the span of `Z_1, Z_2, Z_3`).
pub fn build_proof_chain(x: &DataMatrix, kernel: &Kernel) -> Result<ProofChain> {
    let coeffs = taylor_coefficients(kernel)?;
    let shift = limit_coefficients(kernel).shift;
    let n = x.count();
    let norms: Vec<f64> = (0..n).map(|i| x.norm_sq(i)).collect();
    let z = norm_deviations(x);
    let z = z.as_slice();

    let eval = |matrix: &'static str, i: usize, j: usize, point: f64| -> Result<f64> {
        let v = kernel.evaluate(point);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain { matrix, i, j, point })
        }
    };

    let b = if kernel.has_derivative_map() {
        Some(par_upper(n, |i, j| {
            if i == j {
                return Ok(kernel.f0());
            }
            let s = norms[i] + norms[j];
            let fs = eval("B", i, j, s)?;
            let ds = kernel.derivative(s).unwrap_or(f64::NAN);
            if !ds.is_finite() {
                return Err(Error::Domain { matrix: "B", i, j, point: s });
            }
            Ok(fs - 2.0 * ds * x.inner(i, j))
        })?)
    } else {
        None
    };

    let c = par_upper(n, |i, j| {
        if i == j {
            return Ok(kernel.f0());
        }
        let s = norms[i] + norms[j];
        Ok(eval("C", i, j, s)? - 2.0 * kernel.df2() * x.inner(i, j))
    })?;

    let e = par_upper(n, |i, j| {
        Ok(linearized_entry(kernel, shift, i, j, x.inner(i, j)) + coeffs.expansion(z[i], z[j]))
    })?;

    let mut d = e.clone();
    let f0 = kernel.f0();
    let data = d.data_mut();
    (0..n).for_each(|i| data[i * n + i] = f0);

    Ok(ProofChain { b, c, d, e })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventEResult {
    pub epsilon: f64,
    pub holds: bool,
    /// `max_{i != j} | ||X_i - X_j||^2 - 2 |`
    pub max_pair_dev: f64,
    /// `max_i | ||X_i||^2 - 1 |`
    pub max_norm_dev: f64,
}

/// Whether all squared norms are within `epsilon` of 1 and all squared
/// pairwise distances within `epsilon` of 2.
pub fn check_event(x: &DataMatrix, epsilon: f64) -> Result<EventEResult> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::InvalidConfig(format!("epsilon must be >= 0, got {epsilon}")));
    }
    let n = x.count();
    let max_norm_dev = norm_deviations(x).max_abs();
    let max_pair_dev = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| (x.dist_sq(i, j) - 2.0).abs())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(EventEResult {
        epsilon,
        holds: max_pair_dev.max(max_norm_dev) <= epsilon,
        max_pair_dev,
        max_norm_dev,
    })
}

/// `n^(-1/8)`, the default event tolerance.
pub fn default_epsilon(n: usize) -> f64 {
    (n as f64).powf(-0.125)
}
