//! Symmetric eigensolver: Householder reduction to tridiagonal form followed
//! by implicit-shift QL iterations.

use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;

const MAX_SWEEPS: usize = 60;

/// Eigenvalues and (row-stored) eigenvectors of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub values: Vec<f64>,
    /// Row `k` is the unit eigenvector for `values[k]`.
    vectors: Vec<f64>,
    order: usize,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.order..(k + 1) * self.order]
    }

    /// `||m v_k - lambda_k v_k||_2`.
    pub fn residual(&self, m: &SymmetricMatrix, k: usize) -> f64 {
        let v = self.vector(k);
        let lambda = self.values[k];
        (0..self.order)
            .map(|i| {
                let mv: f64 = m.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
                (mv - lambda * v[i]).powi(2)
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// All eigenvalues of `m`, ascending, with multiplicity.
pub fn eigenvalues_symmetric(m: &SymmetricMatrix) -> Result<Vec<f64>> {
    let (mut d, mut e) = tridiagonalize(m, None)?;
    tridiagonal_ql(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues together with eigenvectors.
pub fn eigen_decomposition(m: &SymmetricMatrix) -> Result<EigenDecomposition> {
    let n = m.order();
    let mut qt = vec![0.0; n * n];
    let (mut d, mut e) = tridiagonalize(m, Some(&mut qt))?;
    tridiagonal_ql(&mut d, &mut e, Some(&mut qt))?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = idx.iter().map(|&k| d[k]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &idx {
        vectors.extend_from_slice(&qt[k * n..(k + 1) * n]);
    }
    Ok(EigenDecomposition {
        values,
        vectors,
        order: n,
    })
}

/// Reduces `m` to tridiagonal form `(d, e)` with `e[k]` coupling `k` and
/// `k + 1` (`e[n-1] = 0`). When `qt` is given it receives `Q^T` in
/// row-major order, where `m = Q T Q^T`.
fn tridiagonalize(m: &SymmetricMatrix, qt: Option<&mut [f64]>) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = m.order();
    if n == 0 {
        return Err(Error::Empty("matrix"));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix entry passed to the eigensolver".into()));
    }
    let mut a = m.as_row_major().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let want_q = qt.is_some();
    let mut reflectors: Vec<(usize, f64, Vec<f64>)> = Vec::new();
    let mut p = vec![0.0; n];

    for k in 0..n.saturating_sub(1) {
        d[k] = a[k * n + k];
        let lo = k + 1;
        let len = n - lo;
        let mut v: Vec<f64> = (lo..n).map(|i| a[i * n + k]).collect();
        let tail_sq: f64 = v[1..].iter().map(|x| x * x).sum();
        if tail_sq == 0.0 {
            e[k] = v[0];
            continue;
        }
        let x0 = v[0];
        let norm = (x0 * x0 + tail_sq).sqrt();
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        v[0] = x0 - alpha;
        let vtv = v[0] * v[0] + tail_sq;
        let tau = 2.0 / vtv;
        e[k] = alpha;

        // p = tau * T v, over the trailing block T = a[lo.., lo..]
        let p = &mut p[..len];
        for (r, pr) in p.iter_mut().enumerate() {
            let row = &a[(lo + r) * n + lo..(lo + r) * n + n];
            *pr = tau * row.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>();
        }
        let kk = 0.5 * tau * p.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>();
        // w = p - kk v, stored in p
        p.iter_mut().zip(&v).for_each(|(pw, vi)| *pw -= kk * vi);
        for r in 0..len {
            let (vr, wr) = (v[r], p[r]);
            let row = &mut a[(lo + r) * n + lo..(lo + r) * n + n];
            for ((x, vc), wc) in row.iter_mut().zip(&v).zip(p.iter()) {
                *x -= vr * wc + wr * vc;
            }
        }
        if want_q {
            reflectors.push((lo, tau, v));
        }
    }
    d[n - 1] = a[n * n - 1];

    if let Some(qt) = qt {
        qt.iter_mut().for_each(|x| *x = 0.0);
        (0..n).for_each(|i| qt[i * n + i] = 1.0);
        // Q^T = H_last ... H_1 H_0
        let mut u = vec![0.0; n];
        for (lo, tau, v) in &reflectors {
            u.iter_mut().for_each(|x| *x = 0.0);
            for (r, vr) in v.iter().enumerate() {
                let row = &qt[(lo + r) * n..(lo + r + 1) * n];
                u.iter_mut().zip(row).for_each(|(uc, q)| *uc += vr * q);
            }
            for (r, vr) in v.iter().enumerate() {
                let row = &mut qt[(lo + r) * n..(lo + r + 1) * n];
                row.iter_mut().zip(&u).for_each(|(q, uc)| *q -= tau * vr * uc);
            }
        }
    }
    Ok((d, e))
}

/// Implicit-shift QL on a symmetric tridiagonal matrix. Rotations are
/// applied to the rows of `qt` when given.
///
/// An off-diagonal entry is treated as zero once it is below machine
/// epsilon times the running maximum of `|d_l| + |e_l|`. A purely relative
/// test stalls on clusters of eigenvalues near zero.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], mut qt: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n > 0 {
        e[n - 1] = 0.0;
    }
    let mut tst = 0.0f64;
    for l in 0..n {
        let mut sweeps = 0;
        tst = tst.max(d[l].abs() + e[l].abs());
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = (d[m].abs() + d[m + 1].abs()).max(tst);
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    index: l,
                    iterations: MAX_SWEEPS,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(q) = qt.as_deref_mut() {
                    let (top, bottom) = q.split_at_mut((i + 1) * n);
                    let row_i = &mut top[i * n..];
                    let row_next = &mut bottom[..n];
                    for (zi, zn) in row_i.iter_mut().zip(row_next.iter_mut()) {
                        let t = *zn;
                        *zn = s * *zi + c * t;
                        *zi = c * *zi - s * t;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
