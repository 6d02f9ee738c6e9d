//! Distances between spectral distributions and the two perturbation
//! inequalities that bound them by matrix differences:
//!
//! * rank inequality: `d_KS(mu_B, mu_C) <= rank(B - C) / n`
//! * Hoffman-Wielandt: `W_2(mu_B, mu_C) <= sqrt(tr (B - C)^2 / n)`
//!
//! KS here is the sup-distance between CDFs, which coincides with the
//! supremum of `int f dmu - int f dnu` over `||f||_BV <= 1`. The bounded
//! Lipschitz distance `d` of the two is not computed; `d_upper = min(ks, w1)`
//! is an upper bound for it.

use serde::{Deserialize, Serialize};

use crate::eigen::eigenvalues_symmetric;
use crate::error::{Error, Result};
use crate::limit::LimitLaw;
use crate::matrix::SymmetricMatrix;
use crate::spectral::{rank_of_spectrum, SpectralDistribution, ZERO_ATOM_REL};

/// Slack allowed when checking the perturbation inequalities.
pub const INEQUALITY_SLACK: f64 = 1e-8;

/// Number of quantile points used to discretize a continuous law.
pub const LAW_GRID_POINTS: usize = 16_384;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub ks: f64,
    pub w1: f64,
    pub w2: f64,
    /// `min(ks, w1)`, an upper bound on the bounded-Lipschitz distance.
    pub d_upper: f64,
}

impl DistanceReport {
    fn new(ks: f64, w1: f64, w2: f64) -> Self {
        DistanceReport { ks, w1, w2, d_upper: ks.min(w1) }
    }
}

/// `sup_x |F_a(x) - F_b(x)|`, exact.
pub fn ks_distance(a: &SpectralDistribution, b: &SpectralDistribution) -> f64 {
    ks_resolved(a, b, 0.0)
}

/// KS distance that ignores displacements up to `gap`:
/// `max(sup_x F_a(x) - F_b(x + gap), sup_x F_b(x) - F_a(x + gap))`.
///
/// With `gap = 0` this is the exact KS distance. If every value in `a` and
/// `b` is within `gap / 2` of the corresponding exact value, the result is a
/// lower bound of the exact KS distance between the exact spectra.
pub fn ks_resolved(a: &SpectralDistribution, b: &SpectralDistribution, gap: f64) -> f64 {
    let (n, m) = (a.len() as u128, b.len() as u128);
    let one_side = |x: &SpectralDistribution, y: &SpectralDistribution, nx: u128, ny: u128| {
        x.values()
            .iter()
            .map(|&v| {
                let cx = x.count_le(v) as u128 * ny;
                let cy = y.count_le(v + gap) as u128 * nx;
                cx.saturating_sub(cy)
            })
            .max()
            .unwrap_or(0)
    };
    let best = one_side(a, b, n, m).max(one_side(b, a, m, n));
    best as f64 / (n * m) as f64
}

/// KS distance between an ESD and a law with at most one atom.
///
/// Values within `ZERO_ATOM_REL * max|lambda|` of the atom are counted as
/// sitting on it.
pub fn ks_vs_law(a: &SpectralDistribution, law: &LimitLaw) -> f64 {
    let atom = law.atom();
    let values: Vec<f64> = match atom {
        Some(at) => {
            let tol = ZERO_ATOM_REL * a.max_abs().max(at.location.abs());
            a.values()
                .iter()
                .map(|&v| if (v - at.location).abs() <= tol { at.location } else { v })
                .collect()
        }
        None => a.values().to_vec(),
    };
    let esd = SpectralDistribution::new(values).expect("non-empty, finite");
    let n = esd.len() as f64;
    let gap = |x: f64| {
        let right = (esd.count_le(x) as f64 - n * law.cdf(x)).abs();
        let left = (esd.count_lt(x) as f64 - n * law.cdf_left(x)).abs();
        right.max(left)
    };
    let mut best = esd.values().iter().map(|&v| gap(v)).fold(0.0, f64::max);
    if let Some(at) = atom {
        best = best.max(gap(at.location));
    }
    best / n
}

/// `W_p` between two ESDs via the quantile coupling, which is optimal in
/// one dimension. Equal sizes reduce to pairing sorted values.
pub fn wasserstein(a: &SpectralDistribution, b: &SpectralDistribution, order: u32) -> f64 {
    assert!(order >= 1, "Wasserstein order must be at least 1");
    let (n, m) = (a.len() as u128, b.len() as u128);
    let (va, vb) = (a.values(), b.values());
    let cost = |x: f64| x.abs().powi(order as i32);
    if n == m {
        let s: f64 = va.iter().zip(vb).map(|(x, y)| cost(x - y)).sum();
        return (s / n as f64).powf(1.0 / order as f64);
    }
    // Breakpoints i/n and j/m on a common denominator n*m.
    let (mut i, mut j) = (0usize, 0usize);
    let mut pos: u128 = 0;
    let mut total = 0.0;
    while i < va.len() && j < vb.len() {
        let end_a = (i as u128 + 1) * m;
        let end_b = (j as u128 + 1) * n;
        let end = end_a.min(end_b);
        total += (end - pos) as f64 * cost(va[i] - vb[j]);
        pos = end;
        if end == end_a {
            i += 1;
        }
        if end == end_b {
            j += 1;
        }
    }
    (total / (n * m) as f64).powf(1.0 / order as f64)
}

/// Midpoint quantile discretization of a law: values `Q((k - 1/2) / K)`.
#[derive(Debug, Clone)]
pub struct LawGrid {
    grid: SpectralDistribution,
}

impl LawGrid {
    pub fn new(law: &LimitLaw, points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::Empty("law grid"));
        }
        let k = points as f64;
        let values = (0..points).map(|i| law.quantile((i as f64 + 0.5) / k)).collect();
        Ok(LawGrid { grid: SpectralDistribution::new(values)? })
    }

    pub fn as_distribution(&self) -> &SpectralDistribution {
        &self.grid
    }
}

/// KS (exact) and Wasserstein (on the quantile grid) distances to a law.
pub fn distance_to_law(a: &SpectralDistribution, law: &LimitLaw, grid: &LawGrid) -> DistanceReport {
    DistanceReport::new(
        ks_vs_law(a, law),
        wasserstein(a, grid.as_distribution(), 1),
        wasserstein(a, grid.as_distribution(), 2),
    )
}

pub fn distance_report(a: &SpectralDistribution, b: &SpectralDistribution) -> DistanceReport {
    DistanceReport::new(ks_distance(a, b), wasserstein(a, b, 1), wasserstein(a, b, 2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InequalityCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        InequalityCheck { lhs, rhs, holds: lhs <= rhs + INEQUALITY_SLACK }
    }
}

/// Eigenvalue resolution for a matrix with spectral norm `norm`.
fn resolution(order: usize, norm: f64) -> f64 {
    order as f64 * f64::EPSILON * norm
}

/// Rank inequality from precomputed spectra of `B`, `C` and the difference
/// `B - C`. Near-ties closer than the solver resolution are not counted.
pub fn rank_check(
    b_eigs: &[f64],
    c_eigs: &[f64],
    diff: &SymmetricMatrix,
) -> Result<InequalityCheck> {
    let n = diff.order();
    if b_eigs.len() != n || c_eigs.len() != n {
        return Err(Error::DimensionMismatch("spectra and difference sizes differ".into()));
    }
    let b = SpectralDistribution::new(b_eigs.to_vec())?;
    let c = SpectralDistribution::new(c_eigs.to_vec())?;
    let tau = resolution(n, b.max_abs().max(c.max_abs()));
    let lhs = ks_resolved(&b, &c, 2.0 * tau);
    let rank = rank_of_spectrum(&eigenvalues_symmetric(diff)?);
    Ok(InequalityCheck::new(lhs, rank as f64 / n as f64))
}

/// Hoffman-Wielandt inequality from precomputed spectra.
pub fn hw_check(b_eigs: &[f64], c_eigs: &[f64], diff: &SymmetricMatrix) -> Result<InequalityCheck> {
    let n = diff.order();
    if b_eigs.len() != n || c_eigs.len() != n {
        return Err(Error::DimensionMismatch("spectra and difference sizes differ".into()));
    }
    let b = SpectralDistribution::new(b_eigs.to_vec())?;
    let c = SpectralDistribution::new(c_eigs.to_vec())?;
    let lhs = wasserstein(&b, &c, 2);
    Ok(InequalityCheck::new(lhs, (diff.frobenius_sq() / n as f64).sqrt()))
}

/// `d_KS(mu_B, mu_C) <= rank(B - C) / n`.
pub fn verify_rank_inequality(b: &SymmetricMatrix, c: &SymmetricMatrix) -> Result<InequalityCheck> {
    let diff = b.difference(c)?;
    rank_check(&eigenvalues_symmetric(b)?, &eigenvalues_symmetric(c)?, &diff)
}

/// `W_2(mu_B, mu_C) <= sqrt(tr (B - C)^2 / n)`.
pub fn verify_hw_inequality(b: &SymmetricMatrix, c: &SymmetricMatrix) -> Result<InequalityCheck> {
    let diff = b.difference(c)?;
    hw_check(&eigenvalues_symmetric(b)?, &eigenvalues_symmetric(c)?, &diff)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: &[f64]) -> SpectralDistribution {
        SpectralDistribution::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ks_examples() {
        assert_eq!(ks_distance(&d(&[1.0, 2.0]), &d(&[2.0, 1.0])), 0.0);
        assert_eq!(ks_distance(&d(&[0.0]), &d(&[1.0])), 1.0);
        assert_eq!(ks_distance(&d(&[0.0, 1.0]), &d(&[0.5, 1.0])), 0.5);
        assert_eq!(ks_distance(&d(&[0.0, 1.0, 2.0]), &d(&[0.0, 1.0])), 1.0 / 3.0);
    }

    #[test]
    fn wasserstein_examples() {
        assert_eq!(wasserstein(&d(&[0.0, 2.0]), &d(&[1.0, 3.0]), 2), 1.0);
        assert_eq!(wasserstein(&d(&[0.0, 0.0]), &d(&[1.0, -1.0]), 2), 1.0);
        assert_eq!(wasserstein(&d(&[0.0, 0.0]), &d(&[1.0, -1.0]), 1), 1.0);
        let a = d(&[0.3, -2.0, 5.0]);
        assert_eq!(wasserstein(&a, &a, 1), 0.0);
        // unequal sizes: {0} vs {-1, 1}
        assert_eq!(wasserstein(&d(&[0.0]), &d(&[-1.0, 1.0]), 2), 1.0);
        // duplicating every value leaves the measure unchanged
        assert_eq!(wasserstein(&d(&[1.0, 4.0]), &d(&[1.0, 1.0, 4.0, 4.0]), 1), 0.0);
    }

    #[test]
    fn rank_inequality_equality_case() {
        let b = SymmetricMatrix::zeros(4);
        let mut diag = vec![0.0; 4];
        diag[0] = 1.0;
        let c = SymmetricMatrix::from_diagonal(&diag);
        let chk = verify_rank_inequality(&b, &c).unwrap();
        assert_eq!((chk.lhs, chk.rhs, chk.holds), (0.25, 0.25, true));
        let same = verify_rank_inequality(&c, &c).unwrap();
        assert_eq!((same.lhs, same.rhs), (0.0, 0.0));
    }

    #[test]
    fn hw_equality_case() {
        let b = SymmetricMatrix::zeros(2);
        let c = SymmetricMatrix::from_diagonal(&[1.0, -1.0]);
        let chk = verify_hw_inequality(&b, &c).unwrap();
        assert_eq!((chk.lhs, chk.rhs, chk.holds), (1.0, 1.0, true));
        let same = verify_hw_inequality(&c, &c).unwrap();
        assert_eq!((same.lhs, same.rhs), (0.0, 0.0));
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let b = SymmetricMatrix::zeros(2);
        let c = SymmetricMatrix::zeros(3);
        assert!(matches!(verify_hw_inequality(&b, &c), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn ks_vs_point_mass() {
        let law = LimitLaw::for_kernel(&crate::kernel::Kernel::constant(1.0), 1.0).unwrap();
        assert_eq!(ks_vs_law(&d(&[0.0, 0.0, 0.0]), &law), 0.0);
        assert_eq!(ks_vs_law(&d(&[1e-17, -1e-17, 3.0]), &law), 1.0 / 3.0);
        let mp = LimitLaw::marchenko_pastur(1.0).unwrap();
        assert_eq!(ks_vs_law(&d(&[100.0]), &mp), 1.0);
    }

    #[test]
    fn resolved_ks_ignores_near_ties() {
        let a = d(&[1.0, 2.0, 3.0]);
        let b = d(&[1.0 + 1e-14, 2.0 - 1e-14, 3.0]);
        assert!(ks_distance(&a, &b) > 0.0);
        assert_eq!(ks_resolved(&a, &b, 1e-12), 0.0);
    }
}
