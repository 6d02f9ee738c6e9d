//! Isotropic random vectors.
//!
//! Each family is scaled so that `E[Y] = 0` and `E[Y Y^T] = I / p`, hence
//! `E ||Y||^2 = 1`:
//!
//! | family          | construction                                   |
//! |-----------------|------------------------------------------------|
//! | `Gaussian`      | i.i.d. `N(0, 1/p)` coordinates                 |
//! | `UniformBall`   | uniform in the ball of radius `sqrt((p+2)/p)`  |
//! | `UniformSphere` | uniform on the unit sphere, `||Y|| = 1` exactly |
//! | `UniformCube`   | uniform in `[-sqrt(3/p), sqrt(3/p)]^p`         |
//! | `Laplace`       | i.i.d. Laplace coordinates with scale `1/sqrt(2p)` |
//!
//! All but the sphere are log-concave.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::{dot, DataMatrix, DEFAULT_MAX_ENTRIES};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Gaussian,
    UniformBall,
    UniformSphere,
    UniformCube,
    Laplace,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::Gaussian,
        FamilyKind::UniformBall,
        FamilyKind::UniformSphere,
        FamilyKind::UniformCube,
        FamilyKind::Laplace,
    ];

    pub fn is_log_concave(self) -> bool {
        !matches!(self, FamilyKind::UniformSphere)
    }

    pub fn in_dim(self, dim: usize) -> Result<VectorFamily> {
        VectorFamily::new(self, dim)
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(FamilyKind::Gaussian),
            "uniform_ball" | "ball" => Ok(FamilyKind::UniformBall),
            "uniform_sphere" | "sphere" => Ok(FamilyKind::UniformSphere),
            "uniform_cube" | "cube" => Ok(FamilyKind::UniformCube),
            "laplace" => Ok(FamilyKind::Laplace),
            other => Err(Error::InvalidConfig(format!("unknown vector family `{other}`"))),
        }
    }
}

/// An isotropic family in a fixed dimension `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VectorFamily {
    kind: FamilyKind,
    dim: usize,
}

impl VectorFamily {
    pub fn new(kind: FamilyKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("vector dimension p must be >= 1".into()));
        }
        Ok(VectorFamily { kind, dim })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Draws one vector into `out`, which must have length `p`.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        assert_eq!(out.len(), self.dim, "output slice must have length p");
        let p = self.dim as f64;
        match self.kind {
            FamilyKind::Gaussian => {
                let sd = p.recip().sqrt();
                for v in out.iter_mut() {
                    let g: f64 = StandardNormal.sample(rng);
                    *v = sd * g;
                }
            }
            FamilyKind::UniformSphere => loop {
                fill_normal(rng, out);
                if normalize_exact(out) {
                    break;
                }
            },
            FamilyKind::UniformBall => {
                // Gaussian direction, radius R * U^(1/p).
                let radius = ((p + 2.0) / p).sqrt();
                loop {
                    fill_normal(rng, out);
                    let norm = dot(out, out).sqrt();
                    if norm > 0.0 {
                        let u: f64 = rng.random();
                        let r = radius * u.powf(p.recip()) / norm;
                        out.iter_mut().for_each(|v| *v *= r);
                        break;
                    }
                }
            }
            FamilyKind::UniformCube => {
                let half = (3.0 / p).sqrt();
                for v in out.iter_mut() {
                    *v = rng.random_range(-half..=half);
                }
            }
            FamilyKind::Laplace => {
                let scale = (2.0 * p).sqrt().recip();
                for v in out.iter_mut() {
                    let a: f64 = Exp1.sample(rng);
                    let b: f64 = Exp1.sample(rng);
                    *v = scale * (a - b);
                }
            }
        }
    }
}

fn fill_normal<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    for v in out.iter_mut() {
        *v = StandardNormal.sample(rng);
    }
}

/// Rescales `v` to unit length so that [`dot`]`(v, v) == 1.0` holds bitwise.
///
/// The last coordinate is re-solved from the others and nudged by a few ulps
/// until the sequential sum of squares rounds to exactly one. Returns `false`
/// when no such value was found (the caller redraws).
fn normalize_exact(v: &mut [f64]) -> bool {
    let norm = dot(v, v).sqrt();
    if norm.is_nan() || norm <= 0.0 {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    let (last, head) = v.split_last_mut().expect("non-empty vector");
    let rest = dot(head, head);
    if rest > 1.0 {
        return false;
    }
    let sign = if *last < 0.0 { -1.0 } else { 1.0 };
    let guess = (1.0 - rest).sqrt();
    let offsets = std::iter::once(0).chain((1..128).flat_map(|k| [k, -k]));
    for off in offsets {
        let candidate = nudge(guess, off);
        if rest + candidate * candidate == 1.0 {
            *last = sign * candidate;
            return true;
        }
    }
    false
}

fn nudge(x: f64, ulps: i64) -> f64 {
    let bits = x.to_bits() as i64 + ulps;
    if bits < 0 {
        0.0
    } else {
        f64::from_bits(bits as u64)
    }
}

/// One draw from `family`.
pub fn sample_vector<R: Rng + ?Sized>(family: &VectorFamily, rng: &mut R) -> Vec<f64> {
    let mut out = vec![0.0; family.dim()];
    family.sample_into(rng, &mut out);
    out
}

/// `n` i.i.d. columns from `family`, bounded by [`DEFAULT_MAX_ENTRIES`].
pub fn sample_data_matrix<R: Rng + ?Sized>(
    family: &VectorFamily,
    n: usize,
    rng: &mut R,
) -> Result<DataMatrix> {
    sample_data_matrix_capped(family, n, rng, DEFAULT_MAX_ENTRIES)
}

pub fn sample_data_matrix_capped<R: Rng + ?Sized>(
    family: &VectorFamily,
    n: usize,
    rng: &mut R,
    cap: usize,
) -> Result<DataMatrix> {
    let mut x = DataMatrix::zeros_capped(family.dim(), n, cap)?;
    for i in 0..n {
        family.sample_into(rng, x.column_mut(i));
    }
    Ok(x)
}

/// Empirical isotropy diagnostics. Purely descriptive, no thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsotropyReport {
    /// Euclidean norm of the empirical mean vector.
    pub mean_norm: f64,
    /// Average of the column norms `||X_i||`.
    pub mean_column_norm: f64,
    /// `max_{j != k} |p * cov_jk|`.
    pub max_offdiag: f64,
    /// `max_j |p * cov_jj - 1|`.
    pub max_diag_dev: f64,
    pub samples: usize,
}

pub fn check_isotropy(x: &DataMatrix) -> Result<IsotropyReport> {
    let (p, n) = (x.dim(), x.count());
    if n < 2 {
        return Err(Error::InvalidConfig(
            "isotropy check needs at least 2 samples".into(),
        ));
    }
    let mut mean = vec![0.0; p];
    for col in x.columns() {
        mean.iter_mut().zip(col).for_each(|(m, v)| *m += v);
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);

    let mut cov = vec![0.0; p * p];
    let mut centered = vec![0.0; p];
    for col in x.columns() {
        centered
            .iter_mut()
            .zip(col.iter().zip(&mean))
            .for_each(|(c, (v, m))| *c = v - m);
        for j in 0..p {
            let cj = centered[j];
            let row = &mut cov[j * p..j * p + j + 1];
            row.iter_mut()
                .zip(&centered[..=j])
                .for_each(|(c, ck)| *c += cj * ck);
        }
    }
    let scale = p as f64 / (n - 1) as f64;
    let mut max_offdiag: f64 = 0.0;
    let mut max_diag_dev: f64 = 0.0;
    for j in 0..p {
        for k in 0..j {
            max_offdiag = max_offdiag.max((scale * cov[j * p + k]).abs());
        }
        max_diag_dev = max_diag_dev.max((scale * cov[j * p + j] - 1.0).abs());
    }
    let mean_column_norm =
        x.columns().map(|c| dot(c, c).sqrt()).sum::<f64>() / n as f64;
    Ok(IsotropyReport {
        mean_norm: dot(&mean, &mean).sqrt(),
        mean_column_norm,
        max_offdiag,
        max_diag_dev,
        samples: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Streams;
    use proptest::prelude::*;

    fn mean_and_se(values: &[f64]) -> (f64, f64) {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(
            VectorFamily::new(FamilyKind::Gaussian, 0),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn sphere_norm_is_exactly_one() {
        let mut rng = Streams::new(1).stream(0);
        for p in [1, 2, 3, 10, 100, 1000] {
            let fam = FamilyKind::UniformSphere.in_dim(p).unwrap();
            for _ in 0..200 {
                let y = sample_vector(&fam, &mut rng);
                assert_eq!(dot(&y, &y), 1.0, "p = {p}");
            }
        }
    }

    #[test]
    fn gaussian_squared_norm_has_unit_mean() {
        let fam = FamilyKind::Gaussian.in_dim(1000).unwrap();
        let mut rng = Streams::new(2).stream(0);
        let norms: Vec<f64> = (0..10_000)
            .map(|_| {
                let y = sample_vector(&fam, &mut rng);
                dot(&y, &y)
            })
            .collect();
        let (mean, se) = mean_and_se(&norms);
        assert!((mean - 1.0).abs() <= 5.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn every_family_is_isotropic_in_squared_norm() {
        for (k, kind) in FamilyKind::ALL.into_iter().enumerate() {
            let fam = kind.in_dim(100).unwrap();
            let mut rng = Streams::new(3).stream(k as u64);
            let norms: Vec<f64> = (0..10_000)
                .map(|_| {
                    let y = sample_vector(&fam, &mut rng);
                    dot(&y, &y)
                })
                .collect();
            let (mean, se) = mean_and_se(&norms);
            if kind == FamilyKind::UniformSphere {
                assert_eq!(mean, 1.0);
            } else {
                assert!((mean - 1.0).abs() <= 5.0 * se, "{kind:?}: mean {mean}, se {se}");
            }
        }
    }

    #[test]
    fn cube_support() {
        let fam = FamilyKind::UniformCube.in_dim(3).unwrap();
        let mut rng = Streams::new(4).stream(0);
        for _ in 0..1000 {
            assert!(sample_vector(&fam, &mut rng).iter().all(|v| v.abs() <= 1.0));
        }
    }

    #[test]
    fn seeded_matrices_are_identical() {
        let fam = FamilyKind::Gaussian.in_dim(2).unwrap();
        let a = sample_data_matrix(&fam, 3, &mut Streams::new(9).stream(0)).unwrap();
        let b = sample_data_matrix(&fam, 3, &mut Streams::new(9).stream(0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sphere_columns_have_unit_norm() {
        let fam = FamilyKind::UniformSphere.in_dim(10).unwrap();
        let x = sample_data_matrix(&fam, 5, &mut Streams::new(5).stream(0)).unwrap();
        assert!((0..5).all(|i| x.norm_sq(i) == 1.0));
        let rep = check_isotropy(&x).unwrap();
        assert_eq!(rep.mean_column_norm, 1.0);
    }

    #[test]
    fn laplace_covariance_diagonal() {
        // p * Y_j^2 has mean 1 and variance 5 for Laplace coordinates.
        let fam = FamilyKind::Laplace.in_dim(500).unwrap();
        let x = sample_data_matrix(&fam, 500, &mut Streams::new(6).stream(0)).unwrap();
        let se = (5.0f64 / 500.0).sqrt();
        let rep = check_isotropy(&x).unwrap();
        assert!(rep.max_diag_dev <= 5.0 * se, "{rep:?}");
    }

    #[test]
    fn gaussian_isotropy_report() {
        let fam = FamilyKind::Gaussian.in_dim(200).unwrap();
        let x = sample_data_matrix(&fam, 10_000, &mut Streams::new(7).stream(0)).unwrap();
        let rep = check_isotropy(&x).unwrap();
        assert!(rep.max_diag_dev <= 0.2, "{rep:?}");
        assert!(rep.max_offdiag.is_finite() && rep.mean_norm.is_finite());
    }

    #[test]
    fn degenerate_input_does_not_crash() {
        let x = DataMatrix::from_columns(&[[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]]).unwrap();
        let rep = check_isotropy(&x).unwrap();
        assert_eq!(rep.max_offdiag, 0.0);
        assert!(rep.max_diag_dev.is_finite());
        let one = DataMatrix::from_columns(&[[1.0]]).unwrap();
        assert!(check_isotropy(&one).is_err());
    }

    #[test]
    fn capacity_error_surfaces() {
        let fam = FamilyKind::Gaussian.in_dim(10).unwrap();
        let err = sample_data_matrix_capped(&fam, 10, &mut Streams::new(0).stream(0), 50);
        assert!(matches!(err, Err(Error::Capacity { .. })));
    }

    proptest! {
        #[test]
        fn sphere_exact_for_any_seed(seed in any::<u64>(), p in 1usize..300) {
            let fam = FamilyKind::UniformSphere.in_dim(p).unwrap();
            let y = sample_vector(&fam, &mut Streams::new(seed).stream(0));
            prop_assert_eq!(dot(&y, &y), 1.0);
        }
    }
}
