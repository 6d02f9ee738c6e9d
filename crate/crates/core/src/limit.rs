//! The Marchenko-Pastur law and its affine images.
//!
//! With `y = lim p/n`, the Gram matrix `X^T X` is `n x n` and its spectrum
//! tends to the Marchenko-Pastur law with parameter `1/y`:
//!
//! ```text
//! nu(dx) = (1 - y)^+ delta_0(dx) + y / (2 pi x) sqrt((y+ - x)(x - y-)) 1[y-, y+](x) dx
//! y+- = (1 +- 1/sqrt(y))^2
//! ```
//!
//! It has mean 1 and variance `1/y`. The continuous part is integrated with
//! adaptive Simpson after the substitution `x = y- + (y+ - y-) sin^2(theta)`,
//! which removes the square-root singularities at both edges.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{limit_coefficients, AffineCoefficients, Kernel};
use crate::quadrature::adaptive_simpson;

/// Total absolute quadrature tolerance for the continuous part.
pub const QUAD_TOL: f64 = 1e-10;
/// Bisection tolerance for inverse CDFs, in `x` units.
pub const INVERSE_TOL: f64 = 1e-10;
const PANELS: usize = 64;

#[derive(Debug, Clone)]
pub struct MarchenkoPastur {
    y: f64,
    lower: f64,
    upper: f64,
    atom: f64,
    /// Cumulative integral of the continuous part at each panel edge in theta.
    cumulative: Arc<[f64]>,
}

impl PartialEq for MarchenkoPastur {
    fn eq(&self, other: &Self) -> bool {
        self.y == other.y
    }
}

impl MarchenkoPastur {
    pub fn new(y: f64) -> Result<Self> {
        if !(y > 0.0 && y.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "Marchenko-Pastur ratio must be positive and finite, got {y}"
            )));
        }
        let r = y.sqrt().recip();
        let mut mp = MarchenkoPastur {
            y,
            lower: (1.0 - r) * (1.0 - r),
            upper: (1.0 + r) * (1.0 + r),
            atom: (1.0 - y).max(0.0),
            cumulative: Arc::from(Vec::new()),
        };
        let h = FRAC_PI_2 / PANELS as f64;
        let mut cum = Vec::with_capacity(PANELS + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        for k in 0..PANELS {
            acc += adaptive_simpson(
                &|t| mp.theta_integrand(t),
                k as f64 * h,
                (k + 1) as f64 * h,
                QUAD_TOL / PANELS as f64,
            );
            cum.push(acc);
        }
        mp.cumulative = Arc::from(cum);
        Ok(mp)
    }

    /// The ratio `y = lim p/n`.
    pub fn ratio(&self) -> f64 {
        self.y
    }

    pub fn lower_edge(&self) -> f64 {
        self.lower
    }

    pub fn upper_edge(&self) -> f64 {
        self.upper
    }

    /// Mass of the atom at 0, `max(1 - y, 0)`.
    pub fn atom_mass(&self) -> f64 {
        self.atom
    }

    /// Density of the continuous part.
    pub fn density(&self, x: f64) -> f64 {
        if x <= 0.0 || x < self.lower || x > self.upper {
            return 0.0;
        }
        let prod = (self.upper - x) * (x - self.lower);
        self.y / (2.0 * PI * x) * prod.max(0.0).sqrt()
    }

    /// Density times `dx/dtheta` under `x = lower + (upper - lower) sin^2 theta`.
    fn theta_integrand(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let w = self.upper - self.lower;
        let s2 = s * s;
        if self.lower == 0.0 {
            // sin^2 cancels against x
            return self.y * w * c * c / PI;
        }
        self.y * w * w * s2 * c * c / (PI * (self.lower + w * s2))
    }

    fn theta_of(&self, x: f64) -> f64 {
        let u = ((x - self.lower) / (self.upper - self.lower)).clamp(0.0, 1.0);
        u.sqrt().asin()
    }

    fn x_of(&self, theta: f64) -> f64 {
        let s = theta.sin();
        self.lower + (self.upper - self.lower) * s * s
    }

    fn raw_integral_to_theta(&self, theta: f64) -> f64 {
        let h = FRAC_PI_2 / PANELS as f64;
        let k = ((theta / h).floor() as usize).min(PANELS - 1);
        let start = k as f64 * h;
        self.cumulative[k]
            + adaptive_simpson(&|t| self.theta_integrand(t), start, theta, QUAD_TOL / PANELS as f64)
    }

    /// Quadrature value of the continuous mass; equals `1 - atom` in theory.
    pub fn continuous_mass(&self) -> f64 {
        self.cumulative[PANELS]
    }

    /// `int x^k nu(dx)` by quadrature.
    pub fn moment(&self, k: i32) -> f64 {
        let h = FRAC_PI_2 / PANELS as f64;
        let cont: f64 = (0..PANELS)
            .map(|j| {
                adaptive_simpson(
                    &|t| self.theta_integrand(t) * self.x_of(t).powi(k),
                    j as f64 * h,
                    (j + 1) as f64 * h,
                    QUAD_TOL / PANELS as f64,
                )
            })
            .sum();
        if k == 0 {
            cont + self.atom
        } else {
            cont
        }
    }

    /// Continuous-part CDF, normalized to reach `1 - atom` exactly at the upper edge.
    fn continuous_cdf(&self, x: f64) -> f64 {
        if x <= self.lower {
            return 0.0;
        }
        if x >= self.upper {
            return 1.0 - self.atom;
        }
        let raw = self.raw_integral_to_theta(self.theta_of(x));
        (1.0 - self.atom) * (raw / self.continuous_mass()).clamp(0.0, 1.0)
    }

    /// Right-continuous CDF.
    pub fn cdf(&self, x: f64) -> f64 {
        if x >= self.upper {
            return 1.0;
        }
        let atom = if x >= 0.0 { self.atom } else { 0.0 };
        atom + self.continuous_cdf(x)
    }

    /// Left limit of the CDF.
    pub fn cdf_left(&self, x: f64) -> f64 {
        let atom = if x > 0.0 { self.atom } else { 0.0 };
        if x > self.upper {
            return 1.0;
        }
        atom + self.continuous_cdf(x)
    }

    /// Quantile of the continuous part at level `u` in `[0, 1]`, by bisection.
    fn continuous_quantile(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return self.lower;
        }
        if u >= 1.0 {
            return self.upper;
        }
        let target = u * self.continuous_mass();
        let k = self.cumulative.partition_point(|&c| c < target).clamp(1, PANELS);
        let h = FRAC_PI_2 / PANELS as f64;
        let (mut lo, mut hi) = ((k - 1) as f64 * h, k as f64 * h);
        let base = self.cumulative[k - 1];
        while self.x_of(hi) - self.x_of(lo) > INVERSE_TOL {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let val = base
                + adaptive_simpson(&|t| self.theta_integrand(t), (k - 1) as f64 * h, mid, QUAD_TOL / PANELS as f64);
            if val < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.x_of(0.5 * (lo + hi))
    }

    /// Left-continuous quantile, `u` in `[0, 1]`.
    pub fn quantile(&self, u: f64) -> f64 {
        if self.atom > 0.0 && u <= self.atom {
            return 0.0;
        }
        self.continuous_quantile((u - self.atom) / (1.0 - self.atom))
    }

    /// `count` i.i.d. draws: 0 with probability `atom`, otherwise inverse CDF
    /// of the continuous part.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<f64> {
        (0..count)
            .map(|_| {
                if self.atom > 0.0 && rng.random::<f64>() < self.atom {
                    0.0
                } else {
                    self.continuous_quantile(rng.random::<f64>())
                }
            })
            .collect()
    }
}

/// Location and mass of a point mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// The law of `shift + scale * S`, `S` Marchenko-Pastur.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitLaw {
    base: MarchenkoPastur,
    shift: f64,
    scale: f64,
}

impl LimitLaw {
    pub fn new(base: MarchenkoPastur, coeffs: AffineCoefficients) -> Result<Self> {
        if !(coeffs.shift.is_finite() && coeffs.scale.is_finite()) {
            return Err(Error::NonFinite("limit law coefficients".into()));
        }
        Ok(LimitLaw {
            base,
            shift: coeffs.shift,
            scale: coeffs.scale,
        })
    }

    /// The Marchenko-Pastur law itself.
    pub fn marchenko_pastur(y: f64) -> Result<Self> {
        Self::new(MarchenkoPastur::new(y)?, AffineCoefficients { shift: 0.0, scale: 1.0 })
    }

    /// Predicted limit of the Euclidean matrix spectrum for `kernel` at ratio `y`.
    pub fn for_kernel(kernel: &Kernel, y: f64) -> Result<Self> {
        Self::new(MarchenkoPastur::new(y)?, limit_coefficients(kernel))
    }

    pub fn base(&self) -> &MarchenkoPastur {
        &self.base
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn to_base(&self, x: f64) -> f64 {
        (x - self.shift) / self.scale
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if self.scale == 0.0 {
            return if x >= self.shift { 1.0 } else { 0.0 };
        }
        let s = self.to_base(x);
        if self.scale > 0.0 {
            self.base.cdf(s)
        } else {
            1.0 - self.base.cdf_left(s)
        }
    }

    pub fn cdf_left(&self, x: f64) -> f64 {
        if self.scale == 0.0 {
            return if x > self.shift { 1.0 } else { 0.0 };
        }
        let s = self.to_base(x);
        if self.scale > 0.0 {
            self.base.cdf_left(s)
        } else {
            1.0 - self.base.cdf(s)
        }
    }

    /// Density of the absolutely continuous part.
    pub fn density(&self, x: f64) -> f64 {
        if self.scale == 0.0 {
            return 0.0;
        }
        self.base.density(self.to_base(x)) / self.scale.abs()
    }

    pub fn atom(&self) -> Option<Atom> {
        if self.scale == 0.0 {
            Some(Atom { location: self.shift, mass: 1.0 })
        } else if self.base.atom_mass() > 0.0 {
            Some(Atom { location: self.shift, mass: self.base.atom_mass() })
        } else {
            None
        }
    }

    /// Image of the continuous support `[y-, y+]`, ordered.
    pub fn continuous_support(&self) -> Option<(f64, f64)> {
        if self.scale == 0.0 {
            return None;
        }
        let a = self.shift + self.scale * self.base.lower_edge();
        let b = self.shift + self.scale * self.base.upper_edge();
        Some((a.min(b), a.max(b)))
    }

    /// Smallest interval containing the continuous support and the atom.
    pub fn support(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        if let Some((a, b)) = self.continuous_support() {
            lo = a;
            hi = b;
        }
        if let Some(atom) = self.atom() {
            lo = lo.min(atom.location);
            hi = hi.max(atom.location);
        }
        (lo, hi)
    }

    /// Quantile function, `u` in `[0, 1]`.
    pub fn quantile(&self, u: f64) -> f64 {
        if self.scale == 0.0 {
            self.shift
        } else if self.scale > 0.0 {
            self.shift + self.scale * self.base.quantile(u)
        } else {
            self.shift + self.scale * self.base.quantile(1.0 - u)
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<f64> {
        self.base
            .sample(rng, count)
            .into_iter()
            .map(|s| self.shift + self.scale * s)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Streams;

    #[test]
    fn density_examples() {
        let mp = MarchenkoPastur::new(1.0).unwrap();
        assert!((mp.density(2.0) - 1.0 / (2.0 * PI)).abs() <= 1e-15);
        assert_eq!(mp.density(5.0), 0.0);
        let mp4 = MarchenkoPastur::new(4.0).unwrap();
        assert_eq!(mp4.density(mp4.lower_edge()), 0.0);
        assert_eq!(mp4.lower_edge(), 0.25);
        assert_eq!(mp4.upper_edge(), 2.25);
    }

    #[test]
    fn invalid_ratio_rejected() {
        for y in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(MarchenkoPastur::new(y).is_err());
        }
    }

    #[test]
    fn cdf_limits() {
        for y in [0.25, 1.0, 3.0] {
            let mp = MarchenkoPastur::new(y).unwrap();
            assert_eq!(mp.cdf(-0.1), 0.0);
            assert_eq!(mp.cdf(mp.lower_edge().min(0.0) - 1.0), 0.0);
            assert_eq!(mp.cdf(mp.upper_edge()), 1.0);
            assert_eq!(mp.cdf(mp.upper_edge() + 3.0), 1.0);
        }
    }

    #[test]
    fn cdf_matches_high_precision_quadrature() {
        // Reference values from an arbitrary-precision tanh-sinh integration
        // of the raw density.
        let cases = [
            (1.0, 1.0, 0.608_997_781_044_229_4),
            (0.5, 2.0, 0.788_002_107_551_934_3),
            (2.0, 1.0, 0.576_004_215_103_868_6),
            (4.0, 1.5, 0.808_772_871_964_914_1),
        ];
        for (y, x, want) in cases {
            let got = MarchenkoPastur::new(y).unwrap().cdf(x);
            assert!((got - want).abs() <= 1e-8, "y={y} x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn atom_bookkeeping() {
        let mp = MarchenkoPastur::new(0.5).unwrap();
        assert_eq!(mp.atom_mass(), 0.5);
        assert_eq!(mp.cdf(0.0), 0.5);
        assert_eq!(mp.cdf_left(0.0), 0.0);
        assert_eq!(mp.quantile(0.3), 0.0);
        assert!(mp.quantile(0.75) >= mp.lower_edge());
    }

    #[test]
    fn quantile_inverts_cdf() {
        let mp = MarchenkoPastur::new(2.0).unwrap();
        for u in [0.01, 0.2, 0.5, 0.9, 0.999] {
            let x = mp.quantile(u);
            assert!((mp.cdf(x) - u).abs() <= 1e-8, "u={u}");
        }
    }

    #[test]
    fn pushforward_support_and_degenerate_cases() {
        let law = LimitLaw::for_kernel(&Kernel::identity(), 1.0).unwrap();
        let (lo, hi) = law.support();
        assert!((lo + 8.0).abs() < 1e-15 && hi.abs() < 1e-15);
        let point = LimitLaw::for_kernel(&Kernel::constant(2.0), 1.0).unwrap();
        assert_eq!(point.atom(), Some(Atom { location: 0.0, mass: 1.0 }));
        assert_eq!(point.cdf(0.0), 1.0);
        assert_eq!(point.cdf_left(0.0), 0.0);
        let unit = LimitLaw::marchenko_pastur(0.7).unwrap();
        for x in [-1.0, 0.0, 0.3, 1.0, 2.5, 9.0] {
            assert_eq!(unit.cdf(x), unit.base().cdf(x));
        }
    }

    #[test]
    fn negative_scale_reflects() {
        let law = LimitLaw::for_kernel(&Kernel::identity(), 0.5).unwrap();
        // atom of mass 1/2 sits at the shift 0, the bulk lies to its left
        assert_eq!(law.cdf(0.0), 1.0);
        assert!((law.cdf_left(0.0) - 0.5).abs() < 1e-12);
        let mid = law.quantile(0.25);
        assert!((law.cdf(mid) - 0.25).abs() < 1e-8);
    }

    #[test]
    fn sampling_support_and_atom_fraction() {
        let mp = MarchenkoPastur::new(0.5).unwrap();
        let draws = mp.sample(&mut Streams::new(11).stream(0), 10_000);
        let zeros = draws.iter().filter(|&&v| v == 0.0).count() as f64 / 10_000.0;
        let se = (0.25f64 / 10_000.0).sqrt();
        assert!((zeros - 0.5).abs() <= 5.0 * se, "zero fraction {zeros}");
        assert!(draws
            .iter()
            .all(|&v| v == 0.0 || (mp.lower_edge()..=mp.upper_edge()).contains(&v)));
    }
}
