//! Monte Carlo checks of the probabilistic inputs: thin-shell tails of
//! `||Y||`, second moments of inner products, the norm moment condition, and
//! concentration of linear spectral statistics around their mean.
//!
//! Every trial uses its own stream derived from the master seed and the trial
//! index, so estimates do not depend on thread scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::builders::build_euclidean;
use crate::data::dot;
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::rng::Streams;
use crate::sampling::{sample_data_matrix, sample_vector, VectorFamily};
use crate::spectral::SpectralDistribution;

/// Normal quantile for 95% Wilson intervals.
pub const WILSON_Z: f64 = 1.96;

/// Allowed excess of an empirical frequency over its envelope, in Wilson
/// half-widths.
pub const ENVELOPE_SLACK_HALFWIDTHS: f64 = 3.0;

/// Wilson score interval for `successes` out of `trials`: `(center, half_width)`.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    (center, half)
}

fn check_trials(trials: usize, min: usize) -> Result<()> {
    if trials < min {
        return Err(Error::InvalidConfig(format!(
            "at least {min} trials are required, got {trials}"
        )));
    }
    Ok(())
}

/// Least-squares fit of `ln P = ln c1 - c0 u` with `u = sqrt(p) (t ^ t^3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub c0: f64,
    pub c1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub dim: usize,
    pub thresholds: Vec<f64>,
    /// Empirical `P(| ||Y|| - 1 | >= t)`.
    pub empirical_prob: Vec<f64>,
    pub wilson_halfwidth: Vec<f64>,
    pub trials: usize,
    pub fit: Option<DecayFit>,
}

pub fn thin_shell_tail(
    family: &VectorFamily,
    thresholds: &[f64],
    trials: usize,
    streams: &Streams,
) -> Result<TailEstimate> {
    check_trials(trials, 100)?;
    if thresholds.iter().any(|t| t.is_nan() || *t < 0.0) {
        return Err(Error::InvalidConfig("thresholds must be >= 0".into()));
    }
    let devs: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let y = sample_vector(family, &mut streams.stream(t as u64));
            (dot(&y, &y).sqrt() - 1.0).abs()
        })
        .collect();
    let mut empirical_prob = Vec::with_capacity(thresholds.len());
    let mut wilson_halfwidth = Vec::with_capacity(thresholds.len());
    for &t in thresholds {
        let hits = devs.iter().filter(|&&d| d >= t).count();
        empirical_prob.push(hits as f64 / trials as f64);
        wilson_halfwidth.push(wilson_interval(hits, trials).1);
    }
    let sqrt_p = (family.dim() as f64).sqrt();
    let points: Vec<(f64, f64)> = thresholds
        .iter()
        .zip(&empirical_prob)
        .filter(|(_, &pr)| pr > 0.0)
        .map(|(&t, &pr)| (sqrt_p * t.min(t * t * t), pr.ln()))
        .collect();
    Ok(TailEstimate {
        dim: family.dim(),
        thresholds: thresholds.to_vec(),
        empirical_prob,
        wilson_halfwidth,
        trials,
        fit: fit_line(&points).map(|(intercept, slope)| DecayFit {
            c0: -slope,
            c1: intercept.exp(),
        }),
    })
}

/// Ordinary least squares `y = a + b x`; `None` without two distinct `x`.
fn fit_line(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((my - slope * mx, slope))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: usize,
}

impl MomentEstimate {
    fn from_samples(samples: &[f64], factor: f64) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = if samples.len() > 1 {
            samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        MomentEstimate {
            value: factor * mean,
            std_error: factor * (var / n).sqrt(),
            trials: samples.len(),
        }
    }

    /// `|value - target| <= k * std_error`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.std_error
    }
}

/// Estimate of `E (X_1^T X_2)^2`, which equals `1/p` for isotropic vectors.
pub fn inner_product_moment(
    family: &VectorFamily,
    trials: usize,
    streams: &Streams,
) -> Result<MomentEstimate> {
    check_trials(trials, 100)?;
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = streams.stream(t as u64);
            let a = sample_vector(family, &mut rng);
            let b = sample_vector(family, &mut rng);
            let w = dot(&a, &b);
            w * w
        })
        .collect();
    Ok(MomentEstimate::from_samples(&samples, 1.0))
}

/// Estimate of `p * E | ||Y|| - 1 |^(2 ell)`.
pub fn norm_moment_condition(
    family: &VectorFamily,
    ell: u32,
    trials: usize,
    streams: &Streams,
) -> Result<MomentEstimate> {
    check_trials(trials, 100)?;
    if ell == 0 {
        return Err(Error::InvalidConfig("moment order ell must be >= 1".into()));
    }
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let y = sample_vector(family, &mut streams.stream(t as u64));
            (dot(&y, &y).sqrt() - 1.0).abs().powi(2 * ell as i32)
        })
        .collect();
    Ok(MomentEstimate::from_samples(&samples, family.dim() as f64))
}

/// A scalar test function with its bounded-variation norm.
#[derive(Clone)]
pub struct TestFunction {
    pub name: String,
    f: std::sync::Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub bv_norm: f64,
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("bv_norm", &self.bv_norm)
            .finish()
    }
}

impl TestFunction {
    pub fn new(name: &str, f: impl Fn(f64) -> f64 + Send + Sync + 'static, bv_norm: f64) -> Self {
        TestFunction { name: name.into(), f: std::sync::Arc::new(f), bv_norm }
    }

    /// `arctan`, total variation `pi`.
    pub fn arctan() -> Self {
        Self::new("arctan", f64::atan, std::f64::consts::PI)
    }

    pub fn constant(c: f64) -> Self {
        Self::new("constant", move |_| c, 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }
}

/// The matrix ensemble whose linear statistics are measured.
#[derive(Debug, Clone)]
pub struct StatisticSetup {
    pub family: VectorFamily,
    pub kernel: Kernel,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeRow {
    pub t: f64,
    /// Fraction of trials with `int f dmu_A - mean >= t`.
    pub exceedance: f64,
    pub wilson_halfwidth: f64,
    /// `exp(-n t^2 / (8 ||f||_BV^2))`.
    pub envelope: f64,
    /// Exceedance above the envelope by more than the allowed slack.
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub n: usize,
    pub p: usize,
    pub trials: usize,
    pub bv_norm: f64,
    /// Monte Carlo mean of the statistic.
    pub mean: f64,
    /// One value of `int f dmu_A` per trial.
    pub statistics: Vec<f64>,
    pub rows: Vec<EnvelopeRow>,
}

impl ConcentrationReport {
    pub fn any_violation(&self) -> bool {
        self.rows.iter().any(|r| r.violated)
    }
}

/// Bound on `P(int f dmu_A - E int f dmu_A >= t)`.
pub fn azuma_envelope(n: usize, t: f64, bv_norm: f64) -> f64 {
    if bv_norm == 0.0 {
        return if t > 0.0 { 0.0 } else { 1.0 };
    }
    (-(n as f64) * t * t / (8.0 * bv_norm * bv_norm)).exp()
}

pub fn statistic_concentration(
    setup: &StatisticSetup,
    test_fn: &TestFunction,
    thresholds: &[f64],
    trials: usize,
    streams: &Streams,
) -> Result<ConcentrationReport> {
    check_trials(trials, 200)?;
    if test_fn.bv_norm.is_nan() || test_fn.bv_norm < 0.0 {
        return Err(Error::InvalidConfig("BV norm must be >= 0".into()));
    }
    let statistics: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<f64> {
            let mut rng = streams.stream(t as u64);
            let x = sample_data_matrix(&setup.family, setup.n, &mut rng)?;
            let a = build_euclidean(&x, &setup.kernel)?;
            let esd = SpectralDistribution::of_matrix(&a)?;
            Ok(esd.integrate(|v| test_fn.eval(v)))
        })
        .collect::<Result<_>>()?;
    let mean = statistics.iter().sum::<f64>() / trials as f64;
    let rows = thresholds
        .iter()
        .map(|&t| {
            let hits = statistics.iter().filter(|&&s| s - mean >= t).count();
            let exceedance = hits as f64 / trials as f64;
            let (_, half) = wilson_interval(hits, trials);
            let envelope = azuma_envelope(setup.n, t, test_fn.bv_norm);
            EnvelopeRow {
                t,
                exceedance,
                wilson_halfwidth: half,
                envelope,
                violated: exceedance - envelope > ENVELOPE_SLACK_HALFWIDTHS * half,
            }
        })
        .collect();
    Ok(ConcentrationReport {
        n: setup.n,
        p: setup.family.dim(),
        trials,
        bv_norm: test_fn.bv_norm,
        mean,
        statistics,
        rows,
    })
}
