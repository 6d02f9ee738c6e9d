use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::histogram::Histogram;
use crate::builders::EventEResult;
use crate::limit::Atom;
use crate::metrics::{DistanceReport, InequalityCheck};

/// Bumped whenever a field is added, removed or renamed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub crate_version: String,
    /// `"simulation"` or `"dataset"`.
    pub source: String,
    pub config: Option<ExperimentConfig>,
    pub dataset: Option<DatasetInfo>,
    pub warnings: Vec<String>,
    pub runs: Vec<SizeReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub path: String,
    pub kernel: crate::kernel::KernelSpec,
    pub centered: bool,
    pub rescaled: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LawSummary {
    /// Realized `p / n`.
    pub ratio: f64,
    pub shift: f64,
    pub scale: f64,
    pub atom: Option<Atom>,
    pub support: (f64, f64),
}

/// All trials at one sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeReport {
    pub n: usize,
    pub p: usize,
    /// `p / n` requested by the config; equals `realized_ratio` for datasets.
    pub target_ratio: f64,
    pub realized_ratio: f64,
    pub epsilon: f64,
    pub law: LawSummary,
    pub trials: Vec<TrialReport>,
    pub failed_trials: usize,
    /// Medians over successful trials of single-realization distances.
    pub medians: Option<Medians>,
    /// Distances between spectra pooled over all successful trials, an
    /// estimate of the distance between expected spectral distributions.
    pub averaged: Option<AveragedDistances>,
    #[serde(skip)]
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial: usize,
    pub error: Option<String>,
    pub outcome: Option<TrialOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub a_vs_law: DistanceReport,
    pub a_vs_m: DistanceReport,
    pub gram_vs_mp: DistanceReport,
    /// `sqrt(tr (A - M)^2 / n)`
    pub a_m_frobenius: f64,
    pub event: EventEResult,
    pub chain: Option<ChainReport>,
    pub checks: Vec<PairCheck>,
    /// Sorted eigenvalues of `A`.
    #[serde(skip)]
    pub eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub m_eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub gram_eigenvalues: Vec<f64>,
}

/// `W_2` between consecutive matrices of `A, B, C, D, E, M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub links: Vec<ChainLink>,
    /// `W_2(A, M) <= sum of link distances`.
    pub triangle: InequalityCheck,
    /// Numerical rank of `E - M`.
    pub e_minus_m_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLink {
    pub from: String,
    pub to: String,
    pub w2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCheck {
    pub pair: String,
    pub rank: InequalityCheck,
    pub hw: InequalityCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Medians {
    pub a_vs_law: DistanceReport,
    pub a_vs_m: DistanceReport,
    pub gram_vs_mp: DistanceReport,
    pub chain_w2: Vec<ChainLink>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AveragedDistances {
    pub trials: usize,
    pub a_vs_law: DistanceReport,
    pub a_vs_m: DistanceReport,
    pub gram_vs_mp: DistanceReport,
}

pub(crate) fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    }
}

fn median_report(reports: &[&DistanceReport]) -> DistanceReport {
    let pick = |f: fn(&DistanceReport) -> f64| median(&mut reports.iter().map(|r| f(r)).collect::<Vec<_>>());
    DistanceReport {
        ks: pick(|r| r.ks),
        w1: pick(|r| r.w1),
        w2: pick(|r| r.w2),
        d_upper: pick(|r| r.d_upper),
    }
}

impl Medians {
    pub(crate) fn of(outcomes: &[&TrialOutcome]) -> Option<Medians> {
        if outcomes.is_empty() {
            return None;
        }
        let field = |f: fn(&TrialOutcome) -> &DistanceReport| {
            median_report(&outcomes.iter().map(|o| f(o)).collect::<Vec<_>>())
        };
        let chain_w2 = match outcomes[0].chain.as_ref() {
            Some(first) => (0..first.links.len())
                .map(|k| ChainLink {
                    from: first.links[k].from.clone(),
                    to: first.links[k].to.clone(),
                    w2: median(
                        &mut outcomes
                            .iter()
                            .filter_map(|o| o.chain.as_ref().map(|c| c.links[k].w2))
                            .collect::<Vec<_>>(),
                    ),
                })
                .collect(),
            None => Vec::new(),
        };
        Some(Medians {
            a_vs_law: field(|o| &o.a_vs_law),
            a_vs_m: field(|o| &o.a_vs_m),
            gram_vs_mp: field(|o| &o.gram_vs_mp),
            chain_w2,
        })
    }
}

impl SizeReport {
    pub fn outcomes(&self) -> impl Iterator<Item = &TrialOutcome> + '_ {
        self.trials.iter().filter_map(|t| t.outcome.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn medians() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 3.0, 2.0]), 2.5);
    }
}
