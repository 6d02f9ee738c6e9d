use std::path::Path;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::histogram::emit_histogram;
use super::report::*;
use crate::builders::{build_euclidean, build_gram, build_linearized, build_proof_chain, check_event};
use crate::data::DataMatrix;
use crate::eigen::eigenvalues_symmetric;
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::limit::LimitLaw;
use crate::matrix::SymmetricMatrix;
use crate::metrics::{
    distance_report, distance_to_law, hw_check, rank_check, wasserstein,
    InequalityCheck, LawGrid, LAW_GRID_POINTS,
};
use crate::rng::Streams;
use crate::sampling::sample_data_matrix_capped;
use crate::spectral::{rank_of_spectrum, SpectralDistribution};

/// Everything a trial needs besides its data.
pub(crate) struct TrialContext {
    pub kernel: Kernel,
    pub law: LimitLaw,
    pub law_grid: LawGrid,
    pub mp: LimitLaw,
    pub mp_grid: LawGrid,
    pub epsilon: f64,
    pub proof_chain: bool,
    pub inequality_checks: bool,
}

impl TrialContext {
    pub fn new(kernel: Kernel, ratio: f64, epsilon: f64, proof_chain: bool, inequality_checks: bool) -> Result<Self> {
        let law = LimitLaw::for_kernel(&kernel, ratio)?;
        let mp = LimitLaw::marchenko_pastur(ratio)?;
        Ok(TrialContext {
            law_grid: LawGrid::new(&law, LAW_GRID_POINTS)?,
            mp_grid: LawGrid::new(&mp, LAW_GRID_POINTS)?,
            kernel,
            law,
            mp,
            epsilon,
            proof_chain,
            inequality_checks,
        })
    }

    pub fn law_summary(&self) -> LawSummary {
        LawSummary {
            ratio: self.law.base().ratio(),
            shift: self.law.shift(),
            scale: self.law.scale(),
            atom: self.law.atom(),
            support: self.law.support(),
        }
    }
}

struct Spectrum<'a> {
    label: &'static str,
    matrix: &'a SymmetricMatrix,
    eigs: Vec<f64>,
}

fn pair_check(x: &Spectrum, y: &Spectrum) -> Result<PairCheck> {
    let diff = x.matrix.difference(y.matrix)?;
    let pair = format!("{}-{}", x.label, y.label);
    let rank = rank_check(&x.eigs, &y.eigs, &diff)?;
    let hw = hw_check(&x.eigs, &y.eigs, &diff)?;
    for (check, result) in [("rank", rank), ("hoffman-wielandt", hw)] {
        if !result.holds {
            return Err(Error::InequalityViolation { check, pair, lhs: result.lhs, rhs: result.rhs });
        }
    }
    Ok(PairCheck { pair, rank, hw })
}

fn raw_w2(a: &[f64], b: &[f64]) -> Result<f64> {
    Ok(wasserstein(
        &SpectralDistribution::new(a.to_vec())?,
        &SpectralDistribution::new(b.to_vec())?,
        2,
    ))
}

/// All per-trial measurements for one data matrix.
pub(crate) fn evaluate_trial(x: &DataMatrix, ctx: &TrialContext) -> Result<TrialOutcome> {
    let n = x.count();
    let a = build_euclidean(x, &ctx.kernel)?;
    let m = build_linearized(x, &ctx.kernel);
    let gram = build_gram(x);
    let spec_a = Spectrum { label: "A", matrix: &a, eigs: eigenvalues_symmetric(&a)? };
    let spec_m = Spectrum { label: "M", matrix: &m, eigs: eigenvalues_symmetric(&m)? };
    let gram_eigs = eigenvalues_symmetric(&gram)?;

    let mu_a = SpectralDistribution::from_eigenvalues(spec_a.eigs.clone());
    let mu_m = SpectralDistribution::from_eigenvalues(spec_m.eigs.clone());
    let mu_gram = SpectralDistribution::from_eigenvalues(gram_eigs);

    let a_minus_m = a.difference(&m)?;
    let mut checks = Vec::new();
    if ctx.inequality_checks {
        checks.push(pair_check(&spec_a, &spec_m)?);
    }

    let chain = if ctx.proof_chain {
        let pc = build_proof_chain(x, &ctx.kernel)?;
        let mut seq = vec![&spec_a];
        let owned: Vec<Spectrum> = [("B", pc.b.as_ref()), ("C", Some(&pc.c)), ("D", Some(&pc.d)), ("E", Some(&pc.e))]
            .into_iter()
            .filter_map(|(label, mat)| mat.map(|matrix| (label, matrix)))
            .map(|(label, matrix)| Ok(Spectrum { label, matrix, eigs: eigenvalues_symmetric(matrix)? }))
            .collect::<Result<_>>()?;
        seq.extend(owned.iter());
        seq.push(&spec_m);

        let mut links = Vec::with_capacity(seq.len() - 1);
        for w in seq.windows(2) {
            links.push(ChainLink {
                from: w[0].label.into(),
                to: w[1].label.into(),
                w2: raw_w2(&w[0].eigs, &w[1].eigs)?,
            });
            if ctx.inequality_checks {
                checks.push(pair_check(w[0], w[1])?);
            }
        }
        let lhs = raw_w2(&spec_a.eigs, &spec_m.eigs)?;
        let triangle = InequalityCheck {
            lhs,
            rhs: links.iter().map(|l| l.w2).sum(),
            holds: lhs <= links.iter().map(|l| l.w2).sum::<f64>() + crate::metrics::INEQUALITY_SLACK,
        };
        if !triangle.holds {
            return Err(Error::InequalityViolation {
                check: "triangle",
                pair: "A-M".into(),
                lhs: triangle.lhs,
                rhs: triangle.rhs,
            });
        }
        let e_minus_m = pc.e.difference(&m)?;
        let e_minus_m_rank = rank_of_spectrum(&eigenvalues_symmetric(&e_minus_m)?);
        Some(ChainReport { links, triangle, e_minus_m_rank })
    } else {
        None
    };

    Ok(TrialOutcome {
        a_vs_law: distance_to_law(&mu_a, &ctx.law, &ctx.law_grid),
        a_vs_m: distance_report(&mu_a, &mu_m),
        gram_vs_mp: distance_to_law(&mu_gram, &ctx.mp, &ctx.mp_grid),
        a_m_frobenius: (a_minus_m.frobenius_sq() / n as f64).sqrt(),
        event: check_event(x, ctx.epsilon)?,
        chain,
        checks,
        eigenvalues: mu_a.values().to_vec(),
        m_eigenvalues: mu_m.values().to_vec(),
        gram_eigenvalues: mu_gram.values().to_vec(),
    })
}

/// Errors that abort a sweep instead of being recorded against a trial.
fn is_fatal(e: &Error) -> bool {
    matches!(e, Error::InequalityViolation { .. } | Error::Capacity { .. } | Error::InvalidConfig(_))
}

pub(crate) fn trial_report(trial: usize, result: Result<TrialOutcome>) -> Result<TrialReport> {
    match result {
        Ok(outcome) => Ok(TrialReport { trial, error: None, outcome: Some(outcome) }),
        Err(e) if is_fatal(&e) => Err(e),
        Err(e) => Ok(TrialReport { trial, error: Some(e.to_string()), outcome: None }),
    }
}

fn pooled(outcomes: &[&TrialOutcome], pick: fn(&TrialOutcome) -> &Vec<f64>) -> Result<SpectralDistribution> {
    SpectralDistribution::new(outcomes.iter().flat_map(|o| pick(o).iter().copied()).collect())
}

/// Aggregates trials at one sweep point.
pub(crate) fn size_report(
    n: usize,
    p: usize,
    target_ratio: f64,
    ctx: &TrialContext,
    trials: Vec<TrialReport>,
    bins: usize,
) -> Result<SizeReport> {
    let outcomes: Vec<&TrialOutcome> = trials.iter().filter_map(|t| t.outcome.as_ref()).collect();
    let (averaged, histogram) = if outcomes.is_empty() {
        (None, Default::default())
    } else {
        let pa = pooled(&outcomes, |o| &o.eigenvalues)?;
        let pm = pooled(&outcomes, |o| &o.m_eigenvalues)?;
        let pg = pooled(&outcomes, |o| &o.gram_eigenvalues)?;
        let averaged = AveragedDistances {
            trials: outcomes.len(),
            a_vs_law: distance_to_law(&pa, &ctx.law, &ctx.law_grid),
            a_vs_m: distance_report(&pa, &pm),
            gram_vs_mp: distance_to_law(&pg, &ctx.mp, &ctx.mp_grid),
        };
        (Some(averaged), emit_histogram(&pa, &ctx.law, bins)?)
    };
    Ok(SizeReport {
        n,
        p,
        target_ratio,
        realized_ratio: p as f64 / n as f64,
        epsilon: ctx.epsilon,
        law: ctx.law_summary(),
        failed_trials: trials.len() - outcomes.len(),
        medians: Medians::of(&outcomes),
        averaged,
        trials,
        histogram,
    })
}

/// Runs the sweep described by `config`. Files are written when
/// `config.output_dir` is set.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let kernel = Kernel::from_spec(&config.kernel)?;
    let streams = Streams::new(config.seed);
    let mut runs = Vec::with_capacity(config.n_list.len());
    for &n in &config.n_list {
        let p = config.dim_for(n);
        let family = config.family.in_dim(p)?;
        let ctx = TrialContext::new(
            kernel.clone(),
            p as f64 / n as f64,
            config.epsilon_for(n),
            config.proof_chain,
            config.inequality_checks,
        )?;
        let trials = (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let result = sample_data_matrix_capped(&family, n, &mut streams.trial(n, t), config.max_entries)
                    .and_then(|x| evaluate_trial(&x, &ctx));
                trial_report(t, result)
            })
            .collect::<Result<Vec<_>>>()?;
        runs.push(size_report(n, p, config.ratio, &ctx, trials, config.histogram_bins)?);
    }
    let mut stored = config.clone();
    stored.output_dir = None;
    let report = ExperimentReport {
        schema_version: SCHEMA_VERSION,
        crate_version: env!("CARGO_PKG_VERSION").into(),
        source: "simulation".into(),
        config: Some(stored),
        dataset: None,
        warnings: Vec::new(),
        runs,
    };
    if let Some(dir) = &config.output_dir {
        write_report_files(&report, dir)?;
    }
    Ok(report)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Output { path: path.to_path_buf(), source })
}

/// Writes `report.json`, plus `eigenvalues_n<N>.csv` (one row of sorted
/// eigenvalues of `A` per trial) and `histogram_n<N>.tsv` per sweep point.
pub fn write_report_files(report: &ExperimentReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Output { path: dir.to_path_buf(), source })?;
    let mut json = serde_json::to_string_pretty(report)?;
    json.push('\n');
    write_file(&dir.join("report.json"), &json)?;
    for run in &report.runs {
        let mut csv = String::from("trial");
        (1..=run.n).for_each(|k| csv.push_str(&format!(",lambda_{k}")));
        csv.push('\n');
        for t in &run.trials {
            if let Some(o) = &t.outcome {
                csv.push_str(&t.trial.to_string());
                o.eigenvalues.iter().for_each(|v| csv.push_str(&format!(",{v:.16e}")));
                csv.push('\n');
            }
        }
        write_file(&dir.join(format!("eigenvalues_n{}.csv", run.n)), &csv)?;
        write_file(&dir.join(format!("histogram_n{}.tsv", run.n)), &run.histogram.to_tsv())?;
    }
    Ok(())
}
