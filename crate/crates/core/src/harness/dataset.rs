use std::path::Path;

use serde::{Deserialize, Serialize};

use super::experiment::{evaluate_trial, size_report, trial_report, write_report_files, TrialContext};
use super::report::{DatasetInfo, ExperimentReport, SCHEMA_VERSION};
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::kernel::{Kernel, KernelSpec};

/// Options for [`analyze_dataset`]; also loadable from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeOptions {
    pub kernel: KernelSpec,
    /// Subtract the mean observation.
    #[serde(default)]
    pub center: bool,
    /// Divide coordinate `k` by `sqrt(p * var_k)`.
    #[serde(default)]
    pub rescale: bool,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default = "yes")]
    pub proof_chain: bool,
    #[serde(default = "yes")]
    pub inequality_checks: bool,
    #[serde(default = "default_bins")]
    pub histogram_bins: usize,
    #[serde(default)]
    pub output_dir: Option<std::path::PathBuf>,
    #[serde(default = "default_max_n")]
    pub max_n: usize,
}

fn default_max_n() -> usize {
    super::config::DEFAULT_MAX_N
}

fn yes() -> bool {
    true
}

fn default_bins() -> usize {
    60
}

impl AnalyzeOptions {
    pub fn new(kernel: KernelSpec) -> Self {
        AnalyzeOptions {
            kernel,
            center: false,
            rescale: false,
            epsilon: None,
            proof_chain: true,
            inequality_checks: true,
            histogram_bins: default_bins(),
            output_dir: None,
            max_n: default_max_n(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }
}

/// Parses comma-separated rows of numbers, one observation per row. Blank
/// lines and lines starting with `#` are skipped.
pub fn parse_dataset(text: &str) -> Result<DataMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Dataset { line: idx + 1, message };
        let row = line
            .split(',')
            .enumerate()
            .map(|(col, cell)| match cell.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                Ok(v) => Err(err(format!("column {}: non-finite value {v}", col + 1))),
                Err(_) => Err(err(format!("column {}: not a number: {:?}", col + 1, cell.trim()))),
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(err(format!("expected {} columns, found {}", first.len(), row.len())));
            }
        }
        rows.push(row);
    }
    if rows.len() < 2 {
        return Err(Error::Dataset {
            line: 0,
            message: format!("need at least 2 observations, found {}", rows.len()),
        });
    }
    DataMatrix::from_columns(&rows)
}

pub fn read_dataset(path: &Path) -> Result<DataMatrix> {
    parse_dataset(&std::fs::read_to_string(path)?)
}

/// Writes one observation per line with bit-faithful floats.
pub fn write_dataset(x: &DataMatrix, path: &Path) -> Result<()> {
    let mut out = String::new();
    for col in x.columns() {
        let cells: Vec<String> = col.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|source| Error::Output { path: path.to_path_buf(), source })
}

/// Optional centering and rescaling to empirical isotropy. Returns the
/// transformed data and warnings for coordinates that could not be scaled.
pub fn standardize(x: &DataMatrix, center: bool, rescale: bool) -> (DataMatrix, Vec<String>) {
    let (p, n) = (x.dim(), x.count());
    let mut out = x.clone();
    let mut warnings = Vec::new();
    for k in 0..p {
        let mean = x.columns().map(|c| c[k]).sum::<f64>() / n as f64;
        let var = x.columns().map(|c| (c[k] - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let scale = if rescale && var > 0.0 {
            (p as f64 * var).sqrt()
        } else {
            if rescale {
                warnings.push(format!("coordinate {} has zero variance and was not rescaled", k + 1));
            }
            1.0
        };
        let offset = if center { mean } else { 0.0 };
        for i in 0..n {
            let v = &mut out.column_mut(i)[k];
            *v = (*v - offset) / scale;
        }
    }
    (out, warnings)
}

/// Compares the spectrum of the Euclidean matrix of a dataset with the
/// predicted limit at `y = p / n`, as a one-trial report.
pub fn analyze_dataset(path: &Path, options: &AnalyzeOptions) -> Result<ExperimentReport> {
    let raw = read_dataset(path)?;
    let mut report = analyze_matrix(&raw, options)?;
    report.dataset.as_mut().expect("dataset info").path = path.display().to_string();
    if let Some(dir) = &options.output_dir {
        write_report_files(&report, dir)?;
    }
    Ok(report)
}

/// [`analyze_dataset`] on data already in memory.
pub fn analyze_matrix(raw: &DataMatrix, options: &AnalyzeOptions) -> Result<ExperimentReport> {
    let (n, p) = (raw.count(), raw.dim());
    if n < 2 {
        return Err(Error::Dataset { line: 0, message: format!("need at least 2 observations, found {n}") });
    }
    if n > options.max_n {
        return Err(Error::Capacity { requested: n, cap: options.max_n });
    }
    let kernel = Kernel::from_spec(&options.kernel)?;
    if options.proof_chain {
        crate::kernel::taylor_coefficients(&kernel)?;
    }
    let (x, warnings) = standardize(raw, options.center, options.rescale);
    let ratio = p as f64 / n as f64;
    let epsilon = options.epsilon.unwrap_or_else(|| crate::builders::default_epsilon(n));
    let ctx = TrialContext::new(kernel, ratio, epsilon, options.proof_chain, options.inequality_checks)?;
    let trial = trial_report(0, evaluate_trial(&x, &ctx))?;
    let run = size_report(n, p, ratio, &ctx, vec![trial], options.histogram_bins)?;
    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        crate_version: env!("CARGO_PKG_VERSION").into(),
        source: "dataset".into(),
        config: None,
        dataset: Some(DatasetInfo {
            path: String::new(),
            kernel: options.kernel.clone(),
            centered: options.center,
            rescaled: options.rescale,
        }),
        warnings,
        runs: vec![run],
    })
}
