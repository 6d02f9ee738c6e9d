//! Experiment runner: configuration, convergence sweeps, dataset analysis
//! and report files.

mod config;
mod dataset;
mod experiment;
mod histogram;
mod report;

pub use config::{ExperimentConfig, DEFAULT_MAX_N};
pub use dataset::{analyze_dataset, analyze_matrix, parse_dataset, read_dataset, standardize, write_dataset, AnalyzeOptions};
pub use experiment::{run_experiment, write_report_files};
pub use histogram::{emit_histogram, Histogram, HistogramBin, Outlier};
pub use report::*;
