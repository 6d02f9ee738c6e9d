//! Runs a small convergence sweep and prints the median distances per `n`.
//!
//! ```text
//! cargo run --release --example convergence_sweep
//! ```

use std::time::Instant;

use euclid_spectra::harness::{run_experiment, ExperimentConfig};
use euclid_spectra::{FamilyKind, KernelSpec};

fn main() -> euclid_spectra::Result<()> {
    let mut config = ExperimentConfig::new(FamilyKind::Gaussian, KernelSpec::Exponential, vec![250, 500, 1000], 0.5);
    config.trials = 5;
    config.seed = 2024;
    config.proof_chain = false;

    let start = Instant::now();
    let report = run_experiment(&config)?;
    for run in &report.runs {
        for t in run.trials.iter().filter(|t| t.error.is_some()) {
            eprintln!("n={} trial {} failed: {}", run.n, t.trial, t.error.as_deref().unwrap_or_default());
        }
    }
    println!("{:>6} {:>6} {:>10} {:>10} {:>10} {:>10}", "n", "p", "ks(A,law)", "w1(A,law)", "w2(A,M)", "ks(pool)");
    for run in &report.runs {
        let med = run.medians.as_ref().expect("at least one trial succeeded");
        let avg = run.averaged.as_ref().expect("at least one trial succeeded");
        println!(
            "{:>6} {:>6} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            run.n, run.p, med.a_vs_law.ks, med.a_vs_law.w1, med.a_vs_m.w2, avg.a_vs_law.ks
        );
    }
    println!("elapsed: {:.1?}", start.elapsed());
    Ok(())
}
