use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use euclid_spectra::concentration::{
    inner_product_moment, norm_moment_condition, statistic_concentration, thin_shell_tail,
    StatisticSetup, TestFunction,
};
use euclid_spectra::harness::{
    analyze_dataset, run_experiment, AnalyzeOptions, ExperimentConfig, ExperimentReport,
};
use euclid_spectra::{Error, FamilyKind, Kernel, KernelSpec, LimitLaw, Result, Streams};

/// Spectra of Euclidean random matrices.
#[derive(Parser)]
#[command(name = "ermt", version)]
struct Cli {
    /// TOML configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed, overrides the configuration
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (simulate, analyze) or file (mp, check)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a convergence sweep described by --config
    Simulate,
    /// Compare a CSV dataset (one observation per row) with the predicted law
    Analyze {
        data: PathBuf,
        /// Kernel, e.g. `exponential`, `constant:2`, `poly:1,0,-1`
        #[arg(long)]
        kernel: Option<KernelSpec>,
        #[arg(long)]
        center: bool,
        #[arg(long)]
        rescale: bool,
        /// Skip the interpolating matrices B, C, D, E
        #[arg(long)]
        no_chain: bool,
    },
    /// Tabulate the predicted law
    Mp {
        /// Ratio p / n
        #[arg(long)]
        ratio: Option<f64>,
        /// Kernel whose limit law to tabulate; plain Marchenko-Pastur if absent
        #[arg(long)]
        kernel: Option<KernelSpec>,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Table::Density)]
        table: Table,
    },
    /// Monte Carlo checks of the probabilistic ingredients
    Check {
        #[arg(value_enum)]
        what: CheckKind,
        #[arg(long)]
        family: Option<FamilyKind>,
        /// Vector dimension p
        #[arg(long)]
        dim: Option<usize>,
        /// Number of vectors for `concentration`
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        kernel: Option<KernelSpec>,
        #[arg(long)]
        trials: Option<usize>,
        /// Comma-separated thresholds
        #[arg(long, value_delimiter = ',')]
        thresholds: Option<Vec<f64>>,
        /// Moment order for `norm-moment`
        #[arg(long, default_value_t = 1)]
        ell: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    Density,
    Quantile,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Tail,
    Moment,
    NormMoment,
    Concentration,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let message = e.to_string();
            eprintln!("{}", serde_json::json!({ "error": "usage", "message": message.trim_end() }));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    }
    let load_config = || cli.config.as_deref().map(ExperimentConfig::load).transpose();
    match cli.command {
        Command::Simulate => {
            let path = cli.config.as_deref().ok_or_else(|| Error::InvalidConfig("simulate needs --config".into()))?;
            let mut config = ExperimentConfig::load(path)?;
            if let Some(seed) = cli.seed {
                config.seed = seed;
            }
            if let Some(out) = cli.out {
                config.output_dir = Some(out);
            }
            let report = run_experiment(&config)?;
            finish_report(&report, config.output_dir.as_deref())
        }
        Command::Analyze { data, kernel, center, rescale, no_chain } => {
            let mut options = match &cli.config {
                Some(path) => AnalyzeOptions::from_toml_str(&std::fs::read_to_string(path)?)?,
                None => AnalyzeOptions::new(KernelSpec::Exponential),
            };
            if let Some(k) = kernel {
                options.kernel = k;
            }
            options.center |= center;
            options.rescale |= rescale;
            options.proof_chain &= !no_chain;
            if let Some(out) = cli.out {
                options.output_dir = Some(out);
            }
            let report = analyze_dataset(&data, &options)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            finish_report(&report, options.output_dir.as_deref())
        }
        Command::Mp { ratio, kernel, points, table } => {
            let config = load_config()?;
            let ratio = ratio
                .or(config.as_ref().map(|c| c.ratio))
                .ok_or_else(|| Error::InvalidConfig("mp needs --ratio or --config".into()))?;
            let kernel = kernel.or(config.map(|c| c.kernel));
            let law = match &kernel {
                Some(spec) => LimitLaw::for_kernel(&Kernel::from_spec(spec)?, ratio)?,
                None => LimitLaw::marchenko_pastur(ratio)?,
            };
            if points < 2 {
                return Err(Error::InvalidConfig("--points must be at least 2".into()));
            }
            emit(cli.out.as_deref(), &mp_table(&law, points, table))
        }
        Command::Check { what, family, dim, n, kernel, trials, thresholds, ell } => {
            let config = load_config()?;
            let seed = cli.seed.or(config.as_ref().map(|c| c.seed)).unwrap_or(0);
            let streams = Streams::new(seed);
            let kind = family.or(config.as_ref().map(|c| c.family)).unwrap_or(FamilyKind::Gaussian);
            let n = n.or(config.as_ref().map(|c| c.n_list[0])).unwrap_or(200);
            let dim = dim.or(config.as_ref().map(|c| c.dim_for(n))).unwrap_or(200);
            let fam = kind.in_dim(dim)?;
            let text = match what {
                CheckKind::Tail => {
                    let t = thresholds.unwrap_or_else(|| vec![0.05, 0.1, 0.2, 0.3]);
                    let est = thin_shell_tail(&fam, &t, trials.unwrap_or(10_000), &streams)?;
                    let mut out = String::from("threshold\tempirical\twilson_halfwidth\tenvelope\n");
                    for (k, &t) in est.thresholds.iter().enumerate() {
                        let envelope = est.fit.map_or(f64::NAN, |f| {
                            f.c1 * (-f.c0 * (dim as f64).sqrt() * t.min(t * t * t)).exp()
                        });
                        out.push_str(&format!(
                            "{:.16e}\t{:.16e}\t{:.16e}\t{:.16e}\n",
                            t, est.empirical_prob[k], est.wilson_halfwidth[k], envelope
                        ));
                    }
                    out
                }
                CheckKind::Moment | CheckKind::NormMoment => {
                    let trials = trials.unwrap_or(10_000);
                    let (name, est, target) = if let CheckKind::Moment = what {
                        ("inner_product_sq", inner_product_moment(&fam, trials, &streams)?, 1.0 / dim as f64)
                    } else {
                        ("p_norm_dev_moment", norm_moment_condition(&fam, ell, trials, &streams)?, f64::NAN)
                    };
                    format!(
                        "quantity\tdim\testimate\tstd_error\ttarget\n{name}\t{dim}\t{:.16e}\t{:.16e}\t{:.16e}\n",
                        est.value, est.std_error, target
                    )
                }
                CheckKind::Concentration => {
                    let spec = kernel.or(config.map(|c| c.kernel)).unwrap_or(KernelSpec::Exponential);
                    let setup = StatisticSetup { family: fam, kernel: Kernel::from_spec(&spec)?, n };
                    let t = thresholds.unwrap_or_else(|| vec![0.1, 0.3]);
                    let rep = statistic_concentration(&setup, &TestFunction::arctan(), &t, trials.unwrap_or(200), &streams)?;
                    let mut out = String::from("threshold\tempirical\twilson_halfwidth\tenvelope\tviolated\n");
                    for r in &rep.rows {
                        out.push_str(&format!(
                            "{:.16e}\t{:.16e}\t{:.16e}\t{:.16e}\t{}\n",
                            r.t, r.exceedance, r.wilson_halfwidth, r.envelope, r.violated
                        ));
                    }
                    emit(cli.out.as_deref(), &out)?;
                    if let Some(r) = rep.rows.iter().find(|r| r.violated) {
                        return Err(Error::InequalityViolation {
                            check: "azuma-envelope",
                            pair: format!("t={}", r.t),
                            lhs: r.exceedance,
                            rhs: r.envelope,
                        });
                    }
                    return Ok(());
                }
            };
            emit(cli.out.as_deref(), &text)
        }
    }
}

fn mp_table(law: &LimitLaw, points: usize, table: Table) -> String {
    let mut out = String::new();
    match table {
        Table::Density => {
            if let Some(atom) = law.atom() {
                out.push_str(&format!("# atom\t{:.16e}\t{:.16e}\n", atom.location, atom.mass));
            }
            out.push_str("x\tdensity\tcdf\n");
            let (lo, hi) = law.support();
            let pad = 0.05 * (hi - lo).max(1e-3);
            let (a, b) = (lo - pad, hi + pad);
            for k in 0..points {
                let x = a + (b - a) * k as f64 / (points - 1) as f64;
                out.push_str(&format!("{:.16e}\t{:.16e}\t{:.16e}\n", x, law.density(x), law.cdf(x)));
            }
        }
        Table::Quantile => {
            out.push_str("u\tquantile\n");
            for k in 0..points {
                let u = (k as f64 + 0.5) / points as f64;
                out.push_str(&format!("{:.16e}\t{:.16e}\n", u, law.quantile(u)));
            }
        }
    }
    out
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Output { path: path.to_path_buf(), source }),
        None => Ok(std::io::stdout().write_all(text.as_bytes())?),
    }
}

fn finish_report(report: &ExperimentReport, dir: Option<&Path>) -> Result<()> {
    match dir {
        Some(dir) => {
            for run in &report.runs {
                if let Some(m) = &run.medians {
                    eprintln!(
                        "n={} p={} median ks(A,law)={:.4} w2(A,M)={:.4} failed={}",
                        run.n, run.p, m.a_vs_law.ks, m.a_vs_m.w2, run.failed_trials
                    );
                }
            }
            eprintln!("wrote {}", dir.join("report.json").display());
            Ok(())
        }
        None => {
            let mut json = serde_json::to_string_pretty(report)?;
            json.push('\n');
            emit(None, &json)
        }
    }
}
