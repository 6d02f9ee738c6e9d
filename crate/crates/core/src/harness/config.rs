use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::DEFAULT_MAX_ENTRIES;
use crate::error::{Error, Result};
use crate::kernel::{Kernel, KernelSpec};
use crate::sampling::FamilyKind;

/// One convergence sweep. Loaded from TOML, for example
///
/// ```toml
/// family = "gaussian"
/// n_list = [250, 500, 1000]
/// ratio = 0.5
/// trials = 5
/// seed = 42
///
/// [kernel]
/// name = "exponential"
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: FamilyKind,
    pub kernel: KernelSpec,
    /// Numbers of vectors, strictly increasing.
    pub n_list: Vec<usize>,
    /// Target `p / n`; each sweep point uses `p = round(ratio * n)`.
    pub ratio: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Tolerance of the norm/distance event; `n^(-1/8)` when absent.
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Build the interpolating matrices B, C, D, E in every trial.
    #[serde(default = "yes")]
    pub proof_chain: bool,
    /// Check the rank and Hoffman-Wielandt inequalities in every trial.
    #[serde(default = "yes")]
    pub inequality_checks: bool,
    #[serde(default = "default_bins")]
    pub histogram_bins: usize,
    /// Largest allowed `n`; dense eigensolving is cubic in `n`.
    #[serde(default = "default_max_n")]
    pub max_n: usize,
    /// Upper bound on `p * n` and `n * n`.
    #[serde(default = "default_max_entries")]
    pub max_entries: usize,
}

/// Default cap on the number of vectors.
pub const DEFAULT_MAX_N: usize = 4096;

fn default_max_n() -> usize {
    DEFAULT_MAX_N
}

fn default_trials() -> usize {
    1
}

fn yes() -> bool {
    true
}

fn default_bins() -> usize {
    60
}

fn default_max_entries() -> usize {
    DEFAULT_MAX_ENTRIES
}

impl ExperimentConfig {
    /// A config with default options.
    pub fn new(family: FamilyKind, kernel: KernelSpec, n_list: Vec<usize>, ratio: f64) -> Self {
        ExperimentConfig {
            family,
            kernel,
            n_list,
            ratio,
            trials: default_trials(),
            seed: 0,
            epsilon: None,
            output_dir: None,
            proof_chain: true,
            inequality_checks: true,
            histogram_bins: default_bins(),
            max_n: DEFAULT_MAX_N,
            max_entries: default_max_entries(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Dimension used at sweep point `n`.
    pub fn dim_for(&self, n: usize) -> usize {
        (self.ratio * n as f64).round() as usize
    }

    pub fn epsilon_for(&self, n: usize) -> f64 {
        self.epsilon.unwrap_or_else(|| crate::builders::default_epsilon(n))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n_list.is_empty() {
            return bad("n_list is empty".into());
        }
        if self.n_list[0] < 2 {
            return bad("every n must be at least 2".into());
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!("n_list must be strictly increasing, got {:?}", self.n_list));
        }
        if !(self.ratio.is_finite() && self.ratio > 0.0) {
            return bad(format!("ratio must be finite and > 0, got {}", self.ratio));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if let Some(eps) = self.epsilon {
            if !(eps >= 0.0 && eps.is_finite()) {
                return bad(format!("epsilon must be finite and >= 0, got {eps}"));
            }
        }
        if self.histogram_bins == 0 {
            return bad("histogram_bins must be at least 1".into());
        }
        for &n in &self.n_list {
            if n > self.max_n {
                return Err(Error::Capacity { requested: n, cap: self.max_n });
            }
            let p = self.dim_for(n);
            if p == 0 {
                return bad(format!("ratio {} gives p = 0 at n = {n}", self.ratio));
            }
            let entries = p.max(n).checked_mul(n);
            match entries {
                Some(e) if e <= self.max_entries => {}
                _ => {
                    return Err(Error::Capacity {
                        requested: entries.unwrap_or(usize::MAX),
                        cap: self.max_entries,
                    })
                }
            }
        }
        let kernel = Kernel::from_spec(&self.kernel)?;
        if self.proof_chain {
            crate::kernel::taylor_coefficients(&kernel)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
family = "gaussian"
n_list = [250, 500, 1000]
ratio = 0.5
trials = 5
seed = 42

[kernel]
name = "exponential"
"#;

    #[test]
    fn parses_with_defaults() {
        let c = ExperimentConfig::from_toml_str(SAMPLE).unwrap();
        assert_eq!(c.family, FamilyKind::Gaussian);
        assert_eq!(c.kernel, KernelSpec::Exponential);
        assert_eq!(c.dim_for(250), 125);
        assert!(c.proof_chain && c.inequality_checks && c.epsilon.is_none());
        assert!((c.epsilon_for(256) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_configs() {
        let base = ExperimentConfig::from_toml_str(SAMPLE).unwrap();
        let mut c = base.clone();
        c.n_list = vec![500, 250];
        assert!(matches!(c.validate(), Err(Error::InvalidConfig(_))));
        let mut c = base.clone();
        c.ratio = 0.0;
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.trials = 0;
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.max_n = 500;
        assert!(matches!(c.validate(), Err(Error::Capacity { requested: 1000, cap: 500 })));
        let mut c = base.clone();
        c.max_entries = 1000;
        assert!(matches!(c.validate(), Err(Error::Capacity { .. })));
        let mut c = base.clone();
        c.kernel = KernelSpec::Custom {
            f0: 0.0,
            f2: 1.0,
            df2: 0.5,
            d2f2: None,
            d3f2: None,
            samples: vec![[0.0, 0.0], [4.0, 2.0]],
        };
        assert!(matches!(c.validate(), Err(Error::UnsupportedOrder { .. })));
        c.proof_chain = false;
        assert!(c.validate().is_ok());
        assert!(ExperimentConfig::from_toml_str("family = \"gaussian\"\nbogus = 1").is_err());
    }
}
