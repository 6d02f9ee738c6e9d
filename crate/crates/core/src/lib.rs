//! Spectra of Euclidean random matrices.
//!
//! Given i.i.d. isotropic vectors `X_1, ..., X_n` in `R^p` and a kernel `f`,
//! the Euclidean random matrix is `A_ij = f(||X_i - X_j||^2)`. When `n` and
//! `p` grow with `p / n -> y`, the eigenvalue distribution of `A` approaches
//! the law of
//!
//! ```text
//! f(0) - f(2) + 2 f'(2) - 2 f'(2) S,      S ~ Marchenko-Pastur(1/y)
//! ```
//!
//! This crate samples the vectors ([`sampling`]), builds `A` and the matrices
//! that interpolate between `A` and its linearization ([`builders`]),
//! computes spectra ([`eigen`], [`spectral`]), evaluates the predicted law
//! ([`limit`]), measures distances and checks the perturbation inequalities
//! that drive the argument ([`metrics`]), runs Monte Carlo checks of the
//! probabilistic ingredients ([`concentration`]) and ties everything into
//! reproducible sweeps ([`harness`]).
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod builders;
pub mod concentration;
pub mod data;
pub mod eigen;
pub mod error;
pub mod harness;
pub mod kernel;
pub mod limit;
pub mod matrix;
pub mod metrics;
pub mod quadrature;
pub mod rng;
pub mod sampling;
pub mod spectral;

pub use builders::{
    build_euclidean, build_gram, build_linearized, build_proof_chain, check_event, norm_deviations,
    EventEResult, NormDeviations, ProofChain,
};
pub use concentration::{
    inner_product_moment, norm_moment_condition, statistic_concentration, thin_shell_tail, MomentEstimate,
    TailEstimate, TestFunction,
};
pub use data::DataMatrix;
pub use error::{Error, Result};
pub use harness::{analyze_dataset, emit_histogram, run_experiment, ExperimentConfig, ExperimentReport};
pub use kernel::{limit_coefficients, taylor_coefficients, AffineCoefficients, Kernel, KernelSpec};
pub use limit::{LimitLaw, MarchenkoPastur};
pub use matrix::SymmetricMatrix;
pub use metrics::{
    ks_distance, ks_vs_law, verify_hw_inequality, verify_rank_inequality, wasserstein,
    DistanceReport, InequalityCheck,
};
pub use rng::{RandomStream, Streams};
pub use sampling::{check_isotropy, sample_data_matrix, sample_vector, FamilyKind, VectorFamily};
pub use spectral::{esd, SpectralDistribution};
