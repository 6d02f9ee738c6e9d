//! Builds the matrices `B, C, D, E` that interpolate between a Euclidean
//! matrix `A` and its linearization `M`, and prints the `W_2` distance of
//! each step together with the rank of `E - M`.
//!
//! ```text
//! cargo run --release --example proof_chain
//! ```

use euclid_spectra::metrics::wasserstein;
use euclid_spectra::spectral::numerical_rank;
use euclid_spectra::{
    build_euclidean, build_linearized, build_proof_chain, check_event, sample_data_matrix, FamilyKind, Kernel,
    SpectralDistribution, Streams,
};

fn main() -> euclid_spectra::Result<()> {
    let (n, p) = (400, 400);
    let kernel = Kernel::exponential();
    for kind in [FamilyKind::Gaussian, FamilyKind::UniformSphere] {
        let x = sample_data_matrix(&kind.in_dim(p)?, n, &mut Streams::new(3).stream(0))?;
        let a = build_euclidean(&x, &kernel)?;
        let m = build_linearized(&x, &kernel);
        let chain = build_proof_chain(&x, &kernel)?;
        let b = chain.b.as_ref().expect("exponential kernel has a derivative");
        let seq = [("A", &a), ("B", b), ("C", &chain.c), ("D", &chain.d), ("E", &chain.e), ("M", &m)];
        let spectra = seq
            .iter()
            .map(|(_, mat)| SpectralDistribution::of_matrix(mat))
            .collect::<euclid_spectra::Result<Vec<_>>>()?;

        println!("{kind:?}, n = {n}, p = {p}: {:?}", check_event(&x, (n as f64).powf(-0.125))?);
        let mut total = 0.0;
        for k in 0..seq.len() - 1 {
            let w = wasserstein(&spectra[k], &spectra[k + 1], 2);
            total += w;
            println!("  W2({}, {}) = {:.3e}", seq[k].0, seq[k + 1].0, w);
        }
        println!("  W2(A, M) = {:.3e} <= {:.3e}", wasserstein(&spectra[0], &spectra[5], 2), total);
        println!("  rank(E - M) = {}", numerical_rank(&chain.e.difference(&m)?)?);
    }
    Ok(())
}
