//! Draws vectors from every built-in isotropic family and prints empirical
//! isotropy diagnostics.
//!
//! ```text
//! cargo run --release --example sample_vectors
//! ```

use euclid_spectra::{check_isotropy, sample_data_matrix, FamilyKind, Streams};

fn main() -> euclid_spectra::Result<()> {
    let (p, n) = (50, 20_000);
    let streams = Streams::new(7);
    println!("{:<15} {:>12} {:>12} {:>12} {:>12}", "family", "mean |Y|", "|mean|", "max offdiag", "max diag dev");
    for (k, kind) in FamilyKind::ALL.into_iter().enumerate() {
        let x = sample_data_matrix(&kind.in_dim(p)?, n, &mut streams.stream(k as u64))?;
        let r = check_isotropy(&x)?;
        println!(
            "{:<15} {:>12.5} {:>12.5} {:>12.5} {:>12.5}",
            format!("{kind:?}"),
            r.mean_column_norm,
            r.mean_norm,
            r.max_offdiag,
            r.max_diag_dev
        );
    }
    println!("covariance entries are scaled by p, so 1/sqrt(n) ~ {:.4} is the noise level", 1.0 / (n as f64).sqrt());
    Ok(())
}
