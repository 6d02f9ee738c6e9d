//! Builds one Euclidean random matrix with the exponential kernel, compares
//! its spectrum with the predicted limit and draws a text histogram.
//!
//! ```text
//! cargo run --release --example euclidean_spectrum
//! ```

use euclid_spectra::harness::emit_histogram;
use euclid_spectra::metrics::{distance_to_law, LawGrid, LAW_GRID_POINTS};
use euclid_spectra::{
    build_euclidean, build_linearized, ks_distance, sample_data_matrix, FamilyKind, Kernel, LimitLaw,
    SpectralDistribution, Streams,
};

fn main() -> euclid_spectra::Result<()> {
    let (n, p) = (800, 1600);
    let kernel = Kernel::exponential();
    let x = sample_data_matrix(&FamilyKind::Gaussian.in_dim(p)?, n, &mut Streams::new(11).stream(0))?;

    let mu_a = SpectralDistribution::of_matrix(&build_euclidean(&x, &kernel)?)?;
    let mu_m = SpectralDistribution::of_matrix(&build_linearized(&x, &kernel))?;
    let law = LimitLaw::for_kernel(&kernel, p as f64 / n as f64)?;
    let grid = LawGrid::new(&law, LAW_GRID_POINTS)?;

    println!("limit law: {:.4} + {:.4} * MP(y = {})", law.shift(), law.scale(), p as f64 / n as f64);
    println!("A vs law: {:?}", distance_to_law(&mu_a, &law, &grid));
    println!("A vs M:   ks = {:.4}", ks_distance(&mu_a, &mu_m));

    let hist = emit_histogram(&mu_a, &law, 30)?;
    let peak = hist.bins.iter().map(|b| b.empirical_density.max(b.predicted_density)).fold(0.0, f64::max);
    for b in &hist.bins {
        let bar = "#".repeat((50.0 * b.empirical_density / peak).round() as usize);
        let mark = (50.0 * b.predicted_density / peak).round() as usize;
        let mut line: Vec<char> = format!("{bar:<51}").chars().collect();
        line[mark.min(50)] = '|';
        println!("{:>8.4} {}", b.center, line.into_iter().collect::<String>());
    }
    let (below, above): (Vec<_>, Vec<_>) = hist.outliers.iter().partition(|o| o.value < hist.bins[0].lo);
    let mass = |v: &[&euclid_spectra::harness::Outlier]| v.iter().map(|o| o.mass).sum::<f64>();
    println!("outside the support: mass {:.4} below, {:.4} above", mass(&below), mass(&above));
    if let Some(top) = above.last() {
        println!("largest eigenvalue {:.3} (n f(2) = {:.3})", top.value, n as f64 * kernel.f2());
    }
    Ok(())
}
