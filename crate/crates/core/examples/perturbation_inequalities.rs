//! Checks the rank inequality `d_KS <= rank(B - C) / n` and the
//! Hoffman-Wielandt inequality `W_2 <= ||B - C||_F / sqrt(n)` on random
//! symmetric pairs: low-rank updates of a Euclidean matrix and a resampled
//! column.
//!
//! ```text
//! cargo run --release --example perturbation_inequalities
//! ```

use euclid_spectra::{
    build_euclidean, sample_data_matrix, sample_vector, verify_hw_inequality, verify_rank_inequality,
    FamilyKind, Kernel, SymmetricMatrix, Streams,
};
use rand::Rng;

fn main() -> euclid_spectra::Result<()> {
    let n = 60;
    let family = FamilyKind::UniformBall.in_dim(40)?;
    let kernel = Kernel::exponential();
    let streams = Streams::new(5);
    let mut worst_rank_gap = f64::INFINITY;
    let mut worst_hw_gap = f64::INFINITY;
    for t in 0..20 {
        let mut rng = streams.stream(t);
        let mut x = sample_data_matrix(&family, n, &mut rng)?;
        let a = build_euclidean(&x, &kernel)?;

        // rank-two symmetric update u v^T + v u^T
        let u: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let b = SymmetricMatrix::from_upper_fn(n, |i, j| a.get(i, j) + u[i] * v[j] + v[i] * u[j]);

        // replace one vector: changes one row and column, rank <= 2
        let k = rng.random_range(0..n);
        x.column_mut(k).copy_from_slice(&sample_vector(&family, &mut rng));
        let c = build_euclidean(&x, &kernel)?;

        for (label, other) in [("rank-2 update", &b), ("resampled column", &c)] {
            let rank = verify_rank_inequality(&a, other)?;
            let hw = verify_hw_inequality(&a, other)?;
            worst_rank_gap = worst_rank_gap.min(rank.rhs - rank.lhs);
            worst_hw_gap = worst_hw_gap.min(hw.rhs - hw.lhs);
            if t < 3 {
                println!(
                    "trial {t} {label:<17} ks {:.4} <= {:.4}   w2 {:.4} <= {:.4}",
                    rank.lhs, rank.rhs, hw.lhs, hw.rhs
                );
            }
            assert!(rank.holds && hw.holds);
        }
    }
    println!("smallest slack over 40 pairs: rank {worst_rank_gap:.4}, hoffman-wielandt {worst_hw_gap:.4}");
    Ok(())
}
