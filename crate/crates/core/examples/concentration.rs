//! Monte Carlo checks of the probabilistic ingredients: thin-shell tails of
//! `||Y||`, the inner-product moment `E (X_1^T X_2)^2 = 1/p`, the norm
//! moment condition and concentration of `int arctan d mu_A`.
//!
//! ```text
//! cargo run --release --example concentration
//! ```

use euclid_spectra::concentration::{
    inner_product_moment, norm_moment_condition, statistic_concentration, thin_shell_tail, StatisticSetup,
    TestFunction,
};
use euclid_spectra::{FamilyKind, Kernel, Streams};

fn main() -> euclid_spectra::Result<()> {
    let streams = Streams::new(99);
    let thresholds = [0.05, 0.1, 0.15, 0.2];
    println!("P(| |Y| - 1 | >= t), gaussian, t = {thresholds:?}");
    for p in [25, 100, 400] {
        let est = thin_shell_tail(&FamilyKind::Gaussian.in_dim(p)?, &thresholds, 20_000, &streams.child(p as u64))?;
        let fit = est.fit.map(|f| format!("fitted c0 = {:.3}", f.c0)).unwrap_or_default();
        println!("  p = {p:<4} {:?}  {fit}", est.empirical_prob);
    }

    println!("E (X1^T X2)^2 at p = 200 (target 0.005)");
    for kind in FamilyKind::ALL {
        let m = inner_product_moment(&kind.in_dim(200)?, 10_000, &streams)?;
        println!("  {:<14} {:.5} +- {:.5}", format!("{kind:?}"), m.value, m.std_error);
    }

    println!("p E | |Y| - 1 |^(2 ell), gaussian");
    for ell in [1, 3] {
        let row = [50, 200, 800]
            .iter()
            .map(|&p| norm_moment_condition(&FamilyKind::Gaussian.in_dim(p).unwrap(), ell, 5_000, &streams).map(|m| format!("{:.3e}", m.value)))
            .collect::<euclid_spectra::Result<Vec<_>>>()?;
        println!("  ell = {ell}: p = 50, 200, 800 -> {}", row.join(", "));
    }

    let setup = StatisticSetup { family: FamilyKind::Gaussian.in_dim(200)?, kernel: Kernel::exponential(), n: 200 };
    let rep = statistic_concentration(&setup, &TestFunction::arctan(), &[0.005, 0.01, 0.1, 0.3], 200, &streams)?;
    println!("int arctan d mu_A: mean {:.5}, n = {}", rep.mean, rep.n);
    for r in &rep.rows {
        println!(
            "  t = {:<6} exceedance {:.3} (+- {:.3})  envelope {:.3}  violated {}",
            r.t, r.exceedance, r.wilson_halfwidth, r.envelope, r.violated
        );
    }
    Ok(())
}
