//! Prints, for each built-in kernel, the affine map that sends the
//! Marchenko-Pastur law to the predicted spectrum, and the two-variable
//! Taylor coefficients used by the interpolating matrices.
//!
//! ```text
//! cargo run --example kernel_coefficients
//! ```

use euclid_spectra::{limit_coefficients, taylor_coefficients, Kernel};

fn main() -> euclid_spectra::Result<()> {
    let kernels = [
        Kernel::identity(),
        Kernel::constant(1.0),
        Kernel::exponential(),
        Kernel::sqrt(),
        Kernel::polynomial(&[1.0, -0.5, 0.25])?,
    ];
    for k in &kernels {
        let a = limit_coefficients(k);
        println!(
            "{:<12} f(0)={:+.4} f(2)={:+.4} f'(2)={:+.4}  limit = {:+.4} {:+.4} * MP",
            k.name(),
            k.f0(),
            k.f2(),
            k.df2(),
            a.shift,
            a.scale
        );
        let c = taylor_coefficients(k)?;
        let row = |kk: usize| (0..4).map(|l| format!("{:+.4}", c.get(kk, l))).collect::<Vec<_>>().join(" ");
        for kk in 0..4 {
            println!("{:>14}c[{kk}][*] = {}", "", row(kk));
        }
    }
    Ok(())
}
