//! Tabulates the Marchenko-Pastur law for a few ratios: edges, atom, mass,
//! moments and a handful of CDF and quantile values.
//!
//! ```text
//! cargo run --example mp_table
//! ```

use euclid_spectra::MarchenkoPastur;

fn main() -> euclid_spectra::Result<()> {
    for y in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let mp = MarchenkoPastur::new(y)?;
        println!(
            "y = {y:<4}  support [{:.4}, {:.4}]  atom {:.2}  mass {:.10}  mean {:.8}  var {:.8} (1/y = {:.4})",
            mp.lower_edge(),
            mp.upper_edge(),
            mp.atom_mass(),
            mp.continuous_mass() + mp.atom_mass(),
            mp.moment(1),
            mp.moment(2) - mp.moment(1).powi(2),
            1.0 / y
        );
        let cells: Vec<String> = [0.1, 0.25, 0.5, 0.75, 0.9]
            .iter()
            .map(|&u| {
                let q = mp.quantile(u);
                format!("Q({u})={q:.4} F(Q)={:.4}", mp.cdf(q))
            })
            .collect();
        println!("          {}", cells.join("  "));
    }
    let mp = MarchenkoPastur::new(1.0)?;
    println!("density at (y = 1, x = 2): {:.12}  1/(2 pi) = {:.12}", mp.density(2.0), 0.5 / std::f64::consts::PI);
    Ok(())
}
