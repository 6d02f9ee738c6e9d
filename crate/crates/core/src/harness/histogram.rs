use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limit::LimitLaw;
use crate::spectral::SpectralDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub center: f64,
    pub empirical_density: f64,
    /// Law mass of the bin divided by its width, atom included.
    pub predicted_density: f64,
}

/// Eigenvalues outside the binned range, grouped by value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outlier {
    pub value: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bins: Vec<HistogramBin>,
    pub outliers: Vec<Outlier>,
}

impl Histogram {
    /// Empirical mass in the bins plus outlier mass; 1 up to rounding.
    pub fn total_mass(&self) -> f64 {
        self.bins.iter().map(|b| b.empirical_density * (b.hi - b.lo)).sum::<f64>()
            + self.outliers.iter().map(|o| o.mass).sum::<f64>()
    }

    /// Tab-separated rows `kind  x  empirical  predicted`. Bin rows carry
    /// densities at the bin center; outlier rows carry point masses.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("kind\tx\tempirical\tpredicted\n");
        for b in &self.bins {
            out.push_str(&format!(
                "bin\t{:.16e}\t{:.16e}\t{:.16e}\n",
                b.center, b.empirical_density, b.predicted_density
            ));
        }
        for o in &self.outliers {
            out.push_str(&format!("outlier\t{:.16e}\t{:.16e}\t{:.16e}\n", o.value, o.mass, 0.0));
        }
        out
    }
}

/// Bins `esd` over the support of `law` (continuous part and atom).
///
/// Bins are `(lo, hi]` except the first, which is closed. A degenerate
/// support is widened to a unit-scale interval around the point.
pub fn emit_histogram(esd: &SpectralDistribution, law: &LimitLaw, bins: usize) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::InvalidConfig("histogram needs at least one bin".into()));
    }
    let (mut lo, mut hi) = law.support();
    if hi - lo <= 0.0 {
        let half = 0.5 * lo.abs().max(1.0);
        lo -= half;
        hi += half;
    }
    let width = (hi - lo) / bins as f64;
    let total = esd.len() as f64;
    let edge = |k: usize| if k == bins { hi } else { lo + width * k as f64 };

    let mut out = Histogram::default();
    for k in 0..bins {
        let (a, b) = (edge(k), edge(k + 1));
        let (count, mass) = if k == 0 {
            (esd.count_le(b) - esd.count_lt(a), law.cdf(b) - law.cdf_left(a))
        } else {
            (esd.count_le(b) - esd.count_le(a), law.cdf(b) - law.cdf(a))
        };
        out.bins.push(HistogramBin {
            lo: a,
            hi: b,
            center: 0.5 * (a + b),
            empirical_density: count as f64 / (total * (b - a)),
            predicted_density: mass / (b - a),
        });
    }
    for &v in esd.values().iter().filter(|&&v| v < lo || v > hi) {
        match out.outliers.last_mut() {
            Some(last) if last.value == v => last.mass += 1.0 / total,
            _ => out.outliers.push(Outlier { value: v, mass: 1.0 / total }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Kernel;
    use rand::SeedableRng;

    #[test]
    fn covers_support_and_normalizes() {
        let law = LimitLaw::marchenko_pastur(0.5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut sample = law.sample(&mut rng, 2000);
        sample.push(100.0);
        let esd = SpectralDistribution::new(sample).unwrap();
        let h = emit_histogram(&esd, &law, 40).unwrap();
        let (lo, hi) = law.support();
        assert_eq!((h.bins[0].lo, h.bins[39].hi), (lo, hi));
        assert_eq!(h.outliers.len(), 1);
        assert!((h.total_mass() - 1.0).abs() < 1e-6);
        let predicted: f64 = h.bins.iter().map(|b| b.predicted_density * (b.hi - b.lo)).sum();
        assert!((predicted - 1.0).abs() < 1e-9);
        // the atom at 0 sits in the first bin
        assert!(h.bins[0].predicted_density * (h.bins[0].hi - h.bins[0].lo) >= 0.5);
    }

    #[test]
    fn constant_kernel_shape() {
        let law = LimitLaw::for_kernel(&Kernel::constant(1.0), 1.0).unwrap();
        let mut values = vec![0.0; 9];
        values.push(10.0);
        let h = emit_histogram(&SpectralDistribution::new(values).unwrap(), &law, 11).unwrap();
        let nonzero: Vec<_> = h.bins.iter().filter(|b| b.empirical_density > 0.0).collect();
        assert_eq!(nonzero.len(), 1);
        assert!(nonzero[0].lo < 0.0 && nonzero[0].hi >= 0.0);
        assert_eq!(h.outliers, vec![Outlier { value: 10.0, mass: 0.1 }]);
        assert!((h.total_mass() - 1.0).abs() < 1e-12);
        assert!(h.to_tsv().lines().count() == 13);
    }
}
