use euclid_spectra::metrics::{ks_resolved, LawGrid};
use euclid_spectra::{ks_distance, ks_vs_law, wasserstein, LimitLaw, SpectralDistribution, Streams};
use proptest::prelude::*;
use rand::Rng;

fn d(v: &[f64]) -> SpectralDistribution {
    SpectralDistribution::new(v.to_vec()).unwrap()
}

fn ecdf(v: &[f64], x: f64) -> f64 {
    v.iter().filter(|&&a| a <= x).count() as f64 / v.len() as f64
}

/// Supremum over all jump points of |F_a - F_b|.
fn brute_ks(a: &[f64], b: &[f64]) -> f64 {
    a.iter().chain(b).map(|&x| (ecdf(a, x) - ecdf(b, x)).abs()).fold(0.0, f64::max)
}

/// Minimum over all matchings, equal sizes only.
fn brute_wasserstein(a: &[f64], b: &[f64], p: i32) -> f64 {
    fn permute(k: usize, idx: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if k == idx.len() {
            f(idx);
            return;
        }
        for i in k..idx.len() {
            idx.swap(k, i);
            permute(k + 1, idx, f);
            idx.swap(k, i);
        }
    }
    let mut best = f64::INFINITY;
    let mut idx: Vec<usize> = (0..a.len()).collect();
    permute(0, &mut idx, &mut |perm| {
        let cost: f64 = perm.iter().enumerate().map(|(i, &j)| (a[i] - b[j]).abs().powi(p)).sum();
        best = best.min(cost);
    });
    (best / a.len() as f64).powf(1.0 / p as f64)
}

/// W1 as the integral of |F_a - F_b|, any sizes.
fn integral_w1(a: &[f64], b: &[f64]) -> f64 {
    let mut pts: Vec<f64> = a.iter().chain(b).copied().collect();
    pts.sort_by(f64::total_cmp);
    pts.windows(2).map(|w| (ecdf(a, w[0]) - ecdf(b, w[0])).abs() * (w[1] - w[0])).sum()
}

fn random_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    // coarse grid values produce ties
    (0..n).map(|_| (rng.random_range(-20..20) as f64) * 0.25).collect()
}

#[test]
fn matches_brute_force_on_small_sets() {
    let mut rng = Streams::new(17).stream(0);
    for _ in 0..60 {
        let n = rng.random_range(1..7);
        let a = random_vec(&mut rng, n);
        let b = random_vec(&mut rng, n);
        let (da, db) = (d(&a), d(&b));
        assert!((ks_distance(&da, &db) - brute_ks(&a, &b)).abs() < 1e-15);
        for p in [1, 2] {
            let ours = wasserstein(&da, &db, p as u32);
            assert!((ours - brute_wasserstein(&a, &b, p)).abs() < 1e-12, "p={p} {a:?} {b:?}");
        }
    }
}

#[test]
fn unequal_sizes_match_integral_formula() {
    let mut rng = Streams::new(18).stream(0);
    for _ in 0..60 {
        let (n, m) = (rng.random_range(1..30), rng.random_range(1..30));
        let a = random_vec(&mut rng, n);
        let b = random_vec(&mut rng, m);
        let (da, db) = (d(&a), d(&b));
        assert!((ks_distance(&da, &db) - brute_ks(&a, &b)).abs() < 1e-15);
        assert!((wasserstein(&da, &db, 1) - integral_w1(&a, &b)).abs() < 1e-12);
    }
}

#[test]
fn resolved_ks_ignores_small_displacements() {
    let a = d(&[0.0, 1.0, 2.0]);
    let b = d(&[1e-12, 1.0 - 1e-12, 2.0]);
    assert!(ks_distance(&a, &b) > 0.0);
    assert_eq!(ks_resolved(&a, &b, 1e-10), 0.0);
}

#[test]
fn ks_against_law_matches_dense_grid() {
    let law = LimitLaw::marchenko_pastur(2.0).unwrap();
    let mut rng = Streams::new(4).stream(0);
    let sample = d(&law.sample(&mut rng, 300));
    let exact = ks_vs_law(&sample, &law);
    let (lo, hi) = law.support();
    let grid = (0..20_000)
        .map(|k| lo + (hi - lo) * k as f64 / 19_999.0)
        .map(|x| (sample.cdf(x) - law.cdf(x)).abs())
        .fold(0.0, f64::max);
    assert!(exact >= grid - 1e-12 && exact - grid < 5e-3, "{exact} vs {grid}");
}

#[test]
fn law_grid_wasserstein_of_law_sample_is_small() {
    let law = LimitLaw::marchenko_pastur(1.0).unwrap();
    let grid = LawGrid::new(&law, 4096).unwrap();
    let sample = d(&law.sample(&mut Streams::new(5).stream(0), 20_000));
    assert!(wasserstein(&sample, grid.as_distribution(), 1) < 0.02);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn metric_axioms(
        a in prop::collection::vec(-5.0f64..5.0, 1..40),
        b in prop::collection::vec(-5.0f64..5.0, 1..40),
        c in prop::collection::vec(-5.0f64..5.0, 1..40),
    ) {
        let (da, db, dc) = (d(&a), d(&b), d(&c));
        prop_assert_eq!(ks_distance(&da, &da), 0.0);
        prop_assert_eq!(wasserstein(&da, &da, 2), 0.0);
        prop_assert_eq!(ks_distance(&da, &db), ks_distance(&db, &da));
        prop_assert!((wasserstein(&da, &db, 1) - wasserstein(&db, &da, 1)).abs() < 1e-12);
        let ks = ks_distance(&da, &db);
        prop_assert!((0.0..=1.0).contains(&ks));
        prop_assert!(ks <= ks_distance(&da, &dc) + ks_distance(&dc, &db) + 1e-12);
        for p in [1, 2] {
            let w = wasserstein(&da, &db, p);
            prop_assert!(w <= wasserstein(&da, &dc, p) + wasserstein(&dc, &db, p) + 1e-9);
        }
        prop_assert!(wasserstein(&da, &db, 1) <= wasserstein(&da, &db, 2) + 1e-12);
    }
}
