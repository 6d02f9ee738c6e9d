use euclid_spectra::eigen::{eigen_decomposition, eigenvalues_symmetric};
use euclid_spectra::{build_euclidean, build_gram, sample_data_matrix, FamilyKind, Kernel, Streams, SymmetricMatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

fn reference(m: &SymmetricMatrix) -> Vec<f64> {
    let n = m.order();
    let dm = DMatrix::from_row_slice(n, n, m.as_row_major());
    let mut v: Vec<f64> = dm.symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn assert_close(ours: &[f64], theirs: &[f64], scale: f64) {
    assert_eq!(ours.len(), theirs.len());
    let tol = 1e-10 * scale.max(1.0) * (ours.len() as f64).sqrt();
    for (a, b) in ours.iter().zip(theirs) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }
}

fn random_symmetric(n: usize, seed: u64) -> SymmetricMatrix {
    let mut rng = Streams::new(seed).stream(0);
    let upper: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
    SymmetricMatrix::from_upper_fn(n, |i, j| upper[i * n + j])
}

#[test]
fn matches_nalgebra_on_random_matrices() {
    for (k, n) in [1, 2, 3, 10, 57, 200].into_iter().enumerate() {
        let m = random_symmetric(n, k as u64);
        assert_close(&eigenvalues_symmetric(&m).unwrap(), &reference(&m), m.max_abs());
    }
}

#[test]
fn matches_nalgebra_on_structured_matrices() {
    let x = sample_data_matrix(&FamilyKind::Gaussian.in_dim(60).unwrap(), 150, &mut Streams::new(1).stream(0)).unwrap();
    let gram = build_gram(&x);
    let a = build_euclidean(&x, &Kernel::exponential()).unwrap();
    let constant = build_euclidean(&x, &Kernel::constant(2.0)).unwrap();
    for m in [gram, a, constant] {
        let ours = eigenvalues_symmetric(&m).unwrap();
        assert_close(&ours, &reference(&m), ours.iter().fold(0.0f64, |s, v| s.max(v.abs())));
    }
}

#[test]
fn degenerate_inputs() {
    assert!(eigenvalues_symmetric(&SymmetricMatrix::zeros(7)).unwrap().iter().all(|&v| v == 0.0));
    let diag = SymmetricMatrix::from_diagonal(&[3.0, -1.0, 2.0, 2.0]);
    assert_eq!(eigenvalues_symmetric(&diag).unwrap(), vec![-1.0, 2.0, 2.0, 3.0]);
    // J_n has eigenvalues 0 (n - 1 times) and n
    let j = SymmetricMatrix::from_upper_fn(50, |_, _| 1.0);
    let v = eigenvalues_symmetric(&j).unwrap();
    assert!(v[..49].iter().all(|x| x.abs() < 1e-12));
    assert!((v[49] - 50.0).abs() < 1e-11);
}

#[test]
fn eigenvectors_have_small_residuals() {
    let m = random_symmetric(40, 9);
    let dec = eigen_decomposition(&m).unwrap();
    for k in 0..40 {
        assert!(dec.residual(&m, k) < 1e-12, "k = {k}");
        let norm: f64 = dec.vector(k).iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }
    let v0 = dec.vector(0);
    let v1 = dec.vector(1);
    assert!(v0.iter().zip(v1).map(|(a, b)| a * b).sum::<f64>().abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trace_and_frobenius_are_preserved(n in 1usize..30, seed in any::<u64>()) {
        let m = random_symmetric(n, seed);
        let v = eigenvalues_symmetric(&m).unwrap();
        prop_assert!(v.windows(2).all(|w| w[0] <= w[1]));
        let tol = 1e-11 * (n as f64) * m.max_abs().max(1.0);
        prop_assert!((v.iter().sum::<f64>() - m.trace()).abs() <= tol);
        let fro: f64 = v.iter().map(|x| x * x).sum();
        prop_assert!((fro - m.frobenius_sq()).abs() <= tol * m.max_abs().max(1.0) * n as f64);
    }
}
