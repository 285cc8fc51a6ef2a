mod common;

use common::{diagonal, gaussian_matrix, max_abs_diff, random_unitary};
use proptest::prelude::*;
use schmidt_spectrum::linalg::{
    gram_spectrum, hermitian_eigenvalues, hermitian_eigenvalues_tridiagonal, laguerre_eval, laguerre_zeros,
    HermitianMatrix,
};
use schmidt_spectrum::sampler::SampleStream;

fn random_hermitian(n: usize, seed: u64) -> HermitianMatrix {
    let g = gaussian_matrix(n, n, &mut SampleStream::new(seed, 1));
    let h = g.matmul(&g.adjoint()).unwrap();
    HermitianMatrix::from_matrix(&h).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigenvalues_preserve_trace(n in 1usize..24, seed in any::<u64>()) {
        let h = random_hermitian(n, seed);
        let ev = hermitian_eigenvalues(&h).unwrap();
        let sum: f64 = ev.iter().sum();
        prop_assert!((sum - h.trace()).abs() <= 1e-10 * h.trace().abs().max(1.0));
        prop_assert!(ev.windows(2).all(|p| p[0] >= p[1]));
    }

    #[test]
    fn planted_spectrum_is_recovered(
        mut d in prop::collection::vec(-10.0f64..10.0, 1..20),
        seed in any::<u64>(),
    ) {
        let n = d.len();
        let u = random_unitary(n, seed);
        let m = u.matmul(&diagonal(&d)).unwrap().matmul(&u.adjoint()).unwrap();
        let h = HermitianMatrix::from_matrix(&m).unwrap();
        d.sort_by(|a, b| b.partial_cmp(a).unwrap());
        prop_assert!(max_abs_diff(&hermitian_eigenvalues(&h).unwrap(), &d) < 1e-9);
        prop_assert!(max_abs_diff(&hermitian_eigenvalues_tridiagonal(&h).unwrap(), &d) < 1e-9);
    }

    #[test]
    fn gram_spectrum_is_unitarily_invariant(n in 1usize..10, extra in 0usize..10, seed in any::<u64>()) {
        let k = n + extra;
        let c = gaussian_matrix(n, k, &mut SampleStream::new(seed, 2));
        let u = random_unitary(k, seed ^ 0x5555);
        let rotated = c.matmul(&u).unwrap();
        let a = gram_spectrum(&c).unwrap();
        let b = gram_spectrum(&rotated).unwrap();
        prop_assert!(max_abs_diff(&a, &b) < 1e-9);
    }

    #[test]
    fn jacobi_and_tridiagonal_agree(n in 1usize..30, seed in any::<u64>()) {
        let h = random_hermitian(n, seed);
        let a = hermitian_eigenvalues(&h).unwrap();
        let b = hermitian_eigenvalues_tridiagonal(&h).unwrap();
        let scale = a[0].abs().max(1.0);
        prop_assert!(max_abs_diff(&a, &b) < 1e-11 * scale);
    }
}

#[test]
fn laguerre_residuals_up_to_64() {
    for n in 1..=64 {
        for alpha in [0.0, 0.5, 1.0, 17.0, 49.0, 193.0] {
            let zeros = laguerre_zeros(n, alpha).unwrap();
            assert_eq!(zeros.len(), n);
            assert!(zeros[0] > 0.0);
            assert!(zeros.windows(2).all(|p| p[0] < p[1]));
            for z in &zeros {
                let (value, scale) = laguerre_eval(n, alpha, *z);
                assert!(value.abs() < 1e-8 * scale, "n={n} alpha={alpha} z={z} L={value} scale={scale}");
            }
        }
    }
}
