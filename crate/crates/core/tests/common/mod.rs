#![allow(dead_code)]

use num_complex::Complex64;
use schmidt_spectrum::linalg::ComplexMatrix;
use schmidt_spectrum::sampler::SampleStream;

pub fn gaussian_matrix(rows: usize, cols: usize, stream: &mut SampleStream) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| {
            let (re, im) = stream.normal_pair();
            Complex64::new(re, im)
        })
        .collect();
    ComplexMatrix::new(rows, cols, data).unwrap()
}

/// Haar-like unitary from Gram-Schmidt on Gaussian columns.
pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    let mut stream = SampleStream::new(seed, 0xC0FFEE);
    let g = gaussian_matrix(n, n, &mut stream);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut v: Vec<Complex64> = (0..n).map(|r| g.get(r, c)).collect();
        for _ in 0..2 {
            for q in &cols {
                let dot: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= dot * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for (c, col) in cols.iter().enumerate() {
        for (r, z) in col.iter().enumerate() {
            u.set(r, c, *z);
        }
    }
    u
}

pub fn diagonal(values: &[f64]) -> ComplexMatrix {
    let mut d = ComplexMatrix::zeros(values.len(), values.len());
    for (i, v) in values.iter().enumerate() {
        d.set(i, i, Complex64::new(*v, 0.0));
    }
    d
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
