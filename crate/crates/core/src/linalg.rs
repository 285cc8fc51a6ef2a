//! Dense eigenvalue routines: cyclic complex Jacobi for Hermitian matrices, implicit-shift QL
//! for symmetric tridiagonal matrices, and generalized Laguerre zeros via the Jacobi matrix
//! of the three-term recurrence.
//!
//! Only eigenvalues are computed; no routine here forms eigenvectors.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `|H[j][k] - conj(H[k][j])|` accepted by [`HermitianMatrix::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Gram eigenvalues in `[-CLAMP_TOL, 0)` are rounded up to zero.
pub const CLAMP_TOL: f64 = 1e-12;

const JACOBI_REL_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidShape { rows, cols, reason: "empty matrix" });
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: data.len() });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c).conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Square complex matrix equal to its conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    order: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Validates Hermiticity within [`HERMITIAN_TOL`] and stores the matrix with an exactly
    /// real diagonal and exactly conjugate-symmetric off-diagonal pairs.
    pub fn new(order: usize, mut data: Vec<Complex64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidShape { rows: 0, cols: 0, reason: "empty matrix" });
        }
        if data.len() != order * order {
            return Err(Error::DimensionMismatch { expected: order * order, got: data.len() });
        }
        for j in 0..order {
            for k in j..order {
                let upper = data[j * order + k];
                let lower = data[k * order + j];
                let deviation = (upper - lower.conj()).norm();
                if deviation > HERMITIAN_TOL {
                    return Err(Error::NotHermitian { row: j, col: k, deviation });
                }
                let sym = (upper + lower.conj()) * 0.5;
                data[j * order + k] = sym;
                data[k * order + j] = sym.conj();
            }
        }
        Ok(HermitianMatrix { order, data })
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::InvalidShape { rows: m.rows, cols: m.cols, reason: "not square" });
        }
        Self::new(m.rows, m.data.clone())
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, &d) in diag.iter().enumerate() {
            data[i * n + i] = Complex64::new(d, 0.0);
        }
        Self::new(n, data)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.order + c]
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.data[i * self.order + i].re).sum()
    }
}

/// All eigenvalues of `h` in descending order, by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `h[p][q]` with a diagonal unitary and
/// then applies a real plane rotation, so the matrix stays Hermitian throughout. Iteration
/// stops once the off-diagonal Frobenius norm drops below `1e-13` times the full norm.
pub fn hermitian_eigenvalues(h: &HermitianMatrix) -> Result<Vec<f64>> {
    let n = h.order;
    let mut a = h.data.clone();
    let mut eig = jacobi_in_place(&mut a, n)?;
    eig.sort_by(|x, y| y.total_cmp(x));
    Ok(eig)
}

fn jacobi_in_place(a: &mut [Complex64], n: usize) -> Result<Vec<f64>> {
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let threshold = JACOBI_REL_TOL * JACOBI_REL_TOL * total;
    let zero = Complex64::new(0.0, 0.0);

    let off_norm_sqr = |a: &[Complex64]| -> f64 {
        let mut s = 0.0;
        for j in 0..n {
            for k in (j + 1)..n {
                s += a[j * n + k].norm_sqr();
            }
        }
        2.0 * s
    };

    let mut converged = off_norm_sqr(a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { solver: "Hermitian Jacobi", limit: JACOBI_MAX_SWEEPS });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[p * n + q];
                let mag = g.norm();
                if mag == 0.0 {
                    continue;
                }
                // Rescaling basis vector q by conj(phase) makes the pivot real.
                let phase = g / mag;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    // Row p and the phased row q; column entries follow by conjugation.
                    let rp = a[p * n + k];
                    let rq = phase * a[q * n + k];
                    let new_p = rp * c - rq * s;
                    let new_q = rp * s + rq * c;
                    a[p * n + k] = new_p;
                    a[k * n + p] = new_p.conj();
                    a[q * n + k] = new_q;
                    a[k * n + q] = new_q.conj();
                }
                a[p * n + p] = Complex64::new(app - t * mag, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);
                a[p * n + q] = zero;
                a[q * n + p] = zero;
            }
        }
        converged = off_norm_sqr(a) <= threshold;
    }
    Ok((0..n).map(|i| a[i * n + i].re).collect())
}

/// All eigenvalues of `h` in descending order, by Householder reduction to a Hermitian
/// tridiagonal matrix followed by [`symmetric_tridiagonal_eigenvalues`].
///
/// The reduced matrix has real diagonal `d_k` and complex sub-diagonal `e_k`; a diagonal
/// unitary turns it into the real symmetric tridiagonal matrix with sub-diagonal `|e_k|`.
pub fn hermitian_eigenvalues_tridiagonal(h: &HermitianMatrix) -> Result<Vec<f64>> {
    let mut a = h.data.clone();
    let mut eig = householder_eigenvalues(&mut a, h.order)?;
    eig.reverse();
    Ok(eig)
}

// Ascending eigenvalues; destroys `a`.
fn householder_eigenvalues(a: &mut [Complex64], n: usize) -> Result<Vec<f64>> {
    let zero = Complex64::new(0.0, 0.0);
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];
    for k in 0..n.saturating_sub(1) {
        diag.push(a[k * n + k].re);
        let m = n - k - 1;
        // x = A[k+1.., k], read from row k by Hermiticity
        let x0 = a[k * n + k + 1].conj();
        let xnorm = (k + 1..n).map(|r| a[k * n + r].norm_sqr()).sum::<f64>().sqrt();
        let x0abs = x0.norm();
        off.push(xnorm);
        if (k + 2..n).all(|r| a[k * n + r] == zero) {
            continue;
        }
        let phase = if x0abs == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0abs };
        let v = &mut v[..m];
        for (j, r) in (k + 1..n).enumerate() {
            v[j] = a[k * n + r].conj();
        }
        v[0] += phase * xnorm;
        let tau = 1.0 / (xnorm * (xnorm + x0abs));
        // p = tau * A22 v
        let p = &mut p[..m];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            let mut acc = zero;
            for (aij, vj) in row.iter().zip(v.iter()) {
                acc += aij * vj;
            }
            *pi = acc * tau;
        }
        let vp: Complex64 = v.iter().zip(p.iter()).map(|(vi, pi)| vi.conj() * pi).sum();
        let kk = 0.5 * tau * vp.re;
        for (pi, vi) in p.iter_mut().zip(v.iter()) {
            *pi -= vi * kk;
        }
        // A22 -= v q^dagger + q v^dagger
        for i in 0..m {
            let (vi, qi) = (v[i], p[i]);
            let row = &mut a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            for ((aij, vj), qj) in row.iter_mut().zip(v.iter()).zip(p.iter()) {
                *aij -= vi * qj.conj() + qi * vj.conj();
            }
        }
    }
    diag.push(a[(n - 1) * n + n - 1].re);
    symmetric_tridiagonal_eigenvalues(&diag, &off)
}

/// Eigenvalues of `c * c^dagger`, descending, with tiny negative round-off clamped to zero.
///
/// The Gram matrix is formed explicitly and diagonalized through
/// [`hermitian_eigenvalues_tridiagonal`]; `c` must have no more rows than columns.
pub fn gram_spectrum(c: &ComplexMatrix) -> Result<Vec<f64>> {
    if c.rows > c.cols {
        return Err(Error::InvalidShape { rows: c.rows, cols: c.cols, reason: "rows must not exceed cols" });
    }
    let n = c.rows;
    let mut g = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let rj = c.row(j);
        for k in j..n {
            let rk = c.row(k);
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, y) in rj.iter().zip(rk) {
                acc += x * y.conj();
            }
            if j == k {
                acc.im = 0.0;
            }
            g[j * n + k] = acc;
            g[k * n + j] = acc.conj();
        }
    }
    let mut eig = householder_eigenvalues(&mut g, n)?;
    eig.reverse();
    for v in eig.iter_mut() {
        if *v < 0.0 {
            if *v < -CLAMP_TOL {
                return Err(Error::NegativeEigenvalue { value: *v });
            }
            *v = 0.0;
        }
    }
    Ok(eig)
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and sub/super-diagonal
/// `offdiag`, ascending. Implicit QL with Wilkinson shifts, at most `30 n` iterations in total.
pub fn symmetric_tridiagonal_eigenvalues(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Err(Error::InvalidShape { rows: 0, cols: 0, reason: "empty matrix" });
    }
    if offdiag.len() + 1 != n {
        return Err(Error::DimensionMismatch { expected: n - 1, got: offdiag.len() });
    }
    let mut d = diag.to_vec();
    // e[i] couples d[i] and d[i + 1]; the trailing slot is scratch.
    let mut e = offdiag.to_vec();
    e.push(0.0);

    let limit = 30 * n;
    let mut iterations = 0;
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > limit {
                return Err(Error::NoConvergence { solver: "tridiagonal QL", limit });
            }
            // Wilkinson shift from the leading 2x2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Zeros of the generalized Laguerre polynomial `L_n^(alpha)`, ascending (Golub–Welsch).
pub fn laguerre_zeros(n: usize, alpha: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidArgument("Laguerre degree must be positive".into()));
    }
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::OutOfDomain { name: "alpha", value: alpha, range: "(-1, inf)" });
    }
    let diag: Vec<f64> = (0..n).map(|j| 2.0 * j as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..n).map(|j| (j as f64 * (j as f64 + alpha)).sqrt()).collect();
    symmetric_tridiagonal_eigenvalues(&diag, &off)
}

/// `L_n^(alpha)(x)` by the three-term recurrence, together with the largest magnitude
/// `max_j |L_j^(alpha)(x)|` reached along the way (a scale for residual checks).
pub fn laguerre_eval(n: usize, alpha: f64, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    if n == 0 {
        return (prev, 1.0);
    }
    let mut cur = 1.0 + alpha - x;
    let mut scale = prev.max(cur.abs());
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        scale = scale.max(cur.abs());
    }
    (cur, scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_eigenvalues() {
        let h = HermitianMatrix::from_real_diagonal(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(hermitian_eigenvalues(&h).unwrap(), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_sorted_descending() {
        let h = HermitianMatrix::from_real_diagonal(&[5.0, 2.0, 9.0]).unwrap();
        assert_eq!(hermitian_eigenvalues(&h).unwrap(), vec![9.0, 5.0, 2.0]);
    }

    #[test]
    fn two_by_two_complex() {
        // (2 - l)^2 - |i|^2 = 0  =>  l = 3, 1
        let h = HermitianMatrix::new(2, vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]).unwrap();
        let e = hermitian_eigenvalues(&h).unwrap();
        assert!((e[0] - 3.0).abs() < 1e-14 && (e[1] - 1.0).abs() < 1e-14, "{e:?}");
    }

    #[test]
    fn rejects_non_hermitian() {
        let r = HermitianMatrix::new(2, vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(1.0, 0.0)]);
        assert!(matches!(r, Err(Error::NotHermitian { .. })));
        let r = HermitianMatrix::new(1, vec![c(1.0, 1e-6)]);
        assert!(matches!(r, Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn zero_matrix() {
        let h = HermitianMatrix::from_real_diagonal(&[0.0; 4]).unwrap();
        assert_eq!(hermitian_eigenvalues(&h).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn gram_rank_one_and_identity() {
        let row = ComplexMatrix::new(1, 4, vec![c(0.5, 0.0), c(0.0, 0.5), c(-0.5, 0.0), c(0.0, -0.5)]).unwrap();
        let e = gram_spectrum(&row).unwrap();
        assert_eq!(e.len(), 1);
        assert!((e[0] - 1.0).abs() < 1e-15);
        assert_eq!(gram_spectrum(&ComplexMatrix::identity(2)).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn gram_rejects_tall() {
        let m = ComplexMatrix::zeros(3, 2);
        assert!(matches!(gram_spectrum(&m), Err(Error::InvalidShape { .. })));
    }

    #[test]
    fn gram_rank_deficient_clamps() {
        // Rows are parallel, so one eigenvalue is zero up to round-off.
        let m = ComplexMatrix::new(2, 3, vec![
            c(0.3, 0.1), c(-0.2, 0.4), c(0.5, -0.3),
            c(0.6, 0.2), c(-0.4, 0.8), c(1.0, -0.6),
        ])
        .unwrap();
        let e = gram_spectrum(&m).unwrap();
        assert!(e[1] >= 0.0 && e[1] < 1e-14, "{e:?}");
        assert!((e[0] - m.frobenius_norm_sqr()).abs() < 1e-14);
    }

    #[test]
    fn tridiagonal_examples() {
        assert_eq!(symmetric_tridiagonal_eigenvalues(&[3.0], &[]).unwrap(), vec![3.0]);
        let e = symmetric_tridiagonal_eigenvalues(&[0.0, 0.0], &[1.0]).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-15 && (e[1] - 1.0).abs() < 1e-15);
        assert_eq!(symmetric_tridiagonal_eigenvalues(&[2.0, 2.0, 2.0], &[0.0, 0.0]).unwrap(), vec![2.0; 3]);
        assert!(symmetric_tridiagonal_eigenvalues(&[1.0, 2.0], &[]).is_err());
    }

    #[test]
    fn tridiagonal_matches_dense_jacobi() {
        // Free-particle chain: eigenvalues 2 cos(k pi / (n + 1)).
        let n = 12;
        let e = symmetric_tridiagonal_eigenvalues(&vec![0.0; n], &vec![1.0; n - 1]).unwrap();
        let mut expected: Vec<f64> =
            (1..=n).map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos()).collect();
        expected.sort_by(f64::total_cmp);
        for (a, b) in e.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn laguerre_small_degrees() {
        assert!((laguerre_zeros(1, 0.0).unwrap()[0] - 1.0).abs() < 1e-15);
        let z = laguerre_zeros(2, 0.0).unwrap();
        let s2 = 2f64.sqrt();
        assert!((z[0] - (2.0 - s2)).abs() < 1e-14 && (z[1] - (2.0 + s2)).abs() < 1e-14);
        let z = laguerre_zeros(2, 1.0).unwrap();
        let s3 = 3f64.sqrt();
        assert!((z[0] - (3.0 - s3)).abs() < 1e-14 && (z[1] - (3.0 + s3)).abs() < 1e-14);
        // L_1^(1)(x) = 2 - x
        assert!((laguerre_zeros(1, 1.0).unwrap()[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn laguerre_rejects_bad_alpha() {
        assert!(laguerre_zeros(3, -1.0).is_err());
        assert!(laguerre_zeros(3, f64::NAN).is_err());
        assert!(laguerre_zeros(0, 0.0).is_err());
    }

    #[test]
    fn laguerre_eval_matches_closed_forms() {
        for &x in &[0.0, 0.3, 1.7, 5.0] {
            assert!((laguerre_eval(1, 0.0, x).0 - (1.0 - x)).abs() < 1e-14);
            assert!((laguerre_eval(2, 0.0, x).0 - (1.0 - 2.0 * x + x * x / 2.0)).abs() < 1e-13);
            assert!((laguerre_eval(2, 1.0, x).0 - (3.0 - 3.0 * x + x * x / 2.0)).abs() < 1e-13);
        }
    }
}
