//! Per-index ensemble statistics, exact small-dimension values, and comparison against the
//! large-N theory.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::theory::{lambda_mean_theory, lambda_min_conjecture};
use crate::types::{x_of_index, BipartiteDims, SchmidtSpectrum};

/// Largest subsystem dimension accepted by [`joint_density`].
pub const JOINT_DENSITY_MAX_N: usize = 8;

/// Streaming mean and second central moment of each `lambda_i` (Welford, mergeable).
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    dims: BipartiteDims,
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl EnsembleStats {
    pub fn new(dims: BipartiteDims) -> Self {
        let n = dims.n_a();
        EnsembleStats { dims, count: 0, mean: vec![0.0; n], m2: vec![0.0; n] }
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn means(&self) -> &[f64] {
        &self.mean
    }

    /// Sums of squared deviations from the mean.
    pub fn m2(&self) -> &[f64] {
        &self.m2
    }

    pub fn accumulate(&mut self, spectrum: &SchmidtSpectrum) -> Result<()> {
        let values = spectrum.values();
        if values.len() != self.mean.len() {
            return Err(Error::DimensionMismatch { expected: self.mean.len(), got: values.len() });
        }
        self.count += 1;
        let n = self.count as f64;
        for ((m, s), &v) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(values) {
            let delta = v - *m;
            *m += delta / n;
            *s += delta * (v - *m);
        }
        Ok(())
    }

    /// Statistics of the union of both sample sets.
    pub fn merge(&self, other: &EnsembleStats) -> Result<EnsembleStats> {
        let mut out = self.clone();
        out.merge_in(other)?;
        Ok(out)
    }

    pub fn merge_in(&mut self, other: &EnsembleStats) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::InvalidArgument(format!(
                "cannot merge statistics for {:?} into {:?}",
                other.dims, self.dims
            )));
        }
        if other.count == 0 {
            return Ok(());
        }
        if self.count == 0 {
            *self = other.clone();
            return Ok(());
        }
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        for i in 0..self.mean.len() {
            let delta = other.mean[i] - self.mean[i];
            self.mean[i] += delta * nb / n;
            self.m2[i] += other.m2[i] + delta * delta * na * nb / n;
        }
        self.count += other.count;
        Ok(())
    }

    /// Sample standard deviation of each `lambda_i`.
    pub fn widths(&self) -> Result<Vec<f64>> {
        if self.count < 2 {
            return Err(Error::InvalidArgument(format!("widths need at least 2 samples, have {}", self.count)));
        }
        let d = (self.count - 1) as f64;
        Ok(self.m2.iter().map(|s| (s / d).max(0.0).sqrt()).collect())
    }

    /// Standard errors of the means, `width / sqrt(count)`.
    pub fn stderrs(&self) -> Result<Vec<f64>> {
        let root = (self.count as f64).sqrt();
        Ok(self.widths()?.into_iter().map(|w| w / root).collect())
    }
}

/// Joint density of the eigenvalues of a random reduced density matrix, with respect to
/// Lebesgue measure on the simplex coordinates `lambda_0 .. lambda_{N-2}`, for unordered
/// eigenvalues. Multiply by `N!` for the density of the ordered spectrum.
pub fn joint_density(lambdas: &[f64], dims: BipartiteDims) -> Result<f64> {
    let n = dims.n_a();
    let k = dims.n_b();
    if n > JOINT_DENSITY_MAX_N {
        return Err(Error::InvalidArgument(format!(
            "joint density supports N <= {JOINT_DENSITY_MAX_N}, got {n}"
        )));
    }
    if lambdas.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: lambdas.len() });
    }
    let sum: f64 = lambdas.iter().sum();
    if lambdas.iter().any(|&l| !(0.0..=1.0).contains(&l)) || (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument("eigenvalues must lie on the probability simplex".into()));
    }
    let mut log_c = ln_gamma((n * k) as f64);
    for j in 0..n {
        log_c -= ln_gamma((k - j) as f64) + ln_gamma((n - j + 1) as f64);
    }
    let mut log_p = log_c;
    if k > n {
        for &l in lambdas {
            if l == 0.0 {
                return Ok(0.0);
            }
            log_p += (k - n) as f64 * l.ln();
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (lambdas[i] - lambdas[j]).abs();
            if d == 0.0 {
                return Ok(0.0);
            }
            log_p += 2.0 * d.ln();
        }
    }
    Ok(log_p.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureKind {
    Exact,
    Conjecture,
}

/// Known mean of one eigenvalue at a symmetric cut, as a fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fixture {
    pub n: usize,
    pub index: usize,
    pub numerator: u64,
    pub denominator: u64,
    pub kind: FixtureKind,
}

impl Fixture {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    pub fn dims(&self) -> BipartiteDims {
        BipartiteDims::new(self.n, self.n).expect("fixture dims are positive")
    }
}

/// Exact means for `N = K = 2, 3`, and the conjectured `1/N^3` smallest mean for `N = 4..=6`.
pub fn exact_fixtures() -> Vec<Fixture> {
    use FixtureKind::*;
    let f = |n, index, numerator, denominator, kind| Fixture { n, index, numerator, denominator, kind };
    let mut table = vec![
        f(2, 0, 7, 8, Exact),
        f(2, 1, 1, 8, Exact),
        f(3, 0, 313, 432, Exact),
        f(3, 1, 103, 432, Exact),
        f(3, 2, 1, 27, Exact),
    ];
    for n in 4..=6usize {
        table.push(f(n, n - 1, 1, (n * n * n) as u64, Conjecture));
    }
    table
}

/// Looks up a fixture by `(N, index)`.
pub fn fixture(n: usize, index: usize) -> Option<Fixture> {
    exact_fixtures().into_iter().find(|f| f.n == n && f.index == index)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub index: usize,
    pub x: f64,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub theory_mean: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSummary {
    pub max: f64,
    pub median: f64,
}

/// Monte Carlo means against `f(x_i)/N`, index by index.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub dims: BipartiteDims,
    pub samples: u64,
    pub rows: Vec<ComparisonRow>,
    pub all: ErrorSummary,
    /// Summary over `i <= N - 2`; `None` when `N = 1`.
    pub without_last: Option<ErrorSummary>,
    /// `1/N^3` for symmetric cuts, the conjectured exact mean of the smallest eigenvalue.
    pub conjectured_min: Option<f64>,
}

fn summarize(errs: &[f64]) -> Option<ErrorSummary> {
    if errs.is_empty() {
        return None;
    }
    let mut sorted = errs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    let median = if m % 2 == 1 { sorted[m / 2] } else { 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]) };
    Some(ErrorSummary { max: sorted[m - 1], median })
}

pub fn compare(stats: &EnsembleStats) -> Result<ComparisonReport> {
    let dims = stats.dims();
    let n = dims.n_a();
    let stderr = stats.stderrs()?;
    let rows = (0..n)
        .map(|i| {
            let theory = lambda_mean_theory(i, dims)?;
            let mc = stats.means()[i];
            Ok(ComparisonRow {
                index: i,
                x: x_of_index(i, n)?,
                mc_mean: mc,
                mc_stderr: stderr[i],
                theory_mean: theory,
                relative_error: (mc - theory).abs() / theory,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let errs: Vec<f64> = rows.iter().map(|r| r.relative_error).collect();
    let all = summarize(&errs).expect("at least one index");
    let without_last = summarize(&errs[..n - 1]);
    let conjectured_min = (dims.n_a() == dims.n_b()).then(|| lambda_min_conjecture(n));
    Ok(ComparisonReport { dims, samples: stats.count(), rows, all, without_last, conjectured_min })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive_simpson;

    fn spec(v: &[f64]) -> SchmidtSpectrum {
        SchmidtSpectrum::new(v.to_vec()).unwrap()
    }

    fn d(n: usize, k: usize) -> BipartiteDims {
        BipartiteDims::new(n, k).unwrap()
    }

    #[test]
    fn single_sample() {
        let mut s = EnsembleStats::new(d(2, 2));
        s.accumulate(&spec(&[0.7, 0.3])).unwrap();
        assert_eq!(s.means(), &[0.7, 0.3]);
        assert_eq!(s.count(), 1);
        assert!(s.widths().is_err());
    }

    #[test]
    fn identical_samples_have_no_spread() {
        let mut s = EnsembleStats::new(d(2, 2));
        s.accumulate(&spec(&[0.6, 0.4])).unwrap();
        s.accumulate(&spec(&[0.6, 0.4])).unwrap();
        assert_eq!(s.m2(), &[0.0, 0.0]);
        assert_eq!(s.widths().unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn accumulate_rejects_wrong_length() {
        let mut s = EnsembleStats::new(d(3, 3));
        assert!(matches!(s.accumulate(&spec(&[0.6, 0.4])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn merge_identity_and_mismatch() {
        let mut s = EnsembleStats::new(d(2, 2));
        s.accumulate(&spec(&[0.9, 0.1])).unwrap();
        s.accumulate(&spec(&[0.6, 0.4])).unwrap();
        let e = EnsembleStats::new(d(2, 2));
        assert_eq!(s.merge(&e).unwrap(), s);
        assert_eq!(e.merge(&s).unwrap(), s);
        assert!(s.merge(&EnsembleStats::new(d(2, 3))).is_err());
    }

    #[test]
    fn two_by_two_widths_equal() {
        let mut s = EnsembleStats::new(d(2, 2));
        for l0 in [0.9, 0.55, 0.75, 0.6, 0.99] {
            s.accumulate(&spec(&[l0, 1.0 - l0])).unwrap();
        }
        let w = s.widths().unwrap();
        assert!((w[0] - w[1]).abs() < 1e-15);
    }

    #[test]
    fn joint_density_two_by_two_reduction() {
        let dims = d(2, 2);
        for &l in &[0.55, 0.7, 0.95] {
            let p = 2.0 * joint_density(&[l, 1.0 - l], dims).unwrap();
            let expected = 6.0 * (2.0 * l - 1.0f64).powi(2);
            assert!((p - expected).abs() < 1e-12, "{p} vs {expected}");
        }
        let ordered = |l: f64| 2.0 * joint_density(&[l, 1.0 - l], dims).unwrap();
        let mass = adaptive_simpson(ordered, 0.5, 1.0, 1e-13);
        assert!((mass - 1.0).abs() < 1e-12);
        let mean = adaptive_simpson(|l| l * ordered(l), 0.5, 1.0, 1e-13);
        assert!((mean - 7.0 / 8.0).abs() < 1e-12);
    }

    #[test]
    fn joint_density_three_by_three_simplex() {
        // Midpoint rule on the unit square mapped onto the 2-simplex by
        // (s, t) -> (s, (1 - s) t, (1 - s)(1 - t)), Jacobian 1 - s; ordered region only.
        let dims = d(3, 3);
        let m = 800;
        let h = 1.0 / m as f64;
        let (mut mass, mut m0, mut m1) = (0.0, 0.0, 0.0);
        for a in 0..m {
            for b in 0..m {
                let s = (a as f64 + 0.5) * h;
                let t = (b as f64 + 0.5) * h;
                let l0 = s;
                let l1 = (1.0 - s) * t;
                let l2 = 1.0 - l0 - l1;
                if !(l0 > l1 && l1 > l2) {
                    continue;
                }
                let p = 6.0 * joint_density(&[l0, l1, l2], dims).unwrap() * (1.0 - s) * h * h;
                mass += p;
                m0 += l0 * p;
                m1 += l1 * p;
            }
        }
        assert!((mass - 1.0).abs() < 1e-3, "{mass}");
        assert!((m0 / mass - 313.0 / 432.0).abs() < 1e-3, "{}", m0 / mass);
        assert!((m1 / mass - 103.0 / 432.0).abs() < 1e-3, "{}", m1 / mass);
    }

    #[test]
    fn joint_density_edge_cases() {
        assert_eq!(joint_density(&[0.5, 0.5], d(2, 2)).unwrap(), 0.0);
        assert_eq!(joint_density(&[1.0, 0.0], d(2, 3)).unwrap(), 0.0);
        assert!(joint_density(&[0.6, 0.6], d(2, 2)).is_err());
        assert!(joint_density(&[0.6, 0.4], d(3, 3)).is_err());
        assert!(joint_density(&[0.1; 9], d(9, 9)).is_err());
        let big = joint_density(&[0.3, 0.25, 0.25 - 1e-3, 0.2 + 1e-3], d(4, 500)).unwrap();
        assert!(big.is_finite());
    }

    #[test]
    fn fixtures_table() {
        assert_eq!(fixture(2, 0).unwrap().value(), 0.875);
        assert_eq!(fixture(3, 1).unwrap().value(), 103.0 / 432.0);
        assert_eq!(fixture(5, 4).unwrap().kind, FixtureKind::Conjecture);
        assert!(fixture(4, 0).is_none());
        // row sums, exactly, over a common denominator
        for n in [2usize, 3] {
            let rows: Vec<Fixture> = exact_fixtures().into_iter().filter(|f| f.n == n).collect();
            let den: u64 = rows.iter().map(|f| f.denominator).max().unwrap();
            let num: u64 = rows
                .iter()
                .map(|f| {
                    assert_eq!(den % f.denominator, 0);
                    f.numerator * (den / f.denominator)
                })
                .sum();
            assert_eq!(num, den);
        }
        for f in exact_fixtures().into_iter().filter(|f| f.index == f.n - 1) {
            assert_eq!(f.value(), lambda_min_conjecture(f.n));
        }
    }

    #[test]
    fn summary_median() {
        let s = summarize(&[0.3, 0.1, 0.2]).unwrap();
        assert_eq!((s.max, s.median), (0.3, 0.2));
        let s = summarize(&[0.4, 0.1, 0.2, 0.3]).unwrap();
        assert!((s.median - 0.25).abs() < 1e-15);
        assert!(summarize(&[]).is_none());
    }
}
