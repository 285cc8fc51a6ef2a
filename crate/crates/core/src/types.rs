//! Domain types shared across the crate and the index-to-abscissa convention.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on the squared norm of a [`StateVector`].
pub const STATE_NORM_TOL: f64 = 1e-12;
/// Tolerance on the trace of a [`SchmidtSpectrum`].
pub const SPECTRUM_TRACE_TOL: f64 = 1e-10;

/// A bipartite cut of an `n_a * n_b` dimensional Hilbert space, always with `n_a <= n_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartiteDims {
    n_a: usize,
    n_b: usize,
}

impl BipartiteDims {
    /// Builds a cut from two subsystem dimensions.
    ///
    /// The arguments are swapped if needed so that the smaller subsystem is `n_a`; the
    /// nonzero part of the spectrum is the same on either side.
    pub fn new(n_a: usize, n_b: usize) -> Result<Self> {
        if n_a == 0 || n_b == 0 {
            return Err(Error::ZeroDimension);
        }
        let (n_a, n_b) = if n_a <= n_b { (n_a, n_b) } else { (n_b, n_a) };
        Ok(BipartiteDims { n_a, n_b })
    }

    /// Cut of `qubits` qubits into `qubits/2 - r` and `qubits/2 + r` qubits.
    pub fn from_qubits(qubits: u32, r: u32) -> Result<Self> {
        if qubits % 2 != 0 || 2 * r > qubits {
            return Err(Error::InvalidQubitCut { qubits, r });
        }
        let half = qubits / 2;
        let small = half - r;
        let large = half + r;
        if large >= usize::BITS {
            return Err(Error::InvalidQubitCut { qubits, r });
        }
        Self::new(1usize << small, 1usize << large)
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    /// Total Hilbert space dimension `n_a * n_b`.
    pub fn total(&self) -> usize {
        self.n_a * self.n_b
    }

    /// The ratio `w = n_a / n_b`, in `(0, 1]`.
    pub fn ratio(&self) -> f64 {
        self.n_a as f64 / self.n_b as f64
    }
}

/// Convenience wrapper for [`BipartiteDims::new`].
pub fn make_dims(n_a: usize, n_b: usize) -> Result<BipartiteDims> {
    BipartiteDims::new(n_a, n_b)
}

/// Scaled position `(i + 1/2) / n` of the `i`-th largest eigenvalue.
pub fn x_of_index(i: usize, n: usize) -> Result<f64> {
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    Ok((i as f64 + 0.5) / n as f64)
}

/// A normalized pure state on the full bipartite space.
///
/// Amplitudes are stored with the subsystem-A label as the slow index, so amplitude
/// `j * n_b + k` multiplies `|j>_A |k>_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if amplitudes.is_empty() || (norm_sqr - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(StateVector { amplitudes })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Eigenvalues of a reduced density matrix: descending, in `[0, 1]`, unit sum.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    values: Vec<f64>,
}

impl SchmidtSpectrum {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpectrum("empty spectrum".into()));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidSpectrum(format!("value {v} outside [0, 1]")));
        }
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpectrum("values not in descending order".into()));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SPECTRUM_TRACE_TOL {
            return Err(Error::InvalidSpectrum(format!("trace {sum} differs from 1")));
        }
        Ok(SchmidtSpectrum { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sum of the `k` smallest eigenvalues.
    pub fn tail_weight(&self, k: usize) -> f64 {
        let n = self.values.len();
        self.values[n - k.min(n)..].iter().sum()
    }
}

/// Edges of the Marčenko–Pastur support for ratio `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MPParams {
    pub a: f64,
    pub b: f64,
    pub w: f64,
}

/// Sampled `(x, value)` pairs of a theory curve.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TheoryCurve {
    pub points: Vec<(f64, f64)>,
}

impl TheoryCurve {
    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
