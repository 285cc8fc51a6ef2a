//! Random pure states and their Schmidt spectra.
//!
//! Sample `j` of a run with seed `s` draws from ChaCha8 keyed by `s` on stream `j`, so every
//! sample is fixed by `(s, j)` alone. Samples are accumulated in fixed-size chunks and the
//! chunk results are merged in index order, which makes a run bit-reproducible for any
//! number of worker threads.

use std::f64::consts::TAU;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::ensemble::EnsembleStats;
use crate::error::{Error, Result};
use crate::linalg::{gram_spectrum, ComplexMatrix};
use crate::types::{BipartiteDims, SchmidtSpectrum, StateVector};

/// Samples accumulated sequentially before a merge.
pub const CHUNK_SIZE: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub dims: BipartiteDims,
    pub sample_count: u64,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn new(dims: BipartiteDims, sample_count: u64, seed: u64) -> Result<Self> {
        if sample_count == 0 {
            return Err(Error::InvalidArgument("sample_count must be at least 1".into()));
        }
        Ok(SamplerConfig { dims, sample_count, seed })
    }
}

/// Deterministic uniform/normal stream for one sample.
pub struct SampleStream {
    rng: ChaCha8Rng,
}

impl SampleStream {
    pub fn new(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        SampleStream { rng }
    }

    /// Uniform on the open interval `(0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Two independent standard normals by the Box–Muller transform.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        (r * c, r * s)
    }
}

/// Random state with i.i.d. standard complex Gaussian amplitudes, normalized.
pub fn draw_state(dims: BipartiteDims, stream: &mut SampleStream) -> StateVector {
    let len = dims.total();
    loop {
        let mut amps: Vec<Complex64> = (0..len)
            .map(|_| {
                let (re, im) = stream.normal_pair();
                Complex64::new(re, im)
            })
            .collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            continue;
        }
        let inv = 1.0 / norm;
        for z in amps.iter_mut() {
            *z *= inv;
        }
        if let Ok(state) = StateVector::new(amps) {
            return state;
        }
    }
}

/// Eigenvalues of the reduced density matrix on subsystem A.
pub fn schmidt_spectrum(state: &StateVector, dims: BipartiteDims) -> Result<SchmidtSpectrum> {
    if state.len() != dims.total() {
        return Err(Error::DimensionMismatch { expected: dims.total(), got: state.len() });
    }
    let c = ComplexMatrix::new(dims.n_a(), dims.n_b(), state.amplitudes().to_vec())?;
    let mut values = gram_spectrum(&c)?;
    // Divide out the residual norm error so the trace is 1 to round-off.
    let sum: f64 = values.iter().sum();
    for v in values.iter_mut() {
        *v = (*v / sum).min(1.0);
    }
    SchmidtSpectrum::new(values)
}

/// Spectrum of the `index`-th sample of a run seeded with `seed`.
pub fn sample_spectrum(dims: BipartiteDims, seed: u64, index: u64) -> Result<SchmidtSpectrum> {
    let mut stream = SampleStream::new(seed, index);
    let state = draw_state(dims, &mut stream);
    schmidt_spectrum(&state, dims)
}

/// Runs `config.sample_count` samples and returns per-index statistics of the spectra.
///
/// `workers` sets the thread count (`None` uses the global rayon pool). `progress`, if
/// given, is called with the running number of finished samples after each chunk.
pub fn sample_ensemble(
    config: &SamplerConfig,
    workers: Option<usize>,
    progress: Option<&(dyn Fn(u64) + Sync)>,
) -> Result<EnsembleStats> {
    let chunks = config.sample_count.div_ceil(CHUNK_SIZE);
    let done = AtomicU64::new(0);
    let run_chunk = |c: u64| -> Result<EnsembleStats> {
        let start = c * CHUNK_SIZE;
        let end = (start + CHUNK_SIZE).min(config.sample_count);
        let mut acc = EnsembleStats::new(config.dims);
        for j in start..end {
            acc.accumulate(&sample_spectrum(config.dims, config.seed, j)?)?;
        }
        if let Some(report) = progress {
            let total = done.fetch_add(end - start, Ordering::Relaxed) + (end - start);
            report(total);
        }
        Ok(acc)
    };
    let parts: Result<Vec<EnsembleStats>> = match workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            pool.install(|| (0..chunks).into_par_iter().map(run_chunk).collect())
        }
        None => (0..chunks).into_par_iter().map(run_chunk).collect(),
    };
    let mut total = EnsembleStats::new(config.dims);
    for part in parts? {
        total.merge_in(&part)?;
    }
    Ok(total)
}
