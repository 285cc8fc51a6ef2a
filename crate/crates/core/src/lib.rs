//! Average Schmidt spectra of random bipartite pure states.
//!
//! Two independent routes to `<lambda_i>`, the mean `i`-th largest eigenvalue of the reduced
//! density matrix of a Haar-random pure state on an `N x K` cut:
//!
//! * [`sampler`] draws Gaussian states and diagonalizes their reduced density matrices, with
//!   [`ensemble`] collecting per-index statistics;
//! * [`theory`] evaluates the large-N Marčenko–Pastur prediction `f(x) = N <lambda_i>` at
//!   `x = (i + 1/2)/N`, the tail weight `eta(x)` and related asymptotics.
//!
//! [`cli`] wires both into the `schmidt` command-line tool.

pub mod cli;
pub mod ensemble;
pub mod error;
pub mod linalg;
pub mod plot;
pub mod quad;
pub mod sampler;
pub mod theory;
pub mod types;

pub use error::{Error, Result};
pub use types::{make_dims, x_of_index, BipartiteDims, MPParams, SchmidtSpectrum, StateVector, TheoryCurve};
