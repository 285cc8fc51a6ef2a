//! Large-N theory of the average Schmidt spectrum.
//!
//! With `tau = N * lambda` the scaled eigenvalue and `w = N / K`, the eigenvalue density is
//! the Marčenko–Pastur law on `[a, b] = [(1 - sqrt w)^2, (1 + sqrt w)^2]`. The average
//! spectrum `f(x) = N <lambda_i>` at `x = (i + 1/2) / N` solves `f'(x) = -1 / p(f(x))` with
//! `f(0) = b` and `f(1) = a`, which integrates to the parametric form
//!
//! ```text
//! f = a + (b - a) cos^2(phi)
//! (pi/2) x = (1+w)/(2w) phi - sin(2 phi)/(2 sqrt w) - (1-w)/(2w) atan(sqrt(a/b) tan phi)
//! ```
//!
//! for `phi` in `[0, pi/2]`. The tail weight `eta(x) = int_x^1 f` has the closed form
//! `1 - (2 phi - sin(4 phi)/2) / pi` for every `w`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;
use crate::types::{x_of_index, BipartiteDims, MPParams, TheoryCurve};

/// Absolute tolerance of the quadrature behind [`eta`].
pub const ETA_QUAD_TOL: f64 = 1e-10;

const PHI_BISECT_WIDTH: f64 = 1e-13;
// Below this sqrt(w) the arctan term is evaluated from its power series.
const SERIES_SQRT_W: f64 = 0.25;

/// Solution of the implicit relation for one `(x, w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiSolution {
    pub x: f64,
    pub phi: f64,
    pub w: f64,
}

fn check_w(w: f64) -> Result<()> {
    if w > 0.0 && w <= 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain { name: "w", value: w, range: "(0, 1]" })
    }
}

fn check_x(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfDomain { name: "x", value: x, range: "[0, 1]" })
    }
}

pub fn mp_params(w: f64) -> Result<MPParams> {
    check_w(w)?;
    let s = w.sqrt();
    Ok(MPParams { a: (1.0 - s) * (1.0 - s), b: (1.0 + s) * (1.0 + s), w })
}

impl MPParams {
    /// Marčenko–Pastur density of the scaled eigenvalue, normalized to unit mass.
    pub fn density(&self, tau: f64) -> f64 {
        if tau < self.a || tau > self.b {
            return 0.0;
        }
        if tau == 0.0 {
            return f64::INFINITY;
        }
        ((tau - self.a) * (self.b - tau)).sqrt() / (2.0 * PI * self.w * tau)
    }
}

/// `p(tau)` for ratio `w`; zero outside `[a, b]`.
pub fn mp_density(tau: f64, w: f64) -> Result<f64> {
    Ok(mp_params(w)?.density(tau))
}

/// `x(phi)` for ratio `w`: the inverse of [`phi_of_x`].
pub fn x_of_phi(phi: f64, w: f64) -> f64 {
    let u = w.sqrt();
    let (s2, c2) = (2.0 * phi).sin_cos();
    let half_pi_x = if w == 1.0 {
        phi - 0.5 * s2
    } else if u < SERIES_SQRT_W {
        // atan2(u sin 2phi, 1 + u cos 2phi) - u sin 2phi, divided by u^2
        let mut sum = 0.0;
        let mut upow = 1.0;
        let mut k = 2;
        loop {
            let term = upow * (2.0 * k as f64 * phi).sin() / k as f64;
            sum += if k % 2 == 0 { -term } else { term };
            if upow < 1e-17 {
                break;
            }
            upow *= u;
            k += 1;
        }
        phi - 0.5 * u * s2 + 0.5 * (1.0 - w) * sum
    } else {
        // phi - atan(sqrt(a/b) tan phi), without the tangent pole
        let diff = (u * s2).atan2(1.0 + u * c2);
        phi + (1.0 - w) / (2.0 * w) * diff - s2 / (2.0 * u)
    };
    half_pi_x / FRAC_PI_2
}

/// `dx/dphi`, obtained by differentiating the implicit relation.
pub fn dx_dphi(phi: f64, w: f64) -> f64 {
    let s2 = (2.0 * phi).sin();
    let tau = f_of_phi(phi, w);
    if tau == 0.0 {
        // phi = pi/2 at w = 1, where sin^2(2 phi) / cos^2(phi) -> 4 sin^2(phi)
        return 4.0 * phi.sin().powi(2) / PI;
    }
    4.0 * s2 * s2 / (PI * tau)
}

/// `f` as a function of the parameter `phi`.
pub fn f_of_phi(phi: f64, w: f64) -> f64 {
    let s = w.sqrt();
    let a = (1.0 - s) * (1.0 - s);
    let b = (1.0 + s) * (1.0 + s);
    let c = phi.cos();
    a + (b - a) * c * c
}

/// Solves the implicit relation for `phi` in `[0, pi/2]`.
pub fn phi_of_x(x: f64, w: f64) -> Result<PhiSolution> {
    check_x(x)?;
    check_w(w)?;
    if x == 0.0 {
        return Ok(PhiSolution { x, phi: 0.0, w });
    }
    if x == 1.0 {
        return Ok(PhiSolution { x, phi: FRAC_PI_2, w });
    }
    let phi = solve_monotone(|p| x_of_phi(p, w) - x, |p| dx_dphi(p, w), 0.0, FRAC_PI_2);
    Ok(PhiSolution { x, phi, w })
}

/// Root of an increasing function on `[lo, hi]`: bisection to `PHI_BISECT_WIDTH`, then up
/// to three Newton steps accepted only while they stay in the bracket and shrink the residual.
fn solve_monotone<F, D>(g: F, dg: D, mut lo: f64, mut hi: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    while hi - lo > PHI_BISECT_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (glo, ghi) = (g(lo), g(hi));
    let (mut best, mut res) = if glo.abs() <= ghi.abs() { (lo, glo) } else { (hi, ghi) };
    for _ in 0..3 {
        let d = dg(best);
        if !(d > 0.0) || res == 0.0 {
            break;
        }
        let cand = best - res / d;
        if cand < lo || cand > hi {
            break;
        }
        let r = g(cand);
        if r.abs() >= res.abs() {
            break;
        }
        best = cand;
        res = r;
    }
    best
}

/// Scaled average spectrum `f(x) = N <lambda>` at position `x`.
pub fn f_of_x(x: f64, w: f64) -> Result<f64> {
    let sol = phi_of_x(x, w)?;
    if x == 1.0 {
        return Ok(mp_params(w)?.a);
    }
    Ok(f_of_phi(sol.phi, w))
}

/// `df/dx` at interior `x`, equal to `-1 / p(f(x))`.
pub fn f_prime(x: f64, w: f64) -> Result<f64> {
    let sol = phi_of_x(x, w)?;
    let u = w.sqrt();
    let s2 = (2.0 * sol.phi).sin();
    Ok(-PI * u * f_of_phi(sol.phi, w) / s2)
}

/// Small-`x` behaviour of the symmetric-cut `f`: `4 - 4 (3 pi x / 4)^(2/3)`.
///
/// Near `phi = 0`, `f = 4 - 4 phi^2 + ...` and `x = 4 phi^3 / (3 pi) + ...`, which fixes the
/// exponent at 2/3.
pub fn f_expansion_small_x(x: f64) -> f64 {
    4.0 - 4.0 * (0.75 * PI * x).powf(2.0 / 3.0)
}

/// Behaviour of the symmetric-cut `f` as `x -> 1`: `pi^2 (1 - x)^2 / 4`.
pub fn f_expansion_near_1(x: f64) -> f64 {
    let t = 1.0 - x;
    PI * PI * t * t / 4.0
}

/// Leading small-`w` form: `1 + 2 sqrt(w) cos(2 phi)` with `(pi/2) x = phi - sin(4 phi)/4`.
pub fn f_asymptotic_small_w(x: f64, w: f64) -> Result<f64> {
    check_x(x)?;
    check_w(w)?;
    let phi = if x == 0.0 {
        0.0
    } else if x == 1.0 {
        FRAC_PI_2
    } else {
        solve_monotone(
            |p| (p - 0.25 * (4.0 * p).sin()) / FRAC_PI_2 - x,
            |p| (1.0 - (4.0 * p).cos()) / FRAC_PI_2,
            0.0,
            FRAC_PI_2,
        )
    };
    Ok(1.0 + 2.0 * w.sqrt() * (2.0 * phi).cos())
}

/// Tail weight from the closed form `1 - (2 phi - sin(4 phi)/2) / pi`.
pub fn eta_closed_form(x: f64, w: f64) -> Result<f64> {
    let sol = phi_of_x(x, w)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x == 1.0 {
        return Ok(0.0);
    }
    let phi = sol.phi;
    Ok(1.0 - (2.0 * phi - 0.5 * (4.0 * phi).sin()) / PI)
}

// int_{phi0}^{pi/2} f(phi) x'(phi) dphi, with x'(phi) from term-by-term differentiation
// of the implicit relation in its original arctan form.
fn tail_integral(phi0: f64, w: f64) -> f64 {
    let u = w.sqrt();
    let a = (1.0 - u) * (1.0 - u);
    let b = (1.0 + u) * (1.0 + u);
    let integrand = move |phi: f64| {
        let (s, c) = phi.sin_cos();
        let tau = a + (b - a) * c * c;
        let dx = if w == 1.0 {
            1.0 - (2.0 * phi).cos()
        } else {
            (1.0 + w) / (2.0 * w) - (2.0 * phi).cos() / u
                - (1.0 - w) / (2.0 * w) * (a * b).sqrt() / (b * c * c + a * s * s)
        };
        tau * dx / FRAC_PI_2
    };
    adaptive_simpson(integrand, phi0, FRAC_PI_2, ETA_QUAD_TOL)
}

/// Weight `int_x^1 f(x') dx'` of the discarded tail when the fraction `x` of largest
/// eigenvalues is kept, by quadrature in `phi`, normalized so that `eta(0) = 1`.
pub fn eta(x: f64, w: f64) -> Result<f64> {
    let sol = phi_of_x(x, w)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x == 1.0 {
        return Ok(0.0);
    }
    Ok(tail_integral(sol.phi, w) / tail_integral(0.0, w))
}

/// Tail weight when the `m` largest eigenvalues are kept; zero once `m >= n_a`.
pub fn eta_for_retained_count(m: f64, dims: BipartiteDims) -> Result<f64> {
    if !(m > 0.0) {
        return Err(Error::OutOfDomain { name: "m", value: m, range: "(0, inf)" });
    }
    let n = dims.n_a() as f64;
    if m >= n {
        return Ok(0.0);
    }
    eta(m / n, dims.ratio())
}

/// Approximate ensemble width of `lambda_i` at a symmetric cut: `4 / (n^2 sqrt(4/f - 1))`.
///
/// Fails where `f(x) >= 4 - 1e-9`, i.e. at `x = 0`.
pub fn width_estimate(x: f64, n: usize) -> Result<f64> {
    let f = f_of_x(x, 1.0)?;
    if f >= 4.0 - 1e-9 {
        return Err(Error::OutOfDomain { name: "x", value: x, range: "f(x) < 4" });
    }
    let n = n as f64;
    Ok(4.0 / (n * n * (4.0 / f - 1.0).sqrt()))
}

/// Half the mean spacing `|f'(x)| / (2 n^2)` between neighbouring eigenvalues.
pub fn half_spacing_estimate(x: f64, n: usize, w: f64) -> Result<f64> {
    let n = n as f64;
    Ok(f_prime(x, w)?.abs() / (2.0 * n * n))
}

/// `f(x_i, w) / n_a`, the large-N estimate of `<lambda_i>`.
pub fn lambda_mean_theory(i: usize, dims: BipartiteDims) -> Result<f64> {
    let n = dims.n_a();
    let x = x_of_index(i, n)?;
    Ok(f_of_x(x, dims.ratio())? / n as f64)
}

/// Conjectured exact mean of the smallest eigenvalue at a symmetric cut, `1 / n^3`.
pub fn lambda_min_conjecture(n: usize) -> f64 {
    let n = n as f64;
    1.0 / (n * n * n)
}

/// `f` sampled at `points` positions. With `include_endpoints` the grid is
/// `x_j = j / (points - 1)`; otherwise the midpoints `(j + 1/2) / points`.
pub fn f_curve(points: usize, w: f64, include_endpoints: bool) -> Result<TheoryCurve> {
    curve(points, include_endpoints, |x| f_of_x(x, w))
}

/// `eta` on the same grid conventions as [`f_curve`].
pub fn eta_curve(points: usize, w: f64, include_endpoints: bool) -> Result<TheoryCurve> {
    curve(points, include_endpoints, |x| eta(x, w))
}

fn curve<F: Fn(f64) -> Result<f64>>(points: usize, include_endpoints: bool, f: F) -> Result<TheoryCurve> {
    let min = if include_endpoints { 2 } else { 1 };
    if points < min {
        return Err(Error::InvalidArgument(format!("grid needs at least {min} points")));
    }
    let xs: Vec<f64> = if include_endpoints {
        (0..points).map(|j| j as f64 / (points - 1) as f64).collect()
    } else {
        (0..points).map(|j| (j as f64 + 0.5) / points as f64).collect()
    };
    let points = xs.into_iter().map(|x| Ok((x, f(x)?))).collect::<Result<Vec<_>>>()?;
    Ok(TheoryCurve { points })
}
