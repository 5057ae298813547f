//! Tail primitives of the chi-squared distribution with one degree of freedom.
//!
//! Everything here is built on the identity `P(X > x) = erfc(sqrt(x / 2))` for
//! `X ~ chi2(1)`, i.e. `X = Z^2` with `Z` standard normal.

use std::f64::consts::{FRAC_2_PI, PI};

use libm::erfc;

use crate::error::{Error, Result};

/// Survival values below this are treated as an underflow when they are about
/// to be used as a divisor.
pub const SURVIVAL_FLOOR: f64 = 1e-300;

/// Bracket width at which quantile inversion switches from bisection to Newton.
const BISECTION_WIDTH: f64 = 1e-6;

/// An upper-tail level together with the threshold that realizes it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSpec {
    /// Tail probability `P(X > t)`, in `(0, 1]`.
    pub alpha: f64,
    /// The threshold `t >= 0`.
    pub t: f64,
}

/// `E(X | X > t)` for `X ~ chi2(1)`, and its square root.
///
/// Writing `X = Z^2`, `tail_mean` is `E(Z^2 | Z^2 > t)` and `tail_root` is the
/// root-mean-square of the conditioned normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalMoment {
    pub threshold: f64,
    pub tail_mean: f64,
    pub tail_root: f64,
}

/// `P(X > x)` for `X ~ chi2(1)`.
pub fn survival(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("survival requires x >= 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(erfc((0.5 * x).sqrt()))
}

/// Density `(2 pi x)^(-1/2) exp(-x/2)` of chi2(1).
pub fn density(x: f64) -> f64 {
    if x <= 0.0 {
        return if x == 0.0 { f64::INFINITY } else { 0.0 };
    }
    (-0.5 * x).exp() / (2.0 * PI * x).sqrt()
}

/// The threshold `t` with `P(X > t) = alpha`.
///
/// Brackets and bisects in `t` down to a width of `1e-6`, then polishes with
/// Newton steps on `ln P(X > u^2)` as a function of `u = sqrt(t)`. That
/// function is smooth at the origin and concave, so after the first step the
/// iterates approach the root monotonically.
pub fn quantile(alpha: f64) -> Result<TailSpec> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!(
            "quantile level must lie in (0, 1], got {alpha}"
        )));
    }
    if alpha == 1.0 {
        return Ok(TailSpec { alpha, t: 0.0 });
    }

    let sf = |t: f64| erfc((0.5 * t).sqrt());

    let mut lo = 0.0;
    let mut hi = 1.0;
    while sf(hi) > alpha {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if sf(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let log_alpha = alpha.ln();
    let mut u = (0.5 * (lo + hi)).sqrt();
    for _ in 0..100 {
        let s = erfc(u * std::f64::consts::FRAC_1_SQRT_2);
        if s <= 0.0 {
            break;
        }
        // d/du ln erfc(u / sqrt 2) = -sqrt(2/pi) exp(-u^2/2) / erfc(u / sqrt 2)
        let slope = -FRAC_2_PI.sqrt() * (-0.5 * u * u).exp() / s;
        let step = (s.ln() - log_alpha) / slope;
        let next = (u - step).max(0.0);
        let done = (next - u).abs() <= 4.0 * f64::EPSILON * next.max(f64::MIN_POSITIVE);
        u = next;
        if done {
            break;
        }
    }

    Ok(TailSpec { alpha, t: u * u })
}

/// `E(X | X > t)` via the closed form `1 + sqrt(2t/pi) exp(-t/2) / P(X > t)`.
///
/// The closed form follows from integrating `x f(x)` by parts over `(t, inf)`.
pub fn conditional_tail_expectation(t: f64) -> Result<ConditionalMoment> {
    let tail = survival(t)?;
    if tail < SURVIVAL_FLOOR {
        return Err(Error::Overflow {
            t,
            floor: SURVIVAL_FLOOR,
        });
    }
    let boundary = (2.0 * t / PI).sqrt() * (-0.5 * t).exp();
    let tail_mean = 1.0 + boundary / tail;
    Ok(ConditionalMoment {
        threshold: t,
        tail_mean,
        tail_root: tail_mean.sqrt(),
    })
}

/// Quantile at upper-tail level `alpha`, then the conditional tail moment there.
pub fn big_t(alpha: f64) -> Result<ConditionalMoment> {
    let spec = quantile(alpha)?;
    conditional_tail_expectation(spec.t)
}

fn check_ratio(ambient: usize, sparsity: usize) -> Result<f64> {
    if sparsity == 0 || sparsity >= ambient {
        return Err(Error::domain(format!(
            "asymptotic estimates need 0 < s < N, got s = {sparsity}, N = {ambient}"
        )));
    }
    Ok(ambient as f64 / sparsity as f64)
}

/// Leading-order estimate `2 ln(N/s)` of the threshold at level `s/N`.
pub fn asymptotic_t(ambient: usize, sparsity: usize) -> Result<f64> {
    Ok(2.0 * check_ratio(ambient, sparsity)?.ln())
}

/// Leading-order estimate `sqrt(2 ln(N/s))` of the conditional tail root.
pub fn asymptotic_big_t(ambient: usize, sparsity: usize) -> Result<f64> {
    asymptotic_t(ambient, sparsity).map(f64::sqrt)
}
