//! Independent reference computations used to cross-check the library.
//!
//! Nothing here calls into the code under test except for public building
//! blocks that the oracle composes differently (e.g. the scan oracle walks `n`
//! linearly over public bound evaluators).

#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ripbound::rip_bounds::{eps_for_confidence, lower_bounds, upper_bound_delta, EpsForm, ProblemDims};
use ripbound::DenseMatrix;

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = simpson(fa, fm, fb, a, b);
    recurse(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `E(X | X > t)` for `X ~ chi2(1)` by quadrature in `w = z - sqrt(t)`.
///
/// The common factor `exp(-t/2)` cancels, leaving
/// `int (sqrt t + w)^2 g(w) dw / int g(w) dw` with `g(w) = exp(-sqrt(t) w - w^2/2)`
/// on `[0, 40]`; the neglected tail is below `exp(-800)`.
pub fn cte_by_quadrature(t: f64) -> f64 {
    let r = t.sqrt();
    let g = move |w: f64| (-r * w - 0.5 * w * w).exp();
    // Unit panels keep the adaptive rule from missing the peak near w = 0.
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..40 {
        let (a, b) = (i as f64, i as f64 + 1.0);
        num += adaptive_simpson(&|w| (r + w).powi(2) * g(w), a, b, 1e-16);
        den += adaptive_simpson(&g, a, b, 1e-16);
    }
    num / den
}

/// `erfc(x)` for `x >= 0`: a positive-term series for `erf` below 0.5, a
/// Lentz continued fraction above.
pub fn erfc_oracle(x: f64) -> f64 {
    assert!(x >= 0.0);
    if x < 0.5 {
        // erf(x) = 2/sqrt(pi) exp(-x^2) sum_n 2^n x^(2n+1) / (1 3 5 ... (2n+1))
        let mut term = x;
        let mut sum = x;
        let mut n = 0.0;
        while term > sum * 1e-18 {
            n += 1.0;
            term *= 2.0 * x * x / (2.0 * n + 1.0);
            sum += term;
        }
        1.0 - 2.0 / PI.sqrt() * (-x * x).exp() * sum
    } else {
        // erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
        let tiny = 1e-300;
        let mut f = x;
        let mut c = x;
        let mut d = 0.0;
        for k in 1..5000 {
            let a = k as f64 / 2.0;
            d = x + a * d;
            if d == 0.0 {
                d = tiny;
            }
            c = x + a / c;
            if c == 0.0 {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-17 {
                break;
            }
        }
        (-x * x).exp() / PI.sqrt() / f
    }
}

/// First `n >= 1` with `upper <= target`, walking `n` one at a time.
pub fn linear_sufficient(ambient: usize, s: usize, target: f64, confidence: f64, c: f64, n_max: usize) -> Option<usize> {
    (1..=n_max).find(|&n| {
        let dims = ProblemDims::new(n, ambient, s).unwrap();
        let eps = eps_for_confidence(n, confidence, EpsForm::Upper, c).unwrap();
        let up = upper_bound_delta(dims, eps, c).unwrap();
        up.is_valid() && up.value.is_some_and(|v| v <= target)
    })
}

/// First `n >= 1` with `max(lower+, lower-) <= target`, walking `n` one at a time.
pub fn linear_necessary(ambient: usize, s: usize, target: f64, confidence: f64, c: f64, n_max: usize) -> Option<usize> {
    (1..=n_max).find(|&n| {
        let dims = ProblemDims::new(n, ambient, s).unwrap();
        let eps = eps_for_confidence(n, confidence, EpsForm::Lower, c).unwrap();
        let (plus, minus) = lower_bounds(dims, eps, c).unwrap();
        [plus.value, minus.value]
            .into_iter()
            .flatten()
            .reduce(f64::max)
            .is_some_and(|v| v <= target)
    })
}

/// Extremes of `||Phi v||^2` over `draws` random unit vectors supported on `support`.
pub fn random_direction_extremes(a: &DenseMatrix, support: &[usize], draws: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = a.rows() as f64;
    let cols: Vec<Vec<f64>> = support.iter().map(|&j| a.column(j).collect()).collect();
    let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut image = vec![0.0; a.rows()];
    for _ in 0..draws {
        let v: Vec<f64> = support.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-3 {
            continue;
        }
        image.iter_mut().for_each(|x| *x = 0.0);
        for (col, &vj) in cols.iter().zip(&v) {
            for (x, &c) in image.iter_mut().zip(col) {
                *x += c * vj / norm;
            }
        }
        let energy = image.iter().map(|x| x * x).sum::<f64>() / n;
        hi = hi.max(energy);
        lo = lo.min(energy);
    }
    (hi, lo)
}
