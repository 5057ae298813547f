//! Top-k order statistics of chi2(1) samples and their concentration bounds.

use std::cmp::Ordering;
use std::f64::consts::LN_2;

use log::warn;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::chi2::{self, ConditionalMoment};
use crate::error::{Error, Result};
use crate::rng;

/// Root of the mean of the `k` largest of `n` samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopKSum {
    pub k: usize,
    pub n: usize,
    pub rms: f64,
}

/// A two-sided deviation statement around the conditional tail root `center`:
/// with probability at least `prob_floor`, `|T_k - center| <= radius_bias + radius_tail`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationBound {
    pub center: f64,
    pub radius_bias: f64,
    pub radius_tail: f64,
    pub prob_floor: f64,
    pub const_c: f64,
}

impl ConcentrationBound {
    pub fn radius(&self) -> f64 {
        self.radius_bias + self.radius_tail
    }
}

/// Indices of the `k` largest keys, ordered by key descending and then by index
/// ascending, so equal keys resolve to the lower original index.
pub fn top_k_indices(keys: &[f64], k: usize) -> Vec<usize> {
    let k = k.min(keys.len());
    if k == 0 {
        return Vec::new();
    }
    let cmp = |&a: &usize, &b: &usize| -> Ordering { keys[b].total_cmp(&keys[a]).then(a.cmp(&b)) };
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    if k < idx.len() {
        idx.select_nth_unstable_by(k - 1, cmp);
        idx.truncate(k);
    }
    idx.sort_unstable_by(cmp);
    idx
}

/// `sqrt(mean of the k largest samples)`.
pub fn top_k_rms(samples: &[f64], k: usize) -> Result<TopKSum> {
    if k == 0 || k > samples.len() {
        return Err(Error::domain(format!(
            "k must lie in [1, {}], got {k}",
            samples.len()
        )));
    }
    if let Some(bad) = samples.iter().find(|x| !(**x >= 0.0)) {
        return Err(Error::domain(format!("samples must be nonnegative, got {bad}")));
    }
    let sum: f64 = top_k_indices(samples, k).into_iter().map(|i| samples[i]).sum();
    Ok(TopKSum {
        k,
        n: samples.len(),
        rms: (sum / k as f64).sqrt(),
    })
}

/// True when `k/n` is outside the region `k/n < 1/5` where the concentration
/// statement is claimed.
pub fn outside_validity(n: usize, k: usize) -> bool {
    5 * k >= n
}

/// Conditional tail root at level `k/n`, the centre that `T_k` concentrates around.
///
/// Levels with `k/n >= 1/5` are still evaluated; a warning is logged.
pub fn theoretical_t(n: usize, k: usize) -> Result<ConditionalMoment> {
    if k == 0 || k > n {
        return Err(Error::domain(format!("need 0 < k <= n, got k = {k}, n = {n}")));
    }
    if outside_validity(n, k) {
        warn!("k/n = {} is not below 1/5; the concentration bound is not claimed there", k as f64 / n as f64);
    }
    chi2::big_t(k as f64 / n as f64)
}

/// Deviation radius and probability floor for `T_k` at tail slack `eps`.
///
/// The floor `1 - 2 exp(-k eps^2 / 2)` is clamped into `[0, 1)`.
pub fn deviation_bound(n: usize, k: usize, eps: f64, const_c: f64) -> Result<ConcentrationBound> {
    if k == 0 || k >= n {
        return Err(Error::domain(format!(
            "deviation bound needs 1 <= k < n so that ln(n/k) > 0, got k = {k}, n = {n}"
        )));
    }
    if !(eps > 0.0) {
        return Err(Error::domain(format!("eps must be positive, got {eps}")));
    }
    if !(const_c > 0.0) {
        return Err(Error::domain(format!("C must be positive, got {const_c}")));
    }
    let center = theoretical_t(n, k)?.tail_root;
    let kf = k as f64;
    let radius_bias = const_c / (kf * (n as f64 / kf).ln()).sqrt();
    let prob_floor = (1.0 - 2.0 * (-0.5 * kf * eps * eps).exp()).clamp(0.0, 1.0 - f64::EPSILON);
    Ok(ConcentrationBound {
        center,
        radius_bias,
        radius_tail: eps,
        prob_floor,
        const_c,
    })
}

/// Bernoulli relative entropy `D(a || b)`.
pub fn relative_entropy(a: f64, b: f64) -> Result<f64> {
    let open = |x: f64| x > 0.0 && x < 1.0;
    if !open(a) || !open(b) {
        return Err(Error::domain(format!(
            "relative entropy needs a, b in (0, 1), got a = {a}, b = {b}"
        )));
    }
    let d = a * (a / b).ln() + (1.0 - a) * ((1.0 - a) / (1.0 - b)).ln();
    Ok(d.max(0.0))
}

/// Quadratic lower bound `delta^2 (1/alpha + 1/(1 - alpha)) ln(e/2)` on `D(alpha || alpha + delta)`.
pub fn entropy_lower_bound(alpha: f64, delta: f64) -> f64 {
    // ln(e/2) = 1 - ln 2
    delta * delta * (1.0 / alpha + 1.0 / (1.0 - alpha)) * (1.0 - LN_2)
}

/// One-sided bound on the probability that the `(k±1)`-th order statistic
/// falls past the quantile shifted by `delta` in level.
pub fn quantile_concentration_bound(n: usize, k: usize, delta: f64) -> Result<f64> {
    if k == 0 || 2 * k >= n {
        return Err(Error::domain(format!(
            "need 0 < k/n < 1/2, got k = {k}, n = {n}"
        )));
    }
    let alpha = k as f64 / n as f64;
    if !(delta > 0.0 && delta < alpha.min(1.0 - alpha)) {
        return Err(Error::domain(format!(
            "delta must lie in (0, {}), got {delta}",
            alpha.min(1.0 - alpha)
        )));
    }
    Ok((-(n as f64) * entropy_lower_bound(alpha, delta)).exp())
}

/// Dvoretzky–Kiefer–Wolfowitz bound `min(1, 2 exp(-2 n eps^2))`.
pub fn dkw_bound(n: usize, eps: f64) -> Result<f64> {
    if n == 0 || !(eps > 0.0) {
        return Err(Error::domain(format!(
            "DKW bound needs n >= 1 and eps > 0, got n = {n}, eps = {eps}"
        )));
    }
    Ok((2.0 * (-2.0 * n as f64 * eps * eps).exp()).min(1.0))
}

/// Empirical coverage of the deviation event at one tail slack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coverage {
    pub eps: f64,
    pub radius: f64,
    pub prob_floor: f64,
    pub covered: f64,
}

/// Monte Carlo summary of `T_k` over seeded trials.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderStatReport {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub const_c: f64,
    /// `T_k` of each trial, in trial order.
    pub samples: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation; zero for a single trial.
    pub sd: f64,
    pub theory: ConditionalMoment,
    pub abs_bias: f64,
    pub bias_radius: f64,
    pub coverage: Vec<Coverage>,
    pub outside_validity: bool,
}

/// Seeded Monte Carlo check of the `T_k` concentration statement.
#[derive(Debug, Clone)]
pub struct ConcentrationExperiment {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub const_c: f64,
    pub eps_grid: Vec<f64>,
}

impl ConcentrationExperiment {
    pub const DEFAULT_EPS_GRID: [f64; 4] = [0.1, 0.2, 0.326, 0.5];

    pub fn new(n: usize, k: usize, trials: usize, seed: u64) -> Self {
        Self {
            n,
            k,
            trials,
            seed,
            const_c: 1.0,
            eps_grid: Self::DEFAULT_EPS_GRID.to_vec(),
        }
    }

    pub fn with_const_c(mut self, const_c: f64) -> Self {
        self.const_c = const_c;
        self
    }

    pub fn with_eps_grid(mut self, eps_grid: Vec<f64>) -> Self {
        self.eps_grid = eps_grid;
        self
    }

    /// Draws `trials` vectors of `n` squared standard normals and records `T_k`
    /// for each. Trial `i` uses stream `i` of the seed, so the report does not
    /// depend on the size of the rayon pool it runs in.
    pub fn run(&self) -> Result<OrderStatReport> {
        if self.trials == 0 {
            return Err(Error::domain("trials must be at least 1"));
        }
        let (n, k) = (self.n, self.k);
        let bounds = self
            .eps_grid
            .iter()
            .map(|&eps| deviation_bound(n, k, eps, self.const_c))
            .collect::<Result<Vec<_>>>()?;
        let theory = theoretical_t(n, k)?;

        let samples = (0..self.trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = rng::stream_rng(self.seed, trial as u64);
                let draws: Vec<f64> = (0..n)
                    .map(|_| {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        z * z
                    })
                    .collect();
                top_k_rms(&draws, k).map(|t| t.rms)
            })
            .collect::<Result<Vec<f64>>>()?;

        let count = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / count;
        let sd = if samples.len() > 1 {
            (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1.0)).sqrt()
        } else {
            0.0
        };
        let center = theory.tail_root;
        let coverage = self
            .eps_grid
            .iter()
            .zip(&bounds)
            .map(|(&eps, bound)| {
                let radius = bound.radius();
                let hits = samples.iter().filter(|&&t| (t - center).abs() <= radius).count();
                Coverage {
                    eps,
                    radius,
                    prob_floor: bound.prob_floor,
                    covered: hits as f64 / count,
                }
            })
            .collect();

        Ok(OrderStatReport {
            n,
            k,
            trials: self.trials,
            seed: self.seed,
            const_c: self.const_c,
            mean,
            sd,
            theory,
            abs_bias: (mean - center).abs(),
            bias_radius: self.const_c / (k as f64 * (n as f64 / k as f64).ln()).sqrt(),
            coverage,
            outside_validity: outside_validity(n, k),
            samples,
        })
    }
}
