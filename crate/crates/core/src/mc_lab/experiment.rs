//! Seeded harness comparing adversarial certificates with the lower bounds.

use rayon::prelude::*;

use super::{adversarial_pair, sample_matrix, Ensemble};
use crate::chi2;
use crate::error::{Error, Result};
use crate::rip_bounds::{eps_for_confidence, lower_bounds, BoundReport, EpsForm, ProblemDims};
use crate::rng;

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub dims: ProblemDims,
    pub ensemble: Ensemble,
    pub trials: usize,
    pub seed: u64,
    pub confidence: f64,
    pub const_c: f64,
}

/// The certificate values of one trial. The trial's matrix is
/// `sample_matrix(n, N, ensemble, sub_seed(seed, trial))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub matrix_seed: u64,
    pub plus_energy: f64,
    pub minus_energy: f64,
    pub delta_plus_emp: f64,
    pub delta_minus_emp: f64,
    pub degenerate: bool,
}

/// Linear-interpolated quantiles of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantiles {
    pub min: f64,
    pub q05: f64,
    pub median: f64,
    pub q95: f64,
    pub max: f64,
}

impl Quantiles {
    pub fn of(values: &[f64]) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        let at = |q: f64| {
            let pos = q * (sorted.len() - 1) as f64;
            let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
            sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
        };
        Self {
            min: sorted[0],
            q05: at(0.05),
            median: at(0.5),
            q95: at(0.95),
            max: sorted[sorted.len() - 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub dims: ProblemDims,
    pub ensemble: Ensemble,
    pub seed: u64,
    pub confidence: f64,
    pub trials: Vec<TrialRecord>,
    pub plus_quantiles: Quantiles,
    pub minus_quantiles: Quantiles,
    pub lower_plus: BoundReport,
    pub lower_minus: BoundReport,
    /// Fraction of trials whose `delta_plus_emp` reaches the `delta_s^+` lower bound.
    pub plus_coverage: Option<f64>,
    pub minus_coverage: Option<f64>,
    pub mean_plus_energy: f64,
    /// Tail root at level `(s-1)/(N-1)`.
    pub tail_root: f64,
    /// `1 + sqrt(p) T + p T^2 / 2` with `p = s/n`.
    pub center: f64,
    /// Leading-order mean of `||Phi v'||^2` when the `s - 1` tail coordinates
    /// are counted exactly: `1 - 1/(2n) + sqrt((s-1)/n) T + (s-1) T^2 / (2n)`.
    pub center_tail_exact: f64,
}

impl ExperimentSummary {
    pub fn center_gap(&self) -> f64 {
        (self.mean_plus_energy - self.center).abs()
    }
}

impl ExperimentConfig {
    pub fn run(&self) -> Result<ExperimentSummary> {
        if self.trials == 0 {
            return Err(Error::domain("trials must be at least 1"));
        }
        let ProblemDims { n, ambient, s } = self.dims;
        if s < 2 {
            return Err(Error::domain("the adversarial construction needs s >= 2"));
        }
        let eps = eps_for_confidence(n, self.confidence, EpsForm::Lower, self.const_c)?;
        let (lower_plus, lower_minus) = lower_bounds(self.dims, eps, self.const_c)?;
        let tail_root = chi2::big_t((s - 1) as f64 / (ambient - 1) as f64)?.tail_root;

        let trials = (0..self.trials)
            .into_par_iter()
            .map(|trial| {
                let matrix_seed = rng::sub_seed(self.seed, trial as u64);
                let a = sample_matrix(n, ambient, self.ensemble, matrix_seed)?;
                let cert = adversarial_pair(&a, s)?;
                Ok(TrialRecord {
                    trial,
                    matrix_seed,
                    plus_energy: cert.plus_energy,
                    minus_energy: cert.minus_energy,
                    delta_plus_emp: cert.delta_plus_emp,
                    delta_minus_emp: cert.delta_minus_emp,
                    degenerate: cert.degenerate,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let plus: Vec<f64> = trials.iter().map(|t| t.delta_plus_emp).collect();
        let minus: Vec<f64> = trials.iter().map(|t| t.delta_minus_emp).collect();
        let fraction_at_least = |values: &[f64], bound: &BoundReport| {
            bound.value.map(|b| values.iter().filter(|&&v| v >= b).count() as f64 / values.len() as f64)
        };
        let count = trials.len() as f64;
        let mean_plus_energy = trials.iter().map(|t| t.plus_energy).sum::<f64>() / count;

        let nf = n as f64;
        let p = self.dims.p();
        let q = (s - 1) as f64 / nf;
        Ok(ExperimentSummary {
            dims: self.dims,
            ensemble: self.ensemble,
            seed: self.seed,
            confidence: self.confidence,
            plus_quantiles: Quantiles::of(&plus),
            minus_quantiles: Quantiles::of(&minus),
            plus_coverage: fraction_at_least(&plus, &lower_plus),
            minus_coverage: fraction_at_least(&minus, &lower_minus),
            lower_plus,
            lower_minus,
            mean_plus_energy,
            tail_root,
            center: 1.0 + p.sqrt() * tail_root + 0.5 * p * tail_root * tail_root,
            center_tail_exact: 1.0 - 0.5 / nf + q.sqrt() * tail_root + 0.5 * q * tail_root * tail_root,
            trials,
        })
    }
}

/// Runs `trials` seeded realizations of `A` and summarizes the certificates.
pub fn run_experiment(
    dims: ProblemDims,
    ensemble: Ensemble,
    trials: usize,
    seed: u64,
    confidence: f64,
    const_c: f64,
) -> Result<ExperimentSummary> {
    ExperimentConfig {
        dims,
        ensemble,
        trials,
        seed,
        confidence,
        const_c,
    }
    .run()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_interpolate() {
        let q = Quantiles::of(&[4.0, 0.0, 2.0, 1.0, 3.0]);
        assert_eq!((q.min, q.median, q.max), (0.0, 2.0, 4.0));
        assert!((q.q05 - 0.2).abs() < 1e-15);
        assert!((q.q95 - 3.8).abs() < 1e-15);
        let one = Quantiles::of(&[7.0]);
        assert_eq!((one.min, one.q05, one.max), (7.0, 7.0, 7.0));
    }

    #[test]
    fn single_trial_wraps_one_certificate() {
        let dims = ProblemDims::new(20, 60, 3).unwrap();
        let summary = run_experiment(dims, Ensemble::Gaussian, 1, 5, 0.99, 1.0).unwrap();
        assert_eq!(summary.trials.len(), 1);
        let t = summary.trials[0];
        let a = sample_matrix(20, 60, Ensemble::Gaussian, t.matrix_seed).unwrap();
        let cert = adversarial_pair(&a, 3).unwrap();
        assert_eq!(cert.delta_plus_emp, t.delta_plus_emp);
        assert_eq!(summary.mean_plus_energy, t.plus_energy);
    }

    #[test]
    fn rejects_bad_config() {
        let dims = ProblemDims::new(20, 60, 1).unwrap();
        assert!(run_experiment(dims, Ensemble::Gaussian, 3, 5, 0.99, 1.0).is_err());
        let dims = ProblemDims::new(20, 60, 3).unwrap();
        assert!(run_experiment(dims, Ensemble::Gaussian, 0, 5, 0.99, 1.0).is_err());
    }
}
