//! Minimal-measurement scans over `n`.

use super::{eps_for_confidence, EpsForm, LowerModel, UpperModel};
use crate::error::{Error, Result};

pub const DEFAULT_N_MAX: usize = 10_000_000;

/// Number of geometrically spaced points used to confirm that a scanned
/// objective is non-increasing before an answer is returned.
const MONOTONE_PROBES: usize = 256;

/// Scan parameters shared by the sufficient and necessary searches.
#[derive(Debug, Clone, Copy)]
pub struct MeasurementScan {
    pub ambient: usize,
    pub s: usize,
    pub delta_target: f64,
    pub confidence: f64,
    pub const_c: f64,
    pub n_max: usize,
}

impl MeasurementScan {
    pub fn new(ambient: usize, s: usize, delta_target: f64, confidence: f64, const_c: f64) -> Self {
        Self {
            ambient,
            s,
            delta_target,
            confidence,
            const_c,
            n_max: DEFAULT_N_MAX,
        }
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    fn check(&self) -> Result<()> {
        if !(self.delta_target > 0.0 && self.delta_target < 1.0) {
            return Err(Error::domain(format!(
                "delta target must lie in (0, 1), got {}",
                self.delta_target
            )));
        }
        if self.n_max == 0 {
            return Err(Error::domain("n_max must be at least 1"));
        }
        Ok(())
    }

    /// Upper bound on `delta_s` at `n`, with `eps` chosen for the scan's
    /// confidence. `+inf` where the bound is outside its regime.
    pub fn sufficient_objective(&self) -> Result<impl Fn(usize) -> Result<f64>> {
        self.check()?;
        let model = UpperModel::new(self.ambient, self.s)?;
        let (confidence, const_c) = (self.confidence, self.const_c);
        Ok(move |n: usize| {
            let eps = eps_for_confidence(n, confidence, EpsForm::Upper, const_c)?;
            let report = model.eval(n, eps, const_c)?;
            Ok(match (report.is_valid(), report.value) {
                (true, Some(v)) => v,
                _ => f64::INFINITY,
            })
        })
    }

    /// Lower bound `max(delta_s^+, delta_s^-)` at `n`; `+inf` when neither
    /// side is defined.
    pub fn necessary_objective(&self) -> Result<impl Fn(usize) -> Result<f64>> {
        self.check()?;
        let model = LowerModel::new(self.ambient, self.s)?;
        if model.tail_root().is_none() || 5 * self.s >= self.ambient {
            return Err(Error::domain(format!(
                "the lower bounds need 2 <= s and s/N < 1/5, got s = {}, N = {}",
                self.s, self.ambient
            )));
        }
        let (confidence, const_c) = (self.confidence, self.const_c);
        Ok(move |n: usize| {
            let eps = eps_for_confidence(n, confidence, EpsForm::Lower, const_c)?;
            let (plus, minus) = model.eval(n, eps, const_c)?;
            Ok([plus.value, minus.value]
                .into_iter()
                .flatten()
                .reduce(f64::max)
                .unwrap_or(f64::INFINITY))
        })
    }

    /// Smallest `n` at which the upper bound reaches the target.
    pub fn sufficient(&self) -> Result<usize> {
        let objective = self.sufficient_objective()?;
        search(&objective, self.delta_target, self.n_max)
    }

    /// Smallest `n` at which the lower bound no longer exceeds the target;
    /// for every smaller `n`, `delta_s > delta_target` with the scan's confidence.
    pub fn necessary(&self) -> Result<usize> {
        let objective = self.necessary_objective()?;
        search(&objective, self.delta_target, self.n_max)
    }
}

/// Binary search for the first `n` in `[1, n_max]` with `objective(n) <= target`,
/// after checking the objective is non-increasing on a probe grid.
fn search(objective: &impl Fn(usize) -> Result<f64>, target: f64, n_max: usize) -> Result<usize> {
    if objective(n_max)? > target {
        return Err(Error::NotFound {
            cap: n_max,
            reason: format!("bound at n = {n_max} still exceeds {target}"),
        });
    }
    let (mut lo, mut hi) = (0usize, n_max);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if objective(mid)? <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    check_monotone(objective, n_max, hi)?;
    Ok(hi)
}

fn check_monotone(objective: &impl Fn(usize) -> Result<f64>, n_max: usize, answer: usize) -> Result<()> {
    let ratio = (n_max as f64).powf(1.0 / MONOTONE_PROBES as f64);
    let mut probes: Vec<usize> = (0..=MONOTONE_PROBES)
        .map(|i| (ratio.powi(i as i32).round() as usize).clamp(1, n_max))
        .chain([answer.saturating_sub(1).max(1), answer, (answer + 1).min(n_max)])
        .collect();
    probes.sort_unstable();
    probes.dedup();

    let mut prev: Option<(usize, f64)> = None;
    for n in probes {
        let v = objective(n)?;
        if let Some((before, pv)) = prev {
            if v > pv * (1.0 + 1e-12) {
                return Err(Error::NotMonotone { before, at: n });
            }
        }
        prev = Some((n, v));
    }
    Ok(())
}

/// Smallest `n` for which the upper bound certifies `delta_s <= delta_target`
/// with probability at least `confidence`.
pub fn min_measurements_sufficient(
    ambient: usize,
    s: usize,
    delta_target: f64,
    confidence: f64,
    const_c: f64,
) -> Result<usize> {
    MeasurementScan::new(ambient, s, delta_target, confidence, const_c).sufficient()
}

/// Smallest `n` below which the lower bound forces `delta_s > delta_target`
/// with probability at least `confidence`.
pub fn min_measurements_necessary(
    ambient: usize,
    s: usize,
    delta_target: f64,
    confidence: f64,
    const_c: f64,
) -> Result<usize> {
    MeasurementScan::new(ambient, s, delta_target, confidence, const_c).necessary()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_scan_answers() {
        // Linear scans in arbitrary precision give these.
        assert_eq!(min_measurements_sufficient(1000, 10, 1.0 / 3.0, 0.99, 1.0).unwrap(), 1504);
        assert_eq!(min_measurements_necessary(1000, 5, 1.0 / 3.0, 0.99, 1.0).unwrap(), 51);
        assert_eq!(min_measurements_necessary(1000, 10, 1.0 / 3.0, 0.99, 1.0).unwrap(), 118);
        assert_eq!(min_measurements_necessary(1000, 20, 1.0 / 3.0, 0.99, 1.0).unwrap(), 241);
    }

    #[test]
    fn easy_instance() {
        let n = min_measurements_sufficient(20, 1, 0.999, 0.9, 1.0).unwrap();
        assert!(n < 200, "{n}");
    }

    #[test]
    fn answers_move_with_target() {
        let loose = min_measurements_sufficient(1000, 10, 0.999, 0.99, 1.0).unwrap();
        let tight = min_measurements_sufficient(1000, 10, 0.334, 0.99, 1.0).unwrap();
        assert!(loose <= tight);
        let mut prev = 0;
        for target in [0.5, 0.3, 0.2, 0.1, 0.05] {
            let n = min_measurements_necessary(1000, 10, target, 0.99, 1.0).unwrap();
            assert!(n > prev);
            prev = n;
        }
    }

    #[test]
    fn necessary_does_not_exceed_sufficient() {
        let nec = min_measurements_necessary(1000, 10, 1.0 / 3.0, 0.99, 1.0).unwrap();
        let suf = min_measurements_sufficient(1000, 10, 1.0 / 3.0, 0.99, 1.0).unwrap();
        assert!(nec <= suf);
    }

    #[test]
    fn cap_and_domain_errors() {
        let scan = MeasurementScan::new(1000, 10, 0.05, 0.99, 1.0).with_n_max(100);
        assert!(matches!(scan.sufficient(), Err(Error::NotFound { cap: 100, .. })));
        assert!(min_measurements_sufficient(1000, 10, 1.5, 0.99, 1.0).is_err());
        assert!(min_measurements_necessary(1000, 1, 0.3, 0.99, 1.0).is_err());
        assert!(min_measurements_necessary(1000, 300, 0.3, 0.99, 1.0).is_err());
    }
}
