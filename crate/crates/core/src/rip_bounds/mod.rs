//! Closed-form lower and upper bounds on the RIP constants of `A / sqrt(n)`
//! for an `n x N` standard Gaussian matrix `A`.
//!
//! All logarithms are natural. The constants `C` that the bounds leave
//! symbolic are caller supplied (default 1) and recorded in every report.

mod algorithms;
mod curve;
mod scan;

pub use algorithms::{algorithm_requirement, AlgorithmRequirement, Threshold, ALGORITHM_IDS};
pub use curve::{curve, CurveConfig, CurveRow, RowFlag, PRESENTATION_CLIP};
pub use scan::{
    min_measurements_necessary, min_measurements_sufficient, MeasurementScan, DEFAULT_N_MAX,
};

use std::fmt;
use std::f64::consts::LN_2;

use libm::lgamma as ln_gamma;

use crate::chi2;
use crate::error::{Error, Result};

/// Measurement count `n`, ambient dimension `N` and sparsity `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProblemDims {
    pub n: usize,
    pub ambient: usize,
    pub s: usize,
}

impl ProblemDims {
    pub fn new(n: usize, ambient: usize, s: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("measurement count n must be at least 1"));
        }
        if s == 0 || s >= ambient {
            return Err(Error::domain(format!(
                "need 1 <= s < N, got s = {s}, N = {ambient}"
            )));
        }
        Ok(Self { n, ambient, s })
    }

    /// `p = s / n`.
    pub fn p(&self) -> f64 {
        self.s as f64 / self.n as f64
    }

    /// `s / N`.
    pub fn sparsity_ratio(&self) -> f64 {
        self.s as f64 / self.ambient as f64
    }

    fn log_ratio(&self) -> f64 {
        (self.ambient as f64 / self.s as f64).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    LowerPlus,
    LowerMinus,
    UpperNew,
    UpperClassical,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::LowerPlus => "lower_plus",
            BoundKind::LowerMinus => "lower_minus",
            BoundKind::UpperNew => "upper_new",
            BoundKind::UpperClassical => "upper_classical",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const REASON_S_BELOW_TWO: &str = "s must be >= 2 for the (s-1)/(N-1) tail level";
pub const REASON_SPARSITY_RATIO: &str = "s/N >= 1/5";
pub const REASON_RADICAND: &str = "radicand negative";
pub const REASON_P: &str = "p = s/n >= 1/5";

/// One evaluated bound together with the confidence statement it carries.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    /// Absent only when the formula itself is undefined (see `reasons`).
    pub value: Option<f64>,
    /// Tail slack; `None` for the classical threshold, which has none.
    pub eps: Option<f64>,
    /// `eps + (n ln(N/s))^(-1/2)` for the lower bounds.
    pub delta_internal: Option<f64>,
    pub prob_floor: f64,
    pub const_c: f64,
    /// Regime conditions that are violated. Empty means valid.
    pub reasons: Vec<String>,
    /// The value is a lower bound `<= 0` and carries no information.
    pub vacuous: bool,
}

impl BoundReport {
    pub fn is_valid(&self) -> bool {
        self.reasons.is_empty()
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {x}")))
    }
}

/// The lower bounds with the tail root precomputed, so that scans over `n`
/// do not repeat the quantile inversion.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LowerModel {
    ambient: usize,
    s: usize,
    /// Tail root at level `(s-1)/(N-1)`; `None` when `s < 2`.
    tail_root: Option<f64>,
}

impl LowerModel {
    pub(crate) fn new(ambient: usize, s: usize) -> Result<Self> {
        ProblemDims::new(1, ambient, s)?;
        let tail_root = if s >= 2 {
            Some(chi2::big_t((s - 1) as f64 / (ambient - 1) as f64)?.tail_root)
        } else {
            None
        };
        Ok(Self { ambient, s, tail_root })
    }

    pub(crate) fn tail_root(&self) -> Option<f64> {
        self.tail_root
    }

    pub(crate) fn eval(&self, n: usize, eps: f64, const_c: f64) -> Result<(BoundReport, BoundReport)> {
        check_positive("eps", eps)?;
        check_positive("C", const_c)?;
        let dims = ProblemDims::new(n, self.ambient, self.s)?;
        let nf = n as f64;
        let delta = eps + 1.0 / (nf * dims.log_ratio()).sqrt();
        let prob_floor = (1.0 - const_c * (-nf * eps * eps / const_c).exp()).max(0.0);

        let mut reasons = Vec::new();
        if 5 * self.s >= self.ambient {
            reasons.push(REASON_SPARSITY_RATIO.to_string());
        }
        let blank = |kind| BoundReport {
            kind,
            value: None,
            eps: Some(eps),
            delta_internal: Some(delta),
            prob_floor,
            const_c,
            reasons: reasons.clone(),
            vacuous: false,
        };
        let (mut plus, mut minus) = (blank(BoundKind::LowerPlus), blank(BoundKind::LowerMinus));

        let Some(tail_root) = self.tail_root else {
            plus.reasons.push(REASON_S_BELOW_TWO.to_string());
            minus.reasons.push(REASON_S_BELOW_TWO.to_string());
            return Ok((plus, minus));
        };

        let lin = dims.p().sqrt() * tail_root;
        let quad = 0.5 * dims.p() * tail_root * tail_root;
        let settle = |report: &mut BoundReport, radicand: f64, value: fn(f64) -> f64| {
            if radicand < 0.0 {
                report.reasons.push(REASON_RADICAND.to_string());
            } else {
                let v = value(radicand.sqrt());
                report.value = Some(v);
                report.vacuous = v <= 0.0;
            }
        };
        settle(&mut plus, (1.0 + lin) * (1.0 - delta) + quad, |r| r - 1.0);
        settle(&mut minus, 1.0 - lin + (1.0 + lin) * delta + quad, |r| 1.0 - r);
        Ok((plus, minus))
    }
}

/// Upper bound with its tail root precomputed.
#[derive(Debug, Clone, Copy)]
pub(crate) struct UpperModel {
    ambient: usize,
    s: usize,
    tail_root: f64,
}

impl UpperModel {
    pub(crate) fn new(ambient: usize, s: usize) -> Result<Self> {
        ProblemDims::new(1, ambient, s)?;
        let tail_root = chi2::big_t(s as f64 / ambient as f64)?.tail_root;
        Ok(Self { ambient, s, tail_root })
    }

    pub(crate) fn eval(&self, n: usize, eps: f64, const_c: f64) -> Result<BoundReport> {
        check_positive("eps", eps)?;
        check_positive("C", const_c)?;
        let dims = ProblemDims::new(n, self.ambient, self.s)?;
        let nf = n as f64;
        let value = dims.p().sqrt() * self.tail_root
            + const_c / (nf * dims.log_ratio()).sqrt()
            + 0.5 / nf
            + eps;
        let mut reasons = Vec::new();
        if 5 * self.s >= n {
            reasons.push(REASON_P.to_string());
        }
        Ok(BoundReport {
            kind: BoundKind::UpperNew,
            value: Some(value),
            eps: Some(eps),
            delta_internal: None,
            prob_floor: (1.0 - 2.0 * (-0.5 * nf * eps * eps).exp()).max(0.0),
            const_c,
            reasons,
            vacuous: false,
        })
    }
}

/// Lower bound on the expansion constant `delta_s^+`, holding with probability
/// at least `1 - C exp(-n eps^2 / C)`.
pub fn lower_bound_delta_plus(dims: ProblemDims, eps: f64, const_c: f64) -> Result<BoundReport> {
    LowerModel::new(dims.ambient, dims.s)?.eval(dims.n, eps, const_c).map(|(plus, _)| plus)
}

/// Lower bound on the contraction constant `delta_s^-`; may be vacuous (`<= 0`).
pub fn lower_bound_delta_minus(dims: ProblemDims, eps: f64, const_c: f64) -> Result<BoundReport> {
    LowerModel::new(dims.ambient, dims.s)?.eval(dims.n, eps, const_c).map(|(_, minus)| minus)
}

/// Both lower bounds, sharing one quantile inversion.
pub fn lower_bounds(dims: ProblemDims, eps: f64, const_c: f64) -> Result<(BoundReport, BoundReport)> {
    LowerModel::new(dims.ambient, dims.s)?.eval(dims.n, eps, const_c)
}

/// Upper bound `sqrt(p) T + C / sqrt(n ln(N/s)) + 1/(2n) + eps` on `delta_s`,
/// with `T` at tail level `s/N`, holding with probability at least
/// `1 - 2 exp(-n eps^2 / 2)`.
pub fn upper_bound_delta(dims: ProblemDims, eps: f64, const_c: f64) -> Result<BoundReport> {
    UpperModel::new(dims.ambient, dims.s)?.eval(dims.n, eps, const_c)
}

/// `ln C(N, s)` through log-gamma.
pub fn ln_binomial(ambient: usize, s: usize) -> f64 {
    let (a, k) = (ambient as f64, s as f64);
    ln_gamma(a + 1.0) - ln_gamma(k + 1.0) - ln_gamma(a - k + 1.0)
}

/// `min(1, 2 C(N, s) exp(-c1 delta^2 n + c2 s))`, the classical sub-Gaussian
/// tail bound on `P(delta_s > delta)`, evaluated in log space.
pub fn classical_upper_bound_prob(dims: ProblemDims, delta: f64, c1: f64, c2: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    check_positive("c1", c1)?;
    check_positive("c2", c2)?;
    let exponent = LN_2 + ln_binomial(dims.ambient, dims.s) - c1 * delta * delta * dims.n as f64
        + c2 * dims.s as f64;
    Ok(exponent.min(0.0).exp())
}

/// Smallest `delta` at which the classical tail bound drops to `1 - confidence`.
///
/// The result is not restricted to `(0, 1)`; it is the comparison curve.
pub fn classical_upper_threshold(
    dims: ProblemDims,
    confidence: f64,
    c1: f64,
    c2: f64,
) -> Result<BoundReport> {
    check_confidence(confidence)?;
    check_positive("c1", c1)?;
    check_positive("c2", c2)?;
    let numerator =
        LN_2 + ln_binomial(dims.ambient, dims.s) + c2 * dims.s as f64 - (1.0 - confidence).ln();
    Ok(BoundReport {
        kind: BoundKind::UpperClassical,
        value: Some((numerator / (c1 * dims.n as f64)).sqrt()),
        eps: None,
        delta_internal: None,
        prob_floor: confidence,
        const_c: c1,
        reasons: Vec::new(),
        vacuous: false,
    })
}

/// Which probability floor to invert in [`eps_for_confidence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsForm {
    /// `1 - 2 exp(-n eps^2 / 2)`, the upper bound's floor.
    Upper,
    /// `1 - C exp(-n eps^2 / C)`, the lower bounds' floor.
    Lower,
}

fn check_confidence(confidence: f64) -> Result<()> {
    if confidence > 0.0 && confidence < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )))
    }
}

/// The `eps` at which the chosen probability floor equals `confidence`.
pub fn eps_for_confidence(n: usize, confidence: f64, form: EpsForm, const_c: f64) -> Result<f64> {
    check_confidence(confidence)?;
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let nf = n as f64;
    let miss = 1.0 - confidence;
    match form {
        EpsForm::Upper => Ok((2.0 * (2.0 / miss).ln() / nf).sqrt()),
        EpsForm::Lower => {
            check_positive("C", const_c)?;
            if const_c <= miss {
                return Err(Error::domain(format!(
                    "C = {const_c} must exceed 1 - confidence = {miss}"
                )));
            }
            Ok((const_c * (const_c / miss).ln() / nf).sqrt())
        }
    }
}
