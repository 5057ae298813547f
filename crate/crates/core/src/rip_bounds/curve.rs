//! Bound curves against compression rate `N/n` at a fixed sparsity level.

use std::fmt;

use rayon::prelude::*;

use super::{
    classical_upper_threshold, eps_for_confidence, EpsForm, LowerModel, ProblemDims, UpperModel,
};
use crate::error::{Error, Result};

/// Values above this are kept in the data but flagged for clipping when drawn.
pub const PRESENTATION_CLIP: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowFlag {
    /// Neither lower bound is defined (s < 2 or both radicands negative).
    LowerUndefined,
    /// s/N >= 1/5.
    LowerOutOfRegime,
    /// Lower bound is <= 0.
    LowerVacuous,
    /// p = s/n >= 1/5.
    UpperNewOutOfRegime,
    /// Fewer measurements than the sparsity level.
    NBelowS,
    ClipLower,
    ClipUpperNew,
    ClipUpperClassical,
}

impl RowFlag {
    pub const ALL: [RowFlag; 8] = [
        RowFlag::LowerUndefined,
        RowFlag::LowerOutOfRegime,
        RowFlag::LowerVacuous,
        RowFlag::UpperNewOutOfRegime,
        RowFlag::NBelowS,
        RowFlag::ClipLower,
        RowFlag::ClipUpperNew,
        RowFlag::ClipUpperClassical,
    ];

    pub fn token(self) -> &'static str {
        match self {
            RowFlag::LowerUndefined => "lower_undefined",
            RowFlag::LowerOutOfRegime => "lower_out_of_regime",
            RowFlag::LowerVacuous => "lower_vacuous",
            RowFlag::UpperNewOutOfRegime => "upper_new_out_of_regime",
            RowFlag::NBelowS => "n_below_s",
            RowFlag::ClipLower => "clip_lower",
            RowFlag::ClipUpperNew => "clip_upper_new",
            RowFlag::ClipUpperClassical => "clip_upper_classical",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.token() == token)
    }

    /// Flags that disqualify a row from lower/upper comparisons.
    pub fn invalidates(self) -> bool {
        matches!(
            self,
            RowFlag::LowerUndefined
                | RowFlag::LowerOutOfRegime
                | RowFlag::UpperNewOutOfRegime
                | RowFlag::NBelowS
        )
    }
}

impl fmt::Display for RowFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// One point of the bound-versus-compression-rate chart.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub compression_rate: f64,
    pub sparsity_level: f64,
    pub n: usize,
    pub ambient: usize,
    pub s: usize,
    /// `max(delta_s^+, delta_s^-)` lower bound.
    pub lower_bound: Option<f64>,
    pub upper_new: Option<f64>,
    pub upper_classical: Option<f64>,
    /// Sorted, without duplicates.
    pub flags: Vec<RowFlag>,
}

impl CurveRow {
    pub fn has(&self, flag: RowFlag) -> bool {
        self.flags.contains(&flag)
    }

    /// Both the lower bound and the new upper bound are inside their regimes.
    pub fn is_valid(&self) -> bool {
        !self.flags.iter().any(|f| f.invalidates())
    }
}

#[derive(Debug, Clone)]
pub struct CurveConfig {
    pub ambient: usize,
    pub sparsity_ratio: f64,
    pub rates: Vec<f64>,
    pub confidence: f64,
    pub const_c: f64,
    /// Constants of the classical comparison curve.
    pub c1: f64,
    pub c2: f64,
}

impl CurveConfig {
    pub fn new(ambient: usize, sparsity_ratio: f64, rates: Vec<f64>, confidence: f64, const_c: f64) -> Self {
        Self {
            ambient,
            sparsity_ratio,
            rates,
            confidence,
            const_c,
            c1: 1.0,
            c2: 1.0,
        }
    }

    pub fn sparsity(&self) -> Result<usize> {
        let s = (self.sparsity_ratio * self.ambient as f64).round();
        if !(s >= 1.0) || s >= self.ambient as f64 {
            return Err(Error::domain(format!(
                "sparsity ratio {} at N = {} gives s = {s}, need 1 <= s < N",
                self.sparsity_ratio, self.ambient
            )));
        }
        Ok(s as usize)
    }

    pub fn run(&self) -> Result<Vec<CurveRow>> {
        let s = self.sparsity()?;
        let lower = LowerModel::new(self.ambient, s)?;
        let upper = UpperModel::new(self.ambient, s)?;

        let mut ns = self
            .rates
            .iter()
            .map(|&rate| {
                let n = (self.ambient as f64 / rate).round();
                if !(rate > 1.0) || !(n >= 1.0) {
                    return Err(Error::domain(format!(
                        "compression rate must exceed 1 and leave n >= 1, got {rate}"
                    )));
                }
                Ok(n as usize)
            })
            .collect::<Result<Vec<_>>>()?;
        // Ascending compression rate is descending n.
        ns.sort_unstable_by(|a, b| b.cmp(a));

        ns.par_iter()
            .map(|&n| self.row(n, s, &lower, &upper))
            .collect()
    }

    fn row(&self, n: usize, s: usize, lower: &LowerModel, upper: &UpperModel) -> Result<CurveRow> {
        let dims = ProblemDims::new(n, self.ambient, s)?;
        let mut flags = Vec::new();

        let eps_lower = eps_for_confidence(n, self.confidence, EpsForm::Lower, self.const_c)?;
        let (plus, minus) = lower.eval(n, eps_lower, self.const_c)?;
        let lower_bound = [plus.value, minus.value].into_iter().flatten().reduce(f64::max);
        match lower_bound {
            None => flags.push(RowFlag::LowerUndefined),
            Some(v) if v <= 0.0 => flags.push(RowFlag::LowerVacuous),
            Some(_) => {}
        }
        if 5 * s >= self.ambient {
            flags.push(RowFlag::LowerOutOfRegime);
        }

        let eps_upper = eps_for_confidence(n, self.confidence, EpsForm::Upper, self.const_c)?;
        let up = upper.eval(n, eps_upper, self.const_c)?;
        if !up.is_valid() {
            flags.push(RowFlag::UpperNewOutOfRegime);
        }
        let classical = classical_upper_threshold(dims, self.confidence, self.c1, self.c2)?;

        if n < s {
            flags.push(RowFlag::NBelowS);
        }
        for (value, flag) in [
            (lower_bound, RowFlag::ClipLower),
            (up.value, RowFlag::ClipUpperNew),
            (classical.value, RowFlag::ClipUpperClassical),
        ] {
            if value.is_some_and(|v| v > PRESENTATION_CLIP) {
                flags.push(flag);
            }
        }
        flags.sort_unstable();

        Ok(CurveRow {
            compression_rate: self.ambient as f64 / n as f64,
            sparsity_level: self.sparsity_ratio,
            n,
            ambient: self.ambient,
            s,
            lower_bound,
            upper_new: up.value,
            upper_classical: classical.value,
            flags,
        })
    }
}

/// Evaluates the lower bound, the new upper bound and the classical upper
/// threshold at each compression rate, in ascending rate order.
pub fn curve(
    ambient: usize,
    sparsity_ratio: f64,
    rates: &[f64],
    confidence: f64,
    const_c: f64,
) -> Result<Vec<CurveRow>> {
    CurveConfig::new(ambient, sparsity_ratio, rates.to_vec(), confidence, const_c).run()
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    #[test]
    fn single_point_matches_pipeline() {
        let rows = curve(1000, 0.01, &[5.0], 0.99, 1.0).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert_eq!((row.n, row.s, row.compression_rate), (200, 10, 5.0));
        // max(lower+, lower-) and the upper bound at the 0.99-derived eps values.
        assert_relative_eq!(row.lower_bound.unwrap(), 0.251_841_499_090_531, epsilon = 1e-11);
        assert_relative_eq!(row.upper_new.unwrap(), 0.915_599_173_577_045, epsilon = 1e-11);
        assert_relative_eq!(row.upper_classical.unwrap(), 0.588_329_475_738_027, epsilon = 1e-11);
        assert!(row.flags.is_empty() && row.is_valid());
    }

    #[test]
    fn regime_flags() {
        let rows = curve(1000, 0.01, &[1.01, 10.0, 60.0, 200.0], 0.99, 1.0).unwrap();
        let rates: Vec<f64> = rows.iter().map(|r| r.compression_rate).collect();
        assert!(rates.windows(2).all(|w| w[0] < w[1]));
        assert!(rows[0].is_valid());
        assert!(rows[2].has(RowFlag::UpperNewOutOfRegime));
        assert!(rows[3].has(RowFlag::NBelowS));
        assert!(rows[3].has(RowFlag::ClipUpperNew));
        assert!(rows[3].lower_bound.is_some());

        let rows = curve(1000, 0.001, &[5.0], 0.99, 1.0).unwrap();
        assert_eq!(rows[0].lower_bound, None);
        assert!(rows[0].has(RowFlag::LowerUndefined));
    }

    #[test]
    fn rejects_bad_rates() {
        assert!(curve(1000, 0.01, &[1.0], 0.99, 1.0).is_err());
        assert!(curve(1000, 0.01, &[5000.0], 0.99, 1.0).is_err());
        assert!(curve(1000, 0.0001, &[5.0], 0.99, 1.0).is_err());
    }

    #[test]
    fn flag_tokens_round_trip() {
        for f in RowFlag::ALL {
            assert_eq!(RowFlag::from_token(f.token()), Some(f));
        }
        assert_eq!(RowFlag::from_token("nope"), None);
    }
}
