//! RIP requirements of common sparse recovery algorithms.

use crate::error::{Error, Result};

pub const ALGORITHM_IDS: [&str; 7] = ["l1", "l1_2s", "omp", "omp_13s", "cosamp", "iht", "htp"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Constant(f64),
    /// `1 / (1 + sqrt(s))`
    InverseOnePlusSqrtS,
}

impl Threshold {
    pub fn value(self, s: usize) -> f64 {
        match self {
            Threshold::Constant(v) => v,
            Threshold::InverseOnePlusSqrtS => 1.0 / (1.0 + (s as f64).sqrt()),
        }
    }
}

/// Recovery is guaranteed when `delta_{order_multiplier * s}` is below
/// `threshold` (or at most, when `strict` is false).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgorithmRequirement {
    pub id: &'static str,
    pub order_multiplier: usize,
    pub threshold: Threshold,
    pub strict: bool,
}

pub fn algorithm_requirement(name: &str) -> Result<AlgorithmRequirement> {
    let (id, order_multiplier, threshold, strict) = match name {
        "l1" => ("l1", 1, Threshold::Constant(1.0 / 3.0), true),
        "l1_2s" => ("l1_2s", 2, Threshold::Constant(4.0 / 41f64.sqrt()), true),
        "omp" => ("omp", 1, Threshold::InverseOnePlusSqrtS, true),
        "omp_13s" => ("omp_13s", 13, Threshold::Constant(1.0 / 6.0), true),
        "cosamp" => (
            "cosamp",
            4,
            Threshold::Constant(((11.0f64 / 3.0).sqrt() - 1.0).sqrt() / 2.0),
            false,
        ),
        "iht" => ("iht", 3, Threshold::Constant(1.0 / 3f64.sqrt()), true),
        "htp" => ("htp", 3, Threshold::Constant(1.0 / 3f64.sqrt()), true),
        other => {
            return Err(Error::domain(format!(
                "unknown algorithm '{other}', expected one of: {}",
                ALGORITHM_IDS.join(", ")
            )))
        }
    };
    Ok(AlgorithmRequirement {
        id,
        order_multiplier,
        threshold,
        strict,
    })
}
