//! Explicit sparse unit vectors witnessing lower bounds on `delta_s^+` and `delta_s^-`.
//!
//! Put mass `1/sqrt(2)` on the first coordinate. With `x_i = <a_1, a_i> / ||a_1||`,
//! spend the remaining `1/sqrt(2)` on the `s - 1` largest `|x_i|`, proportionally
//! to `x_i`. That choice attains equality in Cauchy–Schwarz for
//! `sum_i v_i x_i`, pushing `||A v'||` up; flipping the sign of the tail gives
//! `v''`, which pushes `||A v''||` down.

use std::f64::consts::FRAC_1_SQRT_2;

use super::DenseMatrix;
use crate::error::{Error, Result};
use crate::order_stats::top_k_indices;

#[derive(Debug, Clone, PartialEq)]
pub struct AdversarialCertificate {
    /// Sorted nonzero coordinates shared by both vectors; always starts with 0.
    pub support: Vec<usize>,
    /// Values of `v'` on `support`.
    pub v_plus: Vec<f64>,
    /// Values of `v''` on `support`.
    pub v_minus: Vec<f64>,
    /// `||Phi v'||^2` with `Phi = A / sqrt(n)`.
    pub plus_energy: f64,
    /// `||Phi v''||^2`.
    pub minus_energy: f64,
    pub delta_plus_emp: f64,
    pub delta_minus_emp: f64,
    /// All `x_i` on the candidate support were zero; the tail mass went to the
    /// lowest-index coordinates instead.
    pub degenerate: bool,
}

impl AdversarialCertificate {
    /// `v'` as a dense vector of length `ambient`.
    pub fn dense_plus(&self, ambient: usize) -> Vec<f64> {
        densify(&self.support, &self.v_plus, ambient)
    }

    pub fn dense_minus(&self, ambient: usize) -> Vec<f64> {
        densify(&self.support, &self.v_minus, ambient)
    }
}

fn densify(support: &[usize], values: &[f64], ambient: usize) -> Vec<f64> {
    let mut v = vec![0.0; ambient];
    for (&j, &x) in support.iter().zip(values) {
        v[j] = x;
    }
    v
}

/// Weights of norm `1/sqrt(2)` on the `m` largest `|x_i|`, proportional to `x_i`.
///
/// Returns `(indices into x, weights, degenerate)`. Ties in `|x_i|` go to the
/// lower index.
pub(crate) fn half_mass_weights(x: &[f64], m: usize) -> (Vec<usize>, Vec<f64>, bool) {
    let magnitudes: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    let picked = top_k_indices(&magnitudes, m);
    let mass = picked.iter().map(|&i| x[i] * x[i]).sum::<f64>().sqrt();
    if mass > 0.0 {
        let weights = picked.iter().map(|&i| x[i] / mass * FRAC_1_SQRT_2).collect();
        (picked, weights, false)
    } else {
        let fallback: Vec<usize> = (0..m.min(x.len())).collect();
        let w = FRAC_1_SQRT_2 / (fallback.len() as f64).sqrt();
        let weights = vec![w; fallback.len()];
        (fallback, weights, true)
    }
}

/// Builds the pair `(v', v'')` for sparsity `s` and evaluates both quadratic forms.
pub fn adversarial_pair(a: &DenseMatrix, s: usize) -> Result<AdversarialCertificate> {
    let ambient = a.cols();
    if s < 2 || s > ambient {
        return Err(Error::domain(format!(
            "adversarial construction needs 2 <= s <= N, got s = {s}, N = {ambient}"
        )));
    }
    let correlations = a.column_correlations(0);
    let norm_sq = correlations[0];
    if !(norm_sq > 0.0) {
        return Err(Error::Degenerate("first column is zero".into()));
    }
    let norm = norm_sq.sqrt();
    let x: Vec<f64> = correlations[1..].iter().map(|c| c / norm).collect();

    let (picked, weights, degenerate) = half_mass_weights(&x, s - 1);
    let mut tail: Vec<(usize, f64)> = picked.into_iter().map(|i| i + 1).zip(weights).collect();
    tail.sort_unstable_by_key(|&(j, _)| j);

    let support: Vec<usize> = std::iter::once(0).chain(tail.iter().map(|&(j, _)| j)).collect();
    let v_plus: Vec<f64> = std::iter::once(FRAC_1_SQRT_2).chain(tail.iter().map(|&(_, w)| w)).collect();
    let v_minus: Vec<f64> = std::iter::once(FRAC_1_SQRT_2).chain(tail.iter().map(|&(_, w)| -w)).collect();

    let scale = 1.0 / a.rows() as f64;
    let plus_energy = a.sparse_energy(&support, &v_plus) * scale;
    let minus_energy = a.sparse_energy(&support, &v_minus) * scale;
    Ok(AdversarialCertificate {
        support,
        v_plus,
        v_minus,
        plus_energy,
        minus_energy,
        delta_plus_emp: plus_energy - 1.0,
        delta_minus_emp: 1.0 - minus_energy,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::mc_lab::{sample_matrix, Ensemble};

    #[test]
    fn half_mass_picks_largest_magnitudes() {
        let x = [3.0, -1.0, 2.0];
        let (picked, weights, degenerate) = half_mass_weights(&x, 2);
        assert_eq!(picked, vec![0, 2]);
        assert!(!degenerate);
        let inner: f64 = picked.iter().zip(&weights).map(|(&i, w)| x[i] * w).sum();
        assert_relative_eq!(inner, 13f64.sqrt() * FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_relative_eq!(inner, 2.549_510, epsilon = 1e-6);

        // Brute force over all 2-subsets with optimal weights of norm 1/sqrt(2).
        let best = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| FRAC_1_SQRT_2 * (x[i] * x[i] + x[j] * x[j]).sqrt())
            .fold(f64::MIN, f64::max);
        assert_relative_eq!(inner, best, epsilon = 1e-15);
    }

    #[test]
    fn ties_prefer_lower_index() {
        let (picked, _, _) = half_mass_weights(&[1.0, -2.0, 2.0, 2.0], 2);
        assert_eq!(picked, vec![1, 2]);
    }

    #[test]
    fn zero_correlations_fall_back() {
        let (picked, weights, degenerate) = half_mass_weights(&[0.0; 5], 3);
        assert!(degenerate);
        assert_eq!(picked, vec![0, 1, 2]);
        assert_relative_eq!(weights.iter().map(|w| w * w).sum::<f64>(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_matrix_input() {
        // Columns 1.. are orthogonal to column 0.
        let a = DenseMatrix::from_row_major(2, 3, vec![1.0, 0.0, 0.0, 0.0, 1.0, 1.0]).unwrap();
        let cert = adversarial_pair(&a, 2).unwrap();
        assert!(cert.degenerate);
        assert_eq!(cert.support, vec![0, 1]);

        let zero_first = DenseMatrix::from_row_major(2, 2, vec![0.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(adversarial_pair(&zero_first, 2), Err(Error::Degenerate(_))));
        assert!(adversarial_pair(&a, 1).is_err());
        assert!(adversarial_pair(&a, 4).is_err());
    }

    #[test]
    fn certificate_shape() {
        let a = sample_matrix(20, 50, Ensemble::Gaussian, 9).unwrap();
        let cert = adversarial_pair(&a, 5).unwrap();
        assert_eq!(cert.support.len(), 5);
        assert_eq!(cert.support[0], 0);
        assert_eq!(cert.v_plus[0], FRAC_1_SQRT_2);
        assert_eq!(cert.v_minus[0], FRAC_1_SQRT_2);
        for v in [&cert.v_plus, &cert.v_minus] {
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() <= 1e-12);
        }
        for (p, m) in cert.v_plus[1..].iter().zip(&cert.v_minus[1..]) {
            assert_eq!(*p, -*m);
        }
        assert!(cert.plus_energy >= cert.minus_energy);

        // Direct dense evaluation of ||A v||^2 / n.
        let dense = cert.dense_plus(50);
        let direct: f64 = (0..20)
            .map(|r| a.row(r).iter().zip(&dense).map(|(x, v)| x * v).sum::<f64>().powi(2))
            .sum::<f64>()
            / 20.0;
        assert_relative_eq!(direct, cert.plus_energy, max_relative = 1e-13);
    }
}
