//! Exact one-sided RIP constants by enumerating every support of size `s`.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use super::DenseMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_SUPPORT_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactRip {
    pub s: usize,
    pub delta_plus: f64,
    pub delta_minus: f64,
    pub delta_s: f64,
    pub supports_checked: u128,
    /// First support (lexicographically) attaining `delta_plus`.
    pub argmax_support: Vec<usize>,
    /// First support attaining `delta_minus`.
    pub argmin_support: Vec<usize>,
}

impl ExactRip {
    /// Largest singular value over all `n x s` column submatrices of the
    /// unscaled `A`, i.e. `sqrt(n (1 + delta_plus))`.
    pub fn sigma_max(&self, n: usize) -> f64 {
        (n as f64 * (1.0 + self.delta_plus)).max(0.0).sqrt()
    }

    /// Smallest singular value over all `n x s` column submatrices, `sqrt(n (1 - delta_minus))`.
    pub fn sigma_min(&self, n: usize) -> f64 {
        (n as f64 * (1.0 - self.delta_minus)).max(0.0).sqrt()
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Advances `combo` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Debug, Clone)]
struct Extremes {
    max_eig: f64,
    max_support: Vec<usize>,
    min_eig: f64,
    min_support: Vec<usize>,
    count: u128,
}

impl Extremes {
    fn merge(mut self, other: Extremes) -> Extremes {
        // Chunks arrive in lexicographic order, so strict comparisons keep the
        // first extremal support.
        if other.max_eig > self.max_eig {
            self.max_eig = other.max_eig;
            self.max_support = other.max_support;
        }
        if other.min_eig < self.min_eig {
            self.min_eig = other.min_eig;
            self.min_support = other.min_support;
        }
        self.count += other.count;
        self
    }
}

/// Extreme eigenvalues of the `s x s` Gram matrices of `Phi = A / sqrt(n)`
/// over all supports, with the default cap of `10^6` supports.
pub fn exact_rip(a: &DenseMatrix, s: usize) -> Result<ExactRip> {
    exact_rip_with_cap(a, s, DEFAULT_SUPPORT_CAP)
}

pub fn exact_rip_with_cap(a: &DenseMatrix, s: usize, cap: u128) -> Result<ExactRip> {
    let ambient = a.cols();
    if s == 0 || s > ambient {
        return Err(Error::domain(format!(
            "need 1 <= s <= N, got s = {s}, N = {ambient}"
        )));
    }
    let count = binomial(ambient, s);
    if count > cap {
        return Err(Error::ResourceCap { count, cap });
    }

    let scale = 1.0 / a.rows() as f64;
    let cols = a.columns();
    let gram_entry = |i: usize, j: usize| -> f64 {
        cols[i].iter().zip(&cols[j]).map(|(x, y)| x * y).sum::<f64>() * scale
    };

    // One task per leading index; each walks its block of supports in order.
    let blocks: Vec<Extremes> = (0..=ambient - s)
        .into_par_iter()
        .map(|first| {
            let mut combo: Vec<usize> = (first..first + s).collect();
            let mut gram = DMatrix::<f64>::zeros(s, s);
            let mut best = Extremes {
                max_eig: f64::NEG_INFINITY,
                max_support: Vec::new(),
                min_eig: f64::INFINITY,
                min_support: Vec::new(),
                count: 0,
            };
            loop {
                for r in 0..s {
                    for c in r..s {
                        let g = gram_entry(combo[r], combo[c]);
                        gram[(r, c)] = g;
                        gram[(c, r)] = g;
                    }
                }
                let (lo, hi) = if s == 1 {
                    (gram[(0, 0)], gram[(0, 0)])
                } else {
                    let eig = SymmetricEigen::new(gram.clone()).eigenvalues;
                    (eig.min(), eig.max())
                };
                if hi > best.max_eig {
                    best.max_eig = hi;
                    best.max_support = combo.clone();
                }
                if lo < best.min_eig {
                    best.min_eig = lo;
                    best.min_support = combo.clone();
                }
                best.count += 1;
                if !next_combination(&mut combo, ambient) || combo[0] != first {
                    break;
                }
            }
            best
        })
        .collect();

    let total = blocks
        .into_iter()
        .reduce(Extremes::merge)
        .expect("at least one support");
    debug_assert_eq!(total.count, count);
    let delta_plus = total.max_eig - 1.0;
    let delta_minus = 1.0 - total.min_eig;
    Ok(ExactRip {
        s,
        delta_plus,
        delta_minus,
        delta_s: delta_plus.max(delta_minus),
        supports_checked: total.count,
        argmax_support: total.max_support,
        argmin_support: total.min_support,
    })
}
