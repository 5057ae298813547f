use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ensemble {
    Gaussian,
    Rademacher,
}

impl Ensemble {
    pub fn as_str(self) -> &'static str {
        match self {
            Ensemble::Gaussian => "gaussian",
            Ensemble::Rademacher => "rademacher",
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Ensemble::Gaussian),
            "rademacher" => Ok(Ensemble::Rademacher),
            other => Err(Error::domain(format!(
                "unknown ensemble '{other}', expected gaussian or rademacher"
            ))),
        }
    }
}

/// Dense row-major `rows x cols` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    /// `(ensemble, seed)` when the matrix was sampled.
    origin: Option<(Ensemble, u64)>,
}

impl DenseMatrix {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::domain("matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::domain(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            data,
            origin: None,
        })
    }

    /// `scale` times the `size x size` identity.
    pub fn scaled_identity(size: usize, scale: f64) -> Result<Self> {
        let mut data = vec![0.0; size * size];
        for i in 0..size {
            data[i * size + i] = scale;
        }
        Self::from_row_major(size, size, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn origin(&self) -> Option<(Ensemble, u64)> {
        self.origin
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        self.data[col..].iter().step_by(self.cols).copied()
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    /// Entrywise `self * c`. The result no longer counts as sampled.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
            origin: None,
        }
    }

    /// Entrywise `self + other`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::domain("matrix shapes differ"));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
            origin: None,
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Column-major copy, so each column is a contiguous slice.
    pub(crate) fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.cols).map(|j| self.column(j).collect()).collect()
    }

    /// `A^T a_j`, accumulated row by row.
    pub(crate) fn column_correlations(&self, j: usize) -> Vec<f64> {
        let mut acc = vec![0.0; self.cols];
        for r in 0..self.rows {
            let row = self.row(r);
            let w = row[j];
            for (a, &x) in acc.iter_mut().zip(row) {
                *a += w * x;
            }
        }
        acc
    }

    /// `||A v||^2` for a vector given by its support and values.
    pub(crate) fn sparse_energy(&self, support: &[usize], values: &[f64]) -> f64 {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let y: f64 = support.iter().zip(values).map(|(&j, &v)| row[j] * v).sum();
                y * y
            })
            .sum()
    }
}

/// An `n x N` matrix of i.i.d. mean-zero unit-variance entries.
///
/// Entries are drawn row-major from stream 0 of `seed`, so the same arguments
/// always regenerate the same matrix bit for bit.
pub fn sample_matrix(n: usize, ambient: usize, ensemble: Ensemble, seed: u64) -> Result<DenseMatrix> {
    if n == 0 || ambient == 0 {
        return Err(Error::domain(format!(
            "matrix dimensions must be positive, got {n}x{ambient}"
        )));
    }
    let mut rng = rng::stream_rng(seed, 0);
    let len = n * ambient;
    let data: Vec<f64> = match ensemble {
        Ensemble::Gaussian => (0..len).map(|_| StandardNormal.sample(&mut rng)).collect(),
        Ensemble::Rademacher => (0..len)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect(),
    };
    Ok(DenseMatrix {
        rows: n,
        cols: ambient,
        data,
        origin: Some((ensemble, seed)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rademacher_support() {
        let m = sample_matrix(30, 40, Ensemble::Rademacher, 5).unwrap();
        assert!(m.as_slice().iter().all(|&x| x == 1.0 || x == -1.0));
        let plus = m.as_slice().iter().filter(|&&x| x > 0.0).count();
        assert!((500..700).contains(&plus));
    }

    #[test]
    fn gaussian_moments() {
        let m = sample_matrix(1000, 1000, Ensemble::Gaussian, 2024).unwrap();
        let xs = m.as_slice();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!(mean.abs() <= 0.004, "{mean}");
        assert!((0.99..=1.01).contains(&var), "{var}");
    }

    #[test]
    fn regeneration_is_bit_identical() {
        let a = sample_matrix(7, 9, Ensemble::Gaussian, 42).unwrap();
        let b = sample_matrix(7, 9, Ensemble::Gaussian, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.origin(), Some((Ensemble::Gaussian, 42)));
        assert_ne!(a, sample_matrix(7, 9, Ensemble::Gaussian, 43).unwrap());
    }

    #[test]
    fn zero_dimensions_rejected() {
        assert!(sample_matrix(0, 3, Ensemble::Gaussian, 1).is_err());
        assert!(sample_matrix(3, 0, Ensemble::Rademacher, 1).is_err());
        assert!(DenseMatrix::from_row_major(2, 2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn accessors() {
        let m = DenseMatrix::from_row_major(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(m.get(1, 2), 6.0);
        assert_eq!(m.column(1).collect::<Vec<_>>(), vec![2.0, 5.0]);
        assert_eq!(m.column_correlations(0), vec![17.0, 22.0, 27.0]);
        assert_eq!(m.sparse_energy(&[0, 2], &[1.0, -1.0]), 4.0 + 4.0);
        assert_eq!("rademacher".parse::<Ensemble>().unwrap(), Ensemble::Rademacher);
        assert!("bernoulli".parse::<Ensemble>().is_err());
    }
}
