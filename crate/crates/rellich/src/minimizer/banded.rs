//! Symmetric banded matrices with `LDL^T` factorization.

use crate::error::{Error, Result};

/// Symmetric `n x n` matrix storing the lower band `a[i][i - j]`, `0 <= j <= bw`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBand {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl SymBand {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self { n, bw, data: vec![0.0; n * (bw + 1)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    fn idx(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        (i - j <= self.bw).then(|| i * (self.bw + 1) + (i - j))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.idx(i, j).map_or(0.0, |k| self.data[k])
    }

    /// Adds `v` to entry `(i, j)` (and its mirror).
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j).expect("entry outside the band");
        self.data[k] += v;
    }

    /// `self - sigma * other`.
    pub fn shifted(&self, sigma: f64, other: &SymBand) -> SymBand {
        assert!(self.n == other.n && self.bw == other.bw);
        SymBand { n: self.n, bw: self.bw, data: self.data.iter().zip(&other.data).map(|(a, b)| a - sigma * b).collect() }
    }

    /// `D A D` for a diagonal `D`.
    pub fn scaled(&self, d: &[f64]) -> SymBand {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in i.saturating_sub(self.bw)..=i {
                let k = i * (self.bw + 1) + (i - j);
                out.data[k] *= d[i] * d[j];
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            for j in i.saturating_sub(self.bw)..=i {
                let a = self.data[i * (self.bw + 1) + (i - j)];
                y[i] += a * x[j];
                if j != i {
                    y[j] += a * x[i];
                }
            }
        }
        y
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }

    /// `LDL^T` without pivoting; zero pivots are nudged to a tiny value of
    /// the scale of the diagonal so that inertia counts stay defined.
    pub fn ldlt(&self) -> Ldlt {
        let (n, bw) = (self.n, self.bw);
        let mut l = self.data.clone();
        let mut d = vec![0.0; n];
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..i {
                // l[i][j] = (a[i][j] - sum_{k<j} l[i][k] l[j][k] d[k]) / d[j]
                let mut s = l[i * (bw + 1) + (i - j)];
                for k in lo.max(j.saturating_sub(bw))..j {
                    s -= l[i * (bw + 1) + (i - k)] * l[j * (bw + 1) + (j - k)] * d[k];
                }
                l[i * (bw + 1) + (i - j)] = s / d[j];
            }
            let mut s = l[i * (bw + 1)];
            for k in lo..i {
                let lik = l[i * (bw + 1) + (i - k)];
                s -= lik * lik * d[k];
            }
            if s == 0.0 {
                s = f64::MIN_POSITIVE.max(1e-300 * self.data[i * (bw + 1)].abs());
            }
            d[i] = s;
        }
        Ldlt { n, bw, l, d }
    }
}

/// Factors of [`SymBand::ldlt`].
#[derive(Debug, Clone)]
pub struct Ldlt {
    n: usize,
    bw: usize,
    l: Vec<f64>,
    d: Vec<f64>,
}

impl Ldlt {
    /// Number of negative pivots, equal to the number of negative eigenvalues.
    pub fn negative_count(&self) -> usize {
        self.d.iter().filter(|&&v| v < 0.0).count()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.d.iter().all(|&v| v > 0.0)
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::Invalid(format!("right-hand side of length {} for order {}", b.len(), self.n)));
        }
        let (n, bw) = (self.n, self.bw);
        let mut x = b.to_vec();
        for i in 0..n {
            for k in i.saturating_sub(bw)..i {
                x[i] -= self.l[i * (bw + 1) + (i - k)] * x[k];
            }
        }
        for i in 0..n {
            x[i] /= self.d[i];
        }
        for i in (0..n).rev() {
            for k in i + 1..(i + bw + 1).min(n) {
                x[i] -= self.l[k * (bw + 1) + (k - i)] * x[k];
            }
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NotConverged("banded solve produced non-finite values".into()));
        }
        Ok(x)
    }
}
