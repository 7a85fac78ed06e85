use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{fmt as qfmt, qi, to_f64, Q};

/// Polynomial in the symbolic exponent `alpha`, dense coefficients by degree,
/// trailing zeros trimmed (the zero polynomial has no coefficients).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AlphaPoly {
    coeffs: Vec<Q>,
}

impl AlphaPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    /// `alpha + t`.
    pub fn alpha_plus(t: i64) -> Self {
        Self::from_coeffs(vec![qi(t), Q::one()])
    }

    /// `e * alpha + t`.
    pub fn linear(e: i64, t: i64) -> Self {
        Self::from_coeffs(vec![qi(t), qi(e)])
    }

    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Falling factorial `prod_{i=lo}^{hi} (alpha - i)`; empty product is 1.
    pub fn falling(lo: i64, hi: i64) -> Self {
        let mut p = Self::one();
        for i in lo..=hi {
            p = &p * &Self::alpha_plus(-i);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, alpha: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * alpha + c;
        }
        acc
    }

    pub fn eval_f64(&self, alpha: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * alpha + to_f64(c);
        }
        acc
    }
}

impl Add for &AlphaPoly {
    type Output = AlphaPoly;
    fn add(self, o: &AlphaPoly) -> AlphaPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Q::zero();
        AlphaPoly::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Sub for &AlphaPoly {
    type Output = AlphaPoly;
    fn sub(self, o: &AlphaPoly) -> AlphaPoly {
        self + &(-o)
    }
}

impl Neg for &AlphaPoly {
    type Output = AlphaPoly;
    fn neg(self) -> AlphaPoly {
        AlphaPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &AlphaPoly {
    type Output = AlphaPoly;
    fn mul(self, o: &AlphaPoly) -> AlphaPoly {
        if self.is_zero() || o.is_zero() {
            return AlphaPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        AlphaPoly::from_coeffs(out)
    }
}

impl fmt::Display for AlphaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => qfmt(c),
                1 => format!("({})a", qfmt(c)),
                _ => format!("({})a^{i}", qfmt(c)),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
