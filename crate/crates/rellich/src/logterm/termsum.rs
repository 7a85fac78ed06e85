use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::AlphaPoly;
use crate::error::{Error, Result};
use crate::rational::{fmt as qfmt, qi, to_f64, Q};

/// One term `coeff(alpha) * r^r_power * (log R/r)^(alpha_mult * alpha + log_offset)`.
///
/// `alpha_mult` is 1 for the log-power families and 0 for plain Laurent
/// polynomials in `r` (cutoffs, constants).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogTerm {
    pub coeff: AlphaPoly,
    pub r_power: i64,
    pub alpha_mult: i64,
    pub log_offset: i64,
}

/// Merge key: `(r_power, alpha_mult, log_offset)`.
pub type TermKey = (i64, i64, i64);

/// A finite sum of [`LogTerm`]s for a fixed dimension `N` and radius `R`,
/// merged on [`TermKey`] with zero coefficients removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermSum {
    terms: BTreeMap<TermKey, AlphaPoly>,
    n: u32,
    radius: Q,
}

/// A term with `alpha` substituted: `c * r^s * (log R/r)^e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealTerm {
    pub c: f64,
    pub s: i64,
    pub e: f64,
}

impl TermSum {
    pub fn zero(n: u32, radius: Q) -> Self {
        Self { terms: BTreeMap::new(), n, radius }
    }

    /// `(log R/r)^(alpha + offset)`.
    pub fn log_power(n: u32, radius: Q, offset: i64) -> Self {
        let mut s = Self::zero(n, radius);
        s.add_term((0, 1, offset), AlphaPoly::one());
        s
    }

    /// `c * r^s * (log R/r)^(alpha_mult alpha + t)`.
    pub fn monomial(n: u32, radius: Q, coeff: AlphaPoly, key: TermKey) -> Self {
        let mut s = Self::zero(n, radius);
        s.add_term(key, coeff);
        s
    }

    /// Laurent polynomial `sum_i c_i r^{i + lowest}` with `alpha`-free coefficients.
    pub fn laurent(n: u32, radius: Q, lowest: i64, coeffs: &[Q]) -> Self {
        let mut s = Self::zero(n, radius);
        for (i, c) in coeffs.iter().enumerate() {
            s.add_term((lowest + i as i64, 0, 0), AlphaPoly::constant(c.clone()));
        }
        s
    }

    pub fn constant(n: u32, radius: Q, c: Q) -> Self {
        Self::laurent(n, radius, 0, &[c])
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn radius(&self) -> &Q {
        &self.radius
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, key: TermKey) -> Option<&AlphaPoly> {
        self.terms.get(&key)
    }

    pub fn terms(&self) -> impl Iterator<Item = LogTerm> + '_ {
        self.terms.iter().map(|(&(s, e, t), c)| LogTerm {
            coeff: c.clone(),
            r_power: s,
            alpha_mult: e,
            log_offset: t,
        })
    }

    pub fn add_term(&mut self, key: TermKey, coeff: AlphaPoly) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_default();
        *slot = &*slot + &coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn same_space(&self, o: &Self) {
        assert!(
            self.n == o.n && self.radius == o.radius,
            "term sums over different (N, R) cannot be combined"
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_space(o);
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&qi(-1)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.scale_poly(&AlphaPoly::constant(c.clone()))
    }

    pub fn scale_poly(&self, c: &AlphaPoly) -> Self {
        let mut out = Self::zero(self.n, self.radius.clone());
        for (k, a) in &self.terms {
            out.add_term(*k, a * c);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_space(o);
        let mut out = Self::zero(self.n, self.radius.clone());
        for (&(s1, e1, t1), a) in &self.terms {
            for (&(s2, e2, t2), b) in &o.terms {
                out.add_term((s1 + s2, e1 + e2, t1 + t2), a * b);
            }
        }
        out
    }

    /// Multiply by `r^j`.
    pub fn shift_r(&self, j: i64) -> Self {
        let mut out = Self::zero(self.n, self.radius.clone());
        for (&(s, e, t), c) in &self.terms {
            out.add_term((s + j, e, t), c.clone());
        }
        out
    }

    /// Substitute a numeric `alpha`.
    pub fn realize(&self, alpha: f64) -> Vec<RealTerm> {
        self.terms
            .iter()
            .map(|(&(s, e, t), c)| RealTerm { c: c.eval_f64(alpha), s, e: e as f64 * alpha + t as f64 })
            .filter(|t| t.c != 0.0)
            .collect()
    }

    /// Value at `r` with rational `alpha` substituted.
    pub fn evaluate(&self, alpha: &Q, r: f64) -> Result<f64> {
        self.evaluate_f64(to_f64(alpha), r)
    }

    pub fn evaluate_f64(&self, alpha: f64, r: f64) -> Result<f64> {
        let big_r = to_f64(&self.radius);
        if !(r > 0.0 && r < big_r) {
            return Err(Error::OutOfRange(format!("r = {r} outside (0, {big_r})")));
        }
        let t = log_ratio(big_r, r);
        Ok(super::CompiledSum::new(self, alpha).value(t))
    }
}

/// `log(R/r)` accurate near both `r -> R` and `r -> 0`.
pub fn log_ratio(big_r: f64, r: f64) -> f64 {
    let x = (r - big_r) / big_r;
    if x.abs() < 0.5 {
        -x.ln_1p()
    } else {
        (big_r / r).ln()
    }
}

/// `sum_j c_j r^{s_j} t^{e_j}` at `r = R e^{-t}`.
pub fn eval_real(terms: &[RealTerm], big_r: f64, t: f64) -> f64 {
    let ln_r = big_r.ln() - t;
    let lt = t.ln();
    terms.iter().map(|term| term.c * (term.s as f64 * ln_r + term.e * lt).exp()).sum()
}

impl fmt::Display for TermSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(s, e, t), c)| {
                let lexp = match (e, t) {
                    (0, t) => format!("{t}"),
                    (1, 0) => "a".to_string(),
                    (1, t) => format!("a{t:+}"),
                    (e, t) => format!("{e}a{t:+}"),
                };
                format!("[{c}] r^{s} L^({lexp})")
            })
            .collect();
        write!(f, "{} (N={}, R={})", parts.join(" + "), self.n, qfmt(&self.radius))
    }
}

impl TermSum {
    pub(crate) fn zero_like(&self) -> Self {
        Self::zero(self.n, self.radius.clone())
    }

    pub(crate) fn raw(&self) -> &BTreeMap<TermKey, AlphaPoly> {
        &self.terms
    }
}

impl Default for TermSum {
    fn default() -> Self {
        Self::zero(2, qi(1))
    }
}

#[allow(dead_code)]
fn is_zero_q(q: &Q) -> bool {
    q.is_zero()
}
