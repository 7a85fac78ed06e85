//! Fast, cancellation-safe numeric evaluation of a [`TermSum`].
//!
//! Terms are grouped by their real log exponent `e`. Within a group the
//! coefficients form a polynomial in `rho = r/R`, stored twice with exact
//! rational coefficients rounded to double-double: in powers of `rho` and in
//! powers of `delta = 1 - rho`. Cutoff polynomials expanded in `r` cancel
//! heavily, and the double-double Horner sums keep the result accurate to
//! working precision of the inputs.

use num_traits::{One, Zero};

use super::TermSum;
use crate::rational::{to_f64, Q};

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dd(f64, f64);

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

impl Dd {
    fn from_q(x: &Q) -> Self {
        let hi = to_f64(x);
        if !hi.is_finite() || hi == 0.0 {
            return Dd(hi, 0.0);
        }
        let lo = to_f64(&(x - Q::from_float(hi).expect("finite")));
        Dd(hi, lo)
    }

    fn mul_add(self, x: f64, c: Dd) -> Dd {
        let p = self.0 * x;
        let e = self.0.mul_add(x, -p) + self.1 * x;
        let (s, e2) = two_sum(p, c.0);
        let (hi, lo) = two_sum(s, e2 + e + c.1);
        Dd(hi, lo)
    }
}

fn horner(coeffs: &[Dd], x: f64) -> f64 {
    let mut acc = Dd(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc.mul_add(x, c);
    }
    acc.0 + acc.1
}

#[derive(Debug, Clone, PartialEq)]
struct Group {
    e: f64,
    /// Coefficient of `rho^j`, `j = s - s_min`.
    in_rho: Vec<Dd>,
    /// Coefficient of `delta^j`.
    in_delta: Vec<Dd>,
    /// Order of the zero at `r = R` (leading zeros of `in_delta`).
    boundary_order: usize,
    /// Coefficient of `rho^0` is nonzero.
    has_lowest: bool,
}

/// A [`TermSum`] with `alpha` substituted, ready for repeated evaluation in
/// `t = log(R/r)`: value `= r^{s_min} sum_g t^{e_g} P_g(r/R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledSum {
    groups: Vec<Group>,
    s_min: i64,
    ln_big_r: f64,
}

impl CompiledSum {
    pub fn new(sum: &TermSum, alpha: f64) -> Self {
        let a = Q::from_float(alpha).expect("finite alpha");
        let big_r = sum.radius().clone();
        let ln_big_r = to_f64(&big_r).ln();
        let mut raw: Vec<(f64, i64, Q)> = Vec::new();
        for term in sum.terms() {
            let v = term.coeff.eval(&a);
            if v.is_zero() {
                continue;
            }
            raw.push((term.alpha_mult as f64 * alpha + term.log_offset as f64, term.r_power, v));
        }
        let s_min = raw.iter().map(|t| t.1).min().unwrap_or(0);
        let mut es: Vec<f64> = raw.iter().map(|t| t.0).collect();
        es.sort_by(|x, y| x.partial_cmp(y).unwrap());
        es.dedup_by(|x, y| (*x - *y).abs() < 1e-13);
        let mut groups = Vec::new();
        for e in es {
            let deg = raw.iter().filter(|t| (t.0 - e).abs() < 1e-13).map(|t| (t.1 - s_min) as usize).max().unwrap();
            let mut poly = vec![Q::zero(); deg + 1];
            for (_, s, v) in raw.iter().filter(|t| (t.0 - e).abs() < 1e-13) {
                let j = (s - s_min) as usize;
                poly[j] += v * pow_q(&big_r, *s);
            }
            // r^s = R^{s_min} rho^{s_min} * R^{s - s_min} rho^{s - s_min}; the
            // common R^{s_min} rho^{s_min} is applied at evaluation time.
            let r_min = pow_q(&big_r, s_min);
            for c in poly.iter_mut() {
                *c = &*c / &r_min;
            }
            if poly.iter().all(|c| c.is_zero()) {
                continue;
            }
            let delta = taylor_at_one(&poly);
            let boundary_order = delta.iter().take_while(|c| c.is_zero()).count();
            groups.push(Group {
                e,
                has_lowest: !poly[0].is_zero(),
                in_rho: poly.iter().map(Dd::from_q).collect(),
                in_delta: delta.iter().map(Dd::from_q).collect(),
                boundary_order,
            });
        }
        Self { groups, s_min, ln_big_r }
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    /// Lowest power of `r` present.
    pub fn s_min(&self) -> i64 {
        self.s_min
    }

    /// `sum_g t^{e_g} P_g(rho)`, i.e. the value divided by `r^{s_min}`.
    pub fn reduced(&self, t: f64) -> f64 {
        let lt = t.ln();
        let delta = -(-t).exp_m1();
        let use_delta = delta < 0.5;
        let rho = (-t).exp();
        self.groups
            .iter()
            .map(|g| {
                let poly = if use_delta { horner(&g.in_delta, delta) } else { horner(&g.in_rho, rho) };
                if poly == 0.0 {
                    0.0
                } else {
                    poly * (g.e * lt).exp()
                }
            })
            .sum()
    }

    pub fn value(&self, t: f64) -> f64 {
        let v = self.reduced(t);
        if v == 0.0 {
            return 0.0;
        }
        v * (self.s_min as f64 * (self.ln_big_r - t)).exp()
    }

    /// Largest log exponent among terms carrying `r^{s_min}` (governs `t -> infinity`).
    pub fn tail_exponent(&self) -> Option<f64> {
        self.groups.iter().filter(|g| g.has_lowest).map(|g| g.e).reduce(f64::max)
    }

    /// Leading power of `t` as `t -> 0`.
    pub fn boundary_exponent(&self) -> Option<f64> {
        self.groups.iter().map(|g| g.e + g.boundary_order as f64).reduce(f64::min)
    }
}

fn pow_q(x: &Q, e: i64) -> Q {
    let mut out = Q::one();
    for _ in 0..e.unsigned_abs() {
        out *= x;
    }
    if e < 0 {
        out.recip()
    } else {
        out
    }
}

/// Coefficients of `P(1 - delta)` in powers of `delta`.
fn taylor_at_one(poly: &[Q]) -> Vec<Q> {
    let n = poly.len();
    let mut out = vec![Q::zero(); n];
    // rho^j = sum_k binom(j, k) (-delta)^k
    for (j, c) in poly.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut b = Q::one();
        for k in 0..=j {
            let term = c * &b;
            if k % 2 == 0 {
                out[k] += term;
            } else {
                out[k] -= term;
            }
            b = b * Q::from_integer(((j - k) as i64).into()) / Q::from_integer(((k + 1) as i64).into());
        }
    }
    out
}
