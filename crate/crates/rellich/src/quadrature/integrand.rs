//! Integrands `|F(t)|^p r^sigma (t + shift)^omega` built from closed-form pieces.

use super::endpoints::{integrate_head, integrate_tail, Tail};
use super::gk::{integrate_finite, QuadratureResult};
use super::profile::RadialProfile;
use crate::error::{Error, Result};
use crate::logterm::CompiledSum;

/// Logarithmic weight `(t + shift)^omega`; `shift = log a` for the dilated weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogWeight {
    pub omega: f64,
    pub shift: f64,
}

impl LogWeight {
    pub fn none() -> Self {
        Self { omega: 0.0, shift: 0.0 }
    }

    pub fn power(omega: f64) -> Self {
        Self { omega, shift: 0.0 }
    }
}

/// `|F(t)|^p * r^sigma * (t + shift)^omega` at `r = R e^{-t}`.
///
/// The common factor `r^{s_min}` of `F` is pulled out before taking the
/// power so that exactly cancelling powers of `r` (the critical case) never
/// produce `0 * inf` at large `t`.
#[derive(Debug, Clone)]
pub struct PowerIntegrand {
    f: CompiledSum,
    p: f64,
    sigma: f64,
    weight: LogWeight,
    ln_big_r: f64,
}

impl PowerIntegrand {
    pub fn new(f: CompiledSum, p: f64, sigma: f64, weight: LogWeight, big_r: f64) -> Self {
        Self { f, p, sigma, weight, ln_big_r: big_r.ln() }
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero()
    }

    fn rate(&self) -> f64 {
        self.p * self.f.s_min() as f64 + self.sigma
    }

    pub fn value(&self, t: f64) -> f64 {
        let inner = self.f.reduced(t);
        if inner == 0.0 {
            return 0.0;
        }
        let mut v = inner.abs().powf(self.p) * (self.rate() * (self.ln_big_r - t)).exp();
        if self.weight.omega != 0.0 {
            v *= (t + self.weight.shift).powf(self.weight.omega);
        }
        v
    }

    /// Asymptotics as `t -> infinity` from the term structure.
    pub fn tail(&self) -> Result<Tail> {
        let Some(e_max) = self.f.tail_exponent() else {
            return Ok(Tail::Zero);
        };
        let rate = self.rate();
        if rate > 1e-12 {
            return Ok(Tail::Exponential { rate });
        }
        if rate < -1e-12 {
            return Err(Error::Divergent(format!("integrand grows like r^{rate} at the origin")));
        }
        Ok(Tail::Power { exponent: self.p * e_max + self.weight.omega })
    }

    /// Leading exponent as `t -> 0` (where `r -> R`).
    pub fn head_exponent(&self) -> f64 {
        let w = if self.weight.shift == 0.0 { self.weight.omega } else { 0.0 };
        match self.f.boundary_exponent() {
            Some(e) => self.p * e + w,
            None => w.max(0.0),
        }
    }
}

/// `int |F|^p r^sigma (t + shift)^omega dt` over all pieces of `profile`.
///
/// `sigma` is the power of `r` after `dr = r dt`: e.g. `N` for
/// `int |F|^p r^{N-1} dr`.
pub fn integrate_profile(
    profile: &RadialProfile,
    p: f64,
    sigma: f64,
    weight: LogWeight,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    let big_r = profile.radius_f64();
    let mut total = QuadratureResult::zero();
    for piece in &profile.pieces {
        let f = PowerIntegrand::new(CompiledSum::new(&piece.sum, profile.alpha), p, sigma, weight, big_r);
        if f.is_zero() {
            continue;
        }
        let res = integrate_piece(&f, piece.t_lo, piece.t_hi, rel_tol)?;
        total = total.add(res);
    }
    Ok(total)
}

/// One piece on `[a, b]`, with `a = 0` and `b = inf` treated as singular ends.
pub fn integrate_piece(f: &PowerIntegrand, a: f64, b: f64, rel_tol: f64) -> Result<QuadratureResult> {
    let g = |t: f64| f.value(t);
    let mut res = QuadratureResult::zero();
    let (mut lo, hi) = (a, b);
    if lo == 0.0 {
        let split = if hi.is_finite() { 0.5 * hi } else { 1.0 };
        res = res.add(integrate_head(&g, split, f.head_exponent(), rel_tol)?);
        lo = split;
    }
    if hi.is_infinite() {
        let split = lo.max(1.0);
        if split > lo {
            res = res.add(integrate_finite(&g, lo, split, rel_tol, 0.0));
        }
        res = res.add(integrate_tail(&g, split, f.tail()?, rel_tol)?);
    } else {
        res = res.add(integrate_finite(&g, lo, hi, rel_tol, 0.0));
    }
    Ok(res)
}

/// `int_0^inf f(t) dt` for a plain closure with `f ~ C t^head_exponent` at 0
/// and the given tail; `breakpoints` (positive, finite) split the range.
pub fn integrate_half_line<F: Fn(f64) -> f64>(
    f: &F,
    breakpoints: &[f64],
    head_exponent: f64,
    tail: Tail,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    let mut pts: Vec<f64> = breakpoints.iter().copied().filter(|b| b.is_finite() && *b > 0.0).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let first = pts.first().copied().unwrap_or(1.0);
    let tau = 0.5 * first.min(1.0);
    let last = pts.last().copied().unwrap_or(1.0).max(1.0);
    let mut res = integrate_head(f, tau, head_exponent, rel_tol)?;
    let mut lo = tau;
    for &b in pts.iter().chain(std::iter::once(&last)) {
        if b > lo {
            res = res.add(integrate_finite(f, lo, b, rel_tol, 0.0));
            lo = b;
        }
    }
    Ok(res.add(integrate_tail(f, lo, tail, rel_tol)?))
}
