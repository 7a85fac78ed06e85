//! Piecewise closed-form radial profiles: the test-function families.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ProblemParams;
use crate::logterm::{log_ratio, polyharmonic, CompiledSum, TermSum};
use crate::rational::{q, qi, to_f64, Q};

/// Polynomial smoothstep cutoff: 1 on `(0, inner]`, 0 on `[outer, R)`, class
/// `C^q` across both radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    #[serde(with = "crate::rational::serde_q")]
    pub inner_radius: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub outer_radius: Q,
    pub smoothness_order: u32,
}

impl CutoffSpec {
    /// `R/2`, `3R/4` with `q = k + 1`.
    pub fn standard(params: &ProblemParams) -> Self {
        Self {
            inner_radius: &params.radius * q(1, 2),
            outer_radius: &params.radius * q(3, 4),
            smoothness_order: params.k + 1,
        }
    }

    pub fn validate(&self, radius: &Q) -> Result<()> {
        if !(Q::zero() < self.inner_radius && self.inner_radius < self.outer_radius && &self.outer_radius < radius) {
            return Err(Error::Invalid("cutoff needs 0 < inner < outer < R".into()));
        }
        Ok(())
    }

    /// Coefficients (ascending powers of `r`) of the cutoff on `(inner, outer)`.
    pub fn polynomial(&self) -> Vec<Q> {
        let x_coeffs = smoothstep(self.smoothness_order);
        // x = (r - a)/w
        let a = &self.inner_radius;
        let w = &self.outer_radius - a;
        let lin = [-(a / &w), w.recip()];
        let mut out = vec![Q::zero()];
        let mut pow = vec![Q::one()];
        for (d, c) in x_coeffs.iter().enumerate() {
            if d > 0 {
                pow = poly_mul(&pow, &lin);
            }
            let scaled: Vec<Q> = pow.iter().map(|v| v * c).collect();
            out = poly_add(&out, &scaled);
        }
        // cutoff = 1 - S(x)
        let mut phi: Vec<Q> = out.iter().map(|v| -v).collect();
        phi[0] += Q::one();
        phi
    }
}

/// `S(x) = x^{q+1} sum_{j=0}^q binom(q+j, j) (1-x)^j`, ascending coefficients.
pub fn smoothstep(qo: u32) -> Vec<Q> {
    let qo = qo as usize;
    let mut out = vec![Q::zero()];
    let one_minus_x = [Q::one(), -Q::one()];
    let mut pow = vec![Q::one()];
    for j in 0..=qo {
        if j > 0 {
            pow = poly_mul(&pow, &one_minus_x);
        }
        let b = binom(qo + j, j);
        out = poly_add(&out, &pow.iter().map(|v| v * &b).collect::<Vec<_>>());
    }
    let mut shifted = vec![Q::zero(); qo + 1];
    shifted.extend(out);
    shifted
}

fn binom(n: usize, k: usize) -> Q {
    let mut b = Q::one();
    for i in 0..k {
        b = b * qi((n - i) as i64) / qi((i + 1) as i64);
    }
    b
}

/// Product of two polynomials given by ascending coefficients.
pub fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_else(Q::zero) + b.get(i).cloned().unwrap_or_else(Q::zero))
        .collect()
}

/// One closed-form piece on `t = log(R/r)` in `[t_lo, t_hi]` (`t_hi` may be infinite).
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub t_lo: f64,
    pub t_hi: f64,
    pub sum: TermSum,
}

/// Piecewise closed-form radial function on `(0, R)`, pieces ordered by
/// increasing `t` (from the boundary `r = R` toward the origin).
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub pieces: Vec<Piece>,
    /// Numeric value substituted for the symbolic exponent.
    pub alpha: f64,
    pub n: u32,
    pub radius: Q,
    /// Global smoothness class `C^q` across breakpoints.
    pub derivative_order_available: u32,
}

impl RadialProfile {
    pub fn radius_f64(&self) -> f64 {
        to_f64(&self.radius)
    }

    pub fn breakpoints_t(&self) -> Vec<f64> {
        self.pieces.iter().skip(1).map(|p| p.t_lo).collect()
    }

    pub fn evaluate(&self, r: f64) -> Result<f64> {
        let big_r = self.radius_f64();
        if !(r > 0.0 && r < big_r) {
            return Err(Error::OutOfRange(format!("r = {r} outside (0, {big_r})")));
        }
        Ok(self.evaluate_t(log_ratio(big_r, r)))
    }

    /// Value at `t = log(R/r)`. Compiles the piece on every call; use
    /// [`RadialProfile::compile`] for repeated evaluation.
    pub fn evaluate_t(&self, t: f64) -> f64 {
        for p in &self.pieces {
            if t >= p.t_lo && t <= p.t_hi {
                return CompiledSum::new(&p.sum, self.alpha).value(t);
            }
        }
        0.0
    }

    pub fn compile(&self) -> CompiledProfile {
        CompiledProfile {
            pieces: self.pieces.iter().map(|p| (p.t_lo, p.t_hi, CompiledSum::new(&p.sum, self.alpha))).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = self.clone();
        for p in &mut out.pieces {
            p.sum = p.sum.scale(c);
        }
        out
    }

    fn map(&self, f: impl Fn(&TermSum) -> TermSum) -> Self {
        let mut out = self.clone();
        for p in &mut out.pieces {
            p.sum = f(&p.sum);
        }
        out
    }
}

/// Numeric form of a [`RadialProfile`] for repeated evaluation.
#[derive(Debug, Clone)]
pub struct CompiledProfile {
    pieces: Vec<(f64, f64, CompiledSum)>,
}

impl CompiledProfile {
    pub fn evaluate_t(&self, t: f64) -> f64 {
        for (lo, hi, f) in &self.pieces {
            if t >= *lo && t <= *hi {
                return f.value(t);
            }
        }
        0.0
    }
}

fn t_of(radius: &Q, r: &Q) -> f64 {
    (to_f64(radius) / to_f64(r)).ln()
}

fn three_piece(params: &ProblemParams, alpha: f64, cutoff: &CutoffSpec, inner: TermSum, mid: TermSum, outer: TermSum) -> RadialProfile {
    let r = &params.radius;
    let t_in = t_of(r, &cutoff.inner_radius);
    let t_out = t_of(r, &cutoff.outer_radius);
    RadialProfile {
        pieces: vec![
            Piece { t_lo: 0.0, t_hi: t_out, sum: outer },
            Piece { t_lo: t_out, t_hi: t_in, sum: mid },
            Piece { t_lo: t_in, t_hi: f64::INFINITY, sum: inner },
        ],
        alpha,
        n: params.n,
        radius: r.clone(),
        derivative_order_available: cutoff.smoothness_order,
    }
}

fn check_cutoff(params: &ProblemParams, cutoff: &CutoffSpec) -> Result<()> {
    cutoff.validate(&params.radius)?;
    if cutoff.smoothness_order < params.k + 1 {
        return Err(Error::Invalid(format!(
            "cutoff smoothness {} below k + 1 = {}",
            cutoff.smoothness_order,
            params.k + 1
        )));
    }
    Ok(())
}

/// `phi_eps = (log R/r)^{(p-1)/p - eps} * cutoff`.
pub fn make_phi_eps(params: &ProblemParams, eps: f64, cutoff: &CutoffSpec) -> Result<RadialProfile> {
    let p = params.p_f64();
    let a0 = (p - 1.0) / p;
    if !(eps > 0.0 && eps < a0) {
        return Err(Error::OutOfRange(format!("need 0 < eps < (p-1)/p = {a0}, got {eps}")));
    }
    make_origin_family(params, a0 - eps, cutoff)
}

/// `(log R/r)^alpha * cutoff` for any exponent `alpha`.
pub fn make_origin_family(params: &ProblemParams, alpha: f64, cutoff: &CutoffSpec) -> Result<RadialProfile> {
    check_cutoff(params, cutoff)?;
    let (n, r) = (params.n, params.radius.clone());
    let v = TermSum::log_power(n, r.clone(), 0);
    let phi = TermSum::laurent(n, r.clone(), 0, &cutoff.polynomial());
    Ok(three_piece(params, alpha, cutoff, v.clone(), v.mul(&phi), TermSum::zero(n, r)))
}

/// `psi_eps = (log R/r)^{(N-1)/p + eps} * (1 - cutoff)`.
pub fn make_psi_eps(params: &ProblemParams, eps: f64, cutoff: &CutoffSpec) -> Result<RadialProfile> {
    if !(eps > 0.0) {
        return Err(Error::OutOfRange(format!("need eps > 0, got {eps}")));
    }
    make_boundary_family(params, (params.n as f64 - 1.0) / params.p_f64() + eps, cutoff)
}

/// `(log R/r)^alpha * (1 - cutoff)` for any exponent `alpha`.
pub fn make_boundary_family(params: &ProblemParams, alpha: f64, cutoff: &CutoffSpec) -> Result<RadialProfile> {
    check_cutoff(params, cutoff)?;
    let (n, r) = (params.n, params.radius.clone());
    let v = TermSum::log_power(n, r.clone(), 0);
    let one = TermSum::constant(n, r.clone(), qi(1));
    let phi = TermSum::laurent(n, r.clone(), 0, &cutoff.polynomial());
    Ok(three_piece(params, alpha, cutoff, TermSum::zero(n, r), v.mul(&one.sub(&phi)), v))
}

/// `1` on `(0, R/e]`, `(log R/r)^gamma` on `(R/e, R)`; only Lipschitz at `R/e`.
pub fn make_psi_gamma_hardy(params: &ProblemParams, gamma_exp: f64) -> Result<RadialProfile> {
    let p = params.p_f64();
    if !(gamma_exp > (p - 1.0) / p) {
        return Err(Error::OutOfRange(format!("need gamma > (p-1)/p = {}, got {gamma_exp}", (p - 1.0) / p)));
    }
    let (n, r) = (params.n, params.radius.clone());
    Ok(RadialProfile {
        pieces: vec![
            Piece { t_lo: 0.0, t_hi: 1.0, sum: TermSum::log_power(n, r.clone(), 0) },
            Piece { t_lo: 1.0, t_hi: f64::INFINITY, sum: TermSum::constant(n, r.clone(), qi(1)) },
        ],
        alpha: gamma_exp,
        n,
        radius: r,
        derivative_order_available: 1,
    })
}

/// Pure log power `(log R/r)^alpha` on the whole ball (the virtual minimizers
/// `V_1`, `V_2` for `alpha = (p-1)/p`, `(N-1)/p`).
pub fn make_log_power(params: &ProblemParams, alpha: f64) -> RadialProfile {
    let (n, r) = (params.n, params.radius.clone());
    RadialProfile {
        pieces: vec![Piece { t_lo: 0.0, t_hi: f64::INFINITY, sum: TermSum::log_power(n, r.clone(), 0) }],
        alpha,
        n,
        radius: r,
        derivative_order_available: u32::MAX,
    }
}

/// Piecewise `Delta^m u` (`k = 2m`) or `(Delta^m u)'` (`k = 2m + 1`).
pub fn kth_derivative_profile(u: &RadialProfile, k: u32) -> Result<RadialProfile> {
    if u.derivative_order_available < k {
        return Err(Error::Invalid(format!(
            "profile is C^{} across breakpoints, derivative order {k} requested",
            u.derivative_order_available
        )));
    }
    let mut out = u.map(|s| polyharmonic(s, k / 2, k % 2 == 1));
    out.derivative_order_available = u.derivative_order_available.saturating_sub(k);
    Ok(out)
}

/// `d/dr` of every piece (for first-order quotients).
pub fn first_derivative_profile(u: &RadialProfile) -> RadialProfile {
    let mut out = u.map(crate::logterm::radial_diff);
    out.derivative_order_available = u.derivative_order_available.saturating_sub(1);
    out
}
