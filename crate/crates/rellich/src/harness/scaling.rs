//! Dilations `u_lambda(r) = lambda^a u(s)`, `s = r^lambda R^{1-lambda}`,
//! which act as `t -> lambda t` in `t = log(R/r)`.

use serde::{Deserialize, Serialize};

use super::checks::Margin;
use super::testfn::TestFunction;
use crate::error::{Error, Result};
use crate::exact::ProblemParams;
use crate::quadrature::{
    first_derivative_profile, integrate_half_line, integrate_profile, kth_derivative_profile, LogWeight, Tail,
};

/// Directly computed value against the value predicted by a scaling law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub computed: f64,
    pub predicted: f64,
    pub rel_error: f64,
}

impl IdentityCheck {
    fn new(computed: f64, predicted: f64) -> Self {
        let s = computed.abs().max(predicted.abs());
        let rel_error = if s == 0.0 { 0.0 } else { (computed - predicted).abs() / s };
        Self { computed, predicted, rel_error }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub lambda: f64,
    pub a_exp: f64,
    /// `int |u_lambda|^p r^-N L^-gamma dx = lambda^{ap + gamma - 1} int |u|^p r^-N L^-gamma dx`.
    pub log_term: IdentityCheck,
    /// `int |Delta u_lambda|^p` against its expression through `u(s)`; only for `N = 2p`.
    pub lap_identity: Option<IdentityCheck>,
    /// `int |Delta u_lambda|^p <= C max(lambda^{ap+N-1}, lambda^{ap+p-1})`; only for `N = 2p`.
    pub lap_bound: Option<Margin>,
    /// First-order quotient of `u` against that of `lambda^{-(p-1)/p} u(s)`.
    pub first_order: IdentityCheck,
}

/// `lambda^{ap + gamma - 1}`.
pub fn log_term_exponent(p: f64, gamma: f64, a_exp: f64) -> f64 {
    a_exp * p + gamma - 1.0
}

/// Checks the dilation laws for `u` (no origin cutoff) at one `lambda`.
pub fn scaling_identity_check(
    u: &TestFunction,
    params: &ProblemParams,
    lambda: f64,
    a_exp: f64,
    tol: f64,
) -> Result<ScalingReport> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::OutOfRange(format!("lambda = {lambda} must be positive")));
    }
    if u.origin_cutoff.is_some() {
        return Err(Error::Invalid("dilation checks need a test function without origin cutoff".into()));
    }
    let (n, p, gamma) = (params.n, params.p_f64(), params.gamma_f64());
    if gamma <= 1.0 {
        return Err(Error::OutOfRange(format!("gamma = {gamma} must exceed 1 for a finite log-weighted mass")));
    }
    let b = u.boundary_order as f64;
    let prof = u.clone().with_radius(params.radius.clone()).profile(n);
    let cu = prof.compile();

    // log term: both sides in t, the left one through the dilated closure
    let scaled = |t: f64| (lambda.powf(a_exp) * cu.evaluate_t(lambda * t)).abs().powf(p) * t.powf(-gamma);
    let lhs = integrate_half_line(&scaled, &[1.0 / lambda], b * p - gamma, Tail::Power { exponent: -gamma }, tol)?;
    let base = integrate_profile(&prof, p, 0.0, LogWeight::power(-gamma), tol)?;
    let log_term = IdentityCheck::new(lhs.value, lambda.powf(log_term_exponent(p, gamma, a_exp)) * base.value);

    let first_order = first_order_invariance(u, params, lambda, tol)?;

    let (lap_identity, lap_bound) = if params.k == 2 {
        let (i, m) = lap_term(&prof, p, lambda, a_exp, b, tol)?;
        (Some(i), Some(m))
    } else {
        (None, None)
    };
    Ok(ScalingReport { lambda, a_exp, log_term, lap_identity, lap_bound, first_order })
}

/// `int |Delta u_lambda|^p r^{N-1} dr` by the chain rule in `r`, compared with
/// `lambda^{ap+N-1} int |u''(s) + ((N-2)/lambda + 1) u'(s)/s|^p s^{N-1} ds`.
fn lap_term(
    prof: &crate::quadrature::RadialProfile,
    p: f64,
    lambda: f64,
    a_exp: f64,
    b: f64,
    tol: f64,
) -> Result<(IdentityCheck, Margin)> {
    let n = prof.n;
    let nf = n as f64;
    let big_r = prof.radius_f64();
    let d1 = first_derivative_profile(prof);
    let d2 = first_derivative_profile(&d1);
    let (c1, c2) = (d1.compile(), d2.compile());
    let la = lambda.powf(a_exp);
    let direct = |t: f64| {
        let r = big_r * (-t).exp();
        let ts = lambda * t;
        let s = big_r * (-ts).exp();
        let s1 = lambda * s / r;
        let s2 = lambda * (lambda - 1.0) * s / (r * r);
        let (u1, u2) = (c1.evaluate_t(ts), c2.evaluate_t(ts));
        let lap = la * (u2 * s1 * s1 + u1 * s2 + (nf - 1.0) / r * u1 * s1);
        lap.abs().powf(p) * r.powf(nf)
    };
    let rate = nf + (2.0 * lambda - 2.0) * p;
    let head = (b - 2.0).max(0.0) * p;
    let lhs = integrate_half_line(&direct, &[1.0 / lambda], head, Tail::Exponential { rate }, tol)?;
    let coef = (nf - 2.0) / lambda + 1.0;
    let via_s = |ts: f64| {
        let s = big_r * (-ts).exp();
        (c2.evaluate_t(ts) + coef * c1.evaluate_t(ts) / s).abs().powf(p) * s.powf(nf)
    };
    let rhs = integrate_half_line(&via_s, &[1.0], head, Tail::Exponential { rate: nf }, tol)?;
    let identity = IdentityCheck::new(lhs.value, lambda.powf(a_exp * p + nf - 1.0) * rhs.value);

    // C = (||Delta u||_p + (N-2) ||u'/s||_p)^p
    let lap = kth_derivative_profile(prof, 2)?;
    let lap_norm = integrate_profile(&lap, p, nf, LogWeight::none(), tol)?;
    let grad_norm = integrate_profile(&d1, p, nf - p, LogWeight::none(), tol)?;
    let c = (lap_norm.value.powf(1.0 / p) + (nf - 2.0) * grad_norm.value.powf(1.0 / p)).powf(p);
    let bound = c * lambda.powf(a_exp * p + nf - 1.0).max(lambda.powf(a_exp * p + p - 1.0));
    let margin = Margin {
        inequality: "lap_term_bound".into(),
        lhs: lhs.value,
        rhs: bound,
        slack: bound - lhs.value,
        quad_error: lhs.abs_error_estimate,
        params: [("N", n.to_string()), ("p", p.to_string()), ("lambda", lambda.to_string()), ("a", a_exp.to_string())]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
    };
    Ok((identity, margin))
}

/// `int |u'|^p dx / int |u|^p r^-p L^-p dx` for `u` and for
/// `lambda^{-(p-1)/p} u(s)`; equal when `p = N`.
pub fn first_order_invariance(u: &TestFunction, params: &ProblemParams, lambda: f64, tol: f64) -> Result<IdentityCheck> {
    let (n, p) = (params.n, params.p_f64());
    let nf = n as f64;
    let b = u.boundary_order as f64;
    let prof = u.clone().with_radius(params.radius.clone()).profile(n);
    let big_r = prof.radius_f64();
    let d1 = first_derivative_profile(&prof);
    let (cu, c1) = (prof.compile(), d1.compile());
    let a = -(p - 1.0) / p;
    let la = lambda.powf(a);

    let num0 = integrate_profile(&d1, p, nf, LogWeight::none(), tol)?;
    let den0 = integrate_profile(&prof, p, nf - p, LogWeight::power(-p), tol)?;

    let num = |t: f64| {
        let r = big_r * (-t).exp();
        let s = big_r * (-lambda * t).exp();
        (la * c1.evaluate_t(lambda * t) * lambda * s / r).abs().powf(p) * r.powf(nf)
    };
    let den = |t: f64| {
        let r = big_r * (-t).exp();
        (la * cu.evaluate_t(lambda * t)).abs().powf(p) * r.powf(nf - p) * t.powf(-p)
    };
    // u' is odd in r, so |u'(s) s / r|^p r^N decays like s^{2p} r^{N-p}
    let tail_num = Tail::Exponential { rate: 2.0 * p * lambda + nf - p };
    let tail_den = if nf - p == 0.0 { Tail::Power { exponent: -p } } else { Tail::Exponential { rate: nf - p } };
    let bp = [1.0 / lambda];
    let num1 = integrate_half_line(&num, &bp, (b - 1.0) * p, tail_num, tol)?;
    let den1 = integrate_half_line(&den, &bp, b * p - p, tail_den, tol)?;
    Ok(IdentityCheck::new(num1.value / den1.value, num0.value / den0.value))
}
