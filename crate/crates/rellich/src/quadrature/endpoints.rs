//! Semi-infinite and endpoint-singular integrals in the log coordinate.
//!
//! Both endpoint treatments use a logarithmic change of variables
//! (`t = t0 e^{v}` toward infinity, `t = tau e^{-v}` toward zero), integrate
//! adaptively up to an extreme point `t_V`, and add the power-law remainder
//! `f(t_V) t_V / delta` analytically. This stays accurate when the integral
//! barely converges (`delta` close to 0), where direct truncation fails.

use super::gk::{integrate_finite, QuadratureResult};
use crate::error::{Error, Result};

/// Behaviour of an integrand as `t -> infinity`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// Integrand is `O(t^c e^{-rate t})` with `rate > 0`.
    Exponential { rate: f64 },
    /// Integrand is asymptotic to `C t^exponent`.
    Power { exponent: f64 },
    /// Integrand vanishes beyond the start point.
    Zero,
}

const FAR: f64 = 1e18;
const NEAR: f64 = 1e-18;

/// `int_{t0}^infinity f(t) dt`.
pub fn integrate_tail<F: Fn(f64) -> f64>(f: &F, t0: f64, tail: Tail, rel_tol: f64) -> Result<QuadratureResult> {
    match tail {
        Tail::Zero => Ok(QuadratureResult::zero()),
        Tail::Power { exponent } => {
            let delta = -1.0 - exponent;
            if delta <= 0.0 {
                return Err(Error::Divergent(format!("tail ~ t^{exponent} is not integrable at infinity")));
            }
            let t0 = t0.max(f64::MIN_POSITIVE);
            let t_v = FAR * t0.max(1.0);
            let v_max = (t_v / t0).ln();
            let rem = f(t_v) * t_v / delta;
            let g = |v: f64| {
                let t = t0 * v.exp();
                f(t) * t
            };
            let body = integrate_finite(&g, 0.0, v_max, rel_tol, 0.25 * rel_tol * rem.abs());
            Ok(QuadratureResult {
                value: body.value + rem,
                abs_error_estimate: body.abs_error_estimate + (rem * t_v.recip()).abs(),
                ..body
            })
        }
        Tail::Exponential { rate } => {
            if !(rate > 0.0) {
                return Err(Error::Invalid(format!("exponential tail needs rate > 0, got {rate}")));
            }
            let mut width = 40.0 / rate;
            loop {
                let res = integrate_finite(f, t0, t0 + width, rel_tol, 0.0);
                let end = f(t0 + width).abs() / rate;
                if end <= 1e-3 * rel_tol * res.value.abs() || end == 0.0 || width > 1e6 {
                    return Ok(QuadratureResult { abs_error_estimate: res.abs_error_estimate + end, ..res });
                }
                width *= 2.0;
            }
        }
    }
}

/// `int_0^tau f(t) dt` for `f ~ C t^exponent` as `t -> 0`.
pub fn integrate_head<F: Fn(f64) -> f64>(f: &F, tau: f64, exponent: f64, rel_tol: f64) -> Result<QuadratureResult> {
    let nu = exponent + 1.0;
    if nu <= 0.0 {
        return Err(Error::Divergent(format!("head ~ t^{exponent} is not integrable at 0")));
    }
    let t_v = NEAR * tau.min(1.0);
    let v_max = (tau / t_v).ln();
    let rem = f(t_v) * t_v / nu;
    let g = |v: f64| {
        let t = tau * (-v).exp();
        f(t) * t
    };
    let body = integrate_finite(&g, 0.0, v_max, rel_tol, 0.25 * rel_tol * rem.abs());
    Ok(QuadratureResult {
        value: body.value + rem,
        abs_error_estimate: body.abs_error_estimate + (rem * t_v).abs(),
        ..body
    })
}
