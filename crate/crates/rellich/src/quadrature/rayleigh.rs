use serde::{Deserialize, Serialize};

use super::gk::QuadratureResult;
use super::integrand::{integrate_profile, LogWeight};
use super::profile::{kth_derivative_profile, RadialProfile};
use crate::error::Result;
use crate::exact::ProblemParams;

/// Ratio of the two integrals with their quadrature results.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quotient {
    pub value: f64,
    pub numerator: QuadratureResult,
    pub denominator: QuadratureResult,
}

impl Quotient {
    pub fn from_parts(numerator: QuadratureResult, denominator: QuadratureResult) -> Self {
        Self { value: numerator.value / denominator.value, numerator, denominator }
    }

    /// First-order propagation of both quadrature errors.
    pub fn abs_error(&self) -> f64 {
        self.value.abs()
            * (self.numerator.abs_error_estimate / self.numerator.value.abs()
                + self.denominator.abs_error_estimate / self.denominator.value.abs())
    }
}

/// `int |grad^k u|^p r^{N-1} dr`.
pub fn energy(u: &RadialProfile, params: &ProblemParams, rel_tol: f64) -> Result<QuadratureResult> {
    let dk = kth_derivative_profile(u, params.k)?;
    integrate_profile(&dk, params.p_f64(), params.n as f64, LogWeight::none(), rel_tol)
}

/// `int |u|^p r^{-1} (log(aR/r))^{-gamma} dr`.
pub fn weighted_mass(u: &RadialProfile, params: &ProblemParams, rel_tol: f64) -> Result<QuadratureResult> {
    let weight = LogWeight { omega: -params.gamma_f64(), shift: params.a.ln() };
    integrate_profile(u, params.p_f64(), 0.0, weight, rel_tol)
}

/// Rayleigh quotient `int |grad^k u|^p dx / int |u|^p |x|^{-N} (log aR/|x|)^{-gamma} dx`.
pub fn rayleigh_quotient(u: &RadialProfile, params: &ProblemParams, rel_tol: f64) -> Result<Quotient> {
    let num = energy(u, params, rel_tol)?;
    let den = weighted_mass(u, params, rel_tol)?;
    Ok(Quotient::from_parts(num, den))
}
