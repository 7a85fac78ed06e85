use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::profile::{make_phi_eps, make_psi_eps, CutoffSpec, RadialProfile};
use super::rayleigh::{energy, weighted_mass};
use crate::error::{Error, Result};
use crate::exact::{constant_for_gamma, ProblemParams};

/// Test-function family of an epsilon sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `(log R/r)^{(p-1)/p - eps}` cut off near the boundary (origin concentration).
    Phi,
    /// `(log R/r)^{(N-1)/p + eps}` cut off near the origin (boundary concentration).
    Psi,
}

impl Family {
    pub fn profile(self, params: &ProblemParams, eps: f64, cutoff: &CutoffSpec) -> Result<RadialProfile> {
        match self {
            Family::Phi => make_phi_eps(params, eps, cutoff),
            Family::Psi => make_psi_eps(params, eps, cutoff),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phi" => Ok(Family::Phi),
            "psi" => Ok(Family::Psi),
            _ => Err(Error::Invalid(format!("unknown family {s:?} (phi|psi)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    /// Zero when the weighted mass diverges (the test function has infinite
    /// weighted mass and finite energy).
    pub quotient: f64,
    pub quad_error: f64,
    pub mass_divergent: bool,
}

/// Fit `q(eps) = limit + c eps^order` through three rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub limit: f64,
    pub order: f64,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: Family,
    pub params: ProblemParams,
    pub rows: Vec<SweepRow>,
    pub extrapolation: Option<Extrapolation>,
    /// Constant predicted at this `gamma`, when known in closed form.
    pub exact: Option<f64>,
}

/// Quotients along `eps_list` (strictly decreasing, positive) and a
/// three-point extrapolation to `eps = 0`.
pub fn epsilon_sweep(
    family: Family,
    params: &ProblemParams,
    eps_list: &[f64],
    cutoff: &CutoffSpec,
    rel_tol: f64,
) -> Result<SweepReport> {
    if eps_list.is_empty() || eps_list.iter().any(|&e| !(e > 0.0)) || eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Invalid("eps list must be positive and strictly decreasing".into()));
    }
    let rows: Vec<Result<SweepRow>> = eps_list
        .par_iter()
        .map(|&eps| {
            let u = family.profile(params, eps, cutoff)?;
            let num = energy(&u, params, rel_tol)?;
            match weighted_mass(&u, params, rel_tol) {
                Ok(den) => {
                    let q = num.value / den.value;
                    let err = q * (num.abs_error_estimate / num.value + den.abs_error_estimate / den.value);
                    Ok(SweepRow { epsilon: eps, quotient: q, quad_error: err, mass_divergent: false })
                }
                Err(Error::Divergent(_)) => {
                    Ok(SweepRow { epsilon: eps, quotient: 0.0, quad_error: 0.0, mass_divergent: true })
                }
                Err(e) => Err(e),
            }
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let extrapolation = if rows.len() >= 3 && rows.iter().all(|r| !r.mass_divergent) {
        let l = rows.len();
        extrapolate(
            [rows[l - 3].epsilon, rows[l - 2].epsilon, rows[l - 1].epsilon],
            [rows[l - 3].quotient, rows[l - 2].quotient, rows[l - 1].quotient],
        )
    } else {
        None
    };
    let exact = constant_for_gamma(params)?.map(|c| c.value());
    Ok(SweepReport { family, params: params.clone(), rows, extrapolation, exact })
}

/// Solve `(e1^r - e2^r)/(e2^r - e3^r) = (q1 - q2)/(q2 - q3)` for the order `r`.
pub fn extrapolate(eps: [f64; 3], q: [f64; 3]) -> Option<Extrapolation> {
    let (d1, d2) = (q[0] - q[1], q[1] - q[2]);
    if d2 == 0.0 || d1 / d2 <= 0.0 {
        return None;
    }
    let target = d1 / d2;
    let ratio = |r: f64| (eps[0].powf(r) - eps[1].powf(r)) / (eps[1].powf(r) - eps[2].powf(r));
    let (mut lo, mut hi) = (1e-3, 12.0);
    let (flo, fhi) = (ratio(lo) - target, ratio(hi) - target);
    if flo * fhi > 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (ratio(mid) - target) * flo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let order = 0.5 * (lo + hi);
    let c = d2 / (eps[1].powf(order) - eps[2].powf(order));
    Some(Extrapolation { limit: q[2] - c * eps[2].powf(order), order, coefficient: c })
}

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("epsilon,quotient,quad_error,extrapolated\n");
        let lim = self.extrapolation.as_ref().map(|e| e.limit);
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{}\n",
                r.epsilon,
                r.quotient,
                r.quad_error,
                lim.map(|v| v.to_string()).unwrap_or_default()
            ));
        }
        s
    }
}
