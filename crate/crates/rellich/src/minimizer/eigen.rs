//! Smallest generalized eigenvalue of `(K, M)` for the `p = 2` quotient.
//!
//! Sturm counts (negative pivots of `K - sigma M`) bracket the eigenvalue by
//! bisection; inverse iteration at the lower bracket, where `K - sigma M` is
//! positive definite, recovers the eigenvector.

use serde::{Deserialize, Serialize};

use super::banded::SymBand;
use super::problem::{DiscreteProblem, GridSummary};
use crate::error::{Error, Result};

/// Outcome of a discrete minimization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizationResult {
    /// Discrete minimum of the quotient (an upper bound for the infimum).
    pub value: f64,
    /// Second eigenvalue on the eigen path.
    pub second_value: Option<f64>,
    pub grid: GridSummary,
    /// Spline coefficients, normalized to unit weighted mass.
    pub coefficients: Vec<f64>,
    pub iterations: usize,
    /// `||K v - lambda M v|| / ||K v||` (eigen path) or the relative gradient norm.
    pub residual: f64,
    /// Weighted mass fraction below the outer threshold (toward the boundary).
    pub outer_fraction: f64,
    /// Weighted mass fraction above the inner threshold (toward the origin).
    pub inner_fraction: f64,
    /// `max(outer_fraction, inner_fraction)`.
    pub concentration_indicator: f64,
}

/// Thresholds for the concentration fractions, in `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Concentration {
    pub tau_out: f64,
    pub tau_in: f64,
}

impl Concentration {
    /// Outermost and innermost decade of the window.
    pub fn decades(problem: &DiscreteProblem) -> Self {
        Self { tau_out: 10.0 * problem.space.t_min(), tau_in: 0.1 * problem.space.t_max() }
    }
}

const RESIDUAL_TOL: f64 = 1e-10;
const MAX_INVERSE_ITERATIONS: usize = 200;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Number of eigenvalues of `(K, M)` below `sigma`.
fn count_below(k: &SymBand, m: &SymBand, sigma: f64) -> usize {
    k.shifted(sigma, m).ldlt().negative_count()
}

/// Bisection for the `index`-th eigenvalue (1-based) to relative accuracy `rel`.
fn bisect(k: &SymBand, m: &SymBand, index: usize, hi_hint: f64, rel: f64) -> Result<(f64, f64)> {
    let mut hi = hi_hint;
    let mut guard = 0;
    while count_below(k, m, hi) < index {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::NotConverged("no upper bracket for the eigenvalue".into()));
        }
    }
    let mut lo = hi;
    guard = 0;
    while count_below(k, m, lo) >= index {
        lo *= 0.5;
        guard += 1;
        if guard > 2000 {
            return Err(Error::NotConverged("no lower bracket for the eigenvalue".into()));
        }
    }
    while hi - lo > rel * hi {
        let mid = 0.5 * (lo + hi);
        if count_below(k, m, mid) >= index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// Smallest eigenpair of the assembled `p = 2` problem.
pub fn min_eigen(problem: &DiscreteProblem) -> Result<MinimizationResult> {
    min_eigen_with(problem, Concentration::decades(problem))
}

/// [`min_eigen`] with explicit concentration thresholds.
pub fn min_eigen_with(problem: &DiscreteProblem, conc: Concentration) -> Result<MinimizationResult> {
    let (Some(k0), Some(m0)) = (&problem.stiffness, &problem.mass) else {
        return Err(Error::OutOfRange("eigen path needs p = 2 (N = 2k)".into()));
    };
    let n = k0.n();
    let mut d = vec![0.0; n];
    for (i, di) in d.iter_mut().enumerate() {
        let kii = k0.get(i, i);
        if !(kii > 0.0 && m0.get(i, i) > 0.0) {
            return Err(Error::Invalid(format!("non-positive diagonal at {i}")));
        }
        // Jacobi scaling of K keeps the rounding floor of the residual near 1e-14
        *di = 1.0 / kii.sqrt();
    }
    let k = k0.scaled(&d);
    let m = m0.scaled(&d);
    let hi_hint = (0..n).map(|i| k.get(i, i) / m.get(i, i)).fold(f64::INFINITY, f64::min);
    let (lo, hi) = bisect(&k, &m, 1, hi_hint, 1e-14)?;
    let second = bisect(&k, &m, 2, hi, 1e-12).ok().map(|(_, h)| h);

    let shifted = k.shifted(lo, &m).ldlt();
    if !shifted.is_positive_definite() {
        return Err(Error::NotConverged("shifted matrix not positive definite below the eigenvalue".into()));
    }
    let mut v = vec![1.0; n];
    let mut lambda = hi;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < MAX_INVERSE_ITERATIONS {
        iterations += 1;
        let mv = m.mul_vec(&v);
        let mut w = shifted.solve(&mv)?;
        let scale = dot(&w, &m.mul_vec(&w)).sqrt();
        w.iter_mut().for_each(|x| *x /= scale);
        v = w;
        let kv = k.mul_vec(&v);
        let mv = m.mul_vec(&v);
        lambda = dot(&v, &kv) / dot(&v, &mv);
        let r: Vec<f64> = kv.iter().zip(&mv).map(|(a, b)| a - lambda * b).collect();
        residual = norm(&r) / norm(&kv);
        if residual <= RESIDUAL_TOL {
            break;
        }
    }
    if residual > RESIDUAL_TOL {
        return Err(Error::NotConverged(format!("inverse iteration residual {residual:.3e} after {iterations} steps")));
    }
    let mut coefficients: Vec<f64> = v.iter().zip(&d).map(|(x, s)| x * s).collect();
    let mass = dot(&coefficients, &m0.mul_vec(&coefficients)).sqrt();
    coefficients.iter_mut().for_each(|c| *c /= mass);
    Ok(finish(problem, lambda, second, coefficients, iterations, residual, conc))
}

pub(crate) fn finish(
    problem: &DiscreteProblem,
    value: f64,
    second_value: Option<f64>,
    coefficients: Vec<f64>,
    iterations: usize,
    residual: f64,
    conc: Concentration,
) -> MinimizationResult {
    let mut coefficients = coefficients;
    if problem.signed_mass(&coefficients) < 0.0 {
        coefficients.iter_mut().for_each(|c| *c = -*c);
    }
    let (outer_fraction, inner_fraction) = problem.mass_fractions(&coefficients, conc.tau_out, conc.tau_in);
    MinimizationResult {
        value,
        second_value,
        grid: GridSummary::from(problem),
        coefficients,
        iterations,
        residual,
        outer_fraction,
        inner_fraction,
        concentration_indicator: outer_fraction.max(inner_fraction),
    }
}
