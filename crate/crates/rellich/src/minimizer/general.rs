//! Quasi-Newton minimization of the `p`-quotient for any `p > 1`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::banded::SymBand;
use super::eigen::{finish, Concentration, MinimizationResult};
use super::problem::DiscreteProblem;
use crate::error::{Error, Result};

/// Options for [`minimize_quotient_general_p`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LbfgsOptions {
    pub max_iterations: usize,
    /// Stop when `||grad Q|| ||c|| <= gtol * Q` in the preconditioned variables.
    pub gtol: f64,
    /// Relative decrease of `Q` over `memory` steps below which iteration stops.
    pub ftol: f64,
    pub memory: usize,
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        Self { max_iterations: 5000, gtol: 1e-8, ftol: 1e-13, memory: 12 }
    }
}

/// Profile `g(t)` used to seed the descent.
pub type ProfileFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Starting point for the descent.
#[derive(Clone)]
pub enum InitGuess {
    /// Weighted `L^2` projection of a profile onto the spline space (a coarser
    /// discrete minimizer is prolonged exactly).
    Profile(ProfileFn),
    /// Coefficients in this problem's basis.
    Coefficients(Vec<f64>),
}

impl InitGuess {
    pub fn profile(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Profile(Arc::new(f))
    }
}

impl std::fmt::Debug for InitGuess {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Profile(_) => f.write_str("Profile(..)"),
            Self::Coefficients(c) => f.debug_tuple("Coefficients").field(&c.len()).finish(),
        }
    }
}

/// Weight `(1 + t)^-2` of the projection.
fn projection_weight(t: f64) -> f64 {
    (1.0 + t).powi(-2)
}

/// Coefficients of the weighted `L^2` projection of `f` (exact for members of
/// the space, so projection also prolongs between nested levels).
pub fn project_profile(problem: &DiscreteProblem, f: &dyn Fn(f64) -> f64) -> Result<Vec<f64>> {
    let n = problem.n_dof();
    let mut gram = SymBand::zeros(n, problem.space.degree());
    let mut rhs = vec![0.0; n];
    for q in &problem.points {
        let w = q.w * projection_weight(q.t);
        let fv = f(q.t);
        for (a, (i, fi, _)) in q.basis.iter().enumerate() {
            rhs[*i] += w * fi * fv;
            for (j, fj, _) in &q.basis[..=a] {
                gram.add(*i, *j, w * fi * fj);
            }
        }
    }
    // beyond t_max the tail is constant; match f there at t_max
    let t_max = problem.space.t_max();
    let tail = problem.space.tail_dof();
    let wt = 1.0 / (1.0 + t_max);
    gram.add(tail, tail, wt);
    rhs[tail] += wt * f(t_max);
    let fact = gram.ldlt();
    if !fact.is_positive_definite() {
        return Err(Error::Invalid("projection Gram matrix is singular".into()));
    }
    fact.solve(&rhs)
}

/// Diagonal of the energy Gram matrix, used as a preconditioner.
fn energy_diagonal(problem: &DiscreteProblem) -> Vec<f64> {
    let mut h = vec![0.0; problem.n_dof()];
    for q in &problem.points {
        let w = problem.weight(q.t);
        for (i, f, pf) in &q.basis {
            h[*i] += q.w * (pf * pf + w * f * f);
        }
    }
    h[problem.space.tail_dof()] += problem.tail_weight();
    h
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes the discrete quotient by L-BFGS with an Armijo backtracking
/// line search in Jacobi-preconditioned variables. The returned value is the
/// quotient of an admissible function, so it bounds the infimum from above.
pub fn minimize_quotient_general_p(problem: &DiscreteProblem, init: &InitGuess, opts: &LbfgsOptions) -> Result<MinimizationResult> {
    minimize_quotient_general_p_with(problem, init, opts, Concentration::decades(problem))
}

/// [`minimize_quotient_general_p`] with explicit concentration thresholds.
pub fn minimize_quotient_general_p_with(
    problem: &DiscreteProblem,
    init: &InitGuess,
    opts: &LbfgsOptions,
    conc: Concentration,
) -> Result<MinimizationResult> {
    let n = problem.n_dof();
    let c0 = match init {
        InitGuess::Profile(f) => project_profile(problem, f.as_ref())?,
        InitGuess::Coefficients(c) => {
            if c.len() != n {
                return Err(Error::Invalid(format!("{} initial coefficients for {n} degrees of freedom", c.len())));
            }
            c.clone()
        }
    };
    if c0.iter().all(|&x| x == 0.0) || c0.iter().any(|x| !x.is_finite()) {
        return Err(Error::Invalid("initial guess is zero or non-finite".into()));
    }
    let s: Vec<f64> = energy_diagonal(problem).iter().map(|h| 1.0 / h.sqrt()).collect();
    let to_c = |y: &[f64]| -> Vec<f64> { y.iter().zip(&s).map(|(a, b)| a * b).collect() };
    let eval = |y: &[f64]| -> (f64, Vec<f64>) {
        let (q, g) = problem.quotient_and_gradient(&to_c(y));
        (q, g.iter().zip(&s).map(|(a, b)| a * b).collect())
    };
    // unit mass keeps near-null directions (negligible weight) from
    // swamping the iterate
    let p = problem.p();
    let mass_scale = |y: &[f64]| problem.energy_and_mass(&to_c(y)).1.powf(1.0 / p);
    let normalize = |y: &mut Vec<f64>| {
        let nn = mass_scale(y);
        y.iter_mut().for_each(|v| *v /= nn);
    };

    let mut y: Vec<f64> = c0.iter().zip(&s).map(|(c, sc)| c / sc).collect();
    normalize(&mut y);
    let (mut f, mut g) = eval(&y);
    let mut hist_s: Vec<Vec<f64>> = Vec::new();
    let mut hist_y: Vec<Vec<f64>> = Vec::new();
    let mut history_f = vec![f];
    let mut iterations = 0;
    let rel_grad = |g: &[f64], f: f64| dot(g, g).sqrt() / f;
    while iterations < opts.max_iterations && rel_grad(&g, f) > opts.gtol {
        iterations += 1;
        // two-loop recursion
        let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut alphas = Vec::with_capacity(hist_s.len());
        for (sv, yv) in hist_s.iter().zip(&hist_y).rev() {
            let rho = 1.0 / dot(yv, sv);
            let a = rho * dot(sv, &d);
            d.iter_mut().zip(yv).for_each(|(di, yi)| *di -= a * yi);
            alphas.push((a, rho));
        }
        let gamma = match (hist_s.last(), hist_y.last()) {
            (Some(sv), Some(yv)) => dot(sv, yv) / dot(yv, yv),
            _ => 1.0 / dot(&g, &g).sqrt().max(f64::MIN_POSITIVE),
        };
        d.iter_mut().for_each(|v| *v *= gamma);
        for ((sv, yv), (a, rho)) in hist_s.iter().zip(&hist_y).zip(alphas.into_iter().rev()) {
            let b = rho * dot(yv, &d);
            d.iter_mut().zip(sv).for_each(|(di, si)| *di += (a - b) * si);
        }
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            hist_s.clear();
            hist_y.clear();
            d = g.iter().map(|v| -v / dot(&g, &g).sqrt()).collect();
            slope = dot(&g, &d);
        }
        // Armijo backtracking
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let mut trial: Vec<f64> = y.iter().zip(&d).map(|(a, b)| a + step * b).collect();
            let scale = mass_scale(&trial);
            if scale > 0.0 && scale.is_finite() {
                trial.iter_mut().for_each(|v| *v /= scale);
                let (ft, gt) = eval(&trial);
                if ft.is_finite() && ft <= f + 1e-4 * step * slope {
                    accepted = Some((trial, ft, gt));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((trial, ft, gt)) = accepted else {
            break;
        };
        let sv: Vec<f64> = trial.iter().zip(&y).map(|(a, b)| a - b).collect();
        let yv: Vec<f64> = gt.iter().zip(&g).map(|(a, b)| a - b).collect();
        if dot(&sv, &yv) > 1e-300 {
            hist_s.push(sv);
            hist_y.push(yv);
            if hist_s.len() > opts.memory {
                hist_s.remove(0);
                hist_y.remove(0);
            }
        }
        y = trial;
        f = ft;
        g = gt;
        history_f.push(f);
        let m = opts.memory.max(1);
        if history_f.len() > m {
            let old = history_f[history_f.len() - 1 - m];
            if (old - f).abs() <= opts.ftol * f.abs() {
                break;
            }
        }
    }
    if !f.is_finite() || f <= 0.0 {
        return Err(Error::NotConverged(format!("descent ended at a non-positive or non-finite quotient {f}")));
    }
    let mut c = to_c(&y);
    let (_, mass) = problem.energy_and_mass(&c);
    let norm = mass.powf(1.0 / problem.p());
    c.iter_mut().for_each(|v| *v /= norm);
    let residual = rel_grad(&g, f);
    Ok(finish(problem, f, None, c, iterations, residual, conc))
}
