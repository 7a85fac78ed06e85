//! Refinement studies over nested spline spaces with growing windows.

use serde::{Deserialize, Serialize};

use super::eigen::{min_eigen_with, Concentration, MinimizationResult};
use super::general::{minimize_quotient_general_p_with, InitGuess, LbfgsOptions};
use super::problem::{default_degree, DiscreteProblem};
use super::spline::DiscreteGrid;
use crate::error::{Error, Result};
use crate::exact::{constant_for_gamma, ProblemParams};

/// Level `l` uses the window `[t_min / g^l, t_max g^l]` and
/// `min(knots_per_octave * 2^l, max_knots_per_octave)` knots per octave, so
/// levels are nested.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementSchedule {
    pub levels: usize,
    pub base_t_min: f64,
    pub base_t_max: f64,
    pub window_growth: f64,
    pub base_knots_per_octave: u32,
    /// Finer lattices push the eigen residual toward its rounding floor.
    pub max_knots_per_octave: u32,
}

impl Default for RefinementSchedule {
    fn default() -> Self {
        Self { levels: 8, base_t_min: 2f64.powi(-10), base_t_max: 32.0, window_growth: 16.0, base_knots_per_octave: 2, max_knots_per_octave: 8 }
    }
}

impl RefinementSchedule {
    pub fn validate(&self) -> Result<()> {
        if self.levels < 3 {
            return Err(Error::OutOfRange(format!("a refinement study needs at least 3 levels, got {}", self.levels)));
        }
        if !(self.window_growth >= 1.0) {
            return Err(Error::OutOfRange("window growth must be >= 1".into()));
        }
        DiscreteGrid::new(self.base_t_min, self.base_t_max, self.base_knots_per_octave, 1).map(|_| ())
    }

    pub fn grid(&self, level: usize, degree: usize) -> Result<DiscreteGrid> {
        let g = self.window_growth.powi(level as i32);
        let kpo = self
            .base_knots_per_octave
            .checked_mul(1 << level.min(20))
            .ok_or_else(|| Error::OutOfRange("knot density overflow".into()))?
            .min(self.max_knots_per_octave.max(self.base_knots_per_octave));
        DiscreteGrid::new(self.base_t_min / g, self.base_t_max * g, kpo, degree)
    }

    /// Mass escaping the base window: below `base_t_min` (toward the boundary)
    /// and above `base_t_max` (toward the origin).
    pub fn concentration(&self) -> Concentration {
        Concentration { tau_out: self.base_t_min, tau_in: self.base_t_max }
    }
}

/// One row of a refinement table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementLevel {
    pub level: usize,
    pub n_dof: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub knots_per_octave: u32,
    pub value: f64,
    pub second_value: Option<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub outer_fraction: f64,
    pub inner_fraction: f64,
    pub indicator: f64,
}

/// Virtual minimizer `t^exponent` compared with the finest discrete minimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VirtualSimilarity {
    /// `"V1"` (origin, `gamma = p`) or `"V2"` (boundary, `gamma = N`).
    pub name: String,
    pub exponent: f64,
    pub window: (f64, f64),
    pub samples: usize,
    pub cosine: f64,
}

/// Sample `(t, g(t))` of the finest discrete minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub t: f64,
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementStudy {
    pub params: ProblemParams,
    pub schedule: RefinementSchedule,
    /// Exact constant for `gamma` in `{p, N}`.
    pub exact: Option<f64>,
    pub levels: Vec<RefinementLevel>,
    pub virtual_similarity: Option<VirtualSimilarity>,
    pub profile: Vec<ProfileSample>,
}

const PROFILE_SAMPLES: usize = 129;
const COSINE_SAMPLES: usize = 257;

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Cosine similarity of `g` and `t^exponent` on log-spaced samples of `[lo, hi]`.
pub fn cosine_similarity(problem: &DiscreteProblem, coefficients: &[f64], exponent: f64, lo: f64, hi: f64, samples: usize) -> f64 {
    let (mut gv, mut vv, mut gg) = (0.0, 0.0, 0.0);
    for t in log_space(lo, hi, samples.max(2)) {
        let g = problem.profile_value(coefficients, t);
        let v = t.powf(exponent);
        gv += g * v;
        vv += v * v;
        gg += g * g;
    }
    gv / (gg * vv).sqrt()
}

/// Exponents of the virtual minimizers: `V1 = t^{(p-1)/p}`, `V2 = t^{(N-1)/p}`.
pub fn virtual_exponents(params: &ProblemParams) -> (f64, f64) {
    let p = params.p_f64();
    ((p - 1.0) / p, (params.n as f64 - 1.0) / p)
}

/// Default seed for the descent path, vanishing to order `k` at `t = 0`.
fn default_init(k: u32) -> InitGuess {
    InitGuess::profile(move |t: f64| (t / (1.0 + t)).powi(k as i32))
}

/// Minimizes on every level of `schedule`. The `p = 2` path solves the
/// eigenproblem; otherwise each level starts from the previous minimizer.
pub fn refinement_study(params: &ProblemParams, schedule: &RefinementSchedule) -> Result<RefinementStudy> {
    refinement_study_with(params, schedule, None, &LbfgsOptions::default())
}

/// [`refinement_study`] with an explicit seed for the first descent level.
pub fn refinement_study_with(
    params: &ProblemParams,
    schedule: &RefinementSchedule,
    init: Option<InitGuess>,
    opts: &LbfgsOptions,
) -> Result<RefinementStudy> {
    schedule.validate()?;
    let degree = default_degree(params);
    let conc = schedule.concentration();
    let eigen_path = params.n == 2 * params.k;
    let mut levels = Vec::with_capacity(schedule.levels);
    let mut last: Option<(DiscreteProblem, MinimizationResult)> = None;
    for level in 0..schedule.levels {
        let problem = DiscreteProblem::new(params, &schedule.grid(level, degree)?)?;
        let result = if eigen_path {
            min_eigen_with(&problem, conc)?
        } else {
            let seed = match &last {
                Some((prev, res)) => {
                    let space = prev.space.clone();
                    let c = res.coefficients.clone();
                    InitGuess::profile(move |t| space.eval(&c, t, 0)[0])
                }
                None => init.clone().unwrap_or_else(|| default_init(params.k)),
            };
            minimize_quotient_general_p_with(&problem, &seed, opts, conc)?
        };
        levels.push(RefinementLevel {
            level,
            n_dof: result.grid.n_dof,
            t_min: result.grid.t_min,
            t_max: result.grid.t_max,
            knots_per_octave: result.grid.knots_per_octave,
            value: result.value,
            second_value: result.second_value,
            residual: result.residual,
            iterations: result.iterations,
            outer_fraction: result.outer_fraction,
            inner_fraction: result.inner_fraction,
            indicator: result.concentration_indicator,
        });
        last = Some((problem, result));
    }
    let (problem, result) = last.expect("at least three levels");
    // closed forms exist for k >= 2 only
    let exact = constant_for_gamma(params).ok().flatten().map(|c| c.value());
    let virtual_similarity = virtual_similarity(params, schedule, &problem, &result.coefficients);
    let profile = log_space(problem.space.t_min(), 2.0 * problem.space.t_max(), PROFILE_SAMPLES)
        .into_iter()
        .map(|t| ProfileSample { t, g: problem.profile_value(&result.coefficients, t) })
        .collect();
    Ok(RefinementStudy { params: params.clone(), schedule: *schedule, exact, levels, virtual_similarity, profile })
}

/// Cosine similarity with `V1` (for `gamma = p`) on the lower half, in `log t`,
/// of `[base_t_max, t_max]`, or with `V2` (for `gamma = N`) on the upper half of
/// `[t_min, base_t_min]`.
fn virtual_similarity(
    params: &ProblemParams,
    schedule: &RefinementSchedule,
    problem: &DiscreteProblem,
    coefficients: &[f64],
) -> Option<VirtualSimilarity> {
    let gamma = params.gamma_f64();
    let (e1, e2) = virtual_exponents(params);
    let (name, exponent, window) = if gamma == params.p_f64() {
        ("V1", e1, (schedule.base_t_max, (schedule.base_t_max * problem.space.t_max()).sqrt()))
    } else if gamma == params.n as f64 {
        ("V2", e2, ((schedule.base_t_min * problem.space.t_min()).sqrt(), schedule.base_t_min))
    } else {
        return None;
    };
    let cosine = cosine_similarity(problem, coefficients, exponent, window.0, window.1, COSINE_SAMPLES);
    Some(VirtualSimilarity { name: name.into(), exponent, window, samples: COSINE_SAMPLES, cosine })
}

impl RefinementStudy {
    pub fn values(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.value).collect()
    }

    pub fn indicators(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.indicator).collect()
    }

    /// Values never increase from one level to the next (up to `rel_tol`).
    pub fn values_nonincreasing(&self, rel_tol: f64) -> bool {
        self.levels.windows(2).all(|w| w[1].value <= w[0].value * (1.0 + rel_tol))
    }

    /// Strictly increasing concentration indicator.
    pub fn indicator_increasing(&self) -> bool {
        self.levels.windows(2).all(|w| w[1].indicator > w[0].indicator)
    }

    /// `|v_L - v_{L-1}| / v_L` for the last two levels.
    pub fn last_cauchy_gap(&self) -> f64 {
        let n = self.levels.len();
        (self.levels[n - 1].value - self.levels[n - 2].value).abs() / self.levels[n - 1].value
    }

    /// Relative change of the indicator between the last two levels.
    pub fn last_indicator_change(&self) -> f64 {
        let n = self.levels.len();
        let (a, b) = (self.levels[n - 2].indicator, self.levels[n - 1].indicator);
        (b - a).abs() / a.abs().max(f64::MIN_POSITIVE)
    }

    /// `(v_L - exact) / exact` at the finest level.
    pub fn final_gap(&self) -> Option<f64> {
        self.exact.map(|e| (self.levels.last().expect("levels").value - e) / e)
    }

    /// Every level stays above `exact (1 - 5 tol)`.
    pub fn never_below_exact(&self, tol: f64) -> Option<bool> {
        self.exact.map(|e| self.levels.iter().all(|l| l.value >= e * (1.0 - 5.0 * tol)))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "level,n_dof,t_min,t_max,knots_per_octave,value,second_value,residual,iterations,outer_fraction,inner_fraction,indicator\n",
        );
        for l in &self.levels {
            let second = l.second_value.map(|v| format!("{v:e}")).unwrap_or_default();
            s.push_str(&format!(
                "{},{},{:e},{:e},{},{:e},{},{:e},{},{:e},{:e},{:e}\n",
                l.level,
                l.n_dof,
                l.t_min,
                l.t_max,
                l.knots_per_octave,
                l.value,
                second,
                l.residual,
                l.iterations,
                l.outer_fraction,
                l.inner_fraction,
                l.indicator
            ));
        }
        s
    }
}
