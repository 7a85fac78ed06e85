//! Seeded campaign over every supporting inequality.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::*;
use super::testfn::{random_test_function, TestFunction};
use crate::error::{Error, Result};
use crate::exact::ProblemParams;
use crate::rational::{q, qi, to_f64, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityId {
    NewHardy,
    Gh,
    LapHardy,
    LapHardy2,
    GeneMainI,
    GeneMainII,
    GeneMainIII,
    GeneMainIV,
    DaviesHinz,
    Musina,
    H1to0,
    OneDimHardy,
    /// Dilated weight with `a = 1`.
    NscrA1,
    /// Dilated weight with `a = e^{gamma/N}`.
    NscrAExp,
    /// Dilated weight with `a = 10`.
    NscrA10,
    /// `A = N/2 - 1`.
    LimIneqHalf,
    /// `A = N - 1`.
    LimIneqFull,
}

impl InequalityId {
    pub const ALL: [InequalityId; 17] = [
        Self::NewHardy,
        Self::Gh,
        Self::LapHardy,
        Self::LapHardy2,
        Self::GeneMainI,
        Self::GeneMainII,
        Self::GeneMainIII,
        Self::GeneMainIV,
        Self::DaviesHinz,
        Self::Musina,
        Self::H1to0,
        Self::OneDimHardy,
        Self::NscrA1,
        Self::NscrAExp,
        Self::NscrA10,
        Self::LimIneqHalf,
        Self::LimIneqFull,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::NewHardy => "new_hardy",
            Self::Gh => "gh",
            Self::LapHardy => "lap_hardy",
            Self::LapHardy2 => "lap_hardy2",
            Self::GeneMainI => "gene_main_i",
            Self::GeneMainII => "gene_main_ii",
            Self::GeneMainIII => "gene_main_iii",
            Self::GeneMainIV => "gene_main_iv",
            Self::DaviesHinz => "davies_hinz",
            Self::Musina => "musina",
            Self::H1to0 => "h1to0",
            Self::OneDimHardy => "one_dim_hardy",
            Self::NscrA1 => "nscr_a1",
            Self::NscrAExp => "nscr_a_exp",
            Self::NscrA10 => "nscr_a10",
            Self::LimIneqHalf => "lim_ineq_half",
            Self::LimIneqFull => "lim_ineq_full",
        }
    }

    fn index(self) -> u64 {
        Self::ALL.iter().position(|&x| x == self).unwrap() as u64
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InequalityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown inequality {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessConfig {
    pub seed: u64,
    pub cases: usize,
    pub tol: f64,
    pub inequalities: Vec<InequalityId>,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self { seed: 42, cases: 100, tol: 1e-10, inequalities: InequalityId::ALL.to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalitySummary {
    pub inequality: InequalityId,
    pub cases: usize,
    pub passed: usize,
    pub worst_relative_slack: f64,
    /// Margin attaining the smallest relative slack.
    pub worst: Margin,
    /// Test function of the worst case.
    pub worst_function: TestFunction,
    /// Indices of failing cases.
    pub failures: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub seed: u64,
    pub cases: usize,
    pub tol: f64,
    pub all_passed: bool,
    pub summaries: Vec<InequalitySummary>,
}

impl HarnessReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("inequality,cases,passed,worst_relative_slack,worst_lhs,worst_rhs,worst_quad_error\n");
        for s in &self.summaries {
            out += &format!(
                "{},{},{},{:e},{:e},{:e},{:e}\n",
                s.inequality, s.cases, s.passed, s.worst_relative_slack, s.worst.lhs, s.worst.rhs, s.worst.quad_error
            );
        }
        out
    }
}

/// Uniform rational on the lattice `{lo, lo + 1/den, ..., hi}` (numerators given).
fn lattice(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Q {
    q(rng.gen_range(lo..=hi), den)
}

/// Smallest integer strictly above `x`.
fn above(x: &Q) -> u32 {
    (x.floor().to_integer().try_into().unwrap_or(0i64) + 1).max(1) as u32
}

fn test_fn(rng: &mut ChaCha8Rng, min_order: u32, cutoff: bool) -> Result<TestFunction> {
    let degree = rng.gen_range(0..=3);
    let order = min_order.max(1) + rng.gen_range(0..=1);
    random_test_function(rng.gen(), degree, order, cutoff)
}

/// `p` on the quarter lattice in `(1, max]`.
fn sample_p(rng: &mut ChaCha8Rng, max: &Q) -> Q {
    let hi = (max * qi(4)).floor().to_integer().try_into().unwrap_or(8i64);
    lattice(rng, 5, hi.max(5), 4)
}

/// Draws parameters and a test function, then evaluates one margin.
pub fn run_case(id: InequalityId, seed: u64, case: usize, tol: f64) -> Result<(Margin, TestFunction)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id.index() * 1_000_003 + case as u64);
    let rng = &mut rng;
    let one = qi(1);
    match id {
        InequalityId::NewHardy => {
            let n = rng.gen_range(2..=8u32);
            let p = sample_p(rng, &qi(n as i64));
            let u = test_fn(rng, 1, false)?;
            Ok((check_new_hardy(&u, n, &p, tol)?, u))
        }
        InequalityId::Gh => {
            let n = rng.gen_range(2..=8u32);
            let p = sample_p(rng, &qi(4));
            let beta = &one - &p + lattice(rng, 0, 16, 4);
            let crit = qi(n as i64) - &p;
            let alpha = &crit + lattice(rng, -16, 8, 4);
            let cutoff = alpha > crit;
            let u = test_fn(rng, above(&((&beta + &p - &one) / &p)), cutoff)?;
            Ok((check_gh(&u, n, &p, &alpha, &beta, tol)?, u))
        }
        InequalityId::LapHardy => {
            let n = rng.gen_range(2..=8u32);
            let p = sample_p(rng, &qi(4));
            let beta = &one - &p + lattice(rng, 0, 16, 4);
            let alpha = qi(n as i64) + lattice(rng, -24, 8, 4);
            let cutoff = alpha >= qi(n as i64);
            let min_b = above(&((&beta + qi(2) * &p - &one) / &p)).max(2);
            let u = test_fn(rng, min_b, cutoff)?;
            Ok((check_lap_hardy(&u, n, &p, &alpha, &beta, tol)?, u))
        }
        InequalityId::LapHardy2 => {
            let n = rng.gen_range(3..=8u32);
            let u = test_fn(rng, 2, false)?;
            Ok((check_lap_hardy2(&u, n, tol)?, u))
        }
        InequalityId::GeneMainI | InequalityId::GeneMainII | InequalityId::GeneMainIII | InequalityId::GeneMainIV => {
            let variant = match id {
                InequalityId::GeneMainI => GeneVariant::I,
                InequalityId::GeneMainII => GeneVariant::II,
                InequalityId::GeneMainIII => GeneVariant::III,
                _ => GeneVariant::IV,
            };
            loop {
                let m = rng.gen_range(1..=2u32);
                let p = sample_p(rng, &qi(3));
                let n = rng.gen_range(2..=14u32);
                let (lo, hi) = variant.window(n, m, &p);
                // quarter-lattice alpha in (lo, hi], at most 4 below hi
                let steps: i64 = match &lo {
                    Some(l) => ((&hi - l) * qi(4)).ceil().to_integer().try_into().unwrap_or(0i64) - 1,
                    None => 16,
                }
                .min(16);
                if steps < 0 {
                    continue;
                }
                let alpha = &hi - q(rng.gen_range(0..=steps), 4);
                let u = test_fn(rng, variant.order(m), false)?;
                return Ok((check_gene_main(&u, n, &p, variant, m, &alpha, tol)?, u));
            }
        }
        InequalityId::DaviesHinz => loop {
            let m = rng.gen_range(1..=2u32);
            let p = sample_p(rng, &qi(3));
            let n = rng.gen_range(3..=14u32);
            let lo = qi(2) * (&one + qi(m as i64 - 1) * &p);
            let room: i64 = ((qi(n as i64) - &lo) * qi(4)).ceil().to_integer().try_into().unwrap_or(0i64) - 1;
            if room < 1 {
                continue;
            }
            let beta = &lo + q(rng.gen_range(1..=room), 4);
            let u = test_fn(rng, 2 * m, false)?;
            return Ok((check_davies_hinz(&u, n, m, &p, &beta, tol)?, u));
        },
        InequalityId::Musina => {
            let n = rng.gen_range(2..=8u32);
            let p = sample_p(rng, &qi(4));
            let delta = -qi(n as i64) + lattice(rng, 1, 48, 4);
            let u = test_fn(rng, 2, false)?;
            Ok((check_musina(&u, n, &p, &delta, tol)?, u))
        }
        InequalityId::H1to0 => loop {
            let n = rng.gen_range(2..=8u32);
            let p = sample_p(rng, &qi(4));
            let delta = -qi(n as i64) + lattice(rng, 1, 48, 4);
            if p >= qi(n as i64) + &delta {
                continue;
            }
            let u = test_fn(rng, 1, false)?;
            return Ok((check_h1to0(&u, n, &p, &delta, tol)?, u));
        },
        InequalityId::OneDimHardy => {
            let p = sample_p(rng, &qi(4));
            let a = lattice(rng, -8, 16, 4);
            let w = test_fn(rng, 1, true)?;
            Ok((check_1dim_hardy(&w, &p, &a, tol)?, w))
        }
        InequalityId::NscrA1 | InequalityId::NscrAExp | InequalityId::NscrA10 => {
            let k = rng.gen_range(2..=4u32);
            let n = rng.gen_range(k + 1..=4 * k + 2);
            let base = ProblemParams::critical(n, k)?;
            let a = match id {
                InequalityId::NscrA1 => 1.0,
                InequalityId::NscrAExp => (to_f64(&base.gamma) / n as f64).exp(),
                _ => 10.0,
            };
            let u = test_fn(rng, k, false)?;
            Ok((check_nonsharp_critical(&u, &base.with_a(a), tol)?, u))
        }
        InequalityId::LimIneqHalf | InequalityId::LimIneqFull => {
            let n = rng.gen_range(3..=10u32);
            let nq = qi(n as i64);
            let a = if id == InequalityId::LimIneqHalf { &nq / qi(2) - &one } else { &nq - &one };
            let u = test_fn(rng, above(&(qi(2) * &a / &nq)), false)?;
            Ok((check_lim_ineq(&u, n, &a, tol)?, u))
        }
    }
}

/// Runs `config.cases` seeded cases for every selected inequality.
pub fn run_harness(config: &HarnessConfig) -> Result<HarnessReport> {
    let summaries = config
        .inequalities
        .par_iter()
        .map(|&id| {
            let results: Vec<(Margin, TestFunction)> = (0..config.cases)
                .into_par_iter()
                .map(|i| {
                    run_case(id, config.seed, i, config.tol)
                        .map_err(|e| Error::Invalid(format!("{id} case {i}: {e}")))
                })
                .collect::<Result<_>>()?;
            let failures: Vec<usize> = results.iter().enumerate().filter(|(_, r)| !r.0.passes()).map(|(i, _)| i).collect();
            let (worst_m, worst_u) = results
                .iter()
                .min_by(|a, b| a.0.relative_slack().total_cmp(&b.0.relative_slack()))
                .cloned()
                .ok_or_else(|| Error::Invalid("no cases requested".into()))?;
            Ok(InequalitySummary {
                inequality: id,
                cases: results.len(),
                passed: results.len() - failures.len(),
                worst_relative_slack: worst_m.relative_slack(),
                worst: worst_m,
                worst_function: worst_u,
                failures,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HarnessReport {
        seed: config.seed,
        cases: config.cases,
        tol: config.tol,
        all_passed: summaries.iter().all(|s| s.failures.is_empty()),
        summaries,
    })
}
