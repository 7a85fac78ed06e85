//! Discrete minimization of the radial quotient over B-spline spaces in
//! `t = log(R/r)`, with refinement studies that separate attained from
//! non-attained exponents.

mod banded;
mod eigen;
mod general;
mod problem;
mod spline;
mod study;

pub use banded::{Ldlt, SymBand};
pub use eigen::{min_eigen, min_eigen_with, Concentration, MinimizationResult};
pub use general::{minimize_quotient_general_p, minimize_quotient_general_p_with, project_profile, InitGuess, LbfgsOptions, ProfileFn};
pub use problem::{default_degree, operator_coeffs, DiscreteProblem, GridSummary};
pub use spline::{gauss_legendre, DiscreteGrid, SplineSpace};
pub use study::{
    cosine_similarity, refinement_study, refinement_study_with, virtual_exponents, ProfileSample, RefinementLevel,
    RefinementSchedule, RefinementStudy, VirtualSimilarity,
};
