//! Randomized margins for the supporting inequalities, the change of
//! variables between `R^N` and the ball, and the dilation laws.
//!
//! Test functions are `q(r^2) (R^2 - r^2)^b`, optionally cut off near the
//! origin, so every derivative is closed form and quadrature is the only
//! numerical error.

mod checks;
mod scaling;
mod chains;
mod suite;
mod testfn;
mod transform;

pub use checks::{
    check_1dim_hardy, check_davies_hinz, check_gene_main, check_gh, check_h1to0, check_lap_hardy,
    check_lap_hardy2, check_lim_ineq, check_musina, check_new_hardy, check_nonsharp_critical, GeneVariant,
    Margin,
};
pub use scaling::{first_order_invariance, log_term_exponent, scaling_identity_check, IdentityCheck, ScalingReport};
pub use chains::{gap_chain_check, ChainConstants};
pub use suite::{run_case, run_harness, HarnessConfig, HarnessReport, InequalityId, InequalitySummary};
pub use testfn::{random_test_function, TestFunction, ORIGIN_CUTOFF_ORDER};
pub use transform::{
    alpha_extremal, alpha_unweighted, sample_transform_cases, subcritical_constant, transform_beta,
    transform_equivalence, TransformCase, TransformReport, WSpec,
};
