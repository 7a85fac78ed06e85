//! Exact rational computation of the constant families.
//!
//! Every constant is an [`ExactConstant`] `base^exponent` with rational base and
//! exponent; identities between families are checked without rounding.

mod constant;
mod families;
mod gap;
mod params;

pub use constant::{ConstantRecord, ExactConstant};
pub use families::{
    adimurthi_santra_constant, chain_constant_d, chain_constant_e, constant_for_gamma,
    critical_boundary_constant, critical_origin_constant, davies_hinz_constant,
    hardy_chain_product, hardy_weight_constant, subcritical_rellich_constant,
};
pub use gap::{gap_analysis, ChainStep, Chains, GapReport};
pub use params::ProblemParams;
