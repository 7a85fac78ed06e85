//! Verification laboratory for the optimal constants of critical Rellich
//! inequalities on radial functions in a ball `B_R` of `R^N`.
//!
//! * [`exact`]: the closed-form constants as exact rational powers.
//! * [`logterm`]: symbolic algebra of `r^s (log R/r)^{alpha + t}` terms.
//! * [`quadrature`]: test-function families, singular quadrature, Rayleigh
//!   quotients and epsilon sweeps.
//! * [`harness`]: randomized margins for the supporting inequalities.
//! * [`minimizer`]: discrete minimization of the quotient.
//! * [`cli`]: report builders behind the `rellich` binary.
//!
//! The surface measure `omega_{N-1}` is omitted from all integrals; it cancels
//! in every quotient and inequality.

pub mod error;
pub mod exact;
pub mod cli;
pub mod harness;
pub mod logterm;
pub mod minimizer;
pub mod quadrature;
pub mod rational;

pub use error::{Error, Result};
