//! Symbolic algebra of radial log-power terms.
//!
//! A [`TermSum`] is a finite sum `sum c_j(alpha) r^{s_j} (log R/r)^{e_j alpha + t_j}`
//! with coefficients polynomial in the symbolic exponent `alpha`. The set is
//! closed under `d/dr`, division by `r` and products, which is all the radial
//! Laplacian needs.
//!
//! Sign convention: with `L = log(R/r)`, `dL/dr = -1/r`, so
//! `Delta^m L^alpha = r^{-2m} sum_j (-1)^j C_{m,j} (alpha)_{2m-j} L^{alpha-2m+j}`
//! where `(alpha)_n` is the falling factorial and `C_{m,j}` are given by
//! [`coeff_table`]. [`verify_table`] checks exactly this form.

mod compiled;
mod ops;
mod poly;
mod table;
mod termsum;

pub use compiled::CompiledSum;
pub use ops::{polyharmonic, radial_diff, radial_laplacian};
pub use poly::AlphaPoly;
pub use table::{closed_form_top, coeff_table, verify_table, verify_with, CoeffTable, Mismatch, VerifyReport};
pub use termsum::{eval_real, log_ratio, LogTerm, RealTerm, TermKey, TermSum};
