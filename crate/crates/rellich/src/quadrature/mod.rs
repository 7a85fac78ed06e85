//! Test-function families, singular quadrature in `t = log(R/r)`, Rayleigh
//! quotients and epsilon sweeps.
//!
//! Radial integrals `int_0^R f(r) r^{N-1} dr` become `int_0^inf f r^N dt`; the
//! boundary `r = R` sits at `t = 0` and the origin at `t = infinity`.

mod endpoints;
mod gk;
mod integrand;
mod profile;
mod rayleigh;
mod sweep;

pub use endpoints::{integrate_head, integrate_tail, Tail};
pub use gk::{integrate_finite, qk21, QuadratureResult};
pub use integrand::{integrate_half_line, integrate_piece, integrate_profile, LogWeight, PowerIntegrand};
pub use profile::{
    first_derivative_profile, kth_derivative_profile, make_boundary_family, make_log_power,
    make_origin_family, make_phi_eps, make_psi_eps, make_psi_gamma_hardy, poly_mul, smoothstep, CompiledProfile, CutoffSpec,
    Piece, RadialProfile,
};
pub use rayleigh::{energy, rayleigh_quotient, weighted_mass, Quotient};
pub use sweep::{epsilon_sweep, extrapolate, Extrapolation, Family, SweepReport, SweepRow};
