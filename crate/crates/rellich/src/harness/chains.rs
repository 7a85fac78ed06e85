//! The second-order chains at `N = 8`, `p = 2`, `R = 1`, one margin per link.

use super::checks::{Margin, Sides, Weight};
use super::testfn::TestFunction;
use crate::error::{Error, Result};
use crate::quadrature::kth_derivative_profile;
use crate::rational::{q, qi, to_f64, Q};

/// Constants of the chain links as functions of `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainConstants {
    /// `|Delta w|^2 >= N^2/4 |grad w|^2 / r^2`.
    pub two_to_one: Q,
    /// Vector Rellich step, `((N-6)(N+2)/4)^2`.
    pub rellich_vector: Q,
    /// `|grad f|^2 / r^6 >= 1/4 |f|^2 / (r^8 L^2)`.
    pub log_hardy: Q,
    /// Optimal curl-free constant at `N = 8`.
    pub curl_free: Q,
    /// `((N-4)/2)^2`: weighted Hardy step from `(Delta u)'` to `Delta u`.
    pub h1to0_step: Q,
    /// `((N+4)/2)^2`: weighted step from `Delta u` to `u'`.
    pub musina_step: Q,
    /// `(N(N-4)/4)^2`: `Delta^2 u` to `Delta u / r^2`.
    pub davies_hinz_step: Q,
}

impl ChainConstants {
    pub fn new(n: u32) -> Self {
        let nq = qi(n as i64);
        let sq = |x: Q| &x * &x;
        Self {
            two_to_one: &nq * &nq / qi(4),
            rellich_vector: sq((&nq - qi(6)) * (&nq + qi(2)) / qi(4)),
            log_hardy: q(1, 4),
            curl_free: qi(77),
            h1to0_step: sq((&nq - qi(4)) / qi(2)),
            musina_step: sq((&nq + qi(4)) / qi(2)),
            davies_hinz_step: sq(&nq * (&nq - qi(4)) / qi(4)),
        }
    }

    /// Improved radial constant of the curl-free step: `h1to0_step * musina_step`.
    pub fn curl_free_radial(&self) -> Q {
        &self.h1to0_step * &self.musina_step
    }

    /// Product along the earlier chain.
    pub fn earlier_product(&self) -> Q {
        &self.two_to_one * &self.rellich_vector * &self.log_hardy
    }

    /// Product along the present chain.
    pub fn present_product(&self) -> Q {
        &self.davies_hinz_step * &self.musina_step * &self.log_hardy
    }
}

/// Margins of every link and of both full chains on `u` (dimension 8).
pub fn gap_chain_check(u: &TestFunction, tol: f64) -> Result<Vec<Margin>> {
    let n = 8;
    if u.boundary_order < 4 {
        return Err(Error::OutOfRange(format!("boundary order {} below 4", u.boundary_order)));
    }
    let c = ChainConstants::new(n);
    let prof = u.clone().with_radius(qi(1)).profile(n);
    let d: Vec<_> = (1..=4).map(|k| kth_derivative_profile(&prof, k)).collect::<Result<_>>()?;
    let (u1, lap, lap1, lap2) = (&d[0], &d[1], &d[2], &d[3]);
    let w = Weight::new;
    let link = |name: &str, cst: &Q, small: (&_, Weight), big: (&_, Weight)| -> Result<Margin> {
        let mut s = Sides::new(name, 2.0, tol).param("N", n).param("constant", crate::rational::fmt(cst));
        s.lhs(to_f64(cst), small.0, small.1)?;
        s.rhs(1.0, big.0, big.1)?;
        Ok(s.finish())
    };
    Ok(vec![
        link("two_to_one", &c.two_to_one, (lap1, w(-2.0, 0.0)), (lap2, w(0.0, 0.0)))?,
        link("rellich_vector", &c.rellich_vector, (u1, w(-6.0, 0.0)), (lap1, w(-2.0, 0.0)))?,
        link("log_hardy", &c.log_hardy, (&prof, w(-8.0, -2.0)), (u1, w(-6.0, 0.0)))?,
        link("curl_free", &c.curl_free, (u1, w(-6.0, 0.0)), (lap1, w(-2.0, 0.0)))?,
        link("curl_free_radial", &c.curl_free_radial(), (u1, w(-6.0, 0.0)), (lap1, w(-2.0, 0.0)))?,
        link("h1to0_step", &c.h1to0_step, (lap, w(-4.0, 0.0)), (lap1, w(-2.0, 0.0)))?,
        link("musina_step", &c.musina_step, (u1, w(-6.0, 0.0)), (lap, w(-4.0, 0.0)))?,
        link("davies_hinz_step", &c.davies_hinz_step, (lap, w(-4.0, 0.0)), (lap2, w(0.0, 0.0)))?,
        link("earlier_chain", &c.earlier_product(), (&prof, w(-8.0, -2.0)), (lap2, w(0.0, 0.0)))?,
        link("present_chain", &c.present_product(), (&prof, w(-8.0, -2.0)), (lap2, w(0.0, 0.0)))?,
    ])
}
