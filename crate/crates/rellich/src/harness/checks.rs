use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::testfn::TestFunction;
use crate::error::{Error, Result};
use crate::exact::{
    chain_constant_d, chain_constant_e, critical_origin_constant, davies_hinz_constant, hardy_chain_product,
    ProblemParams,
};
use crate::quadrature::{integrate_profile, kth_derivative_profile, LogWeight, QuadratureResult, RadialProfile};
use crate::rational::{fmt, qi, to_f64, Q};

/// Outcome of one inequality `lhs <= rhs` on one test function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub inequality: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub quad_error: f64,
    pub params: BTreeMap<String, String>,
}

impl Margin {
    /// `slack >= -(quad_error + 1e-8 rhs)`.
    pub fn passes(&self) -> bool {
        self.slack >= -(self.quad_error + 1e-8 * self.rhs.abs())
    }

    /// Slack relative to the right-hand side.
    pub fn relative_slack(&self) -> f64 {
        if self.rhs == 0.0 {
            self.slack
        } else {
            self.slack / self.rhs.abs()
        }
    }
}

/// `|x|^e` for rationals, exact in the base.
pub(crate) fn pow_abs(x: &Q, e: &Q) -> f64 {
    if x.is_zero() {
        return if e.is_zero() { 1.0 } else { 0.0 };
    }
    crate::exact::ExactConstant::new(x.abs(), e.clone()).map(|c| c.value()).unwrap_or(f64::NAN)
}

/// Weighted integral `int |f|^p r^{r_pow} (log(R/r) + shift)^{log_pow} r^{N-1} dr`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Weight {
    pub r_pow: f64,
    pub log_pow: f64,
    pub shift: f64,
    /// Use `dr` instead of `r^{N-1} dr`.
    pub one_dim: bool,
}

impl Weight {
    pub fn new(r_pow: f64, log_pow: f64) -> Self {
        Self { r_pow, log_pow, shift: 0.0, one_dim: false }
    }
}

pub(crate) fn integral(f: &RadialProfile, p: f64, w: Weight, tol: f64) -> Result<QuadratureResult> {
    let sigma = if w.one_dim { w.r_pow + 1.0 } else { w.r_pow + f.n as f64 };
    integrate_profile(f, p, sigma, LogWeight { omega: w.log_pow, shift: w.shift }, tol)
}

/// Accumulates `sum c_i I_i` for both sides, skipping zero coefficients.
pub(crate) struct Sides {
    name: String,
    lhs: f64,
    rhs: f64,
    err: f64,
    params: BTreeMap<String, String>,
    p: f64,
    tol: f64,
}

impl Sides {
    pub fn new(name: &str, p: f64, tol: f64) -> Self {
        Self { name: name.into(), lhs: 0.0, rhs: 0.0, err: 0.0, params: BTreeMap::new(), p, tol }
    }

    pub fn param(mut self, key: &str, v: impl ToString) -> Self {
        self.params.insert(key.into(), v.to_string());
        self
    }

    fn term(&mut self, c: f64, f: &RadialProfile, w: Weight) -> Result<f64> {
        if c == 0.0 {
            return Ok(0.0);
        }
        let r = integral(f, self.p, w, self.tol)?;
        self.err += c.abs() * r.abs_error_estimate;
        Ok(c * r.value)
    }

    pub fn lhs(&mut self, c: f64, f: &RadialProfile, w: Weight) -> Result<()> {
        self.lhs += self.term(c, f, w)?;
        Ok(())
    }

    pub fn rhs(&mut self, c: f64, f: &RadialProfile, w: Weight) -> Result<()> {
        self.rhs += self.term(c, f, w)?;
        Ok(())
    }

    pub fn finish(self) -> Margin {
        Margin {
            inequality: self.name,
            lhs: self.lhs,
            rhs: self.rhs,
            slack: self.rhs - self.lhs,
            quad_error: self.err,
            params: self.params,
        }
    }
}

fn range(msg: String) -> Error {
    Error::OutOfRange(msg)
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(range(msg()))
    }
}

fn deriv(u: &RadialProfile, k: u32) -> Result<RadialProfile> {
    kth_derivative_profile(u, k)
}

/// Remainder `psi_{N,p,a,b}(u)` on the left: the `tilde psi` form for
/// `a < N - p`, zero at `a = N - p` where the constant is not specified.
fn psi_term(s: &mut Sides, outer: f64, u: &RadialProfile, n: u32, p: &Q, a: &Q, b: &Q) -> Result<()> {
    let nq = qi(n as i64);
    let lead = &nq - p - a;
    if lead.is_zero() {
        return Ok(());
    }
    let base = (b + p - qi(1)) / p;
    let c = to_f64(&lead) * pow_abs(&base, &(p - qi(1)));
    s.lhs(outer * c, u, Weight::new(-to_f64(&(p + a)), -to_f64(&(b + p - qi(1)))))
}

/// `((p-1)/p)^p I[|u|^p r^-p L^-p] + phi_{N,p}(u) <= I[|u'|^p]`.
pub fn check_new_hardy(u: &TestFunction, n: u32, p: &Q, tol: f64) -> Result<Margin> {
    let nq = qi(n as i64);
    require(*p > qi(1) && *p <= nq, || format!("new Hardy needs 1 < p <= N, got p = {}", fmt(p)))?;
    let m = check_gh_inner("new_hardy", u, n, p, &Q::zero(), &Q::zero(), tol)?;
    Ok(m)
}

/// Hardy inequality with two singular weights and its `tilde psi` remainder.
pub fn check_gh(u: &TestFunction, n: u32, p: &Q, alpha: &Q, beta: &Q, tol: f64) -> Result<Margin> {
    check_gh_inner("gh", u, n, p, alpha, beta, tol)
}

fn check_gh_inner(name: &str, u: &TestFunction, n: u32, p: &Q, alpha: &Q, beta: &Q, tol: f64) -> Result<Margin> {
    let nq = qi(n as i64);
    require(*p > qi(1), || format!("need p > 1, got {}", fmt(p)))?;
    require(*beta >= qi(1) - p, || format!("need beta >= 1 - p, got beta = {}", fmt(beta)))?;
    require(*alpha <= &nq - p || u.origin_cutoff.is_some(), || {
        format!("alpha = {} > N - p needs a test function vanishing near the origin", fmt(alpha))
    })?;
    let pf = to_f64(p);
    let prof = u.profile(n);
    let d1 = deriv(&prof, 1)?;
    let (af, bf) = (to_f64(alpha), to_f64(beta));
    let base = (beta + p - qi(1)) / p;
    let mut s = Sides::new(name, pf, tol)
        .param("N", n)
        .param("p", fmt(p))
        .param("alpha", fmt(alpha))
        .param("beta", fmt(beta));
    s.lhs(pow_abs(&base, p), &prof, Weight::new(-af - pf, -bf - pf))?;
    psi_term(&mut s, 1.0, &prof, n, p, alpha, beta)?;
    s.rhs(1.0, &d1, Weight::new(-af, -bf))?;
    Ok(s.finish())
}

/// Weighted Hardy inequality for `grad u` against `Delta u`, with its
/// `(N - alpha - Np)` remainder.
pub fn check_lap_hardy(u: &TestFunction, n: u32, p: &Q, alpha: &Q, beta: &Q, tol: f64) -> Result<Margin> {
    let nq = qi(n as i64);
    require(*p > qi(1), || format!("need p > 1, got {}", fmt(p)))?;
    require(*beta >= qi(1) - p, || format!("need beta >= 1 - p, got beta = {}", fmt(beta)))?;
    require(*alpha < nq || u.origin_cutoff.is_some(), || {
        format!("alpha = {} >= N needs a test function vanishing near the origin", fmt(alpha))
    })?;
    let pf = to_f64(p);
    let prof = u.profile(n);
    let (d1, d2) = (deriv(&prof, 1)?, deriv(&prof, 2)?);
    let (af, bf) = (to_f64(alpha), to_f64(beta));
    let base = (beta + p - qi(1)) / p;
    let rem = to_f64(&(&nq - alpha - &nq * p)) * pow_abs(&base, &(p - qi(1)));
    let mut s = Sides::new("lap_hardy", pf, tol)
        .param("N", n)
        .param("p", fmt(p))
        .param("alpha", fmt(alpha))
        .param("beta", fmt(beta));
    s.lhs(pow_abs(&base, p), &d1, Weight::new(-af - pf, -bf - pf))?;
    if !base.is_zero() {
        s.lhs(rem, &d1, Weight::new(-pf - af, -bf - pf + 1.0))?;
    }
    s.rhs(1.0, &d2, Weight::new(-af, -bf))?;
    Ok(s.finish())
}

/// `1/4 I[|u'|^2 r^-2 L^-2] + (N-2)/2 I[|u'|^2 r^-2 L^-1] <= I[|Delta u|^2]`.
pub fn check_lap_hardy2(u: &TestFunction, n: u32, tol: f64) -> Result<Margin> {
    let prof = u.profile(n);
    let (d1, d2) = (deriv(&prof, 1)?, deriv(&prof, 2)?);
    let mut s = Sides::new("lap_hardy2", 2.0, tol).param("N", n);
    s.lhs(0.25, &d1, Weight::new(-2.0, -2.0))?;
    s.lhs((n as f64 - 2.0) / 2.0, &d1, Weight::new(-2.0, -1.0))?;
    s.rhs(1.0, &d2, Weight::new(0.0, 0.0))?;
    Ok(s.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneVariant {
    I,
    II,
    III,
    IV,
}

impl GeneVariant {
    pub fn order(self, m: u32) -> u32 {
        match self {
            GeneVariant::I | GeneVariant::II => 2 * m,
            GeneVariant::III | GeneVariant::IV => 2 * m + 1,
        }
    }

    /// Admissible `alpha` window `(lo, hi]`; `lo = None` means unbounded below.
    pub fn window(self, n: u32, m: u32, p: &Q) -> (Option<Q>, Q) {
        let hi = qi(n as i64) - qi(self.order(m) as i64) * p;
        let lo = match self {
            GeneVariant::I | GeneVariant::III => None,
            GeneVariant::II => Some(qi(2) * (qi(1) - p)),
            GeneVariant::IV => Some(qi(2) - qi(3) * p),
        };
        (lo, hi)
    }
}

/// Higher-order inequalities with log weights, variants I to IV.
pub fn check_gene_main(u: &TestFunction, n: u32, p: &Q, variant: GeneVariant, m: u32, alpha: &Q, tol: f64) -> Result<Margin> {
    require(m >= 1, || "need m >= 1".into())?;
    require(*p > qi(1), || format!("need p > 1, got {}", fmt(p)))?;
    let (lo, hi) = variant.window(n, m, p);
    require(*alpha <= hi && lo.as_ref().is_none_or(|l| alpha > l), || {
        format!("alpha = {} outside the window of variant {variant:?}", fmt(alpha))
    })?;
    let k = variant.order(m);
    require(u.boundary_order >= k, || format!("boundary order {} below k = {k}", u.boundary_order))?;
    let nq = qi(n as i64);
    let (mi, pf, af) = (m as i64, to_f64(p), to_f64(alpha));
    let prof = u.profile(n);
    let dk = deriv(&prof, k)?;
    let one = qi(1);
    let kq = qi(k as i64);
    let mut s = Sides::new(&format!("gene_main_{variant:?}"), pf, tol)
        .param("N", n)
        .param("p", fmt(p))
        .param("m", m)
        .param("alpha", fmt(alpha));
    let main_w = |log_pow: f64| Weight::new(-af - k as f64 * pf, log_pow);
    match variant {
        GeneVariant::I | GeneVariant::III => {
            let top = hardy_chain_product(p, 1, k as i64);
            let sub = hardy_chain_product(p, 1, k as i64 - 1);
            s.lhs(pow_abs(&top, p), &prof, main_w(-(k as f64) * pf))?;
            let a2 = alpha + (&kq - &one) * p;
            let b2 = (&kq - &one) * p;
            psi_term(&mut s, pow_abs(&sub, p), &prof, n, p, &a2, &b2)?;
        }
        GeneVariant::II => {
            let d = chain_constant_d(n, m, p, alpha)?;
            let dh = davies_hinz_constant(n, m - 1, p, &(qi(2 * (mi - 1)) * p + alpha))?;
            let c = (&nq * p - &nq + alpha + qi(2 * (mi - 1)) * p) / (p * dh.base());
            s.lhs(pow_abs(d.base(), p), &prof, main_w(-pf))?;
            psi_term(&mut s, pow_abs(&c, p), &prof, n, p, &(alpha + qi(2 * mi - 1) * p), &Q::zero())?;
        }
        GeneVariant::IV => {
            let e = chain_constant_e(n, m, p, alpha)?;
            let dh = davies_hinz_constant(n, m - 1, p, &(qi(2 * mi - 1) * p + alpha))?;
            let c = (&nq * p - &nq + alpha + qi(2 * mi) * p - p) * (&nq - alpha - p) / (p * p * dh.base());
            s.lhs(pow_abs(e.base(), p), &prof, main_w(-pf))?;
            psi_term(&mut s, pow_abs(&c, p), &prof, n, p, &(alpha + qi(2 * mi) * p), &Q::zero())?;
        }
    }
    s.rhs(1.0, &dk, Weight::new(-af, 0.0))?;
    Ok(s.finish())
}

/// `I[|u|^p r^-beta] <= C^p I[|Delta^m u|^p r^{2mp - beta}]`.
pub fn check_davies_hinz(u: &TestFunction, n: u32, m: u32, p: &Q, beta: &Q, tol: f64) -> Result<Margin> {
    let c = davies_hinz_constant(n, m, p, beta)?;
    require(u.boundary_order >= 2 * m, || format!("boundary order {} below 2m = {}", u.boundary_order, 2 * m))?;
    let (pf, bf) = (to_f64(p), to_f64(beta));
    let prof = u.profile(n);
    let dk = deriv(&prof, 2 * m)?;
    let mut s = Sides::new("davies_hinz", pf, tol)
        .param("N", n)
        .param("m", m)
        .param("p", fmt(p))
        .param("beta", fmt(beta));
    s.lhs(1.0, &prof, Weight::new(-bf, 0.0))?;
    s.rhs(pow_abs(c.base(), p), &dk, Weight::new(2.0 * m as f64 * pf - bf, 0.0))?;
    Ok(s.finish())
}

/// `I[r^delta |Delta u|^p] >= |N - (N + delta)/p|^p I[r^{delta - p} |u'|^p]`.
pub fn check_musina(u: &TestFunction, n: u32, p: &Q, delta: &Q, tol: f64) -> Result<Margin> {
    let nq = qi(n as i64);
    require(*p > qi(1), || format!("need p > 1, got {}", fmt(p)))?;
    require(delta > &-&nq || u.origin_cutoff.is_some(), || {
        format!("delta = {} <= -N needs a test function vanishing near the origin", fmt(delta))
    })?;
    let (pf, df) = (to_f64(p), to_f64(delta));
    let prof = u.profile(n);
    let (d1, d2) = (deriv(&prof, 1)?, deriv(&prof, 2)?);
    let c = &nq - (&nq + delta) / p;
    let mut s = Sides::new("musina", pf, tol).param("N", n).param("p", fmt(p)).param("delta", fmt(delta));
    s.lhs(pow_abs(&c, p), &d1, Weight::new(df - pf, 0.0))?;
    s.rhs(1.0, &d2, Weight::new(df, 0.0))?;
    Ok(s.finish())
}

/// `I[r^delta |u'|^p] >= ((N + delta)/p - 1)^p I[r^{delta - p} |u|^p]` for `p < N + delta`.
pub fn check_h1to0(u: &TestFunction, n: u32, p: &Q, delta: &Q, tol: f64) -> Result<Margin> {
    let nq = qi(n as i64);
    require(*p > qi(1) && *p < &nq + delta, || format!("need 1 < p < N + delta, got p = {}", fmt(p)))?;
    let (pf, df) = (to_f64(p), to_f64(delta));
    let prof = u.profile(n);
    let d1 = deriv(&prof, 1)?;
    let c = (&nq + delta) / p - qi(1);
    let mut s = Sides::new("h1to0", pf, tol).param("N", n).param("p", fmt(p)).param("delta", fmt(delta));
    s.lhs(pow_abs(&c, p), &prof, Weight::new(df - pf, 0.0))?;
    s.rhs(1.0, &d1, Weight::new(df, 0.0))?;
    Ok(s.finish())
}

/// `int_0^R r^a |w'|^p dr >= |(a + 1 - p)/p|^p int_0^R r^{a-p} |w|^p dr`.
pub fn check_1dim_hardy(w: &TestFunction, p: &Q, a_exp: &Q, tol: f64) -> Result<Margin> {
    require(*p > qi(1), || format!("need p > 1, got {}", fmt(p)))?;
    require(w.origin_cutoff.is_some(), || "one-dimensional Hardy needs w(0) = 0 (origin cutoff)".into())?;
    let (pf, af) = (to_f64(p), to_f64(a_exp));
    // the dimension only labels the profile; all integrals use dr
    let prof = w.profile(1);
    let d1 = deriv(&prof, 1)?;
    let c = (a_exp + qi(1) - p) / p;
    let dr = |r_pow: f64| Weight { r_pow, log_pow: 0.0, shift: 0.0, one_dim: true };
    let mut s = Sides::new("1dim_hardy", pf, tol).param("p", fmt(p)).param("a", fmt(a_exp));
    s.lhs(pow_abs(&c, p), &prof, dr(af - pf))?;
    s.rhs(1.0, &d1, dr(af))?;
    Ok(s.finish())
}

/// Critical inequality with the dilated weight `log(aR/r)`, `a >= 1`, `gamma = p`.
pub fn check_nonsharp_critical(u: &TestFunction, params: &ProblemParams, tol: f64) -> Result<Margin> {
    require(params.a >= 1.0, || format!("need a >= 1, got {}", params.a))?;
    require(params.gamma == params.p(), || "need gamma = p".into())?;
    require(u.boundary_order >= params.k, || format!("boundary order {} below k", u.boundary_order))?;
    let c = critical_origin_constant(params)?;
    let pf = params.p_f64();
    let prof = u.clone().with_radius(params.radius.clone()).profile(params.n);
    let dk = deriv(&prof, params.k)?;
    let mut s = Sides::new("nscr", pf, tol)
        .param("N", params.n)
        .param("k", params.k)
        .param("a", params.a);
    let w = Weight { r_pow: -(params.n as f64), log_pow: -pf, shift: params.a.ln(), one_dim: false };
    s.lhs(c.value(), &prof, w)?;
    s.rhs(1.0, &dk, Weight::new(0.0, 0.0))?;
    Ok(s.finish())
}

/// `(2A/N)^{N/2} I[|u|^{N/2} r^-N L^{-1-A}] <= I[|u'|^{N/2} r^{-N/2} L^{N/2-A-1}]`.
pub fn check_lim_ineq(u: &TestFunction, n: u32, a_exp: &Q, tol: f64) -> Result<Margin> {
    require(n >= 3 && a_exp.is_positive(), || format!("need N >= 3 and A > 0, got A = {}", fmt(a_exp)))?;
    let nq = qi(n as i64);
    let p = &nq / qi(2);
    let (pf, af, nf) = (to_f64(&p), to_f64(a_exp), n as f64);
    let prof = u.profile(n);
    let d1 = deriv(&prof, 1)?;
    let c = qi(2) * a_exp / &nq;
    let mut s = Sides::new("lim_ineq", pf, tol).param("N", n).param("A", fmt(a_exp));
    s.lhs(pow_abs(&c, &p), &prof, Weight::new(-nf, -1.0 - af))?;
    s.rhs(1.0, &d1, Weight::new(-nf / 2.0, nf / 2.0 - af - 1.0))?;
    Ok(s.finish())
}
