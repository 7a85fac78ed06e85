//! Closed-form constant families.

use num_traits::{One, Zero};

use super::{ExactConstant, ProblemParams};
use crate::error::{Error, Result};
use crate::rational::{fmt, qi, Q};

fn out_of_range(msg: String) -> Error {
    Error::OutOfRange(msg)
}

/// Subcritical Rellich constant `A_{k,p}` (returned with exponent `p`),
/// valid for `1 < p < N/k`.
pub fn subcritical_rellich_constant(n: u32, k: u32, p: &Q) -> Result<ExactConstant> {
    if k < 1 {
        return Err(out_of_range("k must be >= 1".into()));
    }
    let nq = qi(n as i64);
    let upper = Q::new(n.into(), k.into());
    if *p <= qi(1) || *p >= upper {
        return Err(out_of_range(format!("need 1 < p < N/k = {}, got p = {}", fmt(&upper), fmt(p))));
    }
    let m = (k / 2) as i64;
    let p2 = p * p;
    let mut base = Q::one();
    if k % 2 == 0 {
        for l in 1..=m {
            let a = &nq - qi(2 * l) * p;
            let b = &nq * (p - qi(1)) + qi(2 * (l - 1)) * p;
            base *= a * b / &p2;
        }
    } else {
        base = (&nq - p) / p;
        for l in 1..=m {
            let a = &nq - qi(2 * l + 1) * p;
            let b = &nq * (p - qi(1)) + qi(2 * l - 1) * p;
            base *= a * b / &p2;
        }
    }
    ExactConstant::new(base, p.clone())
}

fn check_critical(n: u32, k: u32) -> Result<()> {
    if k < 2 {
        return Err(out_of_range(format!("k = {k} must be >= 2")));
    }
    if n <= k {
        return Err(out_of_range(format!("need N > k, got N = {n}, k = {k}")));
    }
    Ok(())
}

/// `R^rad_{k,p}`: optimal constant for the weight `(log R/r)^{-p}` at `p = N/k`.
pub fn critical_origin_constant(params: &ProblemParams) -> Result<ExactConstant> {
    let (n, k) = (params.n, params.k);
    check_critical(n, k)?;
    let (ni, ki) = (n as i64, k as i64);
    let m = ki / 2;
    let mut base = if k % 2 == 0 {
        Q::new((ni - ki).into(), (ki * ni).into())
    } else {
        Q::new((ni - ki).into(), ni.into())
    };
    for j in 1..=m {
        base *= qi(2 * j * (ni - 2 * j));
    }
    ExactConstant::new(base, params.p())
}

/// `R^rad_{k,N}`: optimal constant for the weight `(log R/r)^{-N}`.
pub fn critical_boundary_constant(params: &ProblemParams) -> Result<ExactConstant> {
    let (n, k) = (params.n, params.k);
    check_critical(n, k)?;
    let (ni, ki) = (n as i64, k as i64);
    let mut base = Q::one();
    for j in 1..=ki {
        base *= Q::new((j * ni - ki).into(), ni.into());
    }
    ExactConstant::new(base, params.p())
}

/// Constant of the critical case selected by `gamma`: zero outside `[p, N]`,
/// the origin or boundary constant at the endpoints, `None` strictly inside
/// (no closed form is known there).
pub fn constant_for_gamma(params: &ProblemParams) -> Result<Option<ExactConstant>> {
    if !params.gamma_in_window() {
        return Ok(Some(ExactConstant::new(Q::zero(), params.p())?));
    }
    if params.gamma == params.p() {
        return critical_origin_constant(params).map(Some);
    }
    if params.gamma == qi(params.n as i64) {
        return critical_boundary_constant(params).map(Some);
    }
    Ok(None)
}

/// Davies–Hinz constant `C(N, m, p, beta)` (exponent 1).
pub fn davies_hinz_constant(n: u32, m: u32, p: &Q, beta: &Q) -> Result<ExactConstant> {
    let nq = qi(n as i64);
    if m > 0 {
        let lower = qi(2) * (qi(1) + qi(m as i64 - 1) * p);
        if *beta <= lower || *beta >= nq {
            return Err(out_of_range(format!(
                "Davies-Hinz needs {} < beta < {}, got beta = {}",
                fmt(&lower),
                n,
                fmt(beta)
            )));
        }
    }
    let p2 = p * p;
    let mut c = Q::one();
    for kk in 0..m as i64 {
        let a = &nq - beta + qi(2 * kk) * p;
        let b = (p - qi(1)) * (&nq - qi(2)) + beta - qi(2) * (qi(1) + qi(kk) * p);
        c *= &p2 / (a * b);
    }
    ExactConstant::new(c, qi(1))
}

fn d_base(n: u32, m: u32, p: &Q, alpha: &Q) -> Q {
    let nq = qi(n as i64);
    let mi = m as i64;
    let p2 = p * p;
    let mut prod = Q::one();
    for j in 1..mi {
        let a = qi(2 * j) * p + &nq - qi(2 * mi) * p - alpha;
        let b = p * (&nq - qi(2) - qi(2 * j)) - &nq + qi(2 * mi) * p + alpha;
        prod *= a * b / &p2;
    }
    let tail = (p - qi(1)) * ((&nq - qi(2)) * p - &nq + qi(2 * mi) * p + alpha) / &p2;
    prod * tail
}

/// Chain constant `D(N, m, p, alpha)` for `2(1-p) < alpha <= N - 2mp` (exponent 1).
pub fn chain_constant_d(n: u32, m: u32, p: &Q, alpha: &Q) -> Result<ExactConstant> {
    if m < 1 {
        return Err(out_of_range("D needs m >= 1".into()));
    }
    let lo = qi(2) * (qi(1) - p);
    let hi = qi(n as i64) - qi(2 * m as i64) * p;
    if *alpha <= lo || *alpha > hi {
        return Err(out_of_range(format!(
            "D needs {} < alpha <= {}, got {}",
            fmt(&lo),
            fmt(&hi),
            fmt(alpha)
        )));
    }
    ExactConstant::new(d_base(n, m, p, alpha), qi(1))
}

/// Chain constant `E(N, m, p, alpha) = D(N, m, p, alpha + p)(N - alpha - p)/p`
/// for `2 - 3p < alpha <= N - (2m+1)p` (exponent 1).
pub fn chain_constant_e(n: u32, m: u32, p: &Q, alpha: &Q) -> Result<ExactConstant> {
    if m < 1 {
        return Err(out_of_range("E needs m >= 1".into()));
    }
    let lo = qi(2) - qi(3) * p;
    let hi = qi(n as i64) - qi(2 * m as i64 + 1) * p;
    if *alpha <= lo || *alpha > hi {
        return Err(out_of_range(format!(
            "E needs {} < alpha <= {}, got {}",
            fmt(&lo),
            fmt(&hi),
            fmt(alpha)
        )));
    }
    let shifted = alpha + p;
    let base = d_base(n, m, p, &shifted) * (qi(n as i64) - alpha - p) / p;
    ExactConstant::new(base, qi(1))
}

/// `A(N, m)` of the earlier logarithmic Rellich result, defined for `N = 4m`,
/// returned with exponent 1 (the inequality uses its square).
pub fn adimurthi_santra_constant(n: u32, m: u32) -> Result<ExactConstant> {
    if m < 2 || n != 4 * m {
        return Err(out_of_range(format!("A(N, m) needs m >= 2 and N = 4m, got N = {n}, m = {m}")));
    }
    let mi = m as i64;
    let mut a = Q::new((n as i64).into(), 4.into()) / crate::rational::pow_int(&qi(2), 2 * mi - 2);
    for i in 0..=(mi - 2) {
        a *= qi((4 * i + 2) * (8 * mi - 4 * i - 6));
    }
    ExactConstant::new(a, qi(1))
}

/// `((beta + p - 1)/p)^p` for `p > 1`, `beta >= 1 - p`.
pub fn hardy_weight_constant(p: &Q, beta: &Q) -> Result<ExactConstant> {
    if *p <= qi(1) {
        return Err(out_of_range(format!("need p > 1, got {}", fmt(p))));
    }
    let base = (beta + p - qi(1)) / p;
    if base < Q::zero() {
        return Err(out_of_range(format!("need beta >= 1 - p, got beta = {}", fmt(beta))));
    }
    ExactConstant::new(base, p.clone())
}

/// `prod_{j=lo}^{hi} (j p - 1)/p`, the constant pattern of the iterated
/// Hardy chains.
pub fn hardy_chain_product(p: &Q, lo: i64, hi: i64) -> Q {
    let mut c = Q::one();
    for j in lo..=hi {
        c *= (qi(j) * p - qi(1)) / p;
    }
    c
}
