//! Comparison of `R^rad_{2m,2}` at `N = 4m` with the earlier constant `A(N,m)^2`.

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{adimurthi_santra_constant, critical_origin_constant, davies_hinz_constant, ProblemParams};
use crate::error::{Error, Result};
use crate::rational::{fmt, q, qi, to_f64, Q};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    pub inequality: String,
    pub factor: String,
    pub running_product: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chains {
    /// Earlier derivation; only available in closed form for `m = 2`.
    pub earlier: Option<Vec<ChainStep>>,
    /// Davies–Hinz, then weighted second-to-first order, then log Hardy.
    pub present: Vec<ChainStep>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub m: u32,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "A_squared")]
    pub a_squared: String,
    #[serde(rename = "R_rad")]
    pub r_rad: String,
    pub ratio: String,
    pub ratio_value: f64,
    /// `A(N,m) / prod_{i=1}^m (N - 2i)`, to be compared with `(p-1)/p = 1/2`.
    pub a_over_product: String,
    pub chains: Chains,
}

fn chain(steps: &[(&str, Q)]) -> (Vec<ChainStep>, Q) {
    let mut acc = Q::one();
    let mut out = Vec::new();
    for (name, f) in steps {
        acc *= f;
        out.push(ChainStep { inequality: name.to_string(), factor: fmt(f), running_product: fmt(&acc) });
    }
    (out, acc)
}

/// Gap analysis at `N = 4m`, `k = 2m`, `p = 2`.
pub fn gap_analysis(m: u32) -> Result<GapReport> {
    if m < 2 {
        return Err(Error::OutOfRange(format!("gap analysis needs m >= 2, got {m}")));
    }
    let n = 4 * m;
    let ni = n as i64;
    let a = adimurthi_santra_constant(n, m)?;
    let a_sq = a.base() * a.base();
    let params = ProblemParams::critical(n, 2 * m)?;
    let r = critical_origin_constant(&params)?;
    let r_val = r.exact_value().expect("p = 2 is an integer exponent");

    let beta = qi(4 * (m as i64 - 1));
    let dh = davies_hinz_constant(n, m - 1, &qi(2), &beta)?;
    let dh_factor = (dh.base() * dh.base()).recip();
    let delta = -(4 * (m as i64 - 1));
    let musina = qi(ni) - Q::new((ni + delta).into(), 2.into());
    let (present, present_total) = chain(&[
        ("Davies-Hinz, Delta^{m-1} to Delta with weight r^{-4(m-1)}", dh_factor),
        ("weighted second-to-first order, delta = -4(m-1)", &musina * &musina),
        ("logarithmic Hardy at alpha = N - 2", q(1, 4)),
    ]);
    debug_assert_eq!(present_total, r_val);

    let earlier = if m == 2 {
        let nq = qi(ni);
        let vec_rellich = (&nq - qi(6)) * (&nq + qi(2)) / qi(4);
        let (steps, total) = chain(&[
            ("second-to-first order, delta = 0", &nq * &nq / qi(4)),
            ("vector Rellich with weight r^{-2}", &vec_rellich * &vec_rellich),
            ("logarithmic Hardy at alpha = N - 2", q(1, 4)),
        ]);
        debug_assert_eq!(total, a_sq);
        Some(steps)
    } else {
        None
    };

    let mut prod = Q::one();
    for i in 1..=m as i64 {
        prod *= qi(ni - 2 * i);
    }
    let ratio = &r_val / &a_sq;
    Ok(GapReport {
        m,
        n,
        a: fmt(a.base()),
        a_squared: fmt(&a_sq),
        r_rad: fmt(&r_val),
        ratio_value: to_f64(&ratio),
        ratio: fmt(&ratio),
        a_over_product: fmt(&(a.base() / prod)),
        chains: Chains { earlier, present },
    })
}
