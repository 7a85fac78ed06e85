use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logterm::TermSum;
use crate::quadrature::{poly_mul, CutoffSpec, Piece, RadialProfile};
use crate::rational::{q, qi, Q};
use num_traits::{One, Zero};

/// `q(r^2) (R^2 - r^2)^b`, optionally multiplied by a smoothstep that vanishes
/// on `(0, R/8]` and equals one on `[R/4, R)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    /// Coefficients of `q` in ascending powers of `s = r^2`.
    #[serde(with = "q_vec")]
    pub poly: Vec<Q>,
    pub boundary_order: u32,
    /// Smoothness order of the origin cutoff, when present.
    pub origin_cutoff: Option<u32>,
    #[serde(with = "crate::rational::serde_q")]
    pub radius: Q,
}

mod q_vec {
    use super::Q;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(crate::rational::fmt).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| crate::rational::parse(s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}"))))
            .collect()
    }
}

/// Default smoothness of the origin cutoff; enough for fifth derivatives.
pub const ORIGIN_CUTOFF_ORDER: u32 = 6;

/// Seed-deterministic test function with coefficients on the lattice
/// `{-8, ..., 8} / 4`, rejecting the zero polynomial.
pub fn random_test_function(seed: u64, degree: u32, boundary_order: u32, origin_vanishing: bool) -> Result<TestFunction> {
    if boundary_order < 1 {
        return Err(Error::OutOfRange("boundary_order must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poly = loop {
        let c: Vec<Q> = (0..=degree).map(|_| q(rng.gen_range(-8..=8), 4)).collect();
        if c.iter().any(|v| !v.is_zero()) {
            break c;
        }
    };
    Ok(TestFunction {
        poly,
        boundary_order,
        origin_cutoff: origin_vanishing.then_some(ORIGIN_CUTOFF_ORDER),
        radius: qi(1),
    })
}

impl TestFunction {
    pub fn with_radius(mut self, radius: Q) -> Self {
        self.radius = radius;
        self
    }

    /// Coefficients of `q(r^2) (R^2 - r^2)^b` in ascending powers of `r`.
    pub fn r_polynomial(&self) -> Vec<Q> {
        let mut out = vec![Q::zero(); 2 * self.poly.len() - 1];
        for (i, c) in self.poly.iter().enumerate() {
            out[2 * i] = c.clone();
        }
        let factor = [&self.radius * &self.radius, Q::zero(), -Q::one()];
        for _ in 0..self.boundary_order {
            out = poly_mul(&out, &factor);
        }
        out
    }

    /// Closed-form profile in dimension `n`.
    pub fn profile(&self, n: u32) -> RadialProfile {
        let big_r = self.radius.clone();
        let body = TermSum::laurent(n, big_r.clone(), 0, &self.r_polynomial());
        let pieces = match self.origin_cutoff {
            None => vec![Piece { t_lo: 0.0, t_hi: f64::INFINITY, sum: body }],
            Some(order) => {
                let c = CutoffSpec { inner_radius: &big_r / qi(8), outer_radius: &big_r / qi(4), smoothness_order: order };
                // 1 - (cutoff vanishing beyond R/4) vanishes below R/8
                let mut ramp: Vec<Q> = c.polynomial().iter().map(|v| -v).collect();
                ramp[0] += Q::one();
                let mid = body.mul(&TermSum::laurent(n, big_r.clone(), 0, &ramp));
                let (t4, t8) = (4f64.ln(), 8f64.ln());
                vec![
                    Piece { t_lo: 0.0, t_hi: t4, sum: body },
                    Piece { t_lo: t4, t_hi: t8, sum: mid },
                    Piece { t_lo: t8, t_hi: f64::INFINITY, sum: TermSum::zero(n, big_r.clone()) },
                ]
            }
        };
        RadialProfile {
            pieces,
            alpha: 0.0,
            n,
            radius: big_r,
            derivative_order_available: self.origin_cutoff.unwrap_or(u32::MAX),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = self.clone();
        for v in &mut out.poly {
            *v *= c;
        }
        out
    }
}
