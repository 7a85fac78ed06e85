use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{qi, to_f64, Q};

/// Index tuple shared by every inequality and quotient: dimension `n`,
/// derivative order `k`, weight exponent `gamma`, ball radius and dilation `a`.
///
/// `p = n/k` and `m = floor(k/2)` are derived.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub n: u32,
    pub k: u32,
    #[serde(with = "crate::rational::serde_q")]
    pub gamma: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub radius: Q,
    /// Dilation inside `log(aR/r)`. Kept as a real because `e^{gamma/N}` is a
    /// natural choice.
    pub a: f64,
}

impl ProblemParams {
    /// Critical parameters with `gamma = p`, `R = 1`, `a = 1`.
    pub fn critical(n: u32, k: u32) -> Result<Self> {
        let p = Q::new(n.into(), k.into());
        Self::new(n, k, p, qi(1), 1.0)
    }

    pub fn new(n: u32, k: u32, gamma: Q, radius: Q, a: f64) -> Result<Self> {
        if k < 1 {
            return Err(Error::OutOfRange(format!("k = {k} must be >= 1")));
        }
        if n <= k {
            return Err(Error::OutOfRange(format!("need N > k (p = N/k > 1), got N = {n}, k = {k}")));
        }
        if radius <= qi(0) {
            return Err(Error::OutOfRange("R must be positive".into()));
        }
        if !(a >= 1.0) || !a.is_finite() {
            return Err(Error::OutOfRange(format!("a = {a} must be >= 1")));
        }
        Ok(Self { n, k, gamma, radius, a })
    }

    pub fn with_gamma(&self, gamma: Q) -> Self {
        Self { gamma, ..self.clone() }
    }

    pub fn with_radius(&self, radius: Q) -> Self {
        Self { radius, ..self.clone() }
    }

    pub fn with_a(&self, a: f64) -> Self {
        Self { a, ..self.clone() }
    }

    pub fn m(&self) -> u32 {
        self.k / 2
    }

    pub fn is_odd(&self) -> bool {
        self.k % 2 == 1
    }

    pub fn p(&self) -> Q {
        Q::new(self.n.into(), self.k.into())
    }

    pub fn p_f64(&self) -> f64 {
        self.n as f64 / self.k as f64
    }

    pub fn gamma_f64(&self) -> f64 {
        to_f64(&self.gamma)
    }

    pub fn radius_f64(&self) -> f64 {
        to_f64(&self.radius)
    }

    /// Whether `gamma` lies in the closed window `[p, N]` where the constant
    /// is nonzero.
    pub fn gamma_in_window(&self) -> bool {
        self.gamma >= self.p() && self.gamma <= qi(self.n as i64)
    }
}
