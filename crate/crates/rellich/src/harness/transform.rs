//! Change of variables `r^-alpha - R^-alpha = t^-alpha` between radial
//! functions on `R^N` and on the ball `B_R`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::checks::Margin;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_finite, integrate_head, integrate_half_line, QuadratureResult, Tail};

/// `w(t) = q(t^2) e^{-t^2}` on `(0, infinity)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WSpec {
    /// Coefficients of `q` in ascending powers of `t^2`.
    pub poly: Vec<f64>,
}

impl WSpec {
    pub fn gaussian() -> Self {
        Self { poly: vec![1.0] }
    }

    /// `(P, A, B)` with `P(t) = q(t^2)`, `P'(t) = t A`, `P''(t) = B`.
    fn parts(&self, s: f64) -> (f64, f64, f64) {
        let (mut p, mut a, mut b) = (0.0, 0.0, 0.0);
        for (i, c) in self.poly.iter().enumerate().rev() {
            p = p * s + c;
            if i >= 1 {
                let i = i as f64;
                a = a * s + 2.0 * i * c;
                b = b * s + 2.0 * i * (2.0 * i - 1.0) * c;
            }
        }
        (p, a, b)
    }

    /// `(w, w', w'')` at `t`.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        let s = t * t;
        let (p, a, b) = self.parts(s);
        let g = (-s).exp();
        (p * g, t * (a - 2.0 * p) * g, (b - 2.0 * p - 4.0 * s * a + 4.0 * s * p) * g)
    }

    /// `Delta w = w'' + (N-1) w' / t`.
    pub fn laplacian(&self, n: u32, t: f64) -> f64 {
        let s = t * t;
        let (p, a, b) = self.parts(s);
        let w2 = b - 2.0 * p - 4.0 * s * a + 4.0 * s * p;
        (w2 + (n as f64 - 1.0) * (a - 2.0 * p)) * (-s).exp()
    }
}

/// Both identities and both forms of the subcritical inequality for one `(N, p, alpha, w)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformReport {
    pub n: u32,
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub w: WSpec,
    /// `int |Delta w|^p t^{N-1} dt`.
    pub laplacian_whole_space: f64,
    /// `int |L u|^p (1 - (r/R)^alpha)^beta r^{N-1} dr`.
    pub laplacian_ball: f64,
    pub laplacian_rel_error: f64,
    /// `int |w|^p t^{N-1-2p} dt`.
    pub potential_whole_space: f64,
    /// `int |u|^p r^{-2p} (1 - (r/R)^alpha)^{-(N-2p+alpha)/alpha} r^{N-1} dr`.
    pub potential_ball: f64,
    pub potential_rel_error: f64,
    pub margin_whole_space: Margin,
    pub margin_ball: Margin,
    /// Relative difference of the two quotients `rhs / lhs`.
    pub quotient_rel_diff: f64,
}

impl TransformReport {
    pub fn max_rel_error(&self) -> f64 {
        self.laplacian_rel_error.max(self.potential_rel_error).max(self.quotient_rel_diff)
    }
}

/// `beta = ((2p-1)(alpha+1) + 1 - N) / alpha`.
pub fn transform_beta(n: u32, p: f64, alpha: f64) -> f64 {
    ((2.0 * p - 1.0) * (alpha + 1.0) + 1.0 - n as f64) / alpha
}

/// `alpha = (N-2p)/(p-1)`, the exponent matching the decay of the whole-space extremal.
pub fn alpha_extremal(n: u32, p: f64) -> f64 {
    (n as f64 - 2.0 * p) / (p - 1.0)
}

/// `alpha = (N-2p)/(2p-1)`, for which `beta = 0`.
pub fn alpha_unweighted(n: u32, p: f64) -> f64 {
    (n as f64 - 2.0 * p) / (2.0 * p - 1.0)
}

/// Optimal constant `(N(p-1)(N-2p)/p^2)^p` of the subcritical inequality.
pub fn subcritical_constant(n: u32, p: f64) -> f64 {
    let nf = n as f64;
    (nf * (p - 1.0) * (nf - 2.0 * p) / (p * p)).powf(p)
}

struct Map {
    n: f64,
    alpha: f64,
    big_r: f64,
}

impl Map {
    /// `1 - (r/R)^alpha`, accurate near `r = R`.
    fn gap(&self, r: f64) -> f64 {
        -(self.alpha * (r / self.big_r).ln()).exp_m1()
    }

    fn t_of_r(&self, r: f64) -> f64 {
        r * self.gap(r).powf(-1.0 / self.alpha)
    }

    fn r_of_t(&self, t: f64) -> f64 {
        (self.big_r.powf(-self.alpha) + t.powf(-self.alpha)).powf(-1.0 / self.alpha)
    }

    /// `L u` at `r` for `u(r) = w(t(r))`, from `u'` and `u''` by the chain rule.
    fn lu(&self, w: &WSpec, r: f64) -> f64 {
        let t = self.t_of_r(r);
        if !t.is_finite() || t > 40.0 {
            return 0.0;
        }
        let (_, w1, w2) = w.eval(t);
        let a = self.alpha;
        let tr = t / r;
        let t1 = tr.powf(a + 1.0);
        let t2 = (a + 1.0) * tr.powf(a) * (t1 * r - t) / (r * r);
        let u1 = w1 * t1;
        let u2 = w2 * t1 * t1 + w1 * t2;
        u2 + u1 / r * ((a + 1.0) + (self.n - a - 2.0) / self.gap(r))
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

/// Integrates `f` on `(0, R)` with `f ~ r^head` at 0, split at `r(t)` for `t = 1, 2, 4, 8`.
fn integrate_ball<F: Fn(f64) -> f64>(f: &F, map: &Map, head: f64, tol: f64) -> Result<QuadratureResult> {
    let cuts: Vec<f64> = [0.5, 1.0, 2.0, 4.0, 8.0].iter().map(|&t| map.r_of_t(t)).collect();
    let mut res = integrate_head(f, cuts[0], head, tol)?;
    for w in cuts.windows(2) {
        res = res.add(integrate_finite(f, w[0], w[1], tol, 0.0));
    }
    Ok(res.add(integrate_finite(f, cuts[4], map.big_r, tol, 0.0)))
}

/// Checks both integral identities of the transformation and compares the
/// whole-space and ball forms of the subcritical inequality.
pub fn transform_equivalence(w: &WSpec, n: u32, p: f64, alpha: f64, big_r: f64, tol: f64) -> Result<TransformReport> {
    let nf = n as f64;
    if !(p > 1.0 && 2.0 * p < nf) {
        return Err(Error::OutOfRange(format!("need 1 < p < N/2, got p = {p}, N = {n}")));
    }
    if !(alpha > 0.0) || !(big_r > 0.0) {
        return Err(Error::OutOfRange(format!("need alpha > 0 and R > 0, got alpha = {alpha}, R = {big_r}")));
    }
    if w.poly.iter().all(|c| *c == 0.0) {
        return Err(Error::Invalid("w is identically zero".into()));
    }
    let beta = transform_beta(n, p, alpha);
    let map = Map { n: nf, alpha, big_r };
    let cuts = [1.0, 2.0, 4.0, 8.0];
    let tail = Tail::Exponential { rate: 1.0 };

    let lap_w = |t: f64| w.laplacian(n, t).abs().powf(p) * t.powf(nf - 1.0);
    let lap_ws = integrate_half_line(&lap_w, &cuts, nf - 1.0, tail, tol)?;
    let lap_b = |r: f64| {
        let v = map.lu(w, r);
        if v == 0.0 {
            return 0.0;
        }
        v.abs().powf(p) * map.gap(r).powf(beta) * r.powf(nf - 1.0)
    };
    let lap_ball = integrate_ball(&lap_b, &map, nf - 1.0, tol)?;

    let pot_w = |t: f64| w.eval(t).0.abs().powf(p) * t.powf(nf - 1.0 - 2.0 * p);
    let pot_ws = integrate_half_line(&pot_w, &cuts, nf - 1.0 - 2.0 * p, tail, tol)?;
    let pot_b = |r: f64| {
        let t = map.t_of_r(r);
        if !t.is_finite() || t > 40.0 {
            return 0.0;
        }
        w.eval(t).0.abs().powf(p) * r.powf(nf - 1.0 - 2.0 * p) * map.gap(r).powf(-(nf - 2.0 * p + alpha) / alpha)
    };
    let pot_ball = integrate_ball(&pot_b, &map, nf - 1.0 - 2.0 * p, tol)?;

    let c = subcritical_constant(n, p);
    let margin = |name: &str, lap: &QuadratureResult, pot: &QuadratureResult| {
        let lhs = c * pot.value;
        Margin {
            inequality: name.into(),
            lhs,
            rhs: lap.value,
            slack: lap.value - lhs,
            quad_error: lap.abs_error_estimate + c * pot.abs_error_estimate,
            params: [("N", n.to_string()), ("p", p.to_string()), ("alpha", alpha.to_string())]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    };
    Ok(TransformReport {
        n,
        p,
        alpha,
        beta,
        w: w.clone(),
        laplacian_whole_space: lap_ws.value,
        laplacian_ball: lap_ball.value,
        laplacian_rel_error: rel(lap_ws.value, lap_ball.value),
        potential_whole_space: pot_ws.value,
        potential_ball: pot_ball.value,
        potential_rel_error: rel(pot_ws.value, pot_ball.value),
        margin_whole_space: margin("subcritical_whole_space", &lap_ws, &pot_ws),
        margin_ball: margin("subcritical_ball", &lap_ball, &pot_ball),
        quotient_rel_diff: rel(lap_ws.value / pot_ws.value, lap_ball.value / pot_ball.value),
    })
}

/// One sampled `(N, p, alpha, w)` for the transformation check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformCase {
    pub n: u32,
    pub p: f64,
    pub alpha: f64,
    pub w: WSpec,
}

/// `count` seeded cases; the first two use the two distinguished exponents.
pub fn sample_transform_cases(seed: u64, count: usize) -> Vec<TransformCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(5..=9u32);
            // p on a quarter-grid in (1, N/2)
            let steps = (2 * n - 5) as i32;
            let p = 1.0 + rng.gen_range(1..=steps) as f64 / 4.0;
            let p = p.min(n as f64 / 2.0 - 0.25);
            let alpha = match i {
                0 => alpha_extremal(n, p),
                1 => alpha_unweighted(n, p),
                _ => rng.gen_range(1..=12) as f64 / 4.0,
            };
            let deg = rng.gen_range(0..=2usize);
            let mut poly: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-4..=4) as f64 / 2.0).collect();
            poly[0] = rng.gen_range(1..=4) as f64 / 2.0;
            TransformCase { n, p, alpha, w: WSpec { poly } }
        })
        .collect()
}
