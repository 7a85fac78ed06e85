//! Galerkin discretization of the radial quotient in `t = log(R/r)`.
//!
//! With `p = N/k`, writing `u(r) = g(t)` gives
//! `int |grad^k u|^p dx = int_0^inf |P_k(d/dt) g|^p dt` for a constant
//! coefficient operator `P_k`, and `int |u|^p |x|^-N log(aR/|x|)^-gamma dx =
//! int_0^inf |g|^p (t + log a)^-gamma dt`. Trial functions vanish to order `k`
//! at `t = 0` and are constant beyond `t_max`, so every discrete quotient is
//! the quotient of an admissible function.

use serde::{Deserialize, Serialize};

use super::banded::SymBand;
use super::spline::{gauss_legendre, DiscreteGrid, SplineSpace};
use crate::error::{Error, Result};
use crate::exact::ProblemParams;

/// Coefficients `c_0..c_k` of `P_k(D) = sum c_j D^j` (up to sign): the
/// factors `(D + 2i)(D + 2i + 2 - N)` for each Laplacian and `(D + 2m)` for
/// a trailing gradient.
pub fn operator_coeffs(n: u32, k: u32) -> Vec<f64> {
    let nf = n as f64;
    let mut poly = vec![1.0];
    let mul = |poly: &[f64], root: f64| {
        // poly * (D + root)
        let mut out = vec![0.0; poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            out[j] += root * c;
            out[j + 1] += c;
        }
        out
    };
    for i in 0..k / 2 {
        let i = i as f64;
        poly = mul(&poly, 2.0 * i);
        poly = mul(&poly, 2.0 * i + 2.0 - nf);
    }
    if k % 2 == 1 {
        poly = mul(&poly, 2.0 * (k / 2) as f64);
    }
    poly
}

/// One quadrature point with the degrees of freedom alive there.
#[derive(Debug, Clone)]
pub(crate) struct QPoint {
    pub t: f64,
    pub w: f64,
    /// First span `[0, t_min]`, where the mass weight is singular.
    pub first_span: bool,
    /// `(dof, phi, P phi)`.
    pub basis: Vec<(usize, f64, f64)>,
}

const GL_POINTS: usize = 12;
/// Geometric subdivisions of the first span for non-polynomial integrands.
const FIRST_SPAN_LEVELS: i32 = 48;

#[derive(Debug, Clone)]
pub struct DiscreteProblem {
    pub params: ProblemParams,
    pub space: SplineSpace,
    pub(crate) points: Vec<QPoint>,
    shift: f64,
    /// Stiffness `K` (only for `p = 2`).
    pub stiffness: Option<SymBand>,
    /// Mass `M` (only for `p = 2`).
    pub mass: Option<SymBand>,
}

/// Default spline degree `k + 1` (trial functions in `C^k`).
pub fn default_degree(params: &ProblemParams) -> usize {
    params.k as usize + 1
}

impl DiscreteProblem {
    /// Quadrature tables; the `p = 2` matrices are assembled when `p = 2`.
    pub fn new(params: &ProblemParams, grid: &DiscreteGrid) -> Result<Self> {
        let k = params.k as usize;
        let gamma = params.gamma_f64();
        // g ~ t^k at 0 makes |g|^p t^-gamma integrable iff gamma < pk + 1 = N + 1
        if !(gamma > 1.0 && gamma < params.n as f64 + 1.0) {
            return Err(Error::OutOfRange(format!("gamma = {gamma} outside (1, N + 1): the weighted mass diverges")));
        }
        let space = SplineSpace::new(grid.clone(), k)?;
        let coeffs = operator_coeffs(params.n, params.k);
        let (gx, gw) = gauss_legendre(GL_POINTS);
        let mut points = Vec::new();
        let mut push = |a: f64, b: f64, first: bool| {
            let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
            for (x, w) in gx.iter().zip(&gw) {
                let t = c + h * x;
                let basis = space
                    .dof_ders(t, k)
                    .into_iter()
                    .map(|(dof, d)| (dof, d[0], coeffs.iter().zip(&d).map(|(c, v)| c * v).sum()))
                    .collect();
                points.push(QPoint { t, w: w * h, first_span: first, basis });
            }
        };
        for (i, (_, a, b)) in space.spans().into_iter().enumerate() {
            if i == 0 {
                // geometric pieces toward t = 0
                let mut hi = b;
                for _ in 0..FIRST_SPAN_LEVELS {
                    push(0.5 * hi, hi, true);
                    hi *= 0.5;
                }
                push(0.0, hi, true);
            } else {
                push(a, b, false);
            }
        }
        let mut out = Self { params: params.clone(), space, points, shift: params.a.ln(), stiffness: None, mass: None };
        if params.n == 2 * params.k {
            out.assemble_quadratic();
        }
        Ok(out)
    }

    pub fn n_dof(&self) -> usize {
        self.space.n_dof()
    }

    pub fn p(&self) -> f64 {
        self.params.p_f64()
    }

    pub fn gamma(&self) -> f64 {
        self.params.gamma_f64()
    }

    pub(crate) fn weight(&self, t: f64) -> f64 {
        (t + self.shift).powf(-self.gamma())
    }

    /// `int_{t_max}^inf (t + log a)^-gamma dt`.
    pub(crate) fn tail_weight(&self) -> f64 {
        let g = self.gamma();
        (self.space.t_max() + self.shift).powf(1.0 - g) / (g - 1.0)
    }

    fn assemble_quadratic(&mut self) {
        let n = self.n_dof();
        let bw = self.space.degree();
        let mut k = SymBand::zeros(n, bw);
        let mut m = SymBand::zeros(n, bw);
        let exact_first = self.shift == 0.0;
        for q in &self.points {
            let wm = if q.first_span && exact_first { 0.0 } else { q.w * self.weight(q.t) };
            for (a, (i, fi, pi)) in q.basis.iter().enumerate() {
                for (j, fj, pj) in &q.basis[..=a] {
                    k.add(*i, *j, q.w * pi * pj);
                    if wm != 0.0 {
                        m.add(*i, *j, wm * fi * fj);
                    }
                }
            }
        }
        if exact_first {
            self.first_span_mass_exact(&mut m);
        }
        let tail = self.space.tail_dof();
        m.add(tail, tail, self.tail_weight());
        self.stiffness = Some(k);
        self.mass = Some(m);
    }

    /// `int_0^h phi_i phi_j t^-gamma dt` from Taylor coefficients at 0.
    fn first_span_mass_exact(&self, m: &mut SymBand) {
        let d = self.space.degree();
        let (s, _, h) = self.space.spans()[0];
        let ders = self.space.basis_ders(s, 0.0, d);
        let g = self.gamma();
        let mut fact = 1.0;
        // beta[r][a]: coefficient of x^a, x = t/h, for B_{s-d+r}
        let mut beta = vec![vec![0.0; d + 1]; d + 1];
        for a in 0..=d {
            if a > 0 {
                fact *= a as f64;
            }
            for r in 0..=d {
                beta[r][a] = ders[a][r] * h.powi(a as i32) / fact;
            }
        }
        let dofs: Vec<Option<usize>> = (0..=d).map(|r| self.space.dof(s - d + r)).collect();
        let scale = h.powf(1.0 - g);
        for r1 in 0..=d {
            let Some(i) = dofs[r1] else { continue };
            for r2 in 0..=d {
                let Some(j) = dofs[r2] else { continue };
                if j > i {
                    continue;
                }
                let mut v = 0.0;
                for a in 0..=d {
                    for b in 0..=d {
                        let (x, y) = (beta[r1][a], beta[r2][b]);
                        if x != 0.0 && y != 0.0 {
                            v += x * y / (a as f64 + b as f64 + 1.0 - g);
                        }
                    }
                }
                // merged tail functions contribute once per pair of members
                m.add(i, j, scale * v);
            }
        }
    }

    /// `(int |P g|^p, int |g|^p w)` for coefficients `c` (general `p`).
    pub fn energy_and_mass(&self, c: &[f64]) -> (f64, f64) {
        let p = self.p();
        let (mut e, mut m) = (0.0, 0.0);
        for q in &self.points {
            let (mut g, mut pg) = (0.0, 0.0);
            for (i, f, pf) in &q.basis {
                g += c[*i] * f;
                pg += c[*i] * pf;
            }
            e += q.w * pg.abs().powf(p);
            m += q.w * self.weight(q.t) * g.abs().powf(p);
        }
        m += c[self.space.tail_dof()].abs().powf(p) * self.tail_weight();
        (e, m)
    }

    /// Quotient and its gradient with respect to the coefficients.
    pub fn quotient_and_gradient(&self, c: &[f64]) -> (f64, Vec<f64>) {
        let p = self.p();
        let n = self.n_dof();
        let (mut e, mut m) = (0.0, 0.0);
        let mut ge = vec![0.0; n];
        let mut gm = vec![0.0; n];
        for q in &self.points {
            let (mut g, mut pg) = (0.0, 0.0);
            for (i, f, pf) in &q.basis {
                g += c[*i] * f;
                pg += c[*i] * pf;
            }
            let w = self.weight(q.t);
            e += q.w * pg.abs().powf(p);
            m += q.w * w * g.abs().powf(p);
            let de = p * q.w * pg.abs().powf(p - 1.0) * pg.signum();
            let dm = p * q.w * w * g.abs().powf(p - 1.0) * g.signum();
            for (i, f, pf) in &q.basis {
                ge[*i] += de * pf;
                gm[*i] += dm * f;
            }
        }
        let tail = self.space.tail_dof();
        let ct = c[tail];
        m += ct.abs().powf(p) * self.tail_weight();
        gm[tail] += p * ct.abs().powf(p - 1.0) * ct.signum() * self.tail_weight();
        let qv = e / m;
        let grad = ge.iter().zip(&gm).map(|(a, b)| (a - qv * b) / m).collect();
        (qv, grad)
    }

    /// Mass fractions `(t <= tau_out, t >= tau_in)` of `|g|^p w`.
    pub fn mass_fractions(&self, c: &[f64], tau_out: f64, tau_in: f64) -> (f64, f64) {
        let p = self.p();
        let (mut total, mut outer, mut inner) = (0.0, 0.0, 0.0);
        for q in &self.points {
            let g: f64 = q.basis.iter().map(|(i, f, _)| c[*i] * f).sum();
            let v = q.w * self.weight(q.t) * g.abs().powf(p);
            total += v;
            if q.t <= tau_out {
                outer += v;
            }
            if q.t >= tau_in {
                inner += v;
            }
        }
        let tail = c[self.space.tail_dof()].abs().powf(p) * self.tail_weight();
        total += tail;
        inner += tail;
        (outer / total, inner / total)
    }

    /// `int g |g|^{p-1} w`, whose sign fixes the orientation of a minimizer.
    pub fn signed_mass(&self, c: &[f64]) -> f64 {
        let p = self.p();
        let mut m = 0.0;
        for q in &self.points {
            let g: f64 = q.basis.iter().map(|(i, f, _)| c[*i] * f).sum();
            m += q.w * self.weight(q.t) * g * g.abs().powf(p - 1.0);
        }
        let ct = c[self.space.tail_dof()];
        m + ct * ct.abs().powf(p - 1.0) * self.tail_weight()
    }

    /// `g(t)` for coefficients `c`.
    pub fn profile_value(&self, c: &[f64], t: f64) -> f64 {
        self.space.eval(c, t, 0)[0]
    }
}

/// Serializable summary of a discretization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub t_min: f64,
    pub t_max: f64,
    pub knots_per_octave: u32,
    pub degree: usize,
    pub n_dof: usize,
}

impl From<&DiscreteProblem> for GridSummary {
    fn from(p: &DiscreteProblem) -> Self {
        Self {
            t_min: p.space.t_min(),
            t_max: p.space.t_max(),
            knots_per_octave: p.space.grid.knots_per_octave,
            degree: p.space.degree(),
            n_dof: p.n_dof(),
        }
    }
}
