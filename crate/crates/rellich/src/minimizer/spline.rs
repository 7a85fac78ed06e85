//! B-splines in `t = log(R/r)` on a dyadic knot lattice, clamped at `t = 0`
//! (boundary conditions there) and continued by a constant beyond `t_max`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Knot layout: `0` (multiplicity `degree + 1`), then `2^{j / per_octave}`
/// for `t_min <= t <= t_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub knots_per_octave: u32,
    pub degree: usize,
}

impl DiscreteGrid {
    pub fn new(t_min: f64, t_max: f64, knots_per_octave: u32, degree: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min && t_max.is_finite()) {
            return Err(Error::OutOfRange(format!("need 0 < t_min < t_max, got [{t_min}, {t_max}]")));
        }
        if knots_per_octave == 0 || degree == 0 {
            return Err(Error::OutOfRange("knots_per_octave and degree must be positive".into()));
        }
        Ok(Self { t_min, t_max, knots_per_octave, degree })
    }

    fn lattice(&self) -> (i64, i64) {
        let n = self.knots_per_octave as f64;
        ((self.t_min.log2() * n).round() as i64, (self.t_max.log2() * n).round() as i64)
    }
}

/// Spline space with `bc_order` homogeneous conditions at `t = 0`.
#[derive(Debug, Clone)]
pub struct SplineSpace {
    pub grid: DiscreteGrid,
    pub bc_order: usize,
    knots: Vec<f64>,
    /// Knot index of `t_max`.
    i_t: usize,
    n_dof: usize,
}

impl SplineSpace {
    pub fn new(grid: DiscreteGrid, bc_order: usize) -> Result<Self> {
        let d = grid.degree;
        if d < bc_order {
            return Err(Error::OutOfRange(format!("degree {d} below the {bc_order} boundary conditions")));
        }
        let (j_lo, j_hi) = grid.lattice();
        let per = grid.knots_per_octave as f64;
        let mut knots = vec![0.0; d + 1];
        knots.extend((j_lo..=j_hi + d as i64 + 1).map(|j| (j as f64 / per).exp2()));
        let i_t = d + 1 + (j_hi - j_lo) as usize;
        // individual functions k..i_t-d, plus the merged tail
        if i_t < d + bc_order + 1 {
            return Err(Error::OutOfRange("window too small for the requested degree".into()));
        }
        let n_dof = i_t - d - bc_order + 1;
        Ok(Self { grid, bc_order, knots, i_t, n_dof })
    }

    pub fn n_dof(&self) -> usize {
        self.n_dof
    }

    pub fn degree(&self) -> usize {
        self.grid.degree
    }

    /// Actual window `[t_min, t_max]` on the lattice.
    pub fn t_min(&self) -> f64 {
        self.knots[self.grid.degree + 1]
    }

    pub fn t_max(&self) -> f64 {
        self.knots[self.i_t]
    }

    /// Knot spans `[a, b]` covering `[0, t_max]`.
    pub fn spans(&self) -> Vec<(usize, f64, f64)> {
        (self.grid.degree..self.i_t).map(|s| (s, self.knots[s], self.knots[s + 1])).collect()
    }

    /// Degree of freedom owning B-spline `i`.
    pub fn dof(&self, i: usize) -> Option<usize> {
        let d = self.grid.degree;
        if i < self.bc_order {
            None
        } else if i + d < self.i_t {
            Some(i - self.bc_order)
        } else {
            Some(self.n_dof - 1)
        }
    }

    /// Index of the tail degree of freedom (the constant value beyond `t_max`).
    pub fn tail_dof(&self) -> usize {
        self.n_dof - 1
    }

    /// Span index for `t` in `[0, t_max)`.
    pub fn find_span(&self, t: f64) -> usize {
        let d = self.grid.degree;
        if t >= self.knots[self.i_t] {
            return self.i_t - 1;
        }
        // knots[d..=i_t] is increasing
        let slice = &self.knots[d..=self.i_t];
        let pos = slice.partition_point(|&k| k <= t);
        d + pos.saturating_sub(1).min(self.i_t - d - 1)
    }

    /// Derivatives `0..=nder` of the `degree + 1` B-splines nonzero on span `s`,
    /// as `out[k][r]` for `B_{s - degree + r}`.
    pub fn basis_ders(&self, s: usize, t: f64, nder: usize) -> Vec<Vec<f64>> {
        let p = self.grid.degree;
        let u = &self.knots;
        let mut ndu = vec![vec![0.0; p + 1]; p + 1];
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        ndu[0][0] = 1.0;
        for j in 1..=p {
            left[j] = t - u[s + 1 - j];
            right[j] = u[s + j] - t;
            let mut saved = 0.0;
            for r in 0..j {
                ndu[j][r] = right[r + 1] + left[j - r];
                let temp = ndu[r][j - 1] / ndu[j][r];
                ndu[r][j] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            ndu[j][j] = saved;
        }
        let nd = nder.min(p);
        let mut ders = vec![vec![0.0; p + 1]; nder + 1];
        for j in 0..=p {
            ders[0][j] = ndu[j][p];
        }
        let mut a = vec![vec![0.0; p + 1]; 2];
        for r in 0..=p {
            let (mut s1, mut s2) = (0usize, 1usize);
            a[0][0] = 1.0;
            for k in 1..=nd {
                let mut d = 0.0;
                let rk = r as i64 - k as i64;
                let pk = p - k;
                if r >= k {
                    a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                    d = a[s2][0] * ndu[rk as usize][pk];
                }
                let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
                let j2 = if r as i64 - 1 <= pk as i64 { k - 1 } else { p - r };
                for j in j1..=j2 {
                    let idx = (rk + j as i64) as usize;
                    a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][idx];
                    d += a[s2][j] * ndu[idx][pk];
                }
                if r <= pk {
                    a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                    d += a[s2][k] * ndu[r][pk];
                }
                ders[k][r] = d;
                std::mem::swap(&mut s1, &mut s2);
            }
        }
        let mut fac = p as f64;
        for k in 1..=nd {
            for j in 0..=p {
                ders[k][j] *= fac;
            }
            fac *= (p - k) as f64;
        }
        ders
    }

    /// Derivatives `0..=nder` of the degrees of freedom nonzero at `t`, merged
    /// onto their owners: `(dof, [d^0, d^1, ...])`.
    pub fn dof_ders(&self, t: f64, nder: usize) -> Vec<(usize, Vec<f64>)> {
        if t >= self.t_max() {
            let mut v = vec![0.0; nder + 1];
            v[0] = 1.0;
            return vec![(self.tail_dof(), v)];
        }
        let s = self.find_span(t);
        let p = self.grid.degree;
        let ders = self.basis_ders(s, t, nder);
        let mut out: Vec<(usize, Vec<f64>)> = Vec::with_capacity(p + 1);
        for r in 0..=p {
            let Some(dof) = self.dof(s - p + r) else { continue };
            let vals: Vec<f64> = (0..=nder).map(|k| ders[k][r]).collect();
            match out.last_mut() {
                Some((last, acc)) if *last == dof => acc.iter_mut().zip(&vals).for_each(|(a, v)| *a += v),
                _ => out.push((dof, vals)),
            }
        }
        out
    }

    /// Value and derivatives of `sum c_i phi_i` at `t`.
    pub fn eval(&self, coef: &[f64], t: f64, nder: usize) -> Vec<f64> {
        let mut v = vec![0.0; nder + 1];
        for (dof, ders) in self.dof_ders(t, nder) {
            for k in 0..=nder {
                v[k] += coef[dof] * ders[k];
            }
        }
        v
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}
