//! Adaptive 21-point Gauss–Kronrod quadrature with a global error queue.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208463424815,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Value and error estimate of an integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub subdivisions: usize,
    pub converged: bool,
}

impl QuadratureResult {
    pub fn zero() -> Self {
        Self { value: 0.0, abs_error_estimate: 0.0, subdivisions: 0, converged: true }
    }

    pub fn add(self, o: Self) -> Self {
        Self {
            value: self.value + o.value,
            abs_error_estimate: self.abs_error_estimate + o.abs_error_estimate,
            subdivisions: self.subdivisions + o.subdivisions,
            converged: self.converged && o.converged,
        }
    }

    pub fn scale(self, c: f64) -> Self {
        Self { value: self.value * c, abs_error_estimate: self.abs_error_estimate * c.abs(), ..self }
    }
}

/// One 21-point rule on `[a, b]`: (Kronrod value, error estimate).
pub fn qk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = fc * WGK[10];
    let mut resabs = resk.abs();
    let mut resg = 0.0;
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * h;
    resabs *= h.abs();
    resasc *= h.abs();
    let mut err = ((resk - resg) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (result, err)
}

struct Seg {
    a: f64,
    b: f64,
    val: f64,
    err: f64,
}

impl PartialEq for Seg {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Seg {}
impl PartialOrd for Seg {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Seg {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.partial_cmp(&o.err).unwrap_or(Ordering::Equal)
    }
}

/// Adaptive integration of `f` over the finite interval `[a, b]` until the
/// total error estimate is at most `max(abs_tol, rel_tol |value|)`.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> QuadratureResult {
    const MAX_SEGMENTS: usize = 4000;
    if a == b {
        return QuadratureResult::zero();
    }
    let (v, e) = qk21(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Seg { a, b, val: v, err: e });
    let mut total = v;
    let mut total_err = e;
    let mut n = 1;
    loop {
        if total_err <= abs_tol.max(rel_tol * total.abs()) || !total.is_finite() {
            break;
        }
        if n >= MAX_SEGMENTS {
            break;
        }
        let s = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            heap.push(s);
            break;
        }
        let (v1, e1) = qk21(f, s.a, mid);
        let (v2, e2) = qk21(f, mid, s.b);
        total += v1 + v2 - s.val;
        total_err += e1 + e2 - s.err;
        heap.push(Seg { a: s.a, b: mid, val: v1, err: e1 });
        heap.push(Seg { a: mid, b: s.b, val: v2, err: e2 });
        n += 1;
        if n % 64 == 0 {
            // refresh the running sums to avoid drift
            total = heap.iter().map(|s| s.val).sum();
            total_err = heap.iter().map(|s| s.err).sum();
        }
    }
    let total: f64 = heap.iter().map(|s| s.val).sum();
    let total_err: f64 = heap.iter().map(|s| s.err).sum();
    QuadratureResult {
        value: total,
        abs_error_estimate: total_err,
        subdivisions: n,
        converged: total.is_finite() && total_err <= abs_tol.max(rel_tol * total.abs()),
    }
}
