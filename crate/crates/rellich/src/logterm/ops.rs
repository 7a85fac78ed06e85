use super::{AlphaPoly, TermSum};
use crate::rational::qi;

/// `d/dr`, term by term:
/// `c r^s L^{E}` maps to `c s r^{s-1} L^{E} - c E r^{s-1} L^{E-1}` with `E = e alpha + t`.
pub fn radial_diff(f: &TermSum) -> TermSum {
    let mut out = f.zero_like();
    for (&(s, e, t), c) in f.raw() {
        if s != 0 {
            out.add_term((s - 1, e, t), c.scale(&qi(s)));
        }
        let exp = AlphaPoly::linear(e, t);
        out.add_term((s - 1, e, t - 1), &-c * &exp);
    }
    out
}

/// Radial Laplacian `f'' + (N-1) f'/r`.
pub fn radial_laplacian(f: &TermSum) -> TermSum {
    let d1 = radial_diff(f);
    let d2 = radial_diff(&d1);
    let n = f.dimension() as i64;
    d2.add(&d1.shift_r(-1).scale(&qi(n - 1)))
}

/// `Delta^m f`, followed by one more `d/dr` when `odd` (the signed radial
/// component of `grad Delta^m f`).
pub fn polyharmonic(f: &TermSum, m: u32, odd: bool) -> TermSum {
    let mut g = f.clone();
    for _ in 0..m {
        g = radial_laplacian(&g);
    }
    if odd {
        g = radial_diff(&g);
    }
    g
}
