use num_traits::Zero;
use proptest::prelude::*;
use rellich::logterm::*;
use rellich::rational::{q, qi, Q};

fn log_alpha(n: u32) -> TermSum {
    TermSum::log_power(n, qi(1), 0)
}

#[test]
fn diff_of_log_power() {
    let d = radial_diff(&log_alpha(5));
    assert_eq!(d.len(), 1);
    let c = d.get((-1, 1, -1)).unwrap();
    assert_eq!(c, &AlphaPoly::from_coeffs(vec![qi(0), qi(-1)]));
}

#[test]
fn diff_of_constant_is_zero() {
    let one = TermSum::constant(4, qi(1), qi(1));
    assert!(radial_diff(&one).is_zero());
}

#[test]
fn diff_of_weighted_log_power() {
    // r^{-A} L^alpha with A = 3: d/dr = r^{-A-1}(-A L^alpha - alpha L^{alpha-1})
    let f = TermSum::monomial(6, qi(1), AlphaPoly::one(), (-3, 1, 0));
    let d = radial_diff(&f);
    assert_eq!(d.get((-4, 1, 0)).unwrap(), &AlphaPoly::constant(qi(-3)));
    assert_eq!(d.get((-4, 1, -1)).unwrap(), &AlphaPoly::from_coeffs(vec![qi(0), qi(-1)]));
}

#[test]
fn laplacian_of_log_power() {
    for n in 3..9u32 {
        let l = radial_laplacian(&log_alpha(n));
        assert_eq!(l.get((-2, 1, -2)).unwrap(), &AlphaPoly::falling(0, 1));
        let expect = AlphaPoly::from_coeffs(vec![qi(0), qi(-(n as i64 - 2))]);
        assert_eq!(l.get((-2, 1, -1)).unwrap(), &expect);
        assert_eq!(l.len(), 2);
    }
}

#[test]
fn laplacian_of_r_squared() {
    let f = TermSum::laurent(7, qi(1), 2, &[qi(1)]);
    assert_eq!(radial_laplacian(&f), TermSum::constant(7, qi(1), qi(14)));
}

#[test]
fn laplacian_of_weighted_log_power_three_terms() {
    // Delta[r^{-A} L^a] = r^{-A-2}[a(a-1)L^{a-2} - a(N-2-2A)L^{a-1} - A(N-2-A)L^a]
    let (n, a) = (7i64, 2i64);
    let f = TermSum::monomial(n as u32, qi(1), AlphaPoly::one(), (-a, 1, 0));
    let l = radial_laplacian(&f);
    assert_eq!(l.get((-a - 2, 1, -2)).unwrap(), &AlphaPoly::falling(0, 1));
    assert_eq!(l.get((-a - 2, 1, -1)).unwrap(), &AlphaPoly::from_coeffs(vec![qi(0), qi(-(n - 2 - 2 * a))]));
    assert_eq!(l.get((-a - 2, 1, 0)).unwrap(), &AlphaPoly::constant(qi(-a * (n - 2 - a))));
}

#[test]
fn polyharmonic_composes() {
    let f = TermSum::monomial(9, qi(2), AlphaPoly::alpha_plus(3), (1, 1, 2))
        .add(&TermSum::laurent(9, qi(2), -1, &[qi(3), qi(0), q(1, 2)]));
    let twice = polyharmonic(&polyharmonic(&f, 1, false), 1, false);
    assert_eq!(twice, polyharmonic(&f, 2, false));
    let odd = polyharmonic(&f, 2, true);
    assert_eq!(odd, radial_diff(&twice));
}

#[test]
fn table_small_entries() {
    for n in 2..20u32 {
        let t = coeff_table(n, 2).unwrap();
        let ni = n as i64;
        assert_eq!(t.c(1, 0), &qi(1));
        assert_eq!(t.c(1, 1), &qi(ni - 2));
        assert_eq!(t.c(2, 1), &qi(2 * ni - 8));
        assert_eq!(t.c(2, 2), &qi(ni * ni - 10 * ni + 20));
    }
}

#[test]
fn table_d_rows() {
    let t = coeff_table(11, 4).unwrap();
    for l in 1..=4u32 {
        assert_eq!(t.d(l, 0), &qi(1));
        let two_l = qi(2 * l as i64);
        for j in 1..2 * l {
            assert_eq!(t.d(l, j), &(t.c(l, j) - &two_l * t.c(l, j - 1)));
        }
        assert_eq!(t.d(l, 2 * l), &(-&two_l * t.c(l, 2 * l - 1)));
    }
}

#[test]
fn top_coefficient_closed_form() {
    // independent route: C_{m,2m-1} = -2(m-1)(N-2m) C_{m-1,2m-3}, C_{1,1} = N-2
    for n in 2..14i64 {
        let t = coeff_table(n as u32, 8).unwrap();
        let mut c = qi(n - 2);
        for m in 1..=8i64 {
            if m > 1 {
                c = qi(-2 * (m - 1) * (n - 2 * m)) * c;
            }
            assert_eq!(t.c(m as u32, 2 * m as u32 - 1), &c, "N={n} m={m}");
        }
    }
}

#[test]
fn verify_table_all_small() {
    for n in 5..=16u32 {
        let r = verify_table(n, 5).unwrap();
        assert!(r.passed, "{r:?}");
    }
    assert!(verify_table(8, 2).unwrap().passed);
    assert!(verify_table(5, 1).unwrap().passed);
}

#[test]
fn verify_table_detects_corruption() {
    let mut t = coeff_table(8, 3).unwrap();
    *t.c.get_mut(&(3, 2)).unwrap() += qi(1);
    let r = verify_with(&t);
    assert!(!r.passed);
    let mm = r.first_mismatch.unwrap();
    assert_eq!((mm.m, mm.j, mm.display.as_str()), (3, 2, "even"));
}

#[test]
fn unsigned_display_disagrees_with_log_r_over_r_derivative() {
    // With L = log(R/r), odd-j terms carry (-1)^j; the unsigned form fails at j = 1.
    let l = radial_laplacian(&log_alpha(6));
    let unsigned = AlphaPoly::from_coeffs(vec![qi(0), qi(6 - 2)]);
    assert_ne!(l.get((-2, 1, -1)).unwrap(), &unsigned);
}

#[test]
fn table_json_round_trip() {
    let t = coeff_table(8, 3).unwrap();
    let s = serde_json::to_string_pretty(&t).unwrap();
    assert!(s.contains("\"C[2][2]\": \"4\""));
    let back: CoeffTable = serde_json::from_str(&s).unwrap();
    assert_eq!(back, t);
    assert_eq!(serde_json::to_string_pretty(&back).unwrap(), s);
}

#[test]
fn evaluate_examples() {
    let f = log_alpha(4);
    let e = std::f64::consts::E;
    assert!((f.evaluate(&qi(2), 1.0 / e).unwrap() - 1.0).abs() < 1e-15);
    let l = radial_laplacian(&f);
    for r in [0.1, 0.5, 0.9] {
        let v = l.evaluate(&qi(1), r).unwrap();
        assert!((v - (-(4.0 - 2.0) / (r * r))).abs() < 1e-12 / (r * r));
    }
    let near = f.evaluate(&q(1, 2), 1.0 - 1e-12).unwrap();
    assert!(near > 0.0 && near < 2e-6);
    assert!(f.evaluate(&qi(1), 1.0).is_err());
    assert!(f.evaluate(&qi(1), 0.0).is_err());
}

fn fd_stencil(f: &dyn Fn(f64) -> f64, r: f64, h: f64) -> (f64, f64) {
    let (fp2, fp1, f0, fm1, fm2) = (f(r + 2.0 * h), f(r + h), f(r), f(r - h), f(r - 2.0 * h));
    let d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
    let d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    (d1, d2)
}

/// Five-point stencils at h and 2h combined by one Richardson step.
fn fd_laplacian(f: &dyn Fn(f64) -> f64, r: f64, n: u32) -> (f64, f64) {
    let h = 2e-3 * r.min(1.0 - r);
    let (a1, a2) = fd_stencil(f, r, h);
    let (b1, b2) = fd_stencil(f, r, 2.0 * h);
    let d1 = (16.0 * a1 - b1) / 15.0;
    let d2 = (16.0 * a2 - b2) / 15.0;
    // roundoff scale of the stencil: |f|/h^2 * eps is tiny next to these terms
    (d2 + (n as f64 - 1.0) * d1 / r, f(r).abs() / (r * r) + d2.abs() + (n as f64 - 1.0) * (d1 / r).abs())
}

fn arb_sum() -> impl Strategy<Value = TermSum> {
    prop::collection::vec((-3i64..3, 0i64..2, -2i64..3, -5i64..6, 1i64..4), 1..5).prop_map(|ts| {
        let mut s = TermSum::zero(6, qi(1));
        for (rp, e, t, c, d) in ts {
            s.add_term((rp, e, t), AlphaPoly::from_coeffs(vec![q(c, d), q(1, d)]));
        }
        s
    })
}

proptest! {
    #[test]
    fn laplacian_matches_finite_differences(
        f in arb_sum(),
        an in -20i64..20,
        r in 0.15f64..0.85,
    ) {
        let alpha = q(an, 7);
        let exact = radial_laplacian(&f).evaluate(&alpha, r).unwrap();
        let g = |x: f64| f.evaluate(&alpha, x).unwrap();
        let (fd, scale) = fd_laplacian(&g, r, 6);
        prop_assert!((fd - exact).abs() <= 1e-8 * scale.max(exact.abs()), "fd {fd} exact {exact}");
    }

    #[test]
    fn diff_is_linear(f in arb_sum(), g in arb_sum(), c in -5i64..5) {
        let lhs = radial_diff(&f.add(&g.scale(&qi(c))));
        let rhs = radial_diff(&f).add(&radial_diff(&g).scale(&qi(c)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn diff_obeys_product_rule(f in arb_sum(), g in arb_sum()) {
        let lhs = radial_diff(&f.mul(&g));
        let rhs = radial_diff(&f).mul(&g).add(&f.mul(&radial_diff(&g)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn no_zero_terms_stored(f in arb_sum()) {
        let d = polyharmonic(&f.sub(&f.scale(&q(1, 2))), 1, true);
        for t in d.terms() {
            prop_assert!(!t.coeff.is_zero());
        }
        prop_assert!(f.sub(&f).is_zero());
        let _ = Q::zero();
    }
}
