use proptest::prelude::*;
use rellich::exact::{
    chain_constant_d, davies_hinz_constant, gap_analysis, hardy_chain_product, ProblemParams,
};
use rellich::harness::*;
use rellich::quadrature::{first_derivative_profile, integrate_profile, LogWeight};
use rellich::rational::{fmt, q, qi, to_f64, Q};
use rellich::Error;

const TOL: f64 = 1e-11;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn u(seed: u64, degree: u32, order: u32) -> TestFunction {
    random_test_function(seed, degree, order, false).unwrap()
}

#[test]
fn test_functions_are_seed_deterministic() {
    let a = random_test_function(1, 2, 2, false).unwrap();
    let b = random_test_function(1, 2, 2, false).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, random_test_function(2, 2, 2, false).unwrap());
    assert!(a.poly.iter().all(|c| (c * qi(4)).is_integer() && *c <= qi(2) && *c >= qi(-2)));
    assert!(matches!(random_test_function(1, 2, 0, false), Err(Error::OutOfRange(_))));
}

#[test]
fn test_function_vanishes_to_boundary_order() {
    for b in 1..=4 {
        let f = u(9, 2, b).profile(4);
        // u(R - h) ~ c h^b
        let (h1, h2) = (1e-3, 5e-4);
        let v1 = f.evaluate(1.0 - h1).unwrap();
        let v2 = f.evaluate(1.0 - h2).unwrap();
        let order = (v1 / v2).abs().ln() / (h1 / h2).ln();
        assert!((order - b as f64).abs() < 1e-2, "b = {b}: observed order {order}");
    }
}

#[test]
fn origin_cutoff_support() {
    let w = random_test_function(5, 3, 2, true).unwrap();
    let f = w.profile(3);
    for r in [1e-6, 0.01, 0.1, 0.1249] {
        assert_eq!(f.evaluate(r).unwrap(), 0.0, "r = {r}");
    }
    assert!(f.evaluate(0.125).unwrap().abs() < 1e-20);
    let body = TestFunction { origin_cutoff: None, ..w.clone() }.profile(3);
    for r in [0.25, 0.5, 0.9] {
        assert!(rel(f.evaluate(r).unwrap(), body.evaluate(r).unwrap()) < 1e-13);
    }
}

#[test]
fn test_function_json_round_trip() {
    let w = random_test_function(5, 3, 2, true).unwrap().with_radius(q(7, 2));
    let s = serde_json::to_string(&w).unwrap();
    let back: TestFunction = serde_json::from_str(&s).unwrap();
    assert_eq!(back, w);
    assert_eq!(serde_json::to_string(&back).unwrap(), s);
}

fn all_margins(f: &TestFunction, g: &TestFunction) -> Vec<(f64, Margin)> {
    let (p2, p3) = (qi(2), q(3, 2));
    vec![
        (2.0, check_new_hardy(f, 4, &p2, TOL).unwrap()),
        (1.5, check_gh(f, 5, &p3, &q(1, 2), &q(1, 4), TOL).unwrap()),
        (1.5, check_lap_hardy(f, 5, &p3, &qi(1), &qi(0), TOL).unwrap()),
        (2.0, check_lap_hardy2(f, 5, TOL).unwrap()),
        (2.0, check_gene_main(f, 9, &p2, GeneVariant::I, 1, &qi(1), TOL).unwrap()),
        (2.0, check_gene_main(f, 9, &p2, GeneVariant::II, 1, &qi(1), TOL).unwrap()),
        (2.0, check_gene_main(f, 9, &p2, GeneVariant::III, 1, &qi(1), TOL).unwrap()),
        (2.0, check_gene_main(f, 9, &p2, GeneVariant::IV, 1, &qi(1), TOL).unwrap()),
        (2.0, check_davies_hinz(f, 7, 1, &p2, &qi(5), TOL).unwrap()),
        (1.5, check_musina(f, 4, &p3, &qi(-1), TOL).unwrap()),
        (1.5, check_h1to0(f, 4, &p3, &qi(1), TOL).unwrap()),
        (1.5, check_1dim_hardy(g, &p3, &qi(3), TOL).unwrap()),
        (2.0, check_nonsharp_critical(f, &ProblemParams::critical(4, 2).unwrap().with_a(3.0), TOL).unwrap()),
        (2.0, check_lim_ineq(f, 4, &qi(1), TOL).unwrap()),
    ]
}

#[test]
fn margins_are_p_homogeneous() {
    let f = u(11, 2, 3);
    let g = random_test_function(12, 2, 2, true).unwrap();
    let c = qi(10);
    let base = all_margins(&f, &g);
    let scaled = all_margins(&f.scale(&c), &g.scale(&c));
    for ((p, m0), (_, m1)) in base.iter().zip(&scaled) {
        let factor = 10f64.powf(*p);
        assert!(rel(m1.lhs, factor * m0.lhs) < 1e-12, "{}: lhs", m0.inequality);
        assert!(rel(m1.rhs, factor * m0.rhs) < 1e-12, "{}: rhs", m0.inequality);
        assert!(m0.passes(), "{} fails: {m0:?}", m0.inequality);
        assert!(m0.quad_error >= 0.0);
    }
}

#[test]
fn nscr_lhs_decreases_with_dilation() {
    for seed in 0..10 {
        let f = u(seed, 2, 2);
        let base = ProblemParams::critical(4, 2).unwrap();
        let a_exp = (to_f64(&base.gamma) / 4.0).exp();
        let ms: Vec<Margin> =
            [1.0, a_exp, 10.0].iter().map(|&a| check_nonsharp_critical(&f, &base.with_a(a), TOL).unwrap()).collect();
        for w in ms.windows(2) {
            assert!(w[1].lhs <= w[0].lhs, "seed {seed}: lhs grew with a");
            assert!(w[1].slack >= w[0].slack);
            assert_eq!(w[1].rhs, w[0].rhs);
        }
        assert!(ms.iter().all(Margin::passes));
    }
    assert!(check_nonsharp_critical(&u(0, 1, 2), &ProblemParams::critical(4, 2).unwrap().with_a(1.0), TOL).is_ok());
}

#[test]
fn vanishing_constants_give_trivial_margins() {
    let f = u(3, 2, 2);
    // beta = 1 - p kills both terms on the left
    let m = check_gh(&f, 5, &q(3, 2), &qi(0), &q(-1, 2), TOL).unwrap();
    assert_eq!(m.lhs, 0.0);
    assert!(m.rhs > 0.0);
    // a = p - 1
    let g = random_test_function(3, 2, 2, true).unwrap();
    let m = check_1dim_hardy(&g, &q(5, 2), &q(3, 2), TOL).unwrap();
    assert_eq!(m.lhs, 0.0);
    // p = N: the remainder of the new Hardy inequality drops out
    let a = check_new_hardy(&f, 3, &qi(3), TOL).unwrap();
    let b = check_gh(&f, 3, &qi(3), &qi(0), &qi(0), TOL).unwrap();
    assert_eq!(a.lhs, b.lhs);
}

#[test]
fn new_hardy_constant_and_remainder() {
    // lhs = ((p-1)/p)^p I[|u|^p r^-p L^-p] + (N-p)((p-1)/p)^{p-1} I[|u|^p r^-p L^{1-p}]
    let f = u(21, 3, 2);
    let (n, p) = (5u32, 2.0);
    let prof = f.profile(n);
    let i1 = integrate_profile(&prof, p, n as f64 - p, LogWeight::power(-p), 1e-12).unwrap().value;
    let i2 = integrate_profile(&prof, p, n as f64 - p, LogWeight::power(1.0 - p), 1e-12).unwrap().value;
    let d1 = first_derivative_profile(&prof);
    let rhs = integrate_profile(&d1, p, n as f64, LogWeight::none(), 1e-12).unwrap().value;
    let m = check_new_hardy(&f, n, &qi(2), 1e-12).unwrap();
    assert!(rel(m.lhs, 0.25 * i1 + 3.0 * 0.5 * i2) < 1e-10);
    assert!(rel(m.rhs, rhs) < 1e-10);
}

#[test]
fn musina_and_h1to0_constants_at_zero_delta() {
    let f = u(4, 2, 2);
    for n in [3u32, 5, 8] {
        let prof = f.profile(n);
        let nf = n as f64;
        let d1 = first_derivative_profile(&prof);
        // |N - N/2|^2 = N^2/4
        let grad = integrate_profile(&d1, 2.0, nf - 2.0, LogWeight::none(), 1e-12).unwrap().value;
        let m = check_musina(&f, n, &qi(2), &qi(0), 1e-12).unwrap();
        assert!(rel(m.lhs, nf * nf / 4.0 * grad) < 1e-10);
        // classical Hardy ((N-p)/p)^p
        let p = 1.5;
        let mass = integrate_profile(&prof, p, nf - p, LogWeight::none(), 1e-12).unwrap().value;
        let m = check_h1to0(&f, n, &q(3, 2), &qi(0), 1e-12).unwrap();
        assert!(rel(m.lhs, ((nf - p) / p).powf(p) * mass) < 1e-10);
    }
}

#[test]
fn chain_constant_d_factors_through_davies_hinz() {
    // D = (Np - N + alpha + 2(m-1)p)/p * (p-1)/p / C(N, m-1, p, 2(m-1)p + alpha)
    for (n, m, p) in [(9u32, 1u32, q(2, 1)), (13, 2, q(2, 1)), (14, 2, q(5, 2)), (20, 3, q(3, 2)), (11, 2, q(7, 4))] {
        let nq = qi(n as i64);
        let lo = qi(2) * (qi(1) - &p);
        let hi = &nq - qi(2 * m as i64) * &p;
        let mut alpha = hi.clone();
        while alpha > lo {
            let d = chain_constant_d(n, m, &p, &alpha).unwrap();
            let beta = qi(2 * (m as i64 - 1)) * &p + &alpha;
            let c = davies_hinz_constant(n, m - 1, &p, &beta).unwrap();
            let expect = (&nq * &p - &nq + &alpha + qi(2 * (m as i64 - 1)) * &p) / &p * (&p - qi(1)) / &p / c.base();
            assert_eq!(d.base(), &expect, "N={n} m={m} p={} alpha={}", fmt(&p), fmt(&alpha));
            alpha -= q(1, 2);
        }
    }
}

#[test]
fn gene_main_first_variant_constant_at_the_critical_exponent() {
    // alpha = 0, p = N/k, k = 2m: the remainder factor N - kp - alpha vanishes and
    // lhs = (prod_{j=1}^{2m} (jp - 1)/p)^p I[|u|^p r^-N L^-N]
    for (n, m) in [(4u32, 1u32), (8, 1), (8, 2), (12, 2), (12, 3)] {
        let k = 2 * m;
        let p = ProblemParams::critical(n, k).unwrap().p();
        let pf = to_f64(&p);
        let f = u(31, 1, k);
        let c = to_f64(&hardy_chain_product(&p, 1, k as i64)).powf(pf);
        let mass = integrate_profile(&f.profile(n), pf, 0.0, LogWeight::power(-(n as f64)), 1e-12).unwrap().value;
        let m0 = check_gene_main(&f, n, &p, GeneVariant::I, m, &qi(0), 1e-12).unwrap();
        assert!(rel(m0.lhs, c * mass) < 1e-10, "N={n} m={m}: {} vs {}", m0.lhs, c * mass);
        assert!(m0.passes());
    }
}

#[test]
fn gene_main_second_variant_single_factor_at_m1() {
    // m = 1: D = (p-1)(Np - N + alpha)/p^2
    for (n, p, alpha) in [(9u32, q(2, 1), q(1, 1)), (7, q(3, 2), q(-1, 2)), (12, q(5, 2), q(3, 4))] {
        let nq = qi(n as i64);
        let d = chain_constant_d(n, 1, &p, &alpha).unwrap();
        let expect = (&p - qi(1)) * (&nq * &p - &nq + &alpha) / (&p * &p);
        assert_eq!(d.base(), &expect);
    }
}

#[test]
fn parameter_windows_are_enforced() {
    let f = u(1, 2, 3);
    assert!(matches!(check_gh(&f, 4, &qi(2), &q(5, 2), &qi(0), TOL), Err(Error::OutOfRange(_))));
    let g = random_test_function(1, 2, 3, true).unwrap();
    assert!(check_gh(&g, 4, &qi(2), &q(5, 2), &qi(0), TOL).unwrap().passes());
    assert!(matches!(check_gh(&f, 4, &qi(2), &qi(0), &q(-3, 2), TOL), Err(Error::OutOfRange(_))));
    assert!(matches!(check_new_hardy(&f, 3, &qi(4), TOL), Err(Error::OutOfRange(_))));
    assert!(matches!(check_lap_hardy(&f, 4, &qi(2), &qi(4), &qi(0), TOL), Err(Error::OutOfRange(_))));
    assert!(check_gene_main(&f, 9, &qi(2), GeneVariant::II, 1, &q(-2, 1), TOL).is_err());
    assert!(check_gene_main(&f, 9, &qi(2), GeneVariant::I, 1, &q(11, 2), TOL).is_err());
    assert!(check_gene_main(&u(1, 2, 1), 9, &qi(2), GeneVariant::I, 1, &qi(0), TOL).is_err());
    assert!(check_davies_hinz(&f, 7, 1, &qi(2), &qi(2), TOL).is_err());
    assert!(check_musina(&f, 4, &qi(2), &qi(-4), TOL).is_err());
    assert!(check_h1to0(&f, 4, &qi(2), &qi(-2), TOL).is_err());
    assert!(check_1dim_hardy(&f, &qi(2), &qi(1), TOL).is_err());
    assert!(check_lim_ineq(&f, 2, &qi(1), TOL).is_err());
    assert!(check_nonsharp_critical(&f, &ProblemParams::critical(4, 2).unwrap().with_gamma(qi(3)), TOL).is_err());
}

#[test]
fn lim_ineq_instances_match_the_two_weight_hardy_inequality() {
    // p = alpha = N/2, beta = A + 1 - N/2; the remainder factor N - p - alpha vanishes
    for n in [4u32, 6, 8] {
        let nq = qi(n as i64);
        let half = &nq / qi(2);
        for a in [&half - qi(1), &nq - qi(1)] {
            let f = u(n as u64, 2, 3);
            let lim = check_lim_ineq(&f, n, &a, 1e-12).unwrap();
            let gh = check_gh(&f, n, &half, &half, &(&a + qi(1) - &half), 1e-12).unwrap();
            assert!(rel(lim.lhs, gh.lhs) < 1e-12 && rel(lim.rhs, gh.rhs) < 1e-12, "N={n} A={}", fmt(&a));
            assert!(lim.passes());
        }
    }
}

#[test]
fn chain_constants_at_dimension_eight() {
    let c = ChainConstants::new(8);
    assert_eq!(c.two_to_one, qi(16));
    assert_eq!(c.rellich_vector, qi(25));
    assert_eq!(c.log_hardy, q(1, 4));
    assert_eq!(c.curl_free, qi(77));
    assert_eq!(c.curl_free_radial(), qi(144));
    assert_eq!(c.musina_step, qi(36));
    assert_eq!(c.davies_hinz_step, qi(64));
    // the Davies-Hinz step is C(8, 1, 2, 4)^{-2}
    let dh = davies_hinz_constant(8, 1, &qi(2), &qi(4)).unwrap();
    assert_eq!(c.davies_hinz_step, qi(1) / (dh.base() * dh.base()));
    let gap = gap_analysis(2).unwrap();
    assert_eq!(fmt(&c.earlier_product()), gap.a_squared);
    assert_eq!(fmt(&c.present_product()), gap.r_rad);
    assert_eq!(c.earlier_product(), qi(100));
    assert_eq!(c.present_product(), qi(576));
}

#[test]
fn chain_margins_hold_on_samples() {
    for seed in 0..8 {
        let f = u(seed, 2, 4 + (seed % 2) as u32);
        let ms = gap_chain_check(&f, 1e-12).unwrap();
        assert_eq!(ms.len(), 10);
        for m in &ms {
            assert!(m.passes(), "seed {seed}: {m:?}");
        }
        // the curl-free step is at least as good as 77 and the radial one refines it
        let q77 = ms[3].rhs / (ms[3].lhs / 77.0);
        assert!(q77 >= 144.0 * (1.0 - 1e-10), "seed {seed}: quotient {q77}");
    }
    assert!(gap_chain_check(&u(0, 1, 3), TOL).is_err());
}

#[test]
fn transform_identities_for_the_gaussian() {
    // w = e^{-t^2}, N = 5, p = 2: Delta w = (4t^2 - 10) e^{-t^2}
    // int (4t^2-10)^2 t^4 e^{-2t^2} dt = (16 * 105/512 - 80 * 15/128 + 100 * 3/32) sqrt(pi/2)
    let s = (std::f64::consts::PI / 2.0).sqrt();
    let lap = (16.0 * 105.0 / 512.0 - 80.0 * 15.0 / 128.0 + 100.0 * 3.0 / 32.0) * s;
    let pot = 0.5 * s;
    for alpha in [alpha_extremal(5, 2.0), alpha_unweighted(5, 2.0), 0.4, 2.5] {
        for big_r in [1.0, 3.0] {
            let r = transform_equivalence(&WSpec::gaussian(), 5, 2.0, alpha, big_r, 1e-12).unwrap();
            assert!(rel(r.laplacian_whole_space, lap) < 1e-12);
            assert!(rel(r.potential_whole_space, pot) < 1e-12);
            assert!(r.laplacian_rel_error < 1e-8, "alpha {alpha}: {r:?}");
            assert!(r.potential_rel_error < 1e-8, "alpha {alpha}: {r:?}");
            assert!(r.quotient_rel_diff < 1e-8);
            assert!(r.margin_whole_space.passes() && r.margin_ball.passes());
        }
    }
    assert_eq!(alpha_extremal(5, 2.0), 1.0);
    assert!(transform_beta(5, 2.0, alpha_unweighted(5, 2.0)).abs() < 1e-15);
    assert!(transform_beta(7, 1.5, alpha_unweighted(7, 1.5)).abs() < 1e-15);
}

#[test]
fn transform_rejects_excluded_parameters() {
    let w = WSpec::gaussian();
    assert!(transform_equivalence(&w, 5, 1.0, 1.0, 1.0, TOL).is_err());
    assert!(transform_equivalence(&w, 5, 2.5, 1.0, 1.0, TOL).is_err());
    assert!(transform_equivalence(&w, 5, 2.0, 0.0, 1.0, TOL).is_err());
    assert!(transform_equivalence(&WSpec { poly: vec![0.0] }, 5, 2.0, 1.0, 1.0, TOL).is_err());
}

#[test]
fn sampled_transform_cases_hold() {
    let cases = sample_transform_cases(42, 10);
    assert_eq!(cases[0].alpha, alpha_extremal(cases[0].n, cases[0].p));
    assert_eq!(cases[1].alpha, alpha_unweighted(cases[1].n, cases[1].p));
    for c in &cases {
        assert!(c.p > 1.0 && 2.0 * c.p < c.n as f64);
        let r = transform_equivalence(&c.w, c.n, c.p, c.alpha, 1.0, 1e-12).unwrap();
        assert!(r.max_rel_error() < 1e-8, "{c:?}: {r:?}");
    }
}

#[test]
fn dilation_exponent_vanishes_for_the_critical_choices() {
    let f = u(7, 2, 3);
    for &(n, k, gamma, a) in &[(4u32, 2u32, 2i64, -0.5), (4, 2, 4, -0.75 * 2.0), (6, 2, 6, -5.0 / 3.0)] {
        let params = ProblemParams::critical(n, k).unwrap().with_gamma(qi(gamma));
        assert!(log_term_exponent(params.p_f64(), gamma as f64, a).abs() < 1e-15);
        let base = scaling_identity_check(&f, &params, 1.0, a, 1e-13).unwrap();
        for lambda in [0.125, 0.5, 2.0, 8.0] {
            let r = scaling_identity_check(&f, &params, lambda, a, 1e-13).unwrap();
            assert!(r.log_term.rel_error < 1e-10);
            // exponent zero: the weighted mass does not move
            assert!(rel(r.log_term.computed, base.log_term.computed) < 1e-10);
            assert!(r.lap_identity.unwrap().rel_error < 1e-10);
            assert!(r.lap_bound.unwrap().passes());
        }
    }
}

#[test]
fn identity_dilation_is_trivial() {
    let f = u(8, 1, 2);
    let params = ProblemParams::critical(4, 2).unwrap().with_gamma(qi(3));
    let r = scaling_identity_check(&f, &params, 1.0, 0.3, 1e-13).unwrap();
    assert!(r.log_term.rel_error < 1e-13);
    assert!(r.first_order.rel_error < 1e-12);
    assert!(r.lap_identity.unwrap().rel_error < 1e-13);
    assert!(scaling_identity_check(&f, &params, 0.0, 0.3, TOL).is_err());
    assert!(scaling_identity_check(&f, &params.with_gamma(qi(1)), 2.0, 0.3, TOL).is_err());
}

#[test]
fn first_order_quotient_is_dilation_invariant_only_at_p_equal_n() {
    let f = u(13, 2, 2);
    for n in [2u32, 3, 5] {
        let params = ProblemParams::critical(n, 1).unwrap();
        for lambda in [0.125, 0.5, 2.0, 8.0] {
            let r = first_order_invariance(&f, &params, lambda, 1e-13).unwrap();
            assert!(r.rel_error < 1e-8, "N = p = {n}, lambda {lambda}: {r:?}");
        }
    }
    let sub = ProblemParams::critical(4, 2).unwrap();
    assert!(first_order_invariance(&f, &sub, 2.0, 1e-13).unwrap().rel_error > 1e-3);
}

#[test]
fn harness_is_deterministic_and_serializes() {
    let cfg = HarnessConfig { cases: 5, ..Default::default() };
    let a = run_harness(&cfg).unwrap();
    let b = run_harness(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.summaries.len(), InequalityId::ALL.len());
    assert!(a.all_passed);
    let s = serde_json::to_string_pretty(&a).unwrap();
    let back: HarnessReport = serde_json::from_str(&s).unwrap();
    assert_eq!(serde_json::to_string_pretty(&back).unwrap(), s);
    let csv = a.to_csv();
    assert!(csv.starts_with("inequality,cases,passed,"));
    assert_eq!(csv.lines().count(), 1 + InequalityId::ALL.len());
    for id in InequalityId::ALL {
        assert_eq!(id.name().parse::<InequalityId>().unwrap(), id);
    }
}

fn lattice_q(n: i64) -> Q {
    q(n, 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gh_holds_on_random_parameters(seed in 0u64..1000, n in 2u32..8, pn in 5i64..16, bn in 0i64..12, an in -12i64..0) {
        let p = lattice_q(pn);
        let beta = qi(1) - &p + lattice_q(bn);
        let alpha = qi(n as i64) - &p + lattice_q(an);
        let b = ((&beta + &p - qi(1)) / &p).floor().to_integer().try_into().unwrap_or(0i64) as u32 + 1;
        let f = u(seed, 2, b.max(1));
        let m = check_gh(&f, n, &p, &alpha, &beta, TOL).unwrap();
        prop_assert!(m.passes(), "{:?}", m);
    }

    #[test]
    fn margins_scale_homogeneously(seed in 0u64..1000, c in 1i64..40) {
        let f = u(seed, 2, 2);
        let s = q(c, 4);
        let m0 = check_lap_hardy2(&f, 6, TOL).unwrap();
        let m1 = check_lap_hardy2(&f.scale(&s), 6, TOL).unwrap();
        let factor = to_f64(&s).powi(2);
        prop_assert!(rel(m1.lhs, factor * m0.lhs) < 1e-12);
        prop_assert!(rel(m1.rhs, factor * m0.rhs) < 1e-12);
    }
}
