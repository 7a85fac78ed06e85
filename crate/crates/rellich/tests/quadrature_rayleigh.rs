use proptest::prelude::*;
use rellich::exact::ProblemParams;
use rellich::quadrature::*;
use rellich::rational::q;
use rellich::Error;

fn params(n: u32, k: u32, gamma: (i64, i64)) -> ProblemParams {
    ProblemParams::critical(n, k).unwrap().with_gamma(q(gamma.0, gamma.1))
}

#[test]
fn gauss_kronrod_is_exact_on_polynomials() {
    for deg in 0..=29 {
        let f = |x: f64| x.powi(deg);
        let (v, _) = qk21(&f, 0.0, 1.0);
        let exact = 1.0 / (deg as f64 + 1.0);
        assert!((v - exact).abs() < 1e-14, "degree {deg}: {v} vs {exact}");
    }
    let r = integrate_finite(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-13, 0.0);
    assert!((r.value - 2.0).abs() < 1e-13);
    assert!(r.converged);
}

#[test]
fn log_power_tail_matches_antiderivative() {
    // int_0^{R/2} (log R/r)^{-1-p eps} dr/r = (p eps)^{-1} (log 2)^{-p eps}
    for &(p, eps) in &[(2.0, 0.1), (2.0, 0.01), (3.0, 0.001), (1.5, 0.3)] {
        let s: f64 = -1.0 - p * eps;
        let f = |t: f64| t.powf(s);
        let got = integrate_tail(&f, 2f64.ln(), Tail::Power { exponent: s }, 1e-12).unwrap();
        let exact = (2f64.ln()).powf(-p * eps) / (p * eps);
        assert!((got.value / exact - 1.0).abs() < 1e-10, "p={p} eps={eps}: {} vs {exact}", got.value);
    }
}

#[test]
fn head_singularity_matches_antiderivative() {
    for &nu in &[0.5, 0.01, 2.0] {
        let e = nu - 1.0;
        let f = |t: f64| t.powf(e) * (1.0 + t);
        let got = integrate_head(&f, 0.3, e, 1e-12).unwrap();
        let exact = 0.3f64.powf(nu) / nu + 0.3f64.powf(nu + 1.0) / (nu + 1.0);
        assert!((got.value / exact - 1.0).abs() < 1e-10, "nu={nu}: {} vs {exact}", got.value);
    }
}

#[test]
fn divergent_integrals_are_flagged() {
    let f = |t: f64| 1.0 / t;
    assert!(matches!(integrate_tail(&f, 1.0, Tail::Power { exponent: -1.0 }, 1e-10), Err(Error::Divergent(_))));
    assert!(matches!(integrate_head(&f, 1.0, -1.0, 1e-10), Err(Error::Divergent(_))));
    // psi_eps with gamma above N: infinite weighted mass at the boundary.
    let p = params(4, 2, (9, 2));
    let u = make_psi_eps(&p, 0.1, &CutoffSpec::standard(&p)).unwrap();
    assert!(matches!(weighted_mass(&u, &p, 1e-10), Err(Error::Divergent(_))));
    assert!(energy(&u, &p, 1e-10).is_ok());
}

#[test]
fn profile_values_match_definitions() {
    let p = params(4, 2, (2, 1));
    let c = CutoffSpec::standard(&p);
    let eps = 0.1;
    let phi = make_phi_eps(&p, eps, &c).unwrap();
    let psi = make_psi_eps(&p, eps, &c).unwrap();
    for &r in &[0.01f64, 0.2, 0.5] {
        let v = (1.0 / r).ln().powf(0.5 - eps);
        assert!((phi.evaluate(r).unwrap() / v - 1.0).abs() < 1e-13);
        assert_eq!(psi.evaluate(r).unwrap(), 0.0);
    }
    for &r in &[0.75f64, 0.9, 0.999] {
        assert!(phi.evaluate(r).unwrap().abs() < 1e-20);
        let v = (1.0 / r).ln().powf(1.5 + eps);
        assert!((psi.evaluate(r).unwrap() / v - 1.0).abs() < 1e-12);
    }
    assert!(matches!(make_phi_eps(&p, 0.6, &c), Err(Error::OutOfRange(_))));
    let h = make_psi_gamma_hardy(&p, 1.0).unwrap();
    let re = (-1.0f64).exp();
    assert!((h.evaluate(re * (1.0 - 1e-12)).unwrap() - 1.0).abs() < 1e-10);
    assert!((h.evaluate(re * (1.0 + 1e-12)).unwrap() - 1.0).abs() < 1e-10);
    assert!(h.evaluate(0.999999).unwrap() < 1e-5);
}

#[test]
fn profiles_are_continuous_at_breakpoints() {
    let p = params(6, 3, (2, 1));
    let c = CutoffSpec::standard(&p);
    let u = make_phi_eps(&p, 0.05, &c).unwrap();
    for order in 0..=3 {
        let d = kth_derivative_profile(&u, order).unwrap();
        for &t in &u.breakpoints_t() {
            let (a, b) = (d.evaluate_t(t * (1.0 - 1e-11)), d.evaluate_t(t * (1.0 + 1e-11)));
            assert!((a - b).abs() <= 1e-7 * (1.0 + a.abs()), "order {order} at t={t}: {a} vs {b}");
        }
    }
}

#[test]
fn kth_derivative_leading_terms() {
    // k = 2: Delta (log 1/r)^b = r^{-2} (b(b-1) t^{b-2} - (N-2) b t^{b-1}).
    let p = params(4, 2, (2, 1));
    let b = 0.5 - 0.05;
    let u = make_log_power(&p, b);
    let d = kth_derivative_profile(&u, 2).unwrap();
    for &r in &[1e-3f64, 0.1, 0.6] {
        let t: f64 = (1.0 / r).ln();
        let exact = (b * (b - 1.0) * t.powf(b - 2.0) - 2.0 * b * t.powf(b - 1.0)) / (r * r);
        assert!((d.evaluate(r).unwrap() / exact - 1.0).abs() < 1e-12);
    }
    // k = 3, N = 6: (Delta u)' = -r^{-3} (2g + g') with g = b(b-1)t^{b-2} - 4b t^{b-1}.
    let p = params(6, 3, (2, 1));
    let b = 0.5 - 0.05;
    let u = make_log_power(&p, b);
    let d = kth_derivative_profile(&u, 3).unwrap();
    for &r in &[1e-4f64, 0.1, 0.6] {
        let t: f64 = (1.0 / r).ln();
        let g = b * (b - 1.0) * t.powf(b - 2.0) - 4.0 * b * t.powf(b - 1.0);
        let gp = b * (b - 1.0) * (b - 2.0) * t.powf(b - 3.0) - 4.0 * b * (b - 1.0) * t.powf(b - 2.0);
        let exact = -(2.0 * g + gp) / r.powi(3);
        assert!((d.evaluate(r).unwrap() / exact - 1.0).abs() < 1e-12);
    }
    // Near the boundary the top log power dominates: prod_{i<k} (b - i) t^{b-k}.
    let p = params(8, 4, (8, 1));
    let b = 7.0 / 2.0 + 0.01;
    let u = make_log_power(&p, b);
    let d = kth_derivative_profile(&u, 4).unwrap();
    let t: f64 = 1e-7;
    let lead = b * (b - 1.0) * (b - 2.0) * (b - 3.0) * t.powf(b - 4.0);
    assert!((d.evaluate_t(t) / lead - 1.0).abs() < 1e-5);
}

#[test]
fn kth_derivative_rejects_insufficient_smoothness() {
    let p = params(6, 3, (2, 1));
    let mut c = CutoffSpec::standard(&p);
    c.smoothness_order = 2;
    assert!(make_phi_eps(&p, 0.1, &c).is_err());
}

/// Second-order radial data `(V, V', V'')` of `(log 1/r)^b`.
fn log_power_derivs(b: f64, r: f64) -> [f64; 3] {
    let t = (1.0 / r).ln();
    [
        t.powf(b),
        -b * t.powf(b - 1.0) / r,
        (b * (b - 1.0) * t.powf(b - 2.0) + b * t.powf(b - 1.0)) / (r * r),
    ]
}

/// `(S, S', S'')` of the seventh-degree smoothstep composed with `x = (r - 1/2) / (1/4)`.
fn smoothstep_derivs(r: f64) -> [f64; 3] {
    let x = (r - 0.5) * 4.0;
    let s = 35.0 * x.powi(4) - 84.0 * x.powi(5) + 70.0 * x.powi(6) - 20.0 * x.powi(7);
    let s1 = 140.0 * x.powi(3) - 420.0 * x.powi(4) + 420.0 * x.powi(5) - 140.0 * x.powi(6);
    let s2 = 420.0 * x.powi(2) - 1680.0 * x.powi(3) + 2100.0 * x.powi(4) - 840.0 * x.powi(5);
    [s, 4.0 * s1, 16.0 * s2]
}

fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = 0.5 * (f(a) + f(b));
    for i in 1..n {
        s += f(a + i as f64 * h);
    }
    s * h
}

/// Energy and mass for `(k, N, p) = (2, 4, 2)` from hand-derived closed forms:
/// exact antiderivatives on the pure log-power piece and a fine composite
/// trapezoid rule on the cutoff annulus `[1/2, 3/4]`.
fn oracle_quotient(phi_family: bool, b: f64, gamma: f64) -> f64 {
    let lap_sq = |r: f64| {
        let [v, v1, v2] = log_power_derivs(b, r);
        let [s, s1, s2] = smoothstep_derivs(r);
        let (c, c1, c2) = if phi_family { (1.0 - s, -s1, -s2) } else { (s, s1, s2) };
        let (u, u1, u2) = (v * c, v1 * c + v * c1, v2 * c + 2.0 * v1 * c1 + v * c2);
        let lap = u2 + 3.0 * u1 / r;
        (lap * lap * r.powi(3), u * u / (r * (1.0 / r).ln().powf(gamma)))
    };
    let n = 400_000;
    let e_mid = trapezoid(|r| lap_sq(r).0, 0.5, 0.75, n);
    let m_mid = trapezoid(|r| lap_sq(r).1, 0.5, 0.75, n);
    // On the pure piece r^4 |Delta V|^2 = (b(b-1) t^{b-2} - 2b t^{b-1})^2, integrated in t.
    let mono = [(b * b * (b - 1.0) * (b - 1.0), 2.0 * b - 4.0), (-4.0 * b * b * (b - 1.0), 2.0 * b - 3.0), (4.0 * b * b, 2.0 * b - 2.0)];
    let (lo, hi): (f64, f64) = (2f64.ln(), (4.0f64 / 3.0).ln());
    let anti = |c: f64, e: f64, x: f64| c * x.powf(e + 1.0) / (e + 1.0);
    let (e_pure, m_pure) = if phi_family {
        (
            mono.iter().map(|&(c, e)| -anti(c, e, lo)).sum::<f64>(),
            -anti(1.0, 2.0 * b - gamma, lo),
        )
    } else {
        (
            mono.iter().map(|&(c, e)| anti(c, e, hi)).sum::<f64>(),
            anti(1.0, 2.0 * b - gamma, hi),
        )
    };
    (e_mid + e_pure) / (m_mid + m_pure)
}

#[test]
fn sweep_rows_match_independent_oracle() {
    let eps = [0.2, 0.1, 0.05, 0.025];
    let p = params(4, 2, (2, 1));
    let rep = epsilon_sweep(Family::Phi, &p, &eps, &CutoffSpec::standard(&p), 1e-11).unwrap();
    for row in &rep.rows {
        let o = oracle_quotient(true, 0.5 - row.epsilon, 2.0);
        assert!((row.quotient / o - 1.0).abs() < 1e-8, "phi eps={}: {} vs {o}", row.epsilon, row.quotient);
    }
    assert!(rep.rows.windows(2).all(|w| w[1].quotient < w[0].quotient));
    let lim = rep.extrapolation.as_ref().unwrap().limit;
    assert!((lim - 1.0).abs() < 0.1, "phi limit {lim}");

    let p = params(4, 2, (4, 1));
    let rep = epsilon_sweep(Family::Psi, &p, &eps, &CutoffSpec::standard(&p), 1e-11).unwrap();
    for row in &rep.rows {
        let o = oracle_quotient(false, 1.5 + row.epsilon, 4.0);
        assert!((row.quotient / o - 1.0).abs() < 1e-8, "psi eps={}: {} vs {o}", row.epsilon, row.quotient);
    }
    assert!(rep.rows.windows(2).all(|w| w[1].quotient < w[0].quotient));
    let lim = rep.extrapolation.as_ref().unwrap().limit;
    assert!((lim - 0.5625).abs() < 0.06, "psi limit {lim}");
}

#[test]
fn collapse_below_the_window_decreases_then_diverges() {
    let p = params(4, 2, (3, 2));
    let eps = [0.45, 0.4, 0.35, 0.3, 0.27, 0.26, 0.1];
    let rep = epsilon_sweep(Family::Phi, &p, &eps, &CutoffSpec::standard(&p), 1e-10).unwrap();
    let finite: Vec<_> = rep.rows.iter().filter(|r| !r.mass_divergent).collect();
    assert_eq!(finite.len(), 6);
    assert!(finite.windows(2).all(|w| w[1].quotient < w[0].quotient));
    for row in &finite {
        let o = oracle_quotient(true, 0.5 - row.epsilon, 1.5);
        assert!((row.quotient / o - 1.0).abs() < 1e-8);
    }
    assert!(rep.rows.last().unwrap().mass_divergent);
    assert_eq!(rep.exact, Some(0.0));
}

#[test]
fn extrapolation_recovers_a_power_law() {
    let e = [0.04, 0.02, 0.01];
    let f = |x: f64| 3.0 + 5.0 * x.powf(1.3);
    let x = extrapolate(e, [f(e[0]), f(e[1]), f(e[2])]).unwrap();
    assert!((x.limit - 3.0).abs() < 1e-10);
    assert!((x.order - 1.3).abs() < 1e-10);
    assert!((x.coefficient - 5.0).abs() < 1e-8);
    assert!(extrapolate(e, [1.0, 2.0, 1.0]).is_none());
}

#[test]
fn sweep_rejects_bad_eps_lists() {
    let p = params(4, 2, (2, 1));
    let c = CutoffSpec::standard(&p);
    assert!(epsilon_sweep(Family::Phi, &p, &[0.1, 0.2], &c, 1e-10).is_err());
    assert!(epsilon_sweep(Family::Phi, &p, &[0.1, -0.2], &c, 1e-10).is_err());
    assert!(epsilon_sweep(Family::Phi, &p, &[], &c, 1e-10).is_err());
}

#[test]
fn tolerance_is_self_consistent() {
    let p = params(6, 3, (2, 1));
    let u = make_phi_eps(&p, 0.01, &CutoffSpec::standard(&p)).unwrap();
    let loose = rayleigh_quotient(&u, &p, 1e-6).unwrap();
    let tight = rayleigh_quotient(&u, &p, 1e-12).unwrap();
    assert!((loose.value / tight.value - 1.0).abs() < 1e-6);
    assert!(tight.abs_error() <= 1e-9 * tight.value);
}

#[test]
fn quotient_is_independent_of_radius() {
    for &(n, k, g) in &[(4, 2, 2), (4, 2, 4), (6, 3, 5)] {
        let p1 = params(n, k, (g, 1));
        let p2 = p1.with_radius(q(7, 2));
        let u1 = make_psi_eps(&p1, 0.05, &CutoffSpec::standard(&p1)).unwrap();
        let u2 = make_psi_eps(&p2, 0.05, &CutoffSpec::standard(&p2)).unwrap();
        let a = rayleigh_quotient(&u1, &p1, 1e-12).unwrap().value;
        let b = rayleigh_quotient(&u2, &p2, 1e-12).unwrap().value;
        assert!((a / b - 1.0).abs() < 1e-10, "N={n} k={k} gamma={g}: {a} vs {b}");
    }
}

#[test]
fn sweep_report_serializes() {
    let p = params(4, 2, (2, 1));
    let rep = epsilon_sweep(Family::Phi, &p, &[0.2, 0.1, 0.05], &CutoffSpec::standard(&p), 1e-10).unwrap();
    let s = serde_json::to_string(&rep).unwrap();
    let back: SweepReport = serde_json::from_str(&s).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), s);
    let csv = rep.to_csv();
    assert!(csv.starts_with("epsilon,quotient,quad_error,extrapolated\n"));
    assert_eq!(csv.lines().count(), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quotient_is_scale_invariant(eps in 0.01f64..0.4, k in 2u32..=4, psi in any::<bool>()) {
        let n = 2 * k;
        let p = if psi { params(n, k, (n as i64, 1)) } else { params(n, k, (2, 1)) };
        let c = CutoffSpec::standard(&p);
        let u = if psi { make_psi_eps(&p, eps, &c).unwrap() } else { make_phi_eps(&p, eps, &c).unwrap() };
        let base = rayleigh_quotient(&u, &p, 1e-12).unwrap().value;
        for s in [q(1, 3), q(7, 1)] {
            let v = rayleigh_quotient(&u.scale(&s), &p, 1e-12).unwrap().value;
            prop_assert!((v / base - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn energy_and_mass_are_positive(eps in 0.01f64..0.4, g in 2i64..=4) {
        let p = params(4, 2, (g, 1));
        let c = CutoffSpec::standard(&p);
        let u = make_phi_eps(&p, eps, &c).unwrap();
        let e = energy(&u, &p, 1e-10).unwrap();
        prop_assert!(e.value > 0.0 && e.abs_error_estimate >= 0.0);
        if let Ok(m) = weighted_mass(&u, &p, 1e-10) {
            prop_assert!(m.value > 0.0);
        }
    }
}
