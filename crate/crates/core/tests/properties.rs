use drzero::acceptance::brute_force_projection;
use drzero::baselines::{map_step, newton_step};
use drzero::basin::{estimate_rate, scan, GridSpec};
use drzero::douglas_rachford::{dr_inverse, dr_step, iterate, SelectionPolicy};
use drzero::lyapunov::{check_trajectory, Verdict};
use drzero::projection::project_graph;
use drzero::stability::{sherman_morrison_inverse, stability_report};
use drzero::{project_a, reflect_a, FunctionModel, NumericConfig, ProductPoint};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn cfg() -> NumericConfig {
    NumericConfig::default()
}

fn model(kind: u8, a: f64, b: f64) -> FunctionModel {
    match kind % 7 {
        0 => FunctionModel::linear(0.2 + 3.0 * a, 4.0 * b - 2.0).unwrap(),
        1 => FunctionModel::exponential(0.05 + a, 0.5 + 2.0 * b).unwrap(),
        2 => FunctionModel::power_norm(0.2 + a, 0.5 + 2.5 * b, 1).unwrap(),
        3 => FunctionModel::signed_power(0.2 + a, 0.3 + 2.5 * b).unwrap(),
        4 => FunctionModel::benoist(0.1 + 0.8 * a, 1.0).unwrap(),
        5 => FunctionModel::piecewise_nonconvex(1.2 + 2.0 * b).unwrap(),
        _ => FunctionModel::piecewise_convex(),
    }
}

fn smooth_model(kind: u8, a: f64, b: f64) -> FunctionModel {
    match kind % 3 {
        0 => FunctionModel::linear(0.2 + 3.0 * a, 4.0 * b - 2.0).unwrap(),
        1 => FunctionModel::exponential(0.05 + a, 0.5 + 2.0 * b).unwrap(),
        _ => FunctionModel::power_norm(0.2 + a, 2.0 + 2.0 * b, 1).unwrap(),
    }
}

fn inside(m: &FunctionModel, x: f64) -> f64 {
    let d = m.domain();
    x.clamp(d.lo.max(-1e300), d.hi.min(1e300))
}

fn point() -> impl Strategy<Value = ProductPoint> {
    (prop::collection::vec(-50.0..50.0f64, 1..4), -50.0..50.0f64).prop_map(|(x, r)| ProductPoint::new(x, r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn project_a_is_idempotent(z in point()) {
        let p = project_a(&z);
        prop_assert_eq!(project_a(&p), p.clone());
        prop_assert_eq!(p.rho, 0.0);
    }

    #[test]
    fn reflect_a_is_an_isometric_involution(z in point(), r in -50.0..50.0f64) {
        let w = ProductPoint::new(z.x.iter().map(|v| v * 0.5 - 1.0).collect(), r);
        prop_assert_eq!(reflect_a(&reflect_a(&z)), z.clone());
        let d0 = z.distance(&w);
        let d1 = reflect_a(&z).distance(&reflect_a(&w));
        prop_assert!((d0 - d1).abs() <= 1e-12 * (1.0 + d0));
    }

    #[test]
    fn projection_agrees_with_brute_force(kind in 0u8..7, a in 0.0..1.0f64, b in 0.0..1.0f64,
                                          x in -8.0..8.0f64, rho in -8.0..8.0f64) {
        let m = model(kind, a, b);
        let x = inside(&m, x);
        let ps = project_graph(&m, &[x], rho, &cfg()).unwrap();
        prop_assert!(!ps.is_empty());
        let oracle = brute_force_projection(&m, x, rho);
        for p in &ps {
            let fp = m.evaluate(&p.p).unwrap();
            prop_assert_eq!(fp, p.fp);
            let sq = (p.p[0] - x).powi(2) + (fp - rho).powi(2);
            prop_assert!((sq - p.squared_distance).abs() <= 1e-12 * (1.0 + sq));
            prop_assert!(p.squared_distance <= oracle + 1e-9 * (1.0 + oracle),
                "{}: {} vs oracle {}", m.name(), p.squared_distance, oracle);
            if m.is_locally_lipschitz(&p.p).unwrap() {
                prop_assert!(p.certificate_residual <= 1e-6, "{}: residual {}", m.name(), p.certificate_residual);
            }
        }
        prop_assert_eq!(ps.len() > 1, ps.iter().all(|p| p.multivalued));
    }

    #[test]
    fn graph_points_project_to_themselves(kind in 0u8..7, a in 0.0..1.0f64, b in 0.0..1.0f64, x in -5.0..5.0f64) {
        let m = model(kind, a, b);
        let x = inside(&m, x);
        let fx = m.evaluate(&[x]).unwrap();
        let ps = project_graph(&m, &[x], fx, &cfg()).unwrap();
        prop_assert_eq!(ps.len(), 1);
        prop_assert!(ps[0].squared_distance <= 1e-18, "{}: {:?}", m.name(), ps);
    }

    #[test]
    fn dr_step_follows_the_recursion(kind in 0u8..7, a in 0.0..1.0f64, b in 0.0..1.0f64,
                                      x in -6.0..6.0f64, rho in -6.0..6.0f64) {
        let m = model(kind, a, b);
        let x = inside(&m, x);
        let z = ProductPoint::scalar(x, rho);
        let next = dr_step(&m, &z, &cfg(), 0).unwrap();
        let fnext = m.evaluate(&next.x).unwrap();
        prop_assert!((next.rho - (rho + fnext)).abs() <= 1e-12 * (1.0 + rho.abs() + fnext.abs()));
        // Comparing the projection with the candidate y = x.
        let fx = m.evaluate(&[x]).unwrap();
        let lhs = (x - next.x[0]).powi(2);
        let rhs = (fx - fnext) * (fx + fnext + 2.0 * rho);
        prop_assert!(lhs <= rhs + 1e-9 * (1.0 + lhs), "{}: {lhs} > {rhs}", m.name());
    }

    #[test]
    fn intersection_points_are_fixed(kind in 0u8..7, a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let m = model(kind, a, b);
        for zero in m.known_zeros() {
            let z = ProductPoint::new(zero, 0.0);
            prop_assert!(dr_step(&m, &z, &cfg(), 0).unwrap().distance(&z) <= 1e-9);
            prop_assert!(map_step(&m, &z, &cfg(), 0).unwrap().distance(&z) <= 1e-9);
        }
    }

    #[test]
    fn inverse_undoes_a_step(kind in 0u8..3, a in 0.0..1.0f64, b in 0.0..1.0f64,
                             x in -3.0..3.0f64, rho in -3.0..3.0f64) {
        let m = smooth_model(kind, a, b);
        let z = ProductPoint::scalar(x, rho);
        let ps = project_graph(&m, &[x], -rho, &cfg()).unwrap();
        prop_assume!(ps.len() == 1);
        let next = dr_step(&m, &z, &cfg(), 0).unwrap();
        let back = dr_inverse(&m, &next).unwrap();
        prop_assert!(back.distance(&z) <= 1e-8 * (1.0 + z.norm()), "{}: {:?} vs {:?}", m.name(), back, z);
    }

    #[test]
    fn derivatives_match_finite_differences(kind in 0u8..7, a in 0.0..1.0f64, b in 0.0..1.0f64, x in -3.0..3.0f64) {
        let m = model(kind, a, b);
        let x = inside(&m, x);
        let h = 1e-6;
        prop_assume!(m.domain().contains(x - h) && m.domain().contains(x + h));
        prop_assume!(x.abs() > 1e-3 && (x.abs() - 1.0).abs() > 1e-3);
        let Some(g) = m.gradient(&[x]).unwrap() else { return Ok(()) };
        let f = |t: f64| m.evaluate(&[t]).unwrap();
        let fd = (f(x + h) - f(x - h)) / (2.0 * h);
        prop_assert!((g[0] - fd).abs() <= 1e-5 * (1.0 + g[0].abs()), "{} at {x}: {} vs {fd}", m.name(), g[0]);
        if let Some(hm) = m.hessian(&[x]).unwrap() {
            let d = |t: f64| m.gradient(&[t]).unwrap().unwrap()[0];
            let fd2 = (d(x + h) - d(x - h)) / (2.0 * h);
            prop_assert!((hm[(0, 0)] - fd2).abs() <= 1e-4 * (1.0 + fd2.abs()), "{} at {x}", m.name());
        }
    }

    #[test]
    fn potential_derivative_is_f_over_derivative(kind in 0u8..7, a in 0.0..1.0f64, b in 0.0..1.0f64, x in -3.0..3.0f64) {
        let m = model(kind, a, b);
        let x = inside(&m, x);
        prop_assume!(m.in_lyapunov_value_domain(&[x]));
        let Some(g) = m.gradient(&[x]).unwrap() else { return Ok(()) };
        prop_assume!(g[0].abs() > 1e-6);
        let expected = m.evaluate(&[x]).unwrap() / g[0];
        let got = m.lyapunov_gradient(&[x]).unwrap()[0];
        prop_assert!((got - expected).abs() <= 1e-9 * (1.0 + expected.abs()));
    }

    #[test]
    fn potential_is_convex_on_its_domain(kind in 0u8..7, a in 0.0..1.0f64, b in 0.0..1.0f64,
                                         s in -3.0..3.0f64, t in -3.0..3.0f64, w in 0.0..1.0f64) {
        let m = model(kind, a, b);
        prop_assume!(m.has_closed_form_lyapunov());
        let (s, t) = (inside(&m, s), inside(&m, t));
        let Ok(dom) = m.lyapunov_domain(&[s]) else { return Ok(()) };
        let mid = w * s + (1.0 - w) * t;
        prop_assume!(dom.contains(&[s]) && dom.contains(&[t]) && dom.contains(&[mid]));
        prop_assume!(m.in_lyapunov_value_domain(&[s]) && m.in_lyapunov_value_domain(&[t]) && m.in_lyapunov_value_domain(&[mid]));
        let f = |v: f64| m.lyapunov_potential(&[v]).unwrap();
        let chord = w * f(s) + (1.0 - w) * f(t);
        prop_assert!(f(mid) <= chord + 1e-9 * (1.0 + chord.abs()), "{} not convex", m.name());
    }

    #[test]
    fn sherman_morrison_matches_lu(seed in prop::collection::vec(-1.0..1.0f64, 24), n in 1usize..4) {
        let mut it = seed.into_iter();
        let mut next = || it.next().unwrap();
        let m = DMatrix::<f64>::from_fn(n, n, |i, j| if i == j { 3.0 + next() } else { next() });
        let u = DVector::<f64>::from_fn(n, |_, _| next());
        let v = DVector::<f64>::from_fn(n, |_, _| next());
        let lu = (&m + &u * v.transpose()).try_inverse();
        match (sherman_morrison_inverse(&m, &u, &v), lu) {
            (Ok(sm), Some(lu)) => prop_assert!((sm - &lu).amax() <= 1e-9 * (1.0 + lu.amax())),
            (Err(_), _) => {}
            (Ok(_), None) => prop_assert!(false, "update inverted although singular"),
        }
    }

    #[test]
    fn newton_does_not_contract_for_small_powers(p in 0.05..0.5f64, a in 0.1..5.0f64, x in 0.01..100.0f64) {
        let m = FunctionModel::signed_power(a, p).unwrap();
        let next = newton_step(&m, &[x]).unwrap()[0];
        prop_assert!((next - (1.0 - 1.0 / p) * x).abs() <= 1e-9 * x / p);
        prop_assert!(next.abs() >= x * (1.0 - 1e-12));
    }

    #[test]
    fn linear_rates_match_the_modulus(alpha in 0.3..4.0f64, beta in -3.0..3.0f64, x in -20.0..20.0f64, rho in -20.0..20.0f64) {
        let m = FunctionModel::linear(alpha, beta).unwrap();
        let zbar = ProductPoint::scalar(beta / alpha, 0.0);
        prop_assume!(ProductPoint::scalar(x, rho).distance(&zbar) > 1e-3);
        let t = iterate(&m, &ProductPoint::scalar(x, rho), &cfg(), SelectionPolicy::First).unwrap();
        let kappa = 1.0 / (1.0 + alpha * alpha).sqrt();
        let r = estimate_rate(&t, &zbar).unwrap();
        prop_assert!((r.q_rate - kappa).abs() <= 0.02, "{r:?} vs {kappa}");
        prop_assert!(r.r_rate <= r.q_rate + 0.05);
        let s = stability_report(&m, &zbar).unwrap();
        prop_assert!((s.modulus - kappa).abs() <= 1e-12);
    }

    #[test]
    fn steps_contract_near_regular_zeros(kind in 0u8..3, a in 0.0..1.0f64, b in 0.0..1.0f64, angle in 0.0..6.28f64) {
        let m = smooth_model(kind, a, b);
        let zero = m.known_zeros()[0].clone();
        let zbar = ProductPoint::new(zero.clone(), 0.0);
        let s = stability_report(&m, &zbar).unwrap();
        prop_assume!(s.modulus < 1.0);
        let delta = 1e-3;
        let z = ProductPoint::new(vec![zero[0] + delta * angle.cos()], delta * angle.sin());
        let next = dr_step(&m, &z, &cfg(), 0).unwrap();
        prop_assert!(next.distance(&zbar) <= (s.modulus + 0.05) * z.distance(&zbar));
    }

    #[test]
    fn merit_function_decreases(kind in 0u8..7, a in 0.0..1.0f64, b in 0.0..1.0f64,
                                x in -4.0..4.0f64, rho in -4.0..4.0f64) {
        let m = model(kind, a, b);
        prop_assume!(m.has_closed_form_lyapunov());
        let x = inside(&m, x);
        let cfg = NumericConfig { max_iterations: 200, ..cfg() };
        let t = iterate(&m, &ProductPoint::scalar(x, rho), &cfg, SelectionPolicy::First).unwrap();
        let c = check_trajectory(&m, &t).unwrap();
        if c.verdict == Verdict::Certified {
            prop_assert!(c.first_stable_index.is_some());
        }
        if let Some(k) = c.first_stable_index {
            for d in c.decrease_margins.iter().skip(k).flatten() {
                prop_assert!(*d >= -1e-9, "{}: margin {d}", m.name());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn scans_are_deterministic(kind in 0u8..7, a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let m = model(kind, a, b);
        let spec = GridSpec::square(-3.0, 3.0, 3, 1e-6);
        let cfg = NumericConfig { max_iterations: 300, ..cfg() };
        let first = scan(&m, &spec, &cfg).unwrap();
        let second = scan(&m, &spec, &cfg).unwrap();
        prop_assert_eq!(first.cells.len(), 9);
        prop_assert_eq!(first, second);
    }
}
