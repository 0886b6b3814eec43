//! Worked examples for each public operation.

use drzero::baselines::{map_step, newton_step, run_comparison, run_newton, MethodVerdict};
use drzero::basin::{estimate_rate, scan, CellClass, GridSpec};
use drzero::douglas_rachford::{
    classify_fixed_point, dr_inverse, dr_step, iterate, FixedPointClass, SelectionPolicy, Termination,
};
use drzero::functions::{closed_form_lyapunov, evaluate, symmetric_subdifferential, Interval};
use drzero::lyapunov::{check_assumption_v, check_trajectory, lyapunov_value, Verdict};
use drzero::projection::{project_graph, radial_project_powernorm};
use drzero::stability::stability_report;
use drzero::{project_a, reflect_a, Error, FunctionModel, NumericConfig, ProductPoint, Subdifferential};

fn cfg() -> NumericConfig {
    NumericConfig::default()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Adaptive Simpson quadrature.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[test]
fn affine_set_projector_and_reflector() {
    assert_eq!(project_a(&ProductPoint::scalar(3.0, -2.0)), ProductPoint::scalar(3.0, 0.0));
    assert_eq!(project_a(&ProductPoint::new(vec![1.0, 2.0], 5.0)), ProductPoint::new(vec![1.0, 2.0], 0.0));
    assert_eq!(reflect_a(&ProductPoint::scalar(3.0, -2.0)), ProductPoint::scalar(3.0, 2.0));
    let z = ProductPoint::scalar(0.7, 1.3);
    assert_eq!(reflect_a(&reflect_a(&z)), z);
}

#[test]
fn evaluation_examples() {
    let e = FunctionModel::exponential(0.1, 1.0).unwrap();
    assert!(close(evaluate(&e, &[10f64.ln()]).unwrap(), 0.0, 1e-15));
    let pn = FunctionModel::power_norm(1.0, 2.0, 1).unwrap();
    assert_eq!(evaluate(&pn, &[0.0]).unwrap(), 0.0);
    let pc = FunctionModel::piecewise_convex();
    assert!(close(evaluate(&pc, &[2f64.sqrt()]).unwrap(), 0.0, 1e-15));
    let b = FunctionModel::benoist(0.5, 1.0).unwrap();
    assert!(matches!(evaluate(&b, &[1.5]), Err(Error::Domain { .. })));
}

#[test]
fn parameter_validation() {
    assert!(FunctionModel::linear(0.0, 1.0).is_err());
    assert!(FunctionModel::exponential(-1.0, 1.0).is_err());
    assert!(FunctionModel::benoist(1.0, 1.0).is_err());
    assert!(FunctionModel::signed_power(1.0, 0.0).is_err());
    assert!(FunctionModel::from_json(r#"{"family":"linear","alpha":1,"beta":0,"gamma":2}"#).is_err());
    assert!(FunctionModel::from_json(r#"{"family":"custom"}"#).is_err());
    let m = FunctionModel::from_json(r#"{"family":"exponential","alpha":0.1,"beta":1.0}"#).unwrap();
    assert_eq!(m.name(), "exponential");
}

#[test]
fn subdifferential_examples() {
    let pnc = FunctionModel::piecewise_nonconvex(2.0).unwrap();
    assert_eq!(symmetric_subdifferential(&pnc, &[0.0]).unwrap(), Subdifferential::interval(0.0, 1.0));
    let cbrt = FunctionModel::signed_power(3.0, 1.0 / 3.0).unwrap();
    assert!(symmetric_subdifferential(&cbrt, &[0.0]).unwrap().is_empty());
    let lin = FunctionModel::linear(2.0, 0.0).unwrap();
    assert_eq!(symmetric_subdifferential(&lin, &[5.0]).unwrap(), Subdifferential::scalar(2.0));
    let abs = FunctionModel::power_norm(1.0, 1.0, 1).unwrap();
    let s = symmetric_subdifferential(&abs, &[0.0]).unwrap();
    assert_eq!(s, Subdifferential::from_intervals(vec![Interval::new(-1.0, 1.0)]));
}

#[test]
fn known_zeros() {
    let b = FunctionModel::benoist(0.6, 1.0).unwrap();
    let zs = b.known_zeros();
    assert_eq!(zs.len(), 2);
    assert!(close(zs[1][0], 0.8, 1e-15) && close(zs[0][0], -0.8, 1e-15));
    assert_eq!(FunctionModel::linear(2.0, 3.0).unwrap().known_zeros(), vec![vec![1.5]]);
    assert_eq!(FunctionModel::piecewise_convex().known_zeros(), vec![vec![2f64.sqrt()]]);
}

#[test]
fn closed_form_potentials() {
    let e = FunctionModel::exponential(0.1, 1.0).unwrap();
    assert!(close(closed_form_lyapunov(&e, &[0.0]).unwrap(), 10.0, 1e-14));
    let pn = FunctionModel::power_norm(2.0, 3.0, 2).unwrap();
    assert_eq!(closed_form_lyapunov(&pn, &[0.0, 0.0]).unwrap(), 0.0);
    let pc = FunctionModel::piecewise_convex();
    assert!(close(closed_form_lyapunov(&pc, &[1.0]).unwrap(), 0.25, 1e-15));
    assert!(matches!(closed_form_lyapunov(&pc, &[0.0]), Err(Error::Domain { .. })));
}

#[test]
fn potentials_match_quadrature_of_f_over_derivative() {
    let cases: Vec<(FunctionModel, f64, Vec<f64>)> = vec![
        (FunctionModel::linear(2.0, 1.0).unwrap(), 0.0, vec![-3.0, 2.0, 7.0]),
        (FunctionModel::exponential(0.1, 1.0).unwrap(), 0.0, vec![-4.0, 2.0, 6.0]),
        (FunctionModel::power_norm(1.5, 3.0, 1).unwrap(), 1.0, vec![0.2, 4.0]),
        (FunctionModel::signed_power(3.0, 1.0 / 3.0).unwrap(), 1.0, vec![0.1, 5.0]),
        (FunctionModel::benoist(0.5, 1.0).unwrap(), 0.5, vec![0.1, 0.7, 0.95]),
        (FunctionModel::piecewise_nonconvex(2.5).unwrap(), 1.0, vec![0.3, 3.0]),
        (FunctionModel::piecewise_nonconvex(2.5).unwrap(), -1.0, vec![-0.3, -3.0]),
        (FunctionModel::piecewise_convex(), 2f64.sqrt(), vec![0.3, 1.0, 5.0]),
    ];
    for (m, reference, points) in cases {
        let g = |t: f64| {
            let d = m.gradient(&[t]).unwrap().unwrap()[0];
            m.evaluate(&[t]).unwrap() / d
        };
        let f_ref = closed_form_lyapunov(&m, &[reference]).unwrap();
        for x in points {
            let integral = simpson(&g, reference, x, 1e-12);
            let exact = closed_form_lyapunov(&m, &[x]).unwrap() - f_ref;
            assert!(close(integral, exact, 1e-8), "{} at {x}: {integral} vs {exact}", m.name());
        }
    }
}

#[test]
fn projection_examples() {
    let half = FunctionModel::power_norm(0.5, 2.0, 1).unwrap();
    let p = project_graph(&half, &[0.0], 0.5, &cfg()).unwrap();
    assert_eq!(p.len(), 1);
    assert!(p[0].p[0].abs() < 1e-12 && p[0].fp.abs() < 1e-20);

    // Stationarity of y² + (0.1eʸ − 1)² is y + (0.1eʸ − 1)·0.1eʸ = 0; solve it
    // by bisection on [0, 0.5] where the left side increases.
    let e = FunctionModel::exponential(0.1, 1.0).unwrap();
    let stat = |y: f64| y + (0.1 * y.exp() - 1.0) * 0.1 * y.exp();
    let (mut a, mut b) = (0.0, 0.5);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if stat(m) < 0.0 { a = m } else { b = m }
    }
    let p = project_graph(&e, &[0.0], 0.0, &cfg()).unwrap();
    assert_eq!(p.len(), 1);
    assert!(close(p[0].p[0], a, 1e-10), "{p:?} vs {a}");
    assert!(close(p[0].p[0], 0.0995, 2e-3) && close(p[0].fp, -0.8895, 1e-3), "{p:?}");

    for m in [e, FunctionModel::benoist(0.5, 1.0).unwrap(), FunctionModel::piecewise_convex()] {
        for x in [-0.9, 0.2, 0.7] {
            let fx = m.evaluate(&[x]).unwrap();
            let p = project_graph(&m, &[x], fx, &cfg()).unwrap();
            assert_eq!(p.len(), 1);
            assert!(close(p[0].p[0], x, 1e-9) && p[0].squared_distance < 1e-18, "{} at {x}", m.name());
        }
    }
}

#[test]
fn projection_near_unstable_fixed_point_is_unique_and_close() {
    // For ½x² seen from (−ε, ½) the objective is strictly convex, with
    // stationarity ½y(y² + 1) = −ε, so y ≈ −2ε.
    let half = FunctionModel::power_norm(0.5, 2.0, 1).unwrap();
    let eps = 0.01;
    let p = project_graph(&half, &[-eps], 0.5, &cfg()).unwrap();
    assert_eq!(p.len(), 1);
    let y = p[0].p[0];
    assert!(close(0.5 * y * (y * y + 1.0), -eps, 1e-14), "y = {y}");
    assert!(close(y, -0.02, 1e-4));
}

#[test]
fn radial_projection_examples() {
    let sq = FunctionModel::power_norm(1.0, 2.0, 2).unwrap();
    let p = radial_project_powernorm(&sq, &[0.0, 0.0], 0.0, &cfg()).unwrap();
    assert_eq!(p.len(), 1);
    assert_eq!(p[0].p, vec![0.0, 0.0]);

    let norm = FunctionModel::power_norm(1.0, 1.0, 2).unwrap();
    let p = radial_project_powernorm(&norm, &[3.0, 4.0], 0.0, &cfg()).unwrap();
    assert_eq!(p.len(), 1);
    // Along the ray the problem is (t − 5)² + t², minimised at t = 2.5.
    assert!(close(p[0].p[0], 1.5, 1e-9) && close(p[0].p[1], 2.0, 1e-9), "{p:?}");

    let half = FunctionModel::power_norm(0.5, 2.0, 2).unwrap();
    let p = radial_project_powernorm(&half, &[0.01, 0.0], 0.5, &cfg()).unwrap();
    assert_eq!(p.len(), 1);
    let one_d = project_graph(&FunctionModel::power_norm(0.5, 2.0, 1).unwrap(), &[0.01], 0.5, &cfg()).unwrap();
    assert!(close(p[0].p[0], one_d[0].p[0], 1e-12) && p[0].p[1] == 0.0);

    let p = radial_project_powernorm(&half, &[0.0, 0.0], 5.0, &cfg()).unwrap();
    assert!(p.iter().all(|g| g.multivalued));
    assert!(p.iter().all(|g| close(g.p[0].abs(), 8f64.sqrt(), 1e-9)));
}

#[test]
fn custom_functions_in_higher_dimension_are_unsupported() {
    let c = drzero::CustomFunction::new("plane", 2, |x| x[0] + x[1]);
    let m = FunctionModel::custom(c).unwrap();
    assert!(matches!(project_graph(&m, &[0.0, 0.0], 0.0, &cfg()), Err(Error::Unsupported(_))));
}

#[test]
fn dr_step_examples() {
    let half = FunctionModel::power_norm(0.5, 2.0, 1).unwrap();
    assert_eq!(dr_step(&half, &ProductPoint::scalar(0.0, -0.5), &cfg(), 0).unwrap(), ProductPoint::scalar(0.0, -0.5));
    let b = FunctionModel::benoist(0.6, 1.0).unwrap();
    let z = ProductPoint::scalar(0.8, 0.0);
    assert!(dr_step(&b, &z, &cfg(), 0).unwrap().distance(&z) < 1e-12);
}

#[test]
fn dr_inverse_examples() {
    let e = FunctionModel::exponential(0.1, 1.0).unwrap();
    let z = ProductPoint::scalar(0.0, 0.0);
    let back = dr_inverse(&e, &dr_step(&e, &z, &cfg(), 0).unwrap()).unwrap();
    assert!(back.distance(&z) < 1e-8, "{back:?}");
    let half = FunctionModel::power_norm(0.5, 2.0, 1).unwrap();
    assert_eq!(dr_inverse(&half, &ProductPoint::scalar(0.0, -0.5)).unwrap(), ProductPoint::scalar(0.0, -0.5));
    let cbrt = FunctionModel::signed_power(3.0, 1.0 / 3.0).unwrap();
    assert!(matches!(dr_inverse(&cbrt, &ProductPoint::scalar(0.0, 1.0)), Err(Error::Unsupported(_))));
}

#[test]
fn iterate_examples() {
    let e = FunctionModel::exponential(0.1, 1.0).unwrap();
    let t = iterate(&e, &ProductPoint::scalar(0.0, 0.0), &NumericConfig::with_tolerance(1e-6), SelectionPolicy::First).unwrap();
    assert!(close(t.last().x[0], 10f64.ln(), 1e-5) && t.last().rho.abs() < 1e-5);
    assert_eq!(t.termination, Termination::ResidualTolerance);

    // ⅓x³ from (5, 5) approaches a critical fixed point (0, ρ̄) with ρ̄ ≠ 0.
    // Since f′(0) = 0 the approach in x is sublinear, about 1.2/n.
    let cube = FunctionModel::signed_power(1.0 / 3.0, 3.0).unwrap();
    let t = iterate(&cube, &ProductPoint::scalar(5.0, 5.0), &cfg(), SelectionPolicy::First).unwrap();
    let last = t.last();
    assert!(last.x[0].abs() < 1e-3 && last.rho.abs() > 0.5, "{last:?}");
    assert_ne!(t.termination, Termination::ResidualTolerance);
    let tail: Vec<f64> = t.iterates.iter().rev().take(3).map(|z| z.rho).collect();
    assert!((tail[0] - tail[2]).abs() < 1e-6);
    let report = classify_fixed_point(&cube, &ProductPoint::scalar(0.0, last.rho), &cfg()).unwrap();
    assert!(report.is_fixed);
    assert!(matches!(
        report.classification,
        FixedPointClass::CriticalPositiveRho | FixedPointClass::CriticalNegativeRho
    ));
}

#[test]
fn benoist_start_outside_domain_enters_it() {
    let b = FunctionModel::benoist(0.5, 1.0).unwrap();
    let t = iterate(&b, &ProductPoint::scalar(2.0, 0.0), &cfg(), SelectionPolicy::First).unwrap();
    assert!(t.f_values[0].is_none());
    assert!(t.iterates[1].x[0].abs() <= 1.0);
}

#[test]
fn nearest_selection_follows_the_current_side() {
    let half = FunctionModel::power_norm(0.5, 2.0, 1).unwrap();
    let z = ProductPoint::scalar(0.0, -5.0);
    let first = dr_step(&half, &z, &cfg(), 0).unwrap();
    let second = dr_step(&half, &z, &cfg(), 1).unwrap();
    assert!(first.x[0] < 0.0 && second.x[0] > 0.0);
    assert!(matches!(dr_step(&half, &z, &cfg(), 2), Err(Error::InvalidSelection { index: 2, available: 2 })));
}

#[test]
fn stability_examples() {
    for alpha in [0.5, 1.0, 3.0] {
        let m = FunctionModel::linear(alpha, 0.0).unwrap();
        let r = stability_report(&m, &ProductPoint::scalar(0.0, 0.0)).unwrap();
        assert!(close(r.modulus, 1.0 / (1.0 + alpha * alpha).sqrt(), 1e-12));
    }
    // At (0, −½) for ½x², J⁻¹ = diag(2, 1): expanding, with modulus 2.
    let half = FunctionModel::power_norm(0.5, 2.0, 1).unwrap();
    let r = stability_report(&half, &ProductPoint::scalar(0.0, -0.5)).unwrap();
    assert!(!r.psd_condition_holds);
    assert!(close(r.modulus, 2.0, 1e-12));
}

#[test]
fn unstable_fixed_point_moves_by_about_twice_the_perturbation() {
    let half = FunctionModel::power_norm(0.5, 2.0, 1).unwrap();
    let zbar = ProductPoint::scalar(0.0, -0.5);
    for eps in [1e-3, 1e-4, 1e-5] {
        let moved = dr_step(&half, &ProductPoint::scalar(-eps, -0.5), &cfg(), 0).unwrap().distance(&zbar);
        assert!(close(moved / eps, 2.0, 1e-2), "eps {eps}: ratio {}", moved / eps);
    }
}

#[test]
fn lyapunov_examples() {
    let pc = FunctionModel::piecewise_convex();
    let v = lyapunov_value(&pc, &ProductPoint::scalar(2f64.sqrt(), 0.0)).unwrap();
    assert!(close(v, 0.153426, 1e-6));

    let lin = FunctionModel::linear(1.0, 0.0).unwrap();
    let t = iterate(&lin, &ProductPoint::scalar(0.0, 0.0), &cfg(), SelectionPolicy::First).unwrap();
    assert_eq!(check_trajectory(&lin, &t).unwrap().verdict, Verdict::Certified);

    let cbrt = FunctionModel::signed_power(3.0, 1.0 / 3.0).unwrap();
    let t = iterate(&cbrt, &ProductPoint::scalar(7.0, -4.0), &cfg(), SelectionPolicy::First).unwrap();
    let c = check_trajectory(&cbrt, &t).unwrap();
    assert_eq!(c.verdict, Verdict::Certified);
    for (n, v) in c.values.iter().enumerate() {
        let z = &t.iterates[n];
        assert!(close(v.unwrap(), 1.5 * z.x[0] * z.x[0] + 0.5 * z.rho * z.rho, 1e-12));
    }
    assert!(c.decrease_margins.iter().flatten().all(|&d| d >= -1e-9));
}

#[test]
fn assumption_checks() {
    for m in [
        FunctionModel::exponential(0.1, 1.0).unwrap(),
        FunctionModel::power_norm(0.7, 2.5, 1).unwrap(),
        FunctionModel::benoist(0.5, 1.0).unwrap(),
        FunctionModel::piecewise_convex(),
    ] {
        let r = check_assumption_v(&m, 100, 3).unwrap();
        assert!(r.identity_holds && r.coercive && r.continuous_at_zeros, "{}: {r:?}", m.name());
    }
    let c = drzero::CustomFunction::new("shift", 1, |x| x[0] - 1.0);
    assert!(matches!(
        check_assumption_v(&FunctionModel::custom(c).unwrap(), 10, 0),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn baseline_examples() {
    let pc = FunctionModel::piecewise_convex();
    assert_eq!(map_step(&pc, &ProductPoint::scalar(-5.0, 0.0), &cfg(), 0).unwrap(), ProductPoint::scalar(-5.0, -1.0));
    let e = FunctionModel::exponential(0.1, 1.0).unwrap();
    let z = ProductPoint::scalar(10f64.ln(), 0.0);
    assert!(map_step(&e, &z, &cfg(), 0).unwrap().distance(&z) < 1e-12);
    assert!(close(newton_step(&e, &[10f64.ln()]).unwrap()[0], 10f64.ln(), 1e-15));
    assert!(matches!(newton_step(&pc, &[-1.0]), Err(Error::DerivativeSingular { .. })));
    let cbrt = FunctionModel::signed_power(3.0, 1.0 / 3.0).unwrap();
    assert!(matches!(newton_step(&cbrt, &[0.0]), Err(Error::NotDifferentiable { .. })));
}

#[test]
fn comparison_dra_vs_newton_on_cube_root() {
    let cbrt = FunctionModel::signed_power(3.0, 1.0 / 3.0).unwrap();
    let r = run_comparison(&cbrt, &ProductPoint::scalar(1.0, 0.0), &cfg()).unwrap();
    assert_eq!(r.douglas_rachford.verdict, MethodVerdict::ConvergedToSolution);
    assert!(r.douglas_rachford.trajectory.last().norm() < 1e-8);
    assert_eq!(r.newton.verdict, MethodVerdict::Diverged);
    let (t, _) = run_newton(&cbrt, &[1.0], &cfg()).unwrap();
    for (n, z) in t.iterates.iter().enumerate().take(31) {
        assert!(close(z.x[0].abs(), 2f64.powi(n as i32), 1e-8 * 2f64.powi(n as i32)));
    }
}

#[test]
fn basin_examples() {
    let lin = FunctionModel::linear(1.0, 0.0).unwrap();
    let g = scan(&lin, &GridSpec::square(0.0, 0.0, 1, 1e-6), &cfg()).unwrap();
    assert_eq!(g.cells[0].iterations, Some(0));

    let cube = FunctionModel::signed_power(1.0 / 3.0, 3.0).unwrap();
    let g = scan(&cube, &GridSpec::square(-10.0, 10.0, 5, 1e-3), &cfg()).unwrap();
    assert_eq!(g.cells.len(), 25);
    let critical = g.fraction(CellClass::CriticalFixedPoint);
    assert!(critical > 0.0, "no critical cells");
    for c in g.cells.iter().filter(|c| c.classification == CellClass::CriticalFixedPoint) {
        assert!(c.terminal.x[0].abs() <= 1e-3 && c.terminal.rho.abs() > 1e-3);
    }
}

#[test]
fn rate_examples() {
    let cases = [
        (FunctionModel::linear(2.0, 0.0).unwrap(), ProductPoint::scalar(5.0, 3.0), ProductPoint::scalar(0.0, 0.0), 1.0 / 5f64.sqrt()),
        (FunctionModel::exponential(0.1, 1.0).unwrap(), ProductPoint::scalar(0.0, 0.0), ProductPoint::scalar(10f64.ln(), 0.0), 0.5f64.sqrt()),
        (FunctionModel::piecewise_convex(), ProductPoint::scalar(5.0, 0.0), ProductPoint::scalar(2f64.sqrt(), 0.0), 1.0 / 3f64.sqrt()),
    ];
    for (m, z0, target, kappa) in cases {
        let t = iterate(&m, &z0, &cfg(), SelectionPolicy::First).unwrap();
        let r = estimate_rate(&t, &target).unwrap();
        assert!(close(r.q_rate, kappa, 0.02), "{}: {r:?}", m.name());
        assert!(r.r_rate <= r.q_rate + 0.05);
    }
}
