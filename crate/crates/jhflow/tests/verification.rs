//! Cross-module numerical verification: every solution family against the
//! PDE, the angular ODEs, the RK4 oracle, and the smoothness conditions.

use jhflow::cubic::ParameterPoint;
use jhflow::elliptic::{ellint_k, Modulus};
use jhflow::nonradial::{weierstrass_h_derivatives, NonRadialSpec};
use jhflow::radial::{
    eval_f, eval_f_prime, global_periodic_solve, validity, Family, RadialProfileSpec,
};
use jhflow::verify::{
    angular_ode_residual, constraint_check, first_integral_residual, ode_oracle_compare,
    pde_residual, profile_one_sided_derivatives, profile_smoothness_across_ray, scaling_check,
    FieldEvaluator, RadialField, ReciprocalField,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn pt(c1: f64, c2: f64) -> ParameterPoint {
    ParameterPoint::new(c1, c2).unwrap()
}

/// The per-family fixture parameters used throughout the suite.
fn family_fixtures() -> Vec<RadialProfileSpec> {
    // Region-I point (3, 0): real root 0, pair -3 ± 3i. The shift C = K/√β
    // centres the principal window away from the cot² pole.
    let f1 = {
        let beta = 18.0_f64.sqrt();
        let k = Modulus::new(((beta + 3.0) / (2.0 * beta)).sqrt()).unwrap();
        let shift = ellint_k(k).unwrap() / beta.sqrt();
        RadialProfileSpec::new(Family::F1, pt(3.0, 0.0), shift).unwrap()
    };
    vec![
        RadialProfileSpec::constant(pt(0.0, 0.0), -6.0).unwrap(),
        f1,
        RadialProfileSpec::new(Family::F2, pt(2.0, 8.0), 1.0).unwrap(),
        RadialProfileSpec::from_three_roots(Family::F3, -7.0, -1.0, 2.0, 0.0).unwrap(),
        RadialProfileSpec::from_three_roots(Family::F4, -7.0, -1.0, 2.0, 0.0).unwrap(),
        RadialProfileSpec::new(Family::F5, pt(0.0, 0.0), 0.0).unwrap(),
        RadialProfileSpec::new(Family::F6, pt(0.0, -32.0), 1.0).unwrap(),
        RadialProfileSpec::new(Family::F7, pt(0.0, -32.0), 1.0).unwrap(),
    ]
}

/// Uniform angles inside the widest principal validity interval, shrunk by
/// the given margin fraction on each side.
fn sample_thetas_margin(
    spec: &RadialProfileSpec,
    count: usize,
    margin_frac: f64,
    rng: &mut StdRng,
) -> Vec<f64> {
    let intervals = validity(spec).unwrap();
    let widest = intervals
        .iter()
        .max_by(|a, b| a.width().total_cmp(&b.width()))
        .expect("at least one validity interval");
    let margin = margin_frac * widest.width();
    let (lo, hi) = (widest.lo + margin, widest.hi - margin);
    (0..count).map(|_| rng.gen_range(lo..hi)).collect()
}

fn sample_thetas(spec: &RadialProfileSpec, count: usize, rng: &mut StdRng) -> Vec<f64> {
    sample_thetas_margin(spec, count, 0.15, rng)
}

#[test]
fn every_radial_family_satisfies_the_pde() {
    let mut rng = StdRng::seed_from_u64(42);
    for spec in family_fixtures() {
        let fe = RadialField {
            spec,
            extended: false,
        };
        let mut worst = 0.0_f64;
        for theta in sample_thetas(&spec, 100, &mut rng) {
            let r = rng.gen_range(0.5..2.0);
            let (x, y) = (r * theta.cos(), r * theta.sin());
            let report = pde_residual(&fe, x, y, 1e-3 * r).unwrap();
            worst = worst.max(report.max_normalized());
            assert!(report.constraint.abs() < 1e-13);
        }
        assert!(
            worst < 1e-6,
            "{:?}: worst normalized residual {worst:e}",
            spec.family()
        );
    }
}

#[test]
fn angular_ode_holds_along_every_profile() {
    // 25% margins: near the window edges f and its derivatives grow without
    // bound and the finite-difference noise floor grows with them.
    let mut rng = StdRng::seed_from_u64(7);
    for spec in family_fixtures().into_iter().skip(1) {
        let mut worst = 0.0_f64;
        for theta in sample_thetas_margin(&spec, 60, 0.25, &mut rng) {
            worst = worst.max(angular_ode_residual(&spec, theta).unwrap());
        }
        assert!(worst < 1e-7, "{:?}: worst {worst:e}", spec.family());
    }
}

#[test]
fn first_integral_holds_along_every_profile() {
    let mut rng = StdRng::seed_from_u64(11);
    for spec in family_fixtures().into_iter().skip(1) {
        let mut worst = 0.0_f64;
        for theta in sample_thetas_margin(&spec, 60, 0.25, &mut rng) {
            worst = worst.max(first_integral_residual(&spec, theta).unwrap());
        }
        assert!(worst < 1e-7, "{:?}: worst {worst:e}", spec.family());
    }
}

#[test]
fn range_confinement() {
    let mut rng = StdRng::seed_from_u64(13);
    let fixtures = family_fixtures();
    // f3 in [b, c], f4 below a, f1 below alpha.
    for theta in sample_thetas(&fixtures[3], 200, &mut rng) {
        let f = eval_f(&fixtures[3], theta).unwrap();
        assert!((-1.0 - 1e-10..=2.0 + 1e-10).contains(&f));
    }
    for theta in sample_thetas(&fixtures[4], 200, &mut rng) {
        assert!(eval_f(&fixtures[4], theta).unwrap() <= -7.0 + 1e-10);
    }
    for theta in sample_thetas(&fixtures[1], 200, &mut rng) {
        assert!(eval_f(&fixtures[1], theta).unwrap() <= 0.0 + 1e-10);
    }
}

#[test]
fn rk4_oracle_reproduces_every_closed_form() {
    // Criterion fixture: step 1e-4 over a θ-span of 1.0.
    let mut rng = StdRng::seed_from_u64(17);
    for spec in family_fixtures().into_iter().skip(1) {
        let thetas = sample_thetas(&spec, 1, &mut rng);
        let intervals = validity(&spec).unwrap();
        let widest = intervals
            .iter()
            .max_by(|a, b| a.width().total_cmp(&b.width()))
            .unwrap();
        // A span of 1.0 inside the validity window when it fits, else the
        // middle 70% of the window.
        let (lo, hi) = if widest.width() >= 1.0 / 0.7 {
            let mid = thetas[0]
                .min(widest.hi - 0.15 * widest.width() - 0.5)
                .max(widest.lo + 0.15 * widest.width() + 0.5);
            (mid - 0.5, mid + 0.5)
        } else {
            (
                widest.lo + 0.15 * widest.width(),
                widest.hi - 0.15 * widest.width(),
            )
        };
        let dev = ode_oracle_compare(&spec, lo, hi, 1e-4).unwrap();
        assert!(dev < 1e-6, "{:?}: deviation {dev:e}", spec.family());
    }
}

#[test]
fn scaling_invariance_for_all_fields() {
    let mut rng = StdRng::seed_from_u64(19);
    let mut fields: Vec<Box<dyn FieldEvaluator>> = vec![];
    for spec in family_fixtures() {
        fields.push(Box::new(RadialField {
            spec,
            extended: false,
        }));
    }
    fields.push(Box::new(NonRadialSpec::weierstrass(5.0, 1.0, 0.2).unwrap()));
    fields.push(Box::new(NonRadialSpec::degenerate(-3.0, 0.3).unwrap()));
    fields.push(Box::new(
        NonRadialSpec::linear_with_coefficient(1.0, 1.0).unwrap(),
    ));
    for fe in &fields {
        for lambda in [0.5, 2.0, 10.0] {
            // A point in everyone's validity region.
            let x = rng.gen_range(0.9..1.1);
            let y = rng.gen_range(-0.05..0.05);
            let dev = scaling_check(fe.as_ref(), lambda, x, y).unwrap();
            assert!(dev < 1e-12, "lambda={lambda}: deviation {dev:e}");
        }
    }
}

#[test]
fn reciprocal_fields_satisfy_the_pde() {
    let mut rng = StdRng::seed_from_u64(23);
    let spec = RadialProfileSpec::from_three_roots(Family::F3, -7.0, -1.0, 2.0, 0.1).unwrap();
    let fe = ReciprocalField { spec };
    for _ in 0..100 {
        // ψ = arctan(x/y) inside the principal window, y bounded away from 0.
        let psi: f64 = rng.gen_range(-1.2..1.2);
        let y: f64 = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let x = y * psi.tan();
        let r = (x * x + y * y).sqrt();
        let report = pde_residual(&fe, x, y, (1e-3 * r).min(0.2 * y.abs())).unwrap();
        assert!(
            report.max_normalized() < 1e-6,
            "at ({x}, {y}): {:e}",
            report.max_normalized()
        );
        assert!(constraint_check(&fe, 0.0, x, y).unwrap() < 1e-13);
    }
}

#[test]
fn global_solution_extends_smoothly_and_solves_the_pde() {
    let sol = global_periodic_solve(3, 1.0).unwrap();
    let spec = sol.profile_spec().unwrap();
    let fe = RadialField {
        spec,
        extended: true,
    };
    // Annular sweep keeping the FD stencil off the slit seam.
    let mut worst = 0.0_f64;
    for i in 0..21 {
        let theta = 0.05 + (2.0 * std::f64::consts::PI - 0.1) * i as f64 / 20.0;
        for j in 0..21 {
            let r = 0.5 + 1.5 * j as f64 / 20.0;
            let (x, y) = (r * theta.cos(), r * theta.sin());
            let report = pde_residual(&fe, x, y, 1e-3 * r).unwrap();
            worst = worst.max(report.max_normalized());
        }
    }
    assert!(worst < 1e-6, "worst normalized residual {worst:e}");

    let (right, left) = profile_one_sided_derivatives(&spec, 3).unwrap();
    for j in 0..=3 {
        let mismatch = (right[j] - left[j]).abs();
        assert!(
            mismatch < 1e-7 * right[j].abs().max(1.0),
            "order {j}: {mismatch:e}"
        );
    }
}

#[test]
fn f2_with_forced_shift_is_not_extendable() {
    // C = -π equalizes the values across the ray but not the slopes.
    let spec = RadialProfileSpec::new(Family::F2, pt(2.0, 8.0), -std::f64::consts::PI).unwrap();
    let mis = profile_smoothness_across_ray(&spec, 1).unwrap();
    let scale = eval_f_prime(&spec, 0.0).unwrap().abs().max(1.0);
    assert!(mis[0] < 1e-9);
    assert!(mis[1] > 1e-2 * scale, "order-1 mismatch {:e}", mis[1]);
}

#[test]
fn h_reconstruction_solves_the_reduced_equation() {
    // h(z) = h_L(z) + H(arctan z) must satisfy the C0-reduced equation with
    // C1 = 2 - C0²/2 - 9C0⁴/1250.
    for (c0, g3, c) in [(5.0_f64, 4.0, 0.3), (5.0, 1.0, 0.0), (-3.0, 1.0, 0.3)] {
        let ctilde1 = -2.0 + 3.0 * c0 * c0 / 25.0;
        let c1 = 2.0 - c0 * c0 / 2.0 - 9.0 * c0.powi(4) / 1250.0;
        for i in 0..50 {
            let theta = -1.0 + 1.8 * i as f64 / 49.0;
            let z = theta.tan();
            let (h_r, h1, h2) = weierstrass_h_derivatives(theta, c0, g3, c).unwrap();
            let w = z * z + 1.0;
            let h = -c0 * z + ctilde1 + h_r;
            let hz = -c0 + h1 / w;
            let hzz = (h2 - 2.0 * z * h1) / (w * w);
            let resid = w * w * hzz
                + (2.0 * z - c0) * w * hz
                + h * h
                + (2.0 * c0 * z + 4.0) * h
                + 2.0 * c0 * z.powi(3)
                + 6.0 * c0 * z
                + 2.0 * c1;
            assert!(
                resid.abs() < 1e-7 * (1.0 + h * h),
                "C0={c0} g3={g3} theta={theta}: {resid:e}"
            );
        }
    }
}

#[test]
fn nonradial_fields_satisfy_the_pde() {
    let mut rng = StdRng::seed_from_u64(29);
    let specs = [
        NonRadialSpec::weierstrass(5.0, 1.0, 0.2).unwrap(),
        NonRadialSpec::weierstrass(-3.0, 4.0, 0.3).unwrap(),
        NonRadialSpec::degenerate(5.0, 0.3).unwrap(),
        NonRadialSpec::linear_with_coefficient(1.0, 1.0).unwrap(),
    ];
    for spec in &specs {
        let (lo, hi) = spec.pole_free_theta_window(0.0).unwrap();
        let lo = lo.max(-1.4);
        let hi = hi.min(1.4);
        let margin = 0.1 * (hi - lo);
        for _ in 0..100 {
            let theta = rng.gen_range(lo + margin..hi - margin);
            let r = rng.gen_range(0.5..2.0);
            let (x, y) = (r * theta.cos(), r * theta.sin());
            let report = pde_residual(spec, x, y, 1e-3 * r).unwrap();
            assert!(
                report.max_normalized() < 1e-6,
                "C0={} at ({x}, {y}): {:e}",
                spec.c0(),
                report.max_normalized()
            );
            assert!(report.constraint.abs() < 1e-13);
        }
    }
}

#[test]
fn first_integral_drift_stays_small() {
    for (c0, g3, c) in [(5.0, 4.0, 0.0), (5.0, 1.0, 0.3), (-3.0, 4.0, 0.3)] {
        let spec = NonRadialSpec::weierstrass(c0, g3, c).unwrap();
        let (lo, hi) = spec.pole_free_theta_window(0.0).unwrap();
        // Keep the span anchored near θ = 0: far into the exponential tail
        // the first-integral bracket is a catastrophic cancellation.
        let span = 2.0_f64.min(0.8 * (hi - lo));
        let margin = 0.1 * span;
        let center = 0.0_f64
            .min(hi - span / 2.0 - margin)
            .max(lo + span / 2.0 + margin);
        let mut min_v = f64::INFINITY;
        let mut max_v = f64::NEG_INFINITY;
        for i in 0..=100 {
            let theta = center - span / 2.0 + span * i as f64 / 100.0;
            let (h, h1, _) = weierstrass_h_derivatives(theta, c0, g3, c).unwrap();
            let state = jhflow::nonradial::LienardState::new(theta, h, h1).unwrap();
            let v = jhflow::nonradial::first_integral(&state, c0);
            min_v = min_v.min(v);
            max_v = max_v.max(v);
        }
        let scale = max_v.abs().max(min_v.abs()).max(1e-9);
        assert!(
            (max_v - min_v) / scale < 1e-8,
            "C0={c0} g3={g3}: drift {:e}",
            (max_v - min_v) / scale
        );
    }
}
