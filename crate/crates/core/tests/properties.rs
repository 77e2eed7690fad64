//! Randomized invariants over generated problems and inputs.

mod common;

use glocal::linalg::{axpy, dist_sq, norm, norm_sq, sub};
use glocal::linesearch::{armijo_search, line_optimize, ArmijoConfig, ArmijoMode, LoConfig};
use glocal::problems::{parse_libsvm, write_libsvm, Dataset, Objective, QuadraticProblem};
use glocal::stepsizes::{adgd_step, polyak_step, AdgdState};
use glocal::theory::{complexity_bound, lambert_w0, optimal_delta_logistic, BoundInputs, Theorem};
use proptest::prelude::*;

fn diag_quadratic() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..6).prop_flat_map(|d| (prop::collection::vec(0.05f64..50.0, d), prop::collection::vec(-5.0f64..5.0, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lambert_inverts(w in 0.0f64..40.0) {
        let back = lambert_w0(w * w.exp()).unwrap();
        prop_assert!((back - w).abs() <= 1e-10 * w.max(1e-12));
    }

    #[test]
    fn lo_beats_nearby_steps((diag, w) in diag_quadratic()) {
        let q = QuadraticProblem::diagonal(&diag).unwrap();
        let g = q.gradient(&w);
        prop_assume!(norm(&g) > 1e-8);
        let d: Vec<f64> = g.iter().map(|v| -v).collect();
        let eta = line_optimize(&q, &w, &d, &LoConfig::default()).unwrap().step;
        let at = |s: f64| q.value(&axpy(&w, s, &d));
        prop_assert!(at(eta) <= at(0.9 * eta) && at(eta) <= at(1.1 * eta));
        let lmax = diag.iter().cloned().fold(0.0, f64::max);
        let lmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!(eta >= 1.0 / lmax * (1.0 - 1e-12) && eta <= 1.0 / lmin * (1.0 + 1e-12));
    }

    #[test]
    fn armijo_step_satisfies_its_condition((diag, w) in diag_quadratic(), start in 1e-3f64..100.0, fwd in any::<bool>()) {
        let q = QuadraticProblem::diagonal(&diag).unwrap();
        let g = q.gradient(&w);
        prop_assume!(norm_sq(&g) > 1e-16);
        let mode = if fwd { ArmijoMode::ForwardBacktrack } else { ArmijoMode::Backtrack };
        let cfg = ArmijoConfig { mode, ..ArmijoConfig::default() };
        let f = q.value(&w);
        let eta = armijo_search(&q, &w, f, &g, &cfg, start).unwrap().step;
        prop_assert!(q.value(&axpy(&w, -eta, &g)) <= f - 0.5 * eta * norm_sq(&g));
        let lmax = diag.iter().cloned().fold(0.0, f64::max);
        prop_assert!(eta >= (0.5 / lmax).min(start) * (1.0 - 1e-12));
    }

    #[test]
    fn polyak_step_is_at_most_half_inverse_mu((diag, w) in diag_quadratic()) {
        let q = QuadraticProblem::diagonal(&diag).unwrap();
        let g = q.gradient(&w);
        prop_assume!(norm_sq(&g) > 1e-16);
        let mu = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        let eta = polyak_step(q.value(&w), 0.0, norm_sq(&g)).unwrap();
        prop_assert!(eta <= 1.0 / (2.0 * mu) * (1.0 + 1e-12));
    }

    #[test]
    fn adgd_respects_both_caps(
        eta_prev in 1e-4f64..1.0,
        theta in 0.1f64..10.0,
        w0 in prop::collection::vec(-3.0f64..3.0, 3),
        w1 in prop::collection::vec(-3.0f64..3.0, 3),
        l in 0.1f64..20.0,
    ) {
        let q = QuadraticProblem::diagonal(&[l, 0.5 * l, 2.0 * l]).unwrap();
        let (g0, g1) = (q.gradient(&w0), q.gradient(&w1));
        prop_assume!(dist_sq(&g0, &g1) > 1e-20);
        let state = AdgdState { eta_prev, theta_prev: theta, w_prev: w0.clone(), g_prev: g0.clone() };
        let (eta, next) = adgd_step(&state, &w1, &g1).unwrap();
        prop_assert!(eta <= (1.0 + theta / 2.0).sqrt() * eta_prev * (1.0 + 1e-15));
        prop_assert!(eta * norm(&sub(&g1, &g0)) <= 0.5 * norm(&sub(&w1, &w0)) * (1.0 + 1e-12));
        prop_assert!((next.theta_prev - eta / eta_prev).abs() <= 1e-15 * next.theta_prev);
    }

    #[test]
    fn optimal_delta_stays_in_range(d0 in 1e-3f64..1e3, ratio in 1.5f64..1e8, ell in 0.0f64..0.5) {
        let eps = d0 / ratio;
        let r = optimal_delta_logistic(d0, eps, ell).unwrap();
        prop_assert!(r.delta >= eps * (1.0 - 1e-12) && r.delta <= d0 * (1.0 + 1e-12));
    }

    #[test]
    fn gd_lo_bound_is_monotone(
        l in 1.0f64..1e4,
        frac in 0.0f64..1.0,
        d0 in 1.0f64..100.0,
        k in 1.0f64..4.0,
    ) {
        let l_star = (frac * l).max(1e-3);
        let inputs = |ls: f64| BoundInputs::new()
            .with("L", l).with("mu", 1e-3).with("Lstar", ls)
            .with("delta0", d0).with("delta", d0 / 10f64.powf(k)).with("eps", d0 * 1e-6);
        let a = complexity_bound(Theorem::GlocalGdLo, &inputs(l_star)).unwrap().t;
        let b = complexity_bound(Theorem::GlocalGdLo, &inputs(l)).unwrap().t;
        prop_assert!(a <= b);
    }

    #[test]
    fn libsvm_round_trips(rows in prop::collection::vec(prop::collection::btree_map(0usize..8, -1e3f64..1e3, 0..5), 0..12)) {
        let labels: Vec<f64> = (0..rows.len()).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let rows: Vec<Vec<(usize, f64)>> = rows.into_iter().map(|m| m.into_iter().collect()).collect();
        let data = Dataset::new(rows, labels, 8).unwrap();
        let mut buf = Vec::new();
        write_libsvm(&data, &mut buf).unwrap();
        let back = parse_libsvm(buf.as_slice()).unwrap();
        prop_assert_eq!(&back.rows, &data.rows);
        prop_assert_eq!(&back.labels, &data.labels);
        prop_assert!(back.dim <= data.dim);
    }
}
