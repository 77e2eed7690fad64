mod common;

use glocal::linalg::{dist_sq, dot, norm_sq, sub};
use glocal::linesearch::{ArmijoConfig, ArmijoMode, LoConfig};
use glocal::optimizers::{
    nag_momentum_form, run_cd, run_gd, run_nag, run_nag_detailed, run_nlcg, run_sgd, NagConfig, Selection, SgdConfig,
    StepRule, StopReason, StopRule, Trace,
};
use glocal::problems::{gen_realizable_ls, HuberProblem, LeastSquaresProblem, Objective, QuadraticProblem};
use nalgebra::{DMatrix, DVector};

fn assert_non_increasing(values: &[f64], tol: f64, what: &str) {
    for (t, pair) in values.windows(2).enumerate() {
        assert!(pair[1] <= pair[0] + tol * (1.0 + pair[0].abs()), "{what}: increase at t = {t}: {} → {}", pair[0], pair[1]);
    }
}

fn polyak_quadratic() -> QuadraticProblem {
    QuadraticProblem::diagonal(&[1.0, 1.0 / 20.0]).unwrap()
}

fn realizable(n: usize, d: usize, seed: u64) -> LeastSquaresProblem {
    let (data, w) = gen_realizable_ls(n, d, seed).unwrap();
    LeastSquaresProblem::with_solution(data.to_dense(), data.labels.clone(), w).unwrap()
}

#[test]
fn fixed_inverse_smoothness_is_newton_on_scalar_quadratic() {
    let q = QuadraticProblem::diagonal(&[7.0]).unwrap();
    let t = run_gd(&q, &StepRule::Fixed { l: 7.0 }, &[5.0], &StopRule::gap(1e-12, 10)).unwrap();
    assert_eq!(t.stop, StopReason::GapTarget);
    assert_eq!(t.iterations(), 1);
    assert_eq!(t.final_w, vec![0.0]);
}

#[test]
fn polyak_first_step_raises_f_and_lowers_distance() {
    let q = polyak_quadratic();
    let t = run_gd(&q, &StepRule::Polyak { f_star: 0.0 }, &[0.05, 1.0], &StopRule::max_iters(1).keeping_iterates())
        .unwrap();
    let w1 = &t.iterates[1];
    assert!((w1[0] + 0.2125).abs() < 1e-12 && (w1[1] - 0.7375).abs() < 1e-12);
    assert!((t.records[1].step.unwrap() - 5.25).abs() < 1e-12);
    assert!((t.records[1].f - 0.036176).abs() < 1e-6);
    assert!(t.records[1].f > t.records[0].f);
    assert!((t.records[0].dist_sq.unwrap() - 1.0025).abs() < 1e-12);
    assert!((t.records[1].dist_sq.unwrap() - 0.5890625).abs() < 1e-12);
}

#[test]
fn polyak_distance_is_monotone_on_strongly_convex_problems() {
    for seed in 0..5 {
        let q = common::random_centered_quadratic(5, 0.1, 30.0, seed);
        let t = run_gd(&q, &StepRule::Polyak { f_star: 0.0 }, &common::random_vec(5, seed), &StopRule::max_iters(300))
            .unwrap();
        let d: Vec<f64> = t.records.iter().map(|r| r.dist_sq.unwrap()).collect();
        assert_non_increasing(&d, 1e-12, "polyak distance");
    }
}

#[test]
fn lo_contracts_at_least_at_the_global_rate() {
    for seed in 0..5 {
        let q = common::random_quadratic(6, 0.5, 50.0, seed);
        let c = q.constants();
        let rate = 1.0 - c.mu.unwrap() / c.l_global.unwrap();
        let t = run_gd(&q, &StepRule::LineOptimize(LoConfig::default()), &common::random_vec(6, 50 + seed), &StopRule::gap(1e-13, 500))
            .unwrap();
        for pair in t.records.windows(2) {
            let (g0, g1) = (pair[0].gap.unwrap(), pair[1].gap.unwrap());
            assert!(g1 <= rate * g0 + 1e-14, "seed {seed}: {g1} > {rate}·{g0}");
        }
    }
}

#[test]
fn monotone_rules_never_increase_f() {
    let x = DMatrix::from_fn(15, 3, |i, j| ((2 * i + 5 * j) as f64 * 0.37).sin());
    let t: Vec<f64> = (0..15).map(|i| (i as f64 * 0.9).cos()).collect();
    let problems: Vec<Box<dyn Objective>> = vec![
        Box::new(common::random_quadratic(4, 0.2, 20.0, 9)),
        Box::new(HuberProblem::new(x, t, 0.3).unwrap()),
        Box::new(common::two_regime_2d()),
        Box::new(realizable(20, 4, 3)),
    ];
    let rules = [
        StepRule::LineOptimize(LoConfig::default()),
        StepRule::Armijo(ArmijoConfig::default()),
        StepRule::Armijo(ArmijoConfig { mode: ArmijoMode::ForwardBacktrack, ..ArmijoConfig::default() }),
        StepRule::Armijo(ArmijoConfig { mode: ArmijoMode::Reset, ..ArmijoConfig::default() }),
    ];
    for p in &problems {
        let w0: Vec<f64> = common::random_vec(p.dim(), 8).iter().map(|v| 3.0 * v).collect();
        for rule in &rules {
            let tr = run_gd(p.as_ref(), rule, &w0, &StopRule::max_iters(200)).unwrap();
            assert!(!tr.stop.is_failure(), "{}: {:?}", rule.name(), tr.message);
            assert_non_increasing(&tr.values(), 1e-14, rule.name());
        }
        for sel in [Selection::Greedy, Selection::Uniform { seed: 4 }] {
            let tr = run_cd(p.as_ref(), sel, &w0, &StopRule::max_iters(200), &LoConfig::default()).unwrap();
            assert_non_increasing(&tr.values(), 1e-14, "cd");
        }
    }
}

#[test]
fn lo_sublevel_set_is_absorbing_on_two_regime() {
    let p = common::two_regime_2d();
    let delta = p.local_delta();
    for k in 0..5 {
        let w0: Vec<f64> = common::random_vec(2, 70 + k).iter().map(|v| 4.0 * v).collect();
        let tr = run_gd(&p, &StepRule::LineOptimize(LoConfig::default()), &w0, &StopRule::max_iters(100)).unwrap();
        if let Some(first) = tr.records.iter().position(|r| r.gap.unwrap() <= delta) {
            assert!(tr.records[first..].iter().all(|r| r.gap.unwrap() <= delta));
        }
    }
}

#[test]
fn adgd_potential_is_non_increasing() {
    for seed in 0..5 {
        let q = common::random_centered_quadratic(4, 1.0, 20.0, seed);
        let (l, mu) = (q.constants().l_global.unwrap(), q.constants().mu.unwrap());
        let tr = run_gd(&q, &StepRule::Adgd, &common::random_vec(4, 90 + seed), &StopRule::max_iters(200).keeping_iterates())
            .unwrap();
        let w = &tr.iterates;
        let eta = |t: usize| tr.records[t].step.unwrap();
        let phi: Vec<f64> = (3..tr.records.len())
            .map(|t| {
                let theta = eta(t) / eta(t - 1);
                norm_sq(&w[t])
                    + 0.5 * (1.0 + 2.0 * mu / l) * dist_sq(&w[t], &w[t - 1])
                    + 2.0 * eta(t) * (1.0 + theta) * tr.records[t - 1].f
            })
            .collect();
        assert_non_increasing(&phi, 1e-9, "adgd potential");
    }
}

#[test]
fn adgd_settles_near_half_inverse_smoothness() {
    let l = 5.0;
    let q = QuadraticProblem::diagonal(&[l]).unwrap();
    let tr = run_gd(&q, &StepRule::Adgd, &[1.0], &StopRule::max_iters(60)).unwrap();
    for r in &tr.records[2..] {
        assert!(r.step.unwrap() <= 1.0 / (2.0 * l) * (1.0 + 1e-12));
    }
    assert!((tr.records.last().unwrap().step.unwrap() - 1.0 / (2.0 * l)).abs() < 1e-12);
}

#[test]
fn greedy_cd_zeroes_the_largest_partial() {
    let q = QuadraticProblem::diagonal(&[1.0, 10.0]).unwrap();
    let tr = run_cd(&q, Selection::Greedy, &[1.0, 1.0], &StopRule::max_iters(1).keeping_iterates(), &LoConfig::default())
        .unwrap();
    assert_eq!(tr.iterates[1], vec![1.0, 0.0]);
}

#[test]
fn greedy_cd_solves_separable_quadratics_in_d_steps() {
    let q = QuadraticProblem::diagonal(&[3.0, 0.5, 8.0, 1.0, 20.0]).unwrap();
    let tr = run_cd(&q, Selection::Greedy, &[1.0, -2.0, 0.3, 4.0, -1.0], &StopRule::gap(1e-14, 50), &LoConfig::default())
        .unwrap();
    assert!(tr.iterations() <= 5);
    assert!(tr.final_gap().unwrap() <= 1e-14);
}

#[test]
fn uniform_cd_is_reproducible() {
    let q = common::random_quadratic(6, 0.5, 10.0, 1);
    let run = |seed| {
        run_cd(&q, Selection::Uniform { seed }, &[1.0; 6], &StopRule::max_iters(40).keeping_iterates(), &LoConfig::default())
            .unwrap()
    };
    assert_eq!(run(3), run(3));
    assert_ne!(run(3).iterates, run(4).iterates);
}

#[test]
fn sgd_moves_monotonically_towards_the_interpolating_solution() {
    let p = realizable(30, 4, 2);
    let w_star = p.constants().w_star.clone().unwrap();
    for seed in 0..3 {
        let tr = run_sgd(&p, &SgdConfig::new(10.0, seed), &[0.0; 4], &StopRule::max_iters(300)).unwrap();
        let d: Vec<f64> = tr.records.iter().map(|r| r.dist_sq.unwrap()).collect();
        assert_non_increasing(&d, 1e-15, "sgd distance");
        assert!(d.last().unwrap() < &d[0]);
    }
    let a = run_sgd(&p, &SgdConfig::new(10.0, 5), &[0.0; 4], &StopRule::max_iters(50)).unwrap();
    let b = run_sgd(&p, &SgdConfig::new(10.0, 5), &[0.0; 4], &StopRule::max_iters(50)).unwrap();
    assert_eq!(a, b);

    let at_opt = run_sgd(&p, &SgdConfig::new(1.0, 0), &w_star, &StopRule { grad_norm: Some(1e-12), ..StopRule::max_iters(50) })
        .unwrap();
    assert_eq!(at_opt.iterations(), 0);
    assert_eq!(at_opt.stop, StopReason::GradTarget);
}

#[test]
fn nag_solves_scalar_quadratic_in_one_step() {
    let mu = 2.0;
    let q = QuadraticProblem::diagonal(&[mu]).unwrap();
    let tr = run_nag(&q, &NagConfig::search(mu, 2.0 / mu), &[3.0], &StopRule::gap(1e-300, 10)).unwrap();
    assert_eq!(tr.iterations(), 1);
    assert_eq!(tr.records[1].f, 0.0);
    assert_eq!(tr.records[1].step, Some(0.5));

    let at_opt = run_nag(&q, &NagConfig::search(mu, 10.0), &[0.0], &StopRule::gap(1e-9, 10)).unwrap();
    assert_eq!(at_opt.iterations(), 0);
}

#[test]
fn nag_potential_contracts() {
    for seed in 0..5 {
        let q = common::random_centered_quadratic(5, 1.0, 100.0, seed);
        let mu = q.constants().mu.unwrap();
        for cfg in [NagConfig::search(mu, 1.0), NagConfig::fixed(mu, 100.0)] {
            let run = run_nag_detailed(&q, &cfg, &common::random_vec(5, 20 + seed), &StopRule::max_iters(100)).unwrap();
            let phi = |t: usize| run.trace.records[t].f + 0.5 * mu * norm_sq(&run.states[t].z);
            for t in 0..run.states.len() - 1 {
                let s = run.states[t + 1].q.sqrt();
                assert!(phi(t + 1) <= (1.0 - s) * phi(t) * (1.0 + 1e-9) + 1e-300, "seed {seed}, t = {t}");
                assert!(run.states[t + 1].eta <= 1.0 / mu);
            }
        }
    }
}

#[test]
fn momentum_form_tracks_three_sequence_form() {
    for seed in 0..5 {
        let q = common::random_quadratic(5, 0.5, 50.0, seed);
        let mu = q.constants().mu.unwrap();
        let w0 = common::random_vec(5, 30 + seed);
        let stop = StopRule::max_iters(20).keeping_iterates();
        for cfg in [NagConfig::search(mu, 2.0), NagConfig::fixed(mu, 50.0)] {
            let a = run_nag(&q, &cfg, &w0, &stop).unwrap();
            let b = nag_momentum_form(&q, &cfg, &w0, &stop).unwrap();
            assert_eq!(a.iterates.len(), b.iterates.len());
            for (x, y) in a.iterates.iter().zip(&b.iterates) {
                assert!(dist_sq(x, y).sqrt() <= 1e-8 * (1.0 + norm_sq(x).sqrt()));
            }
        }
    }
}

#[test]
fn nlcg_matches_linear_cg_and_terminates() {
    let q = polyak_quadratic();
    let tr = run_nlcg(&q, None, &[0.05, 1.0], &StopRule::gap(1e-12, 10), &LoConfig::default()).unwrap();
    assert!(tr.iterations() <= 2 && tr.final_gap().unwrap() <= 1e-12);

    for seed in 0..5 {
        let q = common::random_quadratic(6, 0.5, 20.0, seed);
        let w0 = common::random_vec(6, 40 + seed);
        let tr = run_nlcg(&q, None, &w0, &StopRule::max_iters(6).keeping_iterates(), &LoConfig::default()).unwrap();
        let oracle = common::linear_cg(q.matrix(), q.linear_term(), &w0, 6);
        for (x, y) in tr.iterates.iter().zip(&oracle) {
            assert!(dist_sq(x, y).sqrt() <= 1e-7 * (1.0 + norm_sq(y).sqrt()), "seed {seed}");
        }
        assert!(tr.final_gap().unwrap() <= 1e-9 * (1.0 + tr.records[0].gap.unwrap()));
    }
}

#[test]
fn nlcg_directions_are_conjugate_within_a_cycle() {
    let q = common::random_quadratic(5, 1.0, 10.0, 6);
    let a = q.matrix().clone();
    let tr: Trace = run_nlcg(&q, None, &common::random_vec(5, 7), &StopRule::max_iters(5).keeping_iterates(), &LoConfig::default())
        .unwrap();
    let steps: Vec<DVector<f64>> = tr
        .iterates
        .windows(2)
        .map(|p| DVector::from_vec(sub(&p[1], &p[0])))
        .collect();
    for i in 0..steps.len() {
        for j in 0..i {
            let cross = steps[i].dot(&(&a * &steps[j]));
            let scale = (steps[i].dot(&(&a * &steps[i])) * steps[j].dot(&(&a * &steps[j]))).sqrt();
            assert!(cross.abs() <= 1e-8 * scale, "p{i}ᵀ A p{j} = {cross}");
        }
    }
}

#[test]
fn nlcg_on_huber_inside_the_quadratic_region_matches_its_model() {
    let x = DMatrix::from_fn(8, 3, |i, j| ((i * (j + 1)) as f64 * 0.61 + j as f64).cos());
    let t: Vec<f64> = (0..8).map(|i| 0.05 * i as f64).collect();
    let h = HuberProblem::new(x.clone(), t.clone(), 100.0).unwrap();
    let model = h.quadratic_model().unwrap();
    let w0 = [0.1, -0.1, 0.05];
    let stop = StopRule::max_iters(3).keeping_iterates();
    let a = run_nlcg(&h, None, &w0, &stop, &LoConfig::default()).unwrap();
    let b = run_nlcg(&model, None, &w0, &stop, &LoConfig::default()).unwrap();
    for (p, r) in a.iterates.iter().zip(&b.iterates) {
        assert!(h.in_quadratic_region(p));
        assert!(dist_sq(p, r).sqrt() <= 1e-8 * (1.0 + norm_sq(r).sqrt()));
    }
    assert!(dot(&h.gradient(&a.final_w), &h.gradient(&a.final_w)).sqrt() < 1e-8);
}

#[test]
fn evaluation_counters_are_cumulative() {
    let q = common::random_quadratic(3, 1.0, 5.0, 2);
    let rules = [StepRule::Fixed { l: 5.0 }, StepRule::Armijo(ArmijoConfig::default()), StepRule::LineOptimize(LoConfig::default())];
    for rule in &rules {
        let tr = run_gd(&q, rule, &[1.0; 3], &StopRule::max_iters(10)).unwrap();
        for pair in tr.records.windows(2) {
            assert!(pair[1].f_evals >= pair[0].f_evals && pair[1].g_evals > pair[0].g_evals);
        }
        assert_eq!(tr.records[0].iter, 0);
        assert!(tr.records.windows(2).all(|p| p[1].iter == p[0].iter + 1));
    }
}

#[test]
fn polyak_without_known_optimum_is_rejected_by_stop_validation() {
    let x = DMatrix::from_row_slice(2, 1, &[1.0, 2.0]);
    let p = glocal::problems::LogisticProblem::new(x, vec![1.0, -1.0], 0.0).unwrap();
    assert!(run_gd(&p, &StepRule::Fixed { l: 1.0 }, &[0.0], &StopRule::gap(1e-3, 10)).is_err());
}
