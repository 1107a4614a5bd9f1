//! Each implementation path checked against an independent computation.

mod common;

use common::*;
use polyode::closedform::{safe_horizon, ClosedFormSolution};
use polyode::constraints::{apply_unknowns, scaled_residual};
use polyode::oracle::{integrate, integrated_closure, verify_instance_report, verify_periodic};
use polyode::periodic::{complex_time, DEFAULT_CLOSURE_TOL, SAMPLES_PER_PERIOD};
use polyode::trajectory::uniform_grid;
use polyode::*;
use rand::Rng;

#[test]
fn rhs_matches_dense_summation() {
    let mut rng = rng(1);
    for _ in 0..50 {
        let system = random_dense_system(2, 4, &mut rng);
        let z = random_state(2, 1.5, &mut rng);
        let fast = system.evaluate_rhs(&z).unwrap();
        let slow = dense_rhs(&system, &z);
        let scale = 1.0 + slow.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(max_gap(&fast, &slow) / scale < 1e-13);
    }
}

#[test]
fn sparse_matches_materialized_dense() {
    let mut rng = rng(2);
    for (n, m) in [(2, 3), (3, 2), (3, 4), (4, 3)] {
        let mut system = PolynomialSystem::new(n, m).unwrap();
        // roughly a fifth of the slots populated
        for eq in 0..n {
            for e in brute_force_indices(n, m) {
                if rng.gen_bool(0.2) {
                    system
                        .set(eq, MultiIndex::new(e), square(&mut rng, 1.0))
                        .unwrap();
                }
            }
        }
        let z = random_state(n, 1.0, &mut rng);
        let fast = system.evaluate_rhs(&z).unwrap();
        assert!(max_gap(&fast, &dense_rhs(&system, &z)) < 1e-13);
    }
}

#[test]
fn enumeration_matches_brute_force() {
    for n in 1..=4 {
        for m in 0..=5 {
            let mut expected = brute_force_indices(n, m);
            expected.sort_by(|a, b| b.cmp(a));
            let got: Vec<Vec<u32>> = enumerate_multi_indices(n, m)
                .unwrap()
                .iter()
                .map(|i| i.exponents().to_vec())
                .collect();
            assert_eq!(got, expected, "N = {n}, M = {m}");
        }
    }
}

#[test]
fn jacobian_matches_central_differences() {
    let mut rng = rng(3);
    let h = 1e-6;
    for _ in 0..50 {
        let n = rng.gen_range(2..=3);
        let m = rng.gen_range(2..=4);
        let system = random_dense_system(n, m, &mut rng);
        let z = random_state(n, 1.0, &mut rng);
        let k = square(&mut rng, 1.0);
        let jac = jacobian(&system, &z, k).unwrap();
        for j in 0..n {
            let mut plus = z.clone();
            let mut minus = z.clone();
            plus[j] += h;
            minus[j] -= h;
            let rp = dense_residual(&system, &plus, k);
            let rm = dense_residual(&system, &minus, k);
            for row in 0..n {
                let fd = (rp[row] - rm[row]) / (2.0 * h);
                assert!((fd - jac[row][j]).norm() < 1e-6, "entry ({row},{j})");
            }
        }
    }
}

#[test]
fn residual_is_affine_in_selected_unknowns() {
    let mut rng = rng(4);
    let selections = ["c:1:4-0,c:2:0-4", "K,c:2:1-3", "c:1:2-2,c:2:2-2"];
    for text in selections {
        let selection: UnknownSelection = text.parse().unwrap();
        for _ in 0..20 {
            let system = random_dense_system(2, 4, &mut rng);
            let z0 = random_state(2, 1.0, &mut rng);
            let k = square(&mut rng, 1.0);
            let u1: Vec<Complex64> = (0..2).map(|_| square(&mut rng, 2.0)).collect();
            let u2: Vec<Complex64> = (0..2).map(|_| square(&mut rng, 2.0)).collect();
            let mid: Vec<Complex64> = u1.iter().zip(&u2).map(|(a, b)| (a + b) * 0.5).collect();
            let at = |u: &[Complex64]| {
                let (s, kk) = apply_unknowns(&system, k, &selection, u).unwrap();
                dense_residual(&s, &z0, kk)
            };
            let (r1, r2, rm) = (at(&u1), at(&u2), at(&mid));
            for i in 0..2 {
                assert!((r1[i] + r2[i] - rm[i] * 2.0).norm() < 1e-12, "{text}");
            }
        }
    }
}

#[test]
fn linear_solve_on_quartic_pair() {
    let mut rng = rng(5);
    let selection: UnknownSelection = "c:1:4-0,c:2:0-4".parse().unwrap();
    for _ in 0..20 {
        let system = random_dense_system(2, 4, &mut rng);
        let z0: StateVector = (0..2)
            .map(|_| c(rng.gen_range(0.3..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let k = square(&mut rng, 1.0);
        let inst = solve_linear_selection(&system, &z0, Some(k), &selection).unwrap();
        let r = dense_residual(inst.system(), inst.z0(), inst.k());
        assert!(r.iter().all(|v| v.norm() < 1e-12));
        // the other eight coefficients are untouched
        for (eq, idx, coef) in system.iter() {
            let solved = selection.slots().iter().any(|s| match s {
                UnknownSlot::Coefficient { eq: e, index } => *e == eq && index == idx,
                UnknownSlot::RateK => false,
            });
            if !solved {
                assert_eq!(inst.system().coefficient(eq, idx), *coef);
            }
        }
    }
}

#[test]
fn newton_roots_pass_independent_residual() {
    let mut rng = rng(6);
    let system = random_dense_system(3, 3, &mut rng);
    let k = c(1.0, 0.0);
    let mut converged = 0;
    for _ in 0..30 {
        let guess: StateVector = (0..3)
            .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        if let Ok(out) = newton_solve_initial_data(&system, k, &guess, 1e-12, 100) {
            converged += 1;
            let r = dense_residual(&system, &out.z0, k);
            assert!(r.iter().all(|v| v.norm() < 1e-12));
            let h = &out.residual_history;
            if h.len() >= 3 {
                let tail = &h[h.len() - 3..];
                assert!(tail[0] > tail[1] && tail[1] > tail[2], "{h:?}");
            }
        }
    }
    assert!(converged > 0);
}

/// Central difference in time of a trajectory sampler.
fn time_derivative(f: impl Fn(f64) -> StateVector, t: f64, h: f64) -> Vec<Complex64> {
    let (p, m) = (f(t + h), f(t - h));
    p.iter()
        .zip(m.iter())
        .map(|(a, b)| (a - b) / (2.0 * h))
        .collect()
}

#[test]
fn closed_form_satisfies_the_ode() {
    for seed in 0..20 {
        let n = 2 + (seed % 2) as usize;
        let m = 2 + (seed % 3) as u32;
        let inst = generate_random_instance(n, m, seed, 1.0).unwrap();
        let sol = ClosedFormSolution::from_instance(&inst);
        let horizon = safe_horizon(inst.k());
        for i in 1..=8 {
            let t = horizon * i as f64 / 8.0;
            let h = 1e-6 * t.max(1.0);
            let lhs = time_derivative(|s| sol.eval(s).unwrap(), t.min(horizon - h), h);
            let z = sol.eval(t.min(horizon - h)).unwrap();
            let rhs = inst.system().evaluate_rhs(&z).unwrap();
            for (a, b) in lhs.iter().zip(rhs.iter()) {
                assert!(
                    (a - b).norm() <= 1e-5 * b.norm().max(1e-300),
                    "seed {seed}, t {t}"
                );
            }
        }
    }
}

#[test]
fn quadratic_closed_form_is_rational() {
    for seed in 0..10 {
        let inst = generate_random_instance(2, 2, seed, 1.0).unwrap();
        let sol = ClosedFormSolution::from_instance(&inst);
        for t in uniform_grid(safe_horizon(inst.k()), 17) {
            let z = sol.eval(t).unwrap();
            let denom = c(1.0, 0.0) + inst.k() * t;
            for (zt, z0) in z.iter().zip(inst.z0().iter()) {
                let exact = z0 / denom;
                assert!((zt - exact).norm() <= 1e-15 * exact.norm() * 4.0);
            }
        }
    }
}

#[test]
fn modulus_decays_for_positive_real_k() {
    let mut rng = rng(7);
    let system = random_dense_system(2, 3, &mut rng);
    let z0: StateVector = vec![c(0.6, 0.3), c(-0.4, 0.8)].into();
    let sel = UnknownSelection::pure_monomials(&system);
    let inst = solve_linear_selection(&system, &z0, Some(c(0.7, 0.0)), &sel).unwrap();
    let sol = ClosedFormSolution::from_instance(&inst);
    let grid = uniform_grid(20.0, 200);
    let mods: Vec<f64> = grid
        .iter()
        .map(|&t| sol.eval(t).unwrap()[0].norm())
        .collect();
    assert!(mods.windows(2).all(|w| w[1] <= w[0]));
}

fn periodic_instances() -> Vec<(SolvableInstance, f64)> {
    let mut out = Vec::new();
    for (seed, m, omega, kmod) in [
        (1u64, 4u32, 1.0, 0.1),
        (2, 3, -2.0, 0.3),
        (3, 2, 1.5, 0.2),
        (4, 4, 1.0, 1.5),
        (5, 5, 0.7, 0.1),
    ] {
        let mut rng = rng(100 + seed);
        let system = random_dense_system(2, m, &mut rng);
        let z0: StateVector = vec![c(0.5, -0.4), c(-0.3, 0.6)].into();
        let k = Complex64::from_polar(kmod, rng.gen_range(0.0..std::f64::consts::TAU));
        let sel = UnknownSelection::pure_monomials(&system);
        out.push((
            solve_linear_selection(&system, &z0, Some(k), &sel).unwrap(),
            omega,
        ));
    }
    out
}

#[test]
fn periodic_closed_form_solves_rotating_system() {
    for (inst, omega) in periodic_instances() {
        let pcf = PeriodicClosedForm::new(&inst, omega).unwrap();
        let psys = periodize(inst.system(), omega).unwrap();
        let t_b = pcf.base_period();
        let h = 1e-6;
        // dense grid, central differences at interior points
        let times: Vec<f64> = (1..40)
            .flat_map(|i| {
                let t = t_b * i as f64 / 13.0;
                [t - h, t, t + h]
            })
            .collect();
        let mut all = vec![0.0];
        all.extend(&times);
        let tr = match pcf.sample_refined(&all) {
            Ok(tr) => tr,
            Err(Error::SingularBracket { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        for i in (1..all.len()).step_by(3) {
            let (zm, z, zp) = (&tr.states[i], &tr.states[i + 1], &tr.states[i + 2]);
            let rhs = psys.eval_rhs(z).unwrap();
            let real = psys
                .eval_rhs_real(&z.iter().flat_map(|v| [v.re, v.im]).collect::<Vec<_>>())
                .unwrap();
            for n in 0..z.len() {
                let d = (zp[n] - zm[n]) / (2.0 * h);
                let scale = rhs[n].norm().max(1e-3);
                assert!((d - rhs[n]).norm() / scale < 1e-5, "omega {omega}");
                assert!((d.re - real[2 * n]).abs() / scale < 1e-5);
                assert!((d.im - real[2 * n + 1]).abs() / scale < 1e-5);
            }
        }
    }
}

#[test]
fn complex_and_real_forms_agree() {
    let mut rng = rng(8);
    for _ in 0..50 {
        let m = rng.gen_range(2..=5);
        let system = random_dense_system(3, m, &mut rng);
        let omega = rng.gen_range(0.1..3.0) * if rng.gen() { 1.0 } else { -1.0 };
        let psys = periodize(&system, omega).unwrap();
        let w = random_state(3, 1.0, &mut rng);
        let cf = psys.eval_rhs(&w).unwrap();
        let rf = psys
            .eval_rhs_real(&w.iter().flat_map(|v| [v.re, v.im]).collect::<Vec<_>>())
            .unwrap();
        // independent two-term assembly
        let poly = dense_rhs(&system, &w);
        let rate = omega / (m as f64 - 1.0);
        for n in 0..3 {
            assert!(
                (cf[n].re - rf[2 * n]).abs() < 1e-14 && (cf[n].im - rf[2 * n + 1]).abs() < 1e-14
            );
            let hand = c(0.0, rate) * w[n] + poly[n];
            assert!((cf[n] - hand).norm() < 1e-13);
        }
    }
}

#[test]
fn complex_time_approaches_real_time() {
    for omega in [1e-3f64, 0.5, 1.0, -4.0] {
        for t in [1e-9, 1e-6, 1.0] {
            if (omega * t).abs() > 1e-8 {
                continue;
            }
            let tau = complex_time(omega, t);
            assert!((tau - c(t, 0.0)).norm() / t <= 1e-8);
        }
    }
    // at |omega t| = 1e-4 the relative gap is |omega t| / 2 to leading order
    let tau = complex_time(1.0, 1e-4);
    let rel = (tau - c(1e-4, 0.0)).norm() / 1e-4;
    assert!((rel - 5e-5).abs() < 1e-10);
}

#[test]
fn detected_periods_close_and_are_minimal() {
    for (inst, omega) in periodic_instances() {
        let pcf = PeriodicClosedForm::new(&inst, omega).unwrap();
        let report = match pcf.detect_period(DEFAULT_CLOSURE_TOL) {
            Ok(r) => r,
            Err(Error::SingularBracket { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        assert_eq!(report.k, pcf.predicted_multiple(report.q));
        assert!(report.closure_error <= DEFAULT_CLOSURE_TOL);
        if report.k > 1 {
            let half = pcf.sample_refined(&[0.0, report.period / 2.0]).unwrap();
            assert!(max_gap(&half.states[1], inst.z0()) > DEFAULT_CLOSURE_TOL);
            let errors = pcf.closure_errors(report.k).unwrap();
            assert!(errors[..report.k as usize - 1]
                .iter()
                .all(|&e| e > DEFAULT_CLOSURE_TOL));
        }
        let closure = integrated_closure(&pcf, report.k, &IntegratorConfig::default()).unwrap();
        assert!(closure < 1e-6, "integrated closure {closure}");
    }
}

#[test]
fn small_k_periods() {
    let mut rng = rng(9);
    for (m, expected) in [(2u32, 1u64), (3, 2), (4, 3), (5, 4)] {
        let system = random_dense_system(2, m, &mut rng);
        let z0: StateVector = vec![c(0.7, 0.1), c(-0.2, 0.5)].into();
        let sel = UnknownSelection::pure_monomials(&system);
        let inst = solve_linear_selection(&system, &z0, Some(c(0.05, -0.1)), &sel).unwrap();
        let pcf = PeriodicClosedForm::new(&inst, 1.0).unwrap();
        let report = pcf.detect_period(DEFAULT_CLOSURE_TOL).unwrap();
        assert_eq!((report.q, report.k), (0, expected), "M = {m}");
    }
}

#[test]
fn strict_grid_matches_refined_sampling() {
    let (inst, omega) = periodic_instances().remove(0);
    let pcf = PeriodicClosedForm::new(&inst, omega).unwrap();
    let grid = uniform_grid(3.0 * pcf.base_period(), 3 * SAMPLES_PER_PERIOD + 1);
    let strict = pcf.eval_grid(&grid).unwrap();
    let coarse: Vec<f64> = grid.iter().step_by(256).copied().collect();
    let refined = pcf.sample_refined(&coarse).unwrap();
    for (i, s) in refined.states.iter().enumerate() {
        assert!(max_gap(s, &strict.states[i * 256]) < 1e-13);
    }
}

#[test]
fn integrator_matches_riccati_closed_form() {
    let system = PolynomialSystem::new(2, 2)
        .unwrap()
        .with(0, &[2, 0], c(1.0, 0.0))
        .unwrap();
    let inst =
        SolvableInstance::new(system, vec![c(1.0, 0.0), c(0.0, 0.0)].into(), c(-1.0, 0.0)).unwrap();
    let v = verify_instance_report(&inst, 0.5, 64, &IntegratorConfig::default()).unwrap();
    assert!(v.max_deviation < 1e-8);
    // past the blow-up time the verifier refuses
    assert!(verify_instance(&inst, 1.2, 16, &IntegratorConfig::default()).is_err());
}

#[test]
fn verifier_detects_broken_constraints() {
    for seed in 0..5 {
        let inst = generate_random_instance(2, 3, seed, 1.0).unwrap();
        let broken = SolvableInstance::with_tolerance(
            inst.system().clone(),
            inst.z0().clone(),
            inst.k() + c(1e-2, 0.0),
            f64::INFINITY,
        )
        .unwrap();
        assert!(scaled_residual(broken.system(), broken.z0(), broken.k()).unwrap() > 1e-4);
        let dev = verify_instance(&broken, 0.5, 64, &IntegratorConfig::default()).unwrap();
        assert!(dev > 1e-4, "seed {seed}: {dev}");
    }
}

#[test]
fn zero_instance_has_zero_deviation() {
    let system = random_dense_system(2, 3, &mut rng(10));
    let inst = SolvableInstance::new(system, StateVector::zeros(2), c(0.3, 0.1)).unwrap();
    assert_eq!(
        verify_instance(&inst, 0.8, 16, &IntegratorConfig::default()).unwrap(),
        0.0
    );
}

#[test]
fn tighter_tolerances_do_not_hurt() {
    let config = IntegratorConfig::default().scaled(100.0);
    for seed in 0..10 {
        let inst = generate_random_instance(2, 4, seed, 1.0).unwrap();
        let t_end = safe_horizon(inst.k());
        let loose = verify_instance(&inst, t_end, 64, &config).unwrap();
        let tight = verify_instance(&inst, t_end, 64, &config.scaled(0.5)).unwrap();
        assert!(tight <= 2.0 * loose, "seed {seed}: {tight} vs {loose}");
    }
}

#[test]
fn forward_then_backward_returns_home() {
    let config = IntegratorConfig::default();
    for seed in 0..5 {
        let inst = generate_random_instance(2, 3, seed, 1.0).unwrap();
        let t_end = 0.5;
        let system = inst.system();
        let fwd = integrate(
            |z| system.evaluate_rhs(z).unwrap(),
            inst.z0(),
            t_end,
            &[t_end],
            &config,
        )
        .unwrap();
        let exact = ClosedFormSolution::from_instance(&inst)
            .eval(t_end)
            .unwrap();
        let one_way = max_gap(&fwd.states[0], &exact).max(config.abs_tol);
        let back = integrate(
            |z| system.evaluate_rhs(z).unwrap().iter().map(|v| -v).collect(),
            &fwd.states[0],
            t_end,
            &[t_end],
            &config,
        )
        .unwrap();
        let home = max_gap(&back.states[0], inst.z0());
        assert!(home <= 10.0 * one_way, "seed {seed}: {home} vs {one_way}");
    }
}

#[test]
fn pure_rotation_verifies_exactly() {
    // K = 0 with a vanishing polynomial part leaves only the rotation
    let system = PolynomialSystem::new(2, 4).unwrap();
    let inst =
        SolvableInstance::new(system, vec![c(0.8, 0.1), c(-0.3, 0.4)].into(), c(0.0, 0.0)).unwrap();
    let pcf = PeriodicClosedForm::new(&inst, 1.0).unwrap();
    let dev = verify_periodic(&pcf, 3, 97, &IntegratorConfig::default()).unwrap();
    assert!(dev < 1e-10, "{dev}");
}

#[test]
fn generated_quadratic_batch_verifies() {
    let config = IntegratorConfig::default();
    for seed in 0..100 {
        let inst = generate_random_instance(2, 2, seed, 1.0).unwrap();
        let dev = verify_instance(&inst, safe_horizon(inst.k()), 32, &config).unwrap();
        assert!(dev < 1e-6, "seed {seed}: {dev}");
    }
}

#[test]
fn rk4_agrees_with_adaptive_pair() {
    let inst = generate_random_instance(3, 3, 12, 1.0).unwrap();
    let system = inst.system();
    let rk4 =
        polyode::oracle::integrate_rk4(|z| system.evaluate_rhs(z).unwrap(), inst.z0(), 0.5, 2000)
            .unwrap();
    let dp = integrate(
        |z| system.evaluate_rhs(z).unwrap(),
        inst.z0(),
        0.5,
        &[0.5],
        &IntegratorConfig::default(),
    )
    .unwrap();
    assert!(max_gap(rk4.last().unwrap().1, &dp.states[0]) < 1e-9);
}

#[test]
fn system_file_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = rng(13);
    for i in 0..20 {
        let system = random_dense_system(2, 4, &mut rng);
        assert_eq!(system.num_terms(), 10);
        let path = dir.path().join(format!("s{i}.json"));
        polyode::io::write_system_file(&path, &system).unwrap();
        let back = polyode::io::parse_system_file(&path).unwrap();
        for (eq, idx, coef) in system.iter() {
            let got = back.coefficient(eq, idx);
            assert_eq!(got.re.to_bits(), coef.re.to_bits());
            assert_eq!(got.im.to_bits(), coef.im.to_bits());
        }
        assert_eq!(back, system);
    }
}
