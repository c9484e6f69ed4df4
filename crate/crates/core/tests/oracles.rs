mod common;

use std::f64::consts::FRAC_PI_2;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use qcollide::engine::run_trajectory;
use qcollide::model::{bloch_state, excited_population, thermal_state, ModelParams, Strategy};
use qcollide::qmath::{partial_trace, relative_entropy, trace_distance};

fn markovian(nu: f64, t_e: f64, omega: f64, n: usize) -> ModelParams {
    ModelParams {
        t_e,
        omega_s: omega,
        omega_e: omega,
        nu,
        n_collisions: n,
        strategy: Strategy::Markovian,
        ..ModelParams::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn partial_trace_matches_index_summation(seed in any::<u64>(), k in 1usize..=4, mask in 1u32..16, rot in 0usize..4) {
        let mut r = rng(seed);
        let rho = random_state(&mut r, k);
        let mut keep: Vec<usize> = (0..k).filter(|q| mask & (1 << q) != 0).collect();
        prop_assume!(!keep.is_empty());
        let len = keep.len();
        keep.rotate_left(rot % len);
        let got = partial_trace(&rho, &keep).unwrap();
        prop_assert!(max_diff(&got, &partial_trace_oracle(&rho, &keep)) <= 1e-12);
    }

    #[test]
    fn markovian_step_matches_closed_form(seed in any::<u64>(), nu in 0.0..FRAC_PI_2, t_e in 0.05f64..20.0, omega in 0.1f64..3.0) {
        let mut r = rng(seed);
        let rho = bloch_state(random_bloch(&mut r, 1.0)).unwrap();
        let traj = run_trajectory(&markovian(nu, t_e, omega, 1), &rho).unwrap();
        let e = excited_population(1.0 / t_e, omega);
        let want = markovian_step_oracle(as_2x2(&rho), e, nu);
        let got = as_2x2(traj.final_system());
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((got[i][j] - want[i][j]).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn markovian_populations_follow_recursion(seed in any::<u64>(), nu in 0.0..FRAC_PI_2, t_e in 0.05f64..20.0) {
        let mut r = rng(seed);
        let rho = bloch_state(random_bloch(&mut r, 1.0)).unwrap();
        let traj = run_trajectory(&markovian(nu, t_e, 1.0, 25), &rho).unwrap();
        let pe = thermal_excited(1.0 / t_e, 1.0);
        let mut p = rho.population(0);
        for s in traj.systems().skip(1) {
            p = markovian_population_oracle(p, pe, nu);
            prop_assert!((s.population(0) - p).abs() <= 1e-12);
        }
    }

    #[test]
    fn trace_distance_decays_geometrically(seed in any::<u64>(), nu in 0.01..FRAC_PI_2 - 0.01, t_e in 0.1f64..10.0, omega in 0.1f64..3.0) {
        let mut r = rng(seed);
        // same populations, different coherences
        let z = r.gen_range(-0.5..0.5);
        let a = bloch_state([0.6, 0.2, z]).unwrap();
        let b = bloch_state([-0.3, 0.7, z]).unwrap();
        let p = markovian(nu, t_e, omega, 3);
        let ta = run_trajectory(&p, &a).unwrap();
        let tb = run_trajectory(&p, &b).unwrap();
        let d: Vec<f64> = ta.systems().zip(tb.systems()).map(|(x, y)| trace_distance(x, y).unwrap()).collect();
        let want = decay_ratio_oracle(nu, 1.0 / t_e, omega);
        for w in d.windows(2) {
            prop_assert!((w[1] / w[0] - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn thermal_state_closed_form(beta in 0.01f64..50.0, omega in -3.0f64..3.0) {
        let rho = thermal_state(beta, omega).unwrap();
        prop_assert!((rho.population(0) - thermal_excited(beta, omega)).abs() <= 1e-14);
        prop_assert_eq!(rho.population(0) + rho.population(1), 1.0);
    }

    #[test]
    fn diagonal_relative_entropy(p in 0.0f64..1.0, q in 0.01f64..0.99) {
        let a = thermal_like(p);
        let b = thermal_like(q);
        prop_assert!((relative_entropy(&a, &b).unwrap() - diagonal_relent(p, q)).abs() <= 1e-12);
    }
}

fn thermal_like(p: f64) -> qcollide::qmath::DensityMatrix {
    qcollide::qmath::DensityMatrix::from_populations(&[p, 1.0 - p]).unwrap()
}
