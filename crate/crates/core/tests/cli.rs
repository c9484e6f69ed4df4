use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use qcollide::experiment::{
    parse_config, ExactConfig, ExperimentConfig, OutputConfig, OutputFormat, SweepConfig,
};
use qcollide::model::Strategy as Dynamics;

fn qcollide(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcollide")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

/// Data rows of a CSV report, split into fields.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(text: &str, name: &str) -> Vec<f64> {
    let header: Vec<&str> = text.lines().find(|l| !l.starts_with('#')).unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    rows(text).iter().map(|r| r[idx].parse().unwrap()).collect()
}

#[test]
fn simulate_to_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested/run.csv");
    let cfg = write(dir.path(), "c.toml", &format!("n_collisions = 150\n[output]\npath = {:?}\n", out.display().to_string()));
    assert!(qcollide(&["simulate", "-c", &cfg]).status.success());
    let first = std::fs::read(&out).unwrap();
    assert!(qcollide(&["simulate", "-c", &cfg]).status.success());
    assert_eq!(first, std::fs::read(&out).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert_eq!(rows(&text).len(), 151);
    assert!(text.contains("# n_collisions = 150"));
}

#[test]
fn strategy2_rate_goes_negative_markovian_does_not() {
    let s2 = qcollide(&["simulate", "--n_collisions", "200"]);
    let text = String::from_utf8(s2.stdout).unwrap();
    assert!(column(&text, "sigma_rate").iter().any(|&r| r < 0.0));

    let m = qcollide(&["simulate", "--n_collisions", "200", "--strategy", "markovian"]);
    let sigma = column(&String::from_utf8(m.stdout).unwrap(), "sigma_cumulative");
    assert!(sigma.windows(2).all(|w| w[1] >= w[0] - 1e-12));
}

#[test]
fn flags_override_file_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "t_e = 2.0\nn_collisions = 5\n");
    let out = qcollide(&["simulate", "-c", &cfg, "--t_e", "3", "--output.format=json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let embedded = parse_config(v["config_toml"].as_str().unwrap()).unwrap();
    assert_eq!(embedded.t_e, 3.0);
    assert_eq!(embedded.n_collisions, 5);
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], i32); 6] = [
        (&["simulate", "--epsilon_frac", "1.2"], 2),
        (&["simulate", "--no_such_key", "1"], 2),
        (&["sweep", "--n_collisions", "3"], 2),
        (&["exact", "--exact.n_env", "14"], 3),
        (&["simulate", "-c", "/nonexistent/config.toml"], 4),
        (&["simulate", "--n_collisions", "2", "--output.path", "/proc/nope/out.csv"], 4),
    ];
    for (args, code) in cases {
        let out = qcollide(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
    let bad = write(dir.path(), "bad.toml", "epsilon_frac = 0.5\nwhatever = 1\n");
    let out = qcollide(&["simulate", "-c", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("whatever"));
}

#[test]
fn blp_reports_both_strategies() {
    let out = qcollide(&["blp", "--n_collisions", "400"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let grab = |key: &str| -> f64 {
        let line = text.lines().find(|l| l.contains(key)).unwrap();
        line.rsplit(' ').next().unwrap().parse().unwrap()
    };
    let (n1, n2) = (grab("blp_measure_strategy1"), grab("blp_measure_strategy2"));
    assert!(n2 > n1 && n1 > 0.0, "{n1} {n2}");
    assert_eq!(rows(&text).len(), 401);

    let same = qcollide(&["blp", "--n_collisions", "3", "--blp.pair_b", "[1.0, 0.0, 0.0]"]);
    assert!(same.status.success());
    assert!(String::from_utf8_lossy(&same.stderr).contains("warning"));
}

#[test]
fn sweep_reproduces_epsilon_threshold() {
    let out = qcollide(&["sweep", "--sweep.epsilon_frac", "[0.95, 0.90, 0.92]", "--sweep.workers", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let s1: Vec<(f64, f64)> = rows(&text)
        .iter()
        .filter(|r| r[2] == "strategy1")
        .map(|r| (r[0].parse().unwrap(), r[3].parse().unwrap()))
        .collect();
    assert_eq!(s1.len(), 3);
    assert_eq!(s1[0].0, 0.90);
    assert!(s1[0].1 <= 1e-12 && s1[1].1 <= 1e-12 && s1[2].1 > 0.0, "{s1:?}");
}

#[test]
fn exact_discrepancy_column_small() {
    let out = qcollide(&["exact", "--exact.n_env", "8"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let d = column(&text, "max_discrepancy");
    assert_eq!(d.len(), 9);
    assert!(d.iter().all(|&x| x <= 1e-10));
}

fn frac() -> impl proptest::strategy::Strategy<Value = f64> {
    0.0f64..=1.0
}

fn strategy() -> impl proptest::strategy::Strategy<Value = Dynamics> {
    prop_oneof![
        Just(Dynamics::Markovian),
        Just(Dynamics::Strategy1),
        Just(Dynamics::Strategy2),
        Just(Dynamics::Exact),
    ]
}

prop_compose! {
    fn config()(
        t_s in prop_oneof![0.01f64..100.0, Just(f64::INFINITY)],
        t_e in 0.01f64..100.0,
        omega_s in -5.0f64..5.0,
        omega_e in -5.0f64..5.0,
        nu_frac in frac(),
        epsilon_frac in frac(),
        n in 1usize..=13,
        strategy in strategy(),
        bloch in proptest::option::of([-0.5f64..0.5, -0.5f64..0.5, -0.5f64..0.5]),
        json in any::<bool>(),
        path in proptest::option::of("[a-z]{1,8}\\.csv"),
        eps_grid in proptest::option::of(proptest::collection::vec(frac(), 1..4)),
        te_grid in proptest::option::of(proptest::collection::vec(0.1f64..10.0, 1..4)),
        workers in proptest::option::of(1usize..8),
        exact in proptest::option::of((1usize..=13, any::<bool>())),
    ) -> ExperimentConfig {
        let mut cfg = ExperimentConfig {
            t_s, t_e, omega_s, omega_e, nu_frac, epsilon_frac, n_collisions: n, strategy,
            ..ExperimentConfig::default()
        };
        cfg.initial.bloch = bloch;
        cfg.output = OutputConfig { format: if json { OutputFormat::Json } else { OutputFormat::Csv }, path };
        if eps_grid.is_some() || te_grid.is_some() || workers.is_some() {
            cfg.sweep = Some(SweepConfig { epsilon_frac: eps_grid, t_e: te_grid, workers });
        }
        cfg.exact = exact.map(|(n_env, explicit)| ExactConfig { n_env, n_collisions: explicit.then_some(n_env) });
        cfg
    }
}

proptest! {
    #[test]
    fn config_round_trips(cfg in config()) {
        cfg.validate().unwrap();
        let text = cfg.to_toml().unwrap();
        prop_assert_eq!(parse_config(&text).unwrap(), cfg);
    }
}
