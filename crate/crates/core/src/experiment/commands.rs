use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{blp_measure, exact_decomposition, EntropyLedger, ExactRow};
use crate::engine::{run_trajectory, Trajectory};
use crate::model::{bloch_state, ModelParams, Strategy};
use crate::qmath::trace_distance;
use crate::{Error, Result};

use super::ExperimentConfig;

/// Pairs closer than this in trace distance are reported as degenerate.
pub const DEGENERATE_PAIR_TOL: f64 = 1e-12;

/// Strategies compared at every sweep grid point, in output order.
pub const SWEEP_STRATEGIES: [Strategy; 3] = [Strategy::Markovian, Strategy::Strategy1, Strategy::Strategy2];

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SimulationRow {
    pub step: usize,
    pub trace_dist_to_fixed_point: f64,
    pub sigma_cumulative: f64,
    pub sigma_rate: f64,
    /// Cumulative energy absorbed by the environment pairs.
    pub heat_cumulative: f64,
    pub system_excited_pop: f64,
    pub system_coherence_abs: f64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SimulationSummary {
    pub strategy: Strategy,
    pub n_collisions: usize,
    pub final_sigma: f64,
    pub min_sigma_rate: f64,
    pub min_sigma_rate_step: usize,
    pub final_sigma_rate: f64,
    pub final_trace_dist_to_fixed_point: f64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Simulation {
    pub rows: Vec<SimulationRow>,
    pub summary: SimulationSummary,
}

fn min_rate(ledger: &EntropyLedger) -> (usize, f64) {
    ledger
        .rate
        .iter()
        .enumerate()
        .skip(1)
        .fold((0, f64::INFINITY), |best, (i, &r)| if r < best.1 { (i, r) } else { best })
}

fn simulate_params(params: &ModelParams, cfg: &ExperimentConfig) -> Result<Simulation> {
    let traj = run_trajectory(params, &cfg.initial_system()?)?;
    let ledger = EntropyLedger::from_trajectory(&traj)?;
    let star = params.env_thermal();
    let mut heat = 0.0;
    let rows = traj
        .systems()
        .enumerate()
        .map(|(i, s)| {
            heat += ledger.heat[i];
            Ok(SimulationRow {
                step: i,
                trace_dist_to_fixed_point: trace_distance(s, &star)?,
                sigma_cumulative: ledger.cumulative_sigma[i],
                sigma_rate: ledger.rate[i],
                heat_cumulative: heat,
                system_excited_pop: s.population(0),
                system_coherence_abs: s.entry(0, 1).norm(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (min_step, min) = min_rate(&ledger);
    let last = rows.last().expect("at least the initial row");
    let summary = SimulationSummary {
        strategy: params.strategy,
        n_collisions: params.n_collisions,
        final_sigma: last.sigma_cumulative,
        min_sigma_rate: min,
        min_sigma_rate_step: min_step,
        final_sigma_rate: last.sigma_rate,
        final_trace_dist_to_fixed_point: last.trace_dist_to_fixed_point,
    };
    Ok(Simulation { rows, summary })
}

/// One trajectory with the configured strategy, one row per collision.
pub fn simulate(cfg: &ExperimentConfig) -> Result<Simulation> {
    cfg.validate()?;
    simulate_params(&cfg.model_params(), cfg)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BlpRow {
    pub step: usize,
    pub d_strategy1: f64,
    pub d_strategy2: f64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BlpReport {
    pub rows: Vec<BlpRow>,
    pub measure_strategy1: f64,
    pub measure_strategy2: f64,
    pub degenerate_pair: bool,
}

impl BlpReport {
    pub fn warnings(&self) -> Vec<String> {
        if self.degenerate_pair {
            vec!["blp pair_a and pair_b are (numerically) the same state; the measure is trivially 0".into()]
        } else {
            Vec::new()
        }
    }
}

fn pair_trajectories(params: &ModelParams, cfg: &ExperimentConfig) -> Result<(Trajectory, Trajectory)> {
    let a = run_trajectory(params, &bloch_state(cfg.blp.pair_a)?)?;
    let b = run_trajectory(params, &bloch_state(cfg.blp.pair_b)?)?;
    Ok((a, b))
}

/// Trace distance of the configured pair under both strategies.
pub fn blp(cfg: &ExperimentConfig) -> Result<BlpReport> {
    cfg.validate()?;
    let base = cfg.model_params();
    let mut results = Vec::with_capacity(2);
    for strategy in [Strategy::Strategy1, Strategy::Strategy2] {
        let (a, b) = pair_trajectories(&base.clone().with_strategy(strategy), cfg)?;
        results.push(blp_measure(&a, &b)?);
    }
    let (s1, s2) = (&results[0], &results[1]);
    let rows = s1
        .pair_distances
        .iter()
        .zip(&s2.pair_distances)
        .enumerate()
        .map(|(step, (&d1, &d2))| BlpRow { step, d_strategy1: d1, d_strategy2: d2 })
        .collect();
    Ok(BlpReport {
        rows,
        measure_strategy1: s1.measure,
        measure_strategy2: s2.measure,
        degenerate_pair: s1.pair_distances[0] < DEGENERATE_PAIR_TOL,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SweepRow {
    pub epsilon_frac: f64,
    pub t_e: f64,
    pub strategy: Strategy,
    pub blp_measure: f64,
    pub min_sigma_rate: f64,
    pub steady_sigma: f64,
}

fn sorted_grid(values: Option<&Vec<f64>>, fallback: f64) -> Vec<f64> {
    let mut v = values.cloned().unwrap_or_else(|| vec![fallback]);
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn sweep_point(cfg: &ExperimentConfig, eps: f64, t_e: f64, strategy: Strategy) -> Result<SweepRow> {
    let point = ExperimentConfig { epsilon_frac: eps, t_e, strategy, ..cfg.clone() };
    let params = point.model_params();
    let sim = simulate_params(&params, &point)?;
    let (a, b) = pair_trajectories(&params, &point)?;
    Ok(SweepRow {
        epsilon_frac: eps,
        t_e,
        strategy,
        blp_measure: blp_measure(&a, &b)?.measure,
        min_sigma_rate: sim.summary.min_sigma_rate,
        steady_sigma: sim.summary.final_sigma,
    })
}

/// Grid over `sweep.epsilon_frac` x `sweep.t_e` (each defaulting to the
/// single configured value) for every strategy in [`SWEEP_STRATEGIES`].
/// Rows are sorted by `(epsilon_frac, t_e, strategy)` regardless of the
/// worker count.
pub fn sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let grid = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("sweep needs a [sweep] section".into()))?;
    let eps = sorted_grid(grid.epsilon_frac.as_ref(), cfg.epsilon_frac);
    let temps = sorted_grid(grid.t_e.as_ref(), cfg.t_e);
    let points: Vec<(f64, f64, Strategy)> = eps
        .iter()
        .flat_map(|&e| temps.iter().flat_map(move |&t| SWEEP_STRATEGIES.map(|s| (e, t, s))))
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = grid.workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start {} sweep workers: {e}", grid.workers.unwrap_or(0))))?;
    pool.install(|| points.par_iter().map(|&(e, t, s)| sweep_point(cfg, e, t, s)).collect())
}

/// Exact-chain decomposition with `exact.n_env` environment qubits.
pub fn exact(cfg: &ExperimentConfig) -> Result<Vec<ExactRow>> {
    cfg.validate()?;
    let ex = cfg
        .exact
        .as_ref()
        .ok_or_else(|| Error::Config("exact needs an [exact] section with n_env".into()))?;
    let params = ModelParams {
        n_collisions: ex.n_collisions.unwrap_or(ex.n_env),
        strategy: Strategy::Exact,
        ..cfg.model_params()
    };
    exact_decomposition(&params, &cfg.initial_system()?, ex.n_env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{parse_config, SweepConfig};

    fn small(extra: &str) -> ExperimentConfig {
        parse_config(&format!("n_collisions = 60\n{extra}")).unwrap()
    }

    #[test]
    fn nu_zero_freezes_observables() {
        let sim = simulate(&small("nu_frac = 0.0")).unwrap();
        let first = &sim.rows[0];
        for r in &sim.rows {
            assert!((r.trace_dist_to_fixed_point - first.trace_dist_to_fixed_point).abs() < 1e-15);
            assert!((r.system_excited_pop - first.system_excited_pop).abs() < 1e-15);
            assert!((r.system_coherence_abs - first.system_coherence_abs).abs() < 1e-15);
            assert!(r.sigma_cumulative.abs() < 1e-13 && r.heat_cumulative.abs() < 1e-13);
        }
    }

    #[test]
    fn markovian_sigma_monotone() {
        let sim = simulate(&small("strategy = \"markovian\"")).unwrap();
        assert!(sim.rows.windows(2).all(|w| w[1].sigma_cumulative >= w[0].sigma_cumulative - 1e-12));
    }

    #[test]
    fn blp_zero_at_epsilon_zero() {
        let rep = blp(&small("epsilon_frac = 0.0")).unwrap();
        assert!(rep.measure_strategy1.abs() < 1e-12 && rep.measure_strategy2.abs() < 1e-12);
        assert!(!rep.degenerate_pair);
    }

    #[test]
    fn identical_pair_warns() {
        let rep = blp(&small("[blp]\npair_a = [0.0, 0.0, 1.0]\npair_b = [0.0, 0.0, 1.0]")).unwrap();
        assert!(rep.degenerate_pair);
        assert_eq!(rep.warnings().len(), 1);
        assert_eq!(rep.measure_strategy1, 0.0);
        assert_eq!(rep.measure_strategy2, 0.0);
    }

    #[test]
    fn single_point_sweep_matches_simulate() {
        let mut cfg = small("strategy = \"strategy1\"");
        cfg.sweep = Some(SweepConfig::default());
        let rows = sweep(&cfg).unwrap();
        assert_eq!(rows.len(), SWEEP_STRATEGIES.len());
        let sim = simulate(&cfg).unwrap();
        let row = rows.iter().find(|r| r.strategy == Strategy::Strategy1).unwrap();
        assert_eq!(row.steady_sigma, sim.summary.final_sigma);
        assert_eq!(row.min_sigma_rate, sim.summary.min_sigma_rate);
    }

    #[test]
    fn sweep_rows_are_ordered_and_worker_independent() {
        let base = small("[sweep]\nepsilon_frac = [0.95, 0.5]\nt_e = [2.0, 1.0]");
        let one = sweep(&ExperimentConfig {
            sweep: Some(SweepConfig { workers: Some(1), ..base.sweep.clone().unwrap() }),
            ..base.clone()
        })
        .unwrap();
        let four = sweep(&ExperimentConfig {
            sweep: Some(SweepConfig { workers: Some(4), ..base.sweep.clone().unwrap() }),
            ..base
        })
        .unwrap();
        assert_eq!(one, four);
        let keys: Vec<(f64, f64)> = one.iter().map(|r| (r.epsilon_frac, r.t_e)).collect();
        assert_eq!(keys[0], (0.5, 1.0));
        assert_eq!(keys[11], (0.95, 2.0));
        assert!(keys.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn sweep_without_section_is_config_error() {
        assert!(matches!(sweep(&small("")), Err(Error::Config(_))));
    }

    #[test]
    fn exact_single_collision_terms_nonnegative() {
        let rows = exact(&small("[exact]\nn_env = 1")).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[1].mutual_info >= 0.0 && rows[1].env_relent >= 0.0);
    }

    #[test]
    fn exact_more_collisions_than_env_is_error() {
        let mut cfg = small("");
        cfg.exact = Some(crate::experiment::ExactConfig { n_env: 3, n_collisions: Some(4) });
        assert!(exact(&cfg).is_err());
    }
}
