//! The bath Gibbs state is left invariant by every variant of the dynamics.

use qcollide::engine::run_trajectory;
use qcollide::model::{ModelParams, Strategy};
use qcollide::qmath::trace_distance;

fn main() -> qcollide::Result<()> {
    for strategy in [Strategy::Markovian, Strategy::Strategy1, Strategy::Strategy2] {
        let p = ModelParams { strategy, ..ModelParams::default() };
        let star = p.env_thermal();
        let traj = run_trajectory(&p, &star)?;
        let worst = traj
            .systems()
            .map(|s| trace_distance(s, &star))
            .collect::<qcollide::Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!("{strategy:<10} max D(ρ_i, ρ_*) over {} collisions = {worst:.2e}", p.n_collisions);
    }
    Ok(())
}
