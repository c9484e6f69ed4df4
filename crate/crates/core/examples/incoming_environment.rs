//! Reduced state of the bath qubit about to meet the system, Strategy 1 vs
//! Strategy 2. They agree for the first collision and then drift apart: the
//! system-bath coherence kept by Strategy 2 feeds back into the bath qubit's
//! population at the next collision.

use qcollide::engine::{incoming_env_state, run_trajectory};
use qcollide::model::{ModelParams, Strategy};
use qcollide::qmath::trace_distance;

fn main() -> qcollide::Result<()> {
    let p = ModelParams { n_collisions: 500, strategy: Strategy::Strategy1, ..ModelParams::default() };
    let init = p.system_thermal();
    let s1 = run_trajectory(&p, &init)?;
    let s2 = run_trajectory(&p.with_strategy(Strategy::Strategy2), &init)?;
    println!("collision  pop S1       pop S2       D");
    for (i, (a, b)) in s1.snapshots.iter().zip(&s2.snapshots).enumerate() {
        if i < 5 || i % 50 == 0 {
            let (ea, eb) = (incoming_env_state(a), incoming_env_state(b));
            println!("{i:>9}  {:.9}  {:.9}  {:.3e}", ea.population(0), eb.population(0), trace_distance(ea, eb)?);
        }
    }
    Ok(())
}
