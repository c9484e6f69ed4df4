//! Markovian limit: a cold qubit relaxes to the bath temperature through
//! repeated partial swaps with fresh bath qubits.

use qcollide::engine::run_trajectory;
use qcollide::model::{excited_population, ModelParams, Strategy};
use qcollide::qmath::trace_distance;

fn main() -> qcollide::Result<()> {
    let p = ModelParams { strategy: Strategy::Markovian, n_collisions: 600, ..ModelParams::default() };
    let traj = run_trajectory(&p, &p.system_thermal())?;
    let star = p.env_thermal();
    let target = excited_population(p.beta_e(), p.omega_e);
    let c2 = p.nu.cos().powi(2);
    println!("collision  excited_pop  closed_form  D(ρ_i, ρ_*)");
    for (i, s) in traj.systems().enumerate().step_by(100) {
        // p_i = p_E + cos^{2i}ν (p_0 - p_E)
        let closed = target + c2.powi(i as i32) * (traj.initial_system().population(0) - target);
        println!("{i:>9}  {:.9}  {closed:.9}  {:.3e}", s.population(0), trace_distance(s, &star)?);
    }
    Ok(())
}
