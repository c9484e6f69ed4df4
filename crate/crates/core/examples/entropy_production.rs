//! Entropy production and its rate. Strategy 1 keeps a positive rate even
//! though it is non-Markovian; Strategy 2 goes negative in the transient.

use qcollide::analysis::EntropyLedger;
use qcollide::engine::run_trajectory;
use qcollide::model::{ModelParams, Strategy};

fn main() -> qcollide::Result<()> {
    for strategy in [Strategy::Markovian, Strategy::Strategy1, Strategy::Strategy2] {
        let p = ModelParams { strategy, ..ModelParams::default() };
        let traj = run_trajectory(&p, &p.system_thermal())?;
        let l = EntropyLedger::from_trajectory(&traj)?;
        let (at, min) = l
            .rate
            .iter()
            .enumerate()
            .skip(1)
            .fold((0, f64::INFINITY), |m, (i, &r)| if r < m.1 { (i, r) } else { m });
        let negative = l.rate.iter().filter(|r| **r < 0.0).count();
        println!(
            "{strategy:<10} Σ_∞ = {:.9}  min rate {min:+.3e} at {at}  negative steps {negative}",
            l.final_sigma()
        );
    }
    let p = ModelParams::default();
    let l = EntropyLedger::from_trajectory(&run_trajectory(&p, &p.system_thermal())?)?;
    println!("\nstrategy2 rate, first 60 collisions:");
    for chunk in l.rate[1..61].chunks(6) {
        println!("  {}", chunk.iter().map(|r| format!("{r:+.2e}")).collect::<Vec<_>>().join(" "));
    }
    Ok(())
}
