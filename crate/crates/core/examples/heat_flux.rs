//! Entropy flux into the bath. Counting only the qubit that touched the
//! system misses the energy passed on to the next one.

use qcollide::analysis::EntropyLedger;
use qcollide::engine::run_trajectory;
use qcollide::model::{ModelParams, Strategy};

fn main() -> qcollide::Result<()> {
    for strategy in [Strategy::Markovian, Strategy::Strategy1, Strategy::Strategy2] {
        let p = ModelParams { strategy, ..ModelParams::default() };
        let l = EntropyLedger::from_trajectory(&run_trajectory(&p, &p.system_thermal())?)?;
        let pair = *l.sigma_two_qubit_flux().last().unwrap();
        let naive = *l.sigma_naive_flux().last().unwrap();
        println!(
            "{strategy:<10} Σ (relative entropy) {:.9}  ΔS + βΔQ pair {pair:.9}  single qubit {naive:.6}",
            l.final_sigma()
        );
    }
    Ok(())
}
