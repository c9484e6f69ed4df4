//! Trace distance between the σ_x eigenstates under both strategies and the
//! resulting BLP measure.

use qcollide::analysis::blp_measure;
use qcollide::engine::run_trajectory;
use qcollide::model::{bloch_state, ModelParams, Strategy};

fn main() -> qcollide::Result<()> {
    let plus = bloch_state([1.0, 0.0, 0.0])?;
    let minus = bloch_state([-1.0, 0.0, 0.0])?;
    for strategy in [Strategy::Markovian, Strategy::Strategy1, Strategy::Strategy2] {
        let p = ModelParams { strategy, ..ModelParams::default() };
        let blp = blp_measure(&run_trajectory(&p, &plus)?, &run_trajectory(&p, &minus)?)?;
        let revivals = blp.increments.iter().filter(|d| **d > 0.0).count();
        let d = &blp.pair_distances;
        println!(
            "{strategy:<10} N = {:.6}  ({revivals} revivals; D_0 = {:.3}, D_100 = {:.3}, D_500 = {:.3})",
            blp.measure, d[0], d[100], d[500]
        );
    }
    Ok(())
}
