//! Where Strategy 1 stops being non-Markovian, in ε and in T_E.

use qcollide::experiment::{parse_config, sweep};
use qcollide::model::Strategy;

fn main() -> qcollide::Result<()> {
    let grids = [
        "[sweep]\nepsilon_frac = [0.85, 0.90, 0.92, 0.93, 0.94, 0.95]",
        "[sweep]\nt_e = [1.0, 2.0, 3.0, 3.5, 4.0, 5.0]",
    ];
    for grid in grids {
        println!("epsilon_frac   t_e   N(S1)         N(S2)");
        let rows = sweep(&parse_config(grid)?)?;
        let s2: Vec<_> = rows.iter().filter(|r| r.strategy == Strategy::Strategy2).collect();
        for (r, q) in rows.iter().filter(|r| r.strategy == Strategy::Strategy1).zip(s2) {
            println!("{:>12.2}  {:>4.1}   {:.6e}  {:.6e}", r.epsilon_frac, r.t_e, r.blp_measure, q.blp_measure);
        }
        println!();
    }
    Ok(())
}
