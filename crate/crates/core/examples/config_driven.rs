//! Runs a TOML-described experiment and prints the CSV report, as the
//! `qcollide` binary would.

use qcollide::experiment::{load_config, run, Command};

const CONFIG: &str = r#"
t_e = 1.0
epsilon_frac = 0.95
n_collisions = 12
strategy = "strategy2"

[initial]
bloch = [0.0, 0.0, -1.0]
"#;

fn main() -> qcollide::Result<()> {
    let overrides = vec![("output.format".to_string(), "csv".to_string())];
    let cfg = load_config(CONFIG, &overrides)?;
    let report = run(Command::Simulate, &cfg)?;
    print!("{}", report.render(&cfg)?);
    Ok(())
}
