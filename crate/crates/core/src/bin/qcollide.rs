use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcollide::experiment::{self, Command};
use qcollide::Error;

/// Qubit collision-model simulator.
///
/// Every config key can be overridden with a flag of the same name, using
/// dots for sections: `--epsilon_frac 0.9 --sweep.t_e "[1, 4, 5]"`.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Single trajectory: fixed-point distance, entropy production, heat.
    Simulate(Common),
    /// Trace distance of the configured pair under both strategies.
    Blp(Common),
    /// Grid over epsilon_frac and t_e.
    Sweep(Common),
    /// Entropy-production estimators on an exact unitary chain.
    Exact(Common),
}

#[derive(Args)]
struct Common {
    /// TOML config file; defaults apply when omitted.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Key overrides, `--key value` or `--key=value`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "OVERRIDES")]
    overrides: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Simulate(a) => (Command::Simulate, a),
        Sub::Blp(a) => (Command::Blp, a),
        Sub::Sweep(a) => (Command::Sweep, a),
        Sub::Exact(a) => (Command::Exact, a),
    };
    match execute(command, &args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qcollide: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command, args: &Common) -> Result<(), Error> {
    let text = match &args.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.display().to_string(), source })?,
        None => String::new(),
    };
    let overrides = experiment::parse_override_args(&args.overrides)?;
    let cfg = experiment::load_config(&text, &overrides)?;
    let report = experiment::run(command, &cfg)?;
    for w in report.warnings() {
        eprintln!("warning: {w}");
    }
    let out = report.render(&cfg)?;
    match &cfg.output.path {
        Some(path) => experiment::write_output(path.as_ref(), &out),
        None => {
            print!("{out}");
            Ok(())
        }
    }
}
