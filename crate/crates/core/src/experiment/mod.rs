//! Config-driven experiments and their CSV/JSON reports.
//!
//! [`ExperimentConfig`] is a flat TOML document; [`run`] executes one of the
//! four commands and [`Report::render`] serializes the result together with
//! the complete configuration that produced it. Outputs contain no
//! timestamps, so identical configs give byte-identical files.

mod commands;
mod config;
mod output;

pub use commands::{
    blp, exact, simulate, sweep, BlpReport, BlpRow, Simulation, SimulationRow, SimulationSummary, SweepRow,
    DEGENERATE_PAIR_TOL, SWEEP_STRATEGIES,
};
pub use config::{
    load_config, parse_config, parse_override_args, BlpPairConfig, ExactConfig, ExperimentConfig, InitialConfig,
    OutputConfig, OutputFormat, SweepConfig,
};
pub use output::{run, write_output, Command, Report};
