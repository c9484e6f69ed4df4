use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::analysis::ExactRow;
use crate::{Error, Result, VERSION};

use super::commands::{BlpReport, Simulation, SweepRow};
use super::{blp, exact, simulate, sweep, ExperimentConfig, OutputFormat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Simulate,
    Blp,
    Sweep,
    Exact,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Blp => "blp",
            Command::Sweep => "sweep",
            Command::Exact => "exact",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Report {
    Simulate(Simulation),
    Blp(BlpReport),
    Sweep(Vec<SweepRow>),
    Exact(Vec<ExactRow>),
}

/// Runs `command` against `cfg`.
pub fn run(command: Command, cfg: &ExperimentConfig) -> Result<Report> {
    Ok(match command {
        Command::Simulate => Report::Simulate(simulate(cfg)?),
        Command::Blp => Report::Blp(blp(cfg)?),
        Command::Sweep => Report::Sweep(sweep(cfg)?),
        Command::Exact => Report::Exact(exact(cfg)?),
    })
}

/// 17 significant digits, enough to round-trip any `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
struct JsonDoc<'a, R: Serialize, S: Serialize> {
    qcollide_version: &'static str,
    command: Command,
    config_toml: String,
    warnings: Vec<String>,
    rows: &'a [R],
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<S>,
}

impl Report {
    pub fn command(&self) -> Command {
        match self {
            Report::Simulate(_) => Command::Simulate,
            Report::Blp(_) => Command::Blp,
            Report::Sweep(_) => Command::Sweep,
            Report::Exact(_) => Command::Exact,
        }
    }

    pub fn warnings(&self) -> Vec<String> {
        match self {
            Report::Blp(r) => r.warnings(),
            _ => Vec::new(),
        }
    }

    /// Renders in `cfg.output.format`. Every output embeds the full config.
    pub fn render(&self, cfg: &ExperimentConfig) -> Result<String> {
        match cfg.output.format {
            OutputFormat::Csv => self.to_csv(cfg),
            OutputFormat::Json => self.to_json(cfg),
        }
    }

    fn summary_lines(&self) -> Vec<String> {
        match self {
            Report::Simulate(s) => {
                let m = &s.summary;
                vec![
                    format!("strategy = {}", m.strategy),
                    format!("final_sigma = {}", num(m.final_sigma)),
                    format!("min_sigma_rate = {} at step {}", num(m.min_sigma_rate), m.min_sigma_rate_step),
                    format!("final_sigma_rate = {}", num(m.final_sigma_rate)),
                    format!("final_trace_dist_to_fixed_point = {}", num(m.final_trace_dist_to_fixed_point)),
                ]
            }
            Report::Blp(r) => vec![
                format!("blp_measure_strategy1 = {}", num(r.measure_strategy1)),
                format!("blp_measure_strategy2 = {}", num(r.measure_strategy2)),
            ],
            _ => Vec::new(),
        }
    }

    pub fn to_csv(&self, cfg: &ExperimentConfig) -> Result<String> {
        let mut out = String::new();
        writeln!(out, "# qcollide {VERSION}").unwrap();
        writeln!(out, "# command = {}", self.command().name()).unwrap();
        for line in cfg.to_toml()?.lines().filter(|l| !l.is_empty()) {
            writeln!(out, "# {line}").unwrap();
        }
        for line in self.summary_lines() {
            writeln!(out, "# summary: {line}").unwrap();
        }
        for w in self.warnings() {
            writeln!(out, "# warning: {w}").unwrap();
        }
        match self {
            Report::Simulate(s) => {
                out.push_str("step,trace_dist_to_fixed_point,sigma_cumulative,sigma_rate,heat_cumulative,system_excited_pop,system_coherence_abs\n");
                for r in &s.rows {
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        r.step,
                        num(r.trace_dist_to_fixed_point),
                        num(r.sigma_cumulative),
                        num(r.sigma_rate),
                        num(r.heat_cumulative),
                        num(r.system_excited_pop),
                        num(r.system_coherence_abs)
                    )
                    .unwrap();
                }
            }
            Report::Blp(b) => {
                out.push_str("step,d_strategy1,d_strategy2\n");
                for r in &b.rows {
                    writeln!(out, "{},{},{}", r.step, num(r.d_strategy1), num(r.d_strategy2)).unwrap();
                }
            }
            Report::Sweep(rows) => {
                out.push_str("epsilon_frac,t_e,strategy,blp_measure,min_sigma_rate,steady_sigma\n");
                for r in rows {
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        num(r.epsilon_frac),
                        num(r.t_e),
                        r.strategy,
                        num(r.blp_measure),
                        num(r.min_sigma_rate),
                        num(r.steady_sigma)
                    )
                    .unwrap();
                }
            }
            Report::Exact(rows) => {
                out.push_str("collision,mutual_info,env_relent,rw_sum,sigma_telescoping,sigma_heat,max_discrepancy\n");
                for r in rows {
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        r.collision,
                        num(r.mutual_info),
                        num(r.env_relent),
                        num(r.rw_sum),
                        num(r.sigma_telescoping),
                        num(r.sigma_heat),
                        num(r.max_discrepancy)
                    )
                    .unwrap();
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self, cfg: &ExperimentConfig) -> Result<String> {
        fn doc<R: Serialize, S: Serialize>(
            report: &Report,
            cfg: &ExperimentConfig,
            rows: &[R],
            summary: Option<S>,
        ) -> Result<String> {
            let d = JsonDoc {
                qcollide_version: VERSION,
                command: report.command(),
                config_toml: cfg.to_toml()?,
                warnings: report.warnings(),
                rows,
                summary,
            };
            let mut s = serde_json::to_string_pretty(&d)
                .map_err(|e| Error::Contract(format!("cannot encode report as JSON: {e}")))?;
            s.push('\n');
            Ok(s)
        }
        #[derive(Serialize)]
        struct BlpSummary {
            measure_strategy1: f64,
            measure_strategy2: f64,
            degenerate_pair: bool,
        }
        match self {
            Report::Simulate(s) => doc(self, cfg, &s.rows, Some(&s.summary)),
            Report::Blp(b) => doc(
                self,
                cfg,
                &b.rows,
                Some(BlpSummary {
                    measure_strategy1: b.measure_strategy1,
                    measure_strategy2: b.measure_strategy2,
                    degenerate_pair: b.degenerate_pair,
                }),
            ),
            Report::Sweep(rows) => doc::<_, ()>(self, cfg, rows, None),
            Report::Exact(rows) => doc::<_, ()>(self, cfg, rows, None),
        }
    }
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_output(path: &Path, text: &str) -> Result<()> {
    let io = |source| Error::Io { path: path.display().to_string(), source };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, text).map_err(io)
}
