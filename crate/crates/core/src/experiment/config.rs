use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::engine::MAX_EXACT_ENV;
use crate::model::{bloch_state, ModelParams, Strategy};
use crate::qmath::DensityMatrix;
use crate::{Error, Result};

/// Experiment description, read from a TOML document.
///
/// Angles are given as fractions of `π/2`. Every key is optional; missing
/// ones take the values of [`ExperimentConfig::default`].
///
/// ```toml
/// t_s = 0.1
/// t_e = 1.0
/// nu_frac = 0.05
/// epsilon_frac = 0.95
/// n_collisions = 2000
/// strategy = "strategy2"
///
/// [initial]
/// bloch = [1.0, 0.0, 0.0]      # omitted: thermal state at t_s
///
/// [blp]
/// pair_a = [1.0, 0.0, 0.0]
/// pair_b = [-1.0, 0.0, 0.0]
///
/// [output]
/// format = "csv"               # or "json"
/// path = "run.csv"             # omitted: stdout
///
/// [sweep]
/// epsilon_frac = [0.90, 0.92, 0.95]
/// t_e = [1.0, 4.0, 5.0]
/// workers = 4
///
/// [exact]
/// n_env = 10
/// n_collisions = 10            # omitted: n_env
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub t_s: f64,
    pub t_e: f64,
    pub omega_s: f64,
    pub omega_e: f64,
    pub nu_frac: f64,
    pub epsilon_frac: f64,
    pub n_collisions: usize,
    pub strategy: Strategy,
    pub initial: InitialConfig,
    pub blp: BlpPairConfig,
    pub output: OutputConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactConfig>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bloch: Option<[f64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlpPairConfig {
    pub pair_a: [f64; 3],
    pub pair_b: [f64; 3],
}

impl Default for BlpPairConfig {
    fn default() -> Self {
        Self { pair_a: [1.0, 0.0, 0.0], pair_b: [-1.0, 0.0, 0.0] }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_frac: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_e: Option<Vec<f64>>,
    /// Worker threads; rayon's default when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactConfig {
    pub n_env: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_collisions: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let p = ModelParams::default();
        Self {
            t_s: p.t_s,
            t_e: p.t_e,
            omega_s: p.omega_s,
            omega_e: p.omega_e,
            nu_frac: 0.05,
            epsilon_frac: 0.95,
            n_collisions: p.n_collisions,
            strategy: p.strategy,
            initial: InitialConfig::default(),
            blp: BlpPairConfig::default(),
            output: OutputConfig::default(),
            sweep: None,
            exact: None,
        }
    }
}

fn domain(field: &str, value: impl std::fmt::Display, bound: &str) -> Error {
    Error::Config(format!("{field} = {value} out of range: must be {bound}"))
}

fn check_frac(field: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(domain(field, x, "in [0, 1] (fraction of π/2)"))
    }
}

fn check_t_e(field: &str, t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain(field, t, "finite and > 0"))
    }
}

fn check_bloch(field: &str, r: [f64; 3]) -> Result<()> {
    let len = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    if len.is_finite() && len <= 1.0 + 1e-12 {
        Ok(())
    } else {
        Err(domain(field, format!("{r:?}"), "a Bloch vector of length <= 1"))
    }
}

impl ExperimentConfig {
    /// Checks every field against its domain. Errors name the field and the bound.
    pub fn validate(&self) -> Result<()> {
        if self.t_s.is_nan() || self.t_s <= 0.0 {
            return Err(domain("t_s", self.t_s, "> 0 (inf allowed)"));
        }
        check_t_e("t_e", self.t_e)?;
        for (name, w) in [("omega_s", self.omega_s), ("omega_e", self.omega_e)] {
            if !w.is_finite() {
                return Err(domain(name, w, "finite"));
            }
        }
        check_frac("nu_frac", self.nu_frac)?;
        check_frac("epsilon_frac", self.epsilon_frac)?;
        if self.n_collisions == 0 {
            return Err(domain("n_collisions", 0, ">= 1"));
        }
        if self.strategy == Strategy::Exact && self.n_collisions > MAX_EXACT_ENV {
            return Err(Error::Size(format!(
                "strategy = \"exact\" with n_collisions = {} needs that many environment qubits; maximum is {MAX_EXACT_ENV}",
                self.n_collisions
            )));
        }
        if let Some(r) = self.initial.bloch {
            check_bloch("initial.bloch", r)?;
        }
        check_bloch("blp.pair_a", self.blp.pair_a)?;
        check_bloch("blp.pair_b", self.blp.pair_b)?;
        if let Some(sweep) = &self.sweep {
            if let Some(eps) = &sweep.epsilon_frac {
                if eps.is_empty() {
                    return Err(Error::Config("sweep.epsilon_frac must not be empty".into()));
                }
                for &e in eps {
                    check_frac("sweep.epsilon_frac", e)?;
                }
            }
            if let Some(ts) = &sweep.t_e {
                if ts.is_empty() {
                    return Err(Error::Config("sweep.t_e must not be empty".into()));
                }
                for &t in ts {
                    check_t_e("sweep.t_e", t)?;
                }
            }
            if sweep.workers == Some(0) {
                return Err(domain("sweep.workers", 0, ">= 1"));
            }
        }
        if let Some(exact) = &self.exact {
            if exact.n_env == 0 {
                return Err(domain("exact.n_env", 0, ">= 1"));
            }
            if exact.n_env > MAX_EXACT_ENV {
                return Err(Error::Size(format!(
                    "exact.n_env = {} exceeds the maximum of {MAX_EXACT_ENV}",
                    exact.n_env
                )));
            }
            if let Some(n) = exact.n_collisions {
                if n == 0 || n > exact.n_env {
                    return Err(domain("exact.n_collisions", n, &format!("in 1..={}", exact.n_env)));
                }
            }
        }
        Ok(())
    }

    pub fn model_params(&self) -> ModelParams {
        ModelParams {
            t_s: self.t_s,
            t_e: self.t_e,
            omega_s: self.omega_s,
            omega_e: self.omega_e,
            nu: self.nu_frac * FRAC_PI_2,
            epsilon: self.epsilon_frac * FRAC_PI_2,
            n_collisions: self.n_collisions,
            strategy: self.strategy,
        }
    }

    /// Initial system state: `initial.bloch` if set, otherwise thermal at `t_s`.
    pub fn initial_system(&self) -> Result<DensityMatrix> {
        match self.initial.bloch {
            Some(r) => bloch_state(r),
            None => Ok(self.model_params().system_thermal()),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("cannot serialize config: {e}")))
    }
}

/// Parses and validates a TOML config.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    load_config(text, &[])
}

/// Parses `text`, applies `overrides` (dotted key, TOML value) on top and
/// validates. Precedence is override > document > default.
pub fn load_config(text: &str, overrides: &[(String, String)]) -> Result<ExperimentConfig> {
    let mut doc: toml::Table = text.parse().map_err(|e| Error::Config(format!("{e}")))?;
    for (key, raw) in overrides {
        set_dotted(&mut doc, key, parse_value(raw))?;
    }
    let cfg: ExperimentConfig = toml::Value::Table(doc)
        .try_into()
        .map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// A flag value is read as a TOML literal (`0.9`, `[1, 4, 5]`, `"json"`);
/// anything that does not parse is taken as a bare string.
fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

fn set_dotted(doc: &mut toml::Table, key: &str, value: toml::Value) -> Result<()> {
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!("malformed key `{key}`")));
    }
    let (last, path) = parts.split_last().expect("split yields one part");
    let mut table = doc;
    for part in path {
        let entry = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("cannot set `{key}`: `{part}` is not a table")))?;
    }
    table.insert(last.to_string(), value);
    Ok(())
}

/// Splits command-line words into `(key, value)` overrides. Accepts
/// `--key value` and `--key=value`.
pub fn parse_override_args(args: &[String]) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(word) = it.next() {
        let Some(flag) = word.strip_prefix("--") else {
            return Err(Error::Config(format!("unexpected argument `{word}`; overrides look like --key value")));
        };
        match flag.split_once('=') {
            Some((k, v)) => out.push((k.to_string(), v.to_string())),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| Error::Config(format!("flag --{flag} is missing a value")))?;
                out.push((flag.to_string(), v.clone()));
            }
        }
    }
    Ok(out)
}
