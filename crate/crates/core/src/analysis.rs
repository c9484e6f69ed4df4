//! Derived quantities: BLP non-Markovianity, entropy production and heat flux.
//!
//! Entropy production is available in three forms:
//!
//! * relative entropy to the fixed point, `Σ_i = S(ρ_{i-1}‖ρ_*) - S(ρ_i‖ρ_*)`,
//! * system entropy change plus bath entropy flux, `ΔS + β_E ΔQ`,
//! * on exact chains, `I(S:E) + S(ρ'_E‖ρ_E)`.
//!
//! The flux `ΔQ` is taken from the *pair* `(E_i, E_{i+1})` touched in a
//! collision. [`heat_flux_naive`] only looks at `E_i` and is kept as a
//! diagnostic: it disagrees with the other two forms once `ε > 0`.

use serde::Serialize;

use crate::engine::{ExactChain, StepSnapshot, Trajectory};
use crate::model::{qubit_hamiltonian, register_hamiltonian, ModelParams};
use crate::qmath::{
    expectation, mutual_information, partial_trace, relative_entropy, trace_distance, von_neumann_entropy,
    DensityMatrix,
};
use crate::{Error, Result};

/// Trace-distance history of a pair of trajectories and its BLP measure.
#[derive(Clone, Debug, Serialize)]
pub struct BlpResult {
    /// `D_i` for `i = 0..=N`.
    pub pair_distances: Vec<f64>,
    /// `D_i - D_{i-1}` for `i = 1..=N`.
    pub increments: Vec<f64>,
    /// Sum of the positive increments.
    pub measure: f64,
}

impl BlpResult {
    pub fn from_distances(pair_distances: Vec<f64>) -> Self {
        let increments: Vec<f64> = pair_distances.windows(2).map(|w| w[1] - w[0]).collect();
        let measure = increments.iter().map(|d| d.max(0.0)).sum();
        Self { pair_distances, increments, measure }
    }
}

/// BLP measure for one caller-chosen pair of initial states (no optimization
/// over pairs). Both trajectories must come from identical parameters.
pub fn blp_measure(a: &Trajectory, b: &Trajectory) -> Result<BlpResult> {
    if a.params != b.params {
        return Err(Error::Argument("BLP trajectories were produced with different parameters".into()));
    }
    if a.len() != b.len() {
        return Err(Error::Argument(format!(
            "BLP trajectories have different lengths ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    let d = a
        .systems()
        .zip(b.systems())
        .map(|(x, y)| trace_distance(x, y))
        .collect::<Result<Vec<_>>>()?;
    Ok(BlpResult::from_distances(d))
}

/// `S(prev‖ρ_*) - S(next‖ρ_*)`.
pub fn entropy_production_step(
    prev: &DensityMatrix,
    next: &DensityMatrix,
    fixed_point: &DensityMatrix,
) -> Result<f64> {
    Ok(relative_entropy(prev, fixed_point)? - relative_entropy(next, fixed_point)?)
}

/// Energy change `tr[(H_{E_i} + H_{E_{i+1}})(ρ_post - ρ_pre)]` of the
/// environment pair in one collision. Zero for the initial snapshot.
pub fn pair_energy_change(snapshot: &StepSnapshot, params: &ModelParams) -> Result<f64> {
    let Some(pair) = &snapshot.env_pair else { return Ok(0.0) };
    let h = register_hamiltonian(&[params.omega_e, params.omega_e])?;
    Ok(expectation(&h, &pair.post)? - expectation(&h, &pair.pre)?)
}

/// Entropy flux `β_E tr[(H_{E_i} + H_{E_{i+1}})(ρ_post - ρ_pre)]`.
pub fn heat_flux_step(snapshot: &StepSnapshot, params: &ModelParams) -> Result<f64> {
    Ok(params.beta_e() * pair_energy_change(snapshot, params)?)
}

/// `β_E tr[H_{E_i}(ρ^{E_i}_post - ρ^{E_i}_pre)]`: ignores the energy `E_{i+1}`
/// picks up from the intra-environment collision, hence wrong for `ε > 0`.
pub fn heat_flux_naive(snapshot: &StepSnapshot, params: &ModelParams) -> Result<f64> {
    let Some(pair) = &snapshot.env_pair else { return Ok(0.0) };
    let h = qubit_hamiltonian(params.omega_e);
    let post = partial_trace(&pair.post, &[0])?;
    let pre = partial_trace(&pair.pre, &[0])?;
    Ok(params.beta_e() * (expectation(&h, &post)? - expectation(&h, &pre)?))
}

/// Per-collision thermodynamic bookkeeping of a trajectory. Every vector has
/// one entry per snapshot; entry 0 (before any collision) is zero except for
/// `relent_to_fixed_point`.
#[derive(Clone, Debug, Serialize)]
pub struct EntropyLedger {
    /// `S(ρ_i‖ρ_*)`.
    pub relent_to_fixed_point: Vec<f64>,
    /// `Σ_i`.
    pub per_step_sigma: Vec<f64>,
    pub cumulative_sigma: Vec<f64>,
    /// Per-collision increment of the cumulative `Σ`.
    pub rate: Vec<f64>,
    /// `S(ρ_i) - S(ρ_0)`.
    pub delta_s_system: Vec<f64>,
    /// Per-step `ΔQ` of the environment pair.
    pub heat: Vec<f64>,
    /// Per-step `β_E ΔQ` from the environment pair.
    pub heat_two_qubit: Vec<f64>,
    /// Per-step single-qubit estimate, see [`heat_flux_naive`].
    pub heat_naive: Vec<f64>,
    /// `(I(S:E), S(ρ'_E‖ρ_E))` per collision, only for exact chains.
    pub rw_terms: Option<Vec<(f64, f64)>>,
}

impl EntropyLedger {
    pub fn from_trajectory(traj: &Trajectory) -> Result<Self> {
        let p = &traj.params;
        let star = p.env_thermal();
        let relent = traj
            .systems()
            .map(|s| relative_entropy(s, &star))
            .collect::<Result<Vec<_>>>()?;
        let mut per_step = vec![0.0; relent.len()];
        for i in 1..relent.len() {
            per_step[i] = relent[i - 1] - relent[i];
        }
        let cumulative = running_sum(&per_step);
        let s0 = von_neumann_entropy(traj.initial_system())?;
        let delta_s = traj
            .systems()
            .map(|s| Ok(von_neumann_entropy(s)? - s0))
            .collect::<Result<Vec<_>>>()?;
        let heat = traj
            .snapshots
            .iter()
            .map(|s| pair_energy_change(s, p))
            .collect::<Result<Vec<_>>>()?;
        let heat_two_qubit = heat.iter().map(|q| p.beta_e() * q).collect();
        let heat_naive = traj
            .snapshots
            .iter()
            .map(|s| heat_flux_naive(s, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            relent_to_fixed_point: relent,
            rate: per_step.clone(),
            per_step_sigma: per_step,
            cumulative_sigma: cumulative,
            delta_s_system: delta_s,
            heat,
            heat_two_qubit,
            heat_naive,
            rw_terms: None,
        })
    }

    /// `ΔS + β_E Σ_j ΔQ_j` per collision, using the two-qubit flux.
    pub fn sigma_two_qubit_flux(&self) -> Vec<f64> {
        let flux = running_sum(&self.heat_two_qubit);
        self.delta_s_system.iter().zip(flux).map(|(s, q)| s + q).collect()
    }

    /// Same with the single-qubit flux.
    pub fn sigma_naive_flux(&self) -> Vec<f64> {
        let flux = running_sum(&self.heat_naive);
        self.delta_s_system.iter().zip(flux).map(|(s, q)| s + q).collect()
    }

    /// Smallest per-collision entropy production, ignoring entry 0.
    pub fn min_rate(&self) -> f64 {
        self.rate.iter().skip(1).copied().fold(f64::INFINITY, f64::min)
    }

    pub fn final_sigma(&self) -> f64 {
        *self.cumulative_sigma.last().unwrap_or(&0.0)
    }
}

fn running_sum(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// Discrete entropy-production rate `Σ_i` per collision.
pub fn entropy_rate(ledger: &EntropyLedger) -> Vec<f64> {
    ledger.rate.clone()
}

/// Cumulative `ΔS + β_E ΔQ` with the two-qubit flux.
pub fn sigma_via_heat_flux(traj: &Trajectory) -> Result<Vec<f64>> {
    Ok(EntropyLedger::from_trajectory(traj)?.sigma_two_qubit_flux())
}

/// The two terms of `Σ = I(S:E) + S(ρ'_E‖ρ_E)`.
#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct RwTerms {
    pub mutual_info: f64,
    pub env_relent: f64,
}

impl RwTerms {
    pub fn sum(&self) -> f64 {
        self.mutual_info + self.env_relent
    }
}

/// Splits a global state into system (`system_qubits`) and environment (the
/// rest) and evaluates `I(S:E)` and `S(ρ'_E‖ρ_E)` against the initial
/// environment `env_initial`.
pub fn rw_decomposition(
    global: &DensityMatrix,
    env_initial: &DensityMatrix,
    system_qubits: &[usize],
) -> Result<RwTerms> {
    let env_qubits: Vec<usize> = (0..global.qubits()).filter(|q| !system_qubits.contains(q)).collect();
    if env_qubits.is_empty() || env_qubits.len() != env_initial.qubits() {
        return Err(Error::Argument(format!(
            "environment of {} qubits does not match the reference of {} qubits",
            env_qubits.len(),
            env_initial.qubits()
        )));
    }
    let env = partial_trace(global, &env_qubits)?;
    Ok(RwTerms {
        mutual_info: mutual_information(global, system_qubits)?,
        env_relent: relative_entropy(&env, env_initial)?,
    })
}

/// The three entropy-production estimators on an exact chain after one collision.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ExactRow {
    pub collision: usize,
    pub mutual_info: f64,
    pub env_relent: f64,
    pub rw_sum: f64,
    /// `S(ρ_0‖ρ_*) - S(ρ_i‖ρ_*)`.
    pub sigma_telescoping: f64,
    /// `ΔS + β_E tr[H_E^{tot}(ρ'_E - ρ_E)]` with the whole environment.
    pub sigma_heat: f64,
    pub max_discrepancy: f64,
}

fn exact_row(chain: &ExactChain, params: &ModelParams, env_initial: &DensityMatrix, s0: &DensityMatrix) -> Result<ExactRow> {
    let star = params.env_thermal();
    let system = chain.system()?;
    let env = chain.environment()?;
    let h_env = register_hamiltonian(&vec![params.omega_e; chain.n_env()])?;
    let dq = expectation(&h_env, &env)? - expectation(&h_env, env_initial)?;
    let sigma_heat = von_neumann_entropy(&system)? - von_neumann_entropy(s0)? + params.beta_e() * dq;
    let sigma_telescoping = relative_entropy(s0, &star)? - relative_entropy(&system, &star)?;
    let rw = rw_decomposition(chain.global(), env_initial, &[0])?;
    let vals = [rw.sum(), sigma_telescoping, sigma_heat];
    let max_discrepancy = vals
        .iter()
        .flat_map(|a| vals.iter().map(move |b| (a - b).abs()))
        .fold(0.0, f64::max);
    Ok(ExactRow {
        collision: chain.collisions(),
        mutual_info: rw.mutual_info,
        env_relent: rw.env_relent,
        rw_sum: rw.sum(),
        sigma_telescoping,
        sigma_heat,
        max_discrepancy,
    })
}

/// Runs `params.n_collisions` collisions of an exact chain with `n_env`
/// environment qubits and evaluates all three estimators after each one
/// (row 0 is the initial state).
pub fn exact_decomposition(params: &ModelParams, initial: &DensityMatrix, n_env: usize) -> Result<Vec<ExactRow>> {
    params.validate()?;
    if params.n_collisions > n_env {
        return Err(Error::Argument(format!(
            "{} collisions need at least as many environment qubits, got n_env = {n_env}",
            params.n_collisions
        )));
    }
    let mut chain = ExactChain::new(params, initial.clone(), n_env)?;
    let env_initial = chain.env_initial()?;
    let mut rows = vec![exact_row(&chain, params, &env_initial, initial)?];
    for _ in 0..params.n_collisions {
        chain.step()?;
        rows.push(exact_row(&chain, params, &env_initial, initial)?);
    }
    Ok(rows)
}
