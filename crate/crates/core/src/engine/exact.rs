use crate::model::{partial_swap, register_hamiltonian, ModelParams};
use crate::qmath::{expectation, partial_trace, ComplexMatrix, DensityMatrix, MAX_QUBITS};
use crate::{Error, Result, VERSION};

use super::{check_qubit, EnvPair, StepSnapshot, Trajectory};

/// Largest environment the exact chain accepts (one system qubit plus this).
pub const MAX_EXACT_ENV: usize = MAX_QUBITS - 1;

/// The whole `S, E_1, …, E_n` register evolved without intermediate partial
/// traces. Qubit 0 is the system, qubit `j` is `E_j`.
///
/// Collision `i` applies `U_{S,E_i}(ν)` and, when `E_{i+1}` exists,
/// `U_{E_i,E_{i+1}}(ε)`. The last collision therefore has no
/// intra-environment part, which does not affect the system marginal.
#[derive(Clone, Debug)]
pub struct ExactChain {
    n_env: usize,
    collisions: usize,
    global: DensityMatrix,
    env: DensityMatrix,
    se: ComplexMatrix,
    ee: ComplexMatrix,
}

impl ExactChain {
    pub fn new(params: &ModelParams, system: DensityMatrix, n_env: usize) -> Result<Self> {
        params.validate()?;
        check_qubit(&system, "initial system")?;
        if n_env == 0 {
            return Err(Error::Argument("exact chain needs at least one environment qubit".into()));
        }
        if n_env > MAX_EXACT_ENV {
            return Err(Error::Size(format!(
                "n_env = {n_env} needs a {}-qubit register; the maximum is n_env = {MAX_EXACT_ENV}",
                n_env + 1
            )));
        }
        let env = params.env_thermal();
        let mut global = system;
        for _ in 0..n_env {
            global = global.kron(&env)?;
        }
        Ok(Self {
            n_env,
            collisions: 0,
            global,
            env,
            se: partial_swap(params.nu),
            ee: partial_swap(params.effective_epsilon()),
        })
    }

    pub fn n_env(&self) -> usize {
        self.n_env
    }

    pub fn collisions(&self) -> usize {
        self.collisions
    }

    pub fn global(&self) -> &DensityMatrix {
        &self.global
    }

    pub fn into_global(self) -> DensityMatrix {
        self.global
    }

    pub fn system(&self) -> Result<DensityMatrix> {
        partial_trace(&self.global, &[0])
    }

    /// Reduced state of all environment qubits.
    pub fn environment(&self) -> Result<DensityMatrix> {
        let env: Vec<usize> = (1..=self.n_env).collect();
        partial_trace(&self.global, &env)
    }

    /// Initial environment `ρ_E^{⊗ n_env}`.
    pub fn env_initial(&self) -> Result<DensityMatrix> {
        let mut out = self.env.clone();
        for _ in 1..self.n_env {
            out = out.kron(&self.env)?;
        }
        Ok(out)
    }

    /// `tr[(H_S + Σ_j H_{E_j}) ρ_global]`.
    pub fn total_energy(&self, params: &ModelParams) -> Result<f64> {
        let mut omegas = vec![params.omega_e; self.n_env + 1];
        omegas[0] = params.omega_s;
        expectation(&register_hamiltonian(&omegas)?, &self.global)
    }

    fn next_qubit(&self) -> Option<usize> {
        let q = self.collisions + 1;
        (q <= self.n_env).then_some(q)
    }

    pub(super) fn incoming_env(&self) -> Result<DensityMatrix> {
        match self.next_qubit() {
            Some(q) => partial_trace(&self.global, &[q]),
            None => Ok(self.env.clone()),
        }
    }

    pub(super) fn joint_se_next(&self) -> Result<Option<DensityMatrix>> {
        self.next_qubit().map(|q| partial_trace(&self.global, &[0, q])).transpose()
    }

    fn pair(&self, i: usize) -> Result<DensityMatrix> {
        if i < self.n_env {
            partial_trace(&self.global, &[i, i + 1])
        } else {
            partial_trace(&self.global, &[i])?.kron(&self.env)
        }
    }

    /// Applies the next collision in place.
    pub fn step(&mut self) -> Result<StepSnapshot> {
        let i = self.next_qubit().ok_or_else(|| {
            Error::Argument(format!("all {} environment qubits have been used", self.n_env))
        })?;
        let pre = self.pair(i)?;
        self.global.apply_two_qubit(&self.se, 0, i)?;
        if i < self.n_env {
            self.global.apply_two_qubit(&self.ee, i, i + 1)?;
        }
        let post = self.pair(i)?;
        self.collisions = i;
        Ok(StepSnapshot {
            index: i,
            system: self.system()?,
            incoming_env: self.incoming_env()?,
            env_pair: Some(EnvPair { pre, post }),
            joint_se_next: self.joint_se_next()?,
        })
    }
}

/// Result of [`run_exact`].
#[derive(Clone, Debug)]
pub struct ExactRun {
    pub trajectory: Trajectory,
    pub global: DensityMatrix,
    pub env_initial: DensityMatrix,
}

/// Runs `params.n_collisions` collisions on a chain of `n_env` environment qubits.
pub fn run_exact(params: &ModelParams, initial_system: &DensityMatrix, n_env: usize) -> Result<ExactRun> {
    params.validate()?;
    if params.n_collisions > n_env {
        return Err(Error::Argument(format!(
            "{} collisions need at least as many environment qubits, got n_env = {n_env}",
            params.n_collisions
        )));
    }
    let mut chain = ExactChain::new(params, initial_system.clone(), n_env)?;
    let env_initial = chain.env_initial()?;
    let mut snapshots = Vec::with_capacity(params.n_collisions + 1);
    snapshots.push(StepSnapshot {
        index: 0,
        system: chain.system()?,
        incoming_env: chain.incoming_env()?,
        env_pair: None,
        joint_se_next: chain.joint_se_next()?,
    });
    for _ in 0..params.n_collisions {
        snapshots.push(chain.step()?);
    }
    Ok(ExactRun {
        trajectory: Trajectory { params: params.clone(), version: VERSION, snapshots },
        global: chain.into_global(),
        env_initial,
    })
}
