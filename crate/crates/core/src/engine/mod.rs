//! Collision dynamics.
//!
//! Every collision `i` applies `U_{S,E_i}(ν)` and then `U_{E_i,E_{i+1}}(ε)`.
//! The first collision uses a fresh thermal `E_1` with no intra-environment
//! collision before it. Snapshots are indexed from 1; index 0 holds the
//! initial state.

mod exact;

pub use exact::{run_exact, ExactChain, ExactRun, MAX_EXACT_ENV};

use crate::model::{partial_swap, step_unitary, ModelParams, Strategy};
use crate::qmath::{partial_trace, ComplexMatrix, DensityMatrix};
use crate::{Error, Result, VERSION};

/// State propagated from one collision to the next.
#[derive(Clone, Debug)]
pub enum Carried {
    Markovian {
        system: DensityMatrix,
    },
    /// Product `ρ_S ⊗ ρ̃_{E_i}`, stored as its two factors.
    Strategy1 {
        system: DensityMatrix,
        incoming_env: DensityMatrix,
    },
    /// Joint state of `(S, E_i)`.
    Strategy2 {
        joint: DensityMatrix,
    },
    /// Whole `(1 + n_env)`-qubit register.
    Exact(ExactChain),
}

#[derive(Clone, Debug)]
pub struct CarriedState {
    /// Number of collisions already applied.
    pub collisions: usize,
    pub inner: Carried,
}

impl CarriedState {
    /// Starting point of a run: system in `system`, every environment qubit in
    /// the Gibbs state of `params`.
    pub fn initial(params: &ModelParams, system: DensityMatrix) -> Result<Self> {
        check_qubit(&system, "initial system")?;
        let env = params.env_thermal();
        let inner = match params.strategy {
            Strategy::Markovian => Carried::Markovian { system },
            Strategy::Strategy1 => Carried::Strategy1 { system, incoming_env: env },
            Strategy::Strategy2 => Carried::Strategy2 { joint: system.kron(&env)? },
            Strategy::Exact => Carried::Exact(ExactChain::new(params, system, params.n_collisions)?),
        };
        Ok(Self { collisions: 0, inner })
    }

    /// Reduced system state.
    pub fn system(&self) -> Result<DensityMatrix> {
        match &self.inner {
            Carried::Markovian { system } | Carried::Strategy1 { system, .. } => Ok(system.clone()),
            Carried::Strategy2 { joint } => partial_trace(joint, &[0]),
            Carried::Exact(chain) => chain.system(),
        }
    }

    fn strategy(&self) -> Strategy {
        match self.inner {
            Carried::Markovian { .. } => Strategy::Markovian,
            Carried::Strategy1 { .. } => Strategy::Strategy1,
            Carried::Strategy2 { .. } => Strategy::Strategy2,
            Carried::Exact(_) => Strategy::Exact,
        }
    }
}

fn check_qubit(state: &DensityMatrix, what: &str) -> Result<()> {
    if state.qubits() != 1 {
        return Err(Error::Argument(format!("{what} must be a single qubit, got {} qubits", state.qubits())));
    }
    Ok(())
}

/// States of the environment pair `(E_i, E_{i+1})` around one collision.
#[derive(Clone, Debug)]
pub struct EnvPair {
    pub pre: DensityMatrix,
    pub post: DensityMatrix,
}

/// Observables after collision `index`.
#[derive(Clone, Debug)]
pub struct StepSnapshot {
    pub index: usize,
    pub system: DensityMatrix,
    /// Reduced state of `E_{index+1}` just before it meets the system.
    pub incoming_env: DensityMatrix,
    /// `None` for the initial snapshot.
    pub env_pair: Option<EnvPair>,
    /// Joint `(S, E_{index+1})` state, carried by Strategy 2 and the exact chain.
    pub joint_se_next: Option<DensityMatrix>,
}

/// The reduced state of the environment qubit that meets the system next.
pub fn incoming_env_state(snapshot: &StepSnapshot) -> &DensityMatrix {
    &snapshot.incoming_env
}

/// Sequence of snapshots with the parameters that produced them.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub params: ModelParams,
    pub version: &'static str,
    /// `snapshots[0]` is the initial state, `snapshots[i]` follows collision `i`.
    pub snapshots: Vec<StepSnapshot>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn systems(&self) -> impl Iterator<Item = &DensityMatrix> {
        self.snapshots.iter().map(|s| &s.system)
    }

    pub fn initial_system(&self) -> &DensityMatrix {
        &self.snapshots[0].system
    }

    pub fn final_system(&self) -> &DensityMatrix {
        &self.snapshots[self.snapshots.len() - 1].system
    }
}

/// Precomputed unitaries of a run; reuse it across steps.
#[derive(Clone, Debug)]
pub struct Stepper {
    params: ModelParams,
    env: DensityMatrix,
    pair_fresh: DensityMatrix,
    se: ComplexMatrix,
    step: ComplexMatrix,
}

impl Stepper {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let env = params.env_thermal();
        Ok(Self {
            params: params.clone(),
            pair_fresh: env.kron(&env)?,
            env,
            se: partial_swap(params.nu),
            step: step_unitary(params),
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn initial_snapshot(&self, state: &CarriedState) -> Result<StepSnapshot> {
        let (incoming_env, joint) = match &state.inner {
            Carried::Markovian { .. } => (self.env.clone(), None),
            Carried::Strategy1 { incoming_env, .. } => (incoming_env.clone(), None),
            Carried::Strategy2 { joint } => (partial_trace(joint, &[1])?, Some(joint.clone())),
            Carried::Exact(chain) => (chain.incoming_env()?, chain.joint_se_next()?),
        };
        Ok(StepSnapshot {
            index: state.collisions,
            system: state.system()?,
            incoming_env,
            env_pair: None,
            joint_se_next: joint,
        })
    }

    /// Applies one collision according to the variant of `state`.
    pub fn step(&self, state: &CarriedState) -> Result<(CarriedState, StepSnapshot)> {
        let index = state.collisions + 1;
        let (inner, snap) = match &state.inner {
            Carried::Markovian { system } => self.markovian(system, index)?,
            Carried::Strategy1 { system, incoming_env } => self.strategy1(system, incoming_env, index)?,
            Carried::Strategy2 { joint } => self.strategy2(joint, index)?,
            Carried::Exact(chain) => {
                let mut chain = chain.clone();
                let snap = chain.step()?;
                (Carried::Exact(chain), snap)
            }
        };
        Ok((CarriedState { collisions: index, inner }, snap))
    }

    fn markovian(&self, system: &DensityMatrix, index: usize) -> Result<(Carried, StepSnapshot)> {
        let out = system.kron(&self.env)?.evolve(&self.se)?;
        let next = partial_trace(&out, &[0])?;
        let env_post = partial_trace(&out, &[1])?;
        // E_{i+1} is untouched, so the pair is the lone collision partner next to a fresh qubit
        let snap = StepSnapshot {
            index,
            system: next.clone(),
            incoming_env: self.env.clone(),
            env_pair: Some(EnvPair { pre: self.pair_fresh.clone(), post: env_post.kron(&self.env)? }),
            joint_se_next: None,
        };
        Ok((Carried::Markovian { system: next }, snap))
    }

    fn strategy1(
        &self,
        system: &DensityMatrix,
        incoming: &DensityMatrix,
        index: usize,
    ) -> Result<(Carried, StepSnapshot)> {
        let pair_pre = incoming.kron(&self.env)?;
        let out = system.kron(&pair_pre)?.evolve(&self.step)?;
        let next = partial_trace(&out, &[0])?;
        let next_env = partial_trace(&out, &[2])?;
        let snap = StepSnapshot {
            index,
            system: next.clone(),
            incoming_env: next_env.clone(),
            env_pair: Some(EnvPair { pre: pair_pre, post: partial_trace(&out, &[1, 2])? }),
            joint_se_next: None,
        };
        Ok((Carried::Strategy1 { system: next, incoming_env: next_env }, snap))
    }

    fn strategy2(&self, joint: &DensityMatrix, index: usize) -> Result<(Carried, StepSnapshot)> {
        let reg = joint.kron(&self.env)?;
        let pair_pre = partial_trace(&reg, &[1, 2])?;
        let out = reg.evolve(&self.step)?;
        let next_joint = partial_trace(&out, &[0, 2])?;
        let next = partial_trace(&next_joint, &[0])?;
        let snap = StepSnapshot {
            index,
            system: next,
            incoming_env: partial_trace(&next_joint, &[1])?,
            env_pair: Some(EnvPair { pre: pair_pre, post: partial_trace(&out, &[1, 2])? }),
            joint_se_next: Some(next_joint.clone()),
        };
        Ok((Carried::Strategy2 { joint: next_joint }, snap))
    }
}

fn expect_strategy(state: &CarriedState, want: Strategy) -> Result<()> {
    if state.strategy() != want {
        return Err(Error::Argument(format!(
            "expected a {want} carried state, got {}",
            state.strategy()
        )));
    }
    Ok(())
}

/// One correlation-erasing collision.
pub fn step_strategy1(state: &CarriedState, params: &ModelParams) -> Result<(CarriedState, StepSnapshot)> {
    expect_strategy(state, Strategy::Strategy1)?;
    Stepper::new(params)?.step(state)
}

/// One correlation-keeping collision.
pub fn step_strategy2(state: &CarriedState, params: &ModelParams) -> Result<(CarriedState, StepSnapshot)> {
    expect_strategy(state, Strategy::Strategy2)?;
    Stepper::new(params)?.step(state)
}

/// One homogenization collision.
pub fn step_markovian(state: &CarriedState, params: &ModelParams) -> Result<(CarriedState, StepSnapshot)> {
    expect_strategy(state, Strategy::Markovian)?;
    Stepper::new(params)?.step(state)
}

/// Runs `params.n_collisions` collisions starting from `initial_system`.
/// Bit-for-bit deterministic.
pub fn run_trajectory(params: &ModelParams, initial_system: &DensityMatrix) -> Result<Trajectory> {
    params.validate()?;
    if params.strategy == Strategy::Exact {
        return Ok(run_exact(params, initial_system, params.n_collisions)?.trajectory);
    }
    let stepper = Stepper::new(params)?;
    let mut state = CarriedState::initial(params, initial_system.clone())?;
    let mut snapshots = Vec::with_capacity(params.n_collisions + 1);
    snapshots.push(stepper.initial_snapshot(&state)?);
    for _ in 0..params.n_collisions {
        let (next, snap) = stepper.step(&state)?;
        snapshots.push(snap);
        state = next;
    }
    Ok(Trajectory { params: params.clone(), version: VERSION, snapshots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{bloch_state, thermal_state};
    use crate::qmath::trace_distance;
    use std::f64::consts::FRAC_PI_2;

    fn params(strategy: Strategy, epsilon_frac: f64, n: usize) -> ModelParams {
        ModelParams {
            epsilon: epsilon_frac * FRAC_PI_2,
            n_collisions: n,
            strategy,
            ..ModelParams::default()
        }
    }

    #[test]
    fn zero_collisions_rejected() {
        let p = params(Strategy::Strategy1, 0.5, 0);
        assert!(matches!(run_trajectory(&p, &p.system_thermal()), Err(Error::Argument(_))));
    }

    #[test]
    fn wrong_variant_rejected() {
        let p = params(Strategy::Strategy2, 0.5, 3);
        let s = CarriedState::initial(&p, p.system_thermal()).unwrap();
        assert!(step_strategy1(&s, &p).is_err());
        assert!(step_strategy2(&s, &p).is_ok());
    }

    #[test]
    fn epsilon_zero_single_step_matches_markovian() {
        let init = bloch_state([0.3, -0.4, 0.5]).unwrap();
        let pm = params(Strategy::Markovian, 0.7, 1);
        let m = step_markovian(&CarriedState::initial(&pm, init.clone()).unwrap(), &pm).unwrap().1;
        let p1 = params(Strategy::Strategy1, 0.0, 1);
        let s1 = step_strategy1(&CarriedState::initial(&p1, init.clone()).unwrap(), &p1).unwrap().1;
        let p2 = params(Strategy::Strategy2, 0.0, 1);
        let s2 = step_strategy2(&CarriedState::initial(&p2, init).unwrap(), &p2).unwrap().1;
        assert!(s1.system.max_abs_diff(&m.system) < 1e-14);
        assert!(s2.system.max_abs_diff(&m.system) < 1e-14);
    }

    #[test]
    fn epsilon_zero_trajectories_coincide() {
        let init = bloch_state([0.3, -0.4, 0.5]).unwrap();
        let a = run_trajectory(&params(Strategy::Strategy1, 0.0, 200), &init).unwrap();
        let b = run_trajectory(&params(Strategy::Strategy2, 0.0, 200), &init).unwrap();
        let m = run_trajectory(&params(Strategy::Markovian, 0.0, 200), &init).unwrap();
        for ((x, y), z) in a.systems().zip(b.systems()).zip(m.systems()) {
            assert!(trace_distance(x, y).unwrap() < 1e-13);
            assert!(trace_distance(x, z).unwrap() < 1e-13);
        }
    }

    #[test]
    fn no_system_coupling_freezes_system() {
        let init = bloch_state([0.6, 0.0, -0.2]).unwrap();
        for s in [Strategy::Markovian, Strategy::Strategy1, Strategy::Strategy2] {
            let p = ModelParams { nu: 0.0, ..params(s, 0.95, 20) };
            let t = run_trajectory(&p, &init).unwrap();
            for sys in t.systems() {
                assert!(sys.max_abs_diff(&init) < 1e-14);
            }
        }
    }

    #[test]
    fn fixed_point_single_step() {
        for s in [Strategy::Strategy1, Strategy::Strategy2, Strategy::Markovian] {
            let p = params(s, 0.95, 1);
            let star = p.env_thermal();
            let t = run_trajectory(&p, &star).unwrap();
            assert!(t.final_system().max_abs_diff(&star) < 1e-12);
        }
    }

    #[test]
    fn first_collision_coincides_across_strategies() {
        let init = bloch_state([1.0, 0.0, 0.0]).unwrap();
        let a = run_trajectory(&params(Strategy::Strategy1, 0.95, 1), &init).unwrap();
        let b = run_trajectory(&params(Strategy::Strategy2, 0.95, 1), &init).unwrap();
        assert!(a.final_system().max_abs_diff(b.final_system()) < 1e-15);
    }

    #[test]
    fn full_swap_homogenizes_in_one_step() {
        let p = ModelParams { nu: FRAC_PI_2, ..params(Strategy::Markovian, 0.0, 1) };
        let t = run_trajectory(&p, &bloch_state([0.0, 1.0, 0.0]).unwrap()).unwrap();
        assert!(t.final_system().max_abs_diff(&p.env_thermal()) < 1e-15);
    }

    #[test]
    fn markovian_converges_to_bath() {
        let p = params(Strategy::Markovian, 0.0, 2000);
        let t = run_trajectory(&p, &p.system_thermal()).unwrap();
        assert!(trace_distance(t.final_system(), &p.env_thermal()).unwrap() < 1e-3);
    }

    #[test]
    fn untouched_env_is_thermal() {
        let p = params(Strategy::Markovian, 0.9, 5);
        let t = run_trajectory(&p, &p.system_thermal()).unwrap();
        let star = thermal_state(p.beta_e(), p.omega_e).unwrap();
        for s in &t.snapshots {
            assert_eq!(incoming_env_state(s), &star);
        }
        let p1 = params(Strategy::Strategy1, 0.0, 5);
        let t1 = run_trajectory(&p1, &p1.system_thermal()).unwrap();
        for s in &t1.snapshots {
            assert!(incoming_env_state(s).max_abs_diff(&star) < 1e-15);
        }
    }

    #[test]
    fn deterministic() {
        let p = params(Strategy::Strategy2, 0.95, 100);
        let a = run_trajectory(&p, &p.system_thermal()).unwrap();
        let b = run_trajectory(&p, &p.system_thermal()).unwrap();
        for (x, y) in a.systems().zip(b.systems()) {
            assert_eq!(x, y);
        }
    }
}
