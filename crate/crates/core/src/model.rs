//! Physical setup: qubit Hamiltonians `H = ω σ_z`, Gibbs states, partial-SWAP
//! couplings and the parameter set of a run.
//!
//! Within one collision the working register is ordered `(S, E_i, E_{i+1})`,
//! i.e. qubit 0 is the system.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::qmath::{check_targets, ComplexMatrix, DensityMatrix, C64};
use crate::{Error, Result};

/// Which dynamics a run follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// No intra-environment collisions (`ε` ignored): quantum homogenization.
    Markovian,
    /// Correlations are erased after every collision; only `ρ_S` and the
    /// reduced state of the next environment qubit are carried.
    Strategy1,
    /// The joint state of the system and the next environment qubit is carried.
    Strategy2,
    /// Full unitary chain, no intermediate partial traces.
    Exact,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Markovian => "markovian",
            Strategy::Strategy1 => "strategy1",
            Strategy::Strategy2 => "strategy2",
            Strategy::Exact => "exact",
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.name())
    }
}

/// Physical configuration of a collision-model run. Temperatures are in energy
/// units (`k_B = 1`), angles in radians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// System temperature; `f64::INFINITY` gives the maximally mixed state.
    pub t_s: f64,
    /// Environment temperature.
    pub t_e: f64,
    pub omega_s: f64,
    pub omega_e: f64,
    /// System–environment partial-swap angle.
    pub nu: f64,
    /// Intra-environment partial-swap angle.
    pub epsilon: f64,
    pub n_collisions: usize,
    pub strategy: Strategy,
}

impl Default for ModelParams {
    /// `T_S = 0.1`, `T_E = 1`, `ω_S = ω_E = 1`, `ν = 0.05·π/2`, `ε = 0.95·π/2`,
    /// 2000 collisions, Strategy 2.
    fn default() -> Self {
        Self {
            t_s: 0.1,
            t_e: 1.0,
            omega_s: 1.0,
            omega_e: 1.0,
            nu: 0.05 * FRAC_PI_2,
            epsilon: 0.95 * FRAC_PI_2,
            n_collisions: 2000,
            strategy: Strategy::Strategy2,
        }
    }
}

impl ModelParams {
    pub fn with_strategy(&self, strategy: Strategy) -> Self {
        Self { strategy, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let temp_ok = |t: f64| t > 0.0 && !t.is_nan();
        if !temp_ok(self.t_s) {
            return Err(Error::Argument(format!("t_s = {} must be > 0", self.t_s)));
        }
        if !temp_ok(self.t_e) || !self.t_e.is_finite() {
            return Err(Error::Argument(format!("t_e = {} must be finite and > 0", self.t_e)));
        }
        for (name, w) in [("omega_s", self.omega_s), ("omega_e", self.omega_e)] {
            if !w.is_finite() {
                return Err(Error::Argument(format!("{name} = {w} must be finite")));
            }
        }
        for (name, a) in [("nu", self.nu), ("epsilon", self.epsilon)] {
            if !(0.0..=FRAC_PI_2).contains(&a) {
                return Err(Error::Argument(format!("{name} = {a} must lie in [0, π/2]")));
            }
        }
        if self.n_collisions == 0 {
            return Err(Error::Argument("n_collisions must be >= 1".into()));
        }
        Ok(())
    }

    pub fn beta_s(&self) -> f64 {
        1.0 / self.t_s
    }

    pub fn beta_e(&self) -> f64 {
        1.0 / self.t_e
    }

    /// Intra-environment angle actually used: zero in the Markovian limit.
    pub fn effective_epsilon(&self) -> f64 {
        match self.strategy {
            Strategy::Markovian => 0.0,
            _ => self.epsilon,
        }
    }

    /// Gibbs state of a fresh environment qubit, which is also the fixed point
    /// of the system dynamics.
    pub fn env_thermal(&self) -> DensityMatrix {
        thermal_state(self.beta_e(), self.omega_e).expect("validated environment temperature")
    }

    /// Initial Gibbs state of the system.
    pub fn system_thermal(&self) -> DensityMatrix {
        if self.t_s.is_infinite() {
            return DensityMatrix::maximally_mixed(1).expect("one qubit");
        }
        thermal_state(self.beta_s(), self.omega_s).expect("validated system temperature")
    }
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).expect("2x2")
}

pub fn pauli_y() -> ComplexMatrix {
    let z = C64::new(0.0, 0.0);
    ComplexMatrix::from_row_major(2, vec![z, C64::new(0.0, -1.0), C64::new(0.0, 1.0), z]).expect("2x2")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_diag(&[1.0, -1.0]).expect("2x2")
}

/// `ω σ_z`.
pub fn qubit_hamiltonian(omega: f64) -> ComplexMatrix {
    ComplexMatrix::from_diag(&[omega, -omega]).expect("2x2")
}

/// `Σ_q ω_q σ_z^{(q)}` on a register with one frequency per qubit.
pub fn register_hamiltonian(omegas: &[f64]) -> Result<ComplexMatrix> {
    let k = omegas.len();
    if k == 0 {
        return Err(Error::Argument("register needs at least one qubit".into()));
    }
    let d = 1usize << k;
    let diag: Vec<f64> = (0..d)
        .map(|x| {
            omegas
                .iter()
                .enumerate()
                .map(|(q, w)| if (x >> (k - 1 - q)) & 1 == 0 { *w } else { -*w })
                .sum()
        })
        .collect();
    ComplexMatrix::from_diag(&diag)
}

/// Excited-state population `e^{-βω}/(2 cosh βω)` of `exp(-β ω σ_z)/Z`.
pub fn excited_population(beta: f64, omega: f64) -> f64 {
    if omega == 0.0 {
        return 0.5;
    }
    let x = beta * omega;
    // 1/(1 + e^{2x}) handles |x| → ∞ without overflow
    1.0 / (1.0 + (2.0 * x).exp())
}

/// `exp(-β ω σ_z) / Z`. `β = ∞` returns the ground-state projector.
pub fn thermal_state(beta: f64, omega: f64) -> Result<DensityMatrix> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::Argument(format!("inverse temperature {beta} must be > 0")));
    }
    if !omega.is_finite() {
        return Err(Error::Argument(format!("frequency {omega} must be finite")));
    }
    let p = excited_population(beta, omega);
    DensityMatrix::from_populations(&[p, 1.0 - p])
}

/// The two-qubit SWAP in the product basis.
pub fn swap() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
    ])
    .expect("4x4")
}

/// `cos θ 𝟙 + i sin θ SWAP`.
pub fn partial_swap(theta: f64) -> ComplexMatrix {
    let id = ComplexMatrix::identity(4).expect("4x4");
    &id.scale(C64::new(theta.cos(), 0.0)) + &swap().scale(C64::new(0.0, theta.sin()))
}

/// Lifts a two-qubit operator to a `k`-qubit register, acting on `targets.0`
/// (first tensor factor of `u`) and `targets.1`.
pub fn embed_unitary(u: &ComplexMatrix, k: usize, targets: (usize, usize)) -> Result<ComplexMatrix> {
    if u.dim() != 4 {
        return Err(Error::Argument(format!("expected a 4x4 operator, got {}x{}", u.dim(), u.dim())));
    }
    check_targets(k, targets.0, targets.1)?;
    let d = 1usize
        .checked_shl(k as u32)
        .ok_or_else(|| Error::Size(format!("{k} qubits")))?;
    let mut out = ComplexMatrix::zeros(d)?;
    let s1 = k - 1 - targets.0;
    let s2 = k - 1 - targets.1;
    let mask = (1usize << s1) | (1usize << s2);
    let local = |x: usize| ((x >> s1) & 1) * 2 + ((x >> s2) & 1);
    for x in 0..d {
        for y in 0..d {
            if x & !mask == y & !mask {
                out[(x, y)] = u[(local(x), local(y))];
            }
        }
    }
    Ok(out)
}

/// Composed unitary of one collision on `(S, E_i, E_{i+1})`:
/// `U_{E_i,E_{i+1}}(ε) · U_{S,E_i}(ν)`.
pub fn step_unitary(params: &ModelParams) -> ComplexMatrix {
    let se = embed_unitary(&partial_swap(params.nu), 3, (0, 1)).expect("3-qubit register");
    let ee = embed_unitary(&partial_swap(params.effective_epsilon()), 3, (1, 2)).expect("3-qubit register");
    ee.matmul(&se)
}

/// Max-entry norm of `[U_step, ω_S σ_z^S + ω_E σ_z^{E_i} + ω_E σ_z^{E_{i+1}}]`.
/// Zero means the collision is a thermal operation.
pub fn check_energy_conservation(params: &ModelParams) -> f64 {
    let u = step_unitary(params);
    let h = register_hamiltonian(&[params.omega_s, params.omega_e, params.omega_e]).expect("3 qubits");
    u.commutator(&h).max_abs()
}

/// `(𝟙 + r·σ)/2`.
pub fn bloch_state(r: [f64; 3]) -> Result<DensityMatrix> {
    let len = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !len.is_finite() || len > 1.0 + 1e-12 {
        return Err(Error::Argument(format!("Bloch vector {r:?} has length {len} > 1")));
    }
    let half = C64::new(0.5, 0.0);
    let m = ComplexMatrix::from_row_major(
        2,
        vec![
            half * (1.0 + r[2]),
            C64::new(0.5 * r[0], -0.5 * r[1]),
            C64::new(0.5 * r[0], 0.5 * r[1]),
            half * (1.0 - r[2]),
        ],
    )?;
    DensityMatrix::new(m)
}
