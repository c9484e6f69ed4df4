//! Discrete-time collision-model simulator for a qubit relaxing towards a
//! thermal bath of qubits.
//!
//! The crate is split along the physics pipeline:
//!
//! * [`qmath`]: dense complex linear algebra and quantum-information
//!   functionals (partial trace, entropies, trace distance).
//! * [`model`]: Hamiltonians, thermal states, partial-SWAP unitaries and
//!   [`model::ModelParams`].
//! * [`engine`]: the Markovian, correlation-erasing (Strategy 1),
//!   correlation-keeping (Strategy 2) and exact full-chain dynamics.
//! * [`analysis`]: BLP non-Markovianity, entropy production in three
//!   formulations and heat flux estimators.
//! * [`experiment`]: TOML configuration, the `simulate`/`blp`/`sweep`/`exact`
//!   commands and CSV/JSON writers.
//!
//! Conventions: `hbar = k_B = 1`, entropies in nats, and basis vector `0` is
//! the `+1` eigenvector of `sigma_z` (the excited state, since `H = omega sigma_z`).

pub mod analysis;
pub mod engine;
mod error;
pub mod experiment;
pub mod model;
pub mod qmath;

pub use error::{Error, Result};

/// Crate version, embedded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
