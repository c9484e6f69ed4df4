//! Dense complex linear algebra on small multi-qubit registers.

mod density;
mod info;
mod matrix;
mod spectral;

pub use density::{partial_trace, tensor_product, DensityMatrix, TensorProduct, TOL_PSD, TOL_TRACE};
pub use info::{
    expectation, mutual_information, relative_entropy, trace_distance, von_neumann_entropy,
    EIG_FLOOR, SUPPORT_TOL, TOL_EXPECTATION_IM,
};
pub use matrix::{ComplexMatrix, C64, MAX_QUBITS};
pub use spectral::{eigenvalues, hermitian_eig, HermitianEig, TOL_HERM};
pub(crate) use matrix::check_targets;
