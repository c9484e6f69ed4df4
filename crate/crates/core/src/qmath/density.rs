use super::matrix::{ComplexMatrix, C64, MAX_QUBITS};
use super::spectral::{self, check_hermitian};
use crate::{Error, Result};

/// Tolerance on `|tr ρ - 1|`.
pub const TOL_TRACE: f64 = 1e-10;
/// Smallest admissible eigenvalue is `-TOL_PSD`.
pub const TOL_PSD: f64 = 1e-10;

/// Hermitian, unit-trace, positive semidefinite matrix on `k >= 1` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates and wraps `m`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.dim() < 2 {
            return Err(Error::Argument("a density matrix needs at least one qubit".into()));
        }
        check_hermitian(&m)?;
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TOL_TRACE || tr.im.abs() > TOL_TRACE {
            return Err(Error::Contract(format!("trace is {tr}, expected 1")));
        }
        let min = spectral::eigenvalues_unchecked(&m)?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -TOL_PSD {
            return Err(Error::Contract(format!("not positive semidefinite (min eigenvalue {min:.3e})")));
        }
        Ok(Self { m })
    }

    /// Wraps a matrix known to satisfy the invariants, e.g. the image of a valid
    /// state under a unitary or a partial trace.
    ///
    /// Rounding noise is projected out: the matrix is re-symmetrized and its
    /// trace reset to one. Without the trace reset, carrying a product of two
    /// marginals of the same state (Strategy 1) squares the trace error at
    /// every collision.
    pub(crate) fn from_matrix_unchecked(mut m: ComplexMatrix) -> Self {
        debug_assert!(m.hermiticity_error() < 1e-8);
        m.hermitize();
        let tr = m.trace().re;
        debug_assert!((tr - 1.0).abs() < 1e-8);
        if tr != 1.0 {
            m = m.scale(C64::new(1.0 / tr, 0.0));
        }
        Self { m }
    }

    pub fn from_populations(p: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_diag(p)?)
    }

    /// `|ψ><ψ|` for a normalized state vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TOL_TRACE {
            return Err(Error::Argument(format!("state vector has norm² {norm}")));
        }
        let n = psi.len();
        let mut m = ComplexMatrix::zeros(n)?;
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        Self::new(m)
    }

    pub fn maximally_mixed(qubits: usize) -> Result<Self> {
        if qubits == 0 || qubits > MAX_QUBITS {
            return Err(Error::Size(format!("{qubits} qubits outside 1..={MAX_QUBITS}")));
        }
        let d = 1usize << qubits;
        Ok(Self { m: ComplexMatrix::identity(d)?.scale(C64::new(1.0 / d as f64, 0.0)) })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn qubits(&self) -> usize {
        self.m.qubits()
    }

    /// `ρ[i, j]`.
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    /// Diagonal entry `ρ[i, i]` as a real number.
    pub fn population(&self, i: usize) -> f64 {
        self.m[(i, i)].re
    }

    pub fn purity(&self) -> f64 {
        let n = self.dim();
        let s = self.m.as_slice();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (s[i * n + j] * s[j * n + i]).re)
            .sum()
    }

    /// `U ρ U†`. `u` must be unitary; the result is not re-validated.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::Argument(format!(
                "unitary of dimension {} applied to a state of dimension {}",
                u.dim(),
                self.dim()
            )));
        }
        Ok(Self::from_matrix_unchecked(self.m.conjugate_by(u)))
    }

    /// In-place two-qubit unitary on qubits `(q1, q2)`.
    pub fn apply_two_qubit(&mut self, u: &ComplexMatrix, q1: usize, q2: usize) -> Result<()> {
        self.m.apply_two_qubit(u, q1, q2)?;
        let m = std::mem::replace(&mut self.m, ComplexMatrix::zeros(2)?);
        *self = Self::from_matrix_unchecked(m);
        Ok(())
    }

    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        Ok(Self { m: self.m.kron(&rhs.m)? })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m.max_abs_diff(&other.m)
    }
}

/// Types that have a Kronecker product within the same kind.
pub trait TensorProduct: Sized {
    fn tensor(&self, rhs: &Self) -> Result<Self>;
}

impl TensorProduct for ComplexMatrix {
    fn tensor(&self, rhs: &Self) -> Result<Self> {
        self.kron(rhs)
    }
}

impl TensorProduct for DensityMatrix {
    fn tensor(&self, rhs: &Self) -> Result<Self> {
        self.kron(rhs)
    }
}

/// `a ⊗ b`.
pub fn tensor_product<T: TensorProduct>(a: &T, b: &T) -> Result<T> {
    a.tensor(b)
}

/// Reduced state on the qubits listed in `keep`, in the order given.
pub fn partial_trace(state: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let k = state.qubits();
    if keep.is_empty() {
        return Err(Error::Argument("partial trace needs at least one kept qubit".into()));
    }
    let mut seen = vec![false; k];
    for &q in keep {
        if q >= k || seen[q] {
            return Err(Error::Argument(format!(
                "kept qubits {keep:?} invalid for a {k}-qubit state"
            )));
        }
        seen[q] = true;
    }
    let traced: Vec<usize> = (0..k).filter(|q| !seen[*q]).collect();
    if traced.is_empty() && keep.windows(2).all(|w| w[0] < w[1]) {
        return Ok(state.clone());
    }

    // scatter bit patterns of the kept / traced subsystems into full indices
    let scatter = |qs: &[usize]| -> Vec<usize> {
        let n = qs.len();
        (0..1usize << n)
            .map(|x| {
                qs.iter().enumerate().fold(0usize, |acc, (pos, &q)| {
                    let bit = (x >> (n - 1 - pos)) & 1;
                    acc | (bit << (k - 1 - q))
                })
            })
            .collect()
    };
    let kept_idx = scatter(keep);
    let traced_idx = scatter(&traced);

    let d = kept_idx.len();
    let full = state.dim();
    let src = state.matrix().as_slice();
    let mut out = ComplexMatrix::zeros(d)?;
    for (r, &kr) in kept_idx.iter().enumerate() {
        for (c, &kc) in kept_idx.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &traced_idx {
                acc += src[(kr | t) * full + (kc | t)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(out))
}
