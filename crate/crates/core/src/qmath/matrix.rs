use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;

/// Largest register the dense kernels will build (2^14 x 2^14 entries).
pub const MAX_QUBITS: usize = 14;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix of dimension `2^k`, stored row-major.
///
/// Qubit `0` is the most significant bit of a basis index, so that
/// `(a ⊗ b)[(i*db + j), (m*db + n)] = a[i,m] * b[j,n]`.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::Argument(format!("dimension {dim} is not a power of two")));
    }
    if dim.trailing_zeros() as usize > MAX_QUBITS {
        return Err(Error::Size(format!(
            "dimension {dim} exceeds the {MAX_QUBITS}-qubit cap"
        )));
    }
    Ok(())
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim, data: vec![ZERO; dim * dim] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries. Entries must be finite.
    pub fn from_row_major(dim: usize, data: Vec<C64>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::Argument(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Argument("matrix has non-finite entries".into()));
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::Argument("rows must form a square matrix".into()));
            }
            data.extend(row.iter().map(|&x| C64::new(x, 0.0)));
        }
        Self::from_row_major(dim, data)
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn diag(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let rrow = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in row.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    /// `u * self * u†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.adjoint())
    }

    /// `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M - M†|` entrywise.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim;
        let mut err = 0.0f64;
        for i in 0..n {
            for j in i..n {
                err = err.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        err
    }

    /// Replaces the matrix by `(M + M†)/2`.
    pub(crate) fn hermitize(&mut self) {
        let n = self.dim;
        for i in 0..n {
            self.data[i * n + i].im = 0.0;
            for j in i + 1..n {
                let avg = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg.conj();
            }
        }
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        let (da, db) = (self.dim, rhs.dim);
        let qubits = self.qubits() + rhs.qubits();
        if qubits > MAX_QUBITS {
            return Err(Error::Size(format!(
                "tensor product of {} and {} qubits exceeds the {MAX_QUBITS}-qubit cap",
                self.qubits(),
                rhs.qubits()
            )));
        }
        let d = da * db;
        let mut data = vec![ZERO; d * d];
        for i in 0..da {
            for m in 0..da {
                let a = self.data[i * da + m];
                if a == ZERO {
                    continue;
                }
                for j in 0..db {
                    let row = (i * db + j) * d + m * db;
                    for n in 0..db {
                        data[row + n] = a * rhs.data[j * db + n];
                    }
                }
            }
        }
        Ok(Self { dim: d, data })
    }

    /// In-place `M -> U M U†` where the 4x4 `u` acts on qubits `(q1, q2)` of
    /// the register, `q1` being the first tensor factor of `u`.
    ///
    /// Costs O(dim²) rather than the O(dim³) of an embedded dense product.
    pub fn apply_two_qubit(&mut self, u: &Self, q1: usize, q2: usize) -> Result<()> {
        let k = self.qubits();
        check_targets(k, q1, q2)?;
        if u.dim != 4 {
            return Err(Error::Argument("two-qubit operator must be 4x4".into()));
        }
        let n = self.dim;
        let b1 = 1usize << (k - 1 - q1);
        let b2 = 1usize << (k - 1 - q2);
        let offs = [0, b2, b1, b1 | b2];
        let bases: Vec<usize> = (0..n).filter(|x| x & (b1 | b2) == 0).collect();
        let uc: Vec<C64> = u.data.clone();

        // rows: M <- U M
        for c in 0..n {
            for &base in &bases {
                let old = [
                    self.data[(base + offs[0]) * n + c],
                    self.data[(base + offs[1]) * n + c],
                    self.data[(base + offs[2]) * n + c],
                    self.data[(base + offs[3]) * n + c],
                ];
                for (r, off) in offs.iter().enumerate() {
                    let u_row = &uc[r * 4..r * 4 + 4];
                    self.data[(base + off) * n + c] =
                        u_row[0] * old[0] + u_row[1] * old[1] + u_row[2] * old[2] + u_row[3] * old[3];
                }
            }
        }
        // columns: M <- M U†
        for r in 0..n {
            let row = &mut self.data[r * n..(r + 1) * n];
            for &base in &bases {
                let old = [row[base + offs[0]], row[base + offs[1]], row[base + offs[2]], row[base + offs[3]]];
                for (cidx, off) in offs.iter().enumerate() {
                    let u_row = &uc[cidx * 4..cidx * 4 + 4];
                    row[base + off] = old[0] * u_row[0].conj()
                        + old[1] * u_row[1].conj()
                        + old[2] * u_row[2].conj()
                        + old[3] * u_row[3].conj();
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn check_targets(k: usize, q1: usize, q2: usize) -> Result<()> {
    if q1 == q2 || q1 >= k || q2 >= k {
        return Err(Error::Argument(format!(
            "targets ({q1}, {q2}) invalid for a {k}-qubit register"
        )));
    }
    Ok(())
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        if self.dim > 8 {
            return Ok(());
        }
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
