//! Hermitian eigendecomposition.
//!
//! States produced by energy-conserving dynamics are block diagonal in the
//! excitation-number basis, with off-block entries that are exactly zero. The
//! solver splits the matrix into the connected components of its nonzero
//! pattern and diagonalizes each block on its own, which keeps the 2048x2048
//! registers of the exact-chain runs tractable. Blocks of size one and two
//! are solved in closed form; larger ones go to `nalgebra`.

use nalgebra::{DMatrix, SymmetricEigen};

use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::{Error, Result};

/// Hermiticity tolerance, `max |M - M†|` entrywise.
pub const TOL_HERM: f64 = 1e-10;

/// Eigenvectors of one invariant block. Column `c` of `vectors` is supported on
/// the basis indices `indices` and has eigenvalue `values[c]`.
#[derive(Clone, Debug)]
pub(crate) struct EigBlock {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    /// Row-major `b x b`, columns are eigenvectors.
    pub vectors: Vec<C64>,
}

impl EigBlock {
    pub fn size(&self) -> usize {
        self.indices.len()
    }

    /// `<v_c| M |v_c>` for the `c`-th eigenvector of this block.
    pub fn quadratic_form(&self, m: &ComplexMatrix, c: usize) -> C64 {
        let b = self.size();
        let mut acc = ZERO;
        for (r, &i) in self.indices.iter().enumerate() {
            let vi = self.vectors[r * b + c].conj();
            if vi == ZERO {
                continue;
            }
            let mut inner = ZERO;
            for (s, &j) in self.indices.iter().enumerate() {
                inner += m[(i, j)] * self.vectors[s * b + c];
            }
            acc += vi * inner;
        }
        acc
    }
}

/// Eigendecomposition `m = V diag(values) V†` with eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

pub(crate) fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let err = m.hermiticity_error();
    if err > TOL_HERM {
        return Err(Error::Contract(format!(
            "matrix is not Hermitian (max |M - M†| = {err:.3e})"
        )));
    }
    Ok(())
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components of the nonzero off-diagonal pattern, each sorted.
fn components(m: &ComplexMatrix) -> Vec<Vec<usize>> {
    let n = m.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    let data = m.as_slice();
    for i in 0..n {
        for j in i + 1..n {
            if data[i * n + j] != ZERO || data[j * n + i] != ZERO {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

fn solve_2x2(a: f64, b: C64, d: f64) -> (Vec<f64>, Vec<C64>) {
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let radius = (half * half + b.norm_sqr()).sqrt();
    let (hi, lo) = (mean + radius, mean - radius);
    if b == ZERO {
        return if a >= d {
            (vec![a, d], vec![ONE, ZERO, ZERO, ONE])
        } else {
            (vec![d, a], vec![ZERO, ONE, ONE, ZERO])
        };
    }
    // two algebraically equivalent eigenvectors for `hi`; keep the better conditioned one
    let cand1 = [C64::new(hi - d, 0.0), b.conj()];
    let cand2 = [b, C64::new(hi - a, 0.0)];
    let norm = |v: &[C64; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let v = if norm(&cand1) >= norm(&cand2) { cand1 } else { cand2 };
    let s = norm(&v);
    let (x, y) = (v[0] / s, v[1] / s);
    // columns: (x, y) for hi and (-conj y, conj x) for lo
    (vec![hi, lo], vec![x, -y.conj(), y, x.conj()])
}

fn solve_block(m: &ComplexMatrix, indices: &[usize]) -> Result<(Vec<f64>, Vec<C64>)> {
    let b = indices.len();
    match b {
        1 => Ok((vec![m[(indices[0], indices[0])].re], vec![ONE])),
        2 => {
            let (i, j) = (indices[0], indices[1]);
            let off = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            Ok(solve_2x2(m[(i, i)].re, off, m[(j, j)].re))
        }
        _ => {
            let sub = DMatrix::from_fn(b, b, |r, c| {
                0.5 * (m[(indices[r], indices[c])] + m[(indices[c], indices[r])].conj())
            });
            let eig = SymmetricEigen::try_new(sub, f64::EPSILON, 10_000).ok_or_else(|| {
                Error::Contract(format!("eigensolver did not converge on a {b}x{b} block"))
            })?;
            let mut order: Vec<usize> = (0..b).collect();
            order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
            let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
            let mut vectors = vec![ZERO; b * b];
            for (c, &k) in order.iter().enumerate() {
                for r in 0..b {
                    vectors[r * b + c] = eig.eigenvectors[(r, k)];
                }
            }
            Ok((values, vectors))
        }
    }
}

/// Blockwise eigendecomposition. Assumes `m` is Hermitian.
pub(crate) fn eig_blocks(m: &ComplexMatrix) -> Result<Vec<EigBlock>> {
    components(m)
        .into_iter()
        .map(|indices| {
            let (values, vectors) = solve_block(m, &indices)?;
            Ok(EigBlock { indices, values, vectors })
        })
        .collect()
}

/// All eigenvalues (unordered) of a Hermitian matrix.
pub(crate) fn eigenvalues_unchecked(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eig_blocks(m)?.into_iter().flat_map(|b| b.values).collect())
}

/// Eigenvalues of a Hermitian matrix in descending order.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let mut v = eigenvalues_unchecked(m)?;
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(v)
}

/// Full eigendecomposition of a Hermitian matrix: eigenvalues descending,
/// eigenvectors as the columns of a unitary matrix.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    check_hermitian(m)?;
    let blocks = eig_blocks(m)?;
    let mut cols: Vec<(f64, usize, usize)> = blocks
        .iter()
        .enumerate()
        .flat_map(|(bi, blk)| blk.values.iter().enumerate().map(move |(c, &v)| (v, bi, c)))
        .collect();
    cols.sort_by(|x, y| y.0.total_cmp(&x.0));
    let n = m.dim();
    let mut vectors = ComplexMatrix::zeros(n)?;
    for (col, &(_, bi, c)) in cols.iter().enumerate() {
        let blk = &blocks[bi];
        let b = blk.size();
        for (r, &row) in blk.indices.iter().enumerate() {
            vectors[(row, col)] = blk.vectors[r * b + c];
        }
    }
    Ok(HermitianEig { values: cols.iter().map(|c| c.0).collect(), vectors })
}
