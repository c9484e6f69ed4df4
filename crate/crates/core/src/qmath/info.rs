//! Entropic and distance functionals. All logarithms are natural.

use super::density::{partial_trace, DensityMatrix};
use super::matrix::{ComplexMatrix, C64};
use super::spectral::{self, check_hermitian};
use crate::{Error, Result};

/// Eigenvalues of the reference state below this count as outside its support.
pub const EIG_FLOOR: f64 = 1e-14;
/// Weight of `ρ` outside `supp(σ)` tolerated by [`relative_entropy`].
pub const SUPPORT_TOL: f64 = 1e-10;
/// Largest imaginary part [`expectation`] accepts.
pub const TOL_EXPECTATION_IM: f64 = 1e-8;

/// Rounding can leave eigenvalues slightly negative; those count as zero.
fn xlogx(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.ln()
    }
}

/// `S(ρ) = -tr ρ ln ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let vals = spectral::eigenvalues_unchecked(rho.matrix())?;
    Ok(-vals.into_iter().map(xlogx).sum::<f64>())
}

/// `S(ρ‖σ) = tr ρ ln ρ - tr ρ ln σ`.
///
/// Fails with [`Error::Support`] when `ρ` puts more than [`SUPPORT_TOL`] weight
/// on an eigenvector of `σ` whose eigenvalue is below [`EIG_FLOOR`].
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Argument(format!(
            "relative entropy of dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let neg_entropy: f64 = spectral::eigenvalues_unchecked(rho.matrix())?
        .into_iter()
        .map(xlogx)
        .sum();
    let mut cross = 0.0;
    for block in spectral::eig_blocks(sigma.matrix())? {
        for (c, &mu) in block.values.iter().enumerate() {
            let weight = block.quadratic_form(rho.matrix(), c).re;
            if mu < EIG_FLOOR {
                if weight > SUPPORT_TOL {
                    return Err(Error::Support(format!(
                        "state has weight {weight:.3e} where the reference has eigenvalue {mu:.3e}"
                    )));
                }
                continue;
            }
            cross += weight * mu.ln();
        }
    }
    Ok(neg_entropy - cross)
}

/// `D(ρ, σ) = ½‖ρ - σ‖₁`, as half the sum of absolute eigenvalues of `ρ - σ`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Argument(format!(
            "trace distance of dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let mut diff = rho.matrix() - sigma.matrix();
    // fix the overall sign so that swapping the arguments gives a bit-identical result
    let lead = diff.as_slice().iter().find(|z| z.re != 0.0 || z.im != 0.0).copied();
    if lead.is_some_and(|z| z.re < 0.0 || (z.re == 0.0 && z.im < 0.0)) {
        diff = diff.scale(C64::new(-1.0, 0.0));
    }
    diff.hermitize();
    let vals = spectral::eigenvalues_unchecked(&diff)?;
    Ok((0.5 * vals.iter().map(|v| v.abs()).sum::<f64>()).min(1.0))
}

/// `I(A:B) = S(A) + S(B) - S(AB)` where `A` is the qubit set `part_a` and `B`
/// is its complement.
pub fn mutual_information(rho: &DensityMatrix, part_a: &[usize]) -> Result<f64> {
    let k = rho.qubits();
    let mut part_b: Vec<usize> = (0..k).filter(|q| !part_a.contains(q)).collect();
    part_b.sort_unstable();
    if part_a.is_empty() || part_b.is_empty() {
        return Err(Error::Argument(format!(
            "{part_a:?} is not a bipartition of a {k}-qubit state"
        )));
    }
    let s_a = von_neumann_entropy(&partial_trace(rho, part_a)?)?;
    let s_b = von_neumann_entropy(&partial_trace(rho, &part_b)?)?;
    Ok(s_a + s_b - von_neumann_entropy(rho)?)
}

/// `tr(O ρ)` for a Hermitian observable.
pub fn expectation(obs: &ComplexMatrix, rho: &DensityMatrix) -> Result<f64> {
    if obs.dim() != rho.dim() {
        return Err(Error::Argument(format!(
            "observable of dimension {} on a state of dimension {}",
            obs.dim(),
            rho.dim()
        )));
    }
    check_hermitian(obs)?;
    let n = obs.dim();
    let (o, r) = (obs.as_slice(), rho.matrix().as_slice());
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += o[i * n + j] * r[j * n + i];
        }
    }
    if acc.im.abs() > TOL_EXPECTATION_IM {
        return Err(Error::Contract(format!("expectation has imaginary part {:.3e}", acc.im)));
    }
    Ok(acc.re)
}
