//! Reference implementations used as oracles. Each one is written directly
//! from the defining formula and shares no code with the library kernels.

#![allow(dead_code)]

use qcollide::qmath::{ComplexMatrix, DensityMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Random unitary from Gram-Schmidt on random complex columns.
pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<C64> = (0..d).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        for u in &cols {
            let dot: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut data = vec![c(0.0, 0.0); d * d];
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            data[i * d + j] = *z;
        }
    }
    ComplexMatrix::from_row_major(d, data).unwrap()
}

/// Random full-rank mixed state: a random unitary applied to a random
/// diagonal mixture.
pub fn random_state(rng: &mut ChaCha8Rng, qubits: usize) -> DensityMatrix {
    let d = 1 << qubits;
    let w: Vec<f64> = (0..d).map(|_| rng.gen_range(0.01..1.0)).collect();
    let total: f64 = w.iter().sum();
    let p: Vec<f64> = w.iter().map(|x| x / total).collect();
    let u = random_unitary(rng, d);
    let m = u.matmul(&ComplexMatrix::from_diag(&p).unwrap()).matmul(&u.adjoint());
    let mut h = m.clone();
    for i in 0..d {
        for j in 0..d {
            h[(i, j)] = 0.5 * (m[(i, j)] + m[(j, i)].conj());
        }
    }
    DensityMatrix::new(h).unwrap()
}

/// Random Bloch vector with length at most `max_len`.
pub fn random_bloch(rng: &mut ChaCha8Rng, max_len: f64) -> [f64; 3] {
    loop {
        let r = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let len: f64 = r.iter().map(|x: &f64| x * x).sum::<f64>().sqrt();
        if len <= 1.0 {
            return r.map(|x| x * max_len);
        }
    }
}

fn bits(index: usize, k: usize) -> Vec<usize> {
    (0..k).map(|q| (index >> (k - 1 - q)) & 1).collect()
}

fn from_bits(b: impl Iterator<Item = usize>) -> usize {
    b.fold(0, |acc, x| (acc << 1) | x)
}

/// `tr_{rest}` by explicit multi-index summation: `out[r][c]` collects every
/// `ρ[i][j]` whose traced digits agree and whose kept digits spell `(r, c)`.
pub fn partial_trace_oracle(rho: &DensityMatrix, keep: &[usize]) -> Vec<Vec<C64>> {
    let k = rho.qubits();
    let d = 1 << keep.len();
    let mut out = vec![vec![c(0.0, 0.0); d]; d];
    for i in 0..rho.dim() {
        let bi = bits(i, k);
        for j in 0..rho.dim() {
            let bj = bits(j, k);
            if (0..k).filter(|q| !keep.contains(q)).any(|q| bi[q] != bj[q]) {
                continue;
            }
            let r = from_bits(keep.iter().map(|&q| bi[q]));
            let col = from_bits(keep.iter().map(|&q| bj[q]));
            out[r][col] += rho.entry(i, j);
        }
    }
    out
}

pub fn max_diff(a: &DensityMatrix, b: &[Vec<C64>]) -> f64 {
    let mut m: f64 = 0.0;
    for (i, row) in b.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            m = m.max((a.entry(i, j) - z).norm());
        }
    }
    m
}

/// Excited-state population of `ω σ_z` at inverse temperature `β`.
pub fn thermal_excited(beta: f64, omega: f64) -> f64 {
    (-beta * omega).exp() / (2.0 * (beta * omega).cosh())
}

/// One Markovian collision with a partial swap against a diagonal qubit
/// state with populations `(e, 1 - e)`:
/// `ρ' = cos²ν ρ + sin²ν σ + i cosν sinν [σ, ρ]`.
pub fn markovian_step_oracle(rho: [[C64; 2]; 2], e: f64, nu: f64) -> [[C64; 2]; 2] {
    let (s, co) = nu.sin_cos();
    let sigma = [[c(e, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0 - e, 0.0)]];
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut comm = c(0.0, 0.0);
            for k in 0..2 {
                comm += sigma[i][k] * rho[k][j] - rho[i][k] * sigma[k][j];
            }
            out[i][j] = co * co * rho[i][j] + s * s * sigma[i][j] + c(0.0, co * s) * comm;
        }
    }
    out
}

/// Markovian population recursion `p' = cos²ν p + sin²ν p_E`.
pub fn markovian_population_oracle(p: f64, p_env: f64, nu: f64) -> f64 {
    nu.cos().powi(2) * p + nu.sin().powi(2) * p_env
}

/// Per-collision ratio `D_{i+1}/D_i` for a pair with equal populations under
/// Markovian dynamics: `cosν √(cos²ν + sin²ν tanh²(β ω))`.
pub fn decay_ratio_oracle(nu: f64, beta: f64, omega: f64) -> f64 {
    let t = (beta * omega).tanh();
    nu.cos() * (nu.cos().powi(2) + nu.sin().powi(2) * t * t).sqrt()
}

/// `S(p‖q)` for commuting diagonal qubit states given by their excited populations.
pub fn diagonal_relent(p: f64, q: f64) -> f64 {
    let term = |a: f64, b: f64| if a > 0.0 { a * (a / b).ln() } else { 0.0 };
    term(p, q) + term(1.0 - p, 1.0 - q)
}

pub fn as_2x2(rho: &DensityMatrix) -> [[C64; 2]; 2] {
    [[rho.entry(0, 0), rho.entry(0, 1)], [rho.entry(1, 0), rho.entry(1, 1)]]
}
