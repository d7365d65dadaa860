//! Seeded random matrices.
//!
//! Every stream is a ChaCha8 generator keyed by the 64-bit seed. Independent
//! sub-streams (one per sample in parallel loops) use the ChaCha stream id, so a
//! `(seed, index)` pair always reproduces the same draw on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use super::matrix::{CMatrix, C64, ZERO};
use crate::error::{domain, Result};

/// Seed for reproducible sampling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

pub type TomoRng = ChaCha8Rng;

pub fn rng_from_seed(seed: RngSeed) -> TomoRng {
    ChaCha8Rng::seed_from_u64(seed.0)
}

/// Independent sub-stream `index` of `seed`.
pub fn stream_rng(seed: RngSeed, index: u64) -> TomoRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    rng.set_stream(index);
    rng
}

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `rows x cols` matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian_c64(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    ginibre(n, n, rng).hermitian_part()
}

/// Haar-distributed unitary from an explicit generator.
///
/// QR of a complex Ginibre matrix by Gram–Schmidt with one re-orthogonalization
/// pass; the resulting `R` has a positive real diagonal, which is the phase
/// fix that makes `Q` Haar distributed.
pub fn sample_haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(n, n, rng);
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut v = g.column(c);
        for _ in 0..2 {
            for qk in &q {
                let proj: C64 = qk.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, &qi) in v.iter_mut().zip(qk) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for vi in &mut v {
            *vi /= norm;
        }
        q.push(v);
    }
    CMatrix::from_fn(n, n, |r, c| q[c][r])
}

/// Haar-distributed `n x n` unitary, deterministic in `seed`.
pub fn haar_unitary(n: usize, seed: RngSeed) -> Result<CMatrix> {
    if n == 0 {
        return domain("unitary dimension must be at least 1");
    }
    Ok(sample_haar_unitary(n, &mut rng_from_seed(seed)))
}

/// Random density matrix `G G† / Tr` with `G` an `n x rank` Ginibre matrix.
pub fn sample_density<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(n, rank, rng);
    let rho = g.matmul(&g.adjoint());
    let tr = rho.trace().re;
    rho.hermitian_part().scale_real(1.0 / tr)
}

pub fn random_density(n: usize, rank: usize, seed: RngSeed) -> Result<DensityMatrix> {
    if n == 0 || rank == 0 || rank > n {
        return domain(format!("rank {rank} must lie in 1..={n}"));
    }
    let rho = sample_density(n, rank, &mut rng_from_seed(seed));
    DensityMatrix::new(rho, vec![n])
}

/// Random unit vector in `C^n`.
pub fn random_pure_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    let mut v: Vec<C64> = (0..n).map(|_| gaussian_c64(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    if v.iter().all(|z| *z == ZERO) {
        v[0] = C64::new(1.0, 0.0);
    }
    v
}
