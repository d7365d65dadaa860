//! Entropies of tomographic symbols and their quantum counterparts.
//!
//! For a frame `u` the symbol `w(m, u) = <m|u† ρ u|m>` is a probability
//! vector, so every classical entropy applies to it. Over all frames the
//! Shannon and Rényi symbol entropies are minimized by the eigenbasis of `ρ`,
//! where they equal the von Neumann and quantum Rényi entropies.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::linalg::random::{sample_haar_unitary, stream_rng};
use crate::linalg::{eig_hermitian, CMatrix, DensityMatrix, RngSeed};
use crate::symbols::{frame_distribution, marginal_distribution};

/// Tolerance on probability vectors; entries in `[-1e-10, 0)` count as zero.
pub const PROB_TOL: f64 = 1e-10;
/// Slack allowed when checking a symbol entropy against its minimum.
pub const MIN_BOUND_TOL: f64 = 1e-9;
/// Slack of the classical (strong) subadditivity verdicts.
pub const INEQUALITY_TOL: f64 = 1e-12;
/// Probabilities and eigenvalues below this are rounding noise and are set to
/// zero. Without it `Σ w^q` with `q < 1` turns a `1e-17` residue into an
/// error of order `1e-9`.
pub const ROUNDING_FLOOR: f64 = 1e-14;

fn chop(x: f64) -> f64 {
    if x < ROUNDING_FLOOR {
        0.0
    } else {
        x
    }
}

fn clean(w: &[f64]) -> Result<Vec<f64>> {
    if w.is_empty() {
        return domain("empty probability vector");
    }
    if let Some(x) = w.iter().find(|&&x| x.is_nan() || x < -PROB_TOL) {
        return domain(format!("probability {x} is negative"));
    }
    let sum: f64 = w.iter().sum();
    if (sum - 1.0).abs() > PROB_TOL {
        return domain(format!("probabilities sum to {sum}"));
    }
    Ok(w.iter().map(|&x| chop(x)).collect())
}

fn check_q(q: f64) -> Result<()> {
    if !q.is_finite() || q <= 0.0 {
        return domain(format!("entropy index q = {q} must be positive"));
    }
    Ok(())
}

fn shannon(w: &[f64]) -> f64 {
    -w.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>()
}

fn power_sum(w: &[f64], q: f64) -> f64 {
    w.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(q)).sum()
}

/// `-Σ w ln w` with `0 ln 0 = 0`.
pub fn symbol_entropy(w: &[f64]) -> Result<f64> {
    Ok(shannon(&clean(w)?))
}

/// `ln(Σ w^q) / (1-q)`; Shannon at `q = 1`.
pub fn renyi_entropy(w: &[f64], q: f64) -> Result<f64> {
    check_q(q)?;
    let w = clean(w)?;
    if q == 1.0 {
        return Ok(shannon(&w));
    }
    Ok(power_sum(&w, q).ln() / (1.0 - q))
}

/// `(Σ w^q - 1) / (1-q)`; Shannon at `q = 1`.
pub fn tsallis_entropy(w: &[f64], q: f64) -> Result<f64> {
    check_q(q)?;
    let w = clean(w)?;
    if q == 1.0 {
        return Ok(shannon(&w));
    }
    Ok((power_sum(&w, q) - 1.0) / (1.0 - q))
}

/// `ln_q x = (x^{1-q} - 1) / (1-q)`, with `ln_1 = ln`.
pub fn ln_q(x: f64, q: f64) -> f64 {
    if q == 1.0 {
        x.ln()
    } else {
        (x.powf(1.0 - q) - 1.0) / (1.0 - q)
    }
}

/// `-Σ w1 ln_q(w2 / w1)`, which is the Kullback–Leibler divergence at
/// `q = 1`; `+∞` when `w2` vanishes somewhere `w1` does not.
pub fn relative_q_entropy(w1: &[f64], w2: &[f64], q: f64) -> Result<f64> {
    check_q(q)?;
    let (w1, w2) = (clean(w1)?, clean(w2)?);
    if w1.len() != w2.len() {
        return domain(format!("distributions of length {} and {}", w1.len(), w2.len()));
    }
    let mut total = 0.0;
    for (&a, &b) in w1.iter().zip(&w2) {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return Ok(f64::INFINITY);
        }
        total -= a * ln_q(b / a, q);
    }
    Ok(total)
}

fn spectrum(rho: &DensityMatrix) -> Vec<f64> {
    rho.eigenvalues().into_iter().map(chop).collect()
}

/// `-Tr ρ ln ρ`.
pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    shannon(&spectrum(rho))
}

/// `ln(Tr ρ^q) / (1-q)`; von Neumann at `q = 1`.
pub fn quantum_renyi(rho: &DensityMatrix, q: f64) -> Result<f64> {
    check_q(q)?;
    let l = spectrum(rho);
    if q == 1.0 {
        return Ok(shannon(&l));
    }
    Ok(power_sum(&l, q).ln() / (1.0 - q))
}

/// Which classical entropy to apply to the symbol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntropyKind {
    Shannon,
    Renyi { q: f64 },
    Tsallis { q: f64 },
}

impl EntropyKind {
    pub fn of_distribution(self, w: &[f64]) -> Result<f64> {
        match self {
            EntropyKind::Shannon => symbol_entropy(w),
            EntropyKind::Renyi { q } => renyi_entropy(w, q),
            EntropyKind::Tsallis { q } => tsallis_entropy(w, q),
        }
    }

    /// The same entropy of the spectrum of `ρ`.
    pub fn of_state(self, rho: &DensityMatrix) -> Result<f64> {
        let l = spectrum(rho);
        let s: f64 = l.iter().sum();
        let l: Vec<f64> = l.iter().map(|x| x / s).collect();
        self.of_distribution(&l)
    }
}

/// Symbol entropy `H_u` of `ρ` in frame `u`.
pub fn frame_entropy(rho: &DensityMatrix, u: &CMatrix, kind: EntropyKind) -> Result<f64> {
    let w: Vec<f64> = frame_distribution(rho.matrix(), u).iter().map(|z| z.re).collect();
    kind.of_distribution(&w)
}

/// Plain Monte Carlo estimate over Haar frames.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarlo {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
    pub seed: RngSeed,
}

/// Minimum of a symbol entropy over the unitary group, with the sampled
/// frames used to verify it.
#[derive(Clone, Debug, Serialize)]
pub struct EntropyReport {
    pub kind: EntropyKind,
    /// Entropy in the eigenbasis frame, then in each sampled Haar frame.
    pub per_frame: Vec<f64>,
    /// Entropy of the spectrum of `ρ`, the exact minimum.
    pub min_value: f64,
    /// Eigenvector matrix of `ρ`, the minimizing frame.
    pub argmin_frame: CMatrix,
    /// Whether every sampled value is at least `min_value - 1e-9`.
    pub bound_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarlo>,
}

/// Shannon symbol entropy minimized over frames.
pub fn min_entropy_over_group(rho: &DensityMatrix, n_verify: usize, seed: RngSeed) -> Result<EntropyReport> {
    min_over_group(rho, EntropyKind::Shannon, n_verify, seed)
}

/// Symbol entropy of the given kind minimized over frames. The minimizer is
/// the eigenbasis; `n_verify` Haar frames check that nothing lies below it.
/// Their mean is reported as the integral entropy when `n_verify >= 2`.
pub fn min_over_group(rho: &DensityMatrix, kind: EntropyKind, n_verify: usize, seed: RngSeed) -> Result<EntropyReport> {
    let eig = eig_hermitian(rho.matrix())?;
    let min_value = kind.of_state(rho)?;
    let mut per_frame = vec![frame_entropy(rho, &eig.vectors, kind)?];
    let sampled = sampled_entropies(rho, kind, n_verify, seed)?;
    per_frame.extend(&sampled);
    let bound_holds = sampled.iter().all(|&h| h >= min_value - MIN_BOUND_TOL);
    let monte_carlo = (n_verify >= 2).then(|| mean_stderr(&sampled, seed));
    Ok(EntropyReport { kind, per_frame, min_value, argmin_frame: eig.vectors, bound_holds, monte_carlo })
}

fn sampled_entropies(rho: &DensityMatrix, kind: EntropyKind, n: usize, seed: RngSeed) -> Result<Vec<f64>> {
    let d = rho.dim();
    (0..n)
        .into_par_iter()
        .map(|i| frame_entropy(rho, &sample_haar_unitary(d, &mut stream_rng(seed, i as u64)), kind))
        .collect()
}

fn mean_stderr(xs: &[f64], seed: RngSeed) -> MonteCarlo {
    let n = xs.len();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    MonteCarlo { mean, stderr: (var / n as f64).sqrt(), n, seed }
}

/// Integral entropy `∫ H_u du` over Haar frames, by Monte Carlo.
pub fn integral_entropy(rho: &DensityMatrix, n: usize, seed: RngSeed) -> Result<MonteCarlo> {
    integral_entropy_of(rho, EntropyKind::Shannon, n, seed)
}

pub fn integral_entropy_of(rho: &DensityMatrix, kind: EntropyKind, n: usize, seed: RngSeed) -> Result<MonteCarlo> {
    if n < 2 {
        return domain("integral entropy needs at least two samples");
    }
    Ok(mean_stderr(&sampled_entropies(rho, kind, n, seed)?, seed))
}

/// Classical subadditivity of the symbol entropies of a bipartite state.
#[derive(Clone, Debug, Serialize)]
pub struct SubadditivityReport {
    pub h12: f64,
    pub h1: f64,
    pub h2: f64,
    /// `H1 + H2 - H12`.
    pub slack: f64,
    pub holds: bool,
}

fn joint(rho: &DensityMatrix, u: &CMatrix, parties: usize) -> Result<Vec<f64>> {
    if rho.dims().len() != parties {
        return domain(format!("expected {parties} subsystems, got dims {:?}", rho.dims()));
    }
    if !u.is_square() || u.dim() != rho.dim() {
        return domain("frame dimension does not match the state");
    }
    Ok(frame_distribution(rho.matrix(), u).iter().map(|z| z.re).collect())
}

/// `H(12) <= H(1) + H(2)` for `w(m1, m2, u)` and its marginals.
pub fn subadditivity_check(rho12: &DensityMatrix, u: &CMatrix) -> Result<SubadditivityReport> {
    let w = joint(rho12, u, 2)?;
    let dims = rho12.dims();
    let h12 = symbol_entropy(&w)?;
    let h1 = symbol_entropy(&marginal_distribution(&w, dims, &[0])?)?;
    let h2 = symbol_entropy(&marginal_distribution(&w, dims, &[1])?)?;
    let slack = h1 + h2 - h12;
    Ok(SubadditivityReport { h12, h1, h2, slack, holds: slack >= -INEQUALITY_TOL })
}

/// Classical strong subadditivity of the symbol entropies of a tripartite state.
#[derive(Clone, Debug, Serialize)]
pub struct StrongSubadditivityReport {
    /// `H(123) + H(2)`.
    pub lhs: f64,
    /// `H(12) + H(23)`.
    pub rhs: f64,
    pub holds: bool,
}

/// `H(123) + H(2) <= H(12) + H(23)` for `w(m1, m2, m3, u)`.
pub fn strong_subadditivity_check(rho123: &DensityMatrix, u: &CMatrix) -> Result<StrongSubadditivityReport> {
    let w = joint(rho123, u, 3)?;
    let dims = rho123.dims();
    let h = |keep: &[usize]| -> Result<f64> { symbol_entropy(&marginal_distribution(&w, dims, keep)?) };
    let lhs = symbol_entropy(&w)? + h(&[1])?;
    let rhs = h(&[0, 1])? + h(&[1, 2])?;
    Ok(StrongSubadditivityReport { lhs, rhs, holds: lhs <= rhs + INEQUALITY_TOL })
}
