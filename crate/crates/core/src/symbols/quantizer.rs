use rayon::prelude::*;

use super::tomogram::{Frame, OutcomeSpace, Tomogram};
use crate::error::{domain, Result};
use crate::linalg::{CMatrix, C64, ZERO};
use crate::reconstruction::{QuadratureGrid, GROUP_VOLUME};
use crate::su2::{
    big_d_unchecked, cg_unchecked, check_projection, parity_sign, rotation_matrix, tensor_unchecked, EulerAngles,
    HalfInt,
};

/// Dequantizer `U(m, Ω) = R†(Ω) |j m><j m| R(Ω)`.
pub fn dequantizer_u(j: HalfInt, m: HalfInt, omega: EulerAngles) -> Result<CMatrix> {
    check_projection(j, m)?;
    let r = rotation_matrix(j, omega);
    let i = j.index_of(m);
    let n = j.multiplicity();
    Ok(CMatrix::from_fn(n, n, |a, b| r[(i, a)].conj() * r[(i, b)]))
}

/// Dequantizer as the irreducible-tensor series
/// `Σ_{L,M} (-1)^{j-m+M} <j m; j -m | L 0> D^L_{0,-M}(Ω) T_{LM}`.
pub fn dequantizer_series(j: HalfInt, m: HalfInt, omega: EulerAngles) -> Result<CMatrix> {
    check_projection(j, m)?;
    Ok(tensor_series(j, m, omega, |_| 1.0))
}

/// Quantizer `D(m, Ω)`: the series above with weights `(2L+1)/(8π²)`.
pub fn quantizer_d(j: HalfInt, m: HalfInt, omega: EulerAngles) -> Result<CMatrix> {
    check_projection(j, m)?;
    Ok(tensor_series(j, m, omega, |l| f64::from(2 * l + 1) / GROUP_VOLUME))
}

fn tensor_series(j: HalfInt, m: HalfInt, omega: EulerAngles, weight: impl Fn(i32) -> f64) -> CMatrix {
    let (tj, tm) = (j.twice(), m.twice());
    let mut out = CMatrix::square_zeros(j.multiplicity());
    for l in 0..=tj {
        let cg = cg_unchecked(tj, tm, tj, -tm, 2 * l, 0);
        if cg == 0.0 {
            continue;
        }
        let base = weight(l) * cg * parity_sign(tj - tm);
        for big_m in -l..=l {
            let d = big_d_unchecked(2 * l, 0, -2 * big_m, omega);
            let coef = d * base * parity_sign(2 * big_m);
            out.add_scaled(coef, &tensor_unchecked(j, l, big_m));
        }
    }
    out
}

fn spin_of(a: &CMatrix) -> Result<HalfInt> {
    if !a.is_square() {
        return domain(format!("operator must be square, got {}x{}", a.rows(), a.cols()));
    }
    HalfInt::spin_for_dim(a.dim())
}

/// Spin tomogram `w(m, Ω) = Tr[A U(m, Ω)] = <m| R A R† |m>` at each frame.
pub fn spin_tomogram(a: &CMatrix, frames: &[EulerAngles]) -> Result<Tomogram> {
    let j = spin_of(a)?;
    let n = j.multiplicity();
    let columns: Vec<Vec<C64>> = frames
        .par_iter()
        .map(|&omega| {
            let r = rotation_matrix(j, omega);
            let rotated = a.conjugate_by(&r);
            rotated.diagonal()
        })
        .collect();
    let values = (0..n).map(|o| columns.iter().map(|c| c[o]).collect()).collect();
    Tomogram::new(OutcomeSpace::Spin { j }, frames.iter().map(|&o| Frame::Euler(o)).collect(), values)
}

/// Dual operator families `U(x)`, `D(x)` with quadrature weights, such that
/// `A = Σ_x w_x Tr[A U(x)] D(x)`.
#[derive(Clone, Debug)]
pub struct QuantizerPair {
    dim: usize,
    weights: Vec<f64>,
    dequantizers: Vec<CMatrix>,
    quantizers: Vec<CMatrix>,
    grid: Option<QuadratureGrid>,
}

impl QuantizerPair {
    pub fn new(weights: Vec<f64>, dequantizers: Vec<CMatrix>, quantizers: Vec<CMatrix>) -> Result<Self> {
        if weights.len() != dequantizers.len() || weights.len() != quantizers.len() || weights.is_empty() {
            return domain("weights, dequantizers and quantizers must have the same non-zero length");
        }
        let dim = dequantizers[0].rows();
        if dequantizers.iter().chain(&quantizers).any(|m| !m.is_square() || m.dim() != dim) {
            return domain("operator families must share one square dimension");
        }
        Ok(QuantizerPair { dim, weights, dequantizers, quantizers, grid: None })
    }

    /// Spin pair on a quadrature grid; index `x = node * (2j+1) + m_index`.
    pub fn spin(grid: &QuadratureGrid) -> Self {
        let j = grid.j();
        let n = j.multiplicity();
        let per_node: Vec<(f64, Vec<CMatrix>, Vec<CMatrix>)> = grid
            .nodes()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|node| {
                let us = j.projections().map(|m| dequantizer_u(j, m, node.omega).expect("valid m")).collect();
                let ds = j.projections().map(|m| quantizer_d(j, m, node.omega).expect("valid m")).collect();
                (node.weight, us, ds)
            })
            .collect();
        let mut weights = Vec::with_capacity(grid.len() * n);
        let mut dequantizers = Vec::with_capacity(grid.len() * n);
        let mut quantizers = Vec::with_capacity(grid.len() * n);
        for (w, us, ds) in per_node {
            weights.extend(std::iter::repeat_n(w, n));
            dequantizers.extend(us);
            quantizers.extend(ds);
        }
        QuantizerPair { dim: n, weights, dequantizers, quantizers, grid: Some(grid.clone()) }
    }

    /// Matrix-element symbols `f(a, b) = <a|A|b>`; index `x = a * dim + b`.
    pub fn matrix_elements(dim: usize) -> Self {
        let mut dequantizers = Vec::with_capacity(dim * dim);
        let mut quantizers = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                dequantizers.push(CMatrix::unit(dim, b, a));
                quantizers.push(CMatrix::unit(dim, a, b));
            }
        }
        QuantizerPair { dim, weights: vec![1.0; dim * dim], dequantizers, quantizers, grid: None }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dequantizer(&self, x: usize) -> &CMatrix {
        &self.dequantizers[x]
    }

    pub fn quantizer(&self, x: usize) -> &CMatrix {
        &self.quantizers[x]
    }

    pub fn grid(&self) -> Option<&QuadratureGrid> {
        self.grid.as_ref()
    }

    /// `f(x) = Tr[A U(x)]`.
    pub fn symbol(&self, a: &CMatrix) -> Result<Vec<C64>> {
        if !a.is_square() || a.dim() != self.dim {
            return domain(format!("operator of size {} for a {}-dimensional family", a.rows(), self.dim));
        }
        Ok(self.dequantizers.iter().map(|u| a.trace_product(u)).collect())
    }

    /// `A = Σ_x w_x f(x) D(x)`.
    pub fn reconstruct(&self, f: &[C64]) -> Result<CMatrix> {
        if f.len() != self.len() {
            return domain(format!("symbol of length {} for a family of {}", f.len(), self.len()));
        }
        let mut out = CMatrix::square_zeros(self.dim);
        for ((&w, &fx), d) in self.weights.iter().zip(f).zip(&self.quantizers) {
            if fx != ZERO {
                out.add_scaled(fx * w, d);
            }
        }
        Ok(out)
    }
}
