//! Inversion of symbol maps: spin tomograms on a group quadrature, unitary-frame
//! tomograms by least squares, and intertwining between symbol families.

mod grid;

use rayon::prelude::*;
use serde::Serialize;

pub use grid::{make_grid, GridNode, QuadratureGrid, DEFAULT_OVERSAMPLE, GROUP_VOLUME};

use crate::error::{domain, Error, Result};
use crate::linalg::{eigvals_hermitian, gell_mann_basis, svd, CMatrix, DensityMatrix, C64, ZERO};
use crate::su2::{big_d_unchecked, cg_unchecked, parity_sign, tensor_unchecked};
use crate::symbols::{OutcomeSpace, QuantizerPair, Tomogram};

/// Relative singular-value cutoff for the unitary-frame least-squares system.
pub const RANK_TOL: f64 = 1e-10;
/// PSD violations beyond this are annotated on unitary-frame reconstructions.
pub const PSD_WARNING_TOL: f64 = 1e-8;

/// Rebuilds `A` from its spin tomogram sampled on the nodes of `grid`:
///
/// `A = Σ_{L,M} (2L+1)/(8π²) Σ_m (-1)^{j-m+M} <j m; j -m|L 0> ∫dΩ w(m,Ω) D^L_{0,-M}(Ω) T_{LM}`.
pub fn reconstruct_operator(t: &Tomogram, grid: &QuadratureGrid) -> Result<CMatrix> {
    let j = grid.j();
    if t.space() != &(OutcomeSpace::Spin { j }) {
        return domain(format!("tomogram outcomes do not belong to spin {j}"));
    }
    let frames: Option<Vec<_>> = t.frames().iter().map(|f| f.euler()).collect();
    let Some(frames) = frames else {
        return domain("tomogram frames are not rotations");
    };
    if !grid.matches_frames(&frames) {
        return domain("tomogram frames do not coincide with the quadrature nodes");
    }
    let tj = j.twice();
    let nodes: Vec<_> = grid.nodes().collect();
    let values = t.complex_values();
    let lm: Vec<(i32, i32)> = (0..=tj).flat_map(|l| (-l..=l).map(move |m| (l, m))).collect();
    let terms: Vec<CMatrix> = lm
        .par_iter()
        .map(|&(l, big_m)| {
            let mut coef = ZERO;
            for (o, mm) in j.projections().enumerate() {
                let cg = cg_unchecked(tj, mm.twice(), tj, -mm.twice(), 2 * l, 0);
                if cg == 0.0 {
                    continue;
                }
                let integral: C64 = nodes
                    .iter()
                    .zip(&values[o])
                    .map(|(n, &w)| w * big_d_unchecked(2 * l, 0, -2 * big_m, n.omega) * n.weight)
                    .sum();
                coef += integral * cg * parity_sign(tj - mm.twice() + 2 * big_m);
            }
            tensor_unchecked(j, l, big_m).scale(coef * (f64::from(2 * l + 1) / GROUP_VOLUME))
        })
        .collect();
    let mut out = CMatrix::square_zeros(j.multiplicity());
    for term in &terms {
        out += term;
    }
    Ok(out)
}

/// Result of a unitary-frame reconstruction.
#[derive(Clone, Debug, Serialize)]
pub struct FrameReconstruction {
    /// Hermitian, unit-trace least-squares solution.
    pub rho: CMatrix,
    /// Euclidean norm of the misfit over all outcomes and frames.
    pub residual: f64,
    /// Numerical rank of the forward map.
    pub rank: usize,
    pub min_eigenvalue: f64,
    /// Set when the solution is not positive semidefinite within `1e-8`.
    pub warning: Option<String>,
}

impl FrameReconstruction {
    /// The solution as a validated density matrix (fails if not PSD).
    pub fn density_matrix(&self, dims: Vec<usize>) -> Result<DensityMatrix> {
        DensityMatrix::with_tolerance(self.rho.clone(), dims, 1e-10)
    }
}

/// Least-squares state from a tomogram on unitary frames.
///
/// Writes `ρ = 1/d + Σ_k x_k G_k` over the traceless Gell-Mann basis, so
/// Hermiticity and unit trace hold by construction, and solves
/// `Σ_k x_k <m|u† G_k u|m> = w(m, u) - 1/d` in the least-squares sense.
pub fn reconstruct_from_unitary_frame(t: &Tomogram) -> Result<FrameReconstruction> {
    let d = t.n_outcomes();
    let us: Option<Vec<CMatrix>> = t.frames().iter().map(|f| f.unitary_matrix()).collect();
    let Some(us) = us else {
        return domain("unitary-frame reconstruction needs unitary frames");
    };
    if us.iter().any(|u| u.dim() != d) {
        return domain("frame dimension does not match the outcome count");
    }
    let basis = gell_mann_basis(d);
    let unknowns = basis.len();
    if unknowns == 0 {
        return Ok(FrameReconstruction {
            rho: CMatrix::identity(1),
            residual: 0.0,
            rank: 0,
            min_eigenvalue: 1.0,
            warning: None,
        });
    }
    let rows = us.len() * d;
    let mut a = CMatrix::zeros(rows, unknowns);
    let mut b = vec![ZERO; rows];
    for (f, u) in us.iter().enumerate() {
        let rotated: Vec<CMatrix> = basis.iter().map(|g| u.adjoint().matmul(g).matmul(u)).collect();
        for m in 0..d {
            let r = f * d + m;
            for (k, g) in rotated.iter().enumerate() {
                a[(r, k)] = C64::new(g[(m, m)].re, 0.0);
            }
            b[r] = C64::new(t.value(m, f) - 1.0 / d as f64, 0.0);
        }
    }
    let dec = svd(&a);
    let rank = dec.rank(RANK_TOL);
    if rank < unknowns {
        return Err(Error::InformationallyIncomplete { rank, required: unknowns });
    }
    let x = dec.solve(&b, RANK_TOL);
    let mut rho = CMatrix::identity(d).scale_real(1.0 / d as f64);
    for (xk, g) in x.iter().zip(&basis) {
        rho.add_scaled(C64::new(xk.re, 0.0), g);
    }
    let fit = a.matvec(&x);
    let residual = fit.iter().zip(&b).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
    let min_eigenvalue = eigvals_hermitian(&rho)?.last().copied().unwrap_or(0.0);
    let warning = (min_eigenvalue < -PSD_WARNING_TOL)
        .then(|| format!("reconstruction is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})"));
    Ok(FrameReconstruction { rho, residual, rank, min_eigenvalue, warning })
}

/// Converts a symbol of one family into another:
/// `φ(y) = Σ_x w_x f(x) Tr[D(x) U'(y)]`.
pub fn intertwine(f: &[C64], from: &QuantizerPair, to: &QuantizerPair) -> Result<Vec<C64>> {
    if from.dim() != to.dim() {
        return domain(format!("symbol families of dimension {} and {}", from.dim(), to.dim()));
    }
    to.symbol(&from.reconstruct(f)?)
}

/// Intertwining kernel `K(y, x) = w_x Tr[D(x) U'(y)]` as a `|to| x |from|` matrix.
pub fn intertwining_kernel(from: &QuantizerPair, to: &QuantizerPair) -> Result<CMatrix> {
    if from.dim() != to.dim() {
        return domain(format!("symbol families of dimension {} and {}", from.dim(), to.dim()));
    }
    Ok(CMatrix::from_fn(to.len(), from.len(), |y, x| {
        from.quantizer(x).trace_product(to.dequantizer(y)) * from.weights()[x]
    }))
}

/// `max_probe ‖Σ_x w_x Tr[A U(x)] D(x) - A‖_∞`.
pub fn duality_residual(p: &QuantizerPair, probes: &[CMatrix]) -> Result<f64> {
    probes.iter().try_fold(0.0_f64, |acc, a| {
        let back = p.reconstruct(&p.symbol(a)?)?;
        Ok(acc.max(back.max_abs_diff(a)))
    })
}

/// All elementary matrices `|a><b|` of dimension `d`.
pub fn elementary_probes(d: usize) -> Vec<CMatrix> {
    (0..d * d).map(|k| CMatrix::unit(d, k / d, k % d)).collect()
}
