use super::eigen::{eig_hermitian, eigvals_hermitian};
use super::matrix::{CMatrix, C64};
use crate::error::{domain, Error, Result};

/// Tolerance on Hermiticity and trace for a valid density matrix.
pub const DENSITY_TOL: f64 = 1e-12;
/// Most negative eigenvalue accepted as positive semidefinite.
pub const PSD_SLACK: f64 = -1e-10;

/// Hermitian, unit-trace, positive-semidefinite matrix on a product of subsystems.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(mat: CMatrix, dims: Vec<usize>) -> Result<Self> {
        Self::with_tolerance(mat, dims, DENSITY_TOL)
    }

    /// As [`DensityMatrix::new`] with a custom Hermiticity/trace tolerance.
    pub fn with_tolerance(mat: CMatrix, dims: Vec<usize>, tol: f64) -> Result<Self> {
        if !mat.is_square() {
            return domain(format!("density matrix must be square, got {}x{}", mat.rows(), mat.cols()));
        }
        let dims = if dims.is_empty() { vec![mat.dim()] } else { dims };
        if dims.contains(&0) || dims.iter().product::<usize>() != mat.dim() {
            return domain(format!("subsystem dims {dims:?} do not multiply to {}", mat.dim()));
        }
        let herm = mat.hermiticity_residual();
        if herm > tol {
            return domain(format!("density matrix not Hermitian (residual {herm:.3e})"));
        }
        let tr = mat.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol {
            return domain(format!("density matrix trace {:.15} != 1", tr.re));
        }
        let mat = mat.hermitian_part();
        let lmin = eigvals_hermitian(&mat)?.last().copied().unwrap_or(0.0);
        if lmin < PSD_SLACK {
            return domain(format!("density matrix not positive semidefinite (min eigenvalue {lmin:.3e})"));
        }
        Ok(DensityMatrix { mat, dims })
    }

    /// Pure state `|ψ><ψ|`; `psi` is normalized here.
    pub fn pure(psi: &[C64], dims: Vec<usize>) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return domain("zero state vector");
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(CMatrix::outer(&v), dims)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n: usize = dims.iter().product();
        DensityMatrix { mat: CMatrix::identity(n).scale_real(1.0 / n as f64), dims }
    }

    pub fn diagonal(probs: &[f64], dims: Vec<usize>) -> Result<Self> {
        Self::new(CMatrix::diag_real(probs), dims)
    }

    /// Two-qubit Werner state in the `|00>, |01>, |10>, |11>` basis.
    pub fn werner(q: f64) -> Result<Self> {
        let (a, b, c) = ((1.0 - q) / 4.0, (1.0 + q) / 4.0, -2.0 * q / 4.0);
        let m = CMatrix::from_real_rows(&[
            &[a, 0.0, 0.0, 0.0],
            &[0.0, b, c, 0.0],
            &[0.0, c, b, 0.0],
            &[0.0, 0.0, 0.0, a],
        ]);
        Self::new(m, vec![2, 2])
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn purity(&self) -> f64 {
        self.mat.trace_product(&self.mat).re
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigvals_hermitian(&self.mat).expect("density matrices are Hermitian")
    }

    /// Unitary whose columns are eigenvectors, ordered by descending eigenvalue.
    pub fn eigenbasis(&self) -> CMatrix {
        eig_hermitian(&self.mat).expect("density matrices are Hermitian").vectors
    }

    /// `ρ1 ⊗ ρ2`.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix { mat: self.mat.kron(&other.mat), dims }
    }

    /// Regroups the subsystem labels; the product must stay the same.
    pub fn with_dims(self, dims: Vec<usize>) -> Result<Self> {
        if dims.iter().product::<usize>() != self.dim() {
            return domain(format!("subsystem dims {dims:?} do not multiply to {}", self.dim()));
        }
        Ok(DensityMatrix { mat: self.mat, dims })
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.rows() != self.dim() || !u.is_square() {
            return domain("unitary dimension does not match the state");
        }
        let m = self.mat.conjugate_by(u).hermitian_part();
        Ok(DensityMatrix { mat: m, dims: self.dims.clone() })
    }

    /// Internal constructor for results of trace-preserving maps.
    pub(crate) fn from_parts_unchecked(mat: CMatrix, dims: Vec<usize>) -> Self {
        DensityMatrix { mat: mat.hermitian_part(), dims }
    }
}

/// Row-major multi-index decomposition, first subsystem slowest.
pub(crate) fn split_index(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
}

pub(crate) fn join_index(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
}

/// Reduced state on the subsystems listed in `keep` (in their original order).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if keep.is_empty() {
        return domain("partial trace must keep at least one subsystem");
    }
    if let Some(&k) = keep.iter().find(|&&k| k >= dims.len()) {
        return domain(format!("subsystem index {k} out of range for {} subsystems", dims.len()));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() {
        return domain("duplicate subsystem index in partial trace");
    }
    let kept_dims: Vec<usize> = keep_sorted.iter().map(|&k| dims[k]).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep_sorted.contains(k)).collect();
    let n_keep: usize = kept_dims.iter().product();
    let n = rho.dim();
    let m = rho.matrix();
    let mut out = CMatrix::square_zeros(n_keep);
    let mut rd = vec![0; dims.len()];
    let mut cd = vec![0; dims.len()];
    let mut rk = vec![0; keep_sorted.len()];
    let mut ck = vec![0; keep_sorted.len()];
    for r in 0..n {
        split_index(r, dims, &mut rd);
        for c in 0..n {
            split_index(c, dims, &mut cd);
            if traced.iter().any(|&t| rd[t] != cd[t]) {
                continue;
            }
            for (i, &k) in keep_sorted.iter().enumerate() {
                rk[i] = rd[k];
                ck[i] = cd[k];
            }
            out[(join_index(&rk, &kept_dims), join_index(&ck, &kept_dims))] += m[(r, c)];
        }
    }
    Ok(DensityMatrix::from_parts_unchecked(out, kept_dims))
}

/// Transposes the indices of one subsystem of a multipartite state.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<CMatrix> {
    let dims = rho.dims();
    if dims.len() < 2 {
        return Err(Error::Domain("partial transpose needs at least two subsystems".into()));
    }
    if subsystem >= dims.len() {
        return domain(format!("subsystem index {subsystem} out of range"));
    }
    let n = rho.dim();
    let m = rho.matrix();
    let mut out = CMatrix::square_zeros(n);
    let mut rd = vec![0; dims.len()];
    let mut cd = vec![0; dims.len()];
    for r in 0..n {
        split_index(r, dims, &mut rd);
        for c in 0..n {
            split_index(c, dims, &mut cd);
            std::mem::swap(&mut rd[subsystem], &mut cd[subsystem]);
            out[(join_index(&rd, dims), join_index(&cd, dims))] = m[(r, c)];
            std::mem::swap(&mut rd[subsystem], &mut cd[subsystem]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_density, random_hermitian, rng_from_seed, sample_density};
    use crate::linalg::RngSeed;

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)];
        DensityMatrix::pure(&psi, vec![2, 2]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(DensityMatrix::new(CMatrix::diag_real(&[0.5, 0.6]), vec![2]).is_err());
        assert!(DensityMatrix::new(CMatrix::diag_real(&[1.2, -0.2]), vec![2]).is_err());
        assert!(DensityMatrix::new(CMatrix::diag_real(&[0.5, 0.5]), vec![3]).is_err());
        let nonherm = CMatrix::from_real_rows(&[&[0.5, 0.1], &[0.0, 0.5]]);
        assert!(DensityMatrix::new(nonherm, vec![2]).is_err());
        assert!(DensityMatrix::new(CMatrix::diag_real(&[0.25; 4]), vec![2, 2]).is_ok());
    }

    #[test]
    fn partial_trace_examples() {
        let r1 = random_density(2, 2, RngSeed(1)).unwrap();
        let r2 = random_density(3, 2, RngSeed(2)).unwrap();
        let prod = r1.tensor(&r2);
        let back = partial_trace(&prod, &[0]).unwrap();
        assert!(back.matrix().max_abs_diff(r1.matrix()) < 1e-14);
        let back = partial_trace(&prod, &[1]).unwrap();
        assert!(back.matrix().max_abs_diff(r2.matrix()) < 1e-14);
        assert_eq!(back.dims(), &[3]);

        let red = partial_trace(&bell(), &[0]).unwrap();
        assert!(red.matrix().max_abs_diff(&CMatrix::identity(2).scale_real(0.5)) < 1e-15);
        assert!((red.matrix().trace().re - 1.0).abs() < 1e-15);

        assert!(partial_trace(&bell(), &[2]).is_err());
        assert!(partial_trace(&bell(), &[]).is_err());
    }

    #[test]
    fn partial_trace_adjointness() {
        // Tr[(A ⊗ B) ρ] = Tr[A · Tr_2((1 ⊗ B) ρ)]
        let mut rng = rng_from_seed(RngSeed(4));
        for _ in 0..20 {
            let rho = DensityMatrix::new(sample_density(6, 6, &mut rng), vec![2, 3]).unwrap();
            let a = random_hermitian(2, &mut rng);
            let b = random_hermitian(3, &mut rng);
            let lhs = a.kron(&b).trace_product(rho.matrix());
            let one_b = CMatrix::identity(2).kron(&b).matmul(rho.matrix());
            // contract the second factor by hand
            let mut reduced = CMatrix::square_zeros(2);
            for r in 0..2 {
                for c in 0..2 {
                    for k in 0..3 {
                        reduced[(r, c)] += one_b[(r * 3 + k, c * 3 + k)];
                    }
                }
            }
            let rhs = a.trace_product(&reduced);
            assert!((lhs - rhs).norm() < 1e-10);
            let ra = partial_trace(&rho, &[0]).unwrap();
            let lhs = a.kron(&CMatrix::identity(3)).trace_product(rho.matrix());
            assert!((lhs - a.trace_product(ra.matrix())).norm() < 1e-10);
        }
    }

    #[test]
    fn werner_partial_transpose() {
        let q = 0.6;
        let pt = partial_transpose(&DensityMatrix::werner(q).unwrap(), 1).unwrap();
        let (a, b, c) = ((1.0 - q) / 4.0, (1.0 + q) / 4.0, -2.0 * q / 4.0);
        let expect = CMatrix::from_real_rows(&[
            &[a, 0.0, 0.0, c],
            &[0.0, b, 0.0, 0.0],
            &[0.0, 0.0, b, 0.0],
            &[c, 0.0, 0.0, a],
        ]);
        assert!(pt.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn partial_transpose_involution_and_products() {
        let r = random_density(2, 2, RngSeed(8)).unwrap().tensor(&random_density(2, 2, RngSeed(9)).unwrap());
        let pt = partial_transpose(&r, 1).unwrap();
        assert!(eigvals_hermitian(&pt).unwrap().iter().all(|&l| l > -1e-12));
        let twice = partial_transpose(&DensityMatrix::from_parts_unchecked(pt, vec![2, 2]), 1).unwrap();
        assert!(twice.max_abs_diff(r.matrix()) < 1e-15);
        assert!(partial_transpose(&random_density(4, 2, RngSeed(1)).unwrap(), 0).is_err());
    }
}
