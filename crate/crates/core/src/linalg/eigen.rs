//! Jacobi-type decompositions for small dense matrices.

use num_complex::Complex64;

use super::matrix::{CMatrix, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Hermiticity tolerance accepted by the eigensolver, relative to the matrix scale.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigendecomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// `V diag(f(λ)) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.values.len();
        let fl: Vec<C64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        CMatrix::from_fn(n, n, |r, c| (0..n).map(|k| v[(r, k)] * fl[k] * v[(c, k)].conj()).sum())
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map_spectrum(|l| C64::new(l, 0.0))
    }
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Domain(format!("expected a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    let scale = m.max_abs().max(1.0);
    let res = m.hermiticity_residual();
    if res > HERMITIAN_TOL * scale {
        return Err(Error::Domain(format!("matrix is not Hermitian (residual {res:.3e})")));
    }
    Ok(())
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
pub fn eig_hermitian(m: &CMatrix) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let total = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * total * 1e-2 || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let b = apq.norm();
                if b == 0.0 {
                    continue;
                }
                let phase = apq / b;
                let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
                let tau = (aqq - app) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let ph_conj = phase.conj();
                // A <- A J (columns p, q)
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * c - akq * ph_conj * s;
                    a[(k, q)] = akp * s + akq * ph_conj * c;
                }
                // A <- J† A (rows p, q)
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = apk * c - aqk * phase * s;
                    a[(q, k)] = apk * s + aqk * phase * c;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * c - vkq * ph_conj * s;
                    v[(k, q)] = vkp * s + vkq * ph_conj * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[y].total_cmp(&diag[x]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, descending.
pub fn eigvals_hermitian(m: &CMatrix) -> Result<Vec<f64>> {
    Ok(eig_hermitian(m)?.values)
}

/// `e^{-itH}` for Hermitian `H`.
pub fn expm_hermitian_times(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let eig = eig_hermitian(h)?;
    Ok(eig.map_spectrum(|l| Complex64::from_polar(1.0, -t * l)))
}

/// Thin singular value decomposition `A = U diag(σ) V†`.
#[derive(Clone, Debug)]
pub struct Svd {
    /// `rows x k` with orthonormal columns where `σ > 0`.
    pub u: CMatrix,
    /// Descending.
    pub singular_values: Vec<f64>,
    /// `cols x k`.
    pub v: CMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let (m, n, k) = (self.u.rows(), self.v.rows(), self.singular_values.len());
        CMatrix::from_fn(m, n, |r, c| {
            (0..k).map(|i| self.u[(r, i)] * self.singular_values[i] * self.v[(c, i)].conj()).sum()
        })
    }

    /// Number of singular values above `rel_tol * σ_max`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let smax = self.singular_values.first().copied().unwrap_or(0.0);
        if smax == 0.0 {
            return 0;
        }
        self.singular_values.iter().filter(|&&s| s > rel_tol * smax).count()
    }

    /// Minimum-norm least-squares solution of `A x = b`, discarding `σ <= rel_tol σ_max`.
    pub fn solve(&self, b: &[C64], rel_tol: f64) -> Vec<C64> {
        let smax = self.singular_values.first().copied().unwrap_or(0.0);
        let n = self.v.rows();
        let mut x = vec![ZERO; n];
        for (i, &s) in self.singular_values.iter().enumerate() {
            if s <= rel_tol * smax || s == 0.0 {
                continue;
            }
            let coef: C64 = (0..self.u.rows()).map(|r| self.u[(r, i)].conj() * b[r]).sum::<C64>() / s;
            for (r, xr) in x.iter_mut().enumerate() {
                *xr += self.v[(r, i)] * coef;
            }
        }
        x
    }
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Orthogonalizes the columns of `A` by plane rotations; this diagonalizes the
/// Gram matrix `A†A` implicitly and keeps small singular values accurate to
/// roughly `ε σ_max`.
/// Plane rotation of vectors `p < q` in a Hestenes sweep.
fn rotate_pair(vecs: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, ph: C64) {
    let (head, tail) = vecs.split_at_mut(q);
    for (xp, xq) in head[p].iter_mut().zip(tail[0].iter_mut()) {
        let (a, b) = (*xp, *xq * ph);
        *xp = a * c - b * s;
        *xq = a * s + b * c;
    }
}

pub fn svd(a: &CMatrix) -> Svd {
    let (m, n) = (a.rows(), a.cols());
    // Column-major working copies.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|c| a.column(c)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|c| (0..n).map(|r| if r == c { C64::new(1.0, 0.0) } else { ZERO }).collect())
        .collect();

    let norm_sq = |x: &[C64]| x.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let dot = |x: &[C64], y: &[C64]| x.iter().zip(y).map(|(a, b)| a.conj() * b).sum::<C64>();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norm_sq(&cols[p]);
                let beta = norm_sq(&cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let ph_conj = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                rotate_pair(&mut cols, p, q, c, s, ph_conj);
                rotate_pair(&mut v, p, q, c, s, ph_conj);
            }
        }
        if !rotated {
            break;
        }
    }

    let sigmas: Vec<f64> = cols.iter().map(|c| norm_sq(c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| sigmas[y].total_cmp(&sigmas[x]));
    let singular_values: Vec<f64> = order.iter().map(|&i| sigmas[i]).collect();
    let u = CMatrix::from_fn(m, n, |r, c| {
        let i = order[c];
        if sigmas[i] > 0.0 {
            cols[i][r] / sigmas[i]
        } else {
            ZERO
        }
    });
    let vm = CMatrix::from_fn(n, n, |r, c| v[order[c]][r]);
    Svd { u, singular_values, v: vm }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_hermitian, rng_from_seed};
    use crate::linalg::RngSeed;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn trivial_spectra() {
        let e = eig_hermitian(&CMatrix::identity(2).scale_real(0.5)).unwrap();
        assert_eq!(e.values, vec![0.5, 0.5]);
        let e = eig_hermitian(&CMatrix::diag_real(&[0.1, 0.4, 0.2, 0.3])).unwrap();
        for (a, b) in e.values.iter().zip([0.4, 0.3, 0.2, 0.1]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(eig_hermitian(&m), Err(Error::Domain(_))));
        assert!(expm_hermitian_times(&m, 1.0).is_err());
    }

    #[test]
    fn random_hermitian_residuals() {
        let mut rng = rng_from_seed(RngSeed(7));
        for _ in 0..100 {
            let h = random_hermitian(8, &mut rng);
            let e = eig_hermitian(&h).unwrap();
            assert!(e.reconstruct().max_abs_diff(&h) < 1e-10);
            assert!(e.vectors.unitarity_residual() < 1e-10);
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn expm_examples() {
        let mut rng = rng_from_seed(RngSeed(3));
        let h = random_hermitian(4, &mut rng);
        assert!(expm_hermitian_times(&h, 0.0).unwrap().max_abs_diff(&CMatrix::identity(4)) < 1e-12);
        let s3 = CMatrix::diag_real(&[1.0, -1.0]);
        let u = expm_hermitian_times(&s3, std::f64::consts::PI).unwrap();
        assert!(u.max_abs_diff(&CMatrix::identity(2).scale_real(-1.0)) < 1e-12);
        let (t1, t2) = (0.37, -1.2);
        let lhs = expm_hermitian_times(&h, t1).unwrap().matmul(&expm_hermitian_times(&h, t2).unwrap());
        let rhs = expm_hermitian_times(&h, t1 + t2).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-10);
        assert!(rhs.unitarity_residual() < 1e-10);
    }

    #[test]
    fn svd_random_complex() {
        let mut rng = rng_from_seed(RngSeed(11));
        for _ in 0..10 {
            let a = CMatrix::from_fn(16, 16, |_, _| {
                C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
            });
            let s = svd(&a);
            assert!(s.reconstruct().max_abs_diff(&a) < 1e-10);
            assert!(s.v.unitarity_residual() < 1e-10);
        }
    }

    #[test]
    fn svd_rank_and_solve() {
        // rank-2 real 5x3 system
        let a = CMatrix::from_real_rows(&[
            &[1.0, 0.0, 1.0],
            &[0.0, 1.0, 1.0],
            &[1.0, 1.0, 2.0],
            &[2.0, 0.0, 2.0],
            &[0.0, 3.0, 3.0],
        ]);
        let s = svd(&a);
        assert_eq!(s.rank(1e-10), 2);
        assert!(s.singular_values[2] < 1e-14);
        let full = CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 3.0], &[0.0, 1.0]]);
        let x_true = [C64::new(0.5, 0.0), C64::new(-1.5, 0.0)];
        let b = full.matvec(&x_true);
        let x = svd(&full).solve(&b, 1e-12);
        assert!((x[0] - x_true[0]).norm() < 1e-12 && (x[1] - x_true[1]).norm() < 1e-12);
    }

    #[test]
    fn svd_wide_matrix() {
        let a = CMatrix::from_real_rows(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]]);
        let s = svd(&a);
        assert_eq!(s.rank(1e-10), 2);
        assert!(s.reconstruct().max_abs_diff(&a) < 1e-12);
    }
}
