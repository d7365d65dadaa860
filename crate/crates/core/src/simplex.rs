//! Images of unitary (sub)groups on the probability simplex.
//!
//! A state `ρ` and a group element `u` give the point `diag(u† ρ u)`. The
//! functions here sample that image, estimate its dimension from the Jacobian
//! of the map, and check the algebraic relations satisfied by images of
//! factorized and entangled two-qubit states.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::io::format_float;
use crate::linalg::random::{sample_haar_unitary, stream_rng, TomoRng};
use crate::linalg::{eig_hermitian, hermitian_basis, partial_transpose, svd, CMatrix, DensityMatrix, RngSeed, C64};
use crate::symbols::{frame_distribution, kron_all};

/// Tolerance on the simplex invariants of a point.
pub const SIMPLEX_TOL: f64 = 1e-10;
/// Relative singular-value cutoff of [`image_dimension`].
pub const DIMENSION_REL_TOL: f64 = 1e-8;
/// Step of the central differences along one-parameter subgroups.
pub const JACOBIAN_STEP: f64 = 1e-5;
/// Number of random base points tried by [`image_dimension`].
pub const DIMENSION_BASE_POINTS: usize = 5;
/// Violation above which [`peres_scan`] reports a witness frame.
pub const PERES_TOL: f64 = 1e-8;
/// Singular values below this are finite-difference noise (`ε/h ≈ 1e-11`)
/// whatever the relative cutoff.
pub const DIMENSION_ABS_FLOOR: f64 = 1e-9;

const DIMENSION_SEED: RngSeed = RngSeed(0x5eed_d1e5);

/// Probability vector on the simplex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return domain("empty probability vector");
        }
        if let Some(p) = probs.iter().find(|&&p| p.is_nan() || p < -1e-12) {
            return domain(format!("negative probability {p}"));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return domain(format!("probabilities sum to {sum}"));
        }
        Ok(SimplexPoint(probs))
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Unitary group acting on the state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    /// All of `U(N)`.
    Full,
    /// `U(N1) ⊗ U(N2) ⊗ ...`.
    Product { dims: Vec<usize> },
    /// `1 ⊗ ... ⊗ U(N_factor) ⊗ ... ⊗ 1`.
    Local { dims: Vec<usize>, factor: usize },
}

impl GroupSpec {
    fn check(&self, dim: usize) -> Result<()> {
        let dims = match self {
            GroupSpec::Full => return Ok(()),
            GroupSpec::Product { dims } => dims,
            GroupSpec::Local { dims, factor } => {
                if *factor >= dims.len() {
                    return domain(format!("factor {factor} out of range for dims {dims:?}"));
                }
                dims
            }
        };
        if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != dim {
            return domain(format!("group dims {dims:?} do not match state dimension {dim}"));
        }
        Ok(())
    }

    /// Haar-random element, as its list of tensor factors.
    fn sample_factors(&self, dim: usize, rng: &mut TomoRng) -> Vec<CMatrix> {
        match self {
            GroupSpec::Full => vec![sample_haar_unitary(dim, rng)],
            GroupSpec::Product { dims } => dims.iter().map(|&d| sample_haar_unitary(d, rng)).collect(),
            GroupSpec::Local { dims, factor } => dims
                .iter()
                .enumerate()
                .map(|(i, &d)| if i == *factor { sample_haar_unitary(d, rng) } else { CMatrix::identity(d) })
                .collect(),
        }
    }

    /// Hermitian basis of the Lie algebra, embedded in the full space.
    fn generators(&self, dim: usize) -> Vec<CMatrix> {
        let embed = |dims: &[usize], i: usize, g: &CMatrix| {
            let factors: Vec<CMatrix> =
                dims.iter().enumerate().map(|(k, &d)| if k == i { g.clone() } else { CMatrix::identity(d) }).collect();
            kron_all(&factors)
        };
        match self {
            GroupSpec::Full => hermitian_basis(dim),
            GroupSpec::Product { dims } => dims
                .iter()
                .enumerate()
                .flat_map(|(i, &d)| hermitian_basis(d).into_iter().map(move |g| (i, g)))
                .map(|(i, g)| embed(dims, i, &g))
                .collect(),
            GroupSpec::Local { dims, factor } => {
                hermitian_basis(dims[*factor]).iter().map(|g| embed(dims, *factor, g)).collect()
            }
        }
    }
}

fn point_of(rho: &CMatrix, u: &CMatrix) -> Vec<f64> {
    frame_distribution(rho, u).iter().map(|z| z.re).collect()
}

/// Points of the image together with the group elements that produced them.
#[derive(Clone, Debug, Serialize)]
pub struct SimplexSample {
    pub group: GroupSpec,
    pub seed: RngSeed,
    pub points: Vec<SimplexPoint>,
    /// Tensor factors of the group element behind each point.
    pub params: Vec<Vec<CMatrix>>,
}

/// `n` points `diag(u† ρ u)` with `u` Haar on the group; point `i` uses
/// sub-stream `i` of `seed`, so the sample does not depend on thread count.
pub fn image_sample(rho: &DensityMatrix, g: &GroupSpec, n: usize, seed: RngSeed) -> Result<SimplexSample> {
    if n == 0 {
        return domain("need at least one sample point");
    }
    let dim = rho.dim();
    g.check(dim)?;
    let drawn: Vec<(Vec<f64>, Vec<CMatrix>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let factors = g.sample_factors(dim, &mut rng);
            (point_of(rho.matrix(), &kron_all(&factors)), factors)
        })
        .collect();
    let mut points = Vec::with_capacity(n);
    let mut params = Vec::with_capacity(n);
    for (p, f) in drawn {
        points.push(SimplexPoint::new(p)?);
        params.push(f);
    }
    Ok(SimplexSample { group: g.clone(), seed, points, params })
}

impl SimplexSample {
    /// CSV with one row per point: group-element entries, then probabilities.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let Some(first) = self.params.first() else {
            return Ok(());
        };
        let mut header = vec!["index".to_string()];
        for (k, f) in first.iter().enumerate() {
            for r in 0..f.rows() {
                for c in 0..f.cols() {
                    header.push(format!("u{k}_re_{r}{c}"));
                    header.push(format!("u{k}_im_{r}{c}"));
                }
            }
        }
        header.extend((0..self.points[0].len()).map(|o| format!("p{o}")));
        w.write_record(&header).map_err(csv_error)?;
        for (i, (p, f)) in self.points.iter().zip(&self.params).enumerate() {
            let mut row = vec![i.to_string()];
            for m in f {
                for z in m.as_slice() {
                    row.push(format_float(z.re));
                    row.push(format_float(z.im));
                }
            }
            row.extend(p.probs().iter().map(|&x| format_float(x)));
            w.write_record(&row).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Rank estimate of the image with the singular values behind it.
#[derive(Clone, Debug, Serialize)]
pub struct DimensionReport {
    pub dimension: usize,
    /// Jacobian singular values at the base point of maximal rank, descending.
    pub singular_values: Vec<f64>,
    pub rel_tol: f64,
    pub step: f64,
    pub base_points: usize,
}

/// Dimension of the image of `g` acting on `rho`, using the default tolerance.
pub fn image_dimension(rho: &DensityMatrix, g: &GroupSpec) -> Result<DimensionReport> {
    image_dimension_with_tol(rho, g, DIMENSION_REL_TOL)
}

/// Numerical rank of the Jacobian of `u ↦ diag(u† ρ u)` along the curves
/// `u e^{isG_k}`, maximized over a few random base points.
pub fn image_dimension_with_tol(rho: &DensityMatrix, g: &GroupSpec, rel_tol: f64) -> Result<DimensionReport> {
    let dim = rho.dim();
    g.check(dim)?;
    let gens = g.generators(dim);
    let h = JACOBIAN_STEP;
    let mut best: Option<DimensionReport> = None;
    for b in 0..DIMENSION_BASE_POINTS {
        let mut rng = stream_rng(DIMENSION_SEED, b as u64);
        let u = kron_all(&g.sample_factors(dim, &mut rng));
        let mut jac = CMatrix::zeros(dim, gens.len());
        for (k, gk) in gens.iter().enumerate() {
            let plus = u.matmul(&crate::linalg::expm_hermitian_times(gk, -h)?);
            let minus = u.matmul(&crate::linalg::expm_hermitian_times(gk, h)?);
            let (pp, pm) = (point_of(rho.matrix(), &plus), point_of(rho.matrix(), &minus));
            for r in 0..dim {
                jac[(r, k)] = C64::new((pp[r] - pm[r]) / (2.0 * h), 0.0);
            }
        }
        let sv = svd(&jac).singular_values;
        let smax = sv.first().copied().unwrap_or(0.0);
        let cutoff = (rel_tol * smax).max(DIMENSION_ABS_FLOOR);
        let dimension = sv.iter().filter(|&&s| s > cutoff).count();
        if best.as_ref().is_none_or(|r| dimension > r.dimension) {
            best = Some(DimensionReport {
                dimension,
                singular_values: sv,
                rel_tol,
                step: h,
                base_points: DIMENSION_BASE_POINTS,
            });
        }
    }
    Ok(best.expect("at least one base point"))
}

fn two_qubit(p: &SimplexPoint) -> Result<[f64; 4]> {
    p.probs().try_into().map_err(|_| Error::Domain(format!("expected 4 outcomes, got {}", p.len())))
}

/// `|w(10) - w(00)/(w(01)+w(00)) + w(00)|`, zero on images of factorized
/// two-qubit pure states under the product group.
pub fn factorized_surface_residual(p: &SimplexPoint) -> Result<f64> {
    let [w00, w01, w10, _] = two_qubit(p)?;
    let den = w00 + w01;
    if den.abs() < 1e-14 {
        return Err(Error::UndefinedPoint(format!("w(00) + w(01) = {den:.3e}")));
    }
    Ok((w10 - w00 / den + w00).abs())
}

/// Largest deviation from `w(00)/|c0|² = w(11)/|c1|²` and `w(01) = w(10)`,
/// the relations obeyed by `c0|00> + c1|11>` under the product group.
pub fn entangled_ray_check(p: &SimplexPoint, c0: C64, c1: C64) -> Result<f64> {
    let (a, b) = (c0.norm_sqr(), c1.norm_sqr());
    if (a + b - 1.0).abs() > SIMPLEX_TOL {
        return domain(format!("|c0|² + |c1|² = {}", a + b));
    }
    if a < 1e-12 || b < 1e-12 {
        return Err(Error::Degenerate("one Schmidt coefficient vanishes, the state is a product".into()));
    }
    let [w00, w01, w10, w11] = two_qubit(p)?;
    Ok((w00 / a - w11 / b).abs().max((w01 - w10).abs()))
}

/// Outcome of the tomographic partial-transpose scan.
#[derive(Clone, Debug, Serialize)]
pub struct PeresReport {
    /// `max_u Σ_m |<m|u† ρ^{T_B} u|m>| - 1` over the scanned frames.
    pub max_violation: f64,
    /// Frame achieving the maximum when it exceeds the detection threshold.
    pub witness: Option<CMatrix>,
    /// Smallest eigenvalue of `ρ^{T_B}`.
    pub min_eigenvalue: f64,
    /// `Σ |λ(ρ^{T_B})|`.
    pub trace_norm: f64,
    /// Violation in the eigenbasis frame of `ρ^{T_B}`.
    pub eigenbasis_violation: f64,
    pub frames_scanned: usize,
}

/// Scans `n` Haar frames and the eigenbasis of the partial transpose for
/// `Σ_m |w_{ρ^{T_B}}(m, u)| > 1`.
pub fn peres_scan(rho12: &DensityMatrix, n: usize, seed: RngSeed) -> Result<PeresReport> {
    if rho12.dims().len() != 2 {
        return domain(format!("Peres scan needs a bipartite state, got dims {:?}", rho12.dims()));
    }
    let pt = partial_transpose(rho12, 1)?;
    let dim = rho12.dim();
    let violation = |u: &CMatrix| frame_distribution(&pt, u).iter().map(|z| z.re.abs()).sum::<f64>() - 1.0;
    let eig = eig_hermitian(&pt.hermitian_part())?;
    let min_eigenvalue = eig.values.last().copied().unwrap_or(0.0);
    let trace_norm = eig.values.iter().map(|l| l.abs()).sum();
    let eigenbasis_violation = violation(&eig.vectors);
    let scanned: Vec<(f64, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let u = sample_haar_unitary(dim, &mut stream_rng(seed, i as u64));
            (violation(&u), i)
        })
        .collect();
    let mut best = (eigenbasis_violation, None);
    for (v, i) in scanned {
        if v > best.0 {
            best = (v, Some(i));
        }
    }
    let (max_violation, index) = best;
    let witness = (max_violation > PERES_TOL).then(|| match index {
        Some(i) => sample_haar_unitary(dim, &mut stream_rng(seed, i as u64)),
        None => eig.vectors.clone(),
    });
    Ok(PeresReport {
        max_violation,
        witness,
        min_eigenvalue,
        trace_norm,
        eigenbasis_violation,
        frames_scanned: n + 1,
    })
}

/// Whether every coordinate of every point lies between the extreme
/// eigenvalues of `rho`, within `1e-10`.
pub fn eigenvalue_bounds_check(s: &SimplexSample, rho: &DensityMatrix) -> bool {
    let ev = rho.eigenvalues();
    let hi = ev.iter().copied().fold(f64::NEG_INFINITY, f64::max) + SIMPLEX_TOL;
    let lo = ev.iter().copied().fold(f64::INFINITY, f64::min) - SIMPLEX_TOL;
    s.points.iter().all(|p| p.probs().iter().all(|&x| (lo..=hi).contains(&x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_pure_vector, rng_from_seed, sample_density};
    use crate::linalg::random_density;

    fn product_pure(seed: u64) -> DensityMatrix {
        let mut rng = rng_from_seed(RngSeed(seed));
        let a = random_pure_vector(2, &mut rng);
        let b = random_pure_vector(2, &mut rng);
        let psi: Vec<C64> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        DensityMatrix::pure(&psi, vec![2, 2]).unwrap()
    }

    fn schmidt(c0: f64, c1: f64) -> DensityMatrix {
        let psi = [C64::new(c0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(c1, 0.0)];
        DensityMatrix::pure(&psi, vec![2, 2]).unwrap()
    }

    #[test]
    fn full_group_covers_qubit_simplex() {
        let rho = DensityMatrix::diagonal(&[1.0, 0.0], vec![2]).unwrap();
        let s = image_sample(&rho, &GroupSpec::Full, 10_000, RngSeed(0)).unwrap();
        let first: Vec<f64> = s.points.iter().map(|p| p.probs()[0]).collect();
        assert!(first.iter().copied().fold(1.0, f64::min) < 0.01);
        assert!(first.iter().copied().fold(0.0, f64::max) > 0.99);
        assert!(eigenvalue_bounds_check(&s, &rho));
    }

    #[test]
    fn sampling_is_reproducible_and_bounded() {
        let rho = DensityMatrix::diagonal(&[0.4, 0.3, 0.2, 0.1], vec![4]).unwrap();
        let a = image_sample(&rho, &GroupSpec::Full, 1000, RngSeed(9)).unwrap();
        let b = image_sample(&rho, &GroupSpec::Full, 1000, RngSeed(9)).unwrap();
        assert_eq!(a.points, b.points);
        assert!(a.points.iter().all(|p| p.probs().iter().all(|&x| (0.1 - 1e-10..=0.4 + 1e-10).contains(&x))));
        assert!(eigenvalue_bounds_check(&a, &rho));
        let mut bad = a.clone();
        bad.points[3] = SimplexPoint::new(vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        assert!(!eigenvalue_bounds_check(&bad, &rho));
        let mut rng = rng_from_seed(RngSeed(10));
        for _ in 0..20 {
            let rho = DensityMatrix::new(sample_density(4, 4, &mut rng), vec![4]).unwrap();
            let s = image_sample(&rho, &GroupSpec::Full, 1000, RngSeed(11)).unwrap();
            assert!(eigenvalue_bounds_check(&s, &rho));
        }
        let mixed = DensityMatrix::maximally_mixed(vec![2, 2]);
        for g in [GroupSpec::Full, GroupSpec::Product { dims: vec![2, 2] }] {
            let s = image_sample(&mixed, &g, 50, RngSeed(1)).unwrap();
            assert!(s.points.iter().all(|p| p.probs().iter().all(|x| (x - 0.25).abs() < 1e-12)));
        }
        assert!(image_sample(&mixed, &GroupSpec::Product { dims: vec![3, 2] }, 5, RngSeed(1)).is_err());
    }

    #[test]
    fn dimensions() {
        let generic = random_density(4, 4, RngSeed(12)).unwrap();
        let full = image_dimension(&generic, &GroupSpec::Full).unwrap();
        assert_eq!(full.dimension, 3);
        for tol in [1e-7, 1e-9] {
            assert_eq!(image_dimension_with_tol(&generic, &GroupSpec::Full, tol).unwrap().dimension, 3);
        }
        let product = GroupSpec::Product { dims: vec![2, 2] };
        assert_eq!(image_dimension(&product_pure(13), &product).unwrap().dimension, 2);
        let local = GroupSpec::Local { dims: vec![2, 2], factor: 0 };
        for q in [0.1, 0.5, 1.0] {
            let w = DensityMatrix::werner(q).unwrap();
            assert_eq!(image_dimension(&w, &local).unwrap().dimension, 1);
            for tol in [1e-7, 1e-9] {
                assert_eq!(image_dimension_with_tol(&w, &local, tol).unwrap().dimension, 1);
            }
        }
        let mixed = DensityMatrix::maximally_mixed(vec![4]);
        assert_eq!(image_dimension(&mixed, &GroupSpec::Full).unwrap().dimension, 0);
    }

    #[test]
    fn factorized_surface() {
        let product = GroupSpec::Product { dims: vec![2, 2] };
        let s = image_sample(&product_pure(14), &product, 500, RngSeed(2)).unwrap();
        for p in &s.points {
            assert!(factorized_surface_residual(p).unwrap() < 1e-10);
        }
        let bell = schmidt(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);
        let s = image_sample(&bell, &product, 200, RngSeed(3)).unwrap();
        assert!(s.points.iter().any(|p| factorized_surface_residual(p).unwrap() > 0.01));
        let uniform = SimplexPoint::new(vec![0.25; 4]).unwrap();
        assert!(factorized_surface_residual(&uniform).unwrap() < 1e-15);
        let undefined = SimplexPoint::new(vec![0.0, 0.0, 0.5, 0.5]).unwrap();
        assert!(matches!(factorized_surface_residual(&undefined), Err(Error::UndefinedPoint(_))));
    }

    #[test]
    fn entangled_ray() {
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let (c0, c1) = (C64::new(c, 0.0), C64::new(c, 0.0));
        let rho = schmidt(c, c);
        let product = GroupSpec::Product { dims: vec![2, 2] };
        for p in &image_sample(&rho, &product, 500, RngSeed(4)).unwrap().points {
            assert!(entangled_ray_check(p, c0, c1).unwrap() < 1e-9);
        }
        let full = image_sample(&rho, &GroupSpec::Full, 200, RngSeed(5)).unwrap();
        assert!(full.points.iter().any(|p| entangled_ray_check(p, c0, c1).unwrap() > 0.01));
        let p = SimplexPoint::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(entangled_ray_check(&p, C64::new(1.0, 0.0), C64::new(0.0, 0.0)), Err(Error::Degenerate(_))));
    }

    #[test]
    fn peres() {
        let sep = peres_scan(&DensityMatrix::werner(0.2).unwrap(), 500, RngSeed(6)).unwrap();
        assert!(sep.max_violation <= 1e-10 && sep.witness.is_none());
        let ent = peres_scan(&DensityMatrix::werner(1.0).unwrap(), 500, RngSeed(6)).unwrap();
        assert!(ent.max_violation > 0.5 && ent.witness.is_some());
        assert!((ent.min_eigenvalue + 0.5).abs() < 1e-12);
        assert!((ent.eigenbasis_violation - (ent.trace_norm - 1.0)).abs() < 1e-10);
        assert!((ent.trace_norm - 2.0).abs() < 1e-12);
        for seed in 0..5 {
            let r = peres_scan(&product_pure(seed), 200, RngSeed(seed)).unwrap();
            assert!(r.max_violation <= 1e-10);
        }
        assert!(peres_scan(&DensityMatrix::maximally_mixed(vec![4]), 10, RngSeed(0)).is_err());
    }

    #[test]
    fn csv_dump() {
        let rho = product_pure(15);
        let s = image_sample(&rho, &GroupSpec::Product { dims: vec![2, 2] }, 3, RngSeed(7)).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0].split(',').count(), 1 + 2 * 8 + 4);
        let last: f64 = lines[1].split(',').next_back().unwrap().parse().unwrap();
        assert_eq!(last, s.points[0].probs()[3]);
    }
}
