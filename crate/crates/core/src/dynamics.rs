//! Unitary evolution of states and tomograms, and measurement updates in
//! matrix and star-product form.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::linalg::{eigvals_hermitian, expm_hermitian_times, CMatrix, DensityMatrix};
use crate::reconstruction::{reconstruct_from_unitary_frame, QuadratureGrid};
use crate::star::star_compose_all;
use crate::symbols::{Frame, Tomogram};

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const POVM_TOL: f64 = 1e-10;
/// Outcomes less likely than this are rejected by [`measure_update`].
pub const ZERO_PROBABILITY_TOL: f64 = 1e-14;

/// Hermitian generator of the evolution `U(t) = e^{-itH}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian(CMatrix);

impl Hamiltonian {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() {
            return domain("Hamiltonian must be square");
        }
        let res = mat.hermiticity_residual();
        if res > HERMITICITY_TOL {
            return domain(format!("Hamiltonian is not Hermitian (residual {res:.3e})"));
        }
        Ok(Hamiltonian(mat.hermitian_part()))
    }

    pub fn zero(dim: usize) -> Self {
        Hamiltonian(CMatrix::square_zeros(dim))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// `e^{-itH}`.
    pub fn propagator(&self, t: f64) -> Result<CMatrix> {
        expm_hermitian_times(&self.0, t)
    }
}

/// `e^{-itH} ρ e^{itH}`.
pub fn evolve_state(rho: &DensityMatrix, h: &Hamiltonian, t: f64) -> Result<DensityMatrix> {
    if rho.dim() != h.dim() {
        return domain(format!("state of dimension {} with a {}-dimensional Hamiltonian", rho.dim(), h.dim()));
    }
    rho.conjugated(&h.propagator(t)?)
}

fn frame_unitaries(t: &Tomogram) -> Result<Vec<CMatrix>> {
    t.frames()
        .iter()
        .map(|f| f.unitary_matrix())
        .collect::<Option<Vec<_>>>()
        .map_or_else(|| domain("tomogram evolution needs unitary frames"), Ok)
}

/// Tomogram at time `t` on the same frames, `w_t(m, u) = w_0(m, U†(t) u)`.
///
/// The values at the shifted frames are not stored in `t0`, so the state is
/// first recovered from the frames (which must be informationally complete).
pub fn evolve_tomogram(t0: &Tomogram, h: &Hamiltonian, t: f64) -> Result<Tomogram> {
    let us = frame_unitaries(t0)?;
    if t0.n_outcomes() != h.dim() {
        return domain(format!("tomogram of dimension {} with a {}-dimensional Hamiltonian", t0.n_outcomes(), h.dim()));
    }
    let rho = reconstruct_from_unitary_frame(t0)?.rho;
    let ut_dag = h.propagator(t)?.adjoint();
    let values: Vec<Vec<f64>> = {
        let columns: Vec<Vec<f64>> = us
            .iter()
            .map(|u| {
                let v = ut_dag.matmul(u);
                let r = v.adjoint().matmul(&rho).matmul(&v);
                r.real_diagonal()
            })
            .collect();
        (0..t0.n_outcomes()).map(|o| columns.iter().map(|c| c[o].max(0.0)).collect()).collect()
    };
    Tomogram::from_real(t0.space().clone(), t0.frames().to_vec(), values)
}

/// Exact evolution by frame relabeling: the values of `t0` are the values of
/// the evolved tomogram on the frames `U(t) u`.
pub fn shift_frames(t0: &Tomogram, h: &Hamiltonian, t: f64) -> Result<Tomogram> {
    let us = frame_unitaries(t0)?;
    if t0.n_outcomes() != h.dim() {
        return domain(format!("tomogram of dimension {} with a {}-dimensional Hamiltonian", t0.n_outcomes(), h.dim()));
    }
    let ut = h.propagator(t)?;
    let frames = us.iter().map(|u| Frame::Unitary { unitary: ut.matmul(u) }).collect();
    Ok(t0.clone().replace_frames(frames))
}

/// Outcome of a selective measurement.
#[derive(Clone, Debug)]
pub struct MeasurementUpdate {
    /// `PρP / Tr[PρP]`.
    pub state: DensityMatrix,
    /// `Tr[PρP]`.
    pub prob: f64,
}

/// Selective update `ρ ↦ PρP`, returned normalized alongside its probability.
pub fn measure_update(rho: &DensityMatrix, effect: &CMatrix) -> Result<MeasurementUpdate> {
    if !effect.is_square() || effect.dim() != rho.dim() {
        return domain("effect dimension does not match the state");
    }
    check_effect(effect)?;
    let post = rho.matrix().conjugate_by(effect).hermitian_part();
    let prob = post.trace().re;
    if prob < ZERO_PROBABILITY_TOL {
        return Err(Error::ZeroProbability { prob });
    }
    let state = DensityMatrix::new(post.scale_real(1.0 / prob), rho.dims().to_vec())?;
    Ok(MeasurementUpdate { state, prob })
}

fn check_effect(p: &CMatrix) -> Result<()> {
    let res = p.hermiticity_residual();
    if res > HERMITICITY_TOL {
        return domain(format!("effect is not Hermitian (residual {res:.3e})"));
    }
    let min = eigvals_hermitian(&p.hermitian_part())?.last().copied().unwrap_or(0.0);
    if min < -POVM_TOL {
        return domain(format!("effect is not positive semidefinite (min eigenvalue {min:.3e})"));
    }
    Ok(())
}

/// `w_P ⋆ w ⋆ w_P`, the symbol of the unnormalized update `PρP`.
pub fn measurement_star_map(w: &Tomogram, wp: &Tomogram, grid: &QuadratureGrid) -> Result<Tomogram> {
    star_compose_all(&[wp, w, wp], grid)
}

/// Positive operator-valued measure.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    effects: Vec<CMatrix>,
}

/// Completeness and positivity diagnostics of a [`Povm`].
#[derive(Clone, Debug, Serialize)]
pub struct PovmReport {
    pub valid: bool,
    /// `‖Σ_k P_k - 1‖_∞`.
    pub completeness_residual: f64,
    pub min_eigenvalues: Vec<f64>,
    pub max_hermiticity_residual: f64,
}

impl Povm {
    pub fn new(effects: Vec<CMatrix>) -> Result<Self> {
        let Some(first) = effects.first() else {
            return domain("a POVM needs at least one effect");
        };
        let d = first.rows();
        if effects.iter().any(|e| !e.is_square() || e.dim() != d) {
            return domain("effects must be square with a common dimension");
        }
        Ok(Povm { effects })
    }

    /// Rank-one projectors on the computational basis.
    pub fn computational(dim: usize) -> Self {
        Povm { effects: (0..dim).map(|k| CMatrix::unit(dim, k, k)).collect() }
    }

    pub fn effects(&self) -> &[CMatrix] {
        &self.effects
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    /// `Tr[P_k ρ]` for every effect.
    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        if rho.dim() != self.dim() {
            return domain("POVM dimension does not match the state");
        }
        Ok(self.effects.iter().map(|p| p.trace_product(rho.matrix()).re).collect())
    }
}

pub fn povm_validate(p: &Povm) -> Result<PovmReport> {
    let d = p.dim();
    let mut sum = CMatrix::square_zeros(d);
    let mut min_eigenvalues = Vec::with_capacity(p.effects.len());
    let mut max_herm: f64 = 0.0;
    for e in &p.effects {
        sum += e;
        max_herm = max_herm.max(e.hermiticity_residual());
        min_eigenvalues.push(eigvals_hermitian(&e.hermitian_part())?.last().copied().unwrap_or(0.0));
    }
    let completeness_residual = sum.max_abs_diff(&CMatrix::identity(d));
    let valid = completeness_residual <= POVM_TOL
        && max_herm <= HERMITICITY_TOL
        && min_eigenvalues.iter().all(|&m| m >= -POVM_TOL);
    Ok(PovmReport { valid, completeness_residual, min_eigenvalues, max_hermiticity_residual: max_herm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_hermitian, random_pure_vector, rng_from_seed, sample_haar_unitary};
    use crate::linalg::{random_density, RngSeed, C64};
    use crate::reconstruction::make_grid;
    use crate::star::star_compose;
    use crate::su2::HalfInt;
    use crate::symbols::{spin_tomogram, unitary_tomogram};
    use rand::Rng;

    fn sigma3_half() -> Hamiltonian {
        Hamiltonian::new(CMatrix::diag_real(&[0.5, -0.5])).unwrap()
    }

    #[test]
    fn state_evolution() {
        let rho = random_density(3, 3, RngSeed(1)).unwrap();
        let mut rng = rng_from_seed(RngSeed(2));
        let h = Hamiltonian::new(random_hermitian(3, &mut rng)).unwrap();
        assert!(evolve_state(&rho, &h, 0.0).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-14);
        let out = evolve_state(&rho, &h, 1.7).unwrap();
        for (a, b) in rho.eigenvalues().iter().zip(out.eigenvalues()) {
            assert!((a - b).abs() < 1e-10);
        }
        let diag = DensityMatrix::diagonal(&[0.2, 0.8], vec![2]).unwrap();
        assert!(evolve_state(&diag, &sigma3_half(), 2.0).unwrap().matrix().max_abs_diff(diag.matrix()) < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)], vec![2]).unwrap();
        let t = std::f64::consts::FRAC_PI_2;
        let out = evolve_state(&plus, &sigma3_half(), t).unwrap();
        assert!((out.matrix()[(0, 1)] - C64::from_polar(0.5, -t)).norm() < 1e-14);
        assert!(Hamiltonian::new(CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])).is_err());
    }

    #[test]
    fn tomogram_evolution_matches_direct() {
        let mut rng = rng_from_seed(RngSeed(3));
        for _ in 0..50 {
            let d = 2 + rng.random_range(0..2);
            let rho = DensityMatrix::new(crate::linalg::random::sample_density(d, d, &mut rng), vec![d]).unwrap();
            let us: Vec<CMatrix> = (0..d + 2).map(|_| sample_haar_unitary(d, &mut rng)).collect();
            let h = Hamiltonian::new(random_hermitian(d, &mut rng)).unwrap();
            let t = rng.random_range(-2.0..2.0);
            let t0 = unitary_tomogram(&rho, &us).unwrap();
            let direct = unitary_tomogram(&evolve_state(&rho, &h, t).unwrap(), &us).unwrap();
            assert!(evolve_tomogram(&t0, &h, t).unwrap().max_abs_diff(&direct) < 1e-10);
            let shifted = shift_frames(&t0, &h, t).unwrap();
            let fs: Vec<CMatrix> = shifted.frames().iter().map(|f| f.unitary_matrix().unwrap()).collect();
            let check = unitary_tomogram(&evolve_state(&rho, &h, t).unwrap(), &fs).unwrap();
            assert!(check.max_abs_diff(&t0) < 1e-10);
            let twice = evolve_tomogram(&evolve_tomogram(&t0, &h, t / 2.0).unwrap(), &h, t / 2.0).unwrap();
            assert!(twice.max_abs_diff(&direct) < 1e-10);
        }
        let rho = random_density(2, 2, RngSeed(4)).unwrap();
        let us = vec![CMatrix::identity(2)];
        let t0 = unitary_tomogram(&rho, &us).unwrap();
        assert!(shift_frames(&t0, &Hamiltonian::zero(2), 1.0).unwrap().max_abs_diff(&t0) == 0.0);
        assert!(matches!(evolve_tomogram(&t0, &sigma3_half(), 1.0), Err(Error::InformationallyIncomplete { .. })));
    }

    #[test]
    fn measurement_updates() {
        let p0 = CMatrix::unit(2, 0, 0);
        let zero = DensityMatrix::diagonal(&[1.0, 0.0], vec![2]).unwrap();
        let one = DensityMatrix::diagonal(&[0.0, 1.0], vec![2]).unwrap();
        let up = measure_update(&zero, &p0).unwrap();
        assert!((up.prob - 1.0).abs() < 1e-15 && up.state.matrix().max_abs_diff(zero.matrix()) < 1e-15);
        assert!(matches!(measure_update(&one, &p0), Err(Error::ZeroProbability { .. })));
        let mut rng = rng_from_seed(RngSeed(5));
        for _ in 0..20 {
            let psi = random_pure_vector(3, &mut rng);
            let phi = random_pure_vector(3, &mut rng);
            let rho = DensityMatrix::pure(&psi, vec![3]).unwrap();
            let overlap: C64 = psi.iter().zip(&phi).map(|(a, b)| a.conj() * b).sum();
            let up = measure_update(&rho, &CMatrix::outer(&phi)).unwrap();
            assert!((up.prob - overlap.norm_sqr()).abs() < 1e-12);
        }
        assert!(measure_update(&zero, &CMatrix::diag_real(&[1.0, -0.5])).is_err());
    }

    #[test]
    fn povms() {
        let rho = random_density(3, 3, RngSeed(6)).unwrap();
        let proj = Povm::computational(3);
        assert!(povm_validate(&proj).unwrap().valid);
        assert!((proj.probabilities(&rho).unwrap().iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let soft = Povm::new(vec![CMatrix::identity(2).scale_real(0.6), CMatrix::identity(2).scale_real(0.4)]).unwrap();
        assert!(povm_validate(&soft).unwrap().valid);
        let dropped = Povm::new(vec![CMatrix::unit(3, 0, 0), CMatrix::unit(3, 1, 1)]).unwrap();
        let report = povm_validate(&dropped).unwrap();
        assert!(!report.valid && (report.completeness_residual - 1.0).abs() < 1e-15);
    }

    #[test]
    fn star_measurement_map() {
        for twice_j in 1..=2 {
            let j = HalfInt::from_twice(twice_j);
            let n = j.multiplicity();
            let grid = make_grid(j, 2.0).unwrap();
            let frames = grid.frames();
            let rho = random_density(n, n, RngSeed(7)).unwrap();
            let mut rng = rng_from_seed(RngSeed(8));
            let p = CMatrix::outer(&random_pure_vector(n, &mut rng));
            let w = spin_tomogram(rho.matrix(), &frames).unwrap();
            let wp = spin_tomogram(&p, &frames).unwrap();
            let out = measurement_star_map(&w, &wp, &grid).unwrap();
            let expect = spin_tomogram(&rho.matrix().conjugate_by(&p), &frames).unwrap();
            assert!(out.max_abs_diff(&expect) < 1e-7);
            let right = star_compose(&wp, &star_compose(&w, &wp, &grid).unwrap(), &grid).unwrap();
            assert!(out.max_abs_diff(&right) < 1e-7);
            let id = spin_tomogram(&CMatrix::identity(n), &frames).unwrap();
            assert!(measurement_star_map(&w, &id, &grid).unwrap().max_abs_diff(&w) < 1e-8);
        }
        let grid = make_grid(HalfInt::HALF, 1.5).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = CMatrix::outer(&[C64::new(s, 0.0), C64::new(s, 0.0)]);
        let w = spin_tomogram(&plus, &grid.frames()).unwrap();
        let wp = spin_tomogram(&CMatrix::unit(2, 0, 0), &grid.frames()).unwrap();
        let expect = spin_tomogram(&CMatrix::diag_real(&[0.5, 0.0]), &grid.frames()).unwrap();
        assert!(measurement_star_map(&w, &wp, &grid).unwrap().max_abs_diff(&expect) < 1e-8);
        let other = make_grid(HalfInt::HALF, 2.0).unwrap();
        assert!(measurement_star_map(&w, &wp, &other).is_err());
    }
}
