use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::{join_index, split_index, CMatrix, DensityMatrix, C64, ZERO};
use crate::su2::{EulerAngles, HalfInt};

/// Values above this (negative) threshold are treated as rounding noise.
pub const NEGATIVITY_TOL: f64 = 1e-12;
/// Per-frame normalization tolerance.
pub const NORMALIZATION_TOL: f64 = 1e-10;
/// Frames whose unitarity residual exceeds this are rejected.
pub const FRAME_UNITARITY_TOL: f64 = 1e-8;

/// Set of measurement outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeSpace {
    /// Spin projections `m = j, j-1, ..., -j`.
    Spin { j: HalfInt },
    /// Tuples `(m1, ..., mk)` with `0 <= mi < dims[i]`, lexicographic.
    Product { dims: Vec<usize> },
}

/// One outcome label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Spin(HalfInt),
    Tuple(Vec<usize>),
}

impl OutcomeSpace {
    pub fn len(&self) -> usize {
        match self {
            OutcomeSpace::Spin { j } => j.multiplicity(),
            OutcomeSpace::Product { dims } => dims.iter().product(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn label(&self, idx: usize) -> Outcome {
        match self {
            OutcomeSpace::Spin { j } => Outcome::Spin(j.projection_at(idx)),
            OutcomeSpace::Product { dims } => {
                let mut digits = vec![0; dims.len()];
                split_index(idx, dims, &mut digits);
                Outcome::Tuple(digits)
            }
        }
    }

    pub fn labels(&self) -> Vec<Outcome> {
        (0..self.len()).map(|i| self.label(i)).collect()
    }
}

/// Measurement frame of a tomogram column.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Frame {
    /// Rotation `R(α, β, γ)` of a spin.
    Euler(EulerAngles),
    /// Arbitrary unitary `u`.
    Unitary { unitary: CMatrix },
    /// Product frame `u1 ⊗ u2 ⊗ ...`.
    Product { factors: Vec<CMatrix> },
}

impl Frame {
    /// Unitary matrix of a `Unitary` or `Product` frame.
    pub fn unitary_matrix(&self) -> Option<CMatrix> {
        match self {
            Frame::Euler(_) => None,
            Frame::Unitary { unitary } => Some(unitary.clone()),
            Frame::Product { factors } => Some(kron_all(factors)),
        }
    }

    pub fn euler(&self) -> Option<EulerAngles> {
        match self {
            Frame::Euler(o) => Some(*o),
            _ => None,
        }
    }
}

pub(crate) fn kron_all(factors: &[CMatrix]) -> CMatrix {
    let mut iter = factors.iter();
    let first = iter.next().cloned().unwrap_or_else(|| CMatrix::identity(1));
    iter.fold(first, |acc, f| acc.kron(f))
}

/// Table `w[outcome][frame]` of an operator symbol that is a probability
/// distribution per frame when the operator is a state.
///
/// Values are stored complex so that symbols of arbitrary (non-Hermitian)
/// observables fit the same type; [`Tomogram::observable_symbol`] exposes them.
#[derive(Clone, Debug, PartialEq)]
pub struct Tomogram {
    space: OutcomeSpace,
    frames: Vec<Frame>,
    values: Vec<Vec<C64>>,
}

impl Tomogram {
    pub fn new(space: OutcomeSpace, frames: Vec<Frame>, values: Vec<Vec<C64>>) -> Result<Self> {
        if values.len() != space.len() {
            return domain(format!("{} outcome rows, expected {}", values.len(), space.len()));
        }
        if let Some(row) = values.iter().find(|r| r.len() != frames.len()) {
            return domain(format!("row of {} values for {} frames", row.len(), frames.len()));
        }
        Ok(Tomogram { space, frames, values })
    }

    /// Builds a tomogram from a real table.
    pub fn from_real(space: OutcomeSpace, frames: Vec<Frame>, values: Vec<Vec<f64>>) -> Result<Self> {
        let values = values.into_iter().map(|r| r.into_iter().map(|v| C64::new(v, 0.0)).collect()).collect();
        Self::new(space, frames, values)
    }

    /// From a frame-major vector, index `frame * n_outcomes + outcome`.
    pub fn from_symbol_vector(space: OutcomeSpace, frames: Vec<Frame>, v: &[C64]) -> Result<Self> {
        let n = space.len();
        if v.len() != n * frames.len() {
            return domain(format!("symbol vector of length {} for {} x {}", v.len(), n, frames.len()));
        }
        let values = (0..n).map(|o| (0..frames.len()).map(|f| v[f * n + o]).collect()).collect();
        Ok(Tomogram { space, frames, values })
    }

    pub fn space(&self) -> &OutcomeSpace {
        &self.space
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn outcomes(&self) -> Vec<Outcome> {
        self.space.labels()
    }

    pub fn n_outcomes(&self) -> usize {
        self.values.len()
    }

    pub fn n_frames(&self) -> usize {
        self.frames.len()
    }

    /// Real part of `w[outcome][frame]`.
    pub fn value(&self, outcome: usize, frame: usize) -> f64 {
        self.values[outcome][frame].re
    }

    /// Full complex symbol value; complex only for non-Hermitian operators.
    pub fn observable_symbol(&self, outcome: usize, frame: usize) -> C64 {
        self.values[outcome][frame]
    }

    pub fn complex_values(&self) -> &[Vec<C64>] {
        &self.values
    }

    /// Real table with entries in `[-1e-12, 0)` clamped to zero.
    pub fn real_values(&self) -> Vec<Vec<f64>> {
        self.values.iter().map(|r| r.iter().map(|z| clamp_small(z.re)).collect()).collect()
    }

    /// Frame-major vector, index `frame * n_outcomes + outcome`.
    pub fn symbol_vector(&self) -> Vec<C64> {
        let n = self.n_outcomes();
        let mut v = vec![ZERO; n * self.n_frames()];
        for (o, row) in self.values.iter().enumerate() {
            for (f, &z) in row.iter().enumerate() {
                v[f * n + o] = z;
            }
        }
        v
    }

    /// Probability vector of one frame. Fails if an entry is below `-1e-12`.
    pub fn distribution(&self, frame: usize) -> Result<Vec<f64>> {
        self.values
            .iter()
            .map(|row| {
                let v = row[frame].re;
                if v < -NEGATIVITY_TOL {
                    Err(Error::Domain(format!("negative probability {v:.3e} in frame {frame}")))
                } else {
                    Ok(clamp_small(v))
                }
            })
            .collect()
    }

    /// `max_frame |Σ_outcomes w - 1|`.
    pub fn normalization_residual(&self) -> f64 {
        (0..self.n_frames())
            .map(|f| (self.values.iter().map(|r| r[f]).sum::<C64>() - C64::new(1.0, 0.0)).norm())
            .fold(0.0, f64::max)
    }

    /// Largest imaginary part in the table.
    pub fn imaginary_residual(&self) -> f64 {
        self.values.iter().flatten().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Checks nonnegativity and per-frame normalization.
    pub fn validate_probabilities(&self) -> Result<()> {
        for f in 0..self.n_frames() {
            self.distribution(f)?;
        }
        let res = self.normalization_residual();
        if res > NORMALIZATION_TOL {
            return domain(format!("tomogram frames not normalized (residual {res:.3e})"));
        }
        Ok(())
    }

    /// `a·self + b·other` on identical outcomes and frames.
    pub fn linear_combination(&self, a: C64, other: &Tomogram, b: C64) -> Result<Tomogram> {
        if self.space != other.space || self.frames != other.frames {
            return domain("tomograms differ in outcomes or frames");
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(x, y)| a * x + b * y).collect())
            .collect();
        Ok(Tomogram { space: self.space.clone(), frames: self.frames.clone(), values })
    }

    /// Largest entrywise difference to another tomogram of the same shape.
    pub fn max_abs_diff(&self, other: &Tomogram) -> f64 {
        assert_eq!(self.values.len(), other.values.len(), "tomogram shapes differ");
        self.values
            .iter()
            .zip(&other.values)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }

    pub(crate) fn replace_frames(mut self, frames: Vec<Frame>) -> Tomogram {
        assert_eq!(frames.len(), self.frames.len());
        self.frames = frames;
        self
    }
}

fn clamp_small(v: f64) -> f64 {
    if (-NEGATIVITY_TOL..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

fn check_frame(u: &CMatrix, n: usize) -> Result<()> {
    if !u.is_square() || u.dim() != n {
        return domain(format!("frame of size {}x{} for a {n}-dimensional state", u.rows(), u.cols()));
    }
    let res = u.unitarity_residual();
    if res > FRAME_UNITARITY_TOL {
        return domain(format!("frame is not unitary (residual {res:.3e})"));
    }
    Ok(())
}

/// `diag(u† ρ u)` as real probabilities.
pub(crate) fn frame_distribution(rho: &CMatrix, u: &CMatrix) -> Vec<C64> {
    let n = rho.dim();
    let ru = rho.matmul(u);
    (0..n).map(|k| (0..n).map(|r| u[(r, k)].conj() * ru[(r, k)]).sum()).collect()
}

fn table_from_columns(columns: Vec<Vec<C64>>, n: usize) -> Vec<Vec<C64>> {
    (0..n).map(|o| columns.iter().map(|c| c[o]).collect()).collect()
}

/// Unitary tomogram `w(m⃗, u) = <m⃗| u† ρ u |m⃗>` for each frame `u`.
pub fn unitary_tomogram(rho: &DensityMatrix, us: &[CMatrix]) -> Result<Tomogram> {
    let n = rho.dim();
    for u in us {
        check_frame(u, n)?;
    }
    let columns: Vec<Vec<C64>> = us.iter().map(|u| real_parts(frame_distribution(rho.matrix(), u))).collect();
    Tomogram::new(
        OutcomeSpace::Product { dims: rho.dims().to_vec() },
        us.iter().map(|u| Frame::Unitary { unitary: u.clone() }).collect(),
        table_from_columns(columns, n),
    )
}

/// Unitary tomogram on product frames `u1 ⊗ u2 ⊗ ...`, one factor per subsystem.
pub fn product_tomogram(rho: &DensityMatrix, frames: &[Vec<CMatrix>]) -> Result<Tomogram> {
    let dims = rho.dims();
    let mut columns = Vec::with_capacity(frames.len());
    for factors in frames {
        if factors.len() != dims.len() {
            return domain(format!("{} frame factors for {} subsystems", factors.len(), dims.len()));
        }
        for (u, &d) in factors.iter().zip(dims) {
            check_frame(u, d)?;
        }
        columns.push(real_parts(frame_distribution(rho.matrix(), &kron_all(factors))));
    }
    Tomogram::new(
        OutcomeSpace::Product { dims: dims.to_vec() },
        frames.iter().map(|f| Frame::Product { factors: f.clone() }).collect(),
        table_from_columns(columns, rho.dim()),
    )
}

fn real_parts(v: Vec<C64>) -> Vec<C64> {
    v.into_iter().map(|z| C64::new(z.re, 0.0)).collect()
}

/// Marginal of a joint distribution on `dims` over the subsystems in `keep`.
pub fn marginal_distribution(probs: &[f64], dims: &[usize], keep: &[usize]) -> Result<Vec<f64>> {
    if probs.len() != dims.iter().product::<usize>() {
        return domain(format!("{} probabilities for dims {dims:?}", probs.len()));
    }
    if keep.iter().any(|&k| k >= dims.len()) {
        return domain(format!("subsystem index out of range for dims {dims:?}"));
    }
    let kept: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let mut out = vec![0.0; kept.iter().product()];
    let mut digits = vec![0; dims.len()];
    let mut sub = vec![0; keep.len()];
    for (idx, &p) in probs.iter().enumerate() {
        split_index(idx, dims, &mut digits);
        for (s, &k) in sub.iter_mut().zip(keep) {
            *s = digits[k];
        }
        out[join_index(&sub, &kept)] += p;
    }
    Ok(out)
}

/// Tomogram of subsystem `keep`, summing out the other outcomes.
///
/// Requires product frames; the kept factor becomes the frame of the result.
pub fn tomogram_marginal(t: &Tomogram, keep: usize) -> Result<Tomogram> {
    let OutcomeSpace::Product { dims } = t.space() else {
        return domain("marginals need tuple outcomes");
    };
    if keep >= dims.len() {
        return domain(format!("subsystem {keep} out of range for dims {dims:?}"));
    }
    let mut frames = Vec::with_capacity(t.n_frames());
    for f in t.frames() {
        match f {
            Frame::Product { factors } if factors.len() == dims.len() => {
                frames.push(Frame::Unitary { unitary: factors[keep].clone() })
            }
            _ => return domain("marginals need product frames"),
        }
    }
    let d = dims[keep];
    let mut values = vec![vec![ZERO; t.n_frames()]; d];
    let mut digits = vec![0; dims.len()];
    for (o, row) in t.complex_values().iter().enumerate() {
        split_index(o, dims, &mut digits);
        for (f, &z) in row.iter().enumerate() {
            values[digits[keep]][f] += z;
        }
    }
    Tomogram::new(OutcomeSpace::Product { dims: vec![d] }, frames, values)
}
