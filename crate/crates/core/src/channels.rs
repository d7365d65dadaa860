//! Kraus channels, superoperators, the named qubit channels and their
//! tomographic propagators.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::{eigvals_hermitian, CMatrix, DensityMatrix, C64};
use crate::reconstruction::QuadratureGrid;
use crate::symbols::{dequantizer_u, quantizer_d, spin_tomogram, OutcomeSpace, Tomogram};

/// Completeness tolerance `‖Σ V† V - 1‖_∞`.
pub const CHANNEL_TOL: f64 = 1e-10;

/// Completely positive trace-preserving map `ρ ↦ Σ_s V_s ρ V_s†`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    ops: Vec<CMatrix>,
}

impl KrausChannel {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let Some(first) = ops.first() else {
            return domain("a channel needs at least one Kraus operator");
        };
        let dim = first.rows();
        if ops.iter().any(|v| !v.is_square() || v.dim() != dim) {
            return domain("Kraus operators must be square with a common dimension");
        }
        let channel = KrausChannel { dim, ops };
        let residual = channel.completeness_residual();
        if residual > CHANNEL_TOL {
            return Err(Error::InvalidChannel { residual });
        }
        Ok(channel)
    }

    pub fn identity(dim: usize) -> Self {
        KrausChannel { dim, ops: vec![CMatrix::identity(dim)] }
    }

    /// `ρ ↦ U ρ U†`.
    pub fn unitary(u: CMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    /// `‖Σ_s V_s† V_s - 1‖_∞`.
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = CMatrix::square_zeros(self.dim);
        for v in &self.ops {
            sum += &v.adjoint().matmul(v);
        }
        sum.max_abs_diff(&CMatrix::identity(self.dim))
    }

    /// `Σ_s V_s A V_s†` for any operator `A`.
    pub fn apply_operator(&self, a: &CMatrix) -> CMatrix {
        let mut out = CMatrix::square_zeros(self.dim);
        for v in &self.ops {
            out += &a.conjugate_by(v);
        }
        out
    }

    /// `c2 ∘ c1`, i.e. `c1` first; Kraus operators are the products `V2 V1`.
    pub fn then(&self, c2: &KrausChannel) -> Result<KrausChannel> {
        if self.dim != c2.dim {
            return domain(format!("composing channels of dimension {} and {}", self.dim, c2.dim));
        }
        let ops = c2.ops.iter().flat_map(|v2| self.ops.iter().map(move |v1| v2.matmul(v1))).collect();
        Ok(KrausChannel { dim: self.dim, ops })
    }

    /// Choi matrix `Σ_{ab} |a><b| ⊗ Φ(|a><b|)`.
    pub fn choi(&self) -> CMatrix {
        let d = self.dim;
        let mut out = CMatrix::square_zeros(d * d);
        for a in 0..d {
            for b in 0..d {
                let image = self.apply_operator(&CMatrix::unit(d, a, b));
                for r in 0..d {
                    for c in 0..d {
                        out[(a * d + r, b * d + c)] = image[(r, c)];
                    }
                }
            }
        }
        out
    }
}

/// `Σ_s V_s ρ V_s†`.
pub fn apply_kraus(c: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != c.dim() {
        return domain(format!("channel of dimension {} applied to a {}-dimensional state", c.dim(), rho.dim()));
    }
    let residual = c.completeness_residual();
    if residual > CHANNEL_TOL {
        return Err(Error::InvalidChannel { residual });
    }
    DensityMatrix::new(c.apply_operator(rho.matrix()).hermitian_part(), rho.dims().to_vec())
}

/// `d² x d²` matrix of a channel on row-major vectorized operators,
/// `vec(A)[a d + b] = A[a][b]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperoperatorMatrix {
    dim: usize,
    mat: CMatrix,
}

impl SuperoperatorMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn apply(&self, a: &CMatrix) -> Result<CMatrix> {
        if !a.is_square() || a.dim() != self.dim {
            return domain("operator dimension does not match the superoperator");
        }
        let v = self.mat.matvec(a.as_slice());
        CMatrix::from_vec(self.dim, self.dim, v)
    }

    /// Superoperator of `self ∘ first`.
    pub fn after(&self, first: &SuperoperatorMatrix) -> SuperoperatorMatrix {
        SuperoperatorMatrix { dim: self.dim, mat: self.mat.matmul(&first.mat) }
    }
}

/// `L = Σ_s V_s ⊗ conj(V_s)`, which acts as `vec(ρ) ↦ vec(Σ V ρ V†)`.
pub fn kraus_to_superoperator(c: &KrausChannel) -> SuperoperatorMatrix {
    let d = c.dim();
    let mut mat = CMatrix::square_zeros(d * d);
    for v in c.ops() {
        mat += &v.kron(&v.conj());
    }
    SuperoperatorMatrix { dim: d, mat }
}

/// The three named qubit channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    Depolarizing,
    PhaseDamping,
    AmplitudeDamping,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 3] =
        [ChannelKind::Depolarizing, ChannelKind::PhaseDamping, ChannelKind::AmplitudeDamping];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::PhaseDamping => "phase_damping",
            ChannelKind::AmplitudeDamping => "amplitude_damping",
        }
    }

    pub fn channel(self, p: f64) -> Result<KrausChannel> {
        match self {
            ChannelKind::Depolarizing => depolarizing(p),
            ChannelKind::PhaseDamping => phase_damping(p),
            ChannelKind::AmplitudeDamping => amplitude_damping(p),
        }
    }

    /// Reference initial state: `(1+σ3)/2`, `|+><+|` and `|1><1|` respectively.
    pub fn initial_state(self) -> DensityMatrix {
        let m = match self {
            ChannelKind::Depolarizing => CMatrix::diag_real(&[1.0, 0.0]),
            ChannelKind::PhaseDamping => CMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]),
            ChannelKind::AmplitudeDamping => CMatrix::diag_real(&[0.0, 1.0]),
        };
        DensityMatrix::new(m, vec![2]).expect("reference states are valid")
    }
}

impl std::str::FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "depolarizing" => Ok(ChannelKind::Depolarizing),
            "phase_damping" => Ok(ChannelKind::PhaseDamping),
            "amplitude_damping" => Ok(ChannelKind::AmplitudeDamping),
            other => domain(format!("unknown channel kind {other:?}")),
        }
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("channel parameter p = {p} outside [0, 1]"));
    }
    Ok(())
}

pub fn pauli() -> [CMatrix; 3] {
    let (o, i) = (C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    let one = C64::new(1.0, 0.0);
    [
        CMatrix::from_rows(&[&[o, one], &[one, o]]),
        CMatrix::from_rows(&[&[o, -i], &[i, o]]),
        CMatrix::from_rows(&[&[one, o], &[o, -one]]),
    ]
}

/// `ρ ↦ (1-p) ρ + (p/3) Σ_i σ_i ρ σ_i`.
pub fn depolarizing(p: f64) -> Result<KrausChannel> {
    check_probability(p)?;
    let mut ops = vec![CMatrix::identity(2).scale_real((1.0 - p).sqrt())];
    ops.extend(pauli().iter().map(|s| s.scale_real((p / 3.0).sqrt())));
    KrausChannel::new(ops)
}

/// Kraus operators `√(1-p) 1`, `√p |0><0|`, `√p |1><1|`.
pub fn phase_damping(p: f64) -> Result<KrausChannel> {
    check_probability(p)?;
    let s = p.sqrt();
    KrausChannel::new(vec![
        CMatrix::identity(2).scale_real((1.0 - p).sqrt()),
        CMatrix::diag_real(&[s, 0.0]),
        CMatrix::diag_real(&[0.0, s]),
    ])
}

/// Kraus operators `diag(1, √(1-p))` and `√p |0><1|`.
pub fn amplitude_damping(p: f64) -> Result<KrausChannel> {
    check_probability(p)?;
    KrausChannel::new(vec![
        CMatrix::diag_real(&[1.0, (1.0 - p).sqrt()]),
        CMatrix::from_real_rows(&[&[0.0, p.sqrt()], &[0.0, 0.0]]),
    ])
}

/// Qubit frame `u = cos(θ/2) - i σ·n sin(θ/2)`.
pub fn axis_unitary(theta: f64, n: [f64; 3]) -> Result<CMatrix> {
    check_axis(n)?;
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let mut u = CMatrix::identity(2).scale_real(c);
    for (sigma, &ni) in pauli().iter().zip(&n) {
        u.add_scaled(C64::new(0.0, -s * ni), sigma);
    }
    Ok(u)
}

fn check_axis(n: [f64; 3]) -> Result<()> {
    let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return domain(format!("axis must be a unit vector, |n| = {norm}"));
    }
    Ok(())
}

/// Closed-form `(w(+, u), w(-, u))` of the named channel applied to its
/// reference initial state, with `u = cos(θ/2) - i σ·n sin(θ/2)`.
pub fn channel_tomogram_closed_form(kind: ChannelKind, p: f64, theta: f64, n: [f64; 3]) -> Result<(f64, f64)> {
    check_probability(p)?;
    check_axis(n)?;
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let [n1, n2, n3] = n;
    let plus = match kind {
        ChannelKind::Depolarizing => {
            0.5 * (1.0 + (1.0 - 4.0 * p / 3.0) * (c * c + (2.0 * n3 * n3 - 1.0) * s * s))
        }
        ChannelKind::PhaseDamping => 0.5 * (1.0 + 2.0 * (1.0 - p) * s * (n2 * c + n1 * n3 * s)),
        ChannelKind::AmplitudeDamping => p * c * c + (p * n3 * n3 + (1.0 - p) * (1.0 - n3 * n3)) * s * s,
    };
    Ok((plus, 1.0 - plus))
}

/// Serializable channel description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelSpec {
    Kraus { ops: Vec<CMatrix> },
    Depolarizing { p: f64 },
    PhaseDamping { p: f64 },
    AmplitudeDamping { p: f64 },
}

impl ChannelSpec {
    pub fn build(&self) -> Result<KrausChannel> {
        match self {
            ChannelSpec::Kraus { ops } => KrausChannel::new(ops.clone()),
            ChannelSpec::Depolarizing { p } => depolarizing(*p),
            ChannelSpec::PhaseDamping { p } => phase_damping(*p),
            ChannelSpec::AmplitudeDamping { p } => amplitude_damping(*p),
        }
    }
}

/// Real matrix carrying spin-tomogram samples on grid points `x' -> x`,
/// `Π(x, x') = w_{x'} Tr[U(x) Φ(D(x'))]`; index `x = node * (2j+1) + m_index`.
#[derive(Clone, Debug, PartialEq)]
pub struct Propagator {
    grid: QuadratureGrid,
    size: usize,
    data: Vec<f64>,
}

/// Propagator of channel `c` on the spin-`j` grid (`j` is the grid's spin).
pub fn channel_propagator(c: &KrausChannel, grid: &QuadratureGrid) -> Result<Propagator> {
    let j = grid.j();
    if c.dim() != j.multiplicity() {
        return domain(format!("channel of dimension {} on a spin-{j} grid", c.dim()));
    }
    let n = j.multiplicity();
    let size = grid.len() * n;
    let nodes: Vec<_> = grid.nodes().collect();
    let mut us = Vec::with_capacity(size);
    let mut ds = Vec::with_capacity(size);
    let mut weights = Vec::with_capacity(size);
    for node in &nodes {
        for m in j.projections() {
            us.push(dequantizer_u(j, m, node.omega)?);
            ds.push(quantizer_d(j, m, node.omega)?);
            weights.push(node.weight);
        }
    }
    let columns: Vec<Vec<f64>> = (0..size)
        .into_par_iter()
        .map(|xp| {
            let image = c.apply_operator(&ds[xp]);
            us.iter().map(|u| image.trace_product(u).re * weights[xp]).collect()
        })
        .collect();
    let mut data = vec![0.0; size * size];
    for (xp, col) in columns.iter().enumerate() {
        for (x, &v) in col.iter().enumerate() {
            data[x * size + xp] = v;
        }
    }
    Ok(Propagator { grid: grid.clone(), size, data })
}

impl Propagator {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn get(&self, x: usize, xp: usize) -> f64 {
        self.data[x * self.size + xp]
    }

    pub fn apply_vector(&self, w: &[C64]) -> Result<Vec<C64>> {
        if w.len() != self.size {
            return domain(format!("vector of length {} for a propagator of size {}", w.len(), self.size));
        }
        Ok((0..self.size)
            .map(|x| self.data[x * self.size..(x + 1) * self.size].iter().zip(w).map(|(p, v)| v * p).sum())
            .collect())
    }

    /// Output tomogram on the same frames.
    pub fn apply(&self, t: &Tomogram) -> Result<Tomogram> {
        let frames: Option<Vec<_>> = t.frames().iter().map(|f| f.euler()).collect();
        let on_grid = frames.is_some_and(|f| self.grid.matches_frames(&f));
        if !on_grid || t.space() != &(OutcomeSpace::Spin { j: self.grid.j() }) {
            return domain("tomogram is not sampled on the propagator grid");
        }
        let out = self.apply_vector(&t.symbol_vector())?;
        Tomogram::from_symbol_vector(t.space().clone(), t.frames().to_vec(), &out)
    }

    /// `self · first`, the propagator of `self ∘ first`.
    pub fn after(&self, first: &Propagator) -> Result<Propagator> {
        if self.grid != first.grid {
            return domain("propagators live on different grids");
        }
        let n = self.size;
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut row = vec![0.0; n];
                for k in 0..n {
                    let a = self.data[x * n + k];
                    if a == 0.0 {
                        continue;
                    }
                    for (r, b) in row.iter_mut().zip(&first.data[k * n..(k + 1) * n]) {
                        *r += a * b;
                    }
                }
                row
            })
            .collect();
        Ok(Propagator { grid: self.grid.clone(), size: n, data: rows.concat() })
    }

    pub fn max_abs_diff(&self, other: &Propagator) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Tomogram of `Φ(A)` sampled on the grid, for comparison with [`Propagator::apply`].
pub fn direct_output_tomogram(c: &KrausChannel, a: &CMatrix, grid: &QuadratureGrid) -> Result<Tomogram> {
    spin_tomogram(&c.apply_operator(a), &grid.frames())
}

/// Smallest eigenvalue of the Choi matrix.
pub fn choi_min_eigenvalue(c: &KrausChannel) -> Result<f64> {
    Ok(eigvals_hermitian(&c.choi().hermitian_part())?.last().copied().unwrap_or(0.0))
}
