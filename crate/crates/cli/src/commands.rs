//! Subcommand arguments and their execution.

use std::f64::consts::FRAC_PI_3;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use tomosym::channels::{apply_kraus, axis_unitary, channel_tomogram_closed_form, ChannelKind, ChannelSpec};
use tomosym::dynamics::{evolve_state, evolve_tomogram, Hamiltonian};
use tomosym::entropy::{integral_entropy_of, min_over_group, von_neumann, EntropyKind};
use tomosym::io::{format_float, MatrixDoc, TomogramDoc};
use tomosym::linalg::random::{sample_haar_unitary, stream_rng};
use tomosym::reconstruction::{make_grid, reconstruct_from_unitary_frame, reconstruct_operator, DEFAULT_OVERSAMPLE};
use tomosym::simplex::{eigenvalue_bounds_check, image_dimension, image_sample, peres_scan, PERES_TOL};
use tomosym::star::{star_compose, star_grid};
use tomosym::symbols::{product_tomogram, spin_tomogram, unitary_tomogram};
use tomosym::{CMatrix, DensityMatrix, EulerAngles, Frame, GroupSpec, HalfInt, OutcomeSpace, RngSeed, Tomogram};

use crate::error::{usage, CliResult};
use crate::output::{csv_table, from_file, matrix_body, read_json, to_json, tomogram_body, Format, Report};

/// Haar frames drawn when neither `--frames` nor `--n-frames` is given.
const DEFAULT_FRAMES: usize = 100;

/// A runnable subcommand.
pub trait Run {
    fn common(&self) -> &Common;
    fn run(&self) -> CliResult<Report>;
}

#[derive(Args, Debug)]
pub struct Common {
    /// Seed for every random draw.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl Common {
    fn seed(&self) -> RngSeed {
        RngSeed(self.seed)
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

#[derive(Args, Debug)]
pub struct StateInput {
    /// Density matrix file (JSON).
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Subsystem dimensions, e.g. 2,2; overrides those in the file.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
}

impl StateInput {
    fn load(&self) -> CliResult<DensityMatrix> {
        let Some(path) = &self.state else {
            return usage("--state FILE is required");
        };
        let rho = from_file(path, |d: MatrixDoc| d.to_density())?;
        self.with_dims(rho)
    }

    /// The state file, or the two-qubit Werner state with parameter `q`.
    fn load_or_werner(&self, q: Option<f64>) -> CliResult<DensityMatrix> {
        match (&self.state, q) {
            (Some(_), Some(_)) => usage("give either --state or --q, not both"),
            (Some(_), None) => self.load(),
            (None, Some(q)) => self.with_dims(DensityMatrix::werner(q)?),
            (None, None) => usage("--state FILE or a Werner parameter --q is required"),
        }
    }

    fn with_dims(&self, rho: DensityMatrix) -> CliResult<DensityMatrix> {
        Ok(match &self.dims {
            Some(d) => rho.with_dims(d.clone())?,
            None => rho,
        })
    }
}

#[derive(Args, Debug)]
pub struct FrameInput {
    /// Spin quantum number (1, 3/2, ...); measures on the rotation quadrature grid.
    #[arg(long)]
    pub j: Option<HalfInt>,
    /// Frame list (JSON): Euler angles, unitaries or product factors.
    #[arg(long, conflicts_with = "n_frames")]
    pub frames: Option<PathBuf>,
    /// Number of Haar-random frames.
    #[arg(long)]
    pub n_frames: Option<usize>,
    /// Grid oversampling factor for spin frames.
    #[arg(long, default_value_t = DEFAULT_OVERSAMPLE)]
    pub oversample: f64,
}

enum Frames {
    Spin(Vec<EulerAngles>),
    Unitary(Vec<CMatrix>),
    Product(Vec<Vec<CMatrix>>),
}

impl FrameInput {
    fn resolve(&self, dim: usize, seed: RngSeed) -> CliResult<Frames> {
        if let Some(j) = self.j {
            if j.multiplicity() != dim {
                return usage(format!("--j {j} needs a {}-dimensional state, got {dim}", j.multiplicity()));
            }
        }
        if let Some(path) = &self.frames {
            return classify_frames(read_json(path)?);
        }
        if let Some(j) = self.j {
            if self.n_frames.is_some() {
                return usage("--n-frames draws unitary frames; drop --j or pass --frames");
            }
            return Ok(Frames::Spin(make_grid(j, self.oversample)?.frames()));
        }
        let n = self.n_frames.unwrap_or(DEFAULT_FRAMES);
        if n == 0 {
            return usage("--n-frames must be positive");
        }
        Ok(Frames::Unitary(haar_frames(dim, n, seed)))
    }
}

fn classify_frames(list: Vec<Frame>) -> CliResult<Frames> {
    if list.is_empty() {
        return usage("frame file is empty");
    }
    if let Some(e) = list.iter().map(Frame::euler).collect::<Option<Vec<_>>>() {
        return Ok(Frames::Spin(e));
    }
    if list.iter().all(|f| matches!(f, Frame::Unitary { .. })) {
        return Ok(Frames::Unitary(list.iter().filter_map(Frame::unitary_matrix).collect()));
    }
    let products: Option<Vec<Vec<CMatrix>>> = list
        .into_iter()
        .map(|f| match f {
            Frame::Product { factors } => Some(factors),
            _ => None,
        })
        .collect();
    match products {
        Some(p) => Ok(Frames::Product(p)),
        None => usage("frame file mixes Euler, unitary and product frames"),
    }
}

/// Frame `i` comes from sub-stream `i`, independent of the total count.
fn haar_frames(dim: usize, n: usize, seed: RngSeed) -> Vec<CMatrix> {
    (0..n).map(|i| sample_haar_unitary(dim, &mut stream_rng(seed, i as u64))).collect()
}

fn tomogram_of(rho: &DensityMatrix, frames: &Frames) -> tomosym::Result<Tomogram> {
    match frames {
        Frames::Spin(e) => spin_tomogram(rho.matrix(), e),
        Frames::Unitary(us) => unitary_tomogram(rho, us),
        Frames::Product(fs) => product_tomogram(rho, fs),
    }
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

// ---------------------------------------------------------------- tomogram

#[derive(Args, Debug)]
pub struct TomogramArgs {
    #[command(flatten)]
    state: StateInput,
    #[command(flatten)]
    frames: FrameInput,
    #[command(flatten)]
    common: Common,
}

impl Run for TomogramArgs {
    fn common(&self) -> &Common {
        &self.common
    }

    fn run(&self) -> CliResult<Report> {
        let rho = self.state.load()?;
        let frames = self.frames.resolve(rho.dim(), self.common.seed())?;
        let t = tomogram_of(&rho, &frames)?;
        let values = t.real_values();
        let lo = values.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Report::new(tomogram_body(&t, self.common.format_or(Format::Json))?)
            .line(format!("{} outcomes x {} frames", t.n_outcomes(), t.n_frames()))
            .line(format!("values in [{lo:.6}, {hi:.6}]")))
    }
}

// ---------------------------------------------------------------- reconstruct

#[derive(Args, Debug)]
pub struct ReconstructArgs {
    /// Tomogram to invert (JSON).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Reference state. Without --input it is measured first (round trip).
    #[command(flatten)]
    state: StateInput,
    #[command(flatten)]
    frames: FrameInput,
    #[command(flatten)]
    common: Common,
}

impl Run for ReconstructArgs {
    fn common(&self) -> &Common {
        &self.common
    }

    fn run(&self) -> CliResult<Report> {
        let reference = match &self.state.state {
            Some(_) => Some(self.state.load()?),
            None => None,
        };
        let t = match (&self.input, &reference) {
            (Some(path), _) => from_file(path, |d: TomogramDoc| d.to_tomogram())?,
            (None, Some(rho)) => tomogram_of(rho, &self.frames.resolve(rho.dim(), self.common.seed())?)?,
            (None, None) => return usage("need --input TOMOGRAM or --state FILE"),
        };
        if let Some(rho) = &reference {
            if rho.dim() != t.n_outcomes() {
                return usage(format!("reference state has dimension {}, tomogram {}", rho.dim(), t.n_outcomes()));
            }
        }
        let (m, dims, mut lines) = invert(&t, self.frames.oversample)?;
        if let Some(rho) = &reference {
            lines.push(format!("max abs error: {}", sci(m.max_abs_diff(rho.matrix()))));
        }
        Ok(Report { body: matrix_body(&m, dims, self.common.format_or(Format::Json))?, summary: lines })
    }
}

type Inversion = (CMatrix, Option<Vec<usize>>, Vec<String>);

fn invert(t: &Tomogram, oversample: f64) -> CliResult<Inversion> {
    match t.space() {
        OutcomeSpace::Spin { j } => {
            let grid = make_grid(*j, oversample)?;
            let euler: Option<Vec<EulerAngles>> = t.frames().iter().map(Frame::euler).collect();
            if !euler.is_some_and(|e| grid.matches_frames(&e)) {
                return usage(format!("spin tomogram frames are not the quadrature grid for --oversample {oversample}"));
            }
            let m = reconstruct_operator(t, &grid)?;
            Ok((m, None, vec![format!("quadrature grid: {} nodes", grid.len())]))
        }
        OutcomeSpace::Product { dims } => {
            let r = reconstruct_from_unitary_frame(t)?;
            let mut lines = vec![
                format!("rank: {}", r.rank),
                format!("residual: {}", sci(r.residual)),
                format!("min eigenvalue: {}", sci(r.min_eigenvalue)),
            ];
            lines.extend(r.warning.iter().map(|w| format!("warning: {w}")));
            Ok((r.rho, Some(dims.clone()), lines))
        }
    }
}

// ---------------------------------------------------------------- star

#[derive(Args, Debug)]
pub struct StarArgs {
    /// First operator (matrix JSON, need not be a state).
    #[arg(long)]
    state: PathBuf,
    /// Second operator; the first is reused when absent.
    #[arg(long)]
    other: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

impl Run for StarArgs {
    fn common(&self) -> &Common {
        &self.common
    }

    fn run(&self) -> CliResult<Report> {
        let a = from_file(&self.state, |d: MatrixDoc| d.to_matrix())?;
        let b = match &self.other {
            Some(p) => from_file(p, |d: MatrixDoc| d.to_matrix())?,
            None => a.clone(),
        };
        if a.rows() != b.rows() {
            return usage(format!("operators have dimensions {} and {}", a.rows(), b.rows()));
        }
        let grid = star_grid(HalfInt::spin_for_dim(a.rows())?)?;
        let frames = grid.frames();
        let product = star_compose(&spin_tomogram(&a, &frames)?, &spin_tomogram(&b, &frames)?, &grid)?;
        let direct = spin_tomogram(&a.matmul(&b), &frames)?;
        Ok(Report::new(tomogram_body(&product, self.common.format_or(Format::Json))?)
            .line(format!("star grid: {} nodes", grid.len()))
            .line(format!("max deviation from symbol of AB: {}", sci(product.max_abs_diff(&direct)))))
    }
}

// ---------------------------------------------------------------- channel

#[derive(Args, Debug)]
pub struct ChannelArgs {
    /// depolarizing, phase-damping or amplitude-damping.
    #[arg(long)]
    kind: Option<ChannelKind>,
    /// Channel description (JSON), applied to --state.
    #[arg(long, conflicts_with = "kind")]
    spec: Option<PathBuf>,
    /// Channel parameter; without it a sweep over [0, 1] is produced.
    #[arg(long)]
    p: Option<f64>,
    /// Number of sweep points.
    #[arg(long, default_value_t = 21)]
    steps: usize,
    /// Rotation angle of the measurement frame.
    #[arg(long, default_value_t = FRAC_PI_3)]
    theta: f64,
    /// Rotation axis of the measurement frame, x,y,z (normalized).
    #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [1.0, 1.0, 1.0])]
    axis: Vec<f64>,
    #[command(flatten)]
    state: StateInput,
    #[command(flatten)]
    common: Common,
}

#[derive(Serialize)]
struct SweepRow {
    p: f64,
    w_plus: f64,
    w_minus: f64,
}

impl ChannelArgs {
    fn axis(&self) -> CliResult<[f64; 3]> {
        let norm = self.axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return usage("--axis must be a nonzero finite vector");
        }
        Ok([self.axis[0] / norm, self.axis[1] / norm, self.axis[2] / norm])
    }

    fn sweep(&self, kind: ChannelKind) -> CliResult<Report> {
        let ps: Vec<f64> = match self.p {
            Some(p) => vec![p],
            None if self.steps >= 2 => (0..self.steps).map(|k| k as f64 / (self.steps - 1) as f64).collect(),
            None => return usage("--steps must be at least 2"),
        };
        let (theta, n) = (self.theta, self.axis()?);
        let u = axis_unitary(theta, n)?;
        let mut rows = Vec::with_capacity(ps.len());
        let mut deviation: f64 = 0.0;
        for &p in &ps {
            let (w_plus, w_minus) = channel_tomogram_closed_form(kind, p, theta, n)?;
            let direct = unitary_tomogram(&apply_kraus(&kind.channel(p)?, &kind.initial_state())?, std::slice::from_ref(&u))?;
            deviation = deviation.max((direct.value(0, 0) - w_plus).abs()).max((direct.value(1, 0) - w_minus).abs());
            rows.push(SweepRow { p, w_plus, w_minus });
        }
        let body = match self.common.format_or(Format::Csv) {
            Format::Json => to_json(&rows)?,
            Format::Csv => csv_table(
                &["p", "w_plus", "w_minus"],
                rows.iter().map(|r| vec![format_float(r.p), format_float(r.w_plus), format_float(r.w_minus)]),
            ),
        };
        Ok(Report::new(body)
            .line(format!("{} sweep, theta = {theta}, axis = {n:?}", kind.name()))
            .line(format!("max deviation from direct evolution: {}", sci(deviation))))
    }

    fn apply(&self) -> CliResult<Report> {
        let rho = self.state.load()?;
        let channel = match (&self.spec, self.kind, self.p) {
            (Some(path), _, None) => from_file(path, |s: ChannelSpec| s.build())?,
            (None, Some(kind), Some(p)) => kind.channel(p)?,
            (Some(_), _, Some(_)) => return usage("--p is part of the channel file; drop it"),
            _ => return usage("applying a channel needs --spec FILE or --kind with --p"),
        };
        if channel.dim() != rho.dim() {
            return usage(format!("channel acts on dimension {}, state has {}", channel.dim(), rho.dim()));
        }
        let out = apply_kraus(&channel, &rho)?;
        Ok(Report::new(matrix_body(out.matrix(), Some(out.dims().to_vec()), self.common.format_or(Format::Json))?)
            .line(format!("{} Kraus operators", channel.ops().len()))
            .line(format!("completeness residual: {}", sci(channel.completeness_residual())))
            .line(format!("output purity: {:.12}", out.purity())))
    }
}

impl Run for ChannelArgs {
    fn common(&self) -> &Common {
        &self.common
    }

    fn run(&self) -> CliResult<Report> {
        if self.state.state.is_some() {
            return self.apply();
        }
        match self.kind {
            Some(kind) => self.sweep(kind),
            None => usage("a sweep needs --kind; pass --state to apply a channel file"),
        }
    }
}

// ---------------------------------------------------------------- simplex-image

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    /// The full unitary group.
    Full,
    /// Independent unitaries on each subsystem.
    Product,
    /// A unitary on one subsystem (see --factor).
    Local,
}

#[derive(Args, Debug)]
pub struct SimplexArgs {
    #[command(flatten)]
    state: StateInput,
    /// Werner parameter; used instead of --state.
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, value_enum, default_value_t = GroupArg::Full)]
    group: GroupArg,
    /// Subsystem moved by --group local, counted from 0.
    #[arg(long, default_value_t = 0)]
    factor: usize,
    /// Number of sampled points.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[command(flatten)]
    common: Common,
}

impl Run for SimplexArgs {
    fn common(&self) -> &Common {
        &self.common
    }

    fn run(&self) -> CliResult<Report> {
        let rho = self.state.load_or_werner(self.q)?;
        let dims = rho.dims().to_vec();
        let group = match self.group {
            GroupArg::Full => GroupSpec::Full,
            GroupArg::Product => GroupSpec::Product { dims },
            GroupArg::Local => GroupSpec::Local { dims, factor: self.factor },
        };
        let sample = image_sample(&rho, &group, self.samples, self.common.seed())?;
        let dimension = image_dimension(&rho, &group)?;
        let body = match self.common.format_or(Format::Csv) {
            Format::Json => {
                #[derive(Serialize)]
                struct Doc<'a> {
                    dimension: &'a tomosym::simplex::DimensionReport,
                    sample: &'a tomosym::simplex::SimplexSample,
                }
                to_json(&Doc { dimension: &dimension, sample: &sample })?
            }
            Format::Csv => {
                let mut buf = Vec::new();
                sample.write_csv(&mut buf)?;
                String::from_utf8(buf).expect("CSV output is UTF-8")
            }
        };
        let sv: Vec<String> = dimension.singular_values.iter().map(|&s| sci(s)).collect();
        let mut report = Report::new(body)
            .line(format!("image dimension: {}", dimension.dimension))
            .line(format!("jacobian singular values: [{}]", sv.join(", ")));
        if group == GroupSpec::Full {
            let ok = eigenvalue_bounds_check(&sample, &rho);
            report = report.line(format!("eigenvalue bounds: {}", if ok { "satisfied" } else { "VIOLATED" }));
        }
        Ok(report)
    }
}

// ---------------------------------------------------------------- entropy

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EntropyArg {
    Shannon,
    Renyi,
    Tsallis,
}

#[derive(Args, Debug)]
pub struct EntropyArgs {
    #[command(flatten)]
    state: StateInput,
    #[arg(long, value_enum, default_value_t = EntropyArg::Shannon)]
    kind: EntropyArg,
    /// Order of the Rényi or Tsallis entropy.
    #[arg(long)]
    q: Option<f64>,
    /// Haar frames used to check the minimum and estimate the group average.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[command(flatten)]
    common: Common,
}

impl EntropyArgs {
    fn kind(&self) -> CliResult<EntropyKind> {
        match (self.kind, self.q) {
            (EntropyArg::Shannon, None) => Ok(EntropyKind::Shannon),
            (EntropyArg::Shannon, Some(_)) => usage("--q applies to renyi and tsallis only"),
            (EntropyArg::Renyi, Some(q)) => Ok(EntropyKind::Renyi { q }),
            (EntropyArg::Tsallis, Some(q)) => Ok(EntropyKind::Tsallis { q }),
            (_, None) => usage("--q is required for renyi and tsallis"),
        }
    }
}

impl Run for EntropyArgs {
    fn common(&self) -> &Common {
        &self.common
    }

    fn run(&self) -> CliResult<Report> {
        let rho = self.state.load()?;
        let kind = self.kind()?;
        let seed = self.common.seed();
        let mut report = min_over_group(&rho, kind, self.samples, seed)?;
        if self.samples >= 2 {
            report.monte_carlo = Some(integral_entropy_of(&rho, kind, self.samples, seed)?);
        }
        let body = match self.common.format_or(Format::Json) {
            Format::Json => to_json(&report)?,
            Format::Csv => csv_table(
                &["index", "frame", "entropy"],
                report.per_frame.iter().enumerate().map(|(i, &h)| {
                    let frame = if i == 0 { "eigenbasis" } else { "haar" };
                    vec![i.to_string(), frame.to_string(), format_float(h)]
                }),
            ),
        };
        let sampled = &report.per_frame[1..];
        let lo = sampled.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = sampled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut table = Report::new(body)
            .line(format!("{:<22}{}", "entropy", kind_label(kind)))
            .line(format!("{:<22}{:.12}", "minimum (spectrum)", report.min_value))
            .line(format!("{:<22}{:.12}", "eigenbasis frame", report.per_frame[0]))
            .line(format!("{:<22}{:.12}", "von Neumann", von_neumann(&rho)));
        if !sampled.is_empty() {
            table = table
                .line(format!("{:<22}{:.12}", "sampled min", lo))
                .line(format!("{:<22}{:.12}", "sampled max", hi));
        }
        if let Some(mc) = &report.monte_carlo {
            table = table.line(format!("{:<22}{:.8} +/- {:.2e} (n = {})", "group average", mc.mean, mc.stderr, mc.n));
        }
        Ok(table.line(format!("{:<22}{}", "bound holds", if report.bound_holds { "yes" } else { "NO" })))
    }
}

fn kind_label(k: EntropyKind) -> String {
    match k {
        EntropyKind::Shannon => "shannon".into(),
        EntropyKind::Renyi { q } => format!("renyi q = {q}"),
        EntropyKind::Tsallis { q } => format!("tsallis q = {q}"),
    }
}

// ---------------------------------------------------------------- peres

#[derive(Args, Debug)]
pub struct PeresArgs {
    #[command(flatten)]
    state: StateInput,
    /// Werner parameter; used instead of --state.
    #[arg(long)]
    q: Option<f64>,
    /// Haar frames scanned in addition to the eigenbasis.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[command(flatten)]
    common: Common,
}

impl Run for PeresArgs {
    fn common(&self) -> &Common {
        &self.common
    }

    fn run(&self) -> CliResult<Report> {
        let rho = self.state.load_or_werner(self.q)?;
        let r = peres_scan(&rho, self.samples, self.common.seed())?;
        let body = match self.common.format_or(Format::Json) {
            Format::Json => to_json(&r)?,
            Format::Csv => csv_table(
                &["quantity", "value"],
                [
                    ("max_violation", format_float(r.max_violation)),
                    ("eigenbasis_violation", format_float(r.eigenbasis_violation)),
                    ("min_eigenvalue", format_float(r.min_eigenvalue)),
                    ("trace_norm", format_float(r.trace_norm)),
                    ("frames_scanned", r.frames_scanned.to_string()),
                ]
                .into_iter()
                .map(|(k, v)| vec![k.to_string(), v]),
            ),
        };
        let entangled = r.min_eigenvalue < -PERES_TOL;
        Ok(Report::new(body)
            .line(format!("partial transpose min eigenvalue: {:.12}", r.min_eigenvalue))
            .line(format!("max tomographic violation: {:.12}", r.max_violation))
            .line(format!("entangled: {}", if entangled { "yes" } else { "no (PPT)" })))
    }
}

// ---------------------------------------------------------------- evolve

#[derive(Args, Debug)]
pub struct EvolveArgs {
    #[command(flatten)]
    state: StateInput,
    /// Hamiltonian (matrix JSON).
    #[arg(long)]
    hamiltonian: PathBuf,
    /// Evolution time.
    #[arg(long)]
    t: f64,
    #[command(flatten)]
    frames: FrameInput,
    #[command(flatten)]
    common: Common,
}

impl Run for EvolveArgs {
    fn common(&self) -> &Common {
        &self.common
    }

    fn run(&self) -> CliResult<Report> {
        let rho = self.state.load()?;
        let h = from_file(&self.hamiltonian, |d: MatrixDoc| d.to_matrix().and_then(Hamiltonian::new))?;
        if h.dim() != rho.dim() {
            return usage(format!("Hamiltonian has dimension {}, state {}", h.dim(), rho.dim()));
        }
        if !self.t.is_finite() {
            return usage("--t must be finite");
        }
        let frames = self.frames.resolve(rho.dim(), self.common.seed())?;
        if matches!(frames, Frames::Spin(_)) {
            return usage("evolve works on unitary frames; drop --j or pass unitary frames");
        }
        let t0 = tomogram_of(&rho, &frames)?;
        let evolved = evolve_tomogram(&t0, &h, self.t)?;
        let direct = tomogram_of(&evolve_state(&rho, &h, self.t)?, &frames)?;
        Ok(Report::new(tomogram_body(&evolved, self.common.format_or(Format::Json))?)
            .line(format!("{} frames, t = {}", evolved.n_frames(), self.t))
            .line(format!("max deviation from evolved state: {}", sci(evolved.max_abs_diff(&direct)))))
    }
}
