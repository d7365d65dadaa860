//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;
use tomosym::channels::{
    apply_kraus, channel_propagator, channel_tomogram_closed_form, direct_output_tomogram,
    axis_unitary, ChannelKind, KrausChannel,
};
use tomosym::dynamics::{evolve_state, evolve_tomogram, shift_frames, Hamiltonian};
use tomosym::entropy::{
    frame_entropy, min_over_group, strong_subadditivity_check, subadditivity_check, EntropyKind,
};
use tomosym::linalg::random::{random_hermitian, random_pure_vector, rng_from_seed, sample_density, sample_haar_unitary, TomoRng};
use tomosym::linalg::{CMatrix, DensityMatrix, RngSeed, C64};
use tomosym::reconstruction::{make_grid, reconstruct_operator, DEFAULT_OVERSAMPLE};
use tomosym::simplex::{
    entangled_ray_check, factorized_surface_residual, image_dimension, image_sample, peres_scan, GroupSpec,
};
use tomosym::star::{kernel_closed_form, kernel_trace_form, star_compose, star_grid, SpinPoint, StarKernel};
use tomosym::su2::{EulerAngles, HalfInt};
use tomosym::symbols::{spin_tomogram, unitary_tomogram};
use tomosym::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn spins(max_twice: i32) -> impl Iterator<Item = HalfInt> {
    (1..=max_twice).map(HalfInt::from_twice)
}

fn random_angles(rng: &mut TomoRng) -> EulerAngles {
    EulerAngles::new(rng.random_range(0.0..TAU), rng.random_range(0.0..PI), rng.random_range(0.0..TAU))
}

fn random_axis(rng: &mut TomoRng) -> [f64; 3] {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..TAU);
    let r = (1.0 - z * z).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

fn pure_state(psi: &[C64], dims: Vec<usize>) -> DensityMatrix {
    DensityMatrix::pure(psi, dims).expect("normalized vector")
}

fn schmidt_state(c0: f64, c1: f64) -> DensityMatrix {
    let z = C64::new(0.0, 0.0);
    pure_state(&[C64::new(c0, 0.0), z, z, C64::new(c1, 0.0)], vec![2, 2])
}

type Criterion = fn() -> Result<Outcome>;

/// Channel from a Haar isometry `C^d -> C^{dk}` split into `k` blocks.
fn random_channel(d: usize, k: usize, rng: &mut TomoRng) -> Result<KrausChannel> {
    let u = sample_haar_unitary(d * k, rng);
    let ops = (0..k).map(|s| CMatrix::from_fn(d, d, |r, c| u[(s * d + r, c)])).collect();
    KrausChannel::new(ops)
}

fn round_trip() -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = rng_from_seed(RngSeed(101));
    let mut worst: f64 = 0.0;
    for j in spins(4) {
        let grid = make_grid(j, DEFAULT_OVERSAMPLE)?;
        let frames = grid.frames();
        for _ in 0..50 {
            let a = random_hermitian(j.multiplicity(), &mut rng);
            let back = reconstruct_operator(&spin_tomogram(&a, &frames)?, &grid)?;
            worst = worst.max(back.max_abs_diff(&a));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst < 1e-8 && secs < 30.0, format!("max entry error {worst:.2e} (tol 1e-8), {secs:.2} s (limit 30 s)"))
}

fn star_product() -> Result<Outcome> {
    let mut rng = rng_from_seed(RngSeed(102));
    let (mut product, mut table, mut assoc): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for j in spins(3) {
        let n = j.multiplicity();
        let grid = star_grid(j)?;
        let frames = grid.frames();
        let coarse = make_grid(j, 1.0)?;
        let kernel = StarKernel::build(&coarse)?;
        for _ in 0..5 {
            let (a, b, c) = (random_hermitian(n, &mut rng), random_hermitian(n, &mut rng), random_hermitian(n, &mut rng));
            let (fa, fb, fc) = (spin_tomogram(&a, &frames)?, spin_tomogram(&b, &frames)?, spin_tomogram(&c, &frames)?);
            let direct = spin_tomogram(&a.matmul(&b), &frames)?;
            product = product.max(star_compose(&fa, &fb, &grid)?.max_abs_diff(&direct));
            let left = star_compose(&star_compose(&fa, &fb, &grid)?, &fc, &grid)?;
            let right = star_compose(&fa, &star_compose(&fb, &fc, &grid)?, &grid)?;
            assoc = assoc.max(left.max_abs_diff(&right));

            let cf = coarse.frames();
            let (ga, gb, gc) = (spin_tomogram(&a, &cf)?, spin_tomogram(&b, &cf)?, spin_tomogram(&c, &cf)?);
            table = table.max(kernel.compose(&ga, &gb)?.max_abs_diff(&spin_tomogram(&a.matmul(&b), &cf)?));
            let left = kernel.compose(&kernel.compose(&ga, &gb)?, &gc)?;
            let right = kernel.compose(&ga, &kernel.compose(&gb, &gc)?)?;
            assoc = assoc.max(left.max_abs_diff(&right));
        }
    }
    outcome(
        product < 1e-7 && table < 1e-7 && assoc < 1e-7,
        format!("product {product:.2e}, kernel-table product {table:.2e}, associativity {assoc:.2e} (tol 1e-7, j <= 3/2)"),
    )
}

fn kernel_cross_form() -> Result<Outcome> {
    let mut rng = rng_from_seed(RngSeed(103));
    let mut worst: f64 = 0.0;
    let mut phases = Vec::new();
    for j in spins(3) {
        for _ in 0..100 {
            let point = |rng: &mut TomoRng| {
                let m = j.projection_at(rng.random_range(0..j.multiplicity()));
                SpinPoint::new(m, random_angles(rng))
            };
            let (x2, x1, x) = (point(&mut rng), point(&mut rng), point(&mut rng));
            let trace = kernel_trace_form(j, x2, x1, x)?;
            let closed = kernel_closed_form(j, x2, x1, x)?;
            worst = worst.max((trace - closed).norm());
            if trace.norm() > 1e-6 {
                phases.push(closed / trace);
            }
        }
    }
    let phase_spread = phases.iter().map(|p| (p - C64::new(1.0, 0.0)).norm()).fold(0.0, f64::max);
    outcome(
        worst < 1e-8,
        format!("max |trace - closed| {worst:.2e} over 300 triples (tol 1e-8); relative phase deviation from 1: {phase_spread:.2e}"),
    )
}

fn spread(points: &[tomosym::simplex::SimplexPoint]) -> f64 {
    let n = points[0].len();
    (0..n)
        .map(|k| {
            let xs = points.iter().map(|p| p.probs()[k]);
            xs.clone().fold(f64::NEG_INFINITY, f64::max) - xs.fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn full_group_image() -> Result<Outcome> {
    let mut rng = rng_from_seed(RngSeed(104));
    let generic = DensityMatrix::new(sample_density(4, 4, &mut rng), vec![4])?;
    let d_generic = image_dimension(&generic, &GroupSpec::Full)?.dimension;
    let mixed = DensityMatrix::maximally_mixed(vec![4]);
    let center = spread(&image_sample(&mixed, &GroupSpec::Full, 1000, RngSeed(1))?.points);
    let graded = DensityMatrix::diagonal(&[0.4, 0.3, 0.2, 0.1], vec![4])?;
    let s = image_sample(&graded, &GroupSpec::Full, 10_000, RngSeed(2))?;
    let (lo, hi) = s.points.iter().flat_map(|p| p.probs().iter().copied()).fold((1.0f64, 0.0f64), |(l, h), x| (l.min(x), h.max(x)));
    let d_graded = image_dimension(&graded, &GroupSpec::Full)?.dimension;
    outcome(
        d_generic == 3 && center < 1e-10 && lo >= 0.1 - 1e-10 && hi <= 0.4 + 1e-10 && d_graded == 3,
        format!("generic dim {d_generic}, mixed spread {center:.1e}, diag(0.4, 0.3, 0.2, 0.1) coords in [{lo:.4}, {hi:.4}] with dim {d_graded}"),
    )
}

fn product_group_image() -> Result<Outcome> {
    let mut rng = rng_from_seed(RngSeed(105));
    let product = GroupSpec::Product { dims: vec![2, 2] };
    let a = random_pure_vector(2, &mut rng);
    let b = random_pure_vector(2, &mut rng);
    let psi: Vec<C64> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
    let factorized = pure_state(&psi, vec![2, 2]);
    let d_fact = image_dimension(&factorized, &product)?.dimension;
    let mut surface: f64 = 0.0;
    for p in &image_sample(&factorized, &product, 2000, RngSeed(3))?.points {
        surface = surface.max(factorized_surface_residual(p)?);
    }
    let c = FRAC_1_SQRT_2;
    let ent = schmidt_state(c, c);
    let d_ent = image_dimension(&ent, &product)?.dimension;
    let mut ratio: f64 = 0.0;
    for p in &image_sample(&ent, &product, 2000, RngSeed(4))?.points {
        ratio = ratio.max(entangled_ray_check(p, C64::new(c, 0.0), C64::new(c, 0.0))?);
    }
    let local = GroupSpec::Local { dims: vec![2, 2], factor: 0 };
    let mut werner = Vec::new();
    for q in [0.2, 0.5, 1.0] {
        werner.push(image_dimension(&DensityMatrix::werner(q)?, &local)?.dimension);
    }
    outcome(
        d_fact == 2 && surface < 1e-10 && d_ent == 1 && ratio < 1e-9 && werner.iter().all(|&d| d == 1),
        format!(
            "factorized dim {d_fact}, surface residual {surface:.1e}; entangled dim {d_ent}, ratio deviation {ratio:.1e}; Werner dims {werner:?}"
        ),
    )
}

fn channels() -> Result<Outcome> {
    let mut rng = rng_from_seed(RngSeed(106));
    let mut worst: f64 = 0.0;
    for kind in ChannelKind::ALL {
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let out = apply_kraus(&kind.channel(p)?, &kind.initial_state())?;
            for _ in 0..100 {
                let (theta, n) = (rng.random_range(0.0..TAU), random_axis(&mut rng));
                let (wp, wm) = channel_tomogram_closed_form(kind, p, theta, n)?;
                let t = unitary_tomogram(&out, &[axis_unitary(theta, n)?])?;
                worst = worst.max((t.value(0, 0) - wp).abs()).max((t.value(1, 0) - wm).abs());
            }
        }
    }
    let frames: Vec<(f64, [f64; 3])> = (0..10_000).map(|_| (rng.random_range(0.0..TAU), random_axis(&mut rng))).collect();
    let range = |kind, p: f64| -> Result<(f64, f64)> {
        let mut lo: f64 = 1.0;
        let mut hi: f64 = 0.0;
        for &(theta, n) in &frames {
            let w = channel_tomogram_closed_form(kind, p, theta, n)?.0;
            lo = lo.min(w);
            hi = hi.max(w);
        }
        Ok((lo, hi))
    };
    let point = |(lo, hi): (f64, f64)| (lo - 0.5).abs().max((hi - 0.5).abs());
    let dep_center = point(range(ChannelKind::Depolarizing, 0.75)?);
    let (seg_lo, seg_hi) = range(ChannelKind::Depolarizing, 1.0)?;
    let end_a = channel_tomogram_closed_form(ChannelKind::Depolarizing, 1.0, 0.0, [0.0, 0.0, 1.0])?;
    let end_b = channel_tomogram_closed_form(ChannelKind::Depolarizing, 1.0, PI, [1.0, 0.0, 0.0])?;
    let segment_ok = seg_lo >= 1.0 / 3.0 - 1e-12
        && seg_hi <= 2.0 / 3.0 + 1e-12
        && (end_a.0 - 1.0 / 3.0).abs() < 1e-12
        && (end_a.1 - 2.0 / 3.0).abs() < 1e-12
        && (end_b.0 - 2.0 / 3.0).abs() < 1e-12
        && (end_b.1 - 1.0 / 3.0).abs() < 1e-12;
    let phase_point = point(range(ChannelKind::PhaseDamping, 1.0)?);
    let amp_point = point(range(ChannelKind::AmplitudeDamping, 0.5)?);
    let (a_lo, a_hi) = range(ChannelKind::AmplitudeDamping, 1.0)?;
    let (p_lo, p_hi) = range(ChannelKind::AmplitudeDamping, 0.0)?;
    let ratio = (a_hi - a_lo) / (p_hi - p_lo);
    outcome(
        worst < 1e-10 && dep_center < 1e-12 && segment_ok && phase_point < 1e-12 && amp_point < 1e-12 && ratio >= 0.98,
        format!(
            "closed vs direct {worst:.1e} (tol 1e-10); depolarizing p=3/4 {dep_center:.1e} from center, p=1 segment [{seg_lo:.4}, {seg_hi:.4}]; phase p=1 {phase_point:.1e}, amplitude p=1/2 {amp_point:.1e} from center; amplitude p=1 spread ratio {ratio:.4}"
        ),
    )
}

fn entropy_minimum() -> Result<Outcome> {
    let mut rng = rng_from_seed(RngSeed(107));
    let mut min_gap = f64::INFINITY;
    let mut attain: f64 = 0.0;
    let mut seed = 0;
    for d in 2..=4 {
        for k in 0..20 {
            let rank = 1 + k % d;
            let rho = DensityMatrix::new(sample_density(d, rank, &mut rng), vec![d])?;
            for kind in [EntropyKind::Shannon, EntropyKind::Renyi { q: 0.5 }, EntropyKind::Renyi { q: 2.0 }] {
                seed += 1;
                let r = min_over_group(&rho, kind, 10_000, RngSeed(seed))?;
                let sampled_min = r.per_frame[1..].iter().copied().fold(f64::INFINITY, f64::min);
                min_gap = min_gap.min(sampled_min - r.min_value);
                attain = attain.max((frame_entropy(&rho, &r.argmin_frame, kind)? - r.min_value).abs());
            }
        }
    }
    outcome(
        min_gap > -1e-6 && attain < 1e-10,
        format!("min over Haar frames minus S: {min_gap:.2e} (must exceed -1e-6); eigenbasis gap {attain:.1e} (tol 1e-10)"),
    )
}

fn subadditivity() -> Result<Outcome> {
    let mut rng = rng_from_seed(RngSeed(108));
    let mut sa = f64::INFINITY;
    let mut ssa = f64::INFINITY;
    for _ in 0..1000 {
        let rank = rng.random_range(1..=4);
        let rho = DensityMatrix::new(sample_density(4, rank, &mut rng), vec![2, 2])?;
        sa = sa.min(subadditivity_check(&rho, &sample_haar_unitary(4, &mut rng))?.slack);
        let rank = rng.random_range(1..=8);
        let rho = DensityMatrix::new(sample_density(8, rank, &mut rng), vec![2, 2, 2])?;
        let r = strong_subadditivity_check(&rho, &sample_haar_unitary(8, &mut rng))?;
        ssa = ssa.min(r.rhs - r.lhs);
    }
    outcome(sa >= -1e-10 && ssa >= -1e-10, format!("min slack: subadditivity {sa:.3e}, strong subadditivity {ssa:.3e} (>= -1e-10)"))
}

fn peres() -> Result<Outcome> {
    let sep = peres_scan(&DensityMatrix::werner(0.2)?, 2000, RngSeed(5))?;
    let sep_ok = sep.max_violation <= 1e-10 && sep.witness.is_none() && sep.min_eigenvalue >= -1e-12;
    let c = FRAC_1_SQRT_2;
    let mut ent_ok = true;
    let mut oracle: f64 = 0.0;
    let mut found = Vec::new();
    for rho in [DensityMatrix::werner(1.0)?, schmidt_state(c, c)] {
        let r = peres_scan(&rho, 2000, RngSeed(6))?;
        ent_ok &= r.max_violation > 1e-8 && r.witness.is_some() && r.min_eigenvalue < 0.0;
        oracle = oracle.max((r.eigenbasis_violation - (r.trace_norm - 1.0)).abs());
        found.push(r.max_violation);
    }
    outcome(
        sep_ok && ent_ok && oracle < 1e-10,
        format!(
            "Werner q=0.2 violation {:.1e}, min PT eigenvalue {:.3}; violations found {:?}; eigenbasis vs trace norm {oracle:.1e}",
            sep.max_violation, sep.min_eigenvalue, found
        ),
    )
}

fn evolution() -> Result<Outcome> {
    let mut rng = rng_from_seed(RngSeed(109));
    let (mut shifted, mut relabeled): (f64, f64) = (0.0, 0.0);
    for k in 0..50 {
        let d = 2 + k % 3;
        let rho = DensityMatrix::new(sample_density(d, 1 + k % d, &mut rng), vec![d])?;
        let h = Hamiltonian::new(random_hermitian(d, &mut rng))?;
        let t = rng.random_range(-3.0..3.0);
        let us: Vec<CMatrix> = (0..d + 2).map(|_| sample_haar_unitary(d, &mut rng)).collect();
        let t0 = unitary_tomogram(&rho, &us)?;
        let rho_t = evolve_state(&rho, &h, t)?;
        shifted = shifted.max(evolve_tomogram(&t0, &h, t)?.max_abs_diff(&unitary_tomogram(&rho_t, &us)?));
        let moved = shift_frames(&t0, &h, t)?;
        let frames: Vec<CMatrix> = moved.frames().iter().filter_map(|f| f.unitary_matrix()).collect();
        relabeled = relabeled.max(unitary_tomogram(&rho_t, &frames)?.max_abs_diff(&moved));
    }
    outcome(
        shifted < 1e-10 && relabeled < 1e-10,
        format!("re-evaluated frames {shifted:.1e}, relabeled frames {relabeled:.1e} (tol 1e-10)"),
    )
}

fn propagator() -> Result<Outcome> {
    let mut rng = rng_from_seed(RngSeed(110));
    let (mut apply, mut compose): (f64, f64) = (0.0, 0.0);
    for j in spins(2) {
        let d = j.multiplicity();
        let grid = make_grid(j, DEFAULT_OVERSAMPLE)?;
        let mut chans = vec![random_channel(d, 3, &mut rng)?, random_channel(d, 2, &mut rng)?];
        if d == 2 {
            chans.extend(ChannelKind::ALL.iter().map(|k| k.channel(0.3)).collect::<Result<Vec<_>>>()?);
        }
        let props = chans.iter().map(|c| channel_propagator(c, &grid)).collect::<Result<Vec<_>>>()?;
        for (c, pi) in chans.iter().zip(&props) {
            let rho = DensityMatrix::new(sample_density(d, d, &mut rng), vec![d])?;
            let t0 = spin_tomogram(rho.matrix(), &grid.frames())?;
            apply = apply.max(pi.apply(&t0)?.max_abs_diff(&direct_output_tomogram(c, rho.matrix(), &grid)?));
        }
        for (i, c1) in chans.iter().enumerate() {
            let c2 = &chans[(i + 1) % chans.len()];
            let pi2 = &props[(i + 1) % chans.len()];
            let both = channel_propagator(&c1.then(c2)?, &grid)?;
            compose = compose.max(pi2.after(&props[i])?.max_abs_diff(&both));
        }
    }
    outcome(
        apply < 1e-8 && compose < 1e-7,
        format!("propagated vs direct tomogram {apply:.1e} (tol 1e-8), composition {compose:.1e} (tol 1e-7)"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 11] = [
        ("round-trip reconstruction", round_trip),
        ("star product and associativity", star_product),
        ("kernel trace form vs closed form", kernel_cross_form),
        ("full-group simplex image", full_group_image),
        ("product-group simplex image", product_group_image),
        ("qubit channel tomograms", channels),
        ("entropy minimum over frames", entropy_minimum),
        ("subadditivity and strong subadditivity", subadditivity),
        ("Peres scan", peres),
        ("tomogram evolution", evolution),
        ("channel propagator", propagator),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("{tag} [{:>2}] {name}: {detail} ({:.2} s)", i + 1, start.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria passed in {:.1} s", criteria.len() - failed, criteria.len(), total.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
