//! Star-product of spin symbols.
//!
//! The product of two symbols is `(f_A ⋆ f_B)(x) = Σ_{x1,x2} f_A(x1) f_B(x2) K(x1, x2, x)`
//! with `K(x1, x2, x) = Tr[D(x1) D(x2) U(x)]`, summed with quadrature weights.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::linalg::{CMatrix, DensityMatrix, C64, ZERO};
use crate::reconstruction::{make_grid, reconstruct_operator, QuadratureGrid, GROUP_VOLUME};
use crate::su2::{
    big_d_unchecked, cg_unchecked, check_projection, parity_sign, six_j_unchecked, three_j_unchecked, triangle,
    EulerAngles, HalfInt,
};
use crate::symbols::{dequantizer_u, quantizer_d, spin_tomogram, OutcomeSpace, Tomogram};

/// Oversampling of grids used for products of symbols.
pub const STAR_OVERSAMPLE: f64 = 2.0;
/// Largest spin (doubled) for which a full kernel table may be built.
pub const KERNEL_TABLE_MAX_TWICE_J: i32 = 3;
/// Largest number of table entries a [`StarKernel`] may allocate.
pub const KERNEL_TABLE_MAX_ENTRIES: usize = 1 << 24;

/// Point `(m, Ω)` of the spin symbol space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinPoint {
    pub m: HalfInt,
    pub omega: EulerAngles,
}

impl SpinPoint {
    pub fn new(m: HalfInt, omega: EulerAngles) -> Self {
        SpinPoint { m, omega }
    }
}

/// Grid for star products of spin-`j` symbols.
pub fn star_grid(j: HalfInt) -> Result<QuadratureGrid> {
    make_grid(j, STAR_OVERSAMPLE)
}

/// `Tr[D(x2) D(x1) U(x)]`.
pub fn kernel_trace_form(j: HalfInt, x2: SpinPoint, x1: SpinPoint, x: SpinPoint) -> Result<C64> {
    let d2 = quantizer_d(j, x2.m, x2.omega)?;
    let d1 = quantizer_d(j, x1.m, x1.omega)?;
    let u = dequantizer_u(j, x.m, x.omega)?;
    Ok(d2.matmul(&d1).trace_product(&u))
}

/// The same kernel as a triple sum over `L, L1, L2` of 3j and 6j symbols and
/// Wigner functions.
pub fn kernel_closed_form(j: HalfInt, x2: SpinPoint, x1: SpinPoint, x: SpinPoint) -> Result<C64> {
    for p in [x2, x1, x] {
        check_projection(j, p.m)?;
    }
    Ok(closed_form_sum(j, x2, x1, x, false))
}

/// Evaluates the 6j triple sum. With `reversed` every term carries the extra
/// sign `(-1)^{L+L1+L2}`, which is the kernel of the opposite operator order
/// `Tr[D(x1) D(x2) U(x)]`.
pub(crate) fn closed_form_sum(j: HalfInt, x2: SpinPoint, x1: SpinPoint, x: SpinPoint, reversed: bool) -> C64 {
    let tj = j.twice();
    let (tm, tm1, tm2) = (x.m.twice(), x1.m.twice(), x2.m.twice());
    let cg0 = |m: i32, l: i32| cg_unchecked(tj, m, tj, -m, 2 * l, 0);
    let mut total = ZERO;
    for l in 0..=tj {
        let c = cg0(tm, l);
        if c == 0.0 {
            continue;
        }
        for l1 in 0..=tj {
            let c1 = cg0(tm1, l1);
            if c1 == 0.0 {
                continue;
            }
            for l2 in 0..=tj {
                let c2 = cg0(tm2, l2);
                if !triangle(HalfInt::int(l1), HalfInt::int(l2), HalfInt::int(l)) {
                    continue;
                }
                let six = six_j_unchecked(2 * l1, 2 * l2, 2 * l, tj, tj, tj);
                if c2 == 0.0 || six == 0.0 {
                    continue;
                }
                let (f, f1, f2) = (f64::from(2 * l + 1), f64::from(2 * l1 + 1), f64::from(2 * l2 + 1));
                let mut pre = f1 * f2 / (64.0 * PI.powi(4)) * c * c1 * c2 * (f * f1 * f2).sqrt() * six;
                if reversed {
                    pre *= parity_sign(2 * (l + l1 + l2));
                }
                let mut inner = ZERO;
                for big_m in -l..=l {
                    let d = big_d_unchecked(2 * l, 0, -2 * big_m, x.omega);
                    for m1 in -l1..=l1 {
                        let m2 = -big_m - m1;
                        if m2.abs() > l2 {
                            continue;
                        }
                        let three = three_j_unchecked(2 * l1, 2 * l2, 2 * l, 2 * m1, 2 * m2, 2 * big_m);
                        if three == 0.0 {
                            continue;
                        }
                        let d1 = big_d_unchecked(2 * l1, 0, -2 * m1, x1.omega);
                        let d2 = big_d_unchecked(2 * l2, 0, -2 * m2, x2.omega);
                        inner += d * d1 * d2 * three;
                    }
                }
                total += inner * pre;
            }
        }
    }
    total * parity_sign(tj - tm - tm1 - tm2)
}

/// Kernel values on all triples of grid points, `K[x2][x1][x]` with
/// `x = node * (2j+1) + m_index`. Only built for `j <= 3/2`.
#[derive(Clone, Debug)]
pub struct StarKernel {
    j: HalfInt,
    grid: QuadratureGrid,
    size: usize,
    values: Vec<C64>,
}

impl StarKernel {
    pub fn build(grid: &QuadratureGrid) -> Result<Self> {
        let j = grid.j();
        if j.twice() > KERNEL_TABLE_MAX_TWICE_J {
            return domain(format!("kernel tables are limited to j <= 3/2, got j = {j}"));
        }
        let size = grid.len() * j.multiplicity();
        if size.pow(3) > KERNEL_TABLE_MAX_ENTRIES {
            return domain(format!("kernel table of {size}^3 entries is too large; use a coarser grid"));
        }
        let points = grid_points(grid);
        let ds: Vec<CMatrix> = points.iter().map(|p| quantizer_d(j, p.m, p.omega).expect("valid m")).collect();
        let us: Vec<CMatrix> = points.iter().map(|p| dequantizer_u(j, p.m, p.omega).expect("valid m")).collect();
        let values: Vec<C64> = (0..size)
            .into_par_iter()
            .flat_map_iter(|x2| {
                let (ds, us) = (&ds, &us);
                (0..size).flat_map(move |x1| {
                    let prod = ds[x2].matmul(&ds[x1]);
                    us.iter().map(move |u| prod.trace_product(u)).collect::<Vec<_>>()
                })
            })
            .collect();
        Ok(StarKernel { j, grid: grid.clone(), size, values })
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    /// Number of grid points `x`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, x2: usize, x1: usize, x: usize) -> C64 {
        self.values[(x2 * self.size + x1) * self.size + x]
    }

    /// `f_A ⋆ f_B` by the explicit double quadrature sum over the table.
    pub fn compose(&self, fa: &Tomogram, fb: &Tomogram) -> Result<Tomogram> {
        check_on_grid(fa, &self.grid)?;
        check_on_grid(fb, &self.grid)?;
        let (va, vb) = (fa.symbol_vector(), fb.symbol_vector());
        let n = self.j.multiplicity();
        let w: Vec<f64> = (0..self.size).map(|x| self.grid.node(x / n).weight).collect();
        let out: Vec<C64> = (0..self.size)
            .into_par_iter()
            .map(|x| {
                let mut acc = ZERO;
                for x2 in 0..self.size {
                    let a = va[x2] * w[x2];
                    if a == ZERO {
                        continue;
                    }
                    for x1 in 0..self.size {
                        acc += a * vb[x1] * w[x1] * self.get(x2, x1, x);
                    }
                }
                acc
            })
            .collect();
        Tomogram::from_symbol_vector(fa.space().clone(), fa.frames().to_vec(), &out)
    }
}

fn grid_points(grid: &QuadratureGrid) -> Vec<SpinPoint> {
    let j = grid.j();
    grid.nodes().flat_map(|n| j.projections().map(move |m| SpinPoint::new(m, n.omega))).collect()
}

fn check_on_grid(t: &Tomogram, grid: &QuadratureGrid) -> Result<()> {
    if t.space() != &(OutcomeSpace::Spin { j: grid.j() }) {
        return domain(format!("symbol does not belong to spin {}", grid.j()));
    }
    let frames: Option<Vec<_>> = t.frames().iter().map(|f| f.euler()).collect();
    match frames {
        Some(f) if grid.matches_frames(&f) => Ok(()),
        _ => domain("symbol frames do not coincide with the quadrature nodes"),
    }
}

/// `f_A ⋆ f_B` on the nodes of `grid`.
///
/// The double sum `Σ_{x1,x2} f_A(x1) f_B(x2) Tr[D(x1) D(x2) U(x)]` factorizes
/// into `Tr[(Σ f_A D)(Σ f_B D) U(x)]`, which is evaluated in that order.
pub fn star_compose(fa: &Tomogram, fb: &Tomogram, grid: &QuadratureGrid) -> Result<Tomogram> {
    check_on_grid(fa, grid)?;
    check_on_grid(fb, grid)?;
    let a = reconstruct_operator(fa, grid)?;
    let b = reconstruct_operator(fb, grid)?;
    spin_tomogram(&a.matmul(&b), &grid.frames())
}

/// `f_1 ⋆ f_2 ⋆ ... ⋆ f_k`, grouped from the left.
pub fn star_compose_all(fs: &[&Tomogram], grid: &QuadratureGrid) -> Result<Tomogram> {
    let Some((first, rest)) = fs.split_first() else {
        return domain("need at least one symbol");
    };
    check_on_grid(first, grid)?;
    rest.iter().try_fold((*first).clone(), |acc, f| star_compose(&acc, f, grid))
}

/// `Tr A = Σ_x w_x f(x) Tr[D(x)]`, with `Tr[D(x)] = 1/(8π²)`.
pub fn trace_pairing(f: &Tomogram, grid: &QuadratureGrid) -> Result<C64> {
    check_on_grid(f, grid)?;
    let n = f.n_outcomes();
    let total: C64 = (0..f.n_frames())
        .map(|k| {
            let w = grid.node(k).weight;
            (0..n).map(|o| f.observable_symbol(o, k)).sum::<C64>() * w
        })
        .sum();
    Ok(total / GROUP_VOLUME)
}

/// `Tr ρ^N` from the `N`-fold star power of the symbol of `ρ`.
pub fn trace_power(rho: &DensityMatrix, n: u32, grid: &QuadratureGrid) -> Result<f64> {
    if n == 0 {
        return domain("trace power needs N >= 1");
    }
    if rho.dim() != grid.j().multiplicity() {
        return domain(format!("state of dimension {} on a spin-{} grid", rho.dim(), grid.j()));
    }
    let f = spin_tomogram(rho.matrix(), &grid.frames())?;
    let mut power = f.clone();
    for _ in 1..n {
        power = star_compose(&power, &f, grid)?;
    }
    Ok(trace_pairing(&power, grid)?.re)
}
