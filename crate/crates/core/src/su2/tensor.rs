use num_complex::Complex64;

use super::halfint::{check_projection, parity_sign, HalfInt};
use super::wigner::{big_d_unchecked, cg_unchecked, EulerAngles};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Spin operators `(Jx, Jy, Jz)` in the basis `m = j, j-1, ..., -j`.
pub fn spin_operators(j: HalfInt) -> (CMatrix, CMatrix, CMatrix) {
    let n = j.multiplicity();
    let jv = j.value();
    let mut jz = CMatrix::square_zeros(n);
    let mut jplus = CMatrix::square_zeros(n);
    for (i, m) in j.projections().enumerate() {
        let mv = m.value();
        jz[(i, i)] = Complex64::new(mv, 0.0);
        // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>; |m+1> sits at index i-1.
        if i > 0 {
            jplus[(i - 1, i)] = Complex64::new((jv * (jv + 1.0) - mv * (mv + 1.0)).sqrt(), 0.0);
        }
    }
    let jminus = jplus.adjoint();
    let jx = (&jplus + &jminus).scale_real(0.5);
    let jy = (&jplus - &jminus).scale(Complex64::new(0.0, -0.5));
    (jx, jy, jz)
}

/// Rotation operator `R(g)` with entries `D^j_{m'm}(Ω)`.
pub fn rotation_matrix(j: HalfInt, omega: EulerAngles) -> CMatrix {
    let n = j.multiplicity();
    let tj = j.twice();
    CMatrix::from_fn(n, n, |r, c| {
        big_d_unchecked(tj, j.projection_at(r).twice(), j.projection_at(c).twice(), omega)
    })
}

/// Irreducible tensor operator `T^{(j)}_{LM} = Σ (-1)^{j-m1} <j m2; j -m1 | L M> |j m2><j m1|`.
pub fn irreducible_tensor(j: HalfInt, l: HalfInt, m: HalfInt) -> Result<CMatrix> {
    if j.twice() < 0 {
        return Err(Error::Domain(format!("negative spin {j}")));
    }
    if !l.is_integer() || l.twice() < 0 || l.twice() > 2 * j.twice() {
        return Err(Error::Domain(format!("L = {l} outside 0..=2j for j = {j}")));
    }
    check_projection(l, m)?;
    Ok(tensor_unchecked(j, l.twice() / 2, m.twice() / 2))
}

pub(crate) fn tensor_unchecked(j: HalfInt, l: i32, big_m: i32) -> CMatrix {
    let n = j.multiplicity();
    let tj = j.twice();
    let mut t = CMatrix::square_zeros(n);
    for (r, m2) in j.projections().enumerate() {
        for (c, m1) in j.projections().enumerate() {
            // M = m2 - m1 is required for a non-zero coefficient.
            if m2.twice() - m1.twice() != 2 * big_m {
                continue;
            }
            let v = parity_sign(tj - m1.twice())
                * cg_unchecked(tj, m2.twice(), tj, -m1.twice(), 2 * l, 2 * big_m);
            t[(r, c)] = Complex64::new(v, 0.0);
        }
    }
    t
}

/// All `T_{LM}` for `L = 0..=2j`, `M = -L..=L`, in that order.
pub fn tensor_basis(j: HalfInt) -> Vec<((i32, i32), CMatrix)> {
    let lmax = j.twice();
    let mut out = Vec::with_capacity(j.multiplicity().pow(2));
    for l in 0..=lmax {
        for big_m in -l..=l {
            out.push(((l, big_m), tensor_unchecked(j, l, big_m)));
        }
    }
    out
}
