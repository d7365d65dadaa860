use super::matrix::{CMatrix, C64};

/// Traceless Hermitian generalized Gell-Mann matrices, orthonormal under
/// `Tr[A† B]`; `d² - 1` of them.
pub fn gell_mann_basis(d: usize) -> Vec<CMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(d * d - 1);
    for a in 0..d {
        for b in a + 1..d {
            let mut sym = CMatrix::square_zeros(d);
            sym[(a, b)] = C64::new(s, 0.0);
            sym[(b, a)] = C64::new(s, 0.0);
            out.push(sym);
            let mut anti = CMatrix::square_zeros(d);
            anti[(a, b)] = C64::new(0.0, -s);
            anti[(b, a)] = C64::new(0.0, s);
            out.push(anti);
        }
    }
    for l in 1..d {
        let norm = ((l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        for v in diag.iter_mut().take(l) {
            *v = 1.0 / norm;
        }
        diag[l] = -(l as f64) / norm;
        out.push(CMatrix::diag_real(&diag));
    }
    out
}

/// Orthonormal basis of all Hermitian `d x d` matrices: `1/√d` followed by
/// [`gell_mann_basis`].
pub fn hermitian_basis(d: usize) -> Vec<CMatrix> {
    let mut out = vec![CMatrix::identity(d).scale_real(1.0 / (d as f64).sqrt())];
    out.extend(gell_mann_basis(d));
    out
}
