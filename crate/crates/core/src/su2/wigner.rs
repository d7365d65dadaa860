//! Wigner rotation functions and angular-momentum coupling coefficients.
//!
//! All factorial ratios go through a shared log-factorial table. Phases follow
//! the Condon–Shortley convention; rotations are `R = e^{-iαJz} e^{-iβJy} e^{-iγJz}`
//! and `D^j_{m'm}(α,β,γ) = <j m'| R |j m>`.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::halfint::{check_projection, parity_sign, triangle, HalfInt};
use crate::error::{Error, Result};

/// Size of the log-factorial table. Covers `j` up to ~100 in the 6j sums.
const LOG_FACT_LEN: usize = 512;

fn log_fact_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0.0; LOG_FACT_LEN];
        for n in 1..LOG_FACT_LEN {
            t[n] = t[n - 1] + (n as f64).ln();
        }
        t
    })
}

/// `ln(n!)` for a non-negative integer given as a doubled half-integer.
#[inline]
fn lf(twice: i32) -> f64 {
    debug_assert!(twice >= 0 && twice % 2 == 0, "factorial of {twice}/2");
    log_fact_table()[(twice / 2) as usize]
}

/// `ln(n!)`.
pub fn log_factorial(n: usize) -> f64 {
    log_fact_table()[n]
}

/// Euler angles in the z-y-z convention.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub const IDENTITY: EulerAngles = EulerAngles { alpha: 0.0, beta: 0.0, gamma: 0.0 };

    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        EulerAngles { alpha, beta, gamma }
    }

    /// Maps to `β ∈ [0, π]`, `α, γ ∈ [0, 2π)` describing the same SO(3) rotation.
    pub fn normalized(self) -> Self {
        use std::f64::consts::{PI, TAU};
        let mut beta = self.beta.rem_euclid(TAU);
        let (mut alpha, mut gamma) = (self.alpha, self.gamma);
        if beta > PI {
            beta = TAU - beta;
            alpha += PI;
            gamma += PI;
        }
        EulerAngles { alpha: alpha.rem_euclid(TAU), beta, gamma: gamma.rem_euclid(TAU) }
    }
}

/// Wigner small-d function `d^j_{m1 m2}(β)` by direct summation.
pub fn wigner_small_d(j: HalfInt, m1: HalfInt, m2: HalfInt, beta: f64) -> Result<f64> {
    check_projection(j, m1)?;
    check_projection(j, m2)?;
    Ok(small_d_unchecked(j.twice(), m1.twice(), m2.twice(), beta))
}

/// Sum over `s` with all arguments as doubled values.
pub(crate) fn small_d_unchecked(j: i32, mp: i32, m: i32, beta: f64) -> f64 {
    let (c, s) = ((beta / 2.0).cos(), -(beta / 2.0).sin());
    let prefactor = 0.5 * (lf(j + m) + lf(j - m) + lf(j + mp) + lf(j - mp));
    // s ranges over integers with all factorial arguments non-negative.
    let s_min = 0.max(m - mp) / 2;
    let s_max = ((j - mp).min(j + m)) / 2;
    let mut sum = 0.0;
    for k in s_min..=s_max {
        let k2 = 2 * k;
        let denom = lf(k2) + lf(j - mp - k2) + lf(j + m - k2) + lf(mp - m + k2);
        let cos_pow = (2 * j + m - mp - 2 * k2) / 2;
        let sin_pow = (mp - m + 2 * k2) / 2;
        let mag = (prefactor - denom).exp() * c.powi(cos_pow) * s.powi(sin_pow);
        if k % 2 == 0 {
            sum += mag;
        } else {
            sum -= mag;
        }
    }
    sum
}

/// Wigner D-function `e^{-i m1 α} d^j_{m1 m2}(β) e^{-i m2 γ}`.
pub fn wigner_big_d(j: HalfInt, m1: HalfInt, m2: HalfInt, omega: EulerAngles) -> Result<Complex64> {
    let d = wigner_small_d(j, m1, m2, omega.beta)?;
    let phase = -(m1.value() * omega.alpha + m2.value() * omega.gamma);
    Ok(Complex64::from_polar(d, phase))
}

pub(crate) fn big_d_unchecked(j: i32, mp: i32, m: i32, omega: EulerAngles) -> Complex64 {
    let d = small_d_unchecked(j, mp, m, omega.beta);
    let phase = -(f64::from(mp) * omega.alpha + f64::from(m) * omega.gamma) / 2.0;
    Complex64::from_polar(d, phase)
}

fn check_spin(j: HalfInt) -> Result<()> {
    if j.twice() < 0 {
        Err(Error::Domain(format!("negative spin {j}")))
    } else {
        Ok(())
    }
}

fn check_pair(j: HalfInt, m: HalfInt) -> Result<()> {
    check_spin(j)?;
    if (j.twice() - m.twice()) % 2 != 0 {
        return Err(Error::Domain(format!("j = {j} and m = {m} differ by a half-integer")));
    }
    Ok(())
}

/// `ln Δ(a b c)` for a valid triangle, doubled arguments.
fn log_triangle(a: i32, b: i32, c: i32) -> f64 {
    0.5 * (lf(a + b - c) + lf(a - b + c) + lf(-a + b + c) - lf(a + b + c + 2))
}

/// Wigner 3j symbol via Racah's single sum. Selection-rule violations give 0.
pub fn wigner_3j(j1: HalfInt, j2: HalfInt, j3: HalfInt, m1: HalfInt, m2: HalfInt, m3: HalfInt) -> Result<f64> {
    check_pair(j1, m1)?;
    check_pair(j2, m2)?;
    check_pair(j3, m3)?;
    if !triangle(j1, j2, j3) || (m1 + m2 + m3).twice() != 0 {
        return Ok(0.0);
    }
    if m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
        return Ok(0.0);
    }
    Ok(three_j_unchecked(
        j1.twice(),
        j2.twice(),
        j3.twice(),
        m1.twice(),
        m2.twice(),
        m3.twice(),
    ))
}

pub(crate) fn three_j_unchecked(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> f64 {
    let log_pre = log_triangle(j1, j2, j3)
        + 0.5 * (lf(j1 + m1) + lf(j1 - m1) + lf(j2 + m2) + lf(j2 - m2) + lf(j3 + m3) + lf(j3 - m3));
    // k runs over integers making every factorial argument non-negative.
    let k_min = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let k_max = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    let mut sum = 0.0;
    let mut k = k_min;
    while k <= k_max {
        let denom = lf(k)
            + lf(j3 - j2 + k + m1)
            + lf(j3 - j1 + k - m2)
            + lf(j1 + j2 - j3 - k)
            + lf(j1 - k - m1)
            + lf(j2 - k + m2);
        let term = (log_pre - denom).exp();
        sum += parity_sign(k) * term;
        k += 2;
    }
    parity_sign(j1 - j2 - m3) * sum
}

/// Clebsch–Gordan coefficient `<j1 m1; j2 m2 | J M>` (Condon–Shortley).
pub fn clebsch_gordan(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> Result<f64> {
    check_pair(j1, m1)?;
    check_pair(j2, m2)?;
    check_pair(j, m)?;
    if (m1 + m2) != m || !triangle(j1, j2, j) {
        return Ok(0.0);
    }
    if m1.abs() > j1 || m2.abs() > j2 || m.abs() > j {
        return Ok(0.0);
    }
    Ok(cg_unchecked(j1.twice(), m1.twice(), j2.twice(), m2.twice(), j.twice(), m.twice()))
}

pub(crate) fn cg_unchecked(j1: i32, m1: i32, j2: i32, m2: i32, j: i32, m: i32) -> f64 {
    parity_sign(j1 - j2 + m)
        * f64::from(j + 1).sqrt()
        * three_j_unchecked(j1, j2, j, m1, m2, -m)
}

/// Wigner 6j symbol `{j1 j2 j3; j4 j5 j6}` via Racah's sum. Triangle violations give 0.
pub fn wigner_6j(j1: HalfInt, j2: HalfInt, j3: HalfInt, j4: HalfInt, j5: HalfInt, j6: HalfInt) -> Result<f64> {
    for j in [j1, j2, j3, j4, j5, j6] {
        check_spin(j)?;
    }
    if !(triangle(j1, j2, j3) && triangle(j1, j5, j6) && triangle(j4, j2, j6) && triangle(j4, j5, j3)) {
        return Ok(0.0);
    }
    Ok(six_j_unchecked(j1.twice(), j2.twice(), j3.twice(), j4.twice(), j5.twice(), j6.twice()))
}

pub(crate) fn six_j_unchecked(j1: i32, j2: i32, j3: i32, j4: i32, j5: i32, j6: i32) -> f64 {
    let a1 = j1 + j2 + j3;
    let a2 = j1 + j5 + j6;
    let a3 = j4 + j2 + j6;
    let a4 = j4 + j5 + j3;
    let b1 = j1 + j2 + j4 + j5;
    let b2 = j2 + j3 + j5 + j6;
    let b3 = j3 + j1 + j6 + j4;
    let log_pre = log_triangle(j1, j2, j3)
        + log_triangle(j1, j5, j6)
        + log_triangle(j4, j2, j6)
        + log_triangle(j4, j5, j3);
    let t_min = a1.max(a2).max(a3).max(a4);
    let t_max = b1.min(b2).min(b3);
    let mut sum = 0.0;
    let mut t = t_min;
    while t <= t_max {
        let log_term = lf(t + 2)
            - (lf(t - a1) + lf(t - a2) + lf(t - a3) + lf(t - a4) + lf(b1 - t) + lf(b2 - t) + lf(b3 - t));
        sum += parity_sign(t) * (log_pre + log_term).exp();
        t += 2;
    }
    sum
}
