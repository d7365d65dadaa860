use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A half-integer `n/2`, stored exactly as its doubled value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Integer value, if this is an integer.
    pub fn as_int(self) -> Option<i32> {
        self.is_integer().then_some(self.0 / 2)
    }

    /// `2j + 1` for a spin `j`.
    pub fn multiplicity(self) -> usize {
        debug_assert!(self.0 >= 0);
        (self.0 + 1) as usize
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// Spin for a given Hilbert-space dimension `2j + 1`.
    pub fn spin_for_dim(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        Ok(HalfInt(dim as i32 - 1))
    }

    /// Magnetic numbers `j, j-1, ..., -j`.
    pub fn projections(self) -> impl DoubleEndedIterator<Item = HalfInt> + ExactSizeIterator {
        let j = self.0;
        (0..(j + 1).max(0)).map(move |k| HalfInt(j - 2 * k))
    }

    /// Position of `m` in the ordering `j, j-1, ..., -j`.
    pub fn index_of(self, m: HalfInt) -> usize {
        ((self.0 - m.0) / 2) as usize
    }

    /// `m` at position `idx` of the ordering `j, j-1, ..., -j`.
    pub fn projection_at(self, idx: usize) -> HalfInt {
        HalfInt(self.0 - 2 * idx as i32)
    }
}

/// `(-1)^k` for an integer-valued half-integer expression given as its doubled value.
pub(crate) fn parity_sign(twice: i32) -> f64 {
    debug_assert!(twice % 2 == 0, "phase exponent must be an integer");
    if (twice / 2).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Checks that `m` is a valid projection of spin `j`.
pub(crate) fn check_projection(j: HalfInt, m: HalfInt) -> Result<()> {
    if j.0 < 0 {
        return Err(Error::Domain(format!("negative spin {j}")));
    }
    if m.0.abs() > j.0 || (j.0 - m.0) % 2 != 0 {
        return Err(Error::Domain(format!("m = {m} is not a projection of j = {j}")));
    }
    Ok(())
}

/// `|a - b| <= c <= a + b` with `a + b + c` integer.
pub fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    a.0 >= 0
        && b.0 >= 0
        && c.0 >= 0
        && c.0 >= (a.0 - b.0).abs()
        && c.0 <= a.0 + b.0
        && (a.0 + b.0 + c.0) % 2 == 0
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl From<i32> for HalfInt {
    fn from(n: i32) -> Self {
        HalfInt::int(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Parses `"3/2"`, `"1"`, `"0.5"` or `"-1/2"`.
impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Domain(format!("cannot parse half-integer from {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "2" => Ok(HalfInt(num)),
                "1" => Ok(HalfInt(2 * num)),
                _ => Err(bad()),
            }
        } else if let Ok(n) = s.parse::<i32>() {
            Ok(HalfInt(2 * n))
        } else {
            let x: f64 = s.parse().map_err(|_| bad())?;
            let twice = (2.0 * x).round();
            if (2.0 * x - twice).abs() > 1e-12 {
                return Err(bad());
            }
            Ok(HalfInt(twice as i32))
        }
    }
}
