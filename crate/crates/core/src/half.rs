use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error};

/// An integer or half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const HALF: HalfInt = HalfInt(1);
    pub const ZERO: HalfInt = HalfInt(0);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_doubled(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    /// Rounds `x` to the nearest half-integer; fails if `x` is not one.
    pub fn from_f64(x: f64) -> Result<Self, Error> {
        let d = (2.0 * x).round();
        if !x.is_finite() || (2.0 * x - d).abs() > 1e-9 {
            return Err(invalid("half-integer", format!("{x} is not a multiple of 1/2")));
        }
        Ok(HalfInt(d as i64))
    }

    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub const fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// Integer value of `self - other` when it is integral.
    pub fn int_diff(self, other: HalfInt) -> Option<i64> {
        let d = self.0 - other.0;
        (d % 2 == 0).then_some(d / 2)
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
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

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `3`, `-2.5` or `5/2`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num
                .trim()
                .parse()
                .map_err(|_| invalid("half-integer", format!("cannot parse `{s}`")))?;
            return match den.trim() {
                "2" => Ok(HalfInt(num)),
                "1" => Ok(HalfInt(2 * num)),
                _ => Err(invalid("half-integer", format!("`{s}` has a denominator other than 1 or 2"))),
            };
        }
        let x: f64 = s
            .parse()
            .map_err(|_| invalid("half-integer", format!("cannot parse `{s}`")))?;
        HalfInt::from_f64(x)
    }
}
