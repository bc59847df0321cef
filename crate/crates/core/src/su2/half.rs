use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A signed half-integer stored as twice its value.
///
/// Used for spins `j`, tensor ranks `μ` (non-negative) and magnetic numbers `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInteger {
    twice: i32,
}

impl HalfInteger {
    pub const ZERO: Self = Self { twice: 0 };
    pub const HALF: Self = Self { twice: 1 };
    pub const ONE: Self = Self { twice: 2 };

    pub const fn from_twice(twice: i32) -> Self {
        Self { twice }
    }

    pub const fn from_int(n: i32) -> Self {
        Self { twice: 2 * n }
    }

    pub fn from_f64(x: f64) -> Result<Self> {
        let t = 2.0 * x;
        if !t.is_finite() || (t - t.round()).abs() > 1e-12 || t.abs() > i32::MAX as f64 {
            return Err(Error::InvalidHalfInteger(format!("{x} is not a half-integer")));
        }
        Ok(Self { twice: t.round() as i32 })
    }

    /// Non-negative half-integer, as required for spins and ranks.
    pub fn spin(twice: i32) -> Result<Self> {
        if twice < 0 {
            return Err(Error::InvalidHalfInteger(format!("spin {twice}/2 is negative")));
        }
        Ok(Self { twice })
    }

    pub const fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// `2j + 1` for a spin `j`.
    pub fn dim(self) -> usize {
        debug_assert!(self.twice >= 0);
        (self.twice + 1) as usize
    }

    /// `j, j−1, ..., −j`.
    pub fn projections(self) -> impl Iterator<Item = HalfInteger> {
        let t = self.twice;
        (0..=t).map(move |i| HalfInteger { twice: t - 2 * i })
    }

    /// `j(j+1)`.
    pub fn casimir(self) -> f64 {
        let j = self.value();
        j * (j + 1.0)
    }
}

impl std::ops::Add for HalfInteger {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { twice: self.twice + o.twice }
    }
}

impl std::ops::Sub for HalfInteger {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { twice: self.twice - o.twice }
    }
}

impl std::ops::Neg for HalfInteger {
    type Output = Self;
    fn neg(self) -> Self {
        Self { twice: -self.twice }
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInteger {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidHalfInteger(format!("cannot parse {s:?}"));
        match s.split_once('/') {
            Some((num, "2")) => Ok(Self {
                twice: num.trim().parse().map_err(|_| bad())?,
            }),
            Some(_) => Err(bad()),
            None => {
                let n: i32 = s.parse().map_err(|_| bad())?;
                Ok(Self::from_int(n))
            }
        }
    }
}

/// Integer-or-half-integer exponent sign `(−1)^x` for integer `x` given as twice-value.
pub(crate) fn parity_sign(twice: i32) -> f64 {
    debug_assert!(twice % 2 == 0, "(-1)^x needs integer x");
    if (twice / 2).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}
