//! Exact positive rationals, gcd-reduced, with the shifted product
//! `x ⋆ y = (x - 1)(y - 1) + 1`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PositiveRational {
    num: u64,
    den: u64,
}

impl PositiveRational {
    pub const ONE: PositiveRational = PositiveRational { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::Domain(format!(
                "{num}/{den} is not a positive rational"
            )));
        }
        let g = num.gcd(&den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn from_integer(n: u64) -> Result<Self> {
        Self::new(n, 1)
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn recip(&self) -> Self {
        Self {
            num: self.den,
            den: self.num,
        }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        // cross-cancel first so reduced inputs stay small
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let num = (self.num / g1).checked_mul(rhs.num / g2);
        let den = (self.den / g2).checked_mul(rhs.den / g1);
        match (num, den) {
            (Some(num), Some(den)) => Ok(Self { num, den }),
            _ => Err(Error::Overflow(format!("{self} * {rhs}"))),
        }
    }

    /// `x ⋆ y`, defined by `(x ⋆ y) - 1 = (x - 1)(y - 1)`. Fails when the
    /// result is not positive.
    pub fn star(&self, rhs: &Self) -> Result<Self> {
        let overflow = || Error::Overflow(format!("{self} ⋆ {rhs}"));
        let (a, b) = (self.num as i128, self.den as i128);
        let (c, d) = (rhs.num as i128, rhs.den as i128);
        // ((a - b)(c - d) + bd) / bd
        let bd = b.checked_mul(d).ok_or_else(overflow)?;
        let num = (a - b)
            .checked_mul(c - d)
            .and_then(|x| x.checked_add(bd))
            .ok_or_else(overflow)?;
        if num <= 0 {
            return Err(Error::Domain(format!(
                "{self} ⋆ {rhs} is not positive: (x - 1)(y - 1) <= -1"
            )));
        }
        let g = num.gcd(&bd);
        let (num, den) = (num / g, bd / g);
        match (u64::try_from(num), u64::try_from(den)) {
            (Ok(num), Ok(den)) => Ok(Self { num, den }),
            _ => Err(overflow()),
        }
    }
}

impl fmt::Display for PositiveRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for PositiveRational {
    type Err = Error;

    /// Accepts `"n"` or `"n/d"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("{s:?} is not a positive rational"));
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: u64 = n.parse().map_err(|_| bad())?;
        let d: u64 = d.parse().map_err(|_| bad())?;
        Self::new(n, d)
    }
}
