//! Values in `[0, +inf]` with the customary arithmetic.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// An element of `[0, +inf]`. `0 * inf` is undefined and raises
/// [`Error::UndefinedProduct`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VPValue {
    Finite(Rational),
    Infinite,
}

impl VPValue {
    pub fn zero() -> Self {
        VPValue::Finite(Rational::zero())
    }

    pub fn one() -> Self {
        VPValue::Finite(Rational::one())
    }

    /// `a / b` for `a, b >= 0`, with `a / 0 = inf` for `a > 0`. `0 / 0` is
    /// rejected.
    pub fn ratio(a: &Rational, b: &Rational) -> Result<Self> {
        if a.is_negative() || b.is_negative() {
            return Err(Error::InvalidInput(format!("negative ratio {a} / {b}")));
        }
        if b.is_zero() {
            if a.is_zero() {
                return Err(Error::InvalidInput("0 / 0".into()));
            }
            return Ok(VPValue::Infinite);
        }
        Ok(VPValue::Finite(a / b))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, VPValue::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, VPValue::Finite(x) if x.is_zero())
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            VPValue::Finite(x) => Some(x),
            VPValue::Infinite => None,
        }
    }

    pub fn add(&self, other: &VPValue) -> VPValue {
        match (self, other) {
            (VPValue::Finite(a), VPValue::Finite(b)) => VPValue::Finite(a + b),
            _ => VPValue::Infinite,
        }
    }

    pub fn mul(&self, other: &VPValue) -> Result<VPValue> {
        match (self, other) {
            (VPValue::Finite(a), VPValue::Finite(b)) => Ok(VPValue::Finite(a * b)),
            (x, VPValue::Infinite) | (VPValue::Infinite, x) if x.is_zero() => Err(Error::UndefinedProduct),
            _ => Ok(VPValue::Infinite),
        }
    }

    /// `t * self` for a rational `t >= 0`.
    pub fn scale(&self, t: &Rational) -> Result<VPValue> {
        self.mul(&VPValue::Finite(t.clone()))
    }

    /// `1 / x` with `1/0 = inf` and `1/inf = 0`.
    pub fn recip(&self) -> VPValue {
        match self {
            VPValue::Infinite => VPValue::zero(),
            VPValue::Finite(x) if x.is_zero() => VPValue::Infinite,
            VPValue::Finite(x) => VPValue::Finite(x.recip()),
        }
    }
}

impl PartialOrd for VPValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VPValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (VPValue::Finite(a), VPValue::Finite(b)) => a.cmp(b),
            (VPValue::Finite(_), VPValue::Infinite) => Ordering::Less,
            (VPValue::Infinite, VPValue::Finite(_)) => Ordering::Greater,
            (VPValue::Infinite, VPValue::Infinite) => Ordering::Equal,
        }
    }
}

impl From<Rational> for VPValue {
    fn from(x: Rational) -> Self {
        VPValue::Finite(x)
    }
}

impl fmt::Display for VPValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VPValue::Finite(x) => f.write_str(&format_rational(x)),
            VPValue::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for VPValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" => Ok(VPValue::Infinite),
            t => Ok(VPValue::Finite(parse_rational(t)?)),
        }
    }
}

impl Serialize for VPValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for VPValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn extended_arithmetic() {
        let inf = VPValue::Infinite;
        let two = VPValue::from(int(2));
        assert_eq!(two.add(&inf), inf);
        assert_eq!(two.mul(&inf).unwrap(), inf);
        assert_eq!(VPValue::zero().mul(&inf), Err(Error::UndefinedProduct));
        assert_eq!(VPValue::zero().recip(), inf);
        assert_eq!(inf.recip(), VPValue::zero());
        assert!(two < inf);
        assert_eq!(VPValue::ratio(&int(1), &int(0)).unwrap(), inf);
        assert_eq!(VPValue::ratio(&int(1), &int(3)).unwrap(), VPValue::from(rat(1, 3)));
        assert!(VPValue::ratio(&int(0), &int(0)).is_err());
        assert_eq!("inf".parse::<VPValue>().unwrap(), inf);
        assert_eq!("3/6".parse::<VPValue>().unwrap(), VPValue::from(rat(1, 2)));
    }
}
