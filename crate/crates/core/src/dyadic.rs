//! Exact rationals whose denominator is a power of two.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// `numerator / 2^exp2`, always kept in canonical form: the numerator is odd,
/// or zero with `exp2 == 0`. Canonical form makes derived equality value
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigInt,
    exp2: u64,
}

impl Dyadic {
    pub fn new(numerator: impl Into<BigInt>, exp2: u64) -> Self {
        let mut d = Dyadic {
            numerator: numerator.into(),
            exp2,
        };
        d.canonicalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic::new(0, 0)
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exp2(&self) -> u64 {
        self.exp2
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.numerator.is_negative()
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            numerator: self.numerator.abs(),
            exp2: self.exp2,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.exp2 == 0
    }

    /// The integer value, if this dyadic is one.
    pub fn to_integer(&self) -> Option<&BigInt> {
        self.is_integer().then_some(&self.numerator)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), BigInt::one() << self.exp2)
    }

    /// Numerator rescaled to denominator `2^exp2`. Panics if `exp2` is
    /// smaller than the canonical exponent.
    pub fn numerator_over(&self, exp2: u64) -> BigInt {
        assert!(exp2 >= self.exp2, "cannot express {self} over 2^{exp2}");
        &self.numerator << (exp2 - self.exp2)
    }

    /// Multiply by `3^pow3 / 2^pow2`.
    pub fn scale(&self, pow3: u64, pow2: u64) -> Dyadic {
        let factor = BigUint::from(3u32).pow(pow3 as u32);
        Dyadic::new(&self.numerator * BigInt::from(factor), self.exp2 + pow2)
    }

    fn canonicalize(&mut self) {
        if self.numerator.is_zero() {
            self.exp2 = 0;
            return;
        }
        let tz = self.numerator.trailing_zeros().unwrap_or(0);
        let shift = tz.min(self.exp2);
        if shift > 0 {
            self.numerator >>= shift;
            self.exp2 -= shift;
        }
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp2.max(rhs.exp2);
        Dyadic::new(self.numerator_over(e) + rhs.numerator_over(e), e)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;

    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp2.max(rhs.exp2);
        Dyadic::new(self.numerator_over(e) - rhs.numerator_over(e), e)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;

    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;

    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.numerator * &rhs.numerator, self.exp2 + rhs.exp2)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;

    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        Dyadic {
            numerator: -self.numerator,
            exp2: self.exp2,
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp2.max(other.exp2);
        self.numerator_over(e).cmp(&other.numerator_over(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl From<BigUint> for Dyadic {
    fn from(v: BigUint) -> Self {
        Dyadic::integer(BigInt::from_biguint(Sign::Plus, v))
    }
}

/// Formats as `num/2^e`; integers print without the `/2^0` suffix.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp2 == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exp2)
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `num/2^e`, `num/D` with `D` a power of two, or a bare integer.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::ParseDyadic(s.to_string());
        let t = s.trim();
        let Some((num, den)) = t.split_once('/') else {
            return Ok(Dyadic::integer(t.parse::<BigInt>().map_err(|_| bad())?));
        };
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den = den.trim();
        let exp2 = if let Some(e) = den.strip_prefix("2^") {
            e.parse::<u64>().map_err(|_| bad())?
        } else {
            let d: BigUint = den.parse().map_err(|_| bad())?;
            if d.is_zero() || d.count_ones() != 1 {
                return Err(bad());
            }
            d.trailing_zeros().unwrap_or(0)
        };
        Ok(Dyadic::new(num, exp2))
    }
}

#[derive(Serialize, Deserialize)]
struct DyadicJson {
    num: String,
    exp2: u64,
}

/// JSON form `{"num": "<decimal>", "exp2": e}`; the numerator is a string so
/// arbitrarily large values survive any JSON reader.
impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DyadicJson {
            num: self.numerator.to_string(),
            exp2: self.exp2,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = DyadicJson::deserialize(d)?;
        let num: BigInt = raw.num.parse().map_err(serde::de::Error::custom)?;
        Ok(Dyadic::new(num, raw.exp2))
    }
}
