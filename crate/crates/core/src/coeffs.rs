//! The coefficient decomposition `T^n(P) = A_n(P)·P + B_n(P)`.
//!
//! `A_n` is always `3^m / 2^n` and is kept as its exponent pair; `B_n` is a
//! canonical [`Dyadic`]. Both follow the recursion
//! `A_{k+1} = A_k·3^{i_k}/2`, `B_{k+1} = (3^{i_k}·B_k + i_k)/2` driven by a
//! parity sequence `i_0, i_1, ...`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::collatz::{parity_bits, Seed};
use crate::dyadic::Dyadic;
use crate::parity::ParityVector;

const LOG2_3: f64 = 1.584_962_500_721_156_2;

/// Exact comparison of `3^pow3` against `2^pow2`.
pub fn cmp_pow3_pow2(pow3: u64, pow2: u64) -> Ordering {
    // log2(3^m) = m·log2(3); decide by bit length when clearly separated.
    let est = pow3 as f64 * LOG2_3;
    let n = pow2 as f64;
    if est > n + 1.0 {
        return Ordering::Greater;
    }
    if est < n - 1.0 {
        return Ordering::Less;
    }
    BigUint::from(3u32)
        .pow(pow3 as u32)
        .cmp(&(BigUint::one() << pow2))
}

/// The principal coefficient `3^pow3 / 2^pow2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CoeffA {
    pub pow3: u64,
    pub pow2: u64,
}

impl CoeffA {
    pub fn new(pow3: u64, pow2: u64) -> Self {
        CoeffA { pow3, pow2 }
    }

    pub fn one() -> Self {
        CoeffA::new(0, 0)
    }

    /// Compares the value against 1. `Equal` happens only for `3^0/2^0`.
    pub fn cmp_one(&self) -> Ordering {
        cmp_pow3_pow2(self.pow3, self.pow2)
    }

    pub fn numerator(&self) -> BigUint {
        BigUint::from(3u32).pow(self.pow3 as u32)
    }

    pub fn denominator(&self) -> BigUint {
        BigUint::one() << self.pow2
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(
            BigInt::from_biguint(Sign::Plus, self.numerator()),
            BigInt::from_biguint(Sign::Plus, self.denominator()),
        )
    }

    /// Product of two principal coefficients.
    pub fn times(&self, other: &CoeffA) -> CoeffA {
        CoeffA::new(self.pow3 + other.pow3, self.pow2 + other.pow2)
    }

    /// `3^pow3 · x / 2^pow2` as a dyadic.
    pub fn apply(&self, x: &Dyadic) -> Dyadic {
        x.scale(self.pow3, self.pow2)
    }
}

/// Prints the reduced fraction, e.g. `729/2048`.
impl fmt::Display for CoeffA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pow2 == 0 {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

impl Serialize for CoeffA {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            value: String,
            pow3: u64,
            pow2: u64,
        }
        Repr {
            value: self.to_string(),
            pow3: self.pow3,
            pow2: self.pow2,
        }
        .serialize(s)
    }
}

/// `(A_n, B_n)` for a parity history of length `depth`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoeffPair {
    pub a: CoeffA,
    pub b: Dyadic,
    pub depth: usize,
}

impl CoeffPair {
    /// The identity map (`A = 1`, `B = 0`, depth 0).
    pub fn identity() -> Self {
        CoeffPair {
            a: CoeffA::one(),
            b: Dyadic::zero(),
            depth: 0,
        }
    }

    /// Run the recursion over a bit sequence.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        // B_k kept as numerator over 2^k: N_{k+1} = 3^{i}·N_k + i·2^k.
        let mut numer = BigUint::zero();
        let mut odd = 0u64;
        let mut k = 0u64;
        for bit in bits {
            if bit {
                numer = numer * 3u32 + (BigUint::one() << k);
                odd += 1;
            }
            k += 1;
        }
        CoeffPair {
            a: CoeffA::new(odd, k),
            b: Dyadic::new(BigInt::from_biguint(Sign::Plus, numer), k),
            depth: k as usize,
        }
    }

    /// Composition: first `self`, then `next`.
    /// `A = A₁·A₂`, `B = A₂·B₁ + B₂`.
    pub fn then(&self, next: &CoeffPair) -> CoeffPair {
        CoeffPair {
            a: self.a.times(&next.a),
            b: &next.a.apply(&self.b) + &next.b,
            depth: self.depth + next.depth,
        }
    }

    /// `A·p + B` as an exact dyadic, regardless of integrality.
    pub fn value_at(&self, p: &BigUint) -> Dyadic {
        let scaled = BigInt::from_biguint(Sign::Plus, self.a.numerator() * p);
        let num = scaled + self.b.numerator_over(self.a.pow2);
        Dyadic::new(num, self.a.pow2)
    }
}

/// `(A_n(p), B_n(p))` from the recursion driven by `p`'s own parities.
pub fn coeffs_of_seed(p: &Seed, n: usize) -> CoeffPair {
    CoeffPair::from_bits(parity_bits(p.value(), n))
}

/// `(A^s(v), B^s(v))`: the same recursion driven by the bits of `v`.
pub fn coeffs_of_vector(v: &ParityVector) -> CoeffPair {
    CoeffPair::from_bits(v.bits().iter().copied())
}

/// `A·p + B` is not an integer, so `p` does not realize the parity vector
/// behind the coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonIntegral {
    pub value: Dyadic,
}

impl fmt::Display for NonIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A·p + B = {} is not an integer", self.value)
    }
}

impl std::error::Error for NonIntegral {}

/// `A·p + B` when it is an integer.
///
/// Integrality holds exactly when `p` lies in the residue class whose parity
/// history produced `c`, so this doubles as a membership test.
pub fn evaluate(c: &CoeffPair, p: &Seed) -> Result<BigUint, NonIntegral> {
    let value = c.value_at(p.value());
    match value.to_integer() {
        Some(n) => Ok(n
            .to_biguint()
            .expect("A·p + B is positive for positive p")),
        None => Err(NonIntegral { value }),
    }
}
