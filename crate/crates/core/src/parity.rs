//! Parity vectors and the inverse problem.
//!
//! Vectors are seed-inclusive: bit `k` is the parity of `T^k(P)` starting at
//! `k = 0`. [`structural_vector`] gives the seed-excluded view (parities of
//! `T^1 .. T^n`) used by the complete matrices.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::collatz::{parity_bits, step, Seed};
use crate::error::{Error, Result};
use crate::trend::{self, Trend};

/// An ordered bit sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParityVector(Vec<bool>);

impl ParityVector {
    pub fn new(bits: Vec<bool>) -> Self {
        ParityVector(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn popcount(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn concat(&self, other: &ParityVector) -> ParityVector {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        ParityVector(bits)
    }

    /// `k` back-to-back copies.
    pub fn repeat(&self, k: usize) -> ParityVector {
        ParityVector(self.0.repeat(k))
    }

    pub fn prefix(&self, len: usize) -> ParityVector {
        ParityVector(self.0[..len].to_vec())
    }

    pub fn is_prefix_of(&self, other: &ParityVector) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Run-length encoding: `(bit, length)` for each maximal block.
    pub fn runs(&self) -> Vec<(bool, usize)> {
        let mut runs: Vec<(bool, usize)> = Vec::new();
        for &b in &self.0 {
            match runs.last_mut() {
                Some((bit, len)) if *bit == b => *len += 1,
                _ => runs.push((b, 1)),
            }
        }
        runs
    }

    /// True when `other` has the same sequence of blocks as `self`, each at
    /// least as long: `1 0^n 1^n` is run-nested in `1 0^{n+1} 1^{n+1}`.
    pub fn is_run_nested_in(&self, other: &ParityVector) -> bool {
        let (a, b) = (self.runs(), other.runs());
        a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x.0 == y.0 && x.1 <= y.1)
    }

    /// Bits packed little-endian into an integer (bit `k` ↦ `2^k`). Only for
    /// vectors of at most 64 bits.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len() <= 64);
        self.0
            .iter()
            .enumerate()
            .fold(0u64, |acc, (k, &b)| acc | (u64::from(b) << k))
    }

    /// Inverse of [`ParityVector::to_u64`].
    pub fn from_u64(word: u64, len: usize) -> Self {
        ParityVector((0..len).map(|k| word >> k & 1 == 1).collect())
    }

    /// Lexicographically smallest rotation.
    pub fn min_rotation(&self) -> ParityVector {
        (0..self.len().max(1))
            .map(|r| {
                let mut b = self.0.clone();
                b.rotate_left(r);
                ParityVector(b)
            })
            .min()
            .unwrap_or_default()
    }
}

impl fmt::Display for ParityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for ParityVector {
    type Err = Error;

    /// Parses a string of `0`/`1` characters; commas and spaces are ignored.
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !matches!(c, ',' | ' ' | '(' | ')'))
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::ParseParity(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(ParityVector)
    }
}

impl From<Vec<bool>> for ParityVector {
    fn from(bits: Vec<bool>) -> Self {
        ParityVector(bits)
    }
}

impl Serialize for ParityVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ParityVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `v(p, n)`: parities of `T^0(p) .. T^{n-1}(p)`.
pub fn parity_vector(p: &Seed, n: usize) -> ParityVector {
    ParityVector(parity_bits(p.value(), n))
}

/// Seed-excluded view: parities of `T^1(p) .. T^n(p)`.
pub fn structural_vector(p: &Seed, n: usize) -> ParityVector {
    ParityVector(parity_bits(&step(p.value()), n))
}

/// The integers congruent to `residue` modulo `2^modulus_exp`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueClass {
    pub residue: BigUint,
    pub modulus_exp: usize,
}

impl ResidueClass {
    pub fn modulus(&self) -> BigUint {
        BigUint::one() << self.modulus_exp
    }

    pub fn contains(&self, p: &BigUint) -> bool {
        (p % self.modulus()) == self.residue
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod 2^{}", self.residue, self.modulus_exp)
    }
}

impl Serialize for ResidueClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            residue: String,
            modulus_exp: usize,
            modulus: String,
        }
        Repr {
            residue: self.residue.to_string(),
            modulus_exp: self.modulus_exp,
            modulus: self.modulus().to_string(),
        }
        .serialize(s)
    }
}

/// The unique residue class mod `2^len(v)` whose members have parity vector `v`.
///
/// Bit-by-bit lifting: with `r` solving the first `k` bits and `m_k` its odd
/// count, `T^k(r + 2^k·t) = T^k(r) + 3^{m_k}·t`. Since `3^{m_k}` is odd,
/// exactly one of `t ∈ {0, 1}` gives `T^k` the parity `v[k]`.
pub fn solve_parity(v: &ParityVector) -> ResidueClass {
    let residue = if v.len() <= 64 {
        lift_small(v.bits()).map(BigUint::from)
    } else {
        None
    }
    .unwrap_or_else(|| lift_big(v.bits()));
    ResidueClass {
        residue,
        modulus_exp: v.len(),
    }
}

fn lift_small(bits: &[bool]) -> Option<u128> {
    let mut residue = 0u128;
    let mut image = 0u128;
    let mut pow3 = 1u128;
    for (k, &bit) in bits.iter().enumerate() {
        if (image & 1 == 1) != bit {
            residue |= 1u128 << k;
            image = image.checked_add(pow3)?;
        }
        if bit {
            image = image.checked_mul(3)?.checked_add(1)? >> 1;
            pow3 = pow3.checked_mul(3)?;
        } else {
            image >>= 1;
        }
    }
    Some(residue)
}

fn lift_big(bits: &[bool]) -> BigUint {
    let mut residue = BigUint::zero();
    let mut image = BigUint::zero();
    let mut pow3 = BigUint::one();
    for (k, &bit) in bits.iter().enumerate() {
        if image.bit(0) != bit {
            residue.set_bit(k as u64, true);
            image += &pow3;
        }
        if bit {
            image = (image * 3u32 + 1u32) >> 1;
            pow3 *= 3u32;
        } else {
            image >>= 1;
        }
    }
    residue
}

/// Smallest positive member of [`solve_parity`]'s class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalSeed {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub seed: Seed,
    /// The class is `0 mod 2^n`, so the smallest positive member is `2^n`.
    pub zero_residue: bool,
}

pub fn minimal_seed(v: &ParityVector) -> MinimalSeed {
    let class = solve_parity(v);
    if class.residue.is_zero() {
        MinimalSeed {
            seed: Seed::new(class.modulus()).expect("2^n is positive"),
            zero_residue: true,
        }
    } else {
        MinimalSeed {
            seed: Seed::new(class.residue).expect("non-zero residue"),
            zero_residue: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProbeVerdict {
    /// Minimal seeds settled on one value: evidence the infinite structure is
    /// realized by that seed.
    ConvertibleEvidence {
        #[serde(serialize_with = "crate::report::ser_display")]
        seed: BigUint,
    },
    /// Minimal seeds grow past every early value: evidence no positive seed
    /// realizes the infinite structure.
    NonConvertibleEvidence,
    Inconclusive,
}

/// Minimal seeds of a nested prefix family, with an evidence-only verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthReport {
    pub lengths: Vec<usize>,
    #[serde(serialize_with = "crate::report::ser_display_vec")]
    pub minimal_seeds: Vec<BigUint>,
    pub trend: Trend,
    pub verdict: ProbeVerdict,
}

/// Check that every vector is a proper prefix of its successor.
pub(crate) fn check_prefix_chain(vectors: &[ParityVector]) -> Result<()> {
    for (i, w) in vectors.windows(2).enumerate() {
        if !(w[0].len() < w[1].len() && w[0].is_prefix_of(&w[1])) {
            return Err(Error::NotNested { index: i });
        }
    }
    Ok(())
}

pub fn convertibility_probe(prefixes: &[ParityVector]) -> Result<GrowthReport> {
    check_prefix_chain(prefixes)?;
    let minimal_seeds: Vec<BigUint> = prefixes
        .iter()
        .map(|v| minimal_seed(v).seed.into_inner())
        .collect();
    let trend = trend::assess_integers(&minimal_seeds);
    let verdict = match &trend {
        Trend::StabilizesAt(x) => ProbeVerdict::ConvertibleEvidence {
            seed: x.to_integer().to_biguint().expect("seeds are positive"),
        },
        Trend::GrowsUnbounded => ProbeVerdict::NonConvertibleEvidence,
        _ => ProbeVerdict::Inconclusive,
    };
    Ok(GrowthReport {
        lengths: prefixes.iter().map(ParityVector::len).collect(),
        minimal_seeds,
        trend,
        verdict,
    })
}

/// All prefixes of lengths `1..=len` of `v`.
pub fn prefixes(v: &ParityVector) -> Vec<ParityVector> {
    (1..=v.len()).map(|k| v.prefix(k)).collect()
}
