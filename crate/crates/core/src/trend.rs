//! Finite-evidence trend rules.
//!
//! Limits of sequential series and unresolved trajectories are never
//! extrapolated. A sequence of exact values is compared at its first three and
//! last three points:
//!
//! * `StabilizesAt(x)`: the last three values all equal `x`.
//! * `GrowsUnbounded`: the smallest of the last three exceeds the largest of
//!   the first three by at least [`GROWTH_MARGIN`].
//! * `TendsToZero` / `TendsTo(x)`: every one of the last three distances to
//!   `x` is at most the smallest of the first three distances divided by
//!   [`GROWTH_MARGIN`]. Zero is always a candidate; callers may offer more.
//! * `Inconclusive` otherwise.
//!
//! With fewer than six values the windows overlap and only `StabilizesAt`
//! can fire.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::report::rational_string;

/// Separation factor (and additive margin for growth) required by the rules.
pub const GROWTH_MARGIN: u32 = 1 << 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Trend {
    StabilizesAt(BigRational),
    GrowsUnbounded,
    TendsToZero,
    TendsTo(BigRational),
    Inconclusive,
}

impl Trend {
    pub fn is_unbounded(&self) -> bool {
        matches!(self, Trend::GrowsUnbounded)
    }

    /// The finite limit the evidence points at, if any.
    pub fn limit(&self) -> Option<BigRational> {
        match self {
            Trend::StabilizesAt(x) | Trend::TendsTo(x) => Some(x.clone()),
            Trend::TendsToZero => Some(BigRational::zero()),
            Trend::GrowsUnbounded | Trend::Inconclusive => None,
        }
    }
}

impl fmt::Display for Trend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trend::StabilizesAt(x) => write!(f, "StabilizesAt({})", rational_string(x)),
            Trend::GrowsUnbounded => f.write_str("GrowsUnbounded"),
            Trend::TendsToZero => f.write_str("TendsToZero"),
            Trend::TendsTo(x) => write!(f, "TendsTo({})", rational_string(x)),
            Trend::Inconclusive => f.write_str("Inconclusive"),
        }
    }
}

impl Serialize for Trend {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Apply the rules to `values`, trying zero and then each of `targets` as a
/// candidate limit.
pub fn assess(values: &[BigRational], targets: &[BigRational]) -> Trend {
    let n = values.len();
    if n < 3 {
        return Trend::Inconclusive;
    }
    let head = &values[..3];
    let tail = &values[n - 3..];

    if tail.iter().all(|v| *v == tail[0]) {
        return Trend::StabilizesAt(tail[0].clone());
    }

    let margin = BigRational::from_integer(BigInt::from(GROWTH_MARGIN));
    let head_max = head.iter().max().expect("three values");
    let tail_min = tail.iter().min().expect("three values");
    if *tail_min >= head_max + &margin {
        return Trend::GrowsUnbounded;
    }

    let zero = BigRational::zero();
    for target in std::iter::once(&zero).chain(targets) {
        let dist = |v: &BigRational| (v - target).abs();
        let head_min = head.iter().map(dist).min().expect("three values");
        if head_min.is_zero() {
            continue;
        }
        let tail_max = tail.iter().map(dist).max().expect("three values");
        if tail_max * &margin <= head_min {
            return if target.is_zero() {
                Trend::TendsToZero
            } else {
                Trend::TendsTo(target.clone())
            };
        }
    }
    Trend::Inconclusive
}

/// Convenience wrapper for integer sequences.
pub fn assess_integers<'a, I>(values: I) -> Trend
where
    I: IntoIterator<Item = &'a num_bigint::BigUint>,
{
    let v: Vec<BigRational> = values
        .into_iter()
        .map(|x| BigRational::from_integer(BigInt::from(x.clone())))
        .collect();
    assess(&v, &[])
}
