//! The shortcut Collatz map `T(p) = p/2` (even) or `(3p+1)/2` (odd), its
//! trajectories, parity indicators and cycle detection.
//!
//! All arithmetic is exact. Iteration runs on `u128` while values fit and
//! promotes to [`BigUint`] on overflow, so results never depend on word size.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// A positive integer starting value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Seed(BigUint);

impl Seed {
    pub fn new(value: impl Into<BigUint>) -> Result<Self> {
        let value = value.into();
        if value.is_zero() {
            return Err(Error::InvalidSeed(value.to_string()));
        }
        Ok(Seed(value))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Seed {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value = BigUint::from_str(s.trim()).map_err(|_| Error::InvalidSeed(s.to_string()))?;
        Seed::new(value)
    }
}

impl TryFrom<u64> for Seed {
    type Error = Error;

    fn try_from(value: u64) -> Result<Self> {
        Seed::new(value)
    }
}

/// One application of the shortcut map.
pub fn step(p: &BigUint) -> BigUint {
    if p.bit(0) {
        (p * 3u32 + 1u32) >> 1
    } else {
        p >> 1
    }
}

/// Iterate value that stays on `u128` while it fits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Cursor {
    Small(u128),
    Big(BigUint),
}

impl Cursor {
    pub(crate) fn new(value: &BigUint) -> Self {
        match value.to_u128() {
            Some(x) => Cursor::Small(x),
            None => Cursor::Big(value.clone()),
        }
    }

    pub(crate) fn is_odd(&self) -> bool {
        match self {
            Cursor::Small(x) => x & 1 == 1,
            Cursor::Big(b) => b.bit(0),
        }
    }

    pub(crate) fn advance(&mut self) {
        let next = match self {
            Cursor::Small(x) if *x & 1 == 0 => Cursor::Small(*x >> 1),
            Cursor::Small(x) => match x.checked_mul(3).and_then(|y| y.checked_add(1)) {
                Some(y) => Cursor::Small(y >> 1),
                None => Cursor::Big((BigUint::from(*x) * 3u32 + 1u32) >> 1),
            },
            Cursor::Big(b) => {
                let y = step(b);
                if y.bits() <= 128 {
                    Cursor::Small(y.to_u128().expect("fits in 128 bits"))
                } else {
                    Cursor::Big(y)
                }
            }
        };
        *self = next;
    }

    pub(crate) fn to_big(&self) -> BigUint {
        match self {
            Cursor::Small(x) => BigUint::from(*x),
            Cursor::Big(b) => b.clone(),
        }
    }

    fn exceeds(&self, bound: &Bound) -> bool {
        match (self, bound.small) {
            (Cursor::Small(x), Some(b)) => *x > b,
            (Cursor::Small(_), None) => false,
            (Cursor::Big(v), _) => *v > bound.big,
        }
    }
}

struct Bound {
    small: Option<u128>,
    big: BigUint,
}

impl Bound {
    fn new(big: &BigUint) -> Self {
        Bound {
            small: big.to_u128(),
            big: big.clone(),
        }
    }
}

/// The iterates `seed, T(seed), ..., T^n(seed)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trajectory {
    #[serde(serialize_with = "crate::report::ser_display")]
    seed: Seed,
    #[serde(serialize_with = "crate::report::ser_display_vec")]
    terms: Vec<BigUint>,
}

impl Trajectory {
    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn terms(&self) -> &[BigUint] {
        &self.terms
    }

    /// Number of map applications, i.e. `terms().len() - 1`.
    pub fn len(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn last(&self) -> &BigUint {
        self.terms.last().expect("trajectory holds its seed")
    }

    /// Bit `k` is the parity of `T^k(seed)` for `k < len()`.
    pub fn parities(&self) -> Vec<bool> {
        self.terms[..self.len()].iter().map(|t| t.bit(0)).collect()
    }
}

pub fn trajectory(p: &Seed, n: usize) -> Trajectory {
    let mut terms = Vec::with_capacity(n + 1);
    let mut cur = Cursor::new(p.value());
    terms.push(p.value().clone());
    for _ in 0..n {
        cur.advance();
        terms.push(cur.to_big());
    }
    Trajectory {
        seed: p.clone(),
        terms,
    }
}

/// `T^n(p)` without keeping the intermediate terms.
pub fn iterate(p: &BigUint, n: usize) -> BigUint {
    let mut cur = Cursor::new(p);
    for _ in 0..n {
        cur.advance();
    }
    cur.to_big()
}

/// Parities of `T^0(p) .. T^{n-1}(p)`.
pub(crate) fn parity_bits(p: &BigUint, n: usize) -> Vec<bool> {
    let mut cur = Cursor::new(p);
    let mut bits = Vec::with_capacity(n);
    for k in 0..n {
        bits.push(cur.is_odd());
        if k + 1 < n {
            cur.advance();
        }
    }
    bits
}

/// 1 if `T^k(p)` is odd, 0 otherwise.
pub fn parity_indicator(p: &Seed, k: usize) -> u8 {
    let mut cur = Cursor::new(p.value());
    for _ in 0..k {
        cur.advance();
    }
    u8::from(cur.is_odd())
}

/// A cycle reached by some trajectory.
///
/// `members[0]` is the term at `entry_index` and applying `T` to the last
/// member gives `members[0]` again.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleInfo {
    pub entry_index: usize,
    #[serde(serialize_with = "crate::report::ser_display_vec")]
    pub members: Vec<BigUint>,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub min_member: BigUint,
}

impl CycleInfo {
    pub fn period(&self) -> usize {
        self.members.len()
    }

    /// Members rotated so the minimum comes first.
    pub fn from_min(&self) -> Vec<BigUint> {
        let pos = self
            .members
            .iter()
            .position(|m| *m == self.min_member)
            .expect("min member is a member");
        let mut out = self.members[pos..].to_vec();
        out.extend_from_slice(&self.members[..pos]);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NoCycleReason {
    BudgetExhausted {
        steps: usize,
    },
    BoundExceeded {
        step: usize,
        #[serde(serialize_with = "crate::report::ser_display")]
        value: BigUint,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CycleSearch {
    Cycle(CycleInfo),
    NoCycleWithinBudget(NoCycleReason),
}

impl CycleSearch {
    pub fn cycle(&self) -> Option<&CycleInfo> {
        match self {
            CycleSearch::Cycle(c) => Some(c),
            CycleSearch::NoCycleWithinBudget(_) => None,
        }
    }
}

/// Everything learned while searching for a cycle.
#[derive(Debug, Clone)]
pub(crate) struct Walk {
    pub search: CycleSearch,
    /// Map applications performed.
    pub steps: usize,
    /// Odd terms among indices `0..steps`.
    pub odd_count: usize,
    /// `T^1(p)`, present whenever at least one step ran.
    pub first_image: Option<BigUint>,
    /// `T^steps(p)`.
    pub last: BigUint,
}

/// Exact cycle search with a visited-value map.
///
/// Stops with [`NoCycleReason::BoundExceeded`] as soon as a term exceeds
/// `bound`, and with [`NoCycleReason::BudgetExhausted`] if no term has recurred
/// after `max_steps` applications.
pub fn detect_cycle(p: &Seed, max_steps: usize, bound: &BigUint) -> CycleSearch {
    walk(p, max_steps, bound).search
}

pub(crate) fn walk(p: &Seed, max_steps: usize, bound: &BigUint) -> Walk {
    let bound = Bound::new(bound);
    let mut cur = Cursor::new(p.value());
    let mut seen: HashMap<Cursor, usize> = HashMap::new();
    let mut path: Vec<Cursor> = Vec::new();
    let mut odd_count = 0;
    let mut first_image = None;

    let mut index = 0;
    loop {
        if cur.exceeds(&bound) {
            return Walk {
                search: CycleSearch::NoCycleWithinBudget(NoCycleReason::BoundExceeded {
                    step: index,
                    value: cur.to_big(),
                }),
                steps: index,
                odd_count,
                first_image,
                last: cur.to_big(),
            };
        }
        if let Some(&entry) = seen.get(&cur) {
            let members: Vec<BigUint> = path[entry..].iter().map(Cursor::to_big).collect();
            let min_member = members.iter().min().cloned().expect("non-empty cycle");
            return Walk {
                search: CycleSearch::Cycle(CycleInfo {
                    entry_index: entry,
                    members,
                    min_member,
                }),
                steps: index,
                odd_count,
                first_image,
                last: cur.to_big(),
            };
        }
        if index == max_steps {
            return Walk {
                search: CycleSearch::NoCycleWithinBudget(NoCycleReason::BudgetExhausted {
                    steps: max_steps,
                }),
                steps: index,
                odd_count,
                first_image,
                last: cur.to_big(),
            };
        }
        seen.insert(cur.clone(), index);
        path.push(cur.clone());
        if cur.is_odd() {
            odd_count += 1;
        }
        cur.advance();
        index += 1;
        if index == 1 {
            first_image = Some(cur.to_big());
        }
    }
}

/// `2^128`, the default survey bound.
pub fn default_bound() -> BigUint {
    BigUint::one() << 128u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seed(v: u64) -> Seed {
        Seed::try_from(v).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn as_u64(ts: &[BigUint]) -> Vec<u64> {
        ts.iter().map(|t| t.to_u64().unwrap()).collect()
    }

    #[test]
    fn step_values() {
        assert_eq!(step(&big(7)), big(11));
        assert_eq!(step(&big(2)), big(1));
        assert_eq!(step(&big(9363)), big(14045));
    }

    #[test]
    fn zero_seed_rejected() {
        assert!(Seed::new(0u32).is_err());
        assert!("0".parse::<Seed>().is_err());
        assert!("abc".parse::<Seed>().is_err());
    }

    #[test]
    fn trajectories_match_worked_rows() {
        assert_eq!(
            as_u64(trajectory(&seed(7), 11).terms()),
            vec![7, 11, 17, 26, 13, 20, 10, 5, 8, 4, 2, 1]
        );
        assert_eq!(as_u64(trajectory(&seed(1), 4).terms()), vec![1, 2, 1, 2, 1]);
        assert_eq!(as_u64(trajectory(&seed(3), 4).terms()), vec![3, 5, 8, 4, 2]);
        assert_eq!(trajectory(&seed(5), 0).terms().len(), 1);
    }

    #[test]
    fn beta_periodic_row() {
        // (1,1,0) repeated four times starting from 9363
        let t = trajectory(&seed(9363), 11);
        assert_eq!(
            as_u64(t.terms()),
            vec![9363, 14045, 21068, 10534, 5267, 7901, 11852, 5926, 2963, 4445, 6668, 3334]
        );
    }

    #[test]
    fn indicators() {
        assert_eq!(parity_indicator(&seed(7), 0), 1);
        assert_eq!(parity_indicator(&seed(7), 3), 0);
        assert_eq!(parity_indicator(&seed(1), 2), 1);
    }

    #[test]
    fn parity_law_exhaustive() {
        for p in 1..=10_000u64 {
            let s = seed(p);
            let expected = if parity_indicator(&s, 0) == 1 {
                (3 * p).div_ceil(2)
            } else {
                p / 2
            };
            assert_eq!(step(&big(p)), big(expected));
        }
    }

    #[test]
    fn cycles_found() {
        let bound = big(1_000_000);
        let c1 = detect_cycle(&seed(1), 100, &bound);
        let c1 = c1.cycle().unwrap();
        assert_eq!(c1.entry_index, 0);
        assert_eq!(as_u64(&c1.members), vec![1, 2]);
        assert_eq!(c1.min_member, big(1));

        let c7 = detect_cycle(&seed(7), 100, &bound);
        let c7 = c7.cycle().unwrap();
        assert_eq!(c7.entry_index, 10);
        assert_eq!(as_u64(&c7.from_min()), vec![1, 2]);
        assert_eq!(c7.min_member, big(1));
    }

    #[test]
    fn budget_and_bound() {
        let r = detect_cycle(&seed(27), 10, &big(1_000_000));
        assert_eq!(
            r,
            CycleSearch::NoCycleWithinBudget(NoCycleReason::BudgetExhausted { steps: 10 })
        );
        let r = detect_cycle(&seed(27), 10_000, &big(100));
        assert!(matches!(
            r,
            CycleSearch::NoCycleWithinBudget(NoCycleReason::BoundExceeded { .. })
        ));
    }

    #[test]
    fn promotion_past_u128_is_exact() {
        // 2^130 - 1 rises through 130 odd steps, far past u128.
        let p: BigUint = (BigUint::one() << 130u32) - 1u32;
        let mut reference = p.clone();
        for _ in 0..200 {
            reference = step(&reference);
        }
        assert_eq!(iterate(&p, 200), reference);
        let t = trajectory(&Seed::new(p).unwrap(), 200);
        assert_eq!(*t.last(), reference);
    }

    #[test]
    fn walk_counts_odd_terms() {
        let w = walk(&seed(7), 100, &big(1000));
        assert_eq!(w.steps, 12);
        // 7 11 17 26 13 20 10 5 8 4 2 1
        assert_eq!(w.odd_count, 6);
        assert_eq!(w.first_image, Some(big(11)));
    }
}
