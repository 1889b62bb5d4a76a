//! Value-periodic cycles and structure-periodic repeating units.
//!
//! Repeating a unit `U` with coefficients `(a, b)` gives, after `k` copies,
//! `A = a^k` and `B = b·(1 + a + ... + a^{k-1})`. When `a < 1` the sum has the
//! closed limit `b / (1 − a)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::coeffs::{coeffs_of_seed, coeffs_of_vector, CoeffA, CoeffPair};
use crate::collatz::{detect_cycle, CycleSearch, NoCycleReason, Seed};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::parity::{parity_vector, ParityVector};
use crate::report::{rational_string, ser_display_vec, ser_rational};

/// A repeating parity unit and its one-copy coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicUnit {
    bits: ParityVector,
    a_s: CoeffA,
    b_s: Dyadic,
}

impl PeriodicUnit {
    pub fn new(bits: ParityVector) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyUnit);
        }
        let CoeffPair { a, b, .. } = coeffs_of_vector(&bits);
        Ok(PeriodicUnit { bits, a_s: a, b_s: b })
    }

    /// The same unit started at its lexicographically smallest rotation.
    pub fn canonical(&self) -> PeriodicUnit {
        PeriodicUnit::new(self.bits.min_rotation()).expect("rotation keeps length")
    }

    pub fn bits(&self) -> &ParityVector {
        &self.bits
    }

    pub fn a_s(&self) -> CoeffA {
        self.a_s
    }

    pub fn b_s(&self) -> &Dyadic {
        &self.b_s
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coefficients of `k` back-to-back copies.
    pub fn copies(&self, k: usize) -> CoeffPair {
        let one = CoeffPair {
            a: self.a_s,
            b: self.b_s.clone(),
            depth: self.len(),
        };
        (0..k).fold(CoeffPair::identity(), |acc, _| acc.then(&one))
    }
}

impl FromStr for PeriodicUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PeriodicUnit::new(s.parse()?)
    }
}

impl fmt::Display for PeriodicUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.bits.fmt(f)
    }
}

/// Limit of `(A, B)` under infinite repetition of a unit.
///
/// There is no variant with an infinite `A` and a finite `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnitLimit {
    /// `a_inf = 0`.
    Converges { b_inf: BigRational },
    /// `a_inf = b_inf = +∞`.
    Diverges,
}

impl UnitLimit {
    pub fn converges(&self) -> bool {
        matches!(self, UnitLimit::Converges { .. })
    }

    pub fn b_inf(&self) -> Option<&BigRational> {
        match self {
            UnitLimit::Converges { b_inf } => Some(b_inf),
            UnitLimit::Diverges => None,
        }
    }
}

impl Serialize for UnitLimit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            verdict: &'a str,
            a_inf: &'a str,
            b_inf: String,
        }
        let repr = match self {
            UnitLimit::Converges { b_inf } => Repr {
                verdict: "Converges",
                a_inf: "0",
                b_inf: rational_string(b_inf),
            },
            UnitLimit::Diverges => Repr {
                verdict: "Diverges",
                a_inf: "inf",
                b_inf: "inf".into(),
            },
        };
        repr.serialize(s)
    }
}

/// `b / (1 − 3^m/2^n) = b·2^n / (2^n − 3^m)`, exact.
fn geometric_limit(a: CoeffA, b: &Dyadic) -> BigRational {
    let two_n = BigInt::from_biguint(Sign::Plus, a.denominator());
    let three_m = BigInt::from_biguint(Sign::Plus, a.numerator());
    b.to_rational() * BigRational::new(two_n.clone(), two_n - three_m)
}

pub fn unit_limit(u: &PeriodicUnit) -> UnitLimit {
    match u.a_s.cmp_one() {
        Ordering::Less => UnitLimit::Converges {
            b_inf: geometric_limit(u.a_s, &u.b_s),
        },
        Ordering::Greater => UnitLimit::Diverges,
        Ordering::Equal => unreachable!("3^m = 2^n has no solution with n ≥ 1"),
    }
}

/// Limits along a value cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaReport {
    /// The cycle restarted at its smallest member.
    #[serde(serialize_with = "ser_display_vec")]
    pub cycle: Vec<BigUint>,
    pub period: usize,
    /// Odd members of one period.
    pub odd_count: usize,
    /// `B_n(c)` over one period from the smallest member `c`.
    pub b_period: Dyadic,
    /// `B_n(c) / (1 − 3^m/2^n)`.
    #[serde(serialize_with = "ser_rational")]
    pub b_inf_formula: BigRational,
    /// Limits of `B_{kn+i}` for each phase `i`: the cycle members themselves.
    #[serde(serialize_with = "ser_display_vec")]
    pub phase_limits: Vec<BigUint>,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub b_inf_min: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NotPeriodicWithinBudget(pub NoCycleReason);

impl fmt::Display for NotPeriodicWithinBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            NoCycleReason::BudgetExhausted { steps } => {
                write!(f, "no cycle within {steps} steps")
            }
            NoCycleReason::BoundExceeded { step, value } => {
                write!(f, "term {value} at step {step} exceeded the bound")
            }
        }
    }
}

impl std::error::Error for NotPeriodicWithinBudget {}

pub fn alpha_cycle_limit(
    p: &Seed,
    max_steps: usize,
    bound: &BigUint,
) -> std::result::Result<AlphaReport, NotPeriodicWithinBudget> {
    let info = match detect_cycle(p, max_steps, bound) {
        CycleSearch::Cycle(info) => info,
        CycleSearch::NoCycleWithinBudget(reason) => return Err(NotPeriodicWithinBudget(reason)),
    };
    let cycle = info.from_min();
    let c = Seed::new(info.min_member.clone()).expect("cycle members are positive");
    let period = info.period();
    let pair = coeffs_of_seed(&c, period);
    let b_inf_formula = geometric_limit(pair.a, &pair.b);
    Ok(AlphaReport {
        period,
        odd_count: pair.a.pow3 as usize,
        b_period: pair.b,
        b_inf_formula,
        phase_limits: cycle.clone(),
        b_inf_min: info.min_member,
        cycle,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Periodicity {
    /// A positive integer runs through the unit forever.
    AlphaRealizable {
        #[serde(serialize_with = "crate::report::ser_display")]
        fixed_point: BigUint,
    },
    BetaOnly,
}

/// A unit is value-realizable exactly when its one-period fixed point
/// `P = B/(1 − A)` is a positive integer whose own parities spell the unit.
pub fn is_alpha_vs_beta(u: &PeriodicUnit) -> Periodicity {
    let Some(b_inf) = unit_limit(u).b_inf().cloned() else {
        return Periodicity::BetaOnly;
    };
    if !b_inf.is_integer() || !b_inf.is_positive() {
        return Periodicity::BetaOnly;
    }
    let f = b_inf.to_integer().to_biguint().expect("positive");
    let seed = Seed::new(f.clone()).expect("positive");
    if parity_vector(&seed, u.len()) == *u.bits() {
        Periodicity::AlphaRealizable { fixed_point: f }
    } else {
        Periodicity::BetaOnly
    }
}

/// Smallest `k` with `a^k·|b_inf| ≤ 2^-precision`, the number of copies after
/// which the partial sums sit within `2^-precision` of the limit.
pub fn copies_for_precision(u: &PeriodicUnit, precision: u32) -> Option<usize> {
    let b_inf = unit_limit(u).b_inf()?.abs();
    if b_inf.is_zero() {
        return Some(0);
    }
    let a = u.a_s.to_rational();
    let eps = BigRational::new(BigInt::one(), BigInt::one() << precision);
    let mut err = b_inf;
    let mut k = 0;
    while err > eps {
        err *= &a;
        k += 1;
    }
    Some(k)
}
