//! The asymptotic taxonomy and its empty-category lattice.
//!
//! A label is `{R, NR} × {A0-, A1-, A+} × {B-, B+} × {S-, S+} × {M-, M+}`:
//!
//! * `A`: `A_∞ = 0`, `0 < A_∞ < 1` or `A_∞ > 1`.
//! * `B`: `B_∞` finite or infinite.
//! * `S`: `T^∞ ≤ T^1(P)` or `T^∞ > T^1(P)`.
//! * `M`: `T^∞` finite or infinite.
//!
//! Realizable labels in [`PROVEN_EMPTY`] cannot be constructed.
//! [`CONJECTURED_EMPTY`] is a watchlist: such labels are legal but are flagged
//! when a definite verdict lands in one.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::coeffs::cmp_pow3_pow2;
use crate::collatz::{walk, CycleSearch, NoCycleReason, Seed};
use crate::config::{ClassifyOptions, SReference};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::periodic::{is_alpha_vs_beta, unit_limit, Periodicity, PeriodicUnit, UnitLimit};
use crate::report::rational_string;
use crate::trend;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Realizability {
    R,
    NR,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AClass {
    A0Minus,
    A1Minus,
    APlus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BClass {
    BMinus,
    BPlus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SClass {
    SMinus,
    SPlus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MClass {
    MMinus,
    MPlus,
}

use AClass::*;
use BClass::*;
use Realizability::*;
use SClass::*;

/// `(S, A, B)` triples that no realizable sequence can have.
pub const PROVEN_EMPTY: [(SClass, AClass, BClass); 7] = [
    (SMinus, A0Minus, BPlus),
    (SMinus, A1Minus, BMinus),
    (SPlus, A1Minus, BMinus),
    (SMinus, A1Minus, BPlus),
    (SMinus, APlus, BMinus),
    (SMinus, APlus, BPlus),
    (SPlus, APlus, BMinus),
];

/// `(S, A, B)` triples expected, but not proven, to be empty for realizable
/// sequences.
pub const CONJECTURED_EMPTY: [(SClass, AClass, BClass); 4] = [
    (SPlus, A0Minus, BMinus),
    (SPlus, A0Minus, BPlus),
    (SPlus, A1Minus, BPlus),
    (SPlus, APlus, BPlus),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassLabel {
    realizability: Realizability,
    a: AClass,
    b: BClass,
    s: SClass,
    m: MClass,
}

impl ClassLabel {
    /// Fails with [`Error::EmptyCategoryViolation`] for realizable labels in
    /// [`PROVEN_EMPTY`] and for `R·M+·A0-·B-`.
    pub fn new(
        realizability: Realizability,
        a: AClass,
        b: BClass,
        s: SClass,
        m: MClass,
    ) -> Result<Self> {
        let label = ClassLabel {
            realizability,
            a,
            b,
            s,
            m,
        };
        if label.is_forbidden() {
            Err(Error::EmptyCategoryViolation(label))
        } else {
            Ok(label)
        }
    }

    fn is_forbidden(&self) -> bool {
        self.realizability == R
            && (PROVEN_EMPTY.contains(&(self.s, self.a, self.b))
                || (self.m == MClass::MPlus && self.a == A0Minus && self.b == BMinus))
    }

    pub fn realizability(&self) -> Realizability {
        self.realizability
    }

    pub fn a_class(&self) -> AClass {
        self.a
    }

    pub fn b_class(&self) -> BClass {
        self.b
    }

    pub fn s_class(&self) -> SClass {
        self.s
    }

    pub fn m_class(&self) -> MClass {
        self.m
    }

    pub fn is_conjectured_empty(&self) -> bool {
        self.realizability == R && CONJECTURED_EMPTY.contains(&(self.s, self.a, self.b))
    }

    /// `R[A0-][B-][S-][M-]`, the label of every seed reaching the `(1, 2)` cycle.
    pub fn trivial_cycle() -> Self {
        ClassLabel {
            realizability: R,
            a: A0Minus,
            b: BMinus,
            s: SMinus,
            m: MClass::MMinus,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self.realizability {
            R => "R",
            NR => "NR",
        };
        let a = match self.a {
            A0Minus => "A0-",
            A1Minus => "A1-",
            APlus => "A+",
        };
        let b = if self.b == BMinus { "B-" } else { "B+" };
        let s = if self.s == SMinus { "S-" } else { "S+" };
        let m = if self.m == MClass::MMinus { "M-" } else { "M+" };
        write!(f, "{r}[{a}][{b}][{s}][{m}]")
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) form; the result is validated.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseLabel(s.to_string());
        let t = s.trim();
        let (realizability, rest) = if let Some(rest) = t.strip_prefix("NR") {
            (NR, rest)
        } else if let Some(rest) = t.strip_prefix('R') {
            (R, rest)
        } else {
            return Err(bad());
        };
        let parts: Vec<&str> = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?
            .split("][")
            .collect();
        let [a, b, s_, m] = parts.as_slice() else {
            return Err(bad());
        };
        let a = match *a {
            "A0-" => A0Minus,
            "A1-" => A1Minus,
            "A+" => APlus,
            _ => return Err(bad()),
        };
        let b = match *b {
            "B-" => BMinus,
            "B+" => BPlus,
            _ => return Err(bad()),
        };
        let s_ = match *s_ {
            "S-" => SMinus,
            "S+" => SPlus,
            _ => return Err(bad()),
        };
        let m = match *m {
            "M-" => MClass::MMinus,
            "M+" => MClass::MPlus,
            _ => return Err(bad()),
        };
        ClassLabel::new(realizability, a, b, s_, m)
    }
}

impl Serialize for ClassLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Grade {
    /// A cycle was reached, or the limits are closed-form.
    Definite,
    /// The trajectory passed the bound; labels come from finite-depth evidence.
    Heuristic,
    /// The step budget ran out.
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    /// Steps examined.
    pub depth: usize,
    /// Odd terms among the steps behind `3^m/2^n`.
    pub m: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(serialize_with = "crate::report::ser_opt_display")]
    pub seed: Option<BigUint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(serialize_with = "crate::report::ser_opt_display")]
    pub unit: Option<String>,
    pub label: ClassLabel,
    pub grade: Grade,
    /// Exact rational as `"p/q"`, or `"inf"`; absent when unknown.
    pub b_inf: Option<String>,
    pub t_inf: Option<String>,
    pub evidence: Evidence,
}

/// Number of checkpoints sampled along an unresolved trajectory for the trend rules.
const CHECKPOINTS: usize = 12;

pub fn classify_seed(p: &Seed, max_steps: usize, bound: &BigUint) -> Result<Verdict> {
    classify_seed_with(
        p,
        &ClassifyOptions {
            max_steps,
            bound: bound.clone(),
            s_reference: SReference::FirstImage,
        },
    )
}

pub fn classify_seed_with(p: &Seed, opts: &ClassifyOptions) -> Result<Verdict> {
    let w = walk(p, opts.max_steps.max(1), &opts.bound);
    let first_image = w.first_image.clone().expect("at least one step runs");
    let reference = match opts.s_reference {
        SReference::FirstImage => &first_image,
        SReference::Seed => p.value(),
    };

    match &w.search {
        CycleSearch::Cycle(info) => {
            let t_inf = &info.min_member;
            let s = if t_inf > reference { SPlus } else { SMinus };
            let label = ClassLabel::new(R, A0Minus, BMinus, s, MClass::MMinus)?;
            let period_odd = info.members.iter().filter(|x| x.bit(0)).count();
            Ok(Verdict {
                seed: Some(p.value().clone()),
                unit: None,
                label,
                grade: Grade::Definite,
                b_inf: Some(t_inf.to_string()),
                t_inf: Some(t_inf.to_string()),
                evidence: Evidence {
                    depth: w.steps,
                    m: period_odd,
                    n: info.period(),
                    bound: None,
                },
            })
        }
        CycleSearch::NoCycleWithinBudget(reason) => {
            let grade = match reason {
                NoCycleReason::BoundExceeded { .. } => Grade::Heuristic,
                NoCycleReason::BudgetExhausted { .. } => Grade::Unresolved,
            };
            let label = finite_depth_label(p, w.steps, w.odd_count, &w.last, reference)?;
            Ok(Verdict {
                seed: Some(p.value().clone()),
                unit: None,
                label,
                grade,
                b_inf: None,
                t_inf: None,
                evidence: Evidence {
                    depth: w.steps,
                    m: w.odd_count,
                    n: w.steps,
                    bound: Some(opts.bound.to_string()),
                },
            })
        }
    }
}

/// Label from a finite prefix of an unresolved trajectory.
///
/// The label is forced into the realizable lattice: `A+` or an unbounded `B`
/// trend imply `S+`, and `M+` needs `A+` or `B+`.
fn finite_depth_label(
    p: &Seed,
    steps: usize,
    odd: usize,
    last: &BigUint,
    reference: &BigUint,
) -> Result<ClassLabel> {
    let a_plus = cmp_pow3_pow2(odd as u64, steps as u64).is_gt();
    let (b_seq, t_seq) = checkpoints(p, steps);
    let b_grows = trend::assess(&b_seq, &[]).is_unbounded();
    let t_grows = trend::assess(&t_seq, &[]).is_unbounded();

    let a = if a_plus { APlus } else { A0Minus };
    let b = if a_plus || b_grows { BPlus } else { BMinus };
    let s = if a_plus || b == BPlus || last > reference {
        SPlus
    } else {
        SMinus
    };
    let m = if t_grows && (a_plus || b == BPlus) {
        MClass::MPlus
    } else {
        MClass::MMinus
    };
    ClassLabel::new(R, a, b, s, m)
}

/// `B_d` and `T^d` at evenly spaced depths `d ≤ steps`.
fn checkpoints(p: &Seed, steps: usize) -> (Vec<BigRational>, Vec<BigRational>) {
    let stride = (steps / CHECKPOINTS).max(1);
    let mut b = Dyadic::zero();
    let mut x = p.value().clone();
    let mut bs = Vec::new();
    let mut ts = Vec::new();
    for d in 1..=steps {
        let odd = x.bit(0);
        if odd {
            b = b.scale(1, 1) + Dyadic::new(1, 1);
            x = (x * 3u32 + 1u32) >> 1;
        } else {
            b = b.scale(0, 1);
            x >>= 1;
        }
        if d % stride == 0 {
            bs.push(b.to_rational());
            ts.push(BigRational::from_integer(BigInt::from_biguint(
                Sign::Plus,
                x.clone(),
            )));
        }
    }
    (bs, ts)
}

/// Copies of a unit iterated from a huge first term when judging `S` and `M`
/// of a non-realizable unit.
const UNIT_COPIES: usize = 32;

pub fn classify_unit(u: &PeriodicUnit) -> Result<Verdict> {
    classify_unit_with(u, &ClassifyOptions::default())
}

pub fn classify_unit_with(u: &PeriodicUnit, opts: &ClassifyOptions) -> Result<Verdict> {
    let limit = unit_limit(u);
    let evidence = Evidence {
        depth: u.len(),
        m: u.a_s().pow3 as usize,
        n: u.len(),
        bound: None,
    };

    if let Periodicity::AlphaRealizable { fixed_point } = is_alpha_vs_beta(u) {
        let seed_verdict = classify_seed_with(&Seed::new(fixed_point)?, opts)?;
        return Ok(Verdict {
            seed: None,
            unit: Some(u.to_string()),
            label: seed_verdict.label,
            grade: Grade::Definite,
            b_inf: seed_verdict.b_inf,
            t_inf: seed_verdict.t_inf,
            evidence,
        });
    }

    // A non-realizable object has no finite first term; model it by a first
    // term far above every fixed point and follow one value per copy.
    let a = u.a_s().to_rational();
    let b = u.b_s().to_rational();
    let x0 = BigRational::from_integer(BigInt::one() << (UNIT_COPIES * u.len()));
    let mut orbit = vec![x0.clone()];
    for _ in 0..UNIT_COPIES {
        let next = &a * orbit.last().expect("non-empty") + &b;
        orbit.push(next);
    }
    let increasing = orbit.windows(2).all(|w| w[1] > w[0]);
    let s = if orbit.last().expect("non-empty") > &x0 {
        SPlus
    } else {
        SMinus
    };
    let m = if increasing { MClass::MPlus } else { MClass::MMinus };

    let (a_class, b_class, b_inf, t_inf) = match &limit {
        UnitLimit::Converges { b_inf } => {
            let v = rational_string(b_inf);
            let t = if m == MClass::MPlus { "inf".into() } else { v.clone() };
            (A0Minus, BMinus, v, t)
        }
        UnitLimit::Diverges => (APlus, BPlus, "inf".into(), "inf".into()),
    };
    Ok(Verdict {
        seed: None,
        unit: Some(u.to_string()),
        label: ClassLabel::new(NR, a_class, b_class, s, m)?,
        grade: Grade::Definite,
        b_inf: Some(b_inf),
        t_inf: Some(t_inf),
        evidence,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "flag", content = "reason")]
pub enum WatchFlag {
    NoFlag,
    Flag(String),
}

/// Flags definite realizable verdicts whose label is in [`CONJECTURED_EMPTY`].
pub fn conjecture_watchlist(v: &Verdict) -> WatchFlag {
    if v.grade == Grade::Definite && v.label.is_conjectured_empty() {
        WatchFlag::Flag(format!("conjectured-empty category observed: {}", v.label))
    } else {
        WatchFlag::NoFlag
    }
}

/// Counts from classifying a seed range.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SurveySummary {
    pub seeds: u64,
    pub definite_trivial: u64,
    /// Seeds whose verdict was anything but definite `R[A0-][B-][S-][M-]`
    /// with `b_inf = 1`, in ascending order.
    #[serde(serialize_with = "crate::report::ser_display_vec")]
    pub exceptions: Vec<u64>,
    pub violations: u64,
    pub watch_flags: u64,
}

impl SurveySummary {
    pub fn is_clean(&self) -> bool {
        self.exceptions.is_empty() && self.violations == 0 && self.watch_flags == 0
    }

    fn merge(mut self, other: SurveySummary) -> SurveySummary {
        self.seeds += other.seeds;
        self.definite_trivial += other.definite_trivial;
        self.exceptions.extend(other.exceptions);
        self.violations += other.violations;
        self.watch_flags += other.watch_flags;
        self
    }
}

/// Verdicts for a seed range, in seed order, computed in parallel.
pub fn classify_range(range: RangeInclusive<u64>, opts: &ClassifyOptions) -> Vec<Result<Verdict>> {
    range
        .into_par_iter()
        .map(|p| classify_seed_with(&Seed::try_from(p)?, opts))
        .collect()
}

/// Classify every seed in `range` and tally the outcome.
pub fn survey(range: RangeInclusive<u64>, opts: &ClassifyOptions) -> SurveySummary {
    let one = BigUint::one().to_string();
    let mut summary = range
        .into_par_iter()
        .map(|p| {
            let mut s = SurveySummary {
                seeds: 1,
                ..Default::default()
            };
            match Seed::try_from(p).and_then(|seed| classify_seed_with(&seed, opts)) {
                Ok(v) => {
                    if conjecture_watchlist(&v) != WatchFlag::NoFlag {
                        s.watch_flags += 1;
                    }
                    if v.grade == Grade::Definite
                        && v.label == ClassLabel::trivial_cycle()
                        && v.b_inf.as_deref() == Some(one.as_str())
                    {
                        s.definite_trivial += 1;
                    } else {
                        s.exceptions.push(p);
                    }
                }
                Err(Error::EmptyCategoryViolation(_)) => {
                    s.violations += 1;
                    s.exceptions.push(p);
                }
                Err(_) => s.exceptions.push(p),
            }
            s
        })
        .reduce(SurveySummary::default, SurveySummary::merge);
    summary.exceptions.sort_unstable();
    summary
}

/// `t_inf` as an exact rational, when finite.
pub fn t_inf_value(v: &Verdict) -> Option<BigRational> {
    v.t_inf.as_deref().and_then(crate::report::parse_rational)
}

/// Compare a parsed `b_inf` against an integer.
pub fn b_inf_is(v: &Verdict, value: u64) -> bool {
    v.b_inf
        .as_deref()
        .and_then(crate::report::parse_rational)
        .is_some_and(|b| b == BigRational::from_integer(BigInt::from(value)))
}
