//! Sequential series: nested families of finite trajectories whose parity
//! vectors extend one another, and the limits read off them.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{
    classify_seed_with, AClass, BClass, ClassLabel, Grade, MClass, Realizability, SClass,
};
use crate::coeffs::{coeffs_of_vector, evaluate, CoeffPair};
use crate::collatz::{step, Seed};
use crate::config::{ClassifyOptions, SERIES_INDEX_CAP};
use crate::error::{Error, Result};
use crate::parity::{check_prefix_chain, minimal_seed, parity_vector, ParityVector};
use crate::report::rational_string;
use crate::trend::{self, Trend};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// Minimal seeds of `1^n 0^n`, depth `2n`.
    OnesThenZeros,
    /// `N(n)` with vector `1 0^n 1^n`, depth `2n + 1`.
    ZerosThenOnes,
    /// Minimal seeds of caller-supplied, prefix-nested vectors.
    FromPrefixes(Vec<ParityVector>),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::OnesThenZeros => "ones-zeros",
            Family::ZerosThenOnes => "zeros-ones",
            Family::FromPrefixes(_) => "prefixes",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesMember {
    pub index: usize,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub seed: Seed,
    pub depth: usize,
    pub vector: ParityVector,
    pub coeffs: CoeffPair,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub first_image: BigUint,
    /// `T^depth(seed)`.
    #[serde(serialize_with = "crate::report::ser_display")]
    pub terminal: BigUint,
}

impl SeriesMember {
    fn new(index: usize, seed: Seed, vector: ParityVector) -> SeriesMember {
        let coeffs = coeffs_of_vector(&vector);
        let terminal = evaluate(&coeffs, &seed).expect("seed realizes its own vector");
        SeriesMember {
            index,
            first_image: step(seed.value()),
            depth: vector.len(),
            seed,
            vector,
            coeffs,
            terminal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub family: &'static str,
    pub members: Vec<SeriesMember>,
    pub seed_trend: Trend,
    pub a_trend: Trend,
    pub b_trend: Trend,
    pub terminal_trend: Trend,
}

/// `N(n) = (2^{2n+1} − 2^{n+1} − 1)/3` for odd `n`, `(3·2^{2n+1} − 2^{n+1} − 1)/3` for even `n`.
pub fn zeros_then_ones_seed(n: usize) -> BigUint {
    let lead = BigUint::one() << (2 * n + 1);
    let lead = if n % 2 == 1 { lead } else { lead * 3u32 };
    let numer = lead - (BigUint::one() << (n + 1)) - 1u32;
    debug_assert!((&numer % 3u32).is_zero());
    numer / 3u32
}

pub fn ones_then_zeros_vector(n: usize) -> ParityVector {
    let mut bits = vec![true; n];
    bits.extend(std::iter::repeat_n(false, n));
    bits.into()
}

pub fn zeros_then_ones_vector(n: usize) -> ParityVector {
    let mut bits = vec![true];
    bits.extend(std::iter::repeat_n(false, n));
    bits.extend(std::iter::repeat_n(true, n));
    bits.into()
}

fn member(family: &Family, index: usize) -> SeriesMember {
    match family {
        Family::OnesThenZeros => {
            let v = ones_then_zeros_vector(index);
            SeriesMember::new(index, minimal_seed(&v).seed, v)
        }
        Family::ZerosThenOnes => {
            let seed = Seed::new(zeros_then_ones_seed(index)).expect("N(n) > 0");
            let v = parity_vector(&seed, 2 * index + 1);
            assert_eq!(v, zeros_then_ones_vector(index), "N({index}) has the wrong shape");
            SeriesMember::new(index, seed, v)
        }
        Family::FromPrefixes(vs) => {
            let v = vs[index - 1].clone();
            SeriesMember::new(index, minimal_seed(&v).seed, v)
        }
    }
}

/// Members `1 ..= max_index` of a family with their trends.
///
/// Named families nest block by block (each run of one vector is extended
/// in the next); caller prefixes must nest as strict prefixes.
pub fn build_series(family: &Family, max_index: usize) -> Result<SeriesReport> {
    let max_index = match family {
        Family::FromPrefixes(vs) => {
            check_prefix_chain(vs)?;
            vs.len().min(max_index)
        }
        _ => max_index,
    };
    if max_index > SERIES_INDEX_CAP {
        return Err(Error::IndexTooLarge {
            index: max_index,
            cap: SERIES_INDEX_CAP,
        });
    }
    if max_index == 0 {
        return Err(Error::InsufficientEvidence { needed: 1, got: 0 });
    }

    let members: Vec<SeriesMember> = (1..=max_index)
        .into_par_iter()
        .map(|k| member(family, k))
        .collect();
    if !matches!(family, Family::FromPrefixes(_)) {
        for (i, w) in members.windows(2).enumerate() {
            assert!(
                w[0].vector.is_run_nested_in(&w[1].vector) && w[0].depth < w[1].depth,
                "member {i} is not nested in its successor"
            );
        }
    }

    let seeds: Vec<BigUint> = members.iter().map(|m| m.seed.value().clone()).collect();
    let a: Vec<BigRational> = members.iter().map(|m| m.coeffs.a.to_rational()).collect();
    let b: Vec<BigRational> = members.iter().map(|m| m.coeffs.b.to_rational()).collect();
    let terminals: Vec<BigUint> = members.iter().map(|m| m.terminal.clone()).collect();
    Ok(SeriesReport {
        family: family.name(),
        seed_trend: trend::assess_integers(&seeds),
        a_trend: trend::assess(&a, &[]),
        b_trend: trend::assess(&b, &[]),
        terminal_trend: trend::assess_integers(&terminals),
        members,
    })
}

impl SeriesReport {
    /// Columns `member seed A B terminal`.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>6}  {:>24}  {:>28}  {:>28}  {:>24}",
            "member", "seed", "A", "B", "terminal"
        );
        for m in &self.members {
            let _ = writeln!(
                out,
                "{:>6}  {:>24}  {:>28}  {:>28}  {:>24}",
                m.index,
                m.seed.to_string(),
                m.coeffs.a.to_string(),
                m.coeffs.b.to_string(),
                m.terminal.to_string()
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitSummary {
    pub realizable: bool,
    /// `P_∞`, when the seeds settle.
    #[serde(serialize_with = "crate::report::ser_opt_display")]
    pub p_inf: Option<BigUint>,
    pub a_inf: String,
    pub b_inf: String,
    pub t_inf: String,
    pub label: ClassLabel,
    pub grade: Grade,
}

fn limit_text(t: &Trend) -> String {
    match t {
        Trend::GrowsUnbounded => "inf".into(),
        Trend::Inconclusive => "unknown".into(),
        other => rational_string(&other.limit().expect("finite trend")),
    }
}

/// Read the absolute limits off the trends and attach a label.
///
/// Settled seeds make the limit object a concrete seed, labelled by
/// classifying it. Otherwise the label is non-realizable with `A`, `B` and `M`
/// from the trends and `S` from the last three members.
pub fn series_limits(r: &SeriesReport) -> Result<LimitSummary> {
    series_limits_with(r, &ClassifyOptions::default())
}

pub fn series_limits_with(r: &SeriesReport, opts: &ClassifyOptions) -> Result<LimitSummary> {
    if r.members.len() < 3 {
        return Err(Error::InsufficientEvidence {
            needed: 3,
            got: r.members.len(),
        });
    }

    if let Trend::StabilizesAt(p) = &r.seed_trend {
        let p = p.to_integer().to_biguint().expect("seeds are positive");
        let v = classify_seed_with(&Seed::new(p.clone())?, opts)?;
        return Ok(LimitSummary {
            realizable: true,
            p_inf: Some(p),
            a_inf: if v.grade == Grade::Definite { "0".into() } else { "unknown".into() },
            b_inf: v.b_inf.unwrap_or_else(|| "unknown".into()),
            t_inf: v.t_inf.unwrap_or_else(|| "unknown".into()),
            label: v.label,
            grade: v.grade,
        });
    }

    let one = BigRational::one();
    let last_a = r.members.last().expect("non-empty").coeffs.a.to_rational();
    let a = match &r.a_trend {
        Trend::TendsToZero => AClass::A0Minus,
        Trend::GrowsUnbounded => AClass::APlus,
        Trend::StabilizesAt(x) | Trend::TendsTo(x) if x.is_zero() => AClass::A0Minus,
        Trend::StabilizesAt(x) | Trend::TendsTo(x) if *x < one => AClass::A1Minus,
        Trend::StabilizesAt(_) | Trend::TendsTo(_) => AClass::APlus,
        Trend::Inconclusive if last_a > one => AClass::APlus,
        Trend::Inconclusive => AClass::A0Minus,
    };
    let b = if r.b_trend.is_unbounded() {
        BClass::BPlus
    } else {
        BClass::BMinus
    };
    let tail = &r.members[r.members.len() - 3..];
    let s = if tail.iter().all(|m| m.terminal > m.first_image) {
        SClass::SPlus
    } else {
        SClass::SMinus
    };
    let m = if r.terminal_trend.is_unbounded() {
        MClass::MPlus
    } else {
        MClass::MMinus
    };
    let decided = [&r.a_trend, &r.b_trend, &r.terminal_trend, &r.seed_trend]
        .iter()
        .all(|t| **t != Trend::Inconclusive);

    Ok(LimitSummary {
        realizable: false,
        p_inf: None,
        a_inf: limit_text(&r.a_trend),
        b_inf: limit_text(&r.b_trend),
        t_inf: limit_text(&r.terminal_trend),
        label: ClassLabel::new(Realizability::NR, a, b, s, m)?,
        grade: if decided { Grade::Definite } else { Grade::Heuristic },
    })
}

/// `((3/2)^n − 1) / 2^n`.
pub fn ones_then_zeros_b(n: usize) -> BigRational {
    let n32 = n as u32;
    let three = BigInt::from(3u32).pow(n32);
    let two = BigInt::one() << n;
    (BigRational::new(three, two.clone()) - BigRational::one()) / BigRational::from_integer(two)
}

/// `T^1(N(n))`: `2^{2n} − 2^n` for odd `n`, `3·2^{2n} − 2^n` for even `n`.
pub fn zeros_then_ones_first_image(n: usize) -> BigUint {
    let lead = BigUint::one() << (2 * n);
    let lead = if n % 2 == 1 { lead } else { lead * 3u32 };
    lead - (BigUint::one() << n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Dyadic;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ones_then_zeros_examples() {
        let r = build_series(&Family::OnesThenZeros, 2).unwrap();
        let m1 = &r.members[0];
        assert_eq!((m1.seed.to_string(), m1.vector.to_string()), ("1".into(), "10".into()));
        assert_eq!(m1.coeffs.a.to_rational(), rat(3, 4));
        assert_eq!(m1.coeffs.b.to_rational(), rat(1, 4));
        let m2 = &r.members[1];
        assert_eq!((m2.seed.to_string(), m2.vector.to_string()), ("3".into(), "1100".into()));
        assert_eq!(m2.coeffs.a.to_rational(), rat(9, 16));
        assert_eq!(m2.coeffs.b.to_rational(), rat(5, 16));
        assert_eq!(ones_then_zeros_b(2), rat(5, 16));
    }

    #[test]
    fn ones_then_zeros_minimal_seeds() {
        let r = build_series(&Family::OnesThenZeros, 6).unwrap();
        let seeds: Vec<String> = r.members.iter().map(|m| m.seed.to_string()).collect();
        assert_eq!(seeds, ["1", "3", "23", "15", "863", "2623"]);
    }

    #[test]
    fn zeros_then_ones_examples() {
        let firsts: Vec<BigUint> = (1..=5).map(zeros_then_ones_seed).collect();
        let expected: Vec<BigUint> = [1u32, 29, 37, 501, 661].map(BigUint::from).to_vec();
        assert_eq!(firsts, expected);

        let r = build_series(&Family::ZerosThenOnes, 5).unwrap();
        let m5 = &r.members[4];
        assert_eq!(m5.seed.to_string(), "661");
        assert_eq!(m5.first_image, BigUint::from(992u32));
        assert_eq!(m5.depth, 11);
        assert_eq!(m5.coeffs.a.to_string(), "729/2048");
        assert_eq!(m5.coeffs.b, Dyadic::new(13747, 11));
        assert_eq!(zeros_then_ones_first_image(5), BigUint::from(992u32));
    }

    #[test]
    fn limits_of_named_families() {
        let r = build_series(&Family::OnesThenZeros, 32).unwrap();
        assert_eq!(r.seed_trend, Trend::GrowsUnbounded);
        assert_eq!(r.a_trend, Trend::TendsToZero);
        assert_eq!(r.b_trend, Trend::TendsToZero);
        let l = series_limits(&r).unwrap();
        assert!(!l.realizable);
        assert_eq!(l.label.to_string(), "NR[A0-][B-][S-][M+]");
        assert_eq!((l.a_inf.as_str(), l.b_inf.as_str()), ("0", "0"));

        let r = build_series(&Family::ZerosThenOnes, 32).unwrap();
        let l = series_limits(&r).unwrap();
        assert_eq!(l.label.to_string(), "NR[A0-][B+][S-][M+]");
        assert_eq!(l.b_inf, "inf");
    }

    #[test]
    fn prefixes_of_seven_settle() {
        let v = parity_vector(&Seed::try_from(7).unwrap(), 16);
        let prefixes = crate::parity::prefixes(&v);
        let r = build_series(&Family::FromPrefixes(prefixes), 16).unwrap();
        assert_eq!(r.seed_trend, Trend::StabilizesAt(rat(7, 1)));
        let l = series_limits(&r).unwrap();
        assert!(l.realizable);
        assert_eq!(l.p_inf, Some(BigUint::from(7u32)));
        assert_eq!(l.label.to_string(), "R[A0-][B-][S-][M-]");
    }

    #[test]
    fn errors() {
        let bad = Family::FromPrefixes(vec!["1".parse().unwrap(), "0".parse().unwrap()]);
        assert_eq!(build_series(&bad, 2), Err(Error::NotNested { index: 0 }));
        assert!(matches!(
            build_series(&Family::OnesThenZeros, SERIES_INDEX_CAP + 1),
            Err(Error::IndexTooLarge { .. })
        ));
        let r = build_series(&Family::OnesThenZeros, 2).unwrap();
        assert_eq!(
            series_limits(&r),
            Err(Error::InsufficientEvidence { needed: 3, got: 2 })
        );
    }

    #[test]
    fn table_layout() {
        let r = build_series(&Family::ZerosThenOnes, 2).unwrap();
        let t = r.table();
        assert_eq!(t.lines().count(), 3);
        assert!(t.lines().next().unwrap().contains("terminal"));
        assert!(t.contains("29"));
    }
}
