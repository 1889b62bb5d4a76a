//! Class proportions over all `2^n` parity vectors of length `n`.
//!
//! `A_n = 3^m/2^n` exceeds 1 exactly when the popcount `m` reaches the
//! threshold `m*(n) = min{m : 3^m > 2^n}`, so the `A+` count is the binomial
//! tail `Σ_{m ≥ m*} C(n, m)`. All ratios are exact.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::coeffs::cmp_pow3_pow2;
use crate::collatz::{iterate, step};
use crate::config::{BINOMIAL_ORDER_CAP, ENUMERATION_ORDER_CAP};
use crate::error::{Error, Result};
use crate::report::{rational_string, ser_rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    ExactBinomial,
    Enumeration,
}

/// Which vectors are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Population {
    /// Every vector in `{0,1}^n`.
    #[default]
    AllVectors,
    /// Vectors whose first bit is 1 (odd seeds), `2^{n−1}` of them.
    OddSeeds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ClassTag {
    APlus,
    AMinus,
    SPlus,
    SMinus,
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProportionReport {
    pub order: usize,
    pub mode: Mode,
    pub population: Population,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub total: BigUint,
    #[serde(serialize_with = "ser_counts")]
    pub counts: BTreeMap<ClassTag, BigUint>,
    #[serde(serialize_with = "ser_ratios")]
    pub ratios: BTreeMap<ClassTag, BigRational>,
    #[serde(serialize_with = "ser_rational")]
    pub odd_fraction_mean: BigRational,
    /// `|r_n(S+) − r_n(A+)|`, for S reports.
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(serialize_with = "crate::report::ser_opt_display")]
    pub s_gap: Option<RationalText>,
}

/// A rational that displays as `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalText(pub BigRational);

impl fmt::Display for RationalText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational_string(&self.0))
    }
}

fn ser_counts<S: serde::Serializer>(
    m: &BTreeMap<ClassTag, BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k.to_string(), v.to_string())))
}

fn ser_ratios<S: serde::Serializer>(
    m: &BTreeMap<ClassTag, BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k.to_string(), rational_string(v))))
}

impl ProportionReport {
    pub fn count(&self, tag: ClassTag) -> Option<&BigUint> {
        self.counts.get(&tag)
    }

    pub fn ratio(&self, tag: ClassTag) -> Option<&BigRational> {
        self.ratios.get(&tag)
    }

    /// `order,a_plus_count,total,ratio_num,ratio_den`, without a header.
    pub fn csv_record(&self) -> [String; 5] {
        let r = &self.ratios[&ClassTag::APlus];
        [
            self.order.to_string(),
            self.counts[&ClassTag::APlus].to_string(),
            self.total.to_string(),
            r.numer().to_string(),
            r.denom().to_string(),
        ]
    }
}

pub const CSV_HEADER: [&str; 5] = ["order", "a_plus_count", "total", "ratio_num", "ratio_den"];

/// Write reports as CSV with [`CSV_HEADER`].
pub fn write_csv<W: Write>(reports: &[ProportionReport], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in reports {
        w.write_record(r.csv_record())?;
    }
    w.flush()
}

/// `m*(n)`: the least `m` with `3^m > 2^n`.
pub fn threshold(n: usize) -> usize {
    // start just below n·log_3(2) and step up
    let mut m = ((n as f64) * std::f64::consts::LN_2 / 3f64.ln()).floor() as usize;
    m = m.saturating_sub(2);
    while !cmp_pow3_pow2(m as u64, n as u64).is_gt() {
        m += 1;
    }
    m
}

/// Row `n` of Pascal's triangle, exact.
pub fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * (n - k) / (k + 1);
        row.push(c.clone());
    }
    row
}

fn rational(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(
        BigInt::from_biguint(Sign::Plus, num.clone()),
        BigInt::from_biguint(Sign::Plus, den.clone()),
    )
}

fn check_cap(n: usize, mode: Mode) -> Result<()> {
    let (cap, cap_name) = match mode {
        Mode::ExactBinomial => (BINOMIAL_ORDER_CAP, "exact binomial order"),
        Mode::Enumeration => (ENUMERATION_ORDER_CAP, "enumeration order"),
    };
    if n > cap {
        return Err(Error::OrderTooLarge {
            order: n,
            cap,
            cap_name,
        });
    }
    Ok(())
}

/// Histogram of popcounts over the population: `hist[m]` vectors have `m` ones.
fn popcount_histogram(n: usize, mode: Mode, population: Population) -> Vec<BigUint> {
    match mode {
        Mode::ExactBinomial => match population {
            Population::AllVectors => binomial_row(n),
            Population::OddSeeds => {
                let mut h = vec![BigUint::zero()];
                h.extend(binomial_row(n - 1));
                h
            }
        },
        Mode::Enumeration => {
            let total = 1u64 << n;
            let counts = (0..total)
                .into_par_iter()
                .filter(|w| population == Population::AllVectors || w & 1 == 1)
                .fold(
                    || vec![0u64; n + 1],
                    |mut acc, w| {
                        acc[w.count_ones() as usize] += 1;
                        acc
                    },
                )
                .reduce(
                    || vec![0u64; n + 1],
                    |mut a, b| {
                        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                        a
                    },
                );
            counts.into_iter().map(BigUint::from).collect()
        }
    }
}

/// `r_n(A+)` and `r_n(A−)`.
pub fn proportion_a(n: usize, mode: Mode) -> Result<ProportionReport> {
    proportion_a_in(n, mode, Population::AllVectors)
}

pub fn proportion_a_in(n: usize, mode: Mode, population: Population) -> Result<ProportionReport> {
    check_cap(n, mode)?;
    if population == Population::OddSeeds && n == 0 {
        return Err(Error::DegenerateOrder(0));
    }
    let hist = popcount_histogram(n, mode, population);
    let total: BigUint = hist.iter().sum();
    let m_star = threshold(n);
    let a_plus: BigUint = hist.iter().skip(m_star).sum();
    let a_minus = &total - &a_plus;

    let odd_fraction_mean = if n == 0 {
        BigRational::zero()
    } else {
        let ones: BigUint = hist.iter().enumerate().map(|(m, c)| c * m).sum();
        rational(&ones, &(&total * n))
    };

    let mut counts = BTreeMap::new();
    let mut ratios = BTreeMap::new();
    ratios.insert(ClassTag::APlus, rational(&a_plus, &total));
    ratios.insert(ClassTag::AMinus, rational(&a_minus, &total));
    counts.insert(ClassTag::APlus, a_plus);
    counts.insert(ClassTag::AMinus, a_minus);
    Ok(ProportionReport {
        order: n,
        mode,
        population,
        total,
        counts,
        ratios,
        odd_fraction_mean,
        s_gap: None,
    })
}

/// `r_n(S+)` over the minimal seeds `1 ..= 2^n` of all length-`n` vectors.
///
/// `S+` means `T^n(p) > T^1(p)`; at `n = 1` that comparison is void and
/// `T^1(p) > p` is used instead.
pub fn proportion_s(n: usize) -> Result<ProportionReport> {
    if n == 0 {
        return Err(Error::DegenerateOrder(0));
    }
    check_cap(n, Mode::Enumeration)?;
    let (s_plus, a_plus, ones) = (1u64..=1 << n)
        .into_par_iter()
        .map(|p| {
            let big = BigUint::from(p);
            let first = step(&big);
            let s = if n == 1 {
                first > big
            } else {
                iterate(&first, n - 1) > first
            };
            let m = crate::collatz::parity_bits(&big, n).iter().filter(|&&b| b).count();
            let a = cmp_pow3_pow2(m as u64, n as u64).is_gt();
            (u64::from(s), u64::from(a), m as u64)
        })
        .reduce(|| (0, 0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2));

    let total = BigUint::one() << n;
    let s_plus = BigUint::from(s_plus);
    let a_plus = BigUint::from(a_plus);
    let r_s = rational(&s_plus, &total);
    let r_a = rational(&a_plus, &total);
    let gap = (&r_s - &r_a).abs();

    let mut counts = BTreeMap::new();
    let mut ratios = BTreeMap::new();
    ratios.insert(ClassTag::SPlus, r_s.clone());
    ratios.insert(ClassTag::SMinus, BigRational::one() - &r_s);
    ratios.insert(ClassTag::APlus, r_a.clone());
    ratios.insert(ClassTag::AMinus, BigRational::one() - &r_a);
    counts.insert(ClassTag::SMinus, &total - &s_plus);
    counts.insert(ClassTag::SPlus, s_plus);
    counts.insert(ClassTag::AMinus, &total - &a_plus);
    counts.insert(ClassTag::APlus, a_plus);
    Ok(ProportionReport {
        order: n,
        mode: Mode::Enumeration,
        population: Population::AllVectors,
        odd_fraction_mean: rational(&BigUint::from(ones), &(&total * n)),
        total,
        counts,
        ratios,
        s_gap: Some(RationalText(gap)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepTarget {
    AProportion,
    SGap,
    OddFraction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepVerdict {
    Decreasing,
    Increasing,
    Flat,
    NonMonotone,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub order: usize,
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
    /// For odd-fraction sweeps: odd steps over all steps on the way to 1,
    /// pooled over seeds `1 ..= 2^n` (enumeration orders only).
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(serialize_with = "crate::report::ser_opt_display")]
    pub realizable: Option<RationalText>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub target: SweepTarget,
    pub rows: Vec<SweepRow>,
    pub verdict: SweepVerdict,
}

/// Pooled odd fraction of trajectories to 1 for seeds `1 ..= 2^n`.
pub fn realizable_odd_fraction(n: usize) -> Result<BigRational> {
    check_cap(n, Mode::Enumeration)?;
    let (odd, steps) = (1u64..=1 << n)
        .into_par_iter()
        .map(|p| {
            let (mut x, mut odd, mut steps) = (u128::from(p), 0u64, 0u64);
            while x != 1 {
                if x & 1 == 1 {
                    x = (3 * x + 1) >> 1;
                    odd += 1;
                } else {
                    x >>= 1;
                }
                steps += 1;
            }
            (odd, steps)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(BigRational::new(BigInt::from(odd), BigInt::from(steps.max(1))))
}

pub fn convergence_sweep(orders: &[usize], target: SweepTarget) -> Result<SweepReport> {
    if orders.is_empty() {
        return Err(Error::InsufficientEvidence { needed: 1, got: 0 });
    }
    let rows = orders
        .iter()
        .map(|&n| {
            let (value, realizable) = match target {
                SweepTarget::AProportion => (
                    proportion_a(n, Mode::ExactBinomial)?.ratios[&ClassTag::APlus].clone(),
                    None,
                ),
                SweepTarget::SGap => (proportion_s(n)?.s_gap.expect("S report").0, None),
                SweepTarget::OddFraction => {
                    let all = proportion_a(n, Mode::ExactBinomial)?.odd_fraction_mean;
                    let real = if n <= ENUMERATION_ORDER_CAP {
                        Some(RationalText(realizable_odd_fraction(n)?))
                    } else {
                        None
                    };
                    (all, real)
                }
            };
            Ok(SweepRow {
                order: n,
                value,
                realizable,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = monotonicity(rows.iter().map(|r| &r.value));
    Ok(SweepReport {
        target,
        rows,
        verdict,
    })
}

fn monotonicity<'a>(values: impl Iterator<Item = &'a BigRational>) -> SweepVerdict {
    let v: Vec<&BigRational> = values.collect();
    let pairs = || v.windows(2);
    if pairs().all(|w| w[0] == w[1]) {
        SweepVerdict::Flat
    } else if pairs().all(|w| w[1] < w[0]) {
        SweepVerdict::Decreasing
    } else if pairs().all(|w| w[1] > w[0]) {
        SweepVerdict::Increasing
    } else {
        SweepVerdict::NonMonotone
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn a_examples() {
        for (n, count, r) in [(4, 5u32, rat(5, 16)), (8, 37, rat(37, 256)), (1, 1, rat(1, 2))] {
            for mode in [Mode::ExactBinomial, Mode::Enumeration] {
                let rep = proportion_a(n, mode).unwrap();
                assert_eq!(rep.count(ClassTag::APlus), Some(&BigUint::from(count)));
                assert_eq!(rep.ratio(ClassTag::APlus), Some(&r));
                assert_eq!(rep.odd_fraction_mean, rat(1, 2));
            }
        }
        assert_eq!(proportion_a(3, Mode::ExactBinomial).unwrap().ratios[&ClassTag::APlus], rat(1, 2));
        assert_eq!(proportion_a(2, Mode::ExactBinomial).unwrap().ratios[&ClassTag::APlus], rat(1, 4));
    }

    #[test]
    fn thresholds() {
        assert_eq!(threshold(4), 3);
        assert_eq!(threshold(8), 6);
        assert_eq!(threshold(0), 1);
        for n in 0..300 {
            let m = threshold(n);
            assert!(cmp_pow3_pow2(m as u64, n as u64).is_gt());
            assert!(m == 0 || !cmp_pow3_pow2(m as u64 - 1, n as u64).is_gt());
        }
    }

    #[test]
    fn odd_population() {
        let rep = proportion_a_in(4, Mode::ExactBinomial, Population::OddSeeds).unwrap();
        // first bit fixed to 1: C(3,2) + C(3,3)
        assert_eq!(rep.counts[&ClassTag::APlus], BigUint::from(4u32));
        assert_eq!(rep.total, BigUint::from(8u32));
        let e = proportion_a_in(4, Mode::Enumeration, Population::OddSeeds).unwrap();
        assert_eq!(e.counts, rep.counts);
        assert_eq!(e.odd_fraction_mean, rep.odd_fraction_mean);
    }

    #[test]
    fn s_examples() {
        let r2 = proportion_s(2).unwrap();
        assert_eq!(r2.ratios[&ClassTag::SPlus], rat(1, 2));
        assert_eq!(r2.counts[&ClassTag::SPlus], BigUint::from(2u32));
        let r1 = proportion_s(1).unwrap();
        assert_eq!(r1.ratios[&ClassTag::SPlus], rat(1, 2));
        assert_eq!(proportion_s(0), Err(Error::DegenerateOrder(0)));
        assert!(matches!(proportion_s(21), Err(Error::OrderTooLarge { .. })));
    }

    #[test]
    fn caps() {
        assert!(proportion_a(4096, Mode::ExactBinomial).is_ok());
        assert!(matches!(
            proportion_a(4097, Mode::ExactBinomial),
            Err(Error::OrderTooLarge { .. })
        ));
        assert!(matches!(
            proportion_a(21, Mode::Enumeration),
            Err(Error::OrderTooLarge { .. })
        ));
    }

    #[test]
    fn sweeps() {
        let s = convergence_sweep(&[4, 8, 16, 32, 64], SweepTarget::AProportion).unwrap();
        assert_eq!(s.verdict, SweepVerdict::Decreasing);
        assert_eq!(s.rows[0].value, rat(5, 16));
        assert_eq!(s.rows[1].value, rat(37, 256));

        let s = convergence_sweep(&[3, 9, 40], SweepTarget::OddFraction).unwrap();
        assert_eq!(s.verdict, SweepVerdict::Flat);
        assert!(s.rows[0].realizable.is_some());
        assert!(s.rows[2].realizable.is_none());

        let s = convergence_sweep(&[2, 4, 8, 12], SweepTarget::SGap).unwrap();
        assert_eq!(s.rows.len(), 4);
        assert!(convergence_sweep(&[], SweepTarget::SGap).is_err());
    }

    #[test]
    fn csv_layout() {
        let reps = [proportion_a(4, Mode::ExactBinomial).unwrap()];
        let mut buf = Vec::new();
        write_csv(&reps, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "order,a_plus_count,total,ratio_num,ratio_den\n4,5,16,5,16\n"
        );
    }
}
