use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use collatz_lab::classify::{AClass, BClass, MClass, Realizability, SClass, PROVEN_EMPTY};
use collatz_lab::periodic::{copies_for_precision, Periodicity};
use collatz_lab::proportions::ClassTag;
use collatz_lab::series::{ones_then_zeros_b, zeros_then_ones_first_image, zeros_then_ones_seed};
use collatz_lab::{
    build_series, coeffs_of_seed, coeffs_of_vector, evaluate, is_alpha_vs_beta, minimal_seed,
    parity_vector, proportion_a, solve_parity, trajectory, unit_limit, ClassLabel, Dyadic, Error,
    Family, Mode, ParityVector, PeriodicUnit, Seed, UnitLimit,
};

fn seed(v: u64) -> Seed {
    Seed::try_from(v).unwrap()
}

fn big_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

fn bits() -> impl Strategy<Value = ParityVector> {
    prop::collection::vec(any::<bool>(), 0..200).prop_map(ParityVector::new)
}

proptest! {
    #[test]
    fn decomposition_holds(p in 1u64..u64::MAX, n in 0usize..300) {
        let s = seed(p);
        let c = coeffs_of_seed(&s, n);
        let t = trajectory(&s, n);
        prop_assert_eq!(&evaluate(&c, &s).unwrap(), t.last());
        prop_assert_eq!(c.a.pow2 as usize, n);
        prop_assert!(c.b.exp2() as usize <= n);
    }

    #[test]
    fn minimal_seed_realizes_vector(v in bits()) {
        let min = minimal_seed(&v);
        prop_assert_eq!(parity_vector(&min.seed, v.len()), v.clone());
        let modulus = BigUint::one() << v.len();
        prop_assert!(min.seed.value() <= &modulus);
        prop_assert_eq!(min.zero_residue, v.bits().iter().all(|b| !b));
    }

    #[test]
    fn round_trip_through_residue(p in 1u64..u64::MAX, n in 0usize..64) {
        let class = solve_parity(&parity_vector(&seed(p), n));
        prop_assert_eq!(class.residue, BigUint::from(p) % (BigUint::one() << n));
    }

    #[test]
    fn composition_is_concatenation(u in bits(), v in bits()) {
        prop_assert_eq!(
            coeffs_of_vector(&u).then(&coeffs_of_vector(&v)),
            coeffs_of_vector(&u.concat(&v))
        );
    }

    #[test]
    fn dyadic_matches_rationals(a in -1_000_000i64..1_000_000, ea in 0u64..40,
                                b in -1_000_000i64..1_000_000, eb in 0u64..40) {
        let (x, y) = (Dyadic::new(a, ea), Dyadic::new(b, eb));
        prop_assert_eq!((&x + &y).to_rational(), x.to_rational() + y.to_rational());
        prop_assert_eq!((&x - &y).to_rational(), x.to_rational() - y.to_rational());
        prop_assert_eq!((&x * &y).to_rational(), x.to_rational() * y.to_rational());
        prop_assert_eq!(x.cmp(&y), x.to_rational().cmp(&y.to_rational()));
        prop_assert_eq!(x.to_string().parse::<Dyadic>().unwrap(), x.clone());
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<Dyadic>(&json).unwrap(), x);
    }

    #[test]
    fn a_plus_implies_growth(p in 1u64..1_000_000_000, n in 1usize..200) {
        let s = seed(p);
        let c = coeffs_of_seed(&s, n);
        if c.a.cmp_one() == Ordering::Greater && !c.b.is_negative() {
            let t = evaluate(&c, &s).unwrap();
            prop_assert!(&t > s.value());
        }
    }

    #[test]
    fn parity_text_round_trip(v in bits()) {
        prop_assert_eq!(v.to_string().parse::<ParityVector>().unwrap(), v.clone());
        let json = serde_json::to_string(&v).unwrap();
        prop_assert_eq!(serde_json::from_str::<ParityVector>(&json).unwrap(), v);
    }
}

#[test]
fn membership_is_residue_class() {
    // integrality of A·p + B, i.e. 2^n | 3^m·p + N, for every vector of length
    // n <= 12 and every p <= 2^14
    for n in 1..=12usize {
        let modulus = 1u64 << n;
        for word in 0..modulus {
            let v = ParityVector::from_u64(word, n);
            let c = coeffs_of_vector(&v);
            let three_m = c.a.numerator().to_u64().unwrap() % modulus;
            let numer = c.b.numerator_over(n as u64);
            let numer = (numer % BigInt::from(modulus)).to_u64().unwrap();
            let residue = solve_parity(&v).residue.to_u64().unwrap();
            for p in 1..=1u64 << 14 {
                let integral = (three_m * (p % modulus) + numer).is_multiple_of(modulus);
                assert_eq!(integral, p % modulus == residue, "v = {v}, p = {p}");
            }
            // the library's own evaluation agrees on a sample
            for p in [residue.max(1), residue + modulus, residue + 1] {
                let ok = evaluate(&c, &seed(p)).is_ok();
                assert_eq!(ok, p % modulus == residue, "v = {v}, p = {p}");
            }
        }
    }
}

/// All units of length `1..=max_len`.
fn units(max_len: usize) -> impl Iterator<Item = PeriodicUnit> {
    (1..=max_len).flat_map(|n| {
        (0..1u64 << n).map(move |w| PeriodicUnit::new(ParityVector::from_u64(w, n)).unwrap())
    })
}

#[test]
fn geometric_limit_of_converging_units() {
    let one = BigRational::one();
    let eps = BigRational::new(BigInt::one(), BigInt::one() << 40);
    for u in units(10) {
        let UnitLimit::Converges { b_inf } = unit_limit(&u) else {
            continue;
        };
        let a = u.a_s().to_rational();
        let b = u.b_s().to_rational();
        // telescoped recursion equals the closed partial sum for k <= 8
        for k in 0..=8 {
            let partial = &b * (&one - num_traits::pow(a.clone(), k)) / (&one - &a);
            assert_eq!(u.copies(k).b.to_rational(), partial, "unit {u}, k = {k}");
        }
        let k = copies_for_precision(&u, 40).unwrap();
        let gap = (u.copies(k).b.to_rational() - &b_inf).abs();
        assert!(gap <= eps, "unit {u}: {k} copies leave a gap above 2^-40");
    }
}

#[test]
fn diverging_units_grow() {
    for u in units(10) {
        if unit_limit(&u) != UnitLimit::Diverges {
            continue;
        }
        assert_eq!(u.a_s().cmp_one(), Ordering::Greater);
        let bs: Vec<Dyadic> = (0..=32).map(|k| u.copies(k).b).collect();
        assert!(bs.windows(2).all(|w| w[1] > w[0]), "unit {u}");
    }
}

#[test]
fn converging_iff_a_below_one() {
    for u in units(10) {
        let converges = unit_limit(&u).converges();
        assert_eq!(converges, u.a_s().cmp_one() == Ordering::Less, "unit {u}");
        if let UnitLimit::Converges { b_inf } = unit_limit(&u) {
            assert!(!b_inf.is_negative());
        }
    }
}

#[test]
fn alpha_realizable_units_return_to_their_fixed_point() {
    let mut realizable = 0;
    for u in units(16) {
        match is_alpha_vs_beta(&u) {
            Periodicity::AlphaRealizable { fixed_point } => {
                let t = trajectory(&Seed::new(fixed_point.clone()).unwrap(), u.len());
                assert_eq!(t.last(), &fixed_point, "unit {u}");
                realizable += 1;
            }
            Periodicity::BetaOnly => {
                // no integer fixed point realizes a beta-only unit
                if let Some(b) = unit_limit(&u).b_inf() {
                    if b.is_integer() && b.is_positive() {
                        let f = Seed::new(b.to_integer().to_biguint().unwrap()).unwrap();
                        assert_ne!(&parity_vector(&f, u.len()), u.bits(), "unit {u}");
                    }
                }
            }
        }
    }
    // rotations and repetitions of the (1, 2) cycle
    assert!(realizable >= 16);
}

#[test]
fn proven_empty_labels_cannot_be_built() {
    let mut rejected = 0;
    for (s, a, b) in PROVEN_EMPTY {
        let r = ClassLabel::new(Realizability::R, a, b, s, MClass::MMinus);
        assert!(matches!(r, Err(Error::EmptyCategoryViolation(_))));
        rejected += 1;
    }
    assert_eq!(rejected, 7);
    assert!(ClassLabel::new(Realizability::R, AClass::A0Minus, BClass::BMinus, SClass::SMinus, MClass::MPlus).is_err());
}

/// Oracle: first seed whose vector starts with `1^n 0^n`.
fn ones_then_zeros_brute(n: usize) -> u64 {
    let v = collatz_lab::series::ones_then_zeros_vector(n);
    (1..).find(|&p| parity_vector(&seed(p), 2 * n) == v).unwrap()
}

#[test]
fn ones_then_zeros_family() {
    let r = build_series(&Family::OnesThenZeros, 20).unwrap();
    for m in &r.members {
        let n = m.index;
        let expected_a = BigRational::new(BigInt::from(3).pow(n as u32), BigInt::one() << (2 * n));
        assert_eq!(m.coeffs.a.to_rational(), expected_a, "n = {n}");
        assert_eq!(m.coeffs.b.to_rational(), ones_then_zeros_b(n), "n = {n}");
        if n <= 8 {
            assert_eq!(m.seed.value(), &BigUint::from(ones_then_zeros_brute(n)), "n = {n}");
        }
        // closed form of the minimal seed: 2^n·j − 1 with j = 3^{-n} mod 2^n
        let modulus = BigInt::one() << n;
        let j = (1..=(1u64 << n))
            .map(BigInt::from)
            .find(|j| (j * BigInt::from(3).pow(n as u32) % &modulus).is_one() || n == 0)
            .unwrap();
        let p = (&modulus * &j - BigInt::one()).to_biguint().unwrap();
        assert_eq!(m.seed.value(), &p, "n = {n}");
        let terminal = (BigInt::from(3).pow(n as u32) * &j - BigInt::one()) / &modulus;
        assert_eq!(big_rat(&terminal), big_rat(&BigInt::from(m.terminal.clone())));
    }
}

#[test]
fn zeros_then_ones_family() {
    for n in 1..=30usize {
        let three = BigUint::from(3u32);
        let lead = BigUint::one() << (2 * n + 1);
        let lead = if n % 2 == 1 { lead } else { lead * 3u32 };
        let numer = lead - (BigUint::one() << (n + 1)) - 1u32;
        assert!((&numer % &three).is_zero(), "n = {n}");
        let p = zeros_then_ones_seed(n);
        assert!(!p.is_zero());
        assert_eq!(collatz_lab::step(&p), zeros_then_ones_first_image(n), "n = {n}");
    }
    let r = build_series(&Family::ZerosThenOnes, 20).unwrap();
    for m in &r.members {
        assert!(m.terminal < m.first_image || m.index == 1, "n = {}", m.index);
        let n = m.index as u32;
        let expected = if n % 2 == 1 { 3u64.pow(n) - 1 } else { 3u64.pow(n + 1) - 1 };
        assert_eq!(m.terminal, BigUint::from(expected), "n = {n}");
    }
}

#[test]
fn proportion_modes_agree() {
    for n in 0..=16 {
        let exact = proportion_a(n, Mode::ExactBinomial).unwrap();
        let enumerated = proportion_a(n, Mode::Enumeration).unwrap();
        assert_eq!(exact.counts, enumerated.counts, "n = {n}");
        let total = &exact.counts[&ClassTag::APlus] + &exact.counts[&ClassTag::AMinus];
        assert_eq!(total, BigUint::one() << n);
    }
}

#[test]
fn odd_fraction_is_one_half() {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for n in [1, 2, 3, 7, 20, 64, 513, 4096] {
        assert_eq!(proportion_a(n, Mode::ExactBinomial).unwrap().odd_fraction_mean, half);
    }
}

#[test]
fn minimal_seeds_of_ones() {
    for n in 1..=12 {
        let v = ParityVector::new(vec![true; n]);
        assert_eq!(minimal_seed(&v).seed, seed((1 << n) - 1));
    }
}
