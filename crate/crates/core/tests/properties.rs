use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use avdc::algebraic::{FieldElement, NumberField};
use avdc::automaton::OrderedAutomaton;
use avdc::brs::{prop5_check, thm2_decide, Decision};
use avdc::numeration::{Numeration, Rank};
use avdc::poly::ints;
use avdc::samples;
use avdc::spectral::{PerronEigen, SpectralData};
use avdc::vdc::ValuedWord;
use avdc::word::{cmp_shortlex, EpWord, Letter};

fn ternary_field() -> Arc<NumberField> {
    NumberField::new(ints(&[1, -1, -2, 1])).unwrap()
}

fn element() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-50i64..50, 1i64..20), 3)
}

fn build(f: &Arc<NumberField>, c: &[(i64, i64)]) -> FieldElement {
    let c = c
        .iter()
        .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
        .collect();
    FieldElement::from_coeffs(f, c)
}

/// Random totally ordered automaton: each column is a nondecreasing map on `1..=d`.
fn automaton() -> impl Strategy<Value = OrderedAutomaton> {
    (1usize..5, 1usize..4).prop_flat_map(|(d, sigma)| {
        prop::collection::vec(prop::collection::vec(0..=d, d), sigma).prop_map(move |cols| {
            let mut trans = vec![vec![0; sigma]; d + 1];
            for (a, mut col) in cols.into_iter().enumerate() {
                col.sort_unstable();
                for q in 1..=d {
                    trans[q][a] = col[q - 1];
                }
            }
            OrderedAutomaton::new(trans).unwrap()
        })
    })
}

fn word(sigma: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(0..sigma, 0..=max_len)
}

/// An eventually periodic word over the ternary example that stays in the language.
fn ternary_infinite() -> impl Strategy<Value = EpWord> {
    (word(3, 3), prop::collection::vec(0usize..3, 1..4))
        .prop_map(|(pre, per)| EpWord::new(pre, per).unwrap())
        .prop_filter("stays in L", |u| {
            let aut = samples::ternary();
            aut.accepts(&u.prefix(u.pre().len() + 4 * u.per().len())).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in element(), b in element(), c in element()) {
        let f = ternary_field();
        let (a, b, c) = (build(&f, &a), build(&f, &b), build(&f, &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a - &a, f.zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), f.one());
        }
        prop_assert_eq!((&a + &b).trace(), a.trace() + b.trace());
        let s = BigRational::new(BigInt::from(3), BigInt::from(7));
        prop_assert_eq!(a.scale(&s).trace(), a.trace() * s);
    }

    #[test]
    fn order_agrees_with_enclosures(a in element(), b in element()) {
        let f = ternary_field();
        let (a, b) = (build(&f, &a), build(&f, &b));
        let (alo, ahi) = a.enclosure();
        let (blo, bhi) = b.enclosure();
        match a.cmp_value(&b) {
            Ordering::Less => prop_assert!(alo <= bhi),
            Ordering::Greater => prop_assert!(ahi >= blo),
            Ordering::Equal => prop_assert_eq!(&a, &b),
        }
    }

    #[test]
    fn split_membership_agrees(aut in automaton(), w in word(3, 8)) {
        let w: Vec<Letter> = w.into_iter().map(|a| a % aut.sigma()).collect();
        let mir = aut.mirror();
        let whole = aut.accepts(&w).unwrap();
        for j in 0..=w.len() {
            prop_assert_eq!(aut.split_membership(&mir, &w, j).unwrap(), whole);
        }
    }

    #[test]
    fn mirror_is_involution(aut in automaton(), w in word(3, 8)) {
        let mir = aut.mirror();
        prop_assert_eq!(mir.mirror(), aut.clone());
        let w: Vec<Letter> = w.into_iter().map(|a| a % aut.sigma()).collect();
        let rev: Vec<Letter> = w.iter().rev().copied().collect();
        prop_assert_eq!(aut.accepts(&w).unwrap(), mir.accepts(&rev).unwrap());
        // conjugate partitions have the same size
        for a in 0..aut.sigma() {
            let size: usize = (1..=aut.d()).map(|q| aut.next(q, a)).sum();
            let mirrored: usize = (1..=aut.d()).map(|r| mir.next(r, a)).sum();
            prop_assert_eq!(size, mirrored);
        }
    }

    #[test]
    fn rank_roundtrip(n in 0u64..5000) {
        for aut in [samples::ternary(), samples::beta_cubic()] {
            let num = Numeration::new(&aut);
            let r = Rank::from(n);
            let w = num.unrank(&r).unwrap();
            prop_assert_eq!(num.rank(&w).unwrap(), r.clone());
            let next = num.unrank(&Rank::from(n + 1)).unwrap();
            prop_assert_eq!(cmp_shortlex(&w, &next), Ordering::Less);
            let v = num.lprime_unrank(&r).unwrap();
            prop_assert_eq!(num.lprime_rank(&v).unwrap(), r);
        }
    }

    #[test]
    fn value_is_monotone(u in ternary_infinite(), v in ternary_infinite()) {
        let aut = samples::ternary();
        let eig = PerronEigen::new(&aut).unwrap();
        let vu = ValuedWord::new(&aut, &eig, &u).unwrap();
        let vv = ValuedWord::new(&aut, &eig, &v).unwrap();
        if u.cmp_lex(&v) == Ordering::Less {
            prop_assert_ne!(vu.value().cmp_value(vv.value()), Ordering::Greater);
        }
        prop_assert_ne!(vu.value().signum(), Ordering::Less);
        prop_assert_ne!(vu.value().cmp_value(&eig.field().one()), Ordering::Greater);
    }

    #[test]
    fn thm2_ignores_period_doubling(u in ternary_infinite()) {
        let aut = samples::ternary();
        let sd = SpectralData::new(&aut).unwrap();
        let once = ValuedWord::new(&aut, sd.eigen(), &u).unwrap();
        let twice = ValuedWord::new(&aut, sd.eigen(), &u.with_period_repeated(2)).unwrap();
        let a = thm2_decide(&aut, &sd, &once).unwrap();
        let b = thm2_decide(&aut, &sd, &twice).unwrap();
        prop_assert_eq!(a.decision, b.decision);
    }

    #[test]
    fn prop5_implies_bounded(u in ternary_infinite()) {
        let aut = samples::ternary();
        let sd = SpectralData::new(&aut).unwrap();
        let vu = ValuedWord::new(&aut, sd.eigen(), &u).unwrap();
        if prop5_check(&aut, sd.eigen(), &vu).is_some() {
            prop_assert_eq!(thm2_decide(&aut, &sd, &vu).unwrap().decision, Decision::Bounded);
        }
    }
}
