//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use avdc::algebraic::{FieldElement, NumberField};
use avdc::automaton::OrderedAutomaton;
use avdc::beta::{beta_automaton, beta_polynomial, quasi_greedy_one};
use avdc::brs::{empirical_check, prop5_check, thm2_decide, Decision};
use avdc::discrepancy::{approx, Discrepancy};
use avdc::error::SpectralError;
use avdc::numeration::{Numeration, Rank};
use avdc::poly::ints;
use avdc::samples;
use avdc::spectral::{charpoly, is_pisot_automaton, PerronEigen, SpectralData};
use avdc::vdc::{ValuedWord, VdcSequence};
use avdc::word::{EpWord, Letter};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn table(rows: &[&[usize]]) -> Vec<Vec<usize>> {
    let sigma = rows[0].len();
    std::iter::once(vec![0; sigma])
        .chain(rows.iter().map(|r| r.to_vec()))
        .collect()
}

fn words(aut: &OrderedAutomaton, max_len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..aut.sigma() {
                let mut v: Vec<Letter> = w.clone();
                v.push(a);
                if aut.accepts(&v).unwrap() {
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

fn mirror_tables() -> Outcome {
    let ex1 = samples::ternary();
    let ex2 = samples::beta_cubic();
    let t = Instant::now();
    let (m1, m2) = (ex1.mirror(), ex2.mirror());
    let el = t.elapsed();
    let want1 = table(&[&[2, 0, 0], &[3, 1, 0], &[3, 1, 3]]);
    let want2 = table(&[&[2, 2, 1, 1, 0], &[3, 2, 1, 1, 0], &[3, 2, 1, 1, 1]]);
    let ok = m1.table() == want1.as_slice() && m2.table() == want2.as_slice();
    outcome(ok && within(el, Duration::from_millis(1)), format!("{el:?}"))
}

fn spectral_exactness() -> Outcome {
    let t = Instant::now();
    let aut = samples::ternary();
    let sd = SpectralData::new(&aut).unwrap();
    let b = sd.beta();
    let f = sd.field();
    let b2 = b * b;
    let want = [
        &b2 - &b.scale(&BigRational::from_integer(2.into())),
        &(&(-&b2) + &b.scale(&BigRational::from_integer(3.into()))) - &f.one(),
        f.one(),
    ];
    let exact = (1..=3).all(|q| sd.eta(q) == &want[q - 1]);
    let decimals = [0.555, 0.692, 1.0];
    let close = (1..=3).all(|q| (sd.eta(q).to_f64() - decimals[q - 1]).abs() < 1e-3);
    let cp = charpoly(&aut.incidence()) == ints(&[1, -1, -2, 1]);
    let el = t.elapsed();
    outcome(
        exact && close && cp && within(el, Duration::from_secs(1)),
        format!(
            "eta ≈ ({}, {}, {}), {el:?}",
            sd.eta(1).to_decimal(3),
            sd.eta(2).to_decimal(3),
            sd.eta(3).to_decimal(3)
        ),
    )
}

fn zeta_normalization() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    for aut in [samples::ternary(), samples::beta_cubic()] {
        let sd = SpectralData::new(&aut).unwrap();
        let d = aut.d();
        let f = sd.field();
        for q in 0..=d {
            let eta = if q == 0 { f.zero() } else { sd.eta(q).clone() };
            for r in 0..=d {
                let want = if q + r > d && q > 0 && r > 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                ok &= sd.zeta(r, &eta) == want;
            }
        }
    }
    let el = t.elapsed();
    outcome(ok && within(el, Duration::from_secs(1)), format!("{el:?}"))
}

/// `#L^k_{q,r}` as `Σ_{s+r>d} (M^k)_{q,s}`.
fn count_by_matrix(aut: &OrderedAutomaton, q: usize, r: usize, k: u32) -> BigUint {
    if q == 0 {
        return BigUint::zero();
    }
    let m = aut.incidence();
    let d = aut.d();
    let mut row: Vec<BigUint> = (0..d).map(|s| BigUint::from(u8::from(s + 1 == q))).collect();
    for _ in 0..k {
        row = (0..d)
            .map(|c| (0..d).map(|i| &row[i] * BigUint::from(m.get(i, c))).sum())
            .collect();
    }
    (1..=d).filter(|s| s + r > d).map(|s| row[s - 1].clone()).sum()
}

fn count_by_enumeration(aut: &OrderedAutomaton, q: usize, r: usize, k: u32) -> BigUint {
    let total = aut.sigma().pow(k);
    let mut n = 0u64;
    for code in 0..total {
        let mut c = code;
        let mut s = q;
        for _ in 0..k {
            s = aut.next(s, c % aut.sigma());
            c /= aut.sigma();
        }
        if s > 0 && s + r > aut.d() {
            n += 1;
        }
    }
    BigUint::from(n)
}

fn count_identity() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    let mut checked = 0;
    for aut in [samples::ternary(), samples::beta_cubic()] {
        let sd = SpectralData::new(&aut).unwrap();
        for k in 0..=8u32 {
            for q in 0..=aut.d() {
                for r in 0..=aut.d() {
                    let m = count_by_matrix(&aut, q, r, k);
                    let e = count_by_enumeration(&aut, q, r, k);
                    let tr = sd.count_by_trace(q, r, k);
                    ok &= m == e && tr == BigRational::from_integer(BigInt::from(m));
                    checked += 1;
                }
            }
        }
    }
    let el = t.elapsed();
    outcome(ok && within(el, Duration::from_secs(30)), format!("{checked} counts, {el:?}"))
}

fn sequence_golden() -> Outcome {
    let t = Instant::now();
    let aut = samples::ternary();
    let seq = VdcSequence::new(&aut).unwrap();
    let sd = SpectralData::new(&aut).unwrap();
    let b = sd.beta();
    let (e2, e3) = (sd.eta(2).clone(), sd.eta(3).clone());
    let f = sd.field();
    let p = |k: i64| b.pow(-k).unwrap();
    let s = &e3 + &e2;
    let golden = [
        f.zero(),
        &e3 * &p(1),
        &s * &p(1),
        &e3 * &p(2),
        &s * &p(2),
        &(&e3 * &p(1)) + &(&e3 * &p(2)),
        &(&s * &p(1)) + &(&e2 * &p(2)),
        &e3 * &p(3),
        &(&e3 * &p(1)) + &(&e3 * &p(3)),
        &s * &p(3),
        &(&e3 * &p(1)) + &(&s * &p(3)),
        &(&s * &p(1)) + &(&e3 * &p(3)),
        &(&e3 * &p(2)) + &(&e3 * &p(3)),
        &(&s * &p(2)) + &(&e2 * &p(3)),
        &(&(&e3 * &p(1)) + &(&e3 * &p(2))) + &(&e2 * &p(3)),
        &(&(&s * &p(1)) + &(&e2 * &p(2))) + &(&e2 * &p(3)),
    ];
    let bad: Vec<usize> = (0..16)
        .filter(|&n| seq.x(&Rank::from(n)).unwrap() != golden[n])
        .collect();
    let el = t.elapsed();
    outcome(
        bad.is_empty() && within(el, Duration::from_secs(1)),
        format!("mismatches {bad:?}, {el:?}"),
    )
}

fn beta_round_trip() -> Outcome {
    let t = Instant::now();
    let field = NumberField::new(ints(&[-2, 0, -4, 1])).unwrap();
    let e = quasi_greedy_one(&field).unwrap();
    let digits_ok = e.digits() == &EpWord::periodic(&[4, 0, 1]);
    let aut = beta_automaton(e.digits()).unwrap();
    let want = table(&[&[2, 0, 0, 0, 0], &[3, 3, 0, 0, 0], &[3, 3, 3, 3, 1]]);
    let table_ok = aut.table() == want.as_slice();
    let p = beta_polynomial(e.digits());
    let coeffs: Vec<i64> = p.iter().map(|c| c.to_i64().unwrap()).collect();
    let poly_ok = coeffs == [-2, 0, -4, 1] && field.from_int_poly(&coeffs).is_zero();
    let el = t.elapsed();
    outcome(
        digits_ok && table_ok && poly_ok && within(el, Duration::from_secs(1)),
        format!("t = {}, {el:?}", e.digits()),
    )
}

fn structured_counts() -> Outcome {
    let t = Instant::now();
    let aut = samples::ternary();
    let disc = Discrepancy::new(&aut).unwrap();
    let seq = disc.sequence();
    let xs: Vec<FieldElement> = (0..2000u32).map(|n| seq.x(&Rank::from(n)).unwrap()).collect();
    let panel = ["1", "2", "0,1", "1,2", "|2", "0,2|0,2", "1|0,2", "|2,0"];
    let mut ok = true;
    for s in panel {
        let u = disc.valued(&s.parse().unwrap()).unwrap();
        let y = u.value();
        let mut brute = 0u64;
        for n in 0..=2000u64 {
            if n > 0 && xs[n as usize - 1].cmp_value(y).is_lt() {
                brute += 1;
            }
            ok &= disc.structured_count(&Rank::from(n), &u).unwrap() == Rank::from(brute);
        }
    }
    let el = t.elapsed();
    outcome(
        ok && within(el, Duration::from_secs(300)),
        format!("{} values of y, N <= 2000, {el:?}", panel.len()),
    )
}

fn low_discrepancy() -> Outcome {
    let t = Instant::now();
    let aut = samples::ternary();
    let disc = Discrepancy::new(&aut).unwrap();
    let n_max = 100_000u64;
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [1u32, 2, 5] {
        let w = disc.rep(&Rank::from(n)).unwrap();
        let u = disc.valued(&EpWord::finite(&w)).unwrap();
        let y = u.value().to_f64();
        let table = disc.principal_table(&u);
        let (mut ratio, mut max_d) = (0.0f64, 0.0f64);
        let (mut gap_1e3, mut max_gap_1e3, mut max_gap) = (0.0, 0.0f64, 0.0f64);
        for (nn, count) in disc.counts(u.value(), n_max).enumerate() {
            let nn = nn as u64;
            let d = count as f64 - nn as f64 * y;
            max_d = max_d.max(d.abs());
            if nn >= 2 {
                ratio = ratio.max(d.abs() / (nn as f64).ln());
            }
            let rep = disc.rep(&Rank::from(nn)).unwrap();
            let gap = (d - approx(&disc.principal_d_word(&rep, &u, &table))).abs();
            max_gap = max_gap.max(gap);
            if nn <= 1000 {
                max_gap_1e3 = max_gap_1e3.max(gap);
            }
            if nn == 1000 {
                gap_1e3 = gap;
            }
        }
        ok &= ratio.is_finite() && max_gap <= max_gap_1e3 + 2.0;
        notes.push(format!(
            "x_{n}: max|D|/ln N = {ratio:.3}, max|D| = {max_d:.3}, max gap {max_gap_1e3:.3} -> {max_gap:.3} (gap at 10^3: {gap_1e3:.3})"
        ));
    }
    let el = t.elapsed();
    outcome(ok && within(el, Duration::from_secs(600)), format!("{}; {el:?}", notes.join("; ")))
}

fn brs_decisions() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    let mut finite = 0;
    for aut in [samples::ternary(), samples::beta_cubic()] {
        let sd = SpectralData::new(&aut).unwrap();
        for w in words(&aut, 4) {
            let u = ValuedWord::finite(&aut, sd.eigen(), &w).unwrap();
            ok &= thm2_decide(&aut, &sd, &u).unwrap().decision == Decision::Bounded;
            finite += 1;
        }
    }
    let aut = samples::non_pisot();
    let u: EpWord = "3,0|2".parse().unwrap();
    let eig = PerronEigen::new(&aut).unwrap();
    let vu = ValuedWord::new(&aut, &eig, &u).unwrap();
    let rejected = matches!(SpectralData::new(&aut), Err(SpectralError::ReducibleCharpoly { .. }));
    let no_prop5 = prop5_check(&aut, &eig, &vu).is_none();
    let not_pisot = !is_pisot_automaton(&aut).unwrap();
    let two_eta4 = eig.eta(4).scale(&BigRational::from_integer(2.into()));
    let eps_ok = (3..12).all(|k| vu.epsilon(k) == &two_eta4);
    let y = &(eig.eta(3) - eig.eta(2)) + eig.eta(1);
    let tail_ok = (3..12).all(|k| vu.tail(k) == y);
    ok &= rejected && no_prop5 && not_pisot && eps_ok && tail_ok;
    let el = t.elapsed();
    outcome(
        ok && within(el, Duration::from_secs(60)),
        format!(
            "{finite} finite words bounded; four-state automaton: spectral data rejected (reducible charpoly) = {rejected}, prop5 none = {no_prop5}, not Pisot = {not_pisot}; {el:?}"
        ),
    )
}

fn cross_oracle() -> Outcome {
    let t = Instant::now();
    let aut = samples::ternary();
    let disc = Discrepancy::new(&aut).unwrap();
    let sd = disc.spectral();
    let panel = [
        "1", "2", "0,1", "0,2", "2,2", "1|2", "0,1|2", "|2", "|0,1", "|1,0", "|2,0", "|0,2", "|0,0,1", "2|0,0,1",
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for s in panel {
        let u = disc.valued(&s.parse().unwrap()).unwrap();
        let verdict = thm2_decide(&aut, sd, &u).unwrap().decision;
        let r = empirical_check(&disc, &u, 100_000);
        let agrees = match verdict {
            Decision::Bounded => r.plateaued(),
            Decision::Unbounded => r.slope > 0.05,
        };
        ok &= agrees;
        notes.push(format!(
            "{s} {verdict} (max|D| {:.4} at 10^4, {:.4} at 10^5, slope {:.3}){}",
            r.max_at_1e4,
            r.max_abs_d,
            r.slope,
            if agrees { "" } else { " MISMATCH" }
        ));
    }
    let el = t.elapsed();
    outcome(ok && within(el, Duration::from_secs(900)), format!("{}; {el:?}", notes.join("; ")))
}

fn rank_unrank() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    for aut in [samples::ternary(), samples::beta_cubic()] {
        let num = Numeration::new(&aut);
        for n in 0..10_000u32 {
            let r = Rank::from(n);
            ok &= num.rank(&num.unrank(&r).unwrap()).unwrap() == r;
            ok &= num.lprime_rank(&num.lprime_unrank(&r).unwrap()).unwrap() == r;
        }
    }
    let num = Numeration::new(&samples::ternary());
    ok &= num.rank(&[0, 1]).unwrap() == Rank::from(5u8);
    ok &= num.rank(&[2, 2, 2]).unwrap() == Rank::from(26u8);
    let el = t.elapsed();
    outcome(ok && within(el, Duration::from_secs(30)), format!("{el:?}"))
}

fn integer_base() -> Outcome {
    let t = Instant::now();
    let field = NumberField::new(ints(&[-2, 1])).unwrap();
    let aut = beta_automaton(quasi_greedy_one(&field).unwrap().digits()).unwrap();
    let seq = VdcSequence::new(&aut).unwrap();
    let mut ok = aut == samples::integer_base(2);
    for n in 0u32..256 {
        let len = 32 - n.leading_zeros();
        let rev = if len == 0 { 0 } else { n.reverse_bits() >> (32 - len) };
        let want = BigRational::new(BigInt::from(rev), BigInt::from(1u64 << len));
        ok &= seq.x(&Rank::from(n)).unwrap().as_rational() == Some(want);
    }
    let el = t.elapsed();
    outcome(ok && within(el, Duration::from_secs(1)), format!("{el:?}"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("mirror construction", mirror_tables),
        ("spectral exactness", spectral_exactness),
        ("zeta normalization", zeta_normalization),
        ("count identity", count_identity),
        ("sequence golden values", sequence_golden),
        ("beta-adic round trip", beta_round_trip),
        ("structured count equals brute force", structured_counts),
        ("low-discrepancy property", low_discrepancy),
        ("bounded remainder decisions", brs_decisions),
        ("cross-oracle consistency", cross_oracle),
        ("rank/unrank", rank_unrank),
        ("integer-base degeneration", integer_base),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    let mut ran = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        ran += 1;
        let (ok, detail) = match panic::catch_unwind(AssertUnwindSafe(run)) {
            Ok(o) => (o.ok, o.detail),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {name}: {} [{detail}]",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!("acceptance: {}/{ran} passed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
