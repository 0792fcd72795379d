//! Quasi-greedy expansion of 1, the β-automaton and the β-polynomial.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::algebraic::{FieldElement, NumberField};
use crate::automaton::{OrderedAutomaton, State};
use crate::error::{AlgebraError, BetaError, SpectralError};
use crate::spectral::is_pisot_polynomial;
use crate::word::{EpWord, Letter};

/// Default bound on the number of distinct remainders.
pub const DEFAULT_CAP: usize = 1_000_000;

/// The quasi-greedy expansion `t` of 1 in base β.
#[derive(Debug, Clone)]
pub struct BetaExpansion {
    t: EpWord,
    field: Arc<NumberField>,
}

impl BetaExpansion {
    /// Wraps a digit sequence after checking admissibility and `Σ t_j β^{-j} = 1`.
    pub fn new(t: EpWord, field: Arc<NumberField>) -> Result<Self, BetaError> {
        let t = t.canonical();
        if !check_admissibility(&t) {
            return Err(BetaError::NotAdmissible);
        }
        let e = BetaExpansion { t, field };
        if !e.sum()?.cmp_value(&e.field.one()).is_eq() {
            return Err(BetaError::NotAdmissible);
        }
        Ok(e)
    }

    pub fn digits(&self) -> &EpWord {
        &self.t
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// `Σ t_j β^{-j}` in closed form.
    pub fn sum(&self) -> Result<FieldElement, AlgebraError> {
        let f = &self.field;
        let binv = f.beta().inv()?;
        let horner = |w: &[Letter]| {
            // Σ w_j β^{-j}
            w.iter().rev().fold(f.zero(), |acc, &a| &(&acc + &f.int(a as i64)) * &binv)
        };
        let m = self.t.pre().len() as i64;
        let k = self.t.per().len() as i64;
        let tail = horner(self.t.per()).try_div(&(&f.one() - &binv.pow(k)?))?;
        Ok(&horner(self.t.pre()) + &(&binv.pow(m)? * &tail))
    }
}

/// Floor of a field element, exact.
fn floor(x: &FieldElement) -> BigInt {
    let (lo, _) = x.enclosure();
    let f = x.field();
    let mut k = BigInt::from(lo.floor() as i64);
    let at = |k: &BigInt| FieldElement::from_rational(f, k.clone().into());
    while x.cmp_value(&at(&k)) == Ordering::Less {
        k -= 1;
    }
    while x.cmp_value(&at(&(&k + 1))) != Ordering::Less {
        k += 1;
    }
    k
}

fn pisot_field(field: &NumberField) -> Result<bool, BetaError> {
    is_pisot_polynomial(field.minpoly()).map_err(|e| match e {
        SpectralError::Algebra(a) => BetaError::Algebra(a),
        _ => BetaError::NotPisot,
    })
}

/// Quasi-greedy expansion of 1 for a Pisot β, with the default remainder cap.
pub fn quasi_greedy_one(field: &Arc<NumberField>) -> Result<BetaExpansion, BetaError> {
    quasi_greedy_one_with(field, DEFAULT_CAP, false)
}

/// As [`quasi_greedy_one`]; `allow_non_pisot` skips the Pisot check and relies on the cap.
pub fn quasi_greedy_one_with(
    field: &Arc<NumberField>,
    cap: usize,
    allow_non_pisot: bool,
) -> Result<BetaExpansion, BetaError> {
    if !allow_non_pisot && !pisot_field(field)? {
        return Err(BetaError::NotPisot);
    }
    let beta = field.beta();
    // hashing uses the coefficients only; the shared root interval does not take part
    #[allow(clippy::mutable_key_type)]
    let mut seen: HashMap<FieldElement, usize> = HashMap::new();
    let mut digits: Vec<Letter> = Vec::new();
    let mut r = field.one();
    loop {
        if let Some(&i) = seen.get(&r) {
            let per = digits.split_off(i);
            let t = EpWord::new(digits, per).expect("nonempty period").canonical();
            return Ok(BetaExpansion {
                t,
                field: field.clone(),
            });
        }
        if seen.len() >= cap {
            return Err(BetaError::CapExceeded(cap));
        }
        seen.insert(r.clone(), digits.len());
        let x = &beta * &r;
        let mut t = floor(&x);
        if x.as_rational().is_some_and(|v| v.is_integer()) {
            t -= 1;
        }
        let a = t.to_usize().ok_or(BetaError::NotAdmissible)?;
        r = &x - &FieldElement::from_rational(field, t.into());
        digits.push(a);
    }
}

/// True iff `t` is not eventually zero and every tail of `t` is at most `t`.
pub fn check_admissibility(t: &EpWord) -> bool {
    if t.per().iter().all(|&a| a == 0) {
        return false;
    }
    let horizon = t.pre().len() + 2 * t.per().len();
    (1..horizon).all(|k| t.shift(k).cmp_lex(t) != Ordering::Greater)
}

/// State `q_j` of the β-automaton for the minimal expansion `t`, `0 <= j < d`.
fn suffix_states(t: &EpWord) -> Vec<State> {
    let d = t.pre().len() + t.per().len();
    let tails: Vec<EpWord> = (0..d).map(|k| t.shift(k)).collect();
    (0..d)
        .map(|j| tails.iter().filter(|s| s.cmp_lex(&tails[j]) != Ordering::Greater).count())
        .collect()
}

/// The β-automaton: state `q_j` has bound `t_{j+1}`, smaller letters restart at `d`,
/// and the bound letter leads to `q_{j+1}`.
pub fn beta_automaton(t: &EpWord) -> Result<OrderedAutomaton, BetaError> {
    let t = t.canonical();
    if !check_admissibility(&t) {
        return Err(BetaError::NotAdmissible);
    }
    let m = t.pre().len();
    let d = m + t.per().len();
    let q = suffix_states(&t);
    let sigma = t.max_letter() + 1;
    let mut trans = vec![vec![0; sigma]; d + 1];
    for j in 0..d {
        let b = t.letter(j + 1);
        let succ = if j + 1 < d { q[j + 1] } else { q[m] };
        let row = &mut trans[q[j]];
        for (a, cell) in row.iter_mut().enumerate() {
            *cell = match a.cmp(&b) {
                Ordering::Less => d,
                Ordering::Equal => succ,
                Ordering::Greater => 0,
            };
        }
    }
    Ok(OrderedAutomaton::new(trans)?)
}

/// `(x^d − t₁x^{d−1} − ⋯ − t_d) − (x^m − t₁x^{m−1} − ⋯ − t_m)`, coefficients ascending.
pub fn beta_polynomial(t: &EpWord) -> Vec<BigInt> {
    let t = t.canonical();
    let m = t.pre().len();
    let d = m + t.per().len();
    let mut p = vec![BigInt::zero(); d + 1];
    p[d] += 1;
    p[m] -= 1;
    for i in 1..=d {
        p[d - i] -= t.letter(i);
    }
    for i in 1..=m {
        p[m - i] += t.letter(i);
    }
    p
}
