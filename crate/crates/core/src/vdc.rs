//! Normalised values of infinite words and the abstract van der Corput sequence.

use std::cmp::Ordering;
use std::sync::{Arc, RwLock};

use crate::algebraic::FieldElement;
use crate::automaton::{OrderedAutomaton, State};
use crate::error::ValueError;
use crate::numeration::{Numeration, Rank};
use crate::spectral::{is_pisot_automaton, PerronEigen};
use crate::word::{EpWord, Letter};

/// An eventually periodic word of `L_ω`, resynchronised so that the automaton state
/// sequence has the same preperiod and period as the letters, together with its digit
/// functionals `ε_j` and value.
#[derive(Debug, Clone)]
pub struct ValuedWord {
    word: EpWord,
    /// `states[j] = τ(d, u₁⋯u_j)` for `j <= m + p`.
    states: Vec<State>,
    eps: Vec<FieldElement>,
    value: FieldElement,
    beta: FieldElement,
}

impl ValuedWord {
    pub fn new(aut: &OrderedAutomaton, eig: &PerronEigen, u: &EpWord) -> Result<Self, ValueError> {
        if u.max_letter() >= aut.sigma() {
            return Err(crate::error::AutomatonError::LetterOutOfRange {
                letter: u.max_letter(),
                sigma: aut.sigma(),
            }
            .into());
        }
        let u = u.canonical();
        let d = aut.d();
        let mut pos = 0usize;
        let mut s = d;
        let step = |s: State, w: &[Letter], pos: &mut usize| -> Result<State, ValueError> {
            let mut s = s;
            for &a in w {
                s = aut.next(s, a);
                *pos += 1;
                if s == 0 {
                    return Err(ValueError::LeavesLanguage(*pos));
                }
            }
            Ok(s)
        };
        s = step(s, u.pre(), &mut pos)?;
        // states at the start of each period copy until the first repetition
        let mut starts = vec![s];
        let (i, j) = loop {
            s = step(s, u.per(), &mut pos)?;
            if let Some(i) = starts.iter().position(|&t| t == s) {
                break (i, starts.len());
            }
            starts.push(s);
        };
        let mut pre = u.pre().to_vec();
        for _ in 0..i {
            pre.extend_from_slice(u.per());
        }
        let word = EpWord::new(pre, u.per().repeat(j - i)).expect("nonempty period");
        let n = word.pre().len() + word.per().len();
        let mut states = vec![d];
        for k in 1..=n {
            let prev = states[k - 1];
            states.push(aut.next(prev, word.letter(k)));
        }
        let eps: Vec<FieldElement> = (1..=n)
            .map(|k| digit_value(aut, eig, states[k - 1], word.letter(k)))
            .collect();
        let beta = eig.beta().clone();
        let mut vw = ValuedWord {
            word,
            states,
            eps,
            value: eig.field().zero(),
            beta,
        };
        vw.value = vw.tail(1);
        Ok(vw)
    }

    /// `w · a₀^ω`.
    pub fn finite(aut: &OrderedAutomaton, eig: &PerronEigen, w: &[Letter]) -> Result<Self, ValueError> {
        Self::new(aut, eig, &EpWord::finite(w))
    }

    pub fn word(&self) -> &EpWord {
        &self.word
    }

    /// Synchronised preperiod length `m`.
    pub fn preperiod(&self) -> usize {
        self.word.pre().len()
    }

    /// Synchronised period length `p`.
    pub fn period(&self) -> usize {
        self.word.per().len()
    }

    pub fn value(&self) -> &FieldElement {
        &self.value
    }

    /// Index into the stored window `1..=m+p` equivalent to position `j`.
    fn fold(&self, j: usize) -> usize {
        let (m, p) = (self.preperiod(), self.period());
        if j <= m + p {
            j
        } else {
            m + 1 + (j - m - 1) % p
        }
    }

    /// `τ(d, u₁⋯u_j)`.
    pub fn state_after(&self, j: usize) -> State {
        if j == 0 {
            self.states[0]
        } else {
            self.states[self.fold(j)]
        }
    }

    /// `ε_j(u)` for `j >= 1`.
    pub fn epsilon(&self, j: usize) -> &FieldElement {
        assert!(j >= 1, "positions are 1-based");
        &self.eps[self.fold(j) - 1]
    }

    /// `y_k = Σ_{j>=k} ε_j β^{k-j-1}` for `k >= 1`.
    pub fn tail(&self, k: usize) -> FieldElement {
        assert!(k >= 1, "positions are 1-based");
        let (m, p) = (self.preperiod(), self.period());
        let beta = &self.beta;
        let periodic = |k: usize| -> FieldElement {
            let mut num = self.eps[0].field().zero();
            for i in 0..p {
                num = &(&num * beta) + self.epsilon(k + i);
            }
            let den = &beta.pow(p as i64).expect("β nonzero") - &beta.field().one();
            num.try_div(&den).expect("β^p > 1")
        };
        if k > m {
            return periodic(k);
        }
        // y_k = Σ_{j=k}^{m} ε_j β^{k-j-1} + β^{k-m-1} y_{m+1}, evaluated by Horner from the back
        let mut y = periodic(m + 1);
        let binv = beta.inv().expect("β nonzero");
        for j in (k..=m).rev() {
            y = &(self.epsilon(j) + &y) * &binv;
        }
        y
    }
}

/// `Σ_{a<c} η_{τ(s,a)}`.
fn digit_value(aut: &OrderedAutomaton, eig: &PerronEigen, s: State, c: Letter) -> FieldElement {
    (0..c).fold(eig.field().zero(), |acc, a| &acc + eig.eta(aut.next(s, a)))
}

/// `ε_j(u)`.
pub fn epsilon(
    aut: &OrderedAutomaton,
    eig: &PerronEigen,
    u: &EpWord,
    j: usize,
) -> Result<FieldElement, ValueError> {
    if j == 0 {
        return Err(ValueError::Position);
    }
    Ok(ValuedWord::new(aut, eig, u)?.epsilon(j).clone())
}

/// `⟨u⟩`.
pub fn value(aut: &OrderedAutomaton, eig: &PerronEigen, u: &EpWord) -> Result<FieldElement, ValueError> {
    Ok(ValuedWord::new(aut, eig, u)?.value().clone())
}

/// `y_k`.
pub fn tail_value(
    aut: &OrderedAutomaton,
    eig: &PerronEigen,
    u: &EpWord,
    k: usize,
) -> Result<FieldElement, ValueError> {
    if k == 0 {
        return Err(ValueError::Position);
    }
    Ok(ValuedWord::new(aut, eig, u)?.tail(k))
}

/// Cached summand `(Σ_{a<c} η_{τ(s,a)}) β^{-j}` and its `f64` enclosure.
#[derive(Debug, Clone)]
struct Term {
    exact: FieldElement,
    lo: f64,
    hi: f64,
}

/// The abstract van der Corput sequence of an automaton.
#[derive(Debug)]
pub struct VdcSequence {
    aut: OrderedAutomaton,
    num: Numeration,
    eig: Arc<PerronEigen>,
    /// `terms[j-1][s * sigma + c]`
    terms: RwLock<Vec<Vec<Option<Term>>>>,
}

/// Point `x_n` in `[0,1)` with a rigorous floating-point enclosure.
#[derive(Debug, Clone)]
pub struct SeqPoint {
    pub word: Vec<Letter>,
    pub lo: f64,
    pub hi: f64,
}

impl VdcSequence {
    /// Checks that the automaton is Pisot and that `τ(q,a₀) > 0` for all `q > 0`.
    pub fn new(aut: &OrderedAutomaton) -> Result<Self, ValueError> {
        if !is_pisot_automaton(aut)? {
            return Err(ValueError::NotPisot);
        }
        Self::new_unchecked(aut)
    }

    /// Skips the Pisot test; the smallest-letter hypothesis is still enforced.
    pub fn new_unchecked(aut: &OrderedAutomaton) -> Result<Self, ValueError> {
        if let Err(q) = aut.smallest_letter_avoids_sink() {
            return Err(crate::error::NumerationError::SmallestLetterSinks(q).into());
        }
        let eig = PerronEigen::new(aut)?;
        Ok(Self::with_eigen(aut, Arc::new(eig)))
    }

    pub(crate) fn with_eigen(aut: &OrderedAutomaton, eig: Arc<PerronEigen>) -> Self {
        VdcSequence {
            aut: aut.clone(),
            num: Numeration::new(aut),
            eig,
            terms: RwLock::new(Vec::new()),
        }
    }

    pub fn automaton(&self) -> &OrderedAutomaton {
        &self.aut
    }

    pub fn numeration(&self) -> &Numeration {
        &self.num
    }

    pub fn eigen(&self) -> &PerronEigen {
        &self.eig
    }

    /// The word `w` with `x_n = ⟨w⟩`, i.e. the reversal of the rank-`n` word of `L̃′`.
    pub fn word(&self, n: &Rank) -> Result<Vec<Letter>, ValueError> {
        let mut w = self.num.lprime_unrank(n)?;
        w.reverse();
        Ok(w)
    }

    fn with_terms<R>(&self, len: usize, f: impl FnOnce(&[Vec<Option<Term>>]) -> R) -> R {
        {
            let t = self.terms.read().expect("term cache");
            if t.len() >= len {
                return f(&t);
            }
        }
        let d = self.aut.d();
        let sigma = self.aut.sigma();
        let mut t = self.terms.write().expect("term cache");
        let binv = self.eig.beta().inv().expect("β nonzero");
        while t.len() < len {
            let j = t.len() + 1;
            let scale = binv.pow(j as i64).expect("β nonzero");
            let row = (0..=d)
                .flat_map(|s| (0..sigma).map(move |c| (s, c)))
                .map(|(s, c)| {
                    if s == 0 || c == 0 {
                        return None;
                    }
                    let exact = &digit_value(&self.aut, &self.eig, s, c) * &scale;
                    let (lo, hi) = exact.enclosure();
                    Some(Term { exact, lo, hi })
                })
                .collect();
            t.push(row);
        }
        f(&t)
    }

    /// `(state, letter)` pairs along `w` for the nonzero summands.
    fn digits<'a>(&'a self, w: &'a [Letter]) -> impl Iterator<Item = (usize, State, Letter)> + 'a {
        w.iter()
            .scan(self.aut.d(), |s, &c| {
                let cur = *s;
                *s = self.aut.next(cur, c);
                Some((cur, c))
            })
            .enumerate()
            .filter(|(_, (_, c))| *c > 0)
            .map(|(j, (s, c))| (j + 1, s, c))
    }

    /// Exact `⟨w a₀^ω⟩` for a finite word `w ∈ L`.
    pub fn finite_value(&self, w: &[Letter]) -> FieldElement {
        let sigma = self.aut.sigma();
        self.with_terms(w.len(), |t| {
            self.digits(w).fold(self.eig.field().zero(), |acc, (j, s, c)| {
                &acc + &t[j - 1][s * sigma + c].as_ref().expect("nonzero term").exact
            })
        })
    }

    fn finite_enclosure(&self, w: &[Letter]) -> (f64, f64) {
        let sigma = self.aut.sigma();
        self.with_terms(w.len(), |t| {
            self.digits(w).fold((0.0f64, 0.0f64), |(lo, hi), (j, s, c)| {
                let term = t[j - 1][s * sigma + c].as_ref().expect("nonzero term");
                ((lo + term.lo).next_down(), (hi + term.hi).next_up())
            })
        })
    }

    /// `x_n` exactly.
    pub fn x(&self, n: &Rank) -> Result<FieldElement, ValueError> {
        Ok(self.finite_value(&self.word(n)?))
    }

    /// `x_n` as a word with an enclosure `lo <= x_n <= hi`.
    pub fn point(&self, n: &Rank) -> Result<SeqPoint, ValueError> {
        let word = self.word(n)?;
        let (lo, hi) = self.finite_enclosure(&word);
        Ok(SeqPoint { word, lo, hi })
    }

    /// Exact comparison of `x_n` (given by its point) with `y`, whose enclosure is `(ylo, yhi)`.
    pub fn cmp_point(&self, p: &SeqPoint, y: &FieldElement, ylo: f64, yhi: f64) -> Ordering {
        if p.hi < ylo {
            Ordering::Less
        } else if p.lo > yhi {
            Ordering::Greater
        } else {
            self.finite_value(&p.word).cmp_value(y)
        }
    }

    /// Points `x_0, …, x_{n-1}` in order, stepping through `L̃′` by successor.
    pub fn points(&self, n: u64) -> impl Iterator<Item = SeqPoint> + '_ {
        let mut cur: Option<Vec<Letter>> = None;
        (0..n).map(move |i| {
            let next = match cur.take() {
                None => self
                    .num
                    .lprime_unrank(&Rank::from(i))
                    .expect("hypothesis checked at construction"),
                Some(prev) => self.lprime_successor(&prev),
            };
            let mut word = next.clone();
            cur = Some(next);
            word.reverse();
            let (lo, hi) = self.finite_enclosure(&word);
            SeqPoint { word, lo, hi }
        })
    }

    /// Shortlex successor in `L̃′` of a mirror-side word.
    fn lprime_successor(&self, w: &[Letter]) -> Vec<Letter> {
        let mir = self.num.mirror();
        let d = mir.d();
        let len = w.len();
        let mut states = vec![d];
        for &a in w {
            let s = *states.last().expect("nonempty");
            states.push(mir.next(s, a));
        }
        let fill = |mut v: Vec<Letter>, mut s: State, from: usize, len: usize| -> Vec<Letter> {
            for j in from..len {
                let a = (if j == 0 { 1 } else { 0 }..mir.sigma())
                    .find(|&a| {
                        let t = mir.next(s, a);
                        t > 0 && self.num.count_mirror_words(t, len - j - 1) > Rank::from(0u8)
                    })
                    .expect("prefix-closed language admits a completion");
                v.push(a);
                s = mir.next(s, a);
            }
            v
        };
        for i in (0..len).rev() {
            let s = states[i];
            let bump = (w[i] + 1..mir.sigma()).find(|&b| {
                let t = mir.next(s, b);
                t > 0 && self.num.count_mirror_words(t, len - i - 1) > Rank::from(0u8)
            });
            if let Some(b) = bump {
                let mut v = w[..i].to_vec();
                v.push(b);
                return fill(v, mir.next(s, b), i + 1, len);
            }
        }
        fill(Vec::new(), d, 0, len + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn ternary() -> (OrderedAutomaton, PerronEigen) {
        let aut = samples::ternary();
        let eig = PerronEigen::new(&aut).unwrap();
        (aut, eig)
    }

    #[test]
    fn values() {
        let (aut, eig) = ternary();
        let f = eig.field();
        let b = eig.beta();
        let eta = |q| eig.eta(q).clone();
        assert_eq!(value(&aut, &eig, &EpWord::periodic(&[0])).unwrap(), f.zero());
        let want = &(&(&eta(3) + &eta(2)) * &b.pow(-1).unwrap()) + &(&eta(2) * &b.pow(-2).unwrap());
        assert_eq!(value(&aut, &eig, &EpWord::finite(&[2, 2])).unwrap(), want);
        let td = aut.max_word_from(3).unwrap();
        assert_eq!(value(&aut, &eig, &td).unwrap(), f.one());
        assert_eq!(epsilon(&aut, &eig, &EpWord::finite(&[1]), 1).unwrap(), f.one());
    }

    #[test]
    fn synchronisation_and_tails() {
        let (aut, eig) = ternary();
        // a₁a₂^ω: states 3 -1-> 2 -2-> 1 -2-> 1: already synchronised after one step
        let u: EpWord = "1|2".parse().unwrap();
        let vw = ValuedWord::new(&aut, &eig, &u).unwrap();
        let beta = eig.beta();
        for k in 1..20 {
            assert_eq!(vw.tail(k + 1), &(beta * &vw.tail(k)) - vw.epsilon(k));
        }
        let doubled = ValuedWord::new(&aut, &eig, &u.with_period_repeated(2)).unwrap();
        assert_eq!(doubled.value(), vw.value());
        // a leaving word
        assert!(matches!(
            ValuedWord::new(&aut, &eig, &"1,1|0".parse().unwrap()),
            Err(ValueError::LeavesLanguage(2))
        ));
    }

    #[test]
    fn sequence_points_match_exact_values() {
        let aut = samples::ternary();
        let seq = VdcSequence::new(&aut).unwrap();
        let zero = seq.eigen().field().zero();
        let one = seq.eigen().field().one();
        for (i, p) in seq.points(300).enumerate() {
            let x = seq.x(&Rank::from(i)).unwrap();
            assert_eq!(p.word, seq.word(&Rank::from(i)).unwrap());
            let (lo, hi) = x.enclosure();
            assert!(p.lo <= hi && lo <= p.hi);
            assert_ne!(x.cmp_value(&zero), Ordering::Less);
            assert_eq!(x.cmp_value(&one), Ordering::Less);
        }
    }

    #[test]
    fn integer_base_is_classical() {
        let seq = VdcSequence::new(&samples::integer_base(3)).unwrap();
        for n in 0..50u32 {
            let x = seq.x(&Rank::from(n)).unwrap().as_rational().unwrap();
            let (mut m, mut v, mut scale) = (n, num_rational::BigRational::from_integer(0.into()), 1i64);
            while m > 0 {
                scale *= 3;
                v += num_rational::BigRational::new(((m % 3) as i64).into(), scale.into());
                m /= 3;
            }
            assert_eq!(x, v);
        }
    }
}
