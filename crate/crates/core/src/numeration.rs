//! Shortlex ranking in the language `L` of an ordered automaton and in the pruned
//! mirror language `L̃′ = {ε} ∪ {w ∈ L̃ : w₁ ≠ a₀}`.

use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::automaton::{OrderedAutomaton, State};
use crate::error::NumerationError;
use crate::word::{format_word, Letter};

/// Arbitrary-precision rank or count.
pub type Rank = BigUint;

/// Memoised `#{v ∈ A^k : τ(q,v) > 0}`.
#[derive(Debug)]
pub struct WordCounter {
    aut: OrderedAutomaton,
    /// `table[k][q]`
    table: RwLock<Vec<Vec<Rank>>>,
}

impl WordCounter {
    pub fn new(aut: OrderedAutomaton) -> Self {
        let base = (0..=aut.d()).map(|q| Rank::from(u8::from(q > 0))).collect();
        WordCounter {
            aut,
            table: RwLock::new(vec![base]),
        }
    }

    pub fn automaton(&self) -> &OrderedAutomaton {
        &self.aut
    }

    pub fn count(&self, q: State, k: usize) -> Rank {
        {
            let t = self.table.read().expect("count table");
            if let Some(row) = t.get(k) {
                return row[q].clone();
            }
        }
        let mut t = self.table.write().expect("count table");
        while t.len() <= k {
            let prev = t.last().expect("base row");
            let row = (0..=self.aut.d())
                .map(|s| {
                    if s == 0 {
                        Rank::zero()
                    } else {
                        (0..self.aut.sigma()).map(|a| &prev[self.aut.next(s, a)]).sum()
                    }
                })
                .collect();
            t.push(row);
        }
        t[k][q].clone()
    }

    /// Number of accepted words of length `k` starting with a letter in `first..sigma`.
    fn count_first_at_least(&self, first: Letter, k: usize) -> Rank {
        if k == 0 {
            return Rank::zero();
        }
        (first..self.aut.sigma())
            .map(|a| self.count(self.aut.next(self.aut.d(), a), k - 1))
            .sum()
    }

    /// Rank of `w` among accepted words whose first letter is at least `first`.
    fn rank_from(&self, w: &[Letter], first: Letter) -> Rank {
        let d = self.aut.d();
        let mut r: Rank = (0..w.len())
            .map(|k| {
                if k == 0 {
                    Rank::from(1u8)
                } else {
                    self.count_first_at_least(first, k)
                }
            })
            .sum();
        let len = w.len();
        let mut s = d;
        for (j, &wj) in w.iter().enumerate() {
            let lo = if j == 0 { first } else { 0 };
            for a in lo..wj {
                r += self.count(self.aut.next(s, a), len - j - 1);
            }
            s = self.aut.next(s, wj);
        }
        r
    }

    fn unrank_from(&self, n: &Rank, first: Letter) -> Result<Vec<Letter>, NumerationError> {
        let d = self.aut.d();
        let mut rem = n.clone();
        let mut len = 0usize;
        loop {
            let c = if len == 0 {
                Rank::from(1u8)
            } else {
                self.count_first_at_least(first, len)
            };
            if rem < c {
                break;
            }
            if c.is_zero() {
                // prefix-closed language: no words of this length means none longer
                return Err(NumerationError::RankTooLarge(n.to_string()));
            }
            rem -= c;
            len += 1;
        }
        let mut w = Vec::with_capacity(len);
        let mut s = d;
        for j in 0..len {
            let lo = if j == 0 { first } else { 0 };
            for a in lo..self.aut.sigma() {
                let t = self.aut.next(s, a);
                let c = self.count(t, len - j - 1);
                if rem < c {
                    w.push(a);
                    s = t;
                    break;
                }
                rem -= c;
            }
        }
        Ok(w)
    }
}

/// The numeration systems `S` (on `L`) and `S̃′` (on `L̃′`) of one automaton.
#[derive(Debug)]
pub struct Numeration {
    direct: WordCounter,
    mirror: WordCounter,
    smallest_letter: Result<(), State>,
}

impl Numeration {
    pub fn new(aut: &OrderedAutomaton) -> Self {
        Numeration {
            direct: WordCounter::new(aut.clone()),
            mirror: WordCounter::new(aut.mirror()),
            smallest_letter: aut.smallest_letter_avoids_sink(),
        }
    }

    pub fn automaton(&self) -> &OrderedAutomaton {
        self.direct.automaton()
    }

    pub fn mirror(&self) -> &OrderedAutomaton {
        self.mirror.automaton()
    }

    pub fn count_words(&self, q: State, k: usize) -> Rank {
        self.direct.count(q, k)
    }

    pub fn count_mirror_words(&self, q: State, k: usize) -> Rank {
        self.mirror.count(q, k)
    }

    /// Number of accepted words shortlex-smaller than `w`.
    pub fn rank(&self, w: &[Letter]) -> Result<Rank, NumerationError> {
        if !self.automaton().accepts(w)? {
            return Err(NumerationError::NotAccepted(format_word(w)));
        }
        Ok(self.direct.rank_from(w, 0))
    }

    pub fn unrank(&self, n: &Rank) -> Result<Vec<Letter>, NumerationError> {
        self.direct.unrank_from(n, 0)
    }

    fn check_hypothesis(&self) -> Result<(), NumerationError> {
        self.smallest_letter
            .map_err(NumerationError::SmallestLetterSinks)
    }

    /// Rank of a mirror-side word in `L̃′`.
    pub fn lprime_rank(&self, w: &[Letter]) -> Result<Rank, NumerationError> {
        self.check_hypothesis()?;
        if w.first() == Some(&0) || !self.mirror().accepts(w)? {
            return Err(NumerationError::NotInPruned(format_word(w)));
        }
        Ok(self.mirror.rank_from(w, 1))
    }

    /// The mirror-side word of rank `n` in `L̃′`; its reversal is the representation in `L`.
    pub fn lprime_unrank(&self, n: &Rank) -> Result<Vec<Letter>, NumerationError> {
        self.check_hypothesis()?;
        self.mirror.unrank_from(n, 1)
    }
}
