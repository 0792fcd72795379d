//! Finite and eventually periodic words over the dense alphabet `0..sigma`.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;

use crate::error::WordError;

/// A letter is its index in the ordered alphabet; `0` is the smallest letter.
pub type Letter = usize;

/// An eventually periodic infinite word `pre · per^ω`.
///
/// Finite words are represented by their canonical completion `w · 0^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpWord {
    pre: Vec<Letter>,
    per: Vec<Letter>,
}

impl EpWord {
    pub fn new(pre: Vec<Letter>, per: Vec<Letter>) -> Result<Self, WordError> {
        if per.is_empty() {
            return Err(WordError::EmptyPeriod);
        }
        Ok(EpWord { pre, per })
    }

    /// `w · 0^ω`
    pub fn finite(w: &[Letter]) -> Self {
        EpWord {
            pre: w.to_vec(),
            per: vec![0],
        }
    }

    /// `per^ω`; panics on an empty period.
    pub fn periodic(per: &[Letter]) -> Self {
        assert!(!per.is_empty(), "period must be nonempty");
        EpWord {
            pre: Vec::new(),
            per: per.to_vec(),
        }
    }

    pub fn pre(&self) -> &[Letter] {
        &self.pre
    }

    pub fn per(&self) -> &[Letter] {
        &self.per
    }

    /// Letter at 1-based position `j`.
    pub fn letter(&self, j: usize) -> Letter {
        assert!(j >= 1, "positions are 1-based");
        let i = j - 1;
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }

    /// The first `len` letters.
    pub fn prefix(&self, len: usize) -> Vec<Letter> {
        (1..=len).map(|j| self.letter(j)).collect()
    }

    /// The tail obtained by dropping the first `k` letters.
    pub fn shift(&self, k: usize) -> EpWord {
        if k <= self.pre.len() {
            EpWord {
                pre: self.pre[k..].to_vec(),
                per: self.per.clone(),
            }
        } else {
            let r = (k - self.pre.len()) % self.per.len();
            let mut per = self.per[r..].to_vec();
            per.extend_from_slice(&self.per[..r]);
            EpWord {
                pre: Vec::new(),
                per,
            }
        }
    }

    /// True iff every letter from position `j` (1-based) on is `0`.
    pub fn is_zero_from(&self, j: usize) -> bool {
        let i = j.saturating_sub(1);
        self.per.iter().all(|&a| a == 0) && self.pre.iter().skip(i).all(|&a| a == 0)
    }

    /// Same infinite word with the period repeated `times` times.
    pub fn with_period_repeated(&self, times: usize) -> EpWord {
        assert!(times >= 1);
        EpWord {
            pre: self.pre.clone(),
            per: self.per.repeat(times),
        }
    }

    /// Same infinite word with minimal preperiod and period lengths.
    pub fn canonical(&self) -> EpWord {
        let n = self.per.len();
        let p = (1..=n)
            .filter(|p| n.is_multiple_of(*p))
            .find(|&p| (0..n).all(|i| self.per[i] == self.per[i % p]))
            .unwrap_or(n);
        let mut pre = self.pre.clone();
        let mut per = self.per[..p].to_vec();
        while let Some(&last) = pre.last() {
            if last != per[p - 1] {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        EpWord { pre, per }
    }

    /// Lexicographic comparison of the infinite words.
    pub fn cmp_lex(&self, other: &EpWord) -> Ordering {
        let horizon = self.pre.len().max(other.pre.len()) + self.per.len().lcm(&other.per.len());
        for j in 1..=horizon {
            match self.letter(j).cmp(&other.letter(j)) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// Compares `v · 0^ω` with the tail of `self` starting at 1-based position `start`.
    pub fn cmp_padded_at(&self, start: usize, v: &[Letter]) -> Ordering {
        for (i, &a) in v.iter().enumerate() {
            match a.cmp(&self.letter(start + i)) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        if self.is_zero_from(start + v.len()) {
            Ordering::Equal
        } else {
            Ordering::Less
        }
    }

    /// Largest letter occurring in the word.
    pub fn max_letter(&self) -> Letter {
        self.pre.iter().chain(self.per.iter()).copied().max().unwrap_or(0)
    }
}

impl fmt::Display for EpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", format_word(&self.pre), format_word(&self.per))
    }
}

impl std::str::FromStr for EpWord {
    type Err = WordError;

    /// `pre|per` with comma-separated letters; without `|` the input is a
    /// finite word completed by `0^ω`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('|') {
            Some((pre, per)) => {
                let per = parse_word(per)?;
                EpWord::new(parse_word(pre)?, per)
            }
            None => Ok(EpWord::finite(&parse_word(s)?)),
        }
    }
}

/// Parses comma-separated letter indices; the empty string and `ε` are the empty word.
pub fn parse_word(s: &str) -> Result<Vec<Letter>, WordError> {
    let s = s.trim();
    if s.is_empty() || s == "ε" || s == "-" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<Letter>()
                .map_err(|_| WordError::BadLetter(t.to_string()))
        })
        .collect()
}

pub fn format_word(w: &[Letter]) -> String {
    w.iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Shortlex comparison of finite words.
pub fn cmp_shortlex(v: &[Letter], w: &[Letter]) -> Ordering {
    v.len().cmp(&w.len()).then_with(|| v.cmp(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters_and_shift() {
        let u: EpWord = "3,0|2".parse().unwrap();
        assert_eq!(u.prefix(5), vec![3, 0, 2, 2, 2]);
        assert_eq!(u.shift(1).prefix(3), vec![0, 2, 2]);
        assert_eq!(u.shift(4), EpWord::periodic(&[2]));
        let v = EpWord::new(vec![1], vec![4, 0, 1]).unwrap();
        assert_eq!(v.shift(3).prefix(4), vec![1, 4, 0, 1]);
    }

    #[test]
    fn parse_forms() {
        assert_eq!("1,2".parse::<EpWord>().unwrap(), EpWord::finite(&[1, 2]));
        assert_eq!("|2".parse::<EpWord>().unwrap(), EpWord::periodic(&[2]));
        assert!("1|".parse::<EpWord>().is_err());
        assert!("1,x".parse::<EpWord>().is_err());
        assert_eq!(parse_word("ε").unwrap(), Vec::<Letter>::new());
    }

    #[test]
    fn canonical_form() {
        let u = EpWord::new(vec![0, 1, 0, 1], vec![0, 1, 0, 1]).unwrap();
        assert_eq!(u.canonical(), EpWord::periodic(&[0, 1]));
        let t = EpWord::new(vec![2, 4, 0, 1], vec![4, 0, 1, 4, 0, 1]).unwrap();
        assert_eq!(t.canonical(), EpWord::new(vec![2], vec![4, 0, 1]).unwrap());
    }

    #[test]
    fn lexicographic() {
        let a = EpWord::periodic(&[4, 0, 1]);
        let b = EpWord::periodic(&[0, 1, 4]);
        assert_eq!(a.cmp_lex(&b), Ordering::Greater);
        assert_eq!(a.cmp_lex(&a.with_period_repeated(3)), Ordering::Equal);
        let u: EpWord = "1|0".parse().unwrap();
        assert_eq!(u.cmp_padded_at(1, &[1]), Ordering::Equal);
        assert_eq!(u.cmp_padded_at(1, &[0, 2]), Ordering::Less);
        assert_eq!(EpWord::periodic(&[2]).cmp_padded_at(3, &[]), Ordering::Less);
        assert_eq!(EpWord::finite(&[1]).cmp_padded_at(2, &[]), Ordering::Equal);
    }
}
