//! Totally ordered automata on the states `0..=d`.
//!
//! State `0` is the sink, `d` is the initial state and every nonzero state is
//! final. The totally ordered property is column monotonicity of the
//! transition table: `q <= r` implies `trans[q][a] <= trans[r][a]`.

use std::collections::VecDeque;
use std::fmt;

use crate::error::AutomatonError;
use crate::word::{EpWord, Letter};

pub type State = usize;

/// A broken table invariant, located by row and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Row 0 has a nonzero entry.
    Sink { letter: Letter, target: State },
    /// An entry is larger than the maximal state.
    Range { state: State, letter: Letter, target: State },
    /// `trans[lower][letter] > trans[lower + 1][letter]`.
    Monotonicity { letter: Letter, lower: State },
    /// A row has the wrong number of columns.
    Shape { state: State, len: usize, sigma: usize },
    /// Fewer than one nonzero state or an empty alphabet.
    Empty,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Sink { letter, target } => {
                write!(f, "sink: row 0, column {letter} is {target}, expected 0")
            }
            Violation::Range {
                state,
                letter,
                target,
            } => write!(f, "range: row {state}, column {letter} is {target}"),
            Violation::Monotonicity { letter, lower } => write!(
                f,
                "monotonicity: column {letter} decreases from row {lower} to row {}",
                lower + 1
            ),
            Violation::Shape { state, len, sigma } => {
                write!(f, "shape: row {state} has {len} entries, expected {sigma}")
            }
            Violation::Empty => write!(f, "empty: need d >= 1 and sigma >= 1"),
        }
    }
}

/// Checks every table invariant; `trans` includes row 0.
pub fn validate(trans: &[Vec<State>]) -> Result<(), Vec<Violation>> {
    if trans.len() < 2 || trans[0].is_empty() {
        return Err(vec![Violation::Empty]);
    }
    let d = trans.len() - 1;
    let sigma = trans[0].len();
    let mut out = Vec::new();
    for (q, row) in trans.iter().enumerate() {
        if row.len() != sigma {
            out.push(Violation::Shape {
                state: q,
                len: row.len(),
                sigma,
            });
        }
    }
    if !out.is_empty() {
        return Err(out);
    }
    for (a, &t) in trans[0].iter().enumerate() {
        if t != 0 {
            out.push(Violation::Sink {
                letter: a,
                target: t,
            });
        }
    }
    for (q, row) in trans.iter().enumerate() {
        for (a, &t) in row.iter().enumerate() {
            if t > d {
                out.push(Violation::Range {
                    state: q,
                    letter: a,
                    target: t,
                });
            }
        }
    }
    for a in 0..sigma {
        for q in 0..d {
            if trans[q][a] > trans[q + 1][a] {
                out.push(Violation::Monotonicity {
                    letter: a,
                    lower: q,
                });
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Square matrix of transition multiplicities between the states `1..=d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<Vec<u64>>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<u64>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix { rows }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::new(
            (0..n)
                .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Entry at 0-based `(i, j)`; for incidence matrices this is `(q-1, r-1)`.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.size();
        IntMatrix::new(
            (0..n)
                .map(|i| (0..n).map(|j| self.rows[j][i]).collect())
                .collect(),
        )
    }

    /// Principal submatrix on the given 0-based indices.
    pub fn restrict(&self, idx: &[usize]) -> IntMatrix {
        IntMatrix::new(
            idx.iter()
                .map(|&i| idx.iter().map(|&j| self.rows[i][j]).collect())
                .collect(),
        )
    }
}

/// A validated totally ordered automaton.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedAutomaton {
    d: State,
    sigma: usize,
    trans: Vec<Vec<State>>,
}

impl OrderedAutomaton {
    /// Builds from the full table, row 0 included.
    pub fn new(trans: Vec<Vec<State>>) -> Result<Self, AutomatonError> {
        validate(&trans).map_err(AutomatonError::Invalid)?;
        Ok(OrderedAutomaton {
            d: trans.len() - 1,
            sigma: trans[0].len(),
            trans,
        })
    }

    /// Builds from the rows of the states `1..=d`; row 0 is the implicit sink.
    pub fn from_rows(rows: Vec<Vec<State>>) -> Result<Self, AutomatonError> {
        let sigma = rows.first().map_or(0, Vec::len);
        let mut trans = Vec::with_capacity(rows.len() + 1);
        trans.push(vec![0; sigma]);
        trans.extend(rows);
        Self::new(trans)
    }

    /// Maximal (initial) state.
    pub fn d(&self) -> State {
        self.d
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn table(&self) -> &[Vec<State>] {
        &self.trans
    }

    /// One transition; indices must be in range.
    #[inline]
    pub fn next(&self, q: State, a: Letter) -> State {
        self.trans[q][a]
    }

    /// Iterated transition without range checks.
    #[inline]
    pub fn run(&self, q: State, w: &[Letter]) -> State {
        w.iter().fold(q, |s, &a| self.trans[s][a])
    }

    fn check_word(&self, w: &[Letter]) -> Result<(), AutomatonError> {
        match w.iter().find(|&&a| a >= self.sigma) {
            Some(&letter) => Err(AutomatonError::LetterOutOfRange {
                letter,
                sigma: self.sigma,
            }),
            None => Ok(()),
        }
    }

    fn check_state(&self, q: State) -> Result<(), AutomatonError> {
        if q > self.d {
            Err(AutomatonError::StateOutOfRange {
                state: q,
                d: self.d,
            })
        } else {
            Ok(())
        }
    }

    pub fn step(&self, q: State, w: &[Letter]) -> Result<State, AutomatonError> {
        self.check_state(q)?;
        self.check_word(w)?;
        Ok(self.run(q, w))
    }

    pub fn accepts(&self, w: &[Letter]) -> Result<bool, AutomatonError> {
        Ok(self.step(self.d, w)? > 0)
    }

    /// The automaton recognising the mirror language, `τ̃(r,a) = #{q : τ(q,a) + r > d}`.
    pub fn mirror(&self) -> OrderedAutomaton {
        let d = self.d;
        let trans = (0..=d)
            .map(|r| {
                (0..self.sigma)
                    .map(|a| (1..=d).filter(|&q| self.trans[q][a] + r > d).count())
                    .collect()
            })
            .collect();
        OrderedAutomaton {
            d,
            sigma: self.sigma,
            trans,
        }
    }

    /// True iff the automaton coincides with its mirror.
    pub fn is_self_mirror(&self) -> bool {
        self.mirror() == *self
    }

    /// Membership of `w` decided by a prefix run here and a reversed suffix run in `mir`.
    pub fn split_membership(
        &self,
        mir: &OrderedAutomaton,
        w: &[Letter],
        j: usize,
    ) -> Result<bool, AutomatonError> {
        if j > w.len() {
            return Err(AutomatonError::SplitIndex { j, len: w.len() });
        }
        self.check_word(w)?;
        let left = self.run(self.d, &w[..j]);
        let right = w[j..].iter().rev().fold(mir.d, |s, &a| mir.trans[s][a]);
        Ok(left + right > self.d)
    }

    /// `M_L[q-1][r-1] = #{a : τ(q,a) = r}` for `1 <= q, r <= d`.
    pub fn incidence(&self) -> IntMatrix {
        let d = self.d;
        let mut rows = vec![vec![0u64; d]; d];
        for q in 1..=d {
            for &r in &self.trans[q] {
                if r > 0 {
                    rows[q - 1][r - 1] += 1;
                }
            }
        }
        IntMatrix::new(rows)
    }

    /// Largest letter keeping state `q` out of the sink.
    pub fn max_letter(&self, q: State) -> Option<Letter> {
        (0..self.sigma).rev().find(|&a| self.trans[q][a] > 0)
    }

    /// The lexicographically maximal infinite word whose prefixes keep `q` out of the sink.
    pub fn max_word_from(&self, q: State) -> Result<EpWord, AutomatonError> {
        self.check_state(q)?;
        if q == 0 {
            return Ok(EpWord::periodic(&[0]));
        }
        let mut seen = vec![usize::MAX; self.d + 1];
        let mut letters = Vec::new();
        let mut s = q;
        while seen[s] == usize::MAX {
            seen[s] = letters.len();
            let a = self.max_letter(s).ok_or(AutomatonError::NoExit(s))?;
            letters.push(a);
            s = self.trans[s][a];
        }
        let start = seen[s];
        let per = letters.split_off(start);
        Ok(EpWord::new(letters, per).expect("cycle is nonempty"))
    }

    /// States reachable from `d` that can reach a nonzero state, in increasing order.
    pub fn trim(&self) -> Vec<State> {
        let d = self.d;
        let mut acc = vec![false; d + 1];
        let mut queue = VecDeque::from([d]);
        acc[d] = true;
        while let Some(s) = queue.pop_front() {
            for &t in &self.trans[s] {
                if !acc[t] {
                    acc[t] = true;
                    queue.push_back(t);
                }
            }
        }
        // every nonzero state is final, so co-accessibility is just "nonzero"
        (1..=d).filter(|&q| acc[q]).collect()
    }

    /// `τ(q, a₀) > 0` for every `q > 0`.
    pub fn smallest_letter_avoids_sink(&self) -> Result<(), State> {
        match (1..=self.d).find(|&q| self.trans[q][0] == 0) {
            Some(q) => Err(q),
            None => Ok(()),
        }
    }

    /// `τ(q, a₀) > q` for every `q` in `1..d`.
    pub fn smallest_letter_increases(&self) -> bool {
        (1..self.d).all(|q| self.trans[q][0] > q)
    }

    /// Parses the text format: `d <int>`, `sigma <int>`, then one row per state `1..=d`.
    pub fn parse(text: &str) -> Result<Self, AutomatonError> {
        let perr = |line: usize, msg: &str| AutomatonError::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let mut header = |key: &str| -> Result<usize, AutomatonError> {
            let (n, l) = lines
                .next()
                .ok_or_else(|| perr(0, &format!("missing `{key}` line")))?;
            let mut it = l.split_whitespace();
            if it.next() != Some(key) {
                return Err(perr(n, &format!("expected `{key} <int>`")));
            }
            let v = it
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| perr(n, &format!("expected `{key} <int>`")))?;
            if it.next().is_some() {
                return Err(perr(n, "trailing tokens"));
            }
            Ok(v)
        };
        let d = header("d")?;
        let sigma = header("sigma")?;
        if d == 0 || sigma == 0 {
            return Err(perr(0, "d and sigma must be positive"));
        }
        let mut rows = Vec::with_capacity(d);
        for k in 1..=d {
            let (n, l) = lines
                .next()
                .ok_or_else(|| perr(0, &format!("missing row for state {k}")))?;
            let row = l
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| perr(n, "row entries must be nonnegative integers"))?;
            if row.len() != sigma {
                return Err(perr(
                    n,
                    &format!("expected {sigma} entries, found {}", row.len()),
                ));
            }
            rows.push(row);
        }
        if let Some((n, _)) = lines.next() {
            return Err(perr(n, "trailing content after the last row"));
        }
        Self::from_rows(rows)
    }
}

impl fmt::Display for OrderedAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d {}", self.d)?;
        writeln!(f, "sigma {}", self.sigma)?;
        for row in &self.trans[1..] {
            let cells: Vec<String> = row.iter().map(|t| t.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for OrderedAutomaton {
    type Err = AutomatonError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}
