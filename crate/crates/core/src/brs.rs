//! Bounded remainder sets `[0, ⟨u⟩)`: the sufficient tail test, the exact decision
//! procedure over monotone profiles, and an empirical growth check.

use std::collections::HashMap;
use std::collections::VecDeque;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebraic::FieldElement;
use crate::automaton::{OrderedAutomaton, State};
use crate::discrepancy::Discrepancy;
use crate::error::SpectralError;
use crate::spectral::{is_pisot_automaton, PerronEigen, SpectralData};
use crate::vdc::ValuedWord;
use crate::word::{format_word, Letter};

/// `q ↦ τ(q, v)` for the word `v` read so far.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonotoneProfile(Vec<State>);

impl MonotoneProfile {
    pub fn identity(d: usize) -> Self {
        MonotoneProfile((0..=d).collect())
    }

    pub fn extend(&self, aut: &OrderedAutomaton, a: Letter) -> Self {
        MonotoneProfile(self.0.iter().map(|&q| aut.next(q, a)).collect())
    }

    pub fn apply(&self, q: State) -> State {
        self.0[q]
    }

    /// `#{q >= 1 : τ(q,v) > 0}`, which equals `τ̃(d, ṽ)`.
    pub fn rank(&self) -> State {
        self.0[1..].iter().filter(|&&s| s > 0).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Bounded,
    Unbounded,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Bounded => "bounded",
            Decision::Unbounded => "unbounded",
        })
    }
}

/// A theorem hypothesis that failed for the automaton at hand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    NotPisot,
    SmallestLetterDoesNotIncrease,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::NotPisot => "not Pisot",
            Hypothesis::SmallestLetterDoesNotIncrease => "smallest letter does not increase states",
        })
    }
}

/// A word `v` and position `k` for which the required identity fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub v: Vec<Letter>,
    pub k: usize,
    pub expected: u8,
    pub zeta: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrsVerdict {
    pub decision: Decision,
    pub unmet: Vec<Hypothesis>,
    pub witness: Option<Witness>,
    pub prop5: Option<(usize, State)>,
}

impl BrsVerdict {
    pub fn hypotheses_met(&self) -> bool {
        self.unmet.is_empty()
    }
}

impl fmt::Display for BrsVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.decision)?;
        if !self.unmet.is_empty() {
            let s: Vec<String> = self.unmet.iter().map(|h| h.to_string()).collect();
            write!(f, " (hypotheses-not-met: {})", s.join(", "))?;
        }
        Ok(())
    }
}

/// The `ε`-sequence of a state-synchronised walk, as preperiod and period.
struct EpsSeq {
    pre: Vec<FieldElement>,
    per: Vec<FieldElement>,
}

impl EpsSeq {
    fn get(&self, j: usize) -> &FieldElement {
        if j <= self.pre.len() {
            &self.pre[j - 1]
        } else {
            &self.per[(j - self.pre.len() - 1) % self.per.len()]
        }
    }
}

fn eps_of_max_word(aut: &OrderedAutomaton, eig: &PerronEigen, q: State) -> EpsSeq {
    let zero = eig.field().zero();
    if q == 0 {
        return EpsSeq {
            pre: vec![],
            per: vec![zero],
        };
    }
    let t = aut.max_word_from(q).expect("validated automaton has an exit from every live state");
    let mut s = q;
    let mut digits = Vec::new();
    for j in 1..=t.pre().len() + t.per().len() {
        let c = t.letter(j);
        digits.push((0..c).fold(zero.clone(), |acc, a| &acc + eig.eta(aut.next(s, a))));
        s = aut.next(s, c);
    }
    let per = digits.split_off(t.pre().len());
    EpsSeq { pre: digits, per }
}

/// Smallest `(m, q)`, ordered by `m` then `q`, with `ε_{m+1}(u) ε_{m+2}(u) ⋯ = ε_{q,1}(t_q) ⋯`.
pub fn prop5_check(aut: &OrderedAutomaton, eig: &PerronEigen, u: &ValuedWord) -> Option<(usize, State)> {
    let (mu, pu) = (u.preperiod(), u.period());
    let seqs: Vec<EpsSeq> = (0..=aut.d()).map(|q| eps_of_max_word(aut, eig, q)).collect();
    for m in 0..mu + pu {
        for (q, e) in seqs.iter().enumerate() {
            let horizon = mu + e.pre.len() + pu.lcm(&e.per.len());
            if (1..=horizon).all(|i| u.epsilon(m + i) == e.get(i)) {
                return Some((m, q));
            }
        }
    }
    None
}

type Node = (MonotoneProfile, Cmp);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Cmp {
    Less,
    NotLess,
    /// `v` matches the tail so far; the next tail letter has this phase.
    Eq(usize),
}

/// Exact decision of boundedness of `D(N, [0, ⟨u⟩))`.
pub fn thm2_decide(aut: &OrderedAutomaton, sd: &SpectralData, u: &ValuedWord) -> Result<BrsVerdict, SpectralError> {
    let mut unmet = Vec::new();
    if !is_pisot_automaton(aut)? {
        unmet.push(Hypothesis::NotPisot);
    }
    if !aut.smallest_letter_increases() {
        unmet.push(Hypothesis::SmallestLetterDoesNotIncrease);
    }
    let prop5 = prop5_check(aut, sd.eigen(), u);
    let (m, p) = (u.preperiod(), u.period());
    let per = u.word().per();
    let tail_bit = per.iter().any(|&a| a > 0);
    let d = aut.d();
    let mut witness = None;
    'positions: for k in m + 1..=m + p {
        let y = u.tail(k);
        let zetas: Vec<BigRational> = (0..=d).map(|r| sd.zeta(r, &y)).collect();
        let s = u.state_after(k - 1);
        let start = (MonotoneProfile::identity(d), Cmp::Eq((k - m - 1) % p));
        let mut parent: HashMap<Node, Option<(Node, Letter)>> =
            HashMap::new();
        parent.insert(start.clone(), None);
        let mut queue = VecDeque::from([start]);
        while let Some(node) = queue.pop_front() {
            let (prof, cmp) = &node;
            let less = match cmp {
                Cmp::Less => true,
                Cmp::NotLess => false,
                Cmp::Eq(_) => tail_bit,
            };
            let expected = u8::from(less && prof.apply(s) > 0);
            let z = &zetas[prof.rank()];
            let want = if expected == 1 { BigRational::one() } else { BigRational::zero() };
            if *z != want {
                let mut v = Vec::new();
                let mut cur = node.clone();
                while let Some(Some((prev, a))) = parent.get(&cur) {
                    v.push(*a);
                    cur = prev.clone();
                }
                v.reverse();
                witness = Some(Witness {
                    v,
                    k,
                    expected,
                    zeta: z.clone(),
                });
                break 'positions;
            }
            for a in 0..aut.sigma() {
                let next_cmp = match *cmp {
                    Cmp::Eq(ph) => match a.cmp(&per[ph]) {
                        std::cmp::Ordering::Less => Cmp::Less,
                        std::cmp::Ordering::Greater => Cmp::NotLess,
                        std::cmp::Ordering::Equal => Cmp::Eq((ph + 1) % p),
                    },
                    c => c,
                };
                let next = (prof.extend(aut, a), next_cmp);
                if !parent.contains_key(&next) {
                    parent.insert(next.clone(), Some((node.clone(), a)));
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(BrsVerdict {
        decision: if witness.is_some() {
            Decision::Unbounded
        } else {
            Decision::Bounded
        },
        unmet,
        witness,
        prop5,
    })
}

/// Recomputes both sides of the identity for `(v, k)` from scratch: the indicator by
/// direct comparison and membership, and `ζ_r(y_k)` with `r = τ̃(d, ṽ)` read on the mirror.
pub fn recheck_witness(
    aut: &OrderedAutomaton,
    sd: &SpectralData,
    u: &ValuedWord,
    w: &Witness,
) -> (u8, BigRational) {
    let less = u.word().cmp_padded_at(w.k, &w.v) == std::cmp::Ordering::Less;
    let mut full = u.word().prefix(w.k - 1);
    full.extend_from_slice(&w.v);
    let member = aut.run(aut.d(), &full) > 0;
    let rev: Vec<Letter> = w.v.iter().rev().copied().collect();
    let mir = aut.mirror();
    let r = mir.run(mir.d(), &rev);
    (u8::from(less && member), sd.zeta(r, &u.tail(w.k)))
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = if self.v.is_empty() {
            "ε".to_string()
        } else {
            format_word(&self.v)
        };
        write!(
            f,
            "v = {v}, k = {}: indicator {} but zeta = {}",
            self.k, self.expected, self.zeta
        )
    }
}

/// Growth report of `max_{n <= N} |D(n)|` at `N = 2, 4, 8, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalReport {
    pub n_max: u64,
    pub max_abs_d: f64,
    /// Least-squares slope of the running maximum against `ln N`.
    pub slope: f64,
    pub checkpoints: Vec<(u64, f64)>,
    /// Running maximum at `N = 10⁴` (or `n_max` if smaller).
    pub max_at_1e4: f64,
}

impl EmpiricalReport {
    pub fn looks_bounded(&self) -> bool {
        self.slope < 0.05
    }

    /// The overall maximum is already attained by `N = 10⁴`.
    pub fn plateaued(&self) -> bool {
        self.max_abs_d <= self.max_at_1e4
    }
}

pub fn empirical_check(disc: &Discrepancy, u: &ValuedWord, n_max: u64) -> EmpiricalReport {
    let series = disc.abs_d_series(u.value(), n_max);
    let mut running = Vec::with_capacity(series.len());
    let mut mx = 0.0f64;
    for a in &series {
        mx = mx.max(*a);
        running.push(mx);
    }
    let mut checkpoints = Vec::new();
    let mut n = 2u64;
    while n <= n_max {
        checkpoints.push((n, running[n as usize]));
        n *= 2;
    }
    let slope = if checkpoints.len() < 2 {
        0.0
    } else {
        let xs: Vec<f64> = checkpoints.iter().map(|(n, _)| (*n as f64).ln()).collect();
        let ys: Vec<f64> = checkpoints.iter().map(|(_, v)| *v).collect();
        let k = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / k;
        let my = ys.iter().sum::<f64>() / k;
        let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        num / den
    };
    EmpiricalReport {
        n_max,
        max_abs_d: mx,
        slope,
        checkpoints,
        max_at_1e4: running[n_max.min(10_000) as usize],
    }
}
