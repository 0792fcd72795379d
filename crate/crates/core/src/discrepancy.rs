//! The local discrepancy `D(N,[0,y)) = #{n < N : x_n < y} - N y`, evaluated by brute
//! force, by the structured word count, and through the rational forms `ζ_r`.

use std::cmp::Ordering;
use std::io::Write;
use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::algebraic::FieldElement;
use crate::automaton::{OrderedAutomaton, State};
use crate::error::{Error, NumerationError, ValueError};
use crate::numeration::Rank;
use crate::spectral::SpectralData;
use crate::vdc::{ValuedWord, VdcSequence};
use crate::word::{EpWord, Letter};

/// Default upper bound on `N` for brute-force evaluation.
pub const DEFAULT_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyPoint {
    pub n: Rank,
    pub count: Rank,
    pub d: FieldElement,
}

/// Summary of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepStats {
    pub rows: u64,
    pub max_abs_d: f64,
    /// `max |D(N)| / log N` over the emitted rows with `N >= 2`.
    pub max_ratio: f64,
}

/// Everything needed to evaluate discrepancies for one automaton.
#[derive(Debug)]
pub struct Discrepancy {
    aut: OrderedAutomaton,
    mir: OrderedAutomaton,
    sd: SpectralData,
    seq: VdcSequence,
    cap: u64,
    /// `lcount[m][q * (d+1) + r] = #{v ∈ A^m : τ(q,v) + r > d}`
    lcount: RwLock<Vec<Vec<BigUint>>>,
}

impl Discrepancy {
    /// Requires an irreducible characteristic polynomial, a primitive incidence matrix and
    /// `τ(q,a₀) > 0` for all `q > 0`.
    pub fn new(aut: &OrderedAutomaton) -> Result<Self, ValueError> {
        if let Err(q) = aut.smallest_letter_avoids_sink() {
            return Err(NumerationError::SmallestLetterSinks(q).into());
        }
        let sd = SpectralData::new(aut)?;
        let seq = VdcSequence::with_eigen(aut, Arc::new(sd.eigen().clone()));
        Ok(Discrepancy {
            aut: aut.clone(),
            mir: aut.mirror(),
            sd,
            seq,
            cap: DEFAULT_CAP,
            lcount: RwLock::new(Vec::new()),
        })
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn spectral(&self) -> &SpectralData {
        &self.sd
    }

    pub fn sequence(&self) -> &VdcSequence {
        &self.seq
    }

    pub fn automaton(&self) -> &OrderedAutomaton {
        &self.aut
    }

    pub fn mirror(&self) -> &OrderedAutomaton {
        &self.mir
    }

    pub fn valued(&self, u: &EpWord) -> Result<ValuedWord, ValueError> {
        ValuedWord::new(&self.aut, self.sd.eigen(), u)
    }

    fn check_unit(&self, y: &FieldElement) -> Result<(), ValueError> {
        let f = self.sd.field();
        if y.cmp_value(&f.zero()) == Ordering::Less || y.cmp_value(&f.one()) == Ordering::Greater {
            return Err(ValueError::OutOfUnitInterval(y.to_decimal(6)));
        }
        Ok(())
    }

    fn discrepancy(&self, n: u64, count: u64, y: &FieldElement) -> FieldElement {
        let f = self.sd.field();
        &f.int(count as i64) - &y.scale(&BigRational::from_integer(BigInt::from(n)))
    }

    /// `D(N,[0,y))` by generating `x_0, …, x_{N-1}`.
    pub fn brute_d(&self, n: u64, y: &FieldElement) -> Result<DiscrepancyPoint, ValueError> {
        if n > self.cap {
            return Err(ValueError::CapExceeded { n, cap: self.cap });
        }
        self.check_unit(y)?;
        let count = self.counts(y, n).last().unwrap_or(0);
        Ok(DiscrepancyPoint {
            n: Rank::from(n),
            count: Rank::from(count),
            d: self.discrepancy(n, count, y),
        })
    }

    /// `#{n < N : x_n < y}` for `N = 0, 1, …, n_max`.
    pub fn counts<'a>(&'a self, y: &'a FieldElement, n_max: u64) -> impl Iterator<Item = u64> + 'a {
        let (ylo, yhi) = y.enclosure();
        let mut count = 0u64;
        std::iter::once(0).chain(self.seq.points(n_max).map(move |p| {
            if self.seq.cmp_point(&p, y, ylo, yhi) == Ordering::Less {
                count += 1;
            }
            count
        }))
    }

    fn ensure_lcount(&self, len: usize) {
        if self.lcount.read().expect("count table").len() > len {
            return;
        }
        let d = self.aut.d();
        let idx = |q: usize, r: usize| q * (d + 1) + r;
        let mut t = self.lcount.write().expect("count table");
        if t.is_empty() {
            let mut base = vec![BigUint::zero(); (d + 1) * (d + 1)];
            for q in 1..=d {
                for r in 0..=d {
                    if q + r > d {
                        base[idx(q, r)] = BigUint::from(1u8);
                    }
                }
            }
            t.push(base);
        }
        while t.len() <= len {
            let prev = t.last().expect("base row");
            let mut row = vec![BigUint::zero(); (d + 1) * (d + 1)];
            for q in 1..=d {
                for r in 1..=d {
                    row[idx(q, r)] = (0..self.aut.sigma())
                        .map(|a| &prev[idx(self.aut.next(q, a), r)])
                        .sum();
                }
            }
            t.push(row);
        }
    }

    /// `#L^m_{q,r}`.
    pub fn count_l(&self, q: State, r: State, m: usize) -> BigUint {
        self.ensure_lcount(m);
        self.lcount.read().expect("count table")[m][q * (self.aut.d() + 1) + r].clone()
    }

    /// `rep(N)` read left to right as `w_1 ⋯ w_ℓ` (the reversal of the `L̃′` word).
    pub fn rep(&self, n: &Rank) -> Result<Vec<Letter>, ValueError> {
        self.seq.word(n)
    }

    /// `R_k = τ̃(d, w_ℓ ⋯ w_{k+1})` for `k = 0..=ℓ`, indexed by `k`.
    fn mirror_states(&self, w: &[Letter]) -> Vec<State> {
        let l = w.len();
        let mut r = vec![0; l + 1];
        r[l] = self.mir.d();
        for k in (1..=l).rev() {
            r[k - 1] = self.mir.next(r[k], w[k - 1]);
        }
        r
    }

    /// The word count of the counting lemma, with `w = rep(N)` as `w_1 ⋯ w_ℓ`.
    pub fn structured_count_word(&self, w: &[Letter], u: &ValuedWord) -> Rank {
        let l = w.len();
        let d = self.aut.d();
        let rs = self.mirror_states(w);
        self.ensure_lcount(l);
        let t = self.lcount.read().expect("count table");
        let mut total = Rank::zero();
        for j in 1..=l {
            let s = u.state_after(j - 1);
            for a in 0..u.word().letter(j) {
                let q = self.aut.next(s, a);
                if q == 0 {
                    continue;
                }
                for k in j + 1..=l {
                    for b in 0..w[k - 1] {
                        let r = self.mir.next(rs[k], b);
                        total += &t[k - j - 1][q * (d + 1) + r];
                    }
                }
            }
        }
        total + self.correction_c(u, w)
    }

    pub fn structured_count(&self, n: &Rank, u: &ValuedWord) -> Result<Rank, ValueError> {
        Ok(self.structured_count_word(&self.rep(n)?, u))
    }

    /// `C(N,u)` with `w = rep(N)` as `w_1 ⋯ w_ℓ`.
    pub fn correction_c(&self, u: &ValuedWord, w: &[Letter]) -> Rank {
        let l = w.len();
        let mut c = 0u64;
        for k in 1..=l {
            let s = u.state_after(k - 1);
            for b in 0..w[k - 1] {
                let mut v = Vec::with_capacity(l - k + 1);
                v.push(b);
                v.extend_from_slice(&w[k..]);
                if u.word().cmp_padded_at(k, &v) == Ordering::Less && self.aut.run(s, &v) > 0 {
                    c += 1;
                }
            }
        }
        Rank::from(c)
    }

    /// `γ_k(N) = Σ_{b<w_k} θ_{τ̃(d, w_ℓ ⋯ w_{k+1} b)}`.
    pub fn gamma(&self, w: &[Letter], k: usize) -> Result<FieldElement, ValueError> {
        if k == 0 || k > w.len() {
            return Err(ValueError::Position);
        }
        let rs = self.mirror_states(w);
        Ok((0..w[k - 1]).fold(self.sd.field().zero(), |acc, b| {
            &acc + self.sd.theta(self.mir.next(rs[k], b))
        }))
    }

    /// `Tr(Σ_k γ_k β^{k-1})`, which equals `N`.
    pub fn gamma_trace(&self, w: &[Letter]) -> Result<BigRational, ValueError> {
        let beta = self.sd.beta();
        let mut acc = self.sd.field().zero();
        for k in (1..=w.len()).rev() {
            acc = &(&acc * beta) + &self.gamma(w, k)?;
        }
        Ok(acc.trace())
    }

    /// Table of `ζ_r(y_k)` for the principal term.
    pub fn principal_table(&self, u: &ValuedWord) -> PrincipalTable {
        let (m, p) = (u.preperiod(), u.period());
        let rows = (1..=m + p)
            .map(|k| {
                let y = u.tail(k);
                (0..=self.aut.d()).map(|r| self.sd.zeta(r, &y)).collect()
            })
            .collect();
        PrincipalTable { m, p, rows }
    }

    /// `C(N,u) − Σ_k Σ_{b<w_k} ζ_{τ̃(d, w_ℓ⋯w_{k+1}b)}(y_k)` with `w = rep(N)`.
    pub fn principal_d_word(&self, w: &[Letter], u: &ValuedWord, table: &PrincipalTable) -> BigRational {
        let rs = self.mirror_states(w);
        let mut sum = BigRational::zero();
        for k in 1..=w.len() {
            let row = table.row(k);
            for b in 0..w[k - 1] {
                sum += &row[self.mir.next(rs[k], b)];
            }
        }
        let c = self.correction_c(u, w);
        BigRational::from_integer(BigInt::from(c)) - sum
    }

    pub fn principal_d(&self, n: &Rank, u: &ValuedWord) -> Result<BigRational, ValueError> {
        let table = self.principal_table(u);
        Ok(self.principal_d_word(&self.rep(n)?, u, &table))
    }

    /// Streams `N,count,D` rows for `N = 0, stride, 2 stride, … <= n_max`.
    pub fn sweep<W: Write>(
        &self,
        u: &ValuedWord,
        n_max: u64,
        stride: u64,
        out: W,
    ) -> Result<SweepStats, Error> {
        if stride == 0 {
            return Err(ValueError::Stride.into());
        }
        if n_max > self.cap {
            return Err(ValueError::CapExceeded {
                n: n_max,
                cap: self.cap,
            }
            .into());
        }
        let y = u.value();
        self.check_unit(y)?;
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["N", "count", "D"])?;
        let mut stats = SweepStats {
            rows: 0,
            max_abs_d: 0.0,
            max_ratio: 0.0,
        };
        for (n, count) in self.counts(y, n_max).enumerate() {
            let n = n as u64;
            if !n.is_multiple_of(stride) {
                continue;
            }
            let d = self.discrepancy(n, count, y);
            wtr.write_record([n.to_string(), count.to_string(), d.to_decimal(12)])?;
            let a = d.to_f64().abs();
            stats.rows += 1;
            stats.max_abs_d = stats.max_abs_d.max(a);
            if n >= 2 {
                stats.max_ratio = stats.max_ratio.max(a / (n as f64).ln());
            }
        }
        wtr.flush()?;
        Ok(stats)
    }

    /// `|D(N)|` in floating point for `N = 0..=n_max`.
    pub fn abs_d_series(&self, y: &FieldElement, n_max: u64) -> Vec<f64> {
        let yf = y.to_f64();
        self.counts(y, n_max)
            .enumerate()
            .map(|(n, c)| (c as f64 - n as f64 * yf).abs())
            .collect()
    }
}

/// Precomputed `ζ_r(y_k)`; rows for `k > m` repeat with period `p`.
#[derive(Debug, Clone)]
pub struct PrincipalTable {
    m: usize,
    p: usize,
    rows: Vec<Vec<BigRational>>,
}

impl PrincipalTable {
    pub fn row(&self, k: usize) -> &[BigRational] {
        let i = if k <= self.m + self.p {
            k
        } else {
            self.m + 1 + (k - self.m - 1) % self.p
        };
        &self.rows[i - 1]
    }
}

/// Rational to `f64` for reporting.
pub fn approx(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
