//! Univariate polynomials over the rationals and the integers.
//!
//! Coefficient vectors are ascending: `c[k]` multiplies `x^k`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::AlgebraError;

/// Polynomials of degree above this are not factored.
pub const MAX_FACTOR_DEGREE: usize = 8;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Polynomial over Q without trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(c: &[BigInt]) -> Self {
        Poly::new(c.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| q(x)).collect())
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn constant(v: BigRational) -> Self {
        Poly::new(vec![v])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.c.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.c
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, ci| acc * x + ci)
    }

    pub fn sign_at(&self, x: &BigRational) -> i32 {
        sign(&self.eval(x))
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    self.c.get(i).cloned().unwrap_or_default() + o.c.get(i).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.c.iter().map(|x| -x).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        Poly::new(self.c.iter().map(|x| x * s).collect())
    }

    pub fn divrem(&self, div: &Poly) -> (Poly, Poly) {
        assert!(!div.is_zero(), "polynomial division by zero");
        let dd = div.c.len() - 1;
        let lead = div.lead();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quo = vec![BigRational::zero(); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let f = &r[k + dd] / &lead;
            if !f.is_zero() {
                for (j, dj) in div.c.iter().enumerate() {
                    r[k + j] -= &f * dj;
                }
            }
            quo[k] = f;
        }
        r.truncate(dd);
        (Poly::new(quo), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = self.lead();
        Poly::new(self.c.iter().map(|x| x / &l).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, x)| x * q(k as i64))
                .collect(),
        )
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Integer coefficients, if all coefficients are integers.
    pub fn to_integer(&self) -> Option<Vec<BigInt>> {
        self.c
            .iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect()
    }
}

pub fn sign(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Canonical Sturm sequence of a polynomial.
pub fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].divrem(&seq[n - 1]).1;
        if r.is_zero() {
            break;
        }
        seq.push(r.neg());
    }
    seq
}

fn sign_changes(seq: &[Poly], x: &BigRational) -> usize {
    let signs: Vec<i32> = seq.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
pub fn count_roots(seq: &[Poly], a: &BigRational, b: &BigRational) -> usize {
    sign_changes(seq, a).saturating_sub(sign_changes(seq, b))
}

/// Bound strictly above the modulus of every complex root.
pub fn cauchy_bound(p: &Poly) -> BigRational {
    let l = p.lead().abs();
    let m = p.c[..p.c.len() - 1]
        .iter()
        .map(|x| x.abs() / &l)
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    m + BigRational::one()
}

/// Interval `(lo, hi]` containing exactly one real root of `p`, namely the largest one,
/// with `lo >= lower`; `None` if `p` has no real root above `lower`.
///
/// `hi` is not a root unless the root is rational, in which case `lo == hi`.
pub fn isolate_largest_root(p: &Poly, lower: &BigRational) -> Option<(BigRational, BigRational)> {
    let sf = p.squarefree();
    if sf.degree()? == 0 {
        return None;
    }
    let seq = sturm_sequence(&sf);
    let mut lo = lower.clone();
    let mut hi = cauchy_bound(&sf);
    if &hi <= lower {
        return None;
    }
    if count_roots(&seq, &lo, &hi) == 0 {
        return None;
    }
    let two = q(2);
    while count_roots(&seq, &lo, &hi) > 1 {
        let mid = (&lo + &hi) / &two;
        if count_roots(&seq, &mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if sf.sign_at(&hi) == 0 {
        // rational root
        return Some((hi.clone(), hi));
    }
    Some((lo, hi))
}

fn int_poly(p: &[BigInt]) -> Poly {
    Poly::from_ints(p)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let e = &n / &d;
            if e != d {
                large.push(e);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn eval_int(p: &[BigInt], x: i64) -> BigInt {
    let x = BigInt::from(x);
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
}

/// Exact division by a monic integer polynomial; `None` if it leaves a remainder.
pub fn div_exact_monic(p: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    let (quo, rem) = int_poly(p).divrem(&int_poly(g));
    if !rem.is_zero() {
        return None;
    }
    quo.to_integer()
}

/// A monic integer factor of degree exactly `k`, by Kronecker's interpolation search.
fn kronecker_factor(p: &[BigInt], k: usize) -> Option<Vec<BigInt>> {
    let mut pts: Vec<(i64, BigInt)> = (-12i64..=12)
        .map(|x| (x, eval_int(p, x)))
        .filter(|(_, v)| !v.is_zero())
        .collect();
    pts.sort_by_key(|(x, v)| (v.abs(), x.abs()));
    pts.truncate(k + 1);
    if pts.len() < k + 1 {
        return None;
    }
    let xs: Vec<BigRational> = pts.iter().map(|(x, _)| q(*x)).collect();
    // Lagrange basis
    let basis: Vec<Poly> = (0..=k)
        .map(|i| {
            let mut b = Poly::constant(BigRational::one());
            for j in 0..=k {
                if i != j {
                    let den = &xs[i] - &xs[j];
                    b = b.mul(&Poly::new(vec![-&xs[j] / &den, BigRational::one() / &den]));
                }
            }
            b
        })
        .collect();
    let choices: Vec<Vec<BigInt>> = pts
        .iter()
        .map(|(_, v)| {
            divisors(v)
                .into_iter()
                .flat_map(|d| [d.clone(), -d])
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; k + 1];
    loop {
        let g = (0..=k).fold(Poly::zero(), |acc, i| {
            acc.add(&basis[i].scale(&BigRational::from_integer(choices[i][idx[i]].clone())))
        });
        if g.degree() == Some(k) && g.lead().is_one() {
            if let Some(gi) = g.to_integer() {
                if div_exact_monic(p, &gi).is_some() {
                    return Some(gi);
                }
            }
        }
        // odometer
        let mut i = 0;
        loop {
            if i > k {
                return None;
            }
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Some monic integer factor of degree in `1..deg p`, if one exists.
fn find_factor(p: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = p.len() - 1;
    if n <= 1 {
        return None;
    }
    if p[0].is_zero() {
        return Some(vec![BigInt::zero(), BigInt::one()]);
    }
    // rational (hence integer) roots divide the constant term
    for dv in divisors(&p[0]) {
        for r in [dv.clone(), -dv] {
            let v = p.iter().rev().fold(BigInt::zero(), |acc, c| acc * &r + c);
            if v.is_zero() {
                return Some(vec![-r, BigInt::one()]);
            }
        }
    }
    (2..=n / 2).find_map(|k| kronecker_factor(p, k))
}

/// Factorisation of a monic integer polynomial into monic irreducible factors with
/// multiplicities, sorted by degree.
pub fn factor_monic(p: &[BigInt]) -> Result<Vec<(Vec<BigInt>, usize)>, AlgebraError> {
    check_monic(p)?;
    if p.len() - 1 > MAX_FACTOR_DEGREE {
        return Err(AlgebraError::DegreeTooLarge(p.len() - 1));
    }
    let mut pending = vec![p.to_vec()];
    let mut irreducible: Vec<Vec<BigInt>> = Vec::new();
    while let Some(f) = pending.pop() {
        match find_factor(&f) {
            Some(g) => {
                let h = div_exact_monic(&f, &g).expect("factor divides");
                pending.push(g);
                pending.push(h);
            }
            None => irreducible.push(f),
        }
    }
    irreducible.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut out: Vec<(Vec<BigInt>, usize)> = Vec::new();
    for f in irreducible {
        match out.last_mut() {
            Some((g, m)) if *g == f => *m += 1,
            _ => out.push((f, 1)),
        }
    }
    Ok(out)
}

pub fn is_irreducible(p: &[BigInt]) -> Result<bool, AlgebraError> {
    let f = factor_monic(p)?;
    Ok(f.len() == 1 && f[0].1 == 1)
}

pub fn check_monic(p: &[BigInt]) -> Result<(), AlgebraError> {
    if p.len() < 2 || !p.last().is_some_and(One::is_one) {
        return Err(AlgebraError::NotMonic);
    }
    Ok(())
}

/// Renders like `x^3-2x^2-x+1`.
pub fn format_int_poly(p: &[BigInt], var: &str) -> String {
    let mut s = String::new();
    for k in (0..p.len()).rev() {
        let c = &p[k];
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if neg {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        if !a.is_one() || k == 0 {
            let _ = write!(s, "{a}");
        }
        match k {
            0 => {}
            1 => s.push_str(var),
            _ => {
                let _ = write!(s, "{var}^{k}");
            }
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// Renders a factorisation like `(x)(x^3-7x^2+15x-11)`.
pub fn format_factors(f: &[(Vec<BigInt>, usize)]) -> String {
    f.iter()
        .map(|(g, m)| {
            let body = format!("({})", format_int_poly(g, "x"));
            if *m > 1 {
                format!("{body}^{m}")
            } else {
                body
            }
        })
        .collect()
}

/// Parses space-separated integer coefficients, constant term first.
pub fn parse_int_poly(s: &str) -> Result<Vec<BigInt>, AlgebraError> {
    let c = s
        .split_whitespace()
        .map(|t| {
            t.parse::<BigInt>()
                .map_err(|_| AlgebraError::Syntax(format!("`{t}` is not an integer")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    check_monic(&c)?;
    Ok(c)
}

pub fn ints(c: &[i64]) -> Vec<BigInt> {
    c.iter().map(|&x| BigInt::from(x)).collect()
}

/// Best `f64` approximation of a rational.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Integer part rounded towards minus infinity.
pub fn floor(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}
