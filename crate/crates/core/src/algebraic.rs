//! Exact arithmetic in `Q(β)` where β is the largest real root of an irreducible
//! monic integer polynomial.
//!
//! Elements are coefficient vectors on the power basis `1, β, …, β^(n-1)`.
//! Order comparisons refine a rational isolating interval of β on demand; the
//! interval is shared by all elements of a field and only ever shrinks.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;
use crate::poly::{self, format_int_poly, q, Poly};

/// Bits of precision kept in the cached fine interval used for `f64` enclosures.
const FINE_BITS: u64 = 120;

#[derive(Debug)]
struct RootBox {
    lo: BigRational,
    hi: BigRational,
}

/// The number field `Q(β)`.
#[derive(Debug)]
pub struct NumberField {
    minpoly: Vec<BigInt>,
    min_q: Poly,
    /// `x^(n+i) mod minpoly` for `i = 0..n-1`.
    reduction: Vec<Vec<BigRational>>,
    power_sums: Vec<BigRational>,
    /// Exact root when the field has degree 1.
    rational_root: Option<BigRational>,
    root: RwLock<RootBox>,
    hi_sign: i32,
    fine: RwLock<Option<(BigRational, BigRational)>>,
}

impl NumberField {
    /// Builds `Q(β)` from an irreducible monic polynomial; β is its largest real root,
    /// which must exceed 1.
    pub fn new(minpoly: Vec<BigInt>) -> Result<Arc<Self>, AlgebraError> {
        poly::check_monic(&minpoly)?;
        let factors = poly::factor_monic(&minpoly)?;
        if factors.len() != 1 || factors[0].1 != 1 {
            return Err(AlgebraError::Reducible {
                poly: format_int_poly(&minpoly, "x"),
                factors: poly::format_factors(&factors),
            });
        }
        Self::new_assume_irreducible(minpoly)
    }

    /// Like [`NumberField::new`] but trusts the caller that `minpoly` is irreducible.
    pub fn new_assume_irreducible(minpoly: Vec<BigInt>) -> Result<Arc<Self>, AlgebraError> {
        poly::check_monic(&minpoly)?;
        let n = minpoly.len() - 1;
        let min_q = Poly::from_ints(&minpoly);
        let (lo, hi) = poly::isolate_largest_root(&min_q, &BigRational::one())
            .ok_or_else(|| AlgebraError::NoRootAboveOne(format_int_poly(&minpoly, "x")))?;
        let rational_root = (n == 1).then(|| -BigRational::from_integer(minpoly[0].clone()));
        if rational_root.as_ref().is_some_and(|r| r <= &BigRational::one()) {
            return Err(AlgebraError::NoRootAboveOne(format_int_poly(&minpoly, "x")));
        }
        let hi_sign = min_q.sign_at(&hi);
        // x^n = -(a_0 + … + a_{n-1} x^{n-1})
        let mut reduction = Vec::with_capacity(n);
        let mut cur: Vec<BigRational> = minpoly[..n]
            .iter()
            .map(|c| -BigRational::from_integer(c.clone()))
            .collect();
        for _ in 0..n {
            reduction.push(cur.clone());
            // multiply by x and reduce
            let top = cur[n - 1].clone();
            let mut next = vec![BigRational::zero(); n];
            for i in (1..n).rev() {
                next[i] = cur[i - 1].clone();
            }
            for (i, r) in reduction[0].iter().enumerate() {
                next[i] += &top * r;
            }
            cur = next;
        }
        let power_sums = newton_power_sums(&minpoly, 2 * n);
        Ok(Arc::new(NumberField {
            minpoly,
            min_q,
            reduction,
            power_sums,
            rational_root,
            root: RwLock::new(RootBox { lo, hi }),
            hi_sign,
            fine: RwLock::new(None),
        }))
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    /// `Σ βᵢ^k` over all roots of the minimal polynomial, for `k < 2n`.
    pub fn power_sum(&self, k: usize) -> &BigRational {
        &self.power_sums[k]
    }

    /// Current isolating interval of β.
    pub fn root_interval(&self) -> (BigRational, BigRational) {
        if let Some(r) = &self.rational_root {
            return (r.clone(), r.clone());
        }
        let b = self.root.read().expect("root lock");
        (b.lo.clone(), b.hi.clone())
    }

    /// Shrinks the isolating interval below `width`.
    pub fn refine(&self, width: &BigRational) {
        if self.rational_root.is_some() {
            return;
        }
        let mut b = self.root.write().expect("root lock");
        let two = q(2);
        while &(&b.hi - &b.lo) >= width {
            let mid = (&b.lo + &b.hi) / &two;
            let s = self.min_q.sign_at(&mid);
            debug_assert!(s != 0, "irreducible polynomial of degree > 1 has no rational root");
            if s == self.hi_sign {
                b.hi = mid;
            } else {
                b.lo = mid;
            }
        }
    }

    fn halve_times(&self, k: u32) {
        let (lo, hi) = self.root_interval();
        let w = (hi - lo) / BigRational::from_integer(BigInt::one() << k);
        self.refine(&w);
    }

    fn fine_interval(&self) -> (BigRational, BigRational) {
        if let Some(r) = &self.rational_root {
            return (r.clone(), r.clone());
        }
        if let Some(f) = self.fine.read().expect("fine lock").as_ref() {
            return f.clone();
        }
        self.refine(&BigRational::new(BigInt::one(), BigInt::one() << FINE_BITS));
        let f = self.root_interval();
        *self.fine.write().expect("fine lock") = Some(f.clone());
        f
    }

    /// β as a field element.
    pub fn beta(self: &Arc<Self>) -> FieldElement {
        if self.degree() == 1 {
            return FieldElement::from_rational(self, self.rational_root.clone().unwrap());
        }
        let mut c = vec![BigRational::zero(); self.degree()];
        c[1] = BigRational::one();
        FieldElement::from_coeffs(self, c)
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement::from_coeffs(self, vec![BigRational::zero(); self.degree()])
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.int(1)
    }

    pub fn int(self: &Arc<Self>, n: i64) -> FieldElement {
        FieldElement::from_rational(self, q(n))
    }

    /// Element `Σ c_k β^k` for integer coefficients of any length.
    pub fn from_int_poly(self: &Arc<Self>, c: &[i64]) -> FieldElement {
        let beta = self.beta();
        let mut acc = self.zero();
        let mut pw = self.one();
        for &ck in c {
            acc = &acc + &(&pw * &self.int(ck));
            pw = &pw * &beta;
        }
        acc
    }

    fn same(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || self.minpoly == other.minpoly
    }
}

fn newton_power_sums(p: &[BigInt], count: usize) -> Vec<BigRational> {
    let n = p.len() - 1;
    // x^n + e_1 x^{n-1} + … with e_i = p[n-i]
    let e = |i: usize| -> BigRational {
        if i <= n {
            BigRational::from_integer(p[n - i].clone())
        } else {
            BigRational::zero()
        }
    };
    let mut s = vec![q(n as i64)];
    for k in 1..count {
        let mut v = BigRational::zero();
        for i in 1..k.min(n + 1) {
            v -= e(i) * &s[k - i];
        }
        if k <= n {
            v -= e(k) * q(k as i64);
        }
        s.push(v);
    }
    s
}

/// An element of `Q(β)`, always reduced modulo the minimal polynomial.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    c: Vec<BigRational>,
}

impl FieldElement {
    pub fn from_coeffs(field: &Arc<NumberField>, mut c: Vec<BigRational>) -> Self {
        let n = field.degree();
        if c.len() > n {
            let mut r = c[..n].to_vec();
            for (i, ci) in c.iter().enumerate().skip(n) {
                if ci.is_zero() {
                    continue;
                }
                // reduce x^i using the precomputed table (i < 2n) or repeated folding
                let red = field.power_reduction(i);
                for (j, rj) in red.iter().enumerate() {
                    r[j] += ci * rj;
                }
            }
            c = r;
        }
        c.resize(n, BigRational::zero());
        FieldElement {
            field: field.clone(),
            c,
        }
    }

    pub fn from_rational(field: &Arc<NumberField>, v: BigRational) -> Self {
        let mut c = vec![BigRational::zero(); field.degree()];
        c[0] = v;
        FieldElement {
            field: field.clone(),
            c,
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// `Some(v)` when the element is the rational number `v`.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.c[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.c[0].clone())
    }

    fn check(&self, o: &FieldElement) -> Result<(), AlgebraError> {
        if self.field.same(&o.field) {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch)
        }
    }

    pub fn try_add(&self, o: &FieldElement) -> Result<FieldElement, AlgebraError> {
        self.check(o)?;
        Ok(FieldElement {
            field: self.field.clone(),
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, o: &FieldElement) -> Result<FieldElement, AlgebraError> {
        self.check(o)?;
        Ok(FieldElement {
            field: self.field.clone(),
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, o: &FieldElement) -> Result<FieldElement, AlgebraError> {
        self.check(o)?;
        let n = self.c.len();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(FieldElement::from_coeffs(&self.field, prod))
    }

    pub fn try_div(&self, o: &FieldElement) -> Result<FieldElement, AlgebraError> {
        self.check(o)?;
        self.try_mul(&o.inv()?)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against the minimal polynomial.
    pub fn inv(&self) -> Result<FieldElement, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.field.min_q.clone(), Poly::new(self.c.clone()));
        let (mut t0, mut t1) = (Poly::zero(), Poly::constant(BigRational::one()));
        while r1.degree().unwrap_or(0) > 0 {
            let (quo, rem) = r0.divrem(&r1);
            let t2 = t0.sub(&quo.mul(&t1));
            r0 = r1;
            r1 = rem;
            t0 = t1;
            t1 = t2;
        }
        // r1 is a nonzero constant since the minimal polynomial is irreducible
        let k = r1.lead();
        let inv = t1.scale(&(BigRational::one() / k));
        Ok(FieldElement::from_coeffs(&self.field, inv.coeffs().to_vec()))
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<FieldElement, AlgebraError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.field.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn scale(&self, s: &BigRational) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            c: self.c.iter().map(|x| x * s).collect(),
        }
    }

    /// Sum over all embeddings, `Σᵢ z^(i)`.
    pub fn trace(&self) -> BigRational {
        self.c
            .iter()
            .enumerate()
            .map(|(k, ck)| ck * self.field.power_sum(k))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Rational enclosure of the value at the current root interval.
    fn eval_interval(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        let mut elo = BigRational::zero();
        let mut ehi = BigRational::zero();
        let mut plo = BigRational::one();
        let mut phi = BigRational::one();
        for ck in &self.c {
            if ck.is_positive() {
                elo += ck * &plo;
                ehi += ck * &phi;
            } else if ck.is_negative() {
                elo += ck * &phi;
                ehi += ck * &plo;
            }
            plo *= lo;
            phi *= hi;
        }
        (elo, ehi)
    }

    /// Sign of the element at β; exact.
    pub fn signum(&self) -> Ordering {
        if let Some(v) = self.as_rational() {
            return v.cmp(&BigRational::zero());
        }
        let f = &self.field;
        loop {
            let (lo, hi) = f.root_interval();
            let (elo, ehi) = self.eval_interval(&lo, &hi);
            if elo.is_positive() {
                return Ordering::Greater;
            }
            if ehi.is_negative() {
                return Ordering::Less;
            }
            f.halve_times(16);
        }
    }

    /// Exact order comparison at β.
    pub fn cmp_value(&self, o: &FieldElement) -> Ordering {
        self.check(o).expect("field mismatch");
        if self.c == o.c {
            return Ordering::Equal;
        }
        (self - o).signum()
    }

    pub fn try_cmp(&self, o: &FieldElement) -> Result<Ordering, AlgebraError> {
        self.check(o)?;
        Ok(self.cmp_value(o))
    }

    /// Guaranteed `f64` enclosure `lo <= value <= hi`.
    pub fn enclosure(&self) -> (f64, f64) {
        let (lo, hi) = if let Some(v) = self.as_rational() {
            (v.clone(), v)
        } else {
            let (rlo, rhi) = self.field.fine_interval();
            self.eval_interval(&rlo, &rhi)
        };
        (outward_down(&lo), outward_up(&hi))
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclosure();
        0.5 * (lo + hi)
    }

    /// Decimal string with `digits` fractional digits, rounded half up.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigRational::from_integer(BigInt::from(10u32).pow(digits as u32));
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let round = |x: &BigRational| poly::floor(&(x * &scale + &half));
        let n = match self.as_rational() {
            Some(v) => round(&v),
            None => loop {
                let (lo, hi) = self.field.root_interval();
                let (elo, ehi) = self.eval_interval(&lo, &hi);
                let (a, b) = (round(&elo), round(&ehi));
                if a == b {
                    break a;
                }
                self.field.halve_times(16);
            },
        };
        format_scaled(&n, digits)
    }
}

fn format_scaled(n: &BigInt, digits: usize) -> String {
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let s = if s.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
    } else {
        s
    };
    let (int, frac) = s.split_at(s.len() - digits);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(int);
    if digits > 0 {
        out.push('.');
        out.push_str(frac);
    }
    out
}

fn outward_down(x: &BigRational) -> f64 {
    let f = poly::to_f64(x);
    f.next_down().next_down()
}

fn outward_up(x: &BigRational) -> f64 {
    let f = poly::to_f64(x);
    f.next_up().next_up()
}

impl NumberField {
    fn power_reduction(&self, i: usize) -> Vec<BigRational> {
        let n = self.degree();
        if i < n {
            let mut v = vec![BigRational::zero(); n];
            v[i] = BigRational::one();
            return v;
        }
        if i < 2 * n {
            return self.reduction[i - n].clone();
        }
        // x^i = x^(i-n) * x^n
        let lower = self.power_reduction(i - n);
        let mut out = vec![BigRational::zero(); n];
        for (k, lk) in lower.iter().enumerate() {
            if lk.is_zero() {
                continue;
            }
            for (j, rj) in self.reduction[k].iter().enumerate() {
                out[j] += lk * rj;
            }
        }
        out
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, o: &Self) -> bool {
        self.field.same(&o.field) && self.c == o.c
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.c.hash(h);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

/// Polynomial in `b` (standing for β), e.g. `b^2-2b` or `(1/2)b+3`.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for k in (0..self.c.len()).rev() {
            let c = &self.c[k];
            if c.is_zero() {
                continue;
            }
            let a = c.abs();
            if c.is_negative() {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            let coef = if a.is_integer() {
                a.to_integer().to_string()
            } else {
                format!("({a})")
            };
            if k == 0 || !a.is_one() {
                s.push_str(&coef);
            }
            match k {
                0 => {}
                1 => s.push('b'),
                _ => s.push_str(&format!("b^{k}")),
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        f.write_str(&s)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, o: &FieldElement) -> FieldElement {
                self.$try(o).expect("field mismatch")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                self.$try(&o).expect("field mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

/// Arithmetic selector for [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn arith(a: &FieldElement, b: &FieldElement, op: Op) -> Result<FieldElement, AlgebraError> {
    match op {
        Op::Add => a.try_add(b),
        Op::Sub => a.try_sub(b),
        Op::Mul => a.try_mul(b),
        Op::Div => a.try_div(b),
    }
}

/// True iff every root of `Σ c_k x^k` (coefficients in `Q(β)`, leading nonzero)
/// lies in the open unit disk. Schur–Cohn recursion with exact comparisons.
pub fn roots_inside_unit_disk(c: &[FieldElement]) -> bool {
    let mut c: Vec<FieldElement> = c.to_vec();
    while c.last().is_some_and(FieldElement::is_zero) {
        c.pop();
    }
    loop {
        let n = match c.len() {
            0 => return true,
            l => l - 1,
        };
        if n == 0 {
            return true;
        }
        let a0 = &c[0];
        let an = &c[n];
        let abs = |x: &FieldElement| if x.signum() == Ordering::Less { -x } else { x.clone() };
        if abs(a0).cmp_value(&abs(an)) != Ordering::Less {
            return false;
        }
        // T(p) = a_n p - a_0 p*, divided by x
        let next: Vec<FieldElement> = (1..=n)
            .map(|k| &(an * &c[k]) - &(a0 * &c[n - k]))
            .collect();
        c = next;
        while c.last().is_some_and(FieldElement::is_zero) {
            c.pop();
        }
    }
}
