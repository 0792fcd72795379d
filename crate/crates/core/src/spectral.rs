//! Characteristic polynomials, primitivity, the Pisot test and the Perron eigen-data.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebraic::{roots_inside_unit_disk, FieldElement, NumberField};
use crate::automaton::{IntMatrix, OrderedAutomaton, State};
use crate::error::{AlgebraError, SpectralError};
use crate::poly::{self, format_factors, format_int_poly, Poly};

/// Characteristic polynomial `det(xI - M)`, coefficients from the constant term up.
pub fn charpoly(m: &IntMatrix) -> Vec<BigInt> {
    // Faddeev–LeVerrier; every division is exact over the integers.
    let n = m.size();
    let a: Vec<Vec<BigInt>> = m
        .rows()
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut mk = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = matmul(&a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        mk = next;
        let am = matmul(&a, &mk);
        let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        c[n - k] = -tr / BigInt::from(k);
    }
    c
}

fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// True iff some power up to the Wielandt bound `(n-1)^2 + 1` is entrywise positive.
pub fn is_primitive(m: &IntMatrix) -> bool {
    let n = m.size();
    if n == 0 {
        return false;
    }
    let base: Vec<Vec<bool>> = m
        .rows()
        .iter()
        .map(|r| r.iter().map(|&x| x > 0).collect())
        .collect();
    let mut p = base.clone();
    for _ in 0..(n - 1) * (n - 1) + 1 {
        if p.iter().all(|r| r.iter().all(|&x| x)) {
            return true;
        }
        p = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).any(|k| p[i][k] && base[k][j]))
                    .collect()
            })
            .collect();
    }
    false
}

/// Pisot test on the incidence matrix restricted to accessible and co-accessible states:
/// one simple real eigenvalue above 1, every other eigenvalue strictly inside the unit disk.
pub fn is_pisot_automaton(aut: &OrderedAutomaton) -> Result<bool, SpectralError> {
    let idx: Vec<usize> = aut.trim().iter().map(|q| q - 1).collect();
    let p = charpoly(&aut.incidence().restrict(&idx));
    is_pisot_polynomial(&p)
}

/// True iff the monic integer polynomial has a simple real root `ρ > 1` and all other
/// roots lie in the open unit disk.
pub fn is_pisot_polynomial(p: &[BigInt]) -> Result<bool, SpectralError> {
    let pq = Poly::from_ints(p);
    let Some((lo, hi)) = poly::isolate_largest_root(&pq, &BigRational::one()) else {
        return Ok(false);
    };
    let factors = poly::factor_monic(p)?;
    let mut owner = None;
    for (f, mult) in &factors {
        let fq = Poly::from_ints(f);
        let holds = if lo == hi {
            fq.sign_at(&lo) == 0
        } else {
            poly::count_roots(&poly::sturm_sequence(&fq), &lo, &hi) > 0
        };
        if holds {
            owner = Some((f, *mult));
        }
    }
    let (f, mult) = owner.expect("the isolated root belongs to some factor");
    if mult != 1 {
        return Ok(false);
    }
    let field = NumberField::new_assume_irreducible(f.clone())?;
    let rho = field.beta();
    // p(x) / (x - ρ) by synthetic division over Q(ρ)
    let n = p.len() - 1;
    let lift = |c: &BigInt| FieldElement::from_rational(&field, BigRational::from_integer(c.clone()));
    let mut quo = vec![field.zero(); n];
    quo[n - 1] = lift(&p[n]);
    for k in (1..n).rev() {
        quo[k - 1] = &lift(&p[k]) + &(&rho * &quo[k]);
    }
    Ok(roots_inside_unit_disk(&quo))
}

/// β, the field `Q(β)` and the right eigenvector `η`; available whenever β is a simple
/// root of the characteristic polynomial, irreducible or not.
#[derive(Debug, Clone)]
pub struct PerronEigen {
    charpoly: Vec<BigInt>,
    field: Arc<NumberField>,
    beta: FieldElement,
    eta: Vec<FieldElement>,
}

impl PerronEigen {
    pub fn new(aut: &OrderedAutomaton) -> Result<Self, SpectralError> {
        let m = aut.incidence();
        let cp = charpoly(&m);
        if !is_primitive(&m) {
            return Err(SpectralError::NotPrimitive);
        }
        let factors = poly::factor_monic(&cp)?;
        let pq = Poly::from_ints(&cp);
        let (lo, hi) = poly::isolate_largest_root(&pq, &BigRational::one())
            .ok_or_else(|| AlgebraError::NoRootAboveOne(format_int_poly(&cp, "x")))?;
        let (f, mult) = factors
            .iter()
            .find(|(f, _)| {
                let fq = Poly::from_ints(f);
                if lo == hi {
                    fq.sign_at(&lo) == 0
                } else {
                    poly::count_roots(&poly::sturm_sequence(&fq), &lo, &hi) > 0
                }
            })
            .expect("the isolated root belongs to some factor");
        if *mult != 1 {
            return Err(SpectralError::NotSimple);
        }
        let field = NumberField::new_assume_irreducible(f.clone())?;
        let beta = field.beta();
        let a = shifted(&field, &m, &beta, false);
        let kernel = kernel_vector(&a).ok_or(SpectralError::NotSimple)?;
        let last = kernel[kernel.len() - 1].clone();
        if last.is_zero() {
            return Err(SpectralError::Consistency(
                "Perron eigenvector vanishes at the initial state".into(),
            ));
        }
        let inv = last.inv()?;
        let mut eta = vec![field.zero()];
        eta.extend(kernel.iter().map(|x| x * &inv));
        Ok(PerronEigen {
            charpoly: cp,
            field,
            beta,
            eta,
        })
    }

    /// Characteristic polynomial of the full incidence matrix.
    pub fn charpoly(&self) -> &[BigInt] {
        &self.charpoly
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn beta(&self) -> &FieldElement {
        &self.beta
    }

    /// `η_q` for `0 <= q <= d`.
    pub fn eta(&self, q: State) -> &FieldElement {
        &self.eta[q]
    }

    pub fn etas(&self) -> &[FieldElement] {
        &self.eta
    }

    pub fn d(&self) -> usize {
        self.eta.len() - 1
    }
}

/// `M - βI` (or its transpose) over `Q(β)`.
fn shifted(
    field: &Arc<NumberField>,
    m: &IntMatrix,
    beta: &FieldElement,
    transpose: bool,
) -> Vec<Vec<FieldElement>> {
    let n = m.size();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = if transpose { m.get(j, i) } else { m.get(i, j) };
                    let e = field.int(v as i64);
                    if i == j {
                        &e - beta
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect()
}

/// A nonzero vector spanning the kernel, or `None` unless the kernel is one-dimensional.
fn kernel_vector(a: &[Vec<FieldElement>]) -> Option<Vec<FieldElement>> {
    let n = a.len();
    let mut m: Vec<Vec<FieldElement>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv().ok()?;
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..n {
                    let t = &m[r][c] - &(&f * &m[row][c]);
                    m[r][c] = t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() + 1 != n {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let field = a[0][0].field().clone();
    let mut v = vec![field.zero(); n];
    v[free] = field.one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -&m[r][free];
    }
    Some(v)
}

/// Full spectral data: requires an irreducible characteristic polynomial so that the
/// field trace realises the sum over all eigenvalues.
#[derive(Debug, Clone)]
pub struct SpectralData {
    eigen: PerronEigen,
    xi: Vec<FieldElement>,
    theta: Vec<FieldElement>,
}

impl SpectralData {
    pub fn new(aut: &OrderedAutomaton) -> Result<Self, SpectralError> {
        let cp = charpoly(&aut.incidence());
        let factors = poly::factor_monic(&cp)?;
        if factors.len() != 1 || factors[0].1 != 1 {
            return Err(SpectralError::ReducibleCharpoly {
                charpoly: format_int_poly(&cp, "x"),
                factors: format_factors(&factors),
            });
        }
        let eigen = PerronEigen::new(aut)?;
        let field = eigen.field.clone();
        let d = aut.d();
        let m = aut.incidence();
        let left = kernel_vector(&shifted(&field, &m, &eigen.beta, true))
            .ok_or(SpectralError::NotSimple)?;
        let dot = left
            .iter()
            .zip(&eigen.eta[1..])
            .fold(field.zero(), |acc, (x, e)| &acc + &(x * e));
        let inv = dot.inv().map_err(|_| {
            SpectralError::Consistency("left and right eigenvectors are orthogonal".into())
        })?;
        let xi: Vec<FieldElement> = left.iter().map(|x| x * &inv).collect();
        let mut theta = vec![field.zero()];
        for r in 1..=d {
            let t = xi[d - r].clone();
            theta.push(&theta[r - 1] + &t);
        }
        let sd = SpectralData { eigen, xi, theta };
        sd.verify(aut)?;
        Ok(sd)
    }

    fn verify(&self, aut: &OrderedAutomaton) -> Result<(), SpectralError> {
        let d = self.d();
        let beta = &self.eigen.beta;
        let m = aut.incidence();
        for q in 1..=d {
            let lhs = (1..=d).fold(self.eigen.field.zero(), |acc, r| {
                &acc + &(&self.eigen.field.int(m.get(q - 1, r - 1) as i64) * &self.eigen.eta[r])
            });
            if lhs != beta * &self.eigen.eta[q] {
                return Err(SpectralError::Consistency(format!(
                    "M η = β η fails in row {q}"
                )));
            }
        }
        let mm = aut.mirror().incidence();
        for q in 1..=d {
            let lhs = (1..=d).fold(self.eigen.field.zero(), |acc, r| {
                &acc + &(&self.eigen.field.int(mm.get(q - 1, r - 1) as i64) * &self.theta[r])
            });
            if lhs != beta * &self.theta[q] {
                return Err(SpectralError::Consistency(format!(
                    "mirrored θ eigen-equation fails in row {q}"
                )));
            }
        }
        for q in 0..=d {
            for r in 0..=d {
                let z = self.zeta(r, &self.eigen.eta[q]);
                let want = BigRational::from_integer(BigInt::from(u8::from(q + r > d)));
                if z != want {
                    return Err(SpectralError::Consistency(format!(
                        "ζ_{r}(η_{q}) = {z}, expected {want}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn eigen(&self) -> &PerronEigen {
        &self.eigen
    }

    pub fn charpoly(&self) -> &[BigInt] {
        &self.eigen.charpoly
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.eigen.field
    }

    pub fn beta(&self) -> &FieldElement {
        &self.eigen.beta
    }

    pub fn d(&self) -> usize {
        self.eigen.d()
    }

    pub fn eta(&self, q: State) -> &FieldElement {
        &self.eigen.eta[q]
    }

    pub fn etas(&self) -> &[FieldElement] {
        &self.eigen.eta
    }

    pub fn theta(&self, r: State) -> &FieldElement {
        &self.theta[r]
    }

    pub fn thetas(&self) -> &[FieldElement] {
        &self.theta
    }

    /// Left eigenvector `ξ_1..ξ_d` with `ξ·η = 1`.
    pub fn xi(&self) -> &[FieldElement] {
        &self.xi
    }

    /// `ζ_r(z) = Tr(θ_r z)`.
    pub fn zeta(&self, r: State, z: &FieldElement) -> BigRational {
        if r == 0 {
            return BigRational::zero();
        }
        (&self.theta[r] * z).trace()
    }

    /// `Tr(η_q θ_r β^k)`.
    pub fn count_by_trace(&self, q: State, r: State, k: u32) -> BigRational {
        let bk = self.eigen.beta.pow(i64::from(k)).expect("β is nonzero");
        (&(&self.eigen.eta[q] * &self.theta[r]) * &bk).trace()
    }
}

/// `#{v ∈ A^k : τ(q,v) + r > d}` by iterating the transition table.
pub fn count_l(aut: &OrderedAutomaton, q: State, r: State, k: usize) -> BigUint {
    let d = aut.d();
    let mut g: Vec<BigUint> = (0..=d).map(|s| BigUint::from(u8::from(s + r > d && s > 0))).collect();
    for _ in 0..k {
        g = (0..=d)
            .map(|s| {
                if s == 0 {
                    BigUint::zero()
                } else {
                    (0..aut.sigma()).map(|a| &g[aut.next(s, a)]).sum()
                }
            })
            .collect();
    }
    g[q].clone()
}
