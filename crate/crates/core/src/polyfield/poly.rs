use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative threshold below which a coefficient is dropped.
pub const EPS_COEFF: f64 = 1e-12;

/// Exponent tuple `(i₁,…,i_d)`, ordered by total degree and then
/// descending lexicographic order (`x² < xy < y²`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    pub fn var(dim: usize, axis: usize) -> Self {
        let mut e = vec![0; dim];
        e[axis] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(&e, &v)| v.powi(e as i32)).product()
    }

    /// All monomials in `dim` variables of total degree `≤ max_degree`, in
    /// canonical order.
    pub fn all_up_to(dim: usize, max_degree: u32) -> Vec<Monomial> {
        fn rec(dim: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if cur.len() + 1 == dim {
                cur.push(left);
                out.push(Monomial(cur.clone()));
                cur.pop();
                return;
            }
            for e in (0..=left).rev() {
                cur.push(e);
                rec(dim, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        for deg in 0..=max_degree {
            rec(dim, deg, &mut Vec::with_capacity(dim), &mut out);
        }
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Sparse real polynomial in `dim` variables. Stored coefficients are
/// nonzero and exceed `ε_coeff` times the largest coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr", into = "PolyRepr")]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Monomial, f64>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exps: Vec<u32>,
    coeff: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    dim: usize,
    terms: Vec<TermRepr>,
}

impl TryFrom<PolyRepr> for Polynomial {
    type Error = Error;

    fn try_from(r: PolyRepr) -> Result<Self> {
        if r.dim == 0 {
            return Err(Error::Precondition("polynomial dimension must be positive".into()));
        }
        let mut terms = BTreeMap::new();
        for t in r.terms {
            if t.exps.len() != r.dim {
                return Err(Error::DimensionMismatch(format!(
                    "exponent tuple of length {} in a polynomial of dimension {}",
                    t.exps.len(),
                    r.dim
                )));
            }
            if !t.coeff.is_finite() {
                return Err(Error::Precondition("polynomial coefficient is not finite".into()));
            }
            *terms.entry(Monomial(t.exps)).or_insert(0.0) += t.coeff;
        }
        Ok(Polynomial::from_map(r.dim, terms))
    }
}

impl From<Polynomial> for PolyRepr {
    fn from(p: Polynomial) -> Self {
        PolyRepr {
            dim: p.dim,
            terms: p.terms.into_iter().map(|(m, c)| TermRepr { exps: m.0, coeff: c }).collect(),
        }
    }
}

impl Polynomial {
    fn from_map(dim: usize, mut terms: BTreeMap<Monomial, f64>) -> Self {
        let max = terms.values().fold(0.0_f64, |m, c| m.max(c.abs()));
        terms.retain(|_, c| *c != 0.0 && c.abs() > EPS_COEFF * max);
        Polynomial { dim, terms }
    }

    pub fn zero(dim: usize) -> Self {
        Polynomial { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::from_terms(dim, [(Monomial::one(dim), c)])
    }

    /// The coordinate function `x_{axis+1}`.
    pub fn var(dim: usize, axis: usize) -> Self {
        Self::from_terms(dim, [(Monomial::var(dim, axis), 1.0)])
    }

    /// Sums duplicate monomials. Panics if a monomial has the wrong length.
    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Monomial, f64)>) -> Self {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.dim(), dim, "monomial length must equal the polynomial dimension");
            *map.entry(m).or_insert(0.0) += c;
        }
        Self::from_map(dim, map)
    }

    /// `∑ⱼ cⱼxⱼ`.
    pub fn linear(coeffs: &[f64]) -> Self {
        let d = coeffs.len();
        Self::from_terms(d, coeffs.iter().enumerate().map(|(i, &c)| (Monomial::var(d, i), c)))
    }

    /// `⟨x, Mx⟩` for a square matrix given row-major.
    pub fn quadratic_form(m: &crate::matcore::Matrix) -> Self {
        let d = m.rows();
        let mut terms = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let mut e = vec![0; d];
                e[i] += 1;
                e[j] += 1;
                terms.push((Monomial(e), m[(i, j)]));
            }
        }
        Self::from_terms(d, terms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &Monomial) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Zero up to `|c| ≤ abs_tol` for every coefficient.
    pub fn is_zero_within(&self, abs_tol: f64) -> bool {
        self.terms.values().all(|c| c.abs() <= abs_tol)
    }

    /// Largest total degree; `0` for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Same monomials with `|c|` coefficients.
    pub fn abs(&self) -> Self {
        Polynomial { dim: self.dim, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.abs())).collect() }
    }

    /// Drops every term with `|c| ≤ abs_tol`.
    pub fn chop(&self, abs_tol: f64) -> Self {
        let mut out = self.clone();
        out.terms.retain(|_, c| c.abs() > abs_tol);
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_map(self.dim, self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect())
    }

    fn check_dim(&self, other: &Polynomial) {
        assert_eq!(self.dim, other.dim, "polynomial dimensions differ");
    }

    pub fn checked_dim(&self, other: &Polynomial) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("polynomials of dimension {} and {}", self.dim, other.dim)))
        }
    }

    /// `∂p/∂x_{axis+1}`.
    pub fn partial(&self, axis: usize) -> Self {
        assert!(axis < self.dim, "axis out of range");
        let mut map = BTreeMap::new();
        for (m, &c) in &self.terms {
            let e = m.0[axis];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[axis] -= 1;
            *map.entry(Monomial(exps)).or_insert(0.0) += c * e as f64;
        }
        Self::from_map(self.dim, map)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(m, c)| c * m.eval(x)).sum()
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == degree).map(|(m, &c)| (m.clone(), c)).collect(),
        }
    }

    /// Nonzero homogeneous parts keyed by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, &c) in &self.terms {
            out.entry(m.degree()).or_insert_with(|| Polynomial::zero(self.dim)).terms.insert(m.clone(), c);
        }
        out
    }

    /// `φ(u)` for a univariate `φ` (dimension 1) and any `u`.
    pub fn compose_univariate(phi: &Polynomial, u: &Polynomial) -> Result<Polynomial> {
        if phi.dim != 1 {
            return Err(Error::DimensionMismatch(format!("univariate polynomial expected, got dimension {}", phi.dim)));
        }
        let mut out = Polynomial::zero(u.dim);
        for k in (0..=phi.degree()).rev() {
            let c = phi.coeff(&Monomial(vec![k]));
            out = &(&out * u) + &Polynomial::constant(u.dim, c);
        }
        Ok(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{m}")?;
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_dim(rhs);
        let mut map = self.terms.clone();
        for (m, &c) in &rhs.terms {
            *map.entry(m.clone()).or_insert(0.0) += c;
        }
        Polynomial::from_map(self.dim, map)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { dim: self.dim, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_dim(rhs);
        let mut map = BTreeMap::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                *map.entry(a.times(b)).or_insert(0.0) += ca * cb;
            }
        }
        Polynomial::from_map(self.dim, map)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
