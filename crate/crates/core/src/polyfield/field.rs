use serde::{Deserialize, Serialize};

use super::poly::{Polynomial, EPS_COEFF};
use crate::error::{Error, Result};
use crate::matcore::Matrix;

/// `d` polynomial components in `d` variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FieldRepr", into = "FieldRepr")]
pub struct PolyVectorField {
    dim: usize,
    components: Vec<Polynomial>,
}

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    dim: usize,
    components: Vec<Polynomial>,
}

impl TryFrom<FieldRepr> for PolyVectorField {
    type Error = Error;
    fn try_from(r: FieldRepr) -> Result<Self> {
        PolyVectorField::new(r.dim, r.components)
    }
}

impl From<PolyVectorField> for FieldRepr {
    fn from(f: PolyVectorField) -> Self {
        FieldRepr { dim: f.dim, components: f.components }
    }
}

impl PolyVectorField {
    pub fn new(dim: usize, components: Vec<Polynomial>) -> Result<Self> {
        if components.len() != dim || components.iter().any(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "vector field of dimension {dim} needs {dim} components in {dim} variables"
            )));
        }
        Ok(PolyVectorField { dim, components })
    }

    pub fn zero(dim: usize) -> Self {
        PolyVectorField { dim, components: vec![Polynomial::zero(dim); dim] }
    }

    /// The linear field `x ↦ Gx`.
    pub fn linear(g: &Matrix) -> Self {
        let d = g.rows();
        PolyVectorField { dim: d, components: (0..d).map(|i| Polynomial::linear(g.row(i))).collect() }
    }

    /// Constant field.
    pub fn constant(v: &[f64]) -> Self {
        let d = v.len();
        PolyVectorField { dim: d, components: v.iter().map(|&c| Polynomial::constant(d, c)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn check_dim(&self, dim: usize, what: &str) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("{what} has dimension {}, expected {dim}", self.dim)))
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&Polynomial, &Polynomial) -> Polynomial) -> Self {
        assert_eq!(self.dim, other.dim, "vector field dimensions differ");
        PolyVectorField {
            dim: self.dim,
            components: self.components.iter().zip(&other.components).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        PolyVectorField { dim: self.dim, components: self.components.iter().map(|c| c.scale(s)).collect() }
    }

    pub fn abs(&self) -> Self {
        PolyVectorField { dim: self.dim, components: self.components.iter().map(Polynomial::abs).collect() }
    }

    /// `x ↦ M·F(x)` for a constant matrix `M`.
    pub fn apply_matrix(&self, m: &Matrix) -> Self {
        assert_eq!(m.rows(), self.dim, "matrix and field dimensions differ");
        let components = (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(Polynomial::zero(self.dim), |acc, j| &acc + &self.components[j].scale(m[(i, j)]))
            })
            .collect();
        PolyVectorField { dim: self.dim, components }
    }

    /// `∑ᵢ ∂ᵢFᵢ`.
    pub fn divergence(&self) -> Polynomial {
        self.components
            .iter()
            .enumerate()
            .fold(Polynomial::zero(self.dim), |acc, (i, c)| &acc + &c.partial(i))
    }

    /// `∑ᵢ UᵢVᵢ`.
    pub fn dot(&self, other: &Self) -> Polynomial {
        assert_eq!(self.dim, other.dim, "vector field dimensions differ");
        self.components
            .iter()
            .zip(&other.components)
            .fold(Polynomial::zero(self.dim), |acc, (a, b)| &acc + &(a * b))
    }

    /// Largest total degree over components.
    pub fn degree(&self) -> u32 {
        self.components.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        PolyVectorField { dim: self.dim, components: self.components.iter().map(|c| c.homogeneous_part(degree)).collect() }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.components.iter().map(Polynomial::max_abs_coeff).fold(0.0, f64::max)
    }

    pub fn chop(&self, abs_tol: f64) -> Self {
        PolyVectorField { dim: self.dim, components: self.components.iter().map(|c| c.chop(abs_tol)).collect() }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }
}

/// `∇Φ`.
pub fn gradient(phi: &Polynomial) -> PolyVectorField {
    let d = phi.dim();
    PolyVectorField { dim: d, components: (0..d).map(|i| phi.partial(i)).collect() }
}

/// `∑ᵢ ∂ᵢBᵢ`.
pub fn divergence(b: &PolyVectorField) -> Polynomial {
    b.divergence()
}

/// `∑ᵢ UᵢVᵢ`, checking dimensions.
pub fn dot(u: &PolyVectorField, v: &PolyVectorField) -> Result<Polynomial> {
    v.check_dim(u.dim(), "second field")?;
    Ok(u.dot(v))
}

/// `d×d` grid of polynomials in `d` variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct PolyMatrix {
    dim: usize,
    entries: Vec<Vec<Polynomial>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    entries: Vec<Vec<Polynomial>>,
}

impl TryFrom<MatrixRepr> for PolyMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        PolyMatrix::new(r.dim, r.entries)
    }
}

impl From<PolyMatrix> for MatrixRepr {
    fn from(m: PolyMatrix) -> Self {
        MatrixRepr { dim: m.dim, entries: m.entries }
    }
}

impl PolyMatrix {
    pub fn new(dim: usize, entries: Vec<Vec<Polynomial>>) -> Result<Self> {
        let ok = entries.len() == dim && entries.iter().all(|row| row.len() == dim && row.iter().all(|p| p.dim() == dim));
        if !ok {
            return Err(Error::DimensionMismatch(format!(
                "polynomial matrix of dimension {dim} needs {dim}×{dim} entries in {dim} variables"
            )));
        }
        Ok(PolyMatrix { dim, entries })
    }

    pub fn zero(dim: usize) -> Self {
        PolyMatrix { dim, entries: vec![vec![Polynomial::zero(dim); dim]; dim] }
    }

    /// Constant entries from a matrix.
    pub fn constant(m: &Matrix) -> Self {
        let d = m.rows();
        PolyMatrix { dim: d, entries: (0..d).map(|i| (0..d).map(|j| Polynomial::constant(d, m[(i, j)])).collect()).collect() }
    }

    /// `p(x)·M`.
    pub fn scalar_times(p: &Polynomial, m: &Matrix) -> Self {
        let d = m.rows();
        PolyMatrix { dim: d, entries: (0..d).map(|i| (0..d).map(|j| p.scale(m[(i, j)])).collect()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        assert_eq!(p.dim(), self.dim, "entry dimension differs");
        self.entries[i][j] = p;
    }

    /// `c_{ij} + c_{ji} ≡ 0` coefficient-wise within `ε_coeff` of the
    /// largest coefficient of the matrix.
    pub fn is_antisymmetric(&self) -> bool {
        let scale = self.entries.iter().flatten().map(Polynomial::max_abs_coeff).fold(0.0, f64::max);
        (0..self.dim).all(|i| {
            (i..self.dim).all(|j| (&self.entries[i][j] + &self.entries[j][i]).is_zero_within(EPS_COEFF * scale))
        })
    }

    pub fn require_antisymmetric(&self) -> Result<()> {
        if self.is_antisymmetric() {
            Ok(())
        } else {
            Err(Error::Precondition("polynomial matrix C must be antisymmetric".into()))
        }
    }

    /// Component `i` equals `∑ⱼ ∂ⱼ c_{ji}`.
    pub fn divergence(&self) -> PolyVectorField {
        let d = self.dim;
        let components = (0..d)
            .map(|i| (0..d).fold(Polynomial::zero(d), |acc, j| &acc + &self.entries[j][i].partial(j)))
            .collect();
        PolyVectorField { dim: d, components }
    }

    /// `Cᵀv`, component `i` equals `∑ⱼ c_{ji}vⱼ`.
    pub fn transpose_apply(&self, v: &PolyVectorField) -> PolyVectorField {
        assert_eq!(self.dim, v.dim(), "matrix and field dimensions differ");
        let d = self.dim;
        let components = (0..d)
            .map(|i| (0..d).fold(Polynomial::zero(d), |acc, j| &acc + &(&self.entries[j][i] * v.component(j))))
            .collect();
        PolyVectorField { dim: d, components }
    }

    pub fn abs(&self) -> Self {
        PolyMatrix { dim: self.dim, entries: self.entries.iter().map(|r| r.iter().map(Polynomial::abs).collect()).collect() }
    }
}

/// `div C` with component `i` equal to `∑ⱼ ∂ⱼ c_{ji}`.
pub fn matrix_divergence(c: &PolyMatrix) -> PolyVectorField {
    c.divergence()
}
