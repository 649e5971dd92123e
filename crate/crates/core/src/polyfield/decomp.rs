use serde::Serialize;

use super::field::{gradient, PolyVectorField};
use super::poly::{Polynomial, EPS_COEFF};
use crate::error::{Error, Result};
use crate::matcore::{is_spd, Matrix};

/// Flags and witness polynomials for the split `P = A∇Φ + B`.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub whhd: bool,
    pub ohhd: bool,
    pub sohhd: bool,
    /// `⟨∇Φ, B⟩ + ½div B`.
    pub residual: Polynomial,
    /// `div B`.
    pub div_b: Polynomial,
    /// `⟨∇Φ, B⟩`.
    pub orth: Polynomial,
    pub notes: Vec<String>,
}

pub(crate) fn check_inputs(phi: &Polynomial, p: &PolyVectorField, a: &Matrix) -> Result<usize> {
    let d = phi.dim();
    p.check_dim(d, "drift")?;
    if a.rows() != d || a.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "diffusion matrix is {}×{}, potential has dimension {d}",
            a.rows(),
            a.cols()
        )));
    }
    if !is_spd(a) {
        return Err(Error::Precondition("diffusion matrix A must be symmetric positive definite".into()));
    }
    Ok(d)
}

fn abs_matrix(a: &Matrix) -> Matrix {
    Matrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)].abs())
}

/// Witnesses `(orth, div_b)` for `B = P − A∇Φ`, each chopped at `ε_coeff`
/// times the coefficient scale of the same expression with absolute values.
fn witnesses(phi: &Polynomial, p: &PolyVectorField, a: &Matrix) -> (PolyVectorField, Polynomial, Polynomial, f64) {
    let g = gradient(phi);
    let b = p.sub(&g.apply_matrix(a));
    let g_abs = g.abs();
    let b_abs = p.abs().add(&g_abs.apply_matrix(&abs_matrix(a)));
    let orth_scale = g_abs.dot(&b_abs).max_abs_coeff();
    let div_scale = divergence_abs(&b_abs).max_abs_coeff();
    let orth = g.dot(&b).chop(EPS_COEFF * orth_scale);
    let div_b = b.divergence().chop(EPS_COEFF * div_scale);
    (b, orth, div_b, orth_scale.max(0.5 * div_scale))
}

fn divergence_abs(f: &PolyVectorField) -> Polynomial {
    (0..f.dim()).fold(Polynomial::zero(f.dim()), |acc, i| &acc + &f.component(i).partial(i).abs())
}

/// `⟨∇Φ, B⟩ + ½div B` with `B = P − A∇Φ`.
pub fn whhd_residual(phi: &Polynomial, p: &PolyVectorField, a: &Matrix) -> Result<Polynomial> {
    check_inputs(phi, p, a)?;
    let (_, orth, div_b, scale) = witnesses(phi, p, a);
    Ok((&orth + &div_b.scale(0.5)).chop(EPS_COEFF * scale))
}

/// Classifies `P = A∇Φ + B` as WHHD, OHHD and SOHHD.
pub fn classify_poly(phi: &Polynomial, p: &PolyVectorField, a: &Matrix) -> Result<DecompositionReport> {
    check_inputs(phi, p, a)?;
    let (_, orth, div_b, scale) = witnesses(phi, p, a);
    let residual = (&orth + &div_b.scale(0.5)).chop(EPS_COEFF * scale);
    let whhd = residual.is_zero();
    let div_zero = div_b.is_zero();
    let orth_zero = orth.is_zero();
    let ohhd = whhd && (div_zero || orth_zero);
    let sohhd = whhd && div_zero && orth_zero;

    let mut notes = Vec::new();
    if whhd {
        notes.push("⟨∇Φ,B⟩ + ½div B ≡ 0: B is μ-divergence free, the split is a WHHD".to_string());
        if div_zero {
            notes.push("div B ≡ 0 together with the WHHD identity forces ⟨∇Φ,B⟩ ≡ 0".to_string());
        } else if orth_zero {
            notes.push("⟨∇Φ,B⟩ ≡ 0 together with the WHHD identity forces div B ≡ 0".to_string());
        } else {
            notes.push("div B and ⟨∇Φ,B⟩ are both nonzero: no OHHD with this potential".to_string());
        }
    } else {
        notes.push("⟨∇Φ,B⟩ + ½div B is not identically zero: μ is not infinitesimally invariant".to_string());
    }
    Ok(DecompositionReport { whhd, ohhd, sohhd, residual, div_b, orth, notes })
}

/// Per-degree conditions `r_s = ∑_{k=1}^{min(m,s+1)} ⟨∇Φ_k, B_{s+1−k}⟩ + ½div B_{s+1}`
/// for `s = 0, …, m+q−1`, with `m = deg Φ` and `q = deg B`.
pub fn degree_homogeneous_conditions(phi: &Polynomial, b: &PolyVectorField) -> Result<Vec<Polynomial>> {
    let d = phi.dim();
    b.check_dim(d, "field B")?;
    let m = phi.degree() as i64;
    let q = b.degree() as i64;
    let grads: Vec<PolyVectorField> = (0..=m).map(|k| gradient(&phi.homogeneous_part(k as u32))).collect();
    let b_part = |j: i64| -> PolyVectorField {
        if (0..=q).contains(&j) {
            b.homogeneous_part(j as u32)
        } else {
            PolyVectorField::zero(d)
        }
    };
    let mut out = Vec::new();
    for s in 0..(m + q) {
        let mut r = Polynomial::zero(d);
        let mut r_abs = Polynomial::zero(d);
        for k in 1..=m.min(s + 1) {
            let bj = b_part(s + 1 - k);
            r = &r + &grads[k as usize].dot(&bj);
            r_abs = &r_abs + &grads[k as usize].abs().dot(&bj.abs());
        }
        let top = b_part(s + 1);
        r = &r + &top.divergence().scale(0.5);
        r_abs = &r_abs + &divergence_abs(&top.abs()).scale(0.5);
        out.push(r.chop(EPS_COEFF * r_abs.max_abs_coeff()));
    }
    Ok(out)
}

/// Coefficients of the quadratic perturbation
/// `H = (α₀₀ + α₂₀x² + α₂₁xy + α₂₂y², β₀₀ + β₂₀x² + β₂₁xy + β₂₂y²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct QuadraticCoeffs {
    pub a00: f64,
    pub a20: f64,
    pub a21: f64,
    pub a22: f64,
    pub b00: f64,
    pub b20: f64,
    pub b21: f64,
    pub b22: f64,
}

impl QuadraticCoeffs {
    /// The field `H` in two variables.
    pub fn field(&self) -> PolyVectorField {
        use super::poly::Monomial;
        let comp = |c0: f64, c20: f64, c21: f64, c22: f64| {
            Polynomial::from_terms(
                2,
                [
                    (Monomial::new(vec![0, 0]), c0),
                    (Monomial::new(vec![2, 0]), c20),
                    (Monomial::new(vec![1, 1]), c21),
                    (Monomial::new(vec![0, 2]), c22),
                ],
            )
        };
        PolyVectorField::new(
            2,
            vec![comp(self.a00, self.a20, self.a21, self.a22), comp(self.b00, self.b20, self.b21, self.b22)],
        )
        .expect("two components in two variables")
    }
}

/// Left-hand sides of the invariance system for a quadratic perturbation
/// in the plane, and the pair `(α₂₀ + β₂₁/2, β₂₂ + α₂₁/2)` with
/// `½div H = (α₂₀ + β₂₁/2)x + (β₂₂ + α₂₁/2)y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticR2Residuals {
    pub residuals: [f64; 6],
    pub div_pair: (f64, f64),
}

pub fn quadratic_r2_residuals(s: &Matrix, c: &QuadraticCoeffs) -> Result<QuadraticR2Residuals> {
    if s.rows() != 2 || s.cols() != 2 {
        return Err(Error::DimensionMismatch("quadratic system needs a 2×2 matrix S".into()));
    }
    let (s11, s12, s22) = (s[(0, 0)], 0.5 * (s[(0, 1)] + s[(1, 0)]), s[(1, 1)]);
    let div_pair = (c.a20 + 0.5 * c.b21, c.b22 + 0.5 * c.a21);
    let residuals = [
        s11 * c.a20 + s12 * c.b20,
        s12 * c.a22 + s22 * c.b22,
        s11 * c.a22 + s12 * c.a21 + s12 * c.b22 + s22 * c.b21,
        s11 * c.a21 + s12 * c.a20 + s12 * c.b21 + s22 * c.b20,
        s11 * c.a00 + s12 * c.b00 + div_pair.0,
        s12 * c.a00 + s22 * c.b00 + div_pair.1,
    ];
    Ok(QuadraticR2Residuals { residuals, div_pair })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfield::poly::Monomial;

    pub(crate) fn quad_example() -> (Polynomial, Matrix, PolyVectorField, QuadraticCoeffs) {
        let phi = Polynomial::from_terms(
            2,
            [(Monomial::new(vec![2, 0]), -0.5), (Monomial::new(vec![1, 1]), -1.0), (Monomial::new(vec![0, 2]), -1.0)],
        );
        let a = Matrix::from_rows(&[[1.0, -1.0], [-1.0, 2.0]]);
        let c = QuadraticCoeffs { a00: 1.5, a20: 2.0, a21: 1.0, a22: -6.0, b00: 1.0, b20: -2.0, b21: 1.0, b22: 3.0 };
        let g = Matrix::from_rows(&[[0.0, 1.0], [-1.0, -3.0]]);
        let p = PolyVectorField::linear(&g).add(&c.field());
        (phi, a, p, c)
    }

    fn counterexample() -> (Polynomial, PolyVectorField) {
        let d = 3;
        let x = |i| Polynomial::var(d, i);
        let phi = Polynomial::quadratic_form(&Matrix::identity(3)).scale(-0.5);
        let drift = PolyVectorField::new(
            3,
            vec![&(-&x(0)) + &(&x(0) * &x(2)), -x(1), &(&(-&x(2)) - &(&x(0) * &x(0))) + &Polynomial::constant(d, 0.5)],
        )
        .unwrap();
        (phi, drift)
    }

    #[test]
    fn quadratic_example_is_whhd_not_ohhd() {
        let (phi, a, p, _) = quad_example();
        assert!(whhd_residual(&phi, &p, &a).unwrap().is_zero());
        let r = classify_poly(&phi, &p, &a).unwrap();
        assert!(r.whhd && !r.ohhd && !r.sohhd);
        assert_eq!(r.div_b, Polynomial::linear(&[5.0, 7.0]));
    }

    #[test]
    fn gradient_drift_is_sohhd() {
        let (phi, a, _, _) = quad_example();
        let p = gradient(&phi).apply_matrix(&a);
        let r = classify_poly(&phi, &p, &a).unwrap();
        assert!(r.whhd && r.ohhd && r.sohhd);
        assert!(r.residual.is_zero() && r.div_b.is_zero() && r.orth.is_zero());
    }

    #[test]
    fn counterexample_classification() {
        let (phi, drift) = counterexample();
        let a = Matrix::identity(3);
        assert!(whhd_residual(&phi, &drift, &a).unwrap().is_zero());
        let r = classify_poly(&phi, &drift, &a).unwrap();
        assert!(r.whhd && !r.ohhd && !r.sohhd);
        assert_eq!(r.orth, Polynomial::var(3, 2).scale(-0.5));
        assert_eq!(r.div_b, Polynomial::var(3, 2));
    }

    #[test]
    fn constant_antisymmetric_rotation_is_sohhd() {
        let phi = Polynomial::quadratic_form(&Matrix::identity(2)).scale(-0.5);
        let k = Matrix::from_rows(&[[0.0, 2.0], [-2.0, 0.0]]);
        let g = gradient(&phi);
        let p = g.add(&g.apply_matrix(&k));
        let r = classify_poly(&phi, &p, &Matrix::identity(2)).unwrap();
        assert!(r.sohhd);
    }

    #[test]
    fn dimension_errors() {
        let (phi, _, p, _) = quad_example();
        assert!(matches!(whhd_residual(&phi, &p, &Matrix::identity(3)), Err(Error::DimensionMismatch(_))));
        let (phi3, _) = counterexample();
        assert!(matches!(classify_poly(&phi3, &p, &Matrix::identity(3)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn quadratic_system_example() {
        let (_, _, _, c) = quad_example();
        let s = Matrix::from_rows(&[[-1.0, -1.0], [-1.0, -2.0]]);
        let r = quadratic_r2_residuals(&s, &c).unwrap();
        assert!(r.residuals.iter().all(|v| v.abs() <= 1e-14));
        assert_eq!(r.div_pair, (2.5, 3.5));
        let zero = QuadraticCoeffs { a00: 0.0, a20: 0.0, a21: 0.0, a22: 0.0, b00: 0.0, b20: 0.0, b21: 0.0, b22: 0.0 };
        let r0 = quadratic_r2_residuals(&s, &zero).unwrap();
        assert_eq!(r0.residuals, [0.0; 6]);
        assert_eq!(r0.div_pair, (0.0, 0.0));
        let rs = quadratic_r2_residuals(&Matrix::zeros(2, 2), &c).unwrap();
        assert_eq!(rs.residuals, [0.0, 0.0, 0.0, 0.0, 2.5, 3.5]);
    }

    #[test]
    fn quadratic_system_matches_symbolic_residual() {
        let (phi, a, p, c) = quad_example();
        let s = Matrix::from_rows(&[[-1.0, -1.0], [-1.0, -2.0]]);
        let bad = QuadraticCoeffs { a20: 1.0, ..c };
        let sym = classify_poly(&phi, &PolyVectorField::linear(&(&a * &s)).add(&bad.field()), &a).unwrap();
        let sys = quadratic_r2_residuals(&s, &bad).unwrap();
        let x3 = sym.residual.coeff(&Monomial::new(vec![3, 0]));
        assert!((x3 - sys.residuals[0]).abs() < 1e-14);
        let x1 = sym.residual.coeff(&Monomial::new(vec![1, 0]));
        assert!((x1 - sys.residuals[4]).abs() < 1e-14);
        let _ = p;
    }

    #[test]
    fn per_degree_conditions() {
        let (phi, a, p, _) = quad_example();
        let b = p.sub(&gradient(&phi).apply_matrix(&a));
        let rs = degree_homogeneous_conditions(&phi, &b).unwrap();
        assert_eq!(rs.len(), 4);
        assert!(rs.iter().all(Polynomial::is_zero));

        let s = Matrix::from_rows(&[[-1.0, 0.0], [0.0, -2.0]]);
        let phi = Polynomial::quadratic_form(&s).scale(0.5);
        let x = Polynomial::var(2, 0);
        let cube = &(&x * &x) * &x;
        let b3 = PolyVectorField::new(2, vec![cube.clone(), Polynomial::zero(2)]).unwrap();
        let rs = degree_homogeneous_conditions(&phi, &b3).unwrap();
        assert_eq!(rs.len(), 5);
        assert_eq!(rs[4], gradient(&phi).dot(&b3));
        assert!(!rs[4].is_zero());

        let zero = degree_homogeneous_conditions(&phi, &PolyVectorField::zero(2)).unwrap();
        assert!(zero.iter().all(Polynomial::is_zero));
    }
}
