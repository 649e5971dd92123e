use super::decomp::{classify_poly, DecompositionReport};
use super::field::{gradient, PolyMatrix, PolyVectorField};
use super::poly::{Polynomial, EPS_COEFF};
use crate::error::{Error, Result};
use crate::matcore::{eigenvalues, is_spd, tol, Matrix};
use crate::riccati::riccati_residual;

/// `∇Φ + k₁Cᵀ∇Φ + k₂div C` for antisymmetric `C`.
pub fn build_antisym_drift(phi: &Polynomial, c: &PolyMatrix, k1: f64, k2: f64) -> Result<PolyVectorField> {
    if c.dim() != phi.dim() {
        return Err(Error::DimensionMismatch(format!("C has dimension {}, Φ has {}", c.dim(), phi.dim())));
    }
    c.require_antisymmetric()?;
    let g = gradient(phi);
    Ok(g.add(&c.transpose_apply(&g).scale(k1)).add(&c.divergence().scale(k2)))
}

fn require_antisymmetric_matrix(k: &Matrix) -> Result<usize> {
    let d = k.ensure_square("matrix K")?;
    let scale = k.norm_fro().max(1.0);
    for i in 0..d {
        for j in i..d {
            if (k[(i, j)] + k[(j, i)]).abs() > tol::SYM * scale {
                return Err(Error::Precondition("matrix K must be antisymmetric".into()));
            }
        }
    }
    Ok(d)
}

/// `C(x) = φ(⟨Sx,x⟩)·K` for a univariate `φ` and constant antisymmetric `K`.
pub fn build_levelset_antisym(s: &Matrix, phi: &Polynomial, k: &Matrix) -> Result<PolyMatrix> {
    let d = require_antisymmetric_matrix(k)?;
    s.ensure_same_shape(k, "matrix S")?;
    if !s.is_symmetric(tol::SYM) {
        return Err(Error::Precondition("matrix S must be symmetric".into()));
    }
    let u = Polynomial::quadratic_form(s);
    let level = Polynomial::compose_univariate(phi, &u)?;
    debug_assert_eq!(level.dim(), d);
    Ok(PolyMatrix::scalar_times(&level, k))
}

/// `⟨div C(x), Sx⟩ ≡ 0`.
pub fn check_divc_orthogonality(c: &PolyMatrix, s: &Matrix) -> Result<bool> {
    if s.rows() != c.dim() || s.cols() != c.dim() {
        return Err(Error::DimensionMismatch(format!("S is {}×{}, C has dimension {}", s.rows(), s.cols(), c.dim())));
    }
    c.require_antisymmetric()?;
    let sx = PolyVectorField::linear(s);
    let div = c.divergence();
    let scale = c.abs().divergence().dot(&sx.abs()).max_abs_coeff()
        .max(div.abs().dot(&sx.abs()).max_abs_coeff());
    Ok(div.dot(&sx).chop(EPS_COEFF * scale).is_zero())
}

/// `A∇Φ + k₀(G − AS)x + k₁C(x)ᵀSx + k₂div C(x)` with `Φ = ½⟨x,Sx⟩`.
///
/// Requires `S` to solve the Riccati system for `(G, A)` within the
/// certificate bounds and `C` antisymmetric.
#[allow(clippy::too_many_arguments)]
pub fn mainthm_drift(
    g: &Matrix,
    a: &Matrix,
    s: &Matrix,
    c: &PolyMatrix,
    k0: f64,
    k1: f64,
    k2: f64,
) -> Result<PolyVectorField> {
    let d = g.ensure_square("drift matrix G")?;
    if !is_spd(a) {
        return Err(Error::Precondition("diffusion matrix A must be symmetric positive definite".into()));
    }
    if !s.is_symmetric(tol::SYM) {
        return Err(Error::Precondition("matrix S must be symmetric".into()));
    }
    if c.dim() != d {
        return Err(Error::DimensionMismatch(format!("C has dimension {}, G has {d}", c.dim())));
    }
    c.require_antisymmetric()?;
    let (eq, tr) = riccati_residual(s, g, a)?;
    let (ns, ng, na) = (s.norm_fro(), g.norm_fro(), a.norm_fro());
    if eq > 1e-8 * (ns * ns * na + ns * ng) || tr > 1e-8 * (ng + na * ns) {
        return Err(Error::Precondition(format!(
            "S does not solve the Riccati system (eq residual {eq:.3e}, trace residual {tr:.3e})"
        )));
    }
    let sx = PolyVectorField::linear(s);
    let h = g - &(a * s);
    Ok(sx
        .apply_matrix(a)
        .add(&PolyVectorField::linear(&h).scale(k0))
        .add(&c.transpose_apply(&sx).scale(k1))
        .add(&c.divergence().scale(k2)))
}

/// [`mainthm_drift`] followed by [`classify_poly`] against `Φ = ½⟨x,Sx⟩`;
/// notes uniqueness of the OHHD when `G` is Hurwitz.
#[allow(clippy::too_many_arguments)]
pub fn classify_mainthm(
    g: &Matrix,
    a: &Matrix,
    s: &Matrix,
    c: &PolyMatrix,
    k0: f64,
    k1: f64,
    k2: f64,
) -> Result<(PolyVectorField, DecompositionReport)> {
    let field = mainthm_drift(g, a, s, c, k0, k1, k2)?;
    let phi = Polynomial::quadratic_form(s).scale(0.5);
    let mut report = classify_poly(&phi, &field, a)?;
    if report.ohhd && eigenvalues(g)?.is_hurwitz() {
        report.notes.push("unique OHHD (Hurwitz)".to_string());
    }
    Ok((field, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfield::poly::Monomial;
    use crate::riccati::solve_riccati_2x2;

    fn k2() -> Matrix {
        Matrix::from_rows(&[[0.0, 1.5], [-1.5, 0.0]])
    }

    fn t_poly() -> Polynomial {
        Polynomial::var(1, 0)
    }

    #[test]
    fn antisym_drift_trivial_cases() {
        let phi = Polynomial::quadratic_form(&Matrix::identity(2)).scale(-0.5);
        let c = PolyMatrix::constant(&k2());
        assert_eq!(build_antisym_drift(&phi, &c, 0.0, 0.0).unwrap(), gradient(&phi));
        let g = gradient(&phi);
        let want = g.add(&g.apply_matrix(&k2().transpose()));
        assert_eq!(build_antisym_drift(&phi, &c, 1.0, 0.0).unwrap(), want);
        let bad = PolyMatrix::constant(&Matrix::identity(2));
        assert!(matches!(build_antisym_drift(&phi, &bad, 1.0, 0.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn beta_field_matches_density_form() {
        let s = Matrix::from_rows(&[[-1.0, 0.2], [0.2, -0.5]]);
        let phi = Polynomial::quadratic_form(&s).scale(0.5);
        let c = build_levelset_antisym(&s, &t_poly(), &k2()).unwrap();
        let drift = build_antisym_drift(&phi, &c, 1.0, 0.5).unwrap();
        // (1/2ρ)Cᵀ∇ρ with ρ = e^{2Φ} is Cᵀ∇Φ; check pointwise.
        for x in [[0.3, -1.2], [2.0, 0.5], [-0.7, 0.9]] {
            let grad_phi = s.matvec(&x);
            let cx = Matrix::from_fn(2, 2, |i, j| c.entry(i, j).eval(&x));
            let ct_grad = cx.transpose().matvec(&grad_phi);
            let div = c.divergence().eval(&x);
            let got = drift.eval(&x);
            for i in 0..2 {
                let want = grad_phi[i] + ct_grad[i] + 0.5 * div[i];
                assert!((got[i] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn levelset_examples() {
        let s = Matrix::from_rows(&[[-2.0, 0.5], [0.5, -1.0]]);
        let c = build_levelset_antisym(&s, &t_poly(), &k2()).unwrap();
        assert_eq!(c.entry(0, 1), &Polynomial::quadratic_form(&s).scale(1.5));
        assert!(check_divc_orthogonality(&c, &s).unwrap());
        let zero = build_levelset_antisym(&s, &Polynomial::zero(1), &k2()).unwrap();
        assert_eq!(zero, PolyMatrix::zero(2));
        assert!(build_levelset_antisym(&s, &t_poly(), &Matrix::identity(2)).is_err());
    }

    #[test]
    fn levelset_three_dimensional_cubic() {
        let s = Matrix::from_diag(&[-1.0, -2.0, -3.0]);
        let k = Matrix::from_rows(&[[0.0, 1.0, -2.0], [-1.0, 0.0, 0.5], [2.0, -0.5, 0.0]]);
        let t2 = Polynomial::from_terms(1, [(Monomial::new(vec![2]), 1.0)]);
        let c = build_levelset_antisym(&s, &t2, &k).unwrap();
        let div = c.divergence();
        for comp in div.components() {
            assert!(!comp.is_zero());
            assert!(comp.terms().all(|(m, _)| m.degree() == 3));
        }
        assert!(check_divc_orthogonality(&c, &s).unwrap());
    }

    #[test]
    fn orthogonality_counterexample_and_constant() {
        let mut c = PolyMatrix::zero(3);
        c.set(0, 2, Polynomial::var(3, 0));
        c.set(2, 0, -Polynomial::var(3, 0));
        assert!(!check_divc_orthogonality(&c, &-Matrix::identity(3)).unwrap());
        let sx = PolyVectorField::linear(&-Matrix::identity(3));
        assert_eq!(c.divergence().dot(&sx), -Polynomial::var(3, 2));
        let k = Matrix::from_rows(&[[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
        assert!(check_divc_orthogonality(&PolyMatrix::constant(&k), &-Matrix::identity(3)).unwrap());
    }

    #[test]
    fn antisymmetric_linear_construction_examples() {
        let g = Matrix::from_rows(&[[0.0, 1.0], [-2.0, -3.0]]);
        let a = Matrix::identity(2);
        let s = solve_riccati_2x2(&g, &a).unwrap().s;
        let c = build_levelset_antisym(&s, &t_poly(), &k2()).unwrap();
        let phi = Polynomial::quadratic_form(&s).scale(0.5);

        let lin = mainthm_drift(&g, &a, &s, &c, 1.0, 0.0, 0.0).unwrap();
        let want = PolyVectorField::linear(&(&s + &(&g - &s)));
        assert!(lin.sub(&want).max_abs_coeff() < 1e-12);
        let r = classify_poly(&phi, &lin, &a).unwrap();
        assert!(r.ohhd && r.sohhd);

        let zero = mainthm_drift(&g, &a, &s, &c, 0.0, 0.0, 0.0).unwrap();
        assert!(zero.sub(&gradient(&phi)).max_abs_coeff() < 1e-15);

        let (_, report) = classify_mainthm(&g, &a, &s, &c, 1.0, 1.0, 0.5).unwrap();
        assert!(report.ohhd);
        assert!(report.notes.iter().any(|n| n == "unique OHHD (Hurwitz)"));

        let bad_s = Matrix::identity(2);
        assert!(matches!(mainthm_drift(&g, &a, &bad_s, &c, 1.0, 0.0, 0.0), Err(Error::Precondition(_))));
    }
}
