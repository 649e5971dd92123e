//! Sparse multivariate polynomials and the symbolic decomposition checks
//! for polynomial drifts `P = A∇Φ + B`.

mod construct;
mod decomp;
mod field;
mod lyap;
mod poly;

pub use construct::{
    build_antisym_drift, build_levelset_antisym, check_divc_orthogonality, classify_mainthm, mainthm_drift,
};
pub use decomp::{
    classify_poly, degree_homogeneous_conditions, quadratic_r2_residuals, whhd_residual, DecompositionReport,
    QuadraticCoeffs, QuadraticR2Residuals,
};
pub use field::{divergence, dot, gradient, matrix_divergence, PolyMatrix, PolyVectorField};
pub use lyap::{
    composite_verdict, growth_check, leading_negativity, lyapunov_generator_poly, Clause, CompositeVerdict,
    GrowthVerdict, LeadingNegativity, EPS_SPHERE,
};
pub use poly::{Monomial, Polynomial, EPS_COEFF};
