use super::{check_spd, Method, RiccatiSolution};
use crate::error::{Error, Result};
use crate::matcore::{tol, Matrix};

/// Relative threshold for deciding `trace(G) = 0` and `det(G) = 0`.
const CASE_TOL: f64 = 1e-14;

/// Closed-form symmetric solution for `d = 2`.
///
/// * `trace(G) = 0` gives `S = 0`.
/// * `det(G) = 0` gives `S = κ_v vvᵀ`, `κ_v = trace(G)/⟨v,Av⟩`, with `v` the
///   larger nonzero row of `G`.
/// * Otherwise `S = κM` with the explicit rational formula in the entries of
///   `G = [[a,b],[c,d]]` and `A = [[α,β],[β,γ]]`.
pub fn solve_riccati_2x2(g: &Matrix, a: &Matrix) -> Result<RiccatiSolution> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "closed form needs a 2×2 drift, got {}×{}",
            g.rows(),
            g.cols()
        )));
    }
    a.ensure_same_shape(g, "diffusion matrix A")?;
    check_spd(a)?;

    let (ga, gb, gc, gd) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    let (al, be, ga_) = (a[(0, 0)], a[(0, 1)], a[(1, 1)]);
    let scale = g.norm_fro().max(f64::MIN_POSITIVE);
    let tr = ga + gd;
    let det = ga * gd - gb * gc;

    let s = if tr.abs() <= CASE_TOL * scale {
        Matrix::zeros(2, 2)
    } else if det.abs() <= CASE_TOL * scale * scale {
        let r0 = [ga, gb];
        let r1 = [gc, gd];
        let n0 = ga.hypot(gb);
        let n1 = gc.hypot(gd);
        let v = if n0 >= n1 { r0 } else { r1 };
        let vav = a.quad_form(&v);
        if vav <= tol::PD * a.norm_fro() * (v[0] * v[0] + v[1] * v[1]) {
            return Err(Error::Numerical("rank-one ansatz has a vanishing ⟨v,Av⟩".into()));
        }
        let kappa = tr / vav;
        Matrix::from_fn(2, 2, |i, j| kappa * v[i] * v[j])
    } else {
        let q = be * (ga - gd) + ga_ * gb - al * gc;
        let denom = (al * ga_ - be * be) * tr * tr + q * q;
        let kappa = tr / denom;
        let m11 = ga_ * ga * tr + al * gc * gc - ga_ * gb * gc - 2.0 * be * ga * gc;
        let m12 = al * gc * gd + ga_ * ga * gb - 2.0 * be * ga * gd;
        let m22 = al * gd * tr + ga_ * gb * gb - al * gb * gc - 2.0 * be * gb * gd;
        Matrix::from_rows(&[[m11, m12], [m12, m22]]).scale(kappa)
    };
    RiccatiSolution::assemble(s, Method::Closed2x2, g, a, Vec::new())
}
