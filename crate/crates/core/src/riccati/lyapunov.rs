use serde::Serialize;

use super::split::split_values;
use crate::error::{Error, Result};
use crate::matcore::{eigenvalues, expm, kron, tol, unvec, vec, Matrix};

/// Solution of `GP + PGᵀ = −2A`.
#[derive(Debug, Clone, Serialize)]
pub struct LyapunovSolution {
    pub p: Matrix,
    /// `‖GP + PGᵀ + 2A‖_F`, recomputed from the returned `P`.
    pub residual: f64,
    pub warnings: Vec<String>,
}

/// Smallest pivot-to-largest-pivot ratio below which the Kronecker system is
/// flagged as ill-conditioned.
const PIVOT_WARN: f64 = 1e-12;
const GL_POINTS: usize = 64;
const MAX_PANELS: usize = 1024;
const MAX_DOUBLINGS: usize = 200;

pub fn lyapunov_residual(g: &Matrix, a: &Matrix, p: &Matrix) -> f64 {
    (&(&(g * p) + &(p * &g.transpose())) + &a.scale(2.0)).norm_fro()
}

fn check_inputs(g: &Matrix, a: &Matrix) -> Result<usize> {
    let d = g.ensure_square("drift matrix G")?;
    a.ensure_same_shape(g, "diffusion matrix A")?;
    if !a.is_symmetric(tol::SYM) {
        return Err(Error::Precondition("diffusion matrix A must be symmetric".into()));
    }
    Ok(d)
}

/// Solves the Lyapunov equation through the `d²×d²` system
/// `(I⊗G + G⊗I) vec(P) = −vec(2A)`.
///
/// Fails with [`Error::NoUniqueLyapunovSolution`] when two eigenvalues of `G`
/// sum to zero within `ε_pair`.
pub fn solve_lyapunov_kron(g: &Matrix, a: &Matrix) -> Result<LyapunovSolution> {
    let d = check_inputs(g, a)?;
    let spectrum = eigenvalues(g)?;
    let split = split_values(&spectrum.values, tol::pair_for(g.norm_fro()));
    if let Some(&(i, j)) = split.pairs.first() {
        return Err(Error::NoUniqueLyapunovSolution(spectrum.values[i], spectrum.values[j]));
    }
    let id = Matrix::identity(d);
    let k = &kron(&id, g) + &kron(g, &id);
    let lu = k.lu()?;
    let mut warnings = Vec::new();
    if lu.pivot_ratio < PIVOT_WARN {
        warnings.push(format!(
            "Kronecker system is ill-conditioned (pivot ratio {:.3e})",
            lu.pivot_ratio
        ));
    }
    let rhs: Vec<f64> = vec(a).iter().map(|x| -2.0 * x).collect();
    let p = unvec(&lu.solve(&rhs), d, d).symmetrize();
    let residual = lyapunov_residual(g, a, &p);
    Ok(LyapunovSolution { p, residual, warnings })
}

/// Solves the Lyapunov equation as `P = ∫₀^∞ e^{Gt}(2A)e^{Gᵀt} dt`.
///
/// `P(T₀)` with `T₀ = 1/|abscissa|` comes from composite 64-point
/// Gauss–Legendre; `P(2T) = P(T) + e^{GT}P(T)e^{GᵀT}` then runs until the
/// increment drops below `tol·‖P‖_F`.
pub fn solve_lyapunov_integral(g: &Matrix, a: &Matrix, tol: f64) -> Result<LyapunovSolution> {
    let d = check_inputs(g, a)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Precondition("integral tolerance must be positive".into()));
    }
    let abscissa = eigenvalues(g)?.abscissa();
    if abscissa >= 0.0 {
        return Err(Error::DivergentIntegral { abscissa });
    }
    let t0 = 1.0 / abscissa.abs();
    let panels = ((t0 * g.norm_fro()).ceil() as usize).clamp(1, MAX_PANELS);
    let h = t0 / panels as f64;
    let (nodes, weights) = gauss_legendre(GL_POINTS);
    let two_a = a.scale(2.0);

    // e^{Gτ} at the nodes of one panel, τ ∈ [0, h].
    let local: Vec<Matrix> = nodes
        .iter()
        .map(|&x| expm(&g.scale(0.5 * h * (x + 1.0))))
        .collect::<Result<_>>()?;
    let step = expm(&g.scale(h))?;

    let mut p = Matrix::zeros(d, d);
    let mut shift = Matrix::identity(d);
    for _ in 0..panels {
        for (e_loc, &w) in local.iter().zip(&weights) {
            let e = &shift * e_loc;
            p = &p + &(&(&e * &two_a) * &e.transpose()).scale(0.5 * h * w);
        }
        shift = &shift * &step;
    }

    let mut e_t = expm(&g.scale(t0))?;
    let mut converged = false;
    for _ in 0..MAX_DOUBLINGS {
        let inc = &(&e_t * &p) * &e_t.transpose();
        p = &p + &inc;
        if inc.norm_fro() < tol * p.norm_fro() {
            converged = true;
            break;
        }
        e_t = &e_t * &e_t;
    }
    if !converged {
        return Err(Error::NotConverged { routine: "Lyapunov integral doubling", iterations: MAX_DOUBLINGS });
    }
    let p = p.symmetrize();
    let residual = lyapunov_residual(g, a, &p);
    let mut warnings = Vec::new();
    if residual > tol.max(1e-9) * a.norm_fro().max(1.0) * (1.0 + g.norm_fro() * p.norm_fro()) {
        warnings.push(format!("integral Lyapunov residual {residual:.3e} is large"));
    }
    Ok(LyapunovSolution { p, residual, warnings })
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}
