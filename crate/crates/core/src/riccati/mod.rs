//! The trace-normalised algebraic Riccati equation
//! `SG + GᵀS = 2SAS`, `trace(G − AS) = 0`, and the Lyapunov equation
//! `GP + PGᵀ = −2A` whose inverse-negative solution `S = (−P)⁻¹` solves it.

mod closed;
mod general;
mod lyapunov;
mod split;

use serde::{Deserialize, Serialize};

pub use closed::solve_riccati_2x2;
pub use general::solve_riccati_general;
pub use lyapunov::{lyapunov_residual, solve_lyapunov_integral, solve_lyapunov_kron, LyapunovSolution};
pub use split::{spectrum_split, SpectrumSplit};

use crate::error::{Error, Result};
use crate::matcore::{eigenvalues, is_spd, symmetric_eigen, tol, Matrix};

/// Default relative tolerance of the integral route.
pub const DEFAULT_INTEGRAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[serde(rename = "closed2x2")]
    Closed2x2,
    Kron,
    Integral,
    SchurGeneral,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Closed2x2 => "closed2x2",
            Method::Kron => "kron",
            Method::Integral => "integral",
            Method::SchurGeneral => "schur_general",
        }
    }
}

/// Symmetric `S` with residuals recomputed from `(S, G, A)`.
#[derive(Debug, Clone, Serialize)]
pub struct RiccatiSolution {
    pub s: Matrix,
    pub method: Method,
    /// `‖SG + GᵀS − 2SAS‖_F`.
    pub eq_residual: f64,
    /// `|trace(G − AS)|`.
    pub trace_residual: f64,
    pub hurwitz: bool,
    pub s_negative_definite: bool,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl RiccatiSolution {
    pub(crate) fn assemble(
        s: Matrix,
        method: Method,
        g: &Matrix,
        a: &Matrix,
        mut warnings: Vec<String>,
    ) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::Numerical(format!("{} produced non-finite entries", method.as_str())));
        }
        let (eq_residual, trace_residual) = riccati_residual(&s, g, a)?;
        let hurwitz = eigenvalues(g)?.is_hurwitz();
        let s_negative_definite = is_negative_definite(&s)?;
        let sol = RiccatiSolution { s, method, eq_residual, trace_residual, hurwitz, s_negative_definite, warnings: Vec::new() };
        if !sol.certified(g, a) {
            warnings.push(format!(
                "residuals (eq {:.3e}, trace {:.3e}) exceed the certificate bounds",
                sol.eq_residual, sol.trace_residual
            ));
        }
        Ok(RiccatiSolution { warnings, ..sol })
    }

    /// Certificate bounds `(eq, trace)`:
    /// `1e−8·(‖S‖²‖A‖ + ‖S‖‖G‖)` and `1e−8·(‖G‖ + ‖A‖‖S‖)`.
    pub fn certificate_bounds(&self, g: &Matrix, a: &Matrix) -> (f64, f64) {
        let (ns, ng, na) = (self.s.norm_fro(), g.norm_fro(), a.norm_fro());
        (1e-8 * (ns * ns * na + ns * ng), 1e-8 * (ng + na * ns))
    }

    pub fn certified(&self, g: &Matrix, a: &Matrix) -> bool {
        let (be, bt) = self.certificate_bounds(g, a);
        self.eq_residual <= be && self.trace_residual <= bt
    }
}

/// Negative definite: every eigenvalue below `−ε_pd·‖S‖_F`; the zero matrix
/// is not negative definite.
pub fn is_negative_definite(s: &Matrix) -> Result<bool> {
    let n = s.norm_fro();
    if n == 0.0 {
        return Ok(false);
    }
    Ok(symmetric_eigen(s)?.values.iter().all(|&l| l < -tol::PD * n))
}

pub(crate) fn check_spd(a: &Matrix) -> Result<()> {
    if is_spd(a) {
        Ok(())
    } else {
        Err(Error::Precondition("diffusion matrix A must be symmetric positive definite".into()))
    }
}

/// `(‖SG + GᵀS − 2SAS‖_F, |trace(G − AS)|)`.
pub fn riccati_residual(s: &Matrix, g: &Matrix, a: &Matrix) -> Result<(f64, f64)> {
    g.ensure_square("drift matrix G")?;
    s.ensure_same_shape(g, "matrix S")?;
    a.ensure_same_shape(g, "diffusion matrix A")?;
    let sg = s * g;
    let sas = &(s * a) * s;
    let eq = (&(&sg + &sg.transpose()) - &sas.scale(2.0)).norm_fro();
    let tr = (g - &(a * s)).trace().abs();
    Ok((eq, tr))
}

/// Left-hand sides of the scalar system equivalent to the Riccati
/// equation, with `H = G − AS`:
/// `∑ᵢ sᵢⱼhᵢⱼ` for each `j`, then `∑ᵢ (sᵢⱼhᵢₖ + sᵢₖhᵢⱼ)` for `j < k`,
/// then `∑ᵢ hᵢᵢ`.
pub fn scalar_system_residuals(s: &Matrix, g: &Matrix, a: &Matrix) -> Result<Vec<f64>> {
    let d = g.ensure_square("drift matrix G")?;
    s.ensure_same_shape(g, "matrix S")?;
    a.ensure_same_shape(g, "diffusion matrix A")?;
    let h = g - &(a * s);
    let mut out = Vec::with_capacity(d * (d + 1) / 2 + 1);
    for j in 0..d {
        out.push((0..d).map(|i| s[(i, j)] * h[(i, j)]).sum());
    }
    for j in 0..d {
        for k in (j + 1)..d {
            out.push((0..d).map(|i| s[(i, j)] * h[(i, k)] + s[(i, k)] * h[(i, j)]).sum());
        }
    }
    out.push(h.trace());
    Ok(out)
}

fn invert_negative(p: &Matrix, method: Method) -> Result<Matrix> {
    (-p).inverse()
        .map(|m| m.symmetrize())
        .map_err(|_| Error::Numerical(format!("{} Lyapunov solution P is singular", method.as_str())))
}

/// `S = (−P)⁻¹` with `P` from [`solve_lyapunov_kron`].
pub fn solve_riccati_kron(g: &Matrix, a: &Matrix) -> Result<RiccatiSolution> {
    check_spd(a)?;
    let lyap = solve_lyapunov_kron(g, a)?;
    let s = invert_negative(&lyap.p, Method::Kron)?;
    RiccatiSolution::assemble(s, Method::Kron, g, a, lyap.warnings)
}

/// `S = (−P)⁻¹` with `P` from [`solve_lyapunov_integral`].
pub fn solve_riccati_integral(g: &Matrix, a: &Matrix, tol: f64) -> Result<RiccatiSolution> {
    check_spd(a)?;
    let lyap = solve_lyapunov_integral(g, a, tol)?;
    let s = invert_negative(&lyap.p, Method::Integral)?;
    RiccatiSolution::assemble(s, Method::Integral, g, a, lyap.warnings)
}

/// The method `auto` resolves to: `closed2x2` for `d = 2`, `kron` when
/// `σ₀` is empty, `schur_general` otherwise.
pub fn auto_method(g: &Matrix) -> Result<Method> {
    let d = g.ensure_square("drift matrix G")?;
    if d == 2 {
        return Ok(Method::Closed2x2);
    }
    let split = spectrum_split(&eigenvalues(g)?, tol::pair_for(g.norm_fro()));
    Ok(if split.sigma0.is_empty() { Method::Kron } else { Method::SchurGeneral })
}

/// Dispatches to the requested method; `None` means `auto`.
pub fn solve_riccati(g: &Matrix, a: &Matrix, method: Option<Method>, integral_tol: f64) -> Result<RiccatiSolution> {
    let method = match method {
        Some(m) => m,
        None => auto_method(g)?,
    };
    match method {
        Method::Closed2x2 => solve_riccati_2x2(g, a),
        Method::Kron => solve_riccati_kron(g, a),
        Method::Integral => solve_riccati_integral(g, a, integral_tol),
        Method::SchurGeneral => solve_riccati_general(g, a),
    }
}
