//! Classification of linear drifts `Gx` against the Gaussian candidate
//! measure `μ = e^{⟨x,Sx⟩}dx`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{eigenvalues, symmetric_eigen, tol, Matrix};

/// Default relative tolerance of the invariance test.
pub const DEFAULT_INVARIANCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Uniqueness {
    GuaranteedHurwitz,
    NotDetermined,
}

/// Flags for the linear drift `Gx = ASx + Hx`.
#[derive(Debug, Clone, Serialize)]
pub struct LinearReport {
    /// `H = G − AS`.
    pub h: Matrix,
    pub invariant: bool,
    /// Equals `invariant` for linear fields.
    pub sohhd: bool,
    pub hurwitz: bool,
    pub measure_finite: bool,
    pub uniqueness: Uniqueness,
    /// `G̃ = S + (G − AS)`.
    pub g_tilde: Matrix,
    /// `‖SH + HᵀS‖_F`.
    pub sym_residual: f64,
    /// `|trace(H)|`.
    pub trace_residual: f64,
    pub notes: Vec<String>,
}

/// `μ = e^{⟨x,Sx⟩}dx` with `Z = ∫ e^{⟨x,Sx⟩}dx` when finite.
#[derive(Debug, Clone, Serialize)]
pub struct GaussianMeasure {
    pub s: Matrix,
    /// All eigenvalues of `S` below `−ε_pd·‖S‖_F`.
    pub finite: bool,
    /// `ln Z`; present iff `finite`.
    pub log_normalizer: Option<f64>,
    pub warnings: Vec<String>,
}

fn check_symmetric(s: &Matrix) -> Result<usize> {
    let d = s.ensure_square("matrix S")?;
    if !s.is_symmetric(tol::SYM) {
        return Err(Error::Precondition("matrix S must be symmetric".into()));
    }
    Ok(d)
}

impl GaussianMeasure {
    pub fn new(s: &Matrix) -> Result<Self> {
        let d = check_symmetric(s)?;
        let s = s.symmetrize();
        let eig = symmetric_eigen(&s)?;
        let threshold = -tol::PD * s.norm_fro();
        let top = eig.values.last().copied().unwrap_or(0.0);
        let finite = s.norm_fro() > 0.0 && top < threshold;
        let mut warnings = Vec::new();
        if !finite && top < 0.0 {
            warnings.push(format!(
                "largest eigenvalue {top:.3e} of S is negative but within the definiteness threshold"
            ));
        }
        let log_normalizer = finite.then(|| {
            let log_det: f64 = eig.values.iter().map(|l| (-l).ln()).sum();
            0.5 * d as f64 * std::f64::consts::PI.ln() - 0.5 * log_det
        });
        Ok(GaussianMeasure { s, finite, log_normalizer, warnings })
    }

    pub fn dim(&self) -> usize {
        self.s.rows()
    }

    fn require_finite(&self) -> Result<f64> {
        self.log_normalizer.ok_or(Error::MeasureNotFinite)
    }

    pub fn normalizer(&self) -> Result<f64> {
        Ok(self.require_finite()?.exp())
    }

    /// `(−2S)⁻¹`.
    pub fn covariance(&self) -> Result<Matrix> {
        self.require_finite()?;
        Ok(self.s.scale(-2.0).inverse()?.symmetrize())
    }

    /// `⟨x,Sx⟩ − ln Z`.
    pub fn log_density(&self, x: &[f64]) -> Result<f64> {
        let log_z = self.require_finite()?;
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, measure has dimension {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(self.s.quad_form(x) - log_z)
    }
}

/// `H = G − AS`.
pub fn remainder_matrix(g: &Matrix, a: &Matrix, s: &Matrix) -> Result<Matrix> {
    g.ensure_square("drift matrix G")?;
    a.ensure_same_shape(g, "diffusion matrix A")?;
    s.ensure_same_shape(g, "matrix S")?;
    Ok(g - &(a * s))
}

/// Classifies `Gx` against `μ = e^{⟨x,Sx⟩}dx`.
///
/// `invariant` holds when `‖SH + HᵀS‖_F ≤ rel_tol·(‖S‖²‖A‖ + ‖S‖‖G‖)` and
/// `|trace H| ≤ rel_tol·(‖G‖ + ‖A‖‖S‖)`. Uniqueness is certified only for an
/// invariant, finite measure with Hurwitz `G`.
pub fn classify_linear(g: &Matrix, a: &Matrix, s: &Matrix, rel_tol: f64) -> Result<LinearReport> {
    check_symmetric(s)?;
    let h = remainder_matrix(g, a, s)?;
    let sh = s * &h;
    let sym_residual = (&sh + &sh.transpose()).norm_fro();
    let trace_residual = h.trace().abs();
    let (ns, ng, na) = (s.norm_fro(), g.norm_fro(), a.norm_fro());
    let invariant = sym_residual <= rel_tol * (ns * ns * na + ns * ng)
        && trace_residual <= rel_tol * (ng + na * ns);
    let hurwitz = eigenvalues(g)?.is_hurwitz();
    let measure = GaussianMeasure::new(s)?;
    let measure_finite = measure.finite;
    let mut notes = measure.warnings.clone();

    let uniqueness = if invariant && hurwitz && measure_finite {
        notes.push("Hurwitz drift with finite invariant Gaussian measure: the invariant measure is unique".into());
        Uniqueness::GuaranteedHurwitz
    } else {
        if !invariant {
            notes.push(format!(
                "measure is not infinitesimally invariant (symmetric residual {sym_residual:.3e}, trace residual {trace_residual:.3e})"
            ));
        }
        if !hurwitz {
            notes.push("G is not Hurwitz; uniqueness is not certified by this tool".into());
        } else if !measure_finite {
            notes.push("measure is not finite; uniqueness is not certified".into());
        }
        Uniqueness::NotDetermined
    };
    let g_tilde = s + &h;
    Ok(LinearReport { h, invariant, sohhd: invariant, hurwitz, measure_finite, uniqueness, g_tilde, sym_residual, trace_residual, notes })
}

/// `Z = π^{d/2} det(−S)^{−1/2}`.
pub fn gaussian_normalizer(s: &Matrix) -> Result<f64> {
    GaussianMeasure::new(s)?.normalizer()
}

/// `(−2S)⁻¹`.
pub fn stationary_covariance(s: &Matrix) -> Result<Matrix> {
    GaussianMeasure::new(s)?.covariance()
}

/// `⟨x,Sx⟩ − ln Z`.
pub fn log_density(s: &Matrix, x: &[f64]) -> Result<f64> {
    GaussianMeasure::new(s)?.log_density(x)
}
