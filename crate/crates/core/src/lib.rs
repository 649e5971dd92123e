//! Weighted and orthogonal Helmholtz–Hodge decompositions of diffusion drifts.
//!
//! The crate is organised bottom-up:
//!
//! * [`matcore`]: dense real matrices, Kronecker products, eigenvalues,
//!   real Schur form with block reordering, matrix exponential, SPD square root.
//! * [`riccati`]: the trace-normalised algebraic Riccati equation
//!   `SG + GᵀS = 2SAS`, `trace(G − AS) = 0`, and the Lyapunov equation
//!   `GP + PGᵀ = −2A`, each solved by several independent routes.
//! * [`linmeasure`]: classification of linear drifts and the Gaussian
//!   measure `e^{⟨x,Sx⟩}dx`.
//! * [`polyfield`]: sparse multivariate polynomials and the symbolic
//!   decomposition checks for polynomial drifts.
//! * [`stochverify`]: generator application, Gauss–Hermite invariance tests
//!   and Euler–Maruyama simulation.

pub mod error;
pub mod linmeasure;
pub mod matcore;
pub mod polyfield;
pub mod riccati;
pub mod stochverify;

pub use error::{Error, Result};
pub use matcore::{Matrix, SchurForm, Spectrum};
