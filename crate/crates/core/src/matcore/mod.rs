//! Dense real matrix kernel.

mod expm;
mod kron;
mod matrix;
mod schur;
mod spectrum;
mod symmetric;

pub use expm::expm;
pub use kron::{kron, unvec, vec};
pub use matrix::{Lu, Matrix};
pub use schur::{real_schur, reorder_schur, reorder_schur_by_mask, SchurForm};
pub use spectrum::{eigenvalues, spectral_abscissa, Spectrum};
pub use symmetric::{is_spd, sqrtm_spd, symmetric_eigen, SymmetricEigen};

/// Tolerances shared across the crate.
pub mod tol {
    /// Symmetry predicate, relative to `max(1, ‖M‖_F)`.
    pub const SYM: f64 = 1e-10;
    /// Orthogonality of Schur vectors, `‖UᵀU − I‖_F`.
    pub const ORTH: f64 = 1e-10;
    /// Schur reconstruction, relative to `‖G‖_F`.
    pub const SCHUR: f64 = 1e-9;
    /// Conjugate/±-pair matching, relative to `max(1, ‖G‖_F)`.
    pub const PAIR: f64 = 1e-8;
    /// Definiteness threshold, relative to `‖M‖_F`.
    pub const PD: f64 = 1e-12;

    pub fn pair_for(norm: f64) -> f64 {
        PAIR * norm.max(1.0)
    }
}
