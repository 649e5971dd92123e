use super::lyapunov::solve_lyapunov_kron;
use super::split::split_values;
use super::{check_spd, Method, RiccatiSolution};
use crate::error::{Error, Result};
use crate::matcore::{real_schur, reorder_schur_by_mask, sqrtm_spd, tol, Matrix};

/// Symmetric solution for any `d` via the real Schur form of
/// `Ĝ = (√A)⁻¹G√A`.
///
/// Blocks carrying `σ₀` are moved to the front and receive a zero block in
/// `Ŝ`; the trailing block `R₂₂` gets `S₂ = (−P₂)⁻¹` with
/// `R₂₂P₂ + P₂R₂₂ᵀ = −2I`. Then `S = (√A)⁻¹UŜUᵀ(√A)⁻¹`.
pub fn solve_riccati_general(g: &Matrix, a: &Matrix) -> Result<RiccatiSolution> {
    let d = g.ensure_square("drift matrix G")?;
    a.ensure_same_shape(g, "diffusion matrix A")?;
    check_spd(a)?;

    let root = sqrtm_spd(a)?;
    let root_inv = root.inverse()?;
    let g_hat = &(&root_inv * g) * &root;

    let sf = real_schur(&g_hat)?;
    let eig = sf.eigenvalues();
    let split = split_values(&eig, tol::pair_for(g_hat.norm_fro()));
    let flags = split.in_sigma0();

    let mut mask = Vec::with_capacity(sf.block_sizes.len());
    let mut idx = 0;
    for &size in &sf.block_sizes {
        mask.push(flags[idx..idx + size].iter().any(|&f| f));
        idx += size;
    }
    let (sf, k) = reorder_schur_by_mask(&sf, &mask)?;

    let mut warnings = Vec::new();
    let mut s_hat = Matrix::zeros(d, d);
    if k < d {
        let r22 = sf.r.block(k, d, k, d);
        let lyap = solve_lyapunov_kron(&r22, &Matrix::identity(d - k))?;
        warnings.extend(lyap.warnings);
        let s2 = (-&lyap.p).inverse().map_err(|_| Error::SingularBlock)?;
        s_hat.set_block(k, k, &s2.symmetrize());
    }
    if k > 0 {
        warnings.push(format!(
            "{k} eigenvalue(s) in ±-pairs or at zero mapped to a zero block; other symmetric solutions may exist"
        ));
    }

    let s = &(&(&(&root_inv * &sf.u) * &s_hat) * &sf.u.transpose()) * &root_inv;
    RiccatiSolution::assemble(s.symmetrize(), Method::SchurGeneral, g, a, warnings)
}
