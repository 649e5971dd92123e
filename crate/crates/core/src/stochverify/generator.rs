use crate::error::{Error, Result};
use crate::matcore::Matrix;
use crate::polyfield::{PolyVectorField, Polynomial};

/// `L^{A,G}f = ½∑ a_{ij}∂ᵢ∂ⱼf + ∑ Gᵢ∂ᵢf`.
pub fn generator_apply(a: &Matrix, drift: &PolyVectorField, f: &Polynomial) -> Result<Polynomial> {
    let d = f.dim();
    drift.check_dim(d, "drift")?;
    if a.rows() != d || a.cols() != d {
        return Err(Error::DimensionMismatch(format!("A is {}×{}, f has dimension {d}", a.rows(), a.cols())));
    }
    let mut out = Polynomial::zero(d);
    for i in 0..d {
        let fi = f.partial(i);
        if fi.is_zero() {
            continue;
        }
        out = &out + &(drift.component(i) * &fi);
        for j in 0..d {
            if a[(i, j)] != 0.0 {
                out = &out + &fi.partial(j).scale(0.5 * a[(i, j)]);
            }
        }
    }
    Ok(out)
}
