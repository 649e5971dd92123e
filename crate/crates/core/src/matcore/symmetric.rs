use super::{tol, Matrix};
use crate::error::{Error, Result};

/// Eigen-decomposition `A = V diag(values) Vᵀ` of a symmetric matrix.
/// Eigenvalues are sorted ascending; `vectors` holds them column-wise.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigen-solver. Only the symmetric part of `a` is used.
pub fn symmetric_eigen(a: &Matrix) -> Result<SymmetricEigen> {
    let n = a.ensure_square("symmetric eigen input")?;
    let mut m = a.symmetrize();
    let mut v = Matrix::identity(n);
    let scale = m.norm_fro();
    if scale == 0.0 || n == 1 {
        return Ok(SymmetricEigen { values: m.diag(), vectors: v });
    }

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-16 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NotConverged { routine: "Jacobi eigen-solver", iterations: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SymmetricEigen { values, vectors })
}

/// SPD predicate: symmetric and every eigenvalue above `ε_pd·‖M‖_F`.
pub fn is_spd(a: &Matrix) -> bool {
    if !a.is_symmetric(tol::SYM) {
        return false;
    }
    match symmetric_eigen(a) {
        Ok(eig) => eig.values.iter().all(|&l| l > tol::PD * a.norm_fro()),
        Err(_) => false,
    }
}

/// Symmetric positive definite square root.
pub fn sqrtm_spd(a: &Matrix) -> Result<Matrix> {
    a.ensure_square("sqrtm input")?;
    if !a.is_symmetric(tol::SYM) {
        return Err(Error::Precondition("square root requires a symmetric matrix".into()));
    }
    let eig = symmetric_eigen(a)?;
    let floor = tol::PD * a.norm_fro();
    if let Some(bad) = eig.values.iter().find(|&&l| l <= floor) {
        return Err(Error::Precondition(format!(
            "square root requires a positive definite matrix (eigenvalue {bad:e})"
        )));
    }
    let roots: Vec<f64> = eig.values.iter().map(|l| l.sqrt()).collect();
    let v = &eig.vectors;
    let scaled = Matrix::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)] * roots[j]);
    Ok((&scaled * &v.transpose()).symmetrize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_identity_and_diagonal() {
        let i3 = Matrix::identity(3);
        assert!((&sqrtm_spd(&i3).unwrap() - &i3).norm_fro() < 1e-15);
        let d = Matrix::from_diag(&[4.0, 9.0]);
        let r = sqrtm_spd(&d).unwrap();
        assert!((&r - &Matrix::from_diag(&[2.0, 3.0])).norm_fro() < 1e-14);
    }

    #[test]
    fn sqrt_multiplies_back() {
        let a = Matrix::from_rows(&[[2.0, 1.0], [1.0, 1.0]]);
        let r = sqrtm_spd(&a).unwrap();
        assert!(r.asymmetry() == 0.0);
        assert!(is_spd(&r));
        assert!((&(&r * &r) - &a).norm_fro() <= 1e-12 * a.norm_fro());
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]);
        assert!(matches!(sqrtm_spd(&a), Err(Error::Precondition(_))));
        let ns = Matrix::from_rows(&[[1.0, 0.5], [0.0, 1.0]]);
        assert!(matches!(sqrtm_spd(&ns), Err(Error::Precondition(_))));
    }

    #[test]
    fn eigen_reconstructs() {
        let a = Matrix::from_rows(&[[4.0, 1.0, -2.0], [1.0, 3.0, 0.5], [-2.0, 0.5, 1.0]]);
        let e = symmetric_eigen(&a).unwrap();
        let v = &e.vectors;
        let back = &(v * &Matrix::from_diag(&e.values)) * &v.transpose();
        assert!((&back - &a).norm_fro() < 1e-13);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }
}
