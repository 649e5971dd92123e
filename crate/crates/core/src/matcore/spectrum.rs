use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{real_schur, Matrix};
use crate::error::Result;

/// Eigenvalues with multiplicity, sorted lexicographically by `(Re, Im)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<Complex64>,
}

impl Spectrum {
    /// Sorts `values` into the canonical `(Re, Im)` order.
    pub fn new(mut values: Vec<Complex64>) -> Self {
        values.sort_by(lex_cmp);
        Spectrum { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest real part; `−∞` for the empty spectrum.
    pub fn abscissa(&self) -> f64 {
        self.values.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_hurwitz(&self) -> bool {
        self.abscissa() < 0.0
    }

    /// Every value has a distinct partner within `tol` of its conjugate.
    /// Partners are assigned greedily in canonical order.
    pub fn is_conjugation_closed(&self, tol: f64) -> bool {
        let n = self.values.len();
        let mut used = vec![false; n];
        for i in 0..n {
            if used[i] {
                continue;
            }
            let target = self.values[i].conj();
            if (self.values[i] - target).norm() <= tol {
                used[i] = true;
                continue;
            }
            let partner = (0..n)
                .filter(|&j| j != i && !used[j])
                .map(|j| (j, (self.values[j] - target).norm()))
                .filter(|&(_, d)| d <= tol)
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match partner {
                Some((j, _)) => {
                    used[i] = true;
                    used[j] = true;
                }
                None => return false,
            }
        }
        true
    }
}

pub(crate) fn lex_cmp(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Eigenvalues of a square matrix via the real Schur form.
pub fn eigenvalues(g: &Matrix) -> Result<Spectrum> {
    Ok(Spectrum::new(real_schur(g)?.eigenvalues()))
}

/// `max Re λ` over the spectrum of `g`.
pub fn spectral_abscissa(g: &Matrix) -> Result<f64> {
    Ok(eigenvalues(g)?.abscissa())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::tol;

    fn close(s: &Spectrum, want: &[Complex64]) {
        assert_eq!(s.len(), want.len());
        for (a, b) in s.values.iter().zip(want) {
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn companion_example() {
        let g = Matrix::from_rows(&[[0.0, 1.0], [-2.0, -3.0]]);
        let s = eigenvalues(&g).unwrap();
        close(&s, &[Complex64::new(-2.0, 0.0), Complex64::new(-1.0, 0.0)]);
        assert!((s.abscissa() + 1.0).abs() < 1e-12);
        assert!(s.is_hurwitz());
    }

    #[test]
    fn rotation_example() {
        let g = Matrix::from_rows(&[[0.0, -4.0], [4.0, 0.0]]);
        let s = eigenvalues(&g).unwrap();
        close(&s, &[Complex64::new(0.0, -4.0), Complex64::new(0.0, 4.0)]);
        assert_eq!(s.abscissa(), 0.0);
        assert!(!s.is_hurwitz());
        assert!(s.is_conjugation_closed(tol::pair_for(g.norm_fro())));
    }

    #[test]
    fn triangular_example() {
        let g = Matrix::from_rows(&[[1.0, 2.0, 3.0], [0.0, -2.0, 4.0], [0.0, 0.0, -5.0]]);
        let s = eigenvalues(&g).unwrap();
        close(&s, &[(-5.0).into(), (-2.0).into(), 1.0.into()]);
        assert_eq!(spectral_abscissa(&g).unwrap(), 1.0);
    }

    #[test]
    fn open_spectrum_detected() {
        let s = Spectrum::new(vec![Complex64::new(1.0, 1.0), Complex64::new(2.0, -1.0)]);
        assert!(!s.is_conjugation_closed(1e-8));
    }
}
