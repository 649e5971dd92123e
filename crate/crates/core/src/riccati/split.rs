use num_complex::Complex64;
use serde::Serialize;

use crate::matcore::Spectrum;

/// Partition of a spectrum into `σ₀` (±-pairs and zeros) and `σ₁`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSplit {
    /// Indices into the spectrum, ascending.
    pub sigma0: Vec<usize>,
    /// Complementary indices, ascending.
    pub sigma1: Vec<usize>,
    /// Matched pairs `(i, j)` with `|λᵢ + λⱼ| ≤ tol`; a zero eigenvalue
    /// appears as `(i, i)`.
    pub pairs: Vec<(usize, usize)>,
    /// `min |λᵢ + λⱼ|` over `i, j ∈ σ₁` (`i = j` allowed); `∞` if `σ₁` is empty.
    pub sigma1_gap: f64,
    pub tol: f64,
}

impl SpectrumSplit {
    pub fn sigma0_size(&self) -> usize {
        self.sigma0.len()
    }

    /// Membership flag per index.
    pub fn in_sigma0(&self) -> Vec<bool> {
        let n = self.sigma0.len() + self.sigma1.len();
        let mut flags = vec![false; n];
        for &i in &self.sigma0 {
            flags[i] = true;
        }
        flags
    }
}

/// Greedy ±-pairing over the values in the given order. Each unmatched value
/// is a zero (`|λ| ≤ tol`) or is matched to the nearest later-unmatched
/// partner with `|λᵢ + λⱼ| ≤ tol`; ties go to the smaller index.
pub fn spectrum_split(spectrum: &Spectrum, tol: f64) -> SpectrumSplit {
    split_values(&spectrum.values, tol)
}

pub(crate) fn split_values(values: &[Complex64], tol: f64) -> SpectrumSplit {
    let n = values.len();
    let mut taken = vec![false; n];
    let mut pairs = Vec::new();
    for i in 0..n {
        if taken[i] {
            continue;
        }
        if values[i].norm() <= tol {
            taken[i] = true;
            pairs.push((i, i));
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if j == i || taken[j] {
                continue;
            }
            let d = (values[i] + values[j]).norm();
            if d <= tol && best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        if let Some((j, _)) = best {
            taken[i] = true;
            taken[j] = true;
            pairs.push((i.min(j), i.max(j)));
        }
    }
    let sigma0: Vec<usize> = (0..n).filter(|&i| taken[i]).collect();
    let sigma1: Vec<usize> = (0..n).filter(|&i| !taken[i]).collect();
    let mut gap = f64::INFINITY;
    for (a, &i) in sigma1.iter().enumerate() {
        for &j in &sigma1[a..] {
            gap = gap.min((values[i] + values[j]).norm());
        }
    }
    SpectrumSplit { sigma0, sigma1, pairs, sigma1_gap: gap, tol }
}
