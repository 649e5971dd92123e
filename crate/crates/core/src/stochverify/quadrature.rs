use serde::Serialize;

use super::generator::generator_apply;
use crate::error::{Error, Result};
use crate::linmeasure::GaussianMeasure;
use crate::matcore::{symmetric_eigen, Matrix};
use crate::polyfield::{Monomial, PolyVectorField, Polynomial};

/// Largest supported one-dimensional rule.
pub const MAX_ORDER: usize = 64;
/// Largest supported test-monomial degree.
pub const MAX_TEST_DEGREE: u32 = 20;

/// Nodes and weights of the `n`-point Gauss–Hermite rule for the standard
/// normal weight `e^{−x²/2}/√(2π)`; weights sum to one.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule needs at least one node");
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    let total: f64 = w.iter().sum();
    let nodes: Vec<f64> = x.iter().rev().map(|v| v * std::f64::consts::SQRT_2).collect();
    let weights: Vec<f64> = w.iter().rev().map(|v| v / total).collect();
    (nodes, weights)
}

/// Tensor Gauss–Hermite rule for `N(0, Σ)`: points `x = Lz` with `LLᵀ = Σ`.
pub struct GaussianRule {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub order: usize,
}

impl GaussianRule {
    /// `LLᵀ = Σ` with `L = V·diag(√λ)` from the eigen-decomposition of `Σ`.
    pub fn new(cov: &Matrix, order: usize) -> Result<Self> {
        let d = cov.ensure_square("covariance")?;
        let eig = symmetric_eigen(cov)?;
        if eig.values.iter().any(|&l| l <= 0.0) {
            return Err(Error::MeasureNotFinite);
        }
        let l = Matrix::from_fn(d, d, |i, j| eig.vectors[(i, j)] * eig.values[j].sqrt());
        let (nodes, w1) = gauss_hermite(order);
        let total = order.checked_pow(d as u32).ok_or_else(|| Error::Precondition("quadrature grid too large".into()))?;
        if total > 50_000_000 {
            return Err(Error::Precondition(format!("tensor quadrature grid of {total} points is too large")));
        }
        let mut points = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        let mut idx = vec![0usize; d];
        for _ in 0..total {
            let z: Vec<f64> = idx.iter().map(|&k| nodes[k]).collect();
            points.push(l.matvec(&z));
            weights.push(idx.iter().map(|&k| w1[k]).product());
            for slot in idx.iter_mut() {
                *slot += 1;
                if *slot < order {
                    break;
                }
                *slot = 0;
            }
        }
        Ok(GaussianRule { points, weights, order })
    }

    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(x, w)| w * f(x)).sum()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MonomialValue {
    pub exps: Vec<u32>,
    pub value: f64,
}

/// Normalized test integrals `∫Lf dμ/Z ÷ (∫|Lf| dμ/Z + 1)`.
#[derive(Debug, Clone, Serialize)]
pub struct InvarianceResult {
    pub max_abs: f64,
    pub per_function: Vec<MonomialValue>,
    pub quadrature_order: usize,
    pub warnings: Vec<String>,
}

/// Tests `∫ Lf dμ = 0` for every monomial `f` of degree `≤ max_degree`,
/// with `μ ∝ e^{⟨x,Sx⟩}dx`.
pub fn quadrature_invariance(
    s: &Matrix,
    a: &Matrix,
    drift: &PolyVectorField,
    max_degree: u32,
) -> Result<InvarianceResult> {
    let measure = GaussianMeasure::new(s)?;
    let cov = measure.covariance()?;
    let d = measure.dim();
    drift.check_dim(d, "drift")?;
    let mut warnings = Vec::new();
    let max_degree = if max_degree > MAX_TEST_DEGREE {
        warnings.push(format!("max_degree {max_degree} capped at {MAX_TEST_DEGREE}"));
        MAX_TEST_DEGREE
    } else {
        max_degree
    };
    let basis = Monomial::all_up_to(d, max_degree);
    let images: Vec<(Monomial, Polynomial)> = basis
        .into_iter()
        .map(|m| {
            let f = Polynomial::from_terms(d, [(m.clone(), 1.0)]);
            generator_apply(a, drift, &f).map(|lf| (m, lf))
        })
        .collect::<Result<_>>()?;
    let top = images.iter().map(|(_, lf)| lf.degree()).max().unwrap_or(0) as usize;
    let mut order = (top + max_degree as usize) / 2 + 1;
    if order > MAX_ORDER {
        warnings.push(format!("quadrature order {order} capped at {MAX_ORDER}; results are not exact"));
        order = MAX_ORDER;
    }
    let rule = GaussianRule::new(&cov, order)?;

    let mut per_function = Vec::with_capacity(images.len());
    let mut max_abs = 0.0_f64;
    for (m, lf) in &images {
        let signed = rule.integrate(|x| lf.eval(x));
        let magnitude = rule.integrate(|x| lf.eval(x).abs());
        let value = signed / (magnitude + 1.0);
        max_abs = max_abs.max(value.abs());
        per_function.push(MonomialValue { exps: m.exps().to_vec(), value });
    }
    Ok(InvarianceResult { max_abs, per_function, quadrature_order: order, warnings })
}
