use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::decomp::{check_inputs, whhd_residual};
use super::field::{gradient, PolyVectorField};
use super::poly::Polynomial;
use crate::error::{Error, Result};
use crate::matcore::{is_spd, Matrix};

/// Sphere-positivity margin.
pub const EPS_SPHERE: f64 = 1e-8;

const LOW_DIM_SAMPLES: usize = 10_000;
const HIGH_DIM_SAMPLES: usize = 100_000;
const REFINE_STARTS: usize = 10;
const REFINE_STEPS: usize = 50;
const SAMPLE_SEED: u64 = 0x5eed_5a3e;

/// Estimated minimum of `−Φ_m` over the unit sphere.
#[derive(Debug, Clone, Serialize)]
pub struct LeadingNegativity {
    pub min_value: f64,
    /// `min_value > ε_sphere`.
    pub holds: bool,
    /// Unit vector attaining `min_value`.
    pub witness: Vec<f64>,
}

/// Minimum of `f` over the unit sphere: deterministic sampling (circle grid
/// for `d = 2`, Fibonacci lattice for `d = 3`, seeded Gaussian directions
/// otherwise) followed by projected-gradient descent from the best samples.
pub(crate) fn sphere_min(f: &Polynomial) -> (f64, Vec<f64>) {
    let d = f.dim();
    if d == 1 {
        let (a, b) = (f.eval(&[1.0]), f.eval(&[-1.0]));
        return if a <= b { (a, vec![1.0]) } else { (b, vec![-1.0]) };
    }
    let samples = sample_sphere(d);
    let mut scored: Vec<(f64, usize)> = samples.iter().enumerate().map(|(i, x)| (f.eval(x), i)).collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let grad = gradient(f);
    let mut best = (scored[0].0, samples[scored[0].1].clone());
    for &(v0, idx) in scored.iter().take(REFINE_STARTS) {
        let (v, x) = refine(f, &grad, samples[idx].clone(), v0);
        if v < best.0 {
            best = (v, x);
        }
    }
    best
}

fn normalize(x: &mut [f64]) {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= n);
}

fn sample_sphere(d: usize) -> Vec<Vec<f64>> {
    match d {
        2 => (0..LOW_DIM_SAMPLES)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / LOW_DIM_SAMPLES as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => {
            let n = LOW_DIM_SAMPLES as f64;
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..LOW_DIM_SAMPLES)
                .map(|k| {
                    let z = 1.0 - (2.0 * k as f64 + 1.0) / n;
                    let r = (1.0 - z * z).sqrt();
                    let t = golden * k as f64;
                    vec![r * t.cos(), r * t.sin(), z]
                })
                .collect()
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
            (0..HIGH_DIM_SAMPLES)
                .map(|_| {
                    let mut x: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
                    normalize(&mut x);
                    x
                })
                .collect()
        }
    }
}

fn refine(f: &Polynomial, grad: &PolyVectorField, mut x: Vec<f64>, mut v: f64) -> (f64, Vec<f64>) {
    let mut eta = 0.1;
    for _ in 0..REFINE_STEPS {
        let g = grad.eval(&x);
        let radial: f64 = g.iter().zip(&x).map(|(a, b)| a * b).sum();
        let tangent: Vec<f64> = g.iter().zip(&x).map(|(a, b)| a - radial * b).collect();
        let tn = tangent.iter().map(|t| t * t).sum::<f64>().sqrt();
        if tn < 1e-15 {
            break;
        }
        let mut improved = false;
        for _ in 0..40 {
            let mut y: Vec<f64> = x.iter().zip(&tangent).map(|(a, t)| a - eta * t / tn).collect();
            normalize(&mut y);
            let vy = f.eval(&y);
            if vy < v {
                x = y;
                v = vy;
                improved = true;
                eta *= 2.0;
                break;
            }
            eta *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (v, x)
}

/// Minimum of `−Φ_m` on the unit sphere for the top homogeneous part `Φ_m`.
///
/// Requires an even top degree `m ≥ 2`.
pub fn leading_negativity(phi: &Polynomial) -> Result<LeadingNegativity> {
    let m = phi.degree();
    if m == 0 || m % 2 == 1 {
        return Err(Error::Precondition(format!(
            "potential must have even degree m ≥ 2, got degree {m}"
        )));
    }
    let top = -phi.homogeneous_part(m);
    let (min_value, witness) = sphere_min(&top);
    Ok(LeadingNegativity { min_value, holds: min_value > EPS_SPHERE, witness })
}

/// `L^{A,P}V` for `V = −Φ + C₀`, simplified by the WHHD identity to
/// `−½trace(A∇²Φ) − ⟨A∇Φ,∇Φ⟩ + ½div(P − A∇Φ)`.
pub fn lyapunov_generator_poly(phi: &Polynomial, p: &PolyVectorField, a: &Matrix) -> Result<Polynomial> {
    let d = check_inputs(phi, p, a)?;
    let residual = whhd_residual(phi, p, a)?;
    if !residual.is_zero() {
        return Err(Error::Precondition(format!("WHHD residual is not identically zero: {residual}")));
    }
    let g = gradient(phi);
    let ag = g.apply_matrix(a);
    let mut hess_trace = Polynomial::zero(d);
    for i in 0..d {
        for j in 0..d {
            if a[(i, j)] != 0.0 {
                hess_trace = &hess_trace + &g.component(j).partial(i).scale(a[(i, j)]);
            }
        }
    }
    let b = p.sub(&ag);
    Ok(&(&hess_trace.scale(-0.5) - &ag.dot(&g)) + &b.divergence().scale(0.5))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthVerdict {
    ConclusiveTrue,
    Inconclusive,
}

/// Decides `⟨P(x), Tx⟩ ≤ M‖x‖²` outside a compact set when one of two
/// sufficient cases applies: degree `≤ 2`, or an even-degree top part that
/// is strictly negative on the sphere.
pub fn growth_check(p: &PolyVectorField, t: &Matrix) -> Result<GrowthVerdict> {
    let d = p.dim();
    if t.rows() != d || t.cols() != d {
        return Err(Error::DimensionMismatch(format!("T is {}×{}, drift has dimension {d}", t.rows(), t.cols())));
    }
    if !is_spd(t) {
        return Err(Error::Precondition("T must be symmetric positive definite".into()));
    }
    let q = p.dot(&PolyVectorField::linear(t));
    let deg = q.degree();
    if deg <= 2 {
        return Ok(GrowthVerdict::ConclusiveTrue);
    }
    if deg.is_multiple_of(2) {
        let (min, _) = sphere_min(&-q.homogeneous_part(deg));
        if min > EPS_SPHERE {
            return Ok(GrowthVerdict::ConclusiveTrue);
        }
    }
    Ok(GrowthVerdict::Inconclusive)
}

#[derive(Debug, Clone, Serialize)]
pub struct Clause {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Finiteness, invariance and conservativeness clauses for the claim that
/// `μ = e^{2Φ}dx` is the unique finite invariant measure.
#[derive(Debug, Clone, Serialize)]
pub struct CompositeVerdict {
    pub clauses: Vec<Clause>,
    pub all_pass: bool,
    pub verdict: String,
    /// Present when the WHHD residual vanishes.
    pub lyapunov_generator: Option<Polynomial>,
}

pub fn composite_verdict(phi: &Polynomial, p: &PolyVectorField, a: &Matrix) -> Result<CompositeVerdict> {
    let d = check_inputs(phi, p, a)?;
    let m = phi.degree();

    let negativity = leading_negativity(phi);
    let finiteness = match &negativity {
        Ok(n) => Clause {
            name: "finiteness",
            pass: n.holds,
            detail: format!("min of −Φ_m on the unit sphere ≈ {:.6e} at {:?}", n.min_value, n.witness),
        },
        Err(e) => Clause { name: "finiteness", pass: false, detail: e.to_string() },
    };
    let negativity_holds = finiteness.pass;

    let residual = whhd_residual(phi, p, a)?;
    let invariance = Clause {
        name: "invariance",
        pass: residual.is_zero(),
        detail: if residual.is_zero() {
            "⟨∇Φ,B⟩ + ½div B ≡ 0".to_string()
        } else {
            format!("nonzero residual {residual}")
        },
    };

    let b = p.sub(&gradient(phi).apply_matrix(a));
    let lyapunov_generator = if invariance.pass { Some(lyapunov_generator_poly(phi, p, a)?) } else { None };
    let mut reasons = Vec::new();
    if negativity_holds && m >= 1 && b.degree() + 2 <= 2 * m {
        reasons.push(format!("deg B = {} ≤ 2m − 2 = {} with strictly negative leading part", b.degree(), 2 * m - 2));
    }
    if growth_check(p, &Matrix::identity(d))? == GrowthVerdict::ConclusiveTrue {
        reasons.push("⟨P(x), x⟩ has at most quadratic growth".to_string());
    }
    if let Some(lv) = &lyapunov_generator {
        let deg = lv.degree();
        if deg > 0 && deg % 2 == 0 && sphere_min(&-lv.homogeneous_part(deg)).0 > EPS_SPHERE {
            reasons.push("leading part of L V is strictly negative on the sphere".to_string());
        }
    }
    let conservativeness = Clause {
        name: "conservativeness",
        pass: !reasons.is_empty(),
        detail: if reasons.is_empty() { "no sufficient growth condition certified".to_string() } else { reasons.join("; ") },
    };

    let clauses = vec![finiteness, invariance, conservativeness];
    let failing: Vec<&str> = clauses.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    let all_pass = failing.is_empty();
    let verdict = if all_pass {
        "unique finite invariant measure: all clauses pass".to_string()
    } else {
        format!("not certified: failing clause(s): {}", failing.join(", "))
    };
    Ok(CompositeVerdict { clauses, all_pass, verdict, lyapunov_generator })
}
