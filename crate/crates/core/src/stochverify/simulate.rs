use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{sqrtm_spd, Matrix};
use crate::polyfield::{Monomial, PolyVectorField};

/// Euler–Maruyama settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub dt: f64,
    pub n_steps: usize,
    pub n_paths: usize,
    pub burn_in: usize,
    pub seed: u64,
    /// Empty means the origin.
    pub x0: Vec<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { dt: 1e-3, n_steps: 100_000, n_paths: 64, burn_in: 10_000, seed: 0x5eed, x0: Vec::new() }
    }
}

/// Pooled post-burn-in moments.
#[derive(Debug, Clone, Serialize)]
pub struct SimResult {
    pub mean: Vec<f64>,
    pub covariance: Matrix,
    pub n_effective: usize,
    pub diffusion_factor: &'static str,
    pub stability_hint: Option<String>,
}

/// Trajectories leaving this ball are reported as divergent.
pub const DIVERGENCE_RADIUS: f64 = 1e8;

struct CompiledDrift {
    terms: Vec<Vec<(Vec<u32>, f64)>>,
}

impl CompiledDrift {
    fn new(drift: &PolyVectorField) -> Self {
        let terms = drift
            .components()
            .iter()
            .map(|p| p.terms().map(|(m, c)| (m.exps().to_vec(), c)).collect())
            .collect();
        CompiledDrift { terms }
    }

    fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, comp) in out.iter_mut().zip(&self.terms) {
            *o = comp
                .iter()
                .map(|(e, c)| e.iter().zip(x).fold(*c, |acc, (&k, &xi)| if k == 0 { acc } else { acc * xi.powi(k as i32) }))
                .sum();
        }
    }
}

/// Streaming mean and scatter of one path.
#[derive(Clone)]
struct Moments {
    n: usize,
    mean: Vec<f64>,
    m2: Matrix,
}

impl Moments {
    fn new(d: usize) -> Self {
        Moments { n: 0, mean: vec![0.0; d], m2: Matrix::zeros(d, d) }
    }

    fn push(&mut self, x: &[f64], delta: &mut [f64]) {
        self.n += 1;
        let nf = self.n as f64;
        for i in 0..x.len() {
            delta[i] = x[i] - self.mean[i];
            self.mean[i] += delta[i] / nf;
        }
        for (i, (xi, mi)) in x.iter().zip(&self.mean).enumerate() {
            let after = xi - mi;
            for (j, dj) in delta.iter().enumerate() {
                self.m2[(i, j)] += after * dj;
            }
        }
    }

    fn merge(mut self, other: &Moments) -> Moments {
        if other.n == 0 {
            return self;
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        let d = self.mean.len();
        let delta: Vec<f64> = (0..d).map(|i| other.mean[i] - self.mean[i]).collect();
        for i in 0..d {
            for j in 0..d {
                self.m2[(i, j)] += other.m2[(i, j)] + delta[i] * delta[j] * na * nb / n;
            }
            self.mean[i] += delta[i] * nb / n;
        }
        self.n += other.n;
        self
    }
}

fn linear_part_norm(drift: &PolyVectorField) -> f64 {
    let d = drift.dim();
    let jac = Matrix::from_fn(d, d, |i, j| drift.component(i).coeff(&Monomial::var(d, j)));
    jac.norm_fro()
}

fn validate(a: &Matrix, drift: &PolyVectorField, cfg: &SimConfig) -> Result<(usize, Vec<f64>)> {
    let d = a.ensure_square("diffusion")?;
    drift.check_dim(d, "drift")?;
    if !(cfg.dt > 0.0 && cfg.dt.is_finite()) {
        return Err(Error::Precondition(format!("dt must be positive, got {}", cfg.dt)));
    }
    if cfg.n_paths == 0 || cfg.n_steps == 0 {
        return Err(Error::Precondition("n_steps and n_paths must be positive".into()));
    }
    if cfg.burn_in >= cfg.n_steps {
        return Err(Error::Precondition(format!(
            "burn_in {} leaves no samples out of {} steps",
            cfg.burn_in, cfg.n_steps
        )));
    }
    let x0 = if cfg.x0.is_empty() { vec![0.0; d] } else { cfg.x0.clone() };
    if x0.len() != d {
        return Err(Error::DimensionMismatch(format!("x0 has length {}, expected {d}", x0.len())));
    }
    Ok((d, x0))
}

fn run_path(
    path: usize,
    drift: &CompiledDrift,
    sigma: &Matrix,
    cfg: &SimConfig,
    x0: &[f64],
    mut keep: Option<&mut Vec<f64>>,
) -> Result<Moments> {
    let d = x0.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(path as u64);
    let sqrt_dt = cfg.dt.sqrt();
    let mut x = x0.to_vec();
    let mut b = vec![0.0; d];
    let mut xi = vec![0.0; d];
    let mut scratch = vec![0.0; d];
    let mut moments = Moments::new(d);
    for step in 1..=cfg.n_steps {
        drift.eval_into(&x, &mut b);
        for v in xi.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
        }
        for i in 0..d {
            let noise: f64 = (0..d).map(|j| sigma[(i, j)] * xi[j]).sum();
            x[i] += b[i] * cfg.dt + noise * sqrt_dt;
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm.is_nan() || norm > DIVERGENCE_RADIUS {
            return Err(Error::DivergedTrajectory { path, step });
        }
        if step > cfg.burn_in {
            moments.push(&x, &mut scratch);
            if let Some(buf) = keep.as_deref_mut() {
                buf.extend_from_slice(&x);
            }
        }
    }
    Ok(moments)
}

fn simulate(
    a: &Matrix,
    drift: &PolyVectorField,
    cfg: &SimConfig,
    keep_samples: bool,
) -> Result<(SimResult, Vec<Vec<f64>>)> {
    let (d, x0) = validate(a, drift, cfg)?;
    let sigma = sqrtm_spd(a)?;
    let compiled = CompiledDrift::new(drift);
    let per_path: Vec<Result<(Moments, Vec<f64>)>> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|path| {
            let mut buf = Vec::new();
            let keep = keep_samples.then_some(&mut buf);
            run_path(path, &compiled, &sigma, cfg, &x0, keep).map(|m| (m, buf))
        })
        .collect();
    let mut total = Moments::new(d);
    let mut samples = Vec::new();
    for r in per_path {
        let (m, buf) = r?;
        total = total.merge(&m);
        samples.extend(buf.chunks(d).map(<[f64]>::to_vec));
    }
    let denom = (total.n.max(2) - 1) as f64;
    let covariance = total.m2.scale(1.0 / denom).symmetrize();
    let g_norm = linear_part_norm(drift);
    let stability_hint = (cfg.dt * g_norm > 0.5).then(|| {
        format!("dt·‖G‖ = {:.3e} exceeds 0.5; the discretization may be unstable or biased", cfg.dt * g_norm)
    });
    let result = SimResult {
        mean: total.mean,
        covariance,
        n_effective: total.n,
        diffusion_factor: "spd_sqrt",
        stability_hint,
    };
    Ok((result, samples))
}

/// Simulates `X_{k+1} = X_k + b(X_k)dt + √A·√dt·ξ_k` on independent paths and
/// pools post-burn-in states. Results depend only on `cfg`, not on the worker count.
pub fn euler_maruyama(a: &Matrix, drift: &PolyVectorField, cfg: &SimConfig) -> Result<SimResult> {
    simulate(a, drift, cfg, false).map(|(r, _)| r)
}

/// As [`euler_maruyama`], also returning every pooled state in path order.
pub fn euler_maruyama_with_samples(
    a: &Matrix,
    drift: &PolyVectorField,
    cfg: &SimConfig,
) -> Result<(SimResult, Vec<Vec<f64>>)> {
    simulate(a, drift, cfg, true)
}

/// CSV with header `x1,...,xd` and 17 significant digits per value.
pub fn write_samples_csv<W: Write>(mut w: W, dim: usize, samples: &[Vec<f64>]) -> std::io::Result<()> {
    let header: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    writeln!(w, "{}", header.join(","))?;
    for row in samples {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()
}
