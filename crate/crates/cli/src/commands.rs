use std::fs::File;
use std::io::BufWriter;

use drift_hodge::linmeasure::{classify_linear, GaussianMeasure, DEFAULT_INVARIANCE_TOL};
use drift_hodge::matcore::{eigenvalues, tol, Matrix};
use drift_hodge::polyfield::{classify_poly, composite_verdict};
use drift_hodge::riccati::{solve_riccati, spectrum_split, Method, DEFAULT_INTEGRAL_TOL};
use drift_hodge::stochverify::{
    euler_maruyama, euler_maruyama_with_samples, quadrature_invariance, write_samples_csv, SimConfig,
};
use serde_json::{json, Value};

use crate::input::Inputs;
use crate::{CliError, Command, GlobalOpts, MethodArg, Outcome};

/// Default pass threshold of `invariance-test`.
pub const DEFAULT_QUADRATURE_TOL: f64 = 1e-10;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result types serialize")
}

fn method_of(arg: MethodArg) -> Option<Method> {
    match arg {
        MethodArg::Auto => None,
        MethodArg::TwoByTwo => Some(Method::Closed2x2),
        MethodArg::Kron => Some(Method::Kron),
        MethodArg::Integral => Some(Method::Integral),
        MethodArg::Schur => Some(Method::SchurGeneral),
    }
}

pub fn run(command: &Command, global: &GlobalOpts) -> Result<Outcome, CliError> {
    match command {
        Command::Riccati { drift, diffusion, method } => {
            let mut inputs = Inputs::new("riccati");
            let g = inputs.drift("drift", drift)?.matrix()?;
            let a = inputs.matrix("diffusion", diffusion)?;
            inputs.flag("method", format!("{method:?}"));
            let integral_tol = global.tol.unwrap_or(DEFAULT_INTEGRAL_TOL);
            inputs.flag("tol", integral_tol);
            let sol = solve_riccati(&g, &a, method_of(*method), integral_tol)?;
            let spectrum = eigenvalues(&g)?;
            let split = spectrum_split(&spectrum, tol::pair_for(g.norm_fro()));
            let result = json!({
                "S": to_value(&sol.s),
                "method": sol.method.as_str(),
                "eq_residual": sol.eq_residual,
                "trace_residual": sol.trace_residual,
                "hurwitz": sol.hurwitz,
                "s_negative_definite": sol.s_negative_definite,
                "spectrum": spectrum.values.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "sigma0_size": split.sigma0_size(),
                "certified": sol.certified(&g, &a),
            });
            Ok(Outcome { name: "riccati", digest: inputs.digest(), result, warnings: sol.warnings })
        }
        Command::ClassifyLinear { drift, diffusion, potential } => {
            let mut inputs = Inputs::new("classify-linear");
            let g = inputs.drift("drift", drift)?.matrix()?;
            let a = inputs.matrix("diffusion", diffusion)?;
            let rel_tol = global.tol.unwrap_or(DEFAULT_INVARIANCE_TOL);
            inputs.flag("tol", rel_tol);
            let mut warnings = Vec::new();
            let (s, source) = match potential {
                Some(p) => (inputs.matrix("potential", p)?, "input".to_string()),
                None => {
                    let sol = solve_riccati(&g, &a, None, DEFAULT_INTEGRAL_TOL)?;
                    warnings.extend(sol.warnings.iter().cloned());
                    (sol.s, sol.method.as_str().to_string())
                }
            };
            let report = classify_linear(&g, &a, &s, rel_tol)?;
            let measure = GaussianMeasure::new(&s)?;
            warnings.extend(measure.warnings.iter().cloned());
            let result = json!({
                "S": to_value(&s),
                "S_source": source,
                "report": to_value(&report),
                "measure": {
                    "finite": measure.finite,
                    "log_normalizer": measure.log_normalizer,
                    "normalizer": measure.normalizer().ok(),
                },
            });
            Ok(Outcome { name: "classify-linear", digest: inputs.digest(), result, warnings })
        }
        Command::PolyCheck { potential, drift, diffusion, lyapunov } => {
            let mut inputs = Inputs::new("poly-check");
            let phi = inputs.polynomial("potential", potential)?;
            let p = inputs.drift("drift", drift)?.field();
            let a = inputs.matrix("diffusion", diffusion)?;
            inputs.flag("lyapunov", lyapunov);
            let decomposition = classify_poly(&phi, &p, &a)?;
            let mut result = json!({ "decomposition": to_value(&decomposition) });
            if *lyapunov {
                result["composite"] = to_value(&composite_verdict(&phi, &p, &a)?);
            }
            Ok(Outcome { name: "poly-check", digest: inputs.digest(), result, warnings: Vec::new() })
        }
        Command::Measure { potential, at, normalizer, covariance } => {
            let mut inputs = Inputs::new("measure");
            let s = inputs.matrix("potential", potential)?;
            let measure = GaussianMeasure::new(&s)?;
            let mut result = json!({
                "dim": measure.dim(),
                "finite": measure.finite,
                "log_normalizer": measure.log_normalizer,
            });
            if *normalizer {
                result["normalizer"] = json!(measure.normalizer()?);
            }
            if *covariance {
                result["covariance"] = to_value(&measure.covariance()?);
            }
            if let Some(text) = at {
                let x = inputs.vector("at", text)?;
                let log_density = measure.log_density(&x)?;
                result["at"] = json!(x);
                result["log_density"] = json!(log_density);
                result["density"] = json!(log_density.exp());
            }
            Ok(Outcome { name: "measure", digest: inputs.digest(), result, warnings: measure.warnings })
        }
        Command::InvarianceTest { potential, drift, diffusion, max_degree } => {
            let mut inputs = Inputs::new("invariance-test");
            let s = inputs.matrix("potential", potential)?;
            let p = inputs.drift("drift", drift)?.field();
            let a = inputs.matrix("diffusion", diffusion)?;
            inputs.flag("max_degree", max_degree);
            let threshold = global.tol.unwrap_or(DEFAULT_QUADRATURE_TOL);
            inputs.flag("tol", threshold);
            let r = quadrature_invariance(&s, &a, &p, *max_degree)?;
            let mut result = to_value(&r);
            result["tolerance"] = json!(threshold);
            result["pass"] = json!(r.max_abs <= threshold);
            let warnings = r.warnings.clone();
            Ok(Outcome { name: "invariance-test", digest: inputs.digest(), result, warnings })
        }
        Command::Simulate { drift, diffusion, dt, steps, paths, seed, burn_in, x0, potential, dump } => {
            let mut inputs = Inputs::new("simulate");
            let p = inputs.drift("drift", drift)?.field();
            let a = inputs.matrix("diffusion", diffusion)?;
            let x0 = match x0 {
                Some(text) => inputs.vector("x0", text)?,
                None => Vec::new(),
            };
            let cfg = SimConfig { dt: *dt, n_steps: *steps, n_paths: *paths, burn_in: *burn_in, seed: *seed, x0 };
            inputs.flag("config", serde_json::to_string(&cfg).expect("config serializes"));
            let reference = match potential {
                Some(path) => Some(GaussianMeasure::new(&inputs.matrix("potential", path)?)?.covariance()?),
                None => None,
            };
            let sim = match dump {
                Some(path) => {
                    let (sim, samples) = euler_maruyama_with_samples(&a, &p, &cfg)?;
                    let file = File::create(path)
                        .map_err(|source| CliError::Output { path: path.display().to_string(), source })?;
                    write_samples_csv(BufWriter::new(file), p.dim(), &samples)
                        .map_err(|source| CliError::Output { path: path.display().to_string(), source })?;
                    sim
                }
                None => euler_maruyama(&a, &p, &cfg)?,
            };
            let mut result = to_value(&sim);
            result["config"] = to_value(&cfg);
            if let Some(c) = reference {
                result["reference_covariance"] = to_value(&c);
                result["relative_frobenius_error"] = json!(relative_error(&sim.covariance, &c));
            }
            let warnings = sim.stability_hint.iter().cloned().collect();
            Ok(Outcome { name: "simulate", digest: inputs.digest(), result, warnings })
        }
    }
}

fn relative_error(got: &Matrix, want: &Matrix) -> f64 {
    (got - want).norm_fro() / want.norm_fro()
}
