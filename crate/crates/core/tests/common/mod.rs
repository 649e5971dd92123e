//! Seeded generators and property checks shared by the integration suites.
#![allow(dead_code)]

use drift_hodge::linmeasure::{classify_linear, DEFAULT_INVARIANCE_TOL};
use drift_hodge::matcore::{kron, real_schur, spectral_abscissa, symmetric_eigen, unvec, vec, Matrix};
use drift_hodge::polyfield::{
    classify_poly, degree_homogeneous_conditions, gradient, matrix_divergence, whhd_residual, Monomial, PolyMatrix,
    PolyVectorField, Polynomial, EPS_COEFF,
};
use drift_hodge::riccati::{
    riccati_residual, scalar_system_residuals, solve_riccati_2x2, solve_riccati_general, solve_riccati_integral,
    solve_riccati_kron, DEFAULT_INTEGRAL_TOL,
};
use drift_hodge::stochverify::{euler_maruyama, gauss_hermite, quadrature_invariance, SimConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Matrix {
    Matrix::from_fn(r, c, |_, _| rng.random_range(-1.0..1.0))
}

pub fn random_spd(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    let b = random_matrix(rng, d, d);
    (&(&b * &b.transpose()) + &Matrix::identity(d).scale(0.5)).symmetrize()
}

/// Hurwitz with spectral abscissa in `[−1.1, −0.1)`.
pub fn random_hurwitz(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    let m = random_matrix(rng, d, d);
    let shift = spectral_abscissa(&m).unwrap() + 0.1 + rng.random_range(0.0..1.0);
    &m - &Matrix::identity(d).scale(shift)
}

pub fn random_orthogonal(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    let m = random_matrix(rng, d, d);
    symmetric_eigen(&(&m + &m.transpose())).unwrap().vectors
}

pub fn random_poly(rng: &mut ChaCha8Rng, d: usize, max_degree: u32, density: f64) -> Polynomial {
    let mut terms = Vec::new();
    for m in Monomial::all_up_to(d, max_degree) {
        if rng.random_bool(density) {
            terms.push((m, rng.random_range(-2.0..2.0)));
        }
    }
    Polynomial::from_terms(d, terms)
}

pub fn random_antisym(rng: &mut ChaCha8Rng, d: usize, max_degree: u32) -> PolyMatrix {
    let mut c = PolyMatrix::zero(d);
    for i in 0..d {
        for j in (i + 1)..d {
            let p = random_poly(rng, d, max_degree, 0.5);
            c.set(j, i, -&p);
            c.set(i, j, p);
        }
    }
    c
}

fn rel(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).norm_fro() / b.norm_fro().max(f64::MIN_POSITIVE)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `vec(AXB) = (Bᵀ⊗A)vec(X)`.
pub fn vec_identity(seed: u64) -> Check {
    let mut r = rng(seed);
    let (m, n, p, q) = (r.random_range(1..5), r.random_range(1..5), r.random_range(1..5), r.random_range(1..5));
    let a = random_matrix(&mut r, m, n);
    let x = random_matrix(&mut r, n, p);
    let b = random_matrix(&mut r, p, q);
    let lhs = vec(&(&(&a * &x) * &b));
    let rhs = kron(&b.transpose(), &a).matvec(&vec(&x));
    let scale = a.norm_fro() * x.norm_fro() * b.norm_fro();
    let err = lhs.iter().zip(&rhs).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
    ensure(err <= 1e-12 * scale.max(1.0), || format!("vec identity error {err:e}"))?;
    ensure(unvec(&vec(&x), n, p) == x, || "unvec does not invert vec".into())
}

/// `(A⊗B)(C⊗D) = (AC)⊗(BD)`.
pub fn mixed_product(seed: u64) -> Check {
    let mut r = rng(seed);
    let (m, n, k, p, q, s) = (
        r.random_range(1..4),
        r.random_range(1..4),
        r.random_range(1..4),
        r.random_range(1..4),
        r.random_range(1..4),
        r.random_range(1..4),
    );
    let a = random_matrix(&mut r, m, n);
    let b = random_matrix(&mut r, p, q);
    let c = random_matrix(&mut r, n, k);
    let d = random_matrix(&mut r, q, s);
    let lhs = &kron(&a, &b) * &kron(&c, &d);
    let rhs = kron(&(&a * &c), &(&b * &d));
    let scale = a.norm_fro() * b.norm_fro() * c.norm_fro() * d.norm_fro();
    let err = (&lhs - &rhs).norm_fro();
    ensure(err <= 1e-12 * scale.max(1.0), || format!("mixed product error {err:e}"))
}

/// Real Schur form of a random `d ≤ 8` matrix reconstructs `G` with orthogonal `U`.
pub fn schur_reconstruction(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(1..=8);
    let g = random_matrix(&mut r, d, d).scale(r.random_range(0.1..10.0));
    let sf = real_schur(&g).map_err(|e| e.to_string())?;
    let orth = sf.orthogonality_residual();
    let sim = sf.similarity_residual(&g);
    ensure(orth <= 1e-10, || format!("d={d}: orthogonality {orth:e}"))?;
    ensure(sim <= 1e-9 * g.norm_fro(), || format!("d={d}: reconstruction {sim:e}"))?;
    ensure(sf.below_block_residual() == 0.0, || "entries below the block diagonal".into())
}

/// Spectral abscissa is invariant under orthogonal similarity.
pub fn abscissa_invariance(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(1..=6);
    let g = random_matrix(&mut r, d, d);
    let u = random_orthogonal(&mut r, d);
    let h = &(&u.transpose() * &g) * &u;
    let (a0, a1) = (spectral_abscissa(&g).unwrap(), spectral_abscissa(&h).unwrap());
    ensure((a0 - a1).abs() <= 1e-10, || format!("abscissa {a0} vs {a1}"))
}

/// kron, integral, Schur (and closed form for `d = 2`) agree on random Hurwitz pairs.
pub fn cross_method(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(2..=6);
    let g = random_hurwitz(&mut r, d);
    let a = random_spd(&mut r, d);
    let err = |e: drift_hodge::Error| format!("d={d}: {e}");
    let mut sols = vec![
        ("kron", solve_riccati_kron(&g, &a).map_err(err)?.s),
        ("integral", solve_riccati_integral(&g, &a, DEFAULT_INTEGRAL_TOL).map_err(err)?.s),
        ("schur", solve_riccati_general(&g, &a).map_err(err)?.s),
    ];
    if d == 2 {
        sols.push(("closed2x2", solve_riccati_2x2(&g, &a).map_err(err)?.s));
    }
    for (i, (ni, si)) in sols.iter().enumerate() {
        for (nj, sj) in &sols[i + 1..] {
            let diff = (si - sj).max_abs();
            ensure(diff <= 1e-7 * si.norm_fro(), || format!("d={d}: {ni} vs {nj} differ by {diff:e}"))?;
        }
    }
    Ok(())
}

/// Every general solution meets the residual certificate.
pub fn general_certificate(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(1..=6);
    let g = random_matrix(&mut r, d, d).scale(2.0);
    let a = random_spd(&mut r, d);
    let sol = solve_riccati_general(&g, &a).map_err(|e| format!("d={d}: {e}"))?;
    let (be, bt) = sol.certificate_bounds(&g, &a);
    ensure(sol.certified(&g, &a), || {
        format!("d={d}: residuals ({:e}, {:e}) exceed ({be:e}, {bt:e})", sol.eq_residual, sol.trace_residual)
    })
}

/// Hurwitz drifts give negative definite `S`, and `(−P)⁻¹` solves the Riccati equation.
pub fn hurwitz_negative_definite(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(1..=6);
    let g = random_hurwitz(&mut r, d);
    let a = random_spd(&mut r, d);
    let sol = solve_riccati_kron(&g, &a).map_err(|e| e.to_string())?;
    let (eq, tr) = riccati_residual(&sol.s, &g, &a).unwrap();
    let scale = sol.s.norm_fro().powi(2) * a.norm_fro() + sol.s.norm_fro() * g.norm_fro() + g.norm_fro();
    ensure(eq <= 1e-9 * scale && tr <= 1e-9 * scale, || format!("d={d}: residuals {eq:e}, {tr:e}"))?;
    let top = symmetric_eigen(&sol.s).unwrap().values[d - 1];
    ensure(top < 0.0 && sol.s_negative_definite, || format!("d={d}: largest eigenvalue of S is {top:e}"))
}

/// The scalar system holds for Riccati solutions and fails for perturbed `S`.
pub fn scalar_system(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(1..=4);
    let g = random_matrix(&mut r, d, d).scale(2.0);
    let a = random_spd(&mut r, d);
    let s = solve_riccati_general(&g, &a).map_err(|e| e.to_string())?.s;
    let scale = (s.norm_fro() * (g.norm_fro() + a.norm_fro() * s.norm_fro())).max(1.0);
    let res = scalar_system_residuals(&s, &g, &a).unwrap();
    let worst = res.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    ensure(worst <= 1e-10 * scale, || format!("d={d}: scalar system residual {worst:e}"))?;
    let bump = random_matrix(&mut r, d, d);
    let s2 = &s + &(&bump + &bump.transpose()).scale(0.25);
    let res2 = scalar_system_residuals(&s2, &g, &a).unwrap();
    let worst2 = res2.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let (eq2, tr2) = riccati_residual(&s2, &g, &a).unwrap();
    let solves = eq2 <= 1e-10 * scale && tr2 <= 1e-10 * scale;
    ensure(solves == (worst2 <= 1e-10 * scale), || format!("d={d}: scalar system and Riccati residual disagree"))
}

/// The general solution is always infinitesimally invariant.
pub fn linear_invariance(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(1..=6);
    let g = random_matrix(&mut r, d, d).scale(2.0);
    let a = random_spd(&mut r, d);
    let s = solve_riccati_general(&g, &a).map_err(|e| e.to_string())?.s;
    let rep = classify_linear(&g, &a, &s, DEFAULT_INVARIANCE_TOL).map_err(|e| e.to_string())?;
    ensure(rep.invariant, || format!("d={d}: residuals {:e}, {:e}", rep.sym_residual, rep.trace_residual))
}

/// `S + (G − AS)` is Hurwitz for Hurwitz `G`.
pub fn g_tilde_hurwitz(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(1..=6);
    let g = random_hurwitz(&mut r, d);
    let a = random_spd(&mut r, d);
    let s = solve_riccati_kron(&g, &a).map_err(|e| e.to_string())?.s;
    let rep = classify_linear(&g, &a, &s, DEFAULT_INVARIANCE_TOL).map_err(|e| e.to_string())?;
    let ab = spectral_abscissa(&rep.g_tilde).unwrap();
    ensure(ab < 0.0, || format!("d={d}: abscissa of g_tilde is {ab:e}"))
}

/// `⟨Sx, Hx⟩ ≡ 0` on random points.
pub fn orthogonality_witness(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(1..=6);
    let g = random_matrix(&mut r, d, d).scale(2.0);
    let a = random_spd(&mut r, d);
    let s = solve_riccati_general(&g, &a).map_err(|e| e.to_string())?.s;
    let h = &g - &(&a * &s);
    let scale = (s.norm_fro() * h.norm_fro()).max(1.0);
    for _ in 0..100 {
        let x: Vec<f64> = (0..d).map(|_| r.random_range(-3.0..3.0)).collect();
        let sx = s.matvec(&x);
        let hx = h.matvec(&x);
        let ip: f64 = sx.iter().zip(&hx).map(|(u, v)| u * v).sum();
        let n2: f64 = x.iter().map(|v| v * v).sum();
        ensure(ip.abs() / (n2 * scale) <= 1e-10, || format!("d={d}: ⟨Sx,Hx⟩ = {ip:e}"))?;
    }
    Ok(())
}

/// `⟨Cᵀ∇Φ, ∇Φ⟩ ≡ 0` and `div(div C) ≡ 0` for antisymmetric `C`.
pub fn antisymmetry_identities(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(2..=3);
    let phi = random_poly(&mut r, d, 3, 0.6);
    let c = random_antisym(&mut r, d, 2);
    let grad = gradient(&phi);
    let ip = c.transpose_apply(&grad).dot(&grad);
    let ip_scale = c.abs().transpose_apply(&grad.abs()).dot(&grad.abs()).max_abs_coeff();
    ensure(ip.is_zero_within(EPS_COEFF * ip_scale.max(1.0)), || format!("⟨Cᵀ∇Φ,∇Φ⟩ = {ip}"))?;
    let dd = matrix_divergence(&c).divergence();
    ensure(dd.is_zero_within(EPS_COEFF * c.abs().divergence().divergence().max_abs_coeff().max(1.0)), || {
        format!("div(div C) = {dd}")
    })
}

/// `A∇Φ + Cᵀ∇Φ + ½div C` always leaves `e^{2Φ}dx` invariant.
pub fn beta_field_invariance(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(2..=3);
    let phi = random_poly(&mut r, d, 4, 0.5);
    let c = random_antisym(&mut r, d, 2);
    let a = random_spd(&mut r, d);
    let grad = gradient(&phi);
    let drift = grad.apply_matrix(&a).add(&c.transpose_apply(&grad)).add(&matrix_divergence(&c).scale(0.5));
    let res = whhd_residual(&phi, &drift, &a).map_err(|e| e.to_string())?;
    ensure(res.is_zero(), || format!("residual {res}"))
}

fn implication_holds(phi: &Polynomial, drift: &PolyVectorField, a: &Matrix) -> Check {
    let rep = classify_poly(phi, drift, a).map_err(|e| e.to_string())?;
    ensure(!rep.sohhd || rep.ohhd, || "sohhd without ohhd".into())?;
    ensure(!rep.ohhd || rep.whhd, || "ohhd without whhd".into())?;
    ensure(!(rep.whhd && rep.div_b.is_zero()) || rep.orth.is_zero(), || "whhd and div B ≡ 0 but ⟨∇Φ,B⟩ ≢ 0".into())
}

/// `sohhd ⇒ ohhd ⇒ whhd` and `whhd ∧ div B ≡ 0 ⇒ ⟨∇Φ,B⟩ ≡ 0` on mixed constructions.
pub fn implication_chain(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(2..=3);
    let phi = random_poly(&mut r, d, 3, 0.6);
    let a = random_spd(&mut r, d);
    let grad = gradient(&phi);
    let c = random_antisym(&mut r, d, 1);
    let k = random_matrix(&mut r, d, d);
    let k = &k - &k.transpose();
    let candidates = [
        grad.apply_matrix(&a),
        grad.apply_matrix(&a).add(&c.transpose_apply(&grad)).add(&matrix_divergence(&c).scale(0.5)),
        grad.apply_matrix(&a).add(&grad.apply_matrix(&k)),
        PolyVectorField::new(d, (0..d).map(|_| random_poly(&mut r, d, 2, 0.5)).collect()).unwrap(),
    ];
    candidates.iter().try_for_each(|p| implication_holds(&phi, p, &a))
}

/// Summing the per-degree conditions reproduces the WHHD residual.
pub fn sum_consistency(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(1..=3);
    let phi = random_poly(&mut r, d, 3, 0.6);
    let a = random_spd(&mut r, d);
    let drift = PolyVectorField::new(d, (0..d).map(|_| random_poly(&mut r, d, 3, 0.5)).collect()).unwrap();
    let b = drift.sub(&gradient(&phi).apply_matrix(&a));
    let parts = degree_homogeneous_conditions(&phi, &b).map_err(|e| e.to_string())?;
    let sum = parts.iter().fold(Polynomial::zero(d), |acc, p| &acc + p);
    let res = whhd_residual(&phi, &drift, &a).map_err(|e| e.to_string())?;
    let scale = phi.max_abs_coeff().max(1.0) * b.max_abs_coeff().max(1.0) * 10.0;
    let diff = &sum - &res;
    ensure(diff.is_zero_within(EPS_COEFF * scale), || format!("difference {diff}"))
}

/// For `Φ = ½⟨x,Sx⟩` and drift `Gx`, `whhd_residual ≡ 0` iff the Riccati residuals vanish.
pub fn linear_embedding(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(1..=4);
    let g = random_matrix(&mut r, d, d).scale(2.0);
    let a = random_spd(&mut r, d);
    let s = solve_riccati_general(&g, &a).map_err(|e| e.to_string())?.s;
    let drift = PolyVectorField::linear(&g);
    for (label, s) in [("solution", s.clone()), ("perturbed", &s + &Matrix::identity(d).scale(-0.3))] {
        let phi = Polynomial::quadratic_form(&s).scale(0.5);
        let poly_zero = whhd_residual(&phi, &drift, &a).map_err(|e| e.to_string())?.is_zero();
        let (eq, tr) = riccati_residual(&s, &g, &a).unwrap();
        let scale = s.norm_fro().powi(2) * a.norm_fro() + s.norm_fro() * g.norm_fro() + g.norm_fro();
        let riccati_zero = eq <= 1e-10 * scale && tr <= 1e-10 * scale;
        ensure(poly_zero == riccati_zero, || {
            format!("d={d} {label}: polynomial residual zero = {poly_zero}, Riccati residuals {eq:e}, {tr:e}")
        })?;
    }
    Ok(())
}

/// Gauss–Hermite rules integrate `z^{2k}` exactly for `2k ≤ 2n − 1`.
pub fn hermite_exactness(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.random_range(1..=20);
    let (x, w) = gauss_hermite(n);
    let k = r.random_range(0..n);
    let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(2 * k as i32)).sum();
    let want: f64 = (1..=k).map(|j| (2 * j - 1) as f64).product();
    ensure((got - want).abs() <= 1e-12 * want, || format!("n={n}, k={k}: {got} vs {want}"))
}

/// WHHD with negative definite `S` implies vanishing quadrature invariance integrals.
pub fn quadrature_consistency(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(1..=3);
    let g = random_hurwitz(&mut r, d);
    let a = random_spd(&mut r, d);
    let s = solve_riccati_kron(&g, &a).map_err(|e| e.to_string())?.s;
    let drift = PolyVectorField::linear(&g);
    let phi = Polynomial::quadratic_form(&s).scale(0.5);
    let rep = classify_poly(&phi, &drift, &a).map_err(|e| e.to_string())?;
    ensure(rep.whhd, || format!("d={d}: residual {}", rep.residual))?;
    let inv = quadrature_invariance(&s, &a, &drift, 3).map_err(|e| e.to_string())?;
    ensure(inv.max_abs <= 1e-8, || format!("d={d}: max_abs {:e}", inv.max_abs))
}

/// Identical configurations give identical moments.
pub fn simulation_determinism(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(1..=3);
    let g = random_hurwitz(&mut r, d);
    let a = random_spd(&mut r, d);
    let drift = PolyVectorField::linear(&g);
    let cfg = SimConfig { dt: 1e-2, n_steps: 200, n_paths: 3, burn_in: 50, seed, x0: vec![] };
    let one = euler_maruyama(&a, &drift, &cfg).map_err(|e| e.to_string())?;
    let two = euler_maruyama(&a, &drift, &cfg).map_err(|e| e.to_string())?;
    ensure(one.mean == two.mean && one.covariance == two.covariance, || "moments differ between runs".into())
}

/// Runs `check` on `count` consecutive seeds and collects failures.
pub fn sweep(count: u64, check: fn(u64) -> Check) -> Vec<(u64, String)> {
    (0..count).filter_map(|s| check(s).err().map(|e| (s, e))).collect()
}
