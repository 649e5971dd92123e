mod common;

use common::*;
use drift_hodge::polyfield::{Monomial, Polynomial};
use proptest::prelude::*;

const SEEDS: u64 = 128;

fn assert_sweep(check: fn(u64) -> Check) {
    let failures = sweep(SEEDS, check);
    assert!(failures.is_empty(), "{} failing seeds, first: {:?}", failures.len(), failures.first());
}

#[test]
fn kron_vec_identity() {
    assert_sweep(vec_identity);
}

#[test]
fn kron_mixed_product() {
    assert_sweep(mixed_product);
}

#[test]
fn schur_reconstructs_random_matrices() {
    assert_sweep(schur_reconstruction);
}

#[test]
fn abscissa_is_similarity_invariant() {
    assert_sweep(abscissa_invariance);
}

#[test]
fn riccati_methods_agree() {
    assert_sweep(cross_method);
}

#[test]
fn riccati_general_certificate() {
    assert_sweep(general_certificate);
}

#[test]
fn riccati_hurwitz_negative_definite() {
    assert_sweep(hurwitz_negative_definite);
}

#[test]
fn riccati_scalar_system_equivalence() {
    assert_sweep(scalar_system);
}

#[test]
fn linear_general_solution_is_invariant() {
    assert_sweep(linear_invariance);
}

#[test]
fn linear_g_tilde_is_hurwitz() {
    assert_sweep(g_tilde_hurwitz);
}

#[test]
fn linear_orthogonality_witness() {
    assert_sweep(orthogonality_witness);
}

#[test]
fn poly_antisymmetry_identities() {
    assert_sweep(antisymmetry_identities);
}

#[test]
fn poly_beta_field_invariance() {
    assert_sweep(beta_field_invariance);
}

#[test]
fn poly_implication_chain() {
    assert_sweep(implication_chain);
}

#[test]
fn poly_degree_conditions_sum() {
    assert_sweep(sum_consistency);
}

#[test]
fn poly_linear_embedding() {
    assert_sweep(linear_embedding);
}

#[test]
fn quadrature_hermite_exactness() {
    assert_sweep(hermite_exactness);
}

#[test]
fn quadrature_consistency_chain() {
    assert_sweep(quadrature_consistency);
}

#[test]
fn simulation_is_deterministic() {
    assert_sweep(simulation_determinism);
}

fn arb_poly(dim: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..3, dim), -4i32..5), 0..6).prop_map(move |terms| {
        Polynomial::from_terms(dim, terms.into_iter().map(|(e, c)| (Monomial::new(e), f64::from(c))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn poly_ring_laws(p in arb_poly(2), q in arb_poly(2), r in arb_poly(2)) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn poly_leibniz_rule(p in arb_poly(3), q in arb_poly(3), axis in 0usize..3) {
        let lhs = (&p * &q).partial(axis);
        let rhs = &(&p.partial(axis) * &q) + &(&p * &q.partial(axis));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn poly_eval_is_multiplicative(p in arb_poly(2), q in arb_poly(2), x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let pt = [x, y];
        let lhs = (&p * &q).eval(&pt);
        let rhs = p.eval(&pt) * q.eval(&pt);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn poly_json_round_trip(p in arb_poly(3)) {
        let text = serde_json::to_string(&p).unwrap();
        let back: Polynomial = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, p);
    }
}
