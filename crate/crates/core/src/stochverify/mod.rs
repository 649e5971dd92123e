//! Generator application, quadrature invariance tests and Euler–Maruyama simulation.

mod generator;
mod quadrature;
mod simulate;

pub use generator::generator_apply;
pub use quadrature::{
    gauss_hermite, quadrature_invariance, GaussianRule, InvarianceResult, MonomialValue, MAX_ORDER, MAX_TEST_DEGREE,
};
pub use simulate::{
    euler_maruyama, euler_maruyama_with_samples, write_samples_csv, SimConfig, SimResult, DIVERGENCE_RADIUS,
};
