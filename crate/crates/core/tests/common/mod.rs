//! Shared test-support code: independent oracles used by several suites.
//!
//! Everything in here checks implementations through forward evaluation or
//! reference constructions only, never through the code paths under test.

pub mod dubins_oracle;
pub mod gradient_suite;

#[allow(dead_code)]
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
