//! Central finite-difference gradient checking.
//!
//! This is the independent oracle used by the test suites: it only ever
//! calls the forward pass, so it stays decoupled from the backward
//! implementation it verifies. Differences are accumulated in f64.

/// Central finite-difference gradient of `f` at `x` with step `h`.
///
/// `f` receives a perturbed copy of `x` and must return the scalar loss
/// accumulated in f64.
pub fn finite_diff<F: FnMut(&[f32]) -> f64>(mut f: F, x: &[f32], h: f32) -> Vec<f64> {
    let mut grad = vec![0.0f64; x.len()];
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        let orig = probe[i];
        // f32 rounding shifts the nominal step; divide by the realized one.
        let plus = orig + h;
        let minus = orig - h;
        probe[i] = plus;
        let fp = f(&probe);
        probe[i] = minus;
        let fm = f(&probe);
        probe[i] = orig;
        grad[i] = (fp - fm) / (f64::from(plus) - f64::from(minus));
    }
    grad
}

/// Max relative error between an analytic gradient and a finite-difference
/// reference.
///
/// The denominator is floored at a few percent of the largest reference
/// entry: the f32 forward pass limits the absolute accuracy of the central
/// difference, so near-zero entries are held to an absolute tolerance at
/// that scale while every significant entry gets the full relative check.
pub fn max_rel_err(analytic: &[f32], reference: &[f64]) -> f64 {
    assert_eq!(analytic.len(), reference.len(), "gradient length mismatch");
    let scale = reference
        .iter()
        .map(|r| r.abs())
        .fold(0.0f64, f64::max)
        .max(
            analytic
                .iter()
                .map(|a| f64::from(a.abs()))
                .fold(0.0f64, f64::max),
        );
    let floor = (0.05 * scale).max(1e-4);
    let mut worst = 0.0f64;
    for (&a, &r) in analytic.iter().zip(reference) {
        let a = f64::from(a);
        let denom = a.abs().max(r.abs()).max(floor);
        let err = (a - r).abs() / denom;
        if err > worst {
            worst = err;
        }
    }
    worst
}
