//! Digamma function via upward recurrence plus the asymptotic series.

/// Digamma (psi) for positive real arguments.
///
/// Arguments below 10 are raised with psi(x) = psi(x+1) - 1/x, then the
/// Stirling-type series is applied. Absolute error is below 1e-12 on
/// [1, 1e6], checked against high-precision references in the tests.
pub fn digamma(mut x: f64) -> f64 {
    assert!(x > 0.0, "digamma requires a positive argument, got {x}");
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // psi(x) ~ ln x - 1/(2x) - sum B_2n / (2n x^2n)
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    acc + x.ln() - 0.5 * inv - series
}
