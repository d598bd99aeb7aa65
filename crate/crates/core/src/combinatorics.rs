//! Binomials and factorials in floating point.

/// `C(n, k)` as `f64`; exact for every value below 2^53.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, t| acc * (n - t) as f64 / (t + 1) as f64)
}

/// `ln k!`.
pub(crate) fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|t| (t as f64).ln()).sum()
}
