//! Krawtchouk polynomials `K_i(x; p, n)`.
//!
//! The polynomials are the terminating hypergeometric series
//! `2F1(-i, -x; -n; 1/p)`. They are evaluated here through the three-term
//! recurrence in the degree `i`,
//!
//! ```text
//! -x K_i = p(n-i) K_{i+1} - [p(n-i) + i(1-p)] K_i + i(1-p) K_{i-1},
//! ```
//!
//! seeded with `K_0 = 1`. The recurrence costs `O(n)` for a whole row
//! `(K_0(x), ..., K_n(x))`, which is how the Dicke-basis transforms consume
//! the polynomials.

use std::ops::{Add, Div, Mul, Sub};

use num_complex::{Complex, Complex64};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

/// Parameters `(p, n)` of the family `K_i(x; p, n)`, with `0 < p < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrawtchoukParams {
    p: f64,
    n: usize,
}

impl KrawtchoukParams {
    pub fn new(p: f64, n: usize) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Krawtchouk parameter p = {p} must lie in (0, 1)"
            )));
        }
        Ok(Self { p, n })
    }

    /// The symmetric family `p = 1/2`, the one tied to the hypercube.
    pub fn half(n: usize) -> Self {
        Self { p: 0.5, n }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// `K_i(x; p, n)` for `0 <= i <= n` and any real `x`.
pub fn krawtchouk(i: usize, x: f64, params: &KrawtchoukParams) -> Result<f64> {
    if i > params.n {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: params.n,
        });
    }
    let row = recurrence(x, params.p, params.n, i);
    Ok(row[i])
}

/// The row `(K_0(j), K_1(j), ..., K_n(j))` for an integer argument `j`.
pub fn krawtchouk_row(j: usize, params: &KrawtchoukParams) -> Result<Vec<f64>> {
    if j > params.n {
        return Err(Error::IndexOutOfRange {
            index: j,
            max: params.n,
        });
    }
    Ok(recurrence(j as f64, params.p, params.n, params.n))
}

/// Row `(K_0(j), ..., K_n(j))` for a complex parameter `p != 0`.
///
/// The fixed points of the composed protocols need `p = βδ/(αγ+βδ)`, which
/// is complex in general. The recurrence is accumulated in double-double
/// precision: in plain `f64` it loses every significant digit by `n ≈ 10`
/// for parameters away from `p = 1/2`.
pub fn krawtchouk_row_complex(j: usize, p: Complex64, n: usize) -> Result<Vec<Complex64>> {
    if j > n {
        return Err(Error::IndexOutOfRange { index: j, max: n });
    }
    Ok(krawtchouk_row_extended(j, p, n)?
        .into_iter()
        .map(|z| Complex64::new(z.re.into(), z.im.into()))
        .collect())
}

pub(crate) fn krawtchouk_row_extended(
    j: usize,
    p: Complex64,
    n: usize,
) -> Result<Vec<Complex<TwoFloat>>> {
    if p.norm() == 0.0 || !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Krawtchouk parameter p = {p} must be finite and nonzero"
        )));
    }
    let p = Complex::new(TwoFloat::from(p.re), TwoFloat::from(p.im));
    Ok(recurrence(Complex::from(TwoFloat::from(j as f64)), p, n, n))
}

/// Scalars the recurrence can run over.
pub(crate) trait RecurrenceScalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn from_f64(v: f64) -> Self;
}

impl RecurrenceScalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
}

impl RecurrenceScalar for Complex64 {
    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
}

impl RecurrenceScalar for Complex<TwoFloat> {
    fn from_f64(v: f64) -> Self {
        Complex::new(TwoFloat::from(v), TwoFloat::from(0.0))
    }
}

/// `K_0(x), ..., K_upto(x)`. Requires `upto <= n` and `p != 0`.
fn recurrence<T: RecurrenceScalar>(x: T, p: T, n: usize, upto: usize) -> Vec<T> {
    let one = T::from_f64(1.0);
    let q = one - p;
    let mut row = Vec::with_capacity(upto + 1);
    row.push(one);
    let mut prev = T::from_f64(0.0);
    for i in 0..upto {
        let fi = T::from_f64(i as f64);
        let lead = p * T::from_f64((n - i) as f64);
        let cur = row[i];
        let next = ((lead + fi * q - x) * cur - fi * q * prev) / lead;
        prev = cur;
        row.push(next);
    }
    row
}
