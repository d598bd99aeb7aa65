//! Double-double arithmetic on Dicke amplitude vectors.
//!
//! Used where `f64` runs out of digits: the closed-form fixed-point
//! coefficients and the late rounds of the protocol iteration, whose
//! subleading components sit far below the `f64` resolution of a unit vector.

use num_complex::{Complex, Complex64};
use twofloat::TwoFloat;

pub(crate) type Cdd = Complex<TwoFloat>;

pub(crate) fn dd(x: f64) -> TwoFloat {
    TwoFloat::from(x)
}

pub(crate) fn cdd(z: Complex64) -> Cdd {
    Complex::new(dd(z.re), dd(z.im))
}

pub(crate) fn to_c64(z: Cdd) -> Complex64 {
    Complex64::new(z.re.into(), z.im.into())
}

pub(crate) fn sqrt_count(k: usize) -> TwoFloat {
    dd(k as f64).sqrt()
}

pub(crate) fn norm_sqr(v: &[Cdd]) -> TwoFloat {
    v.iter()
        .fold(dd(0.0), |acc, z| acc + z.re * z.re + z.im * z.im)
}

/// `a * sqrt(n - i) v_i + b * sqrt(i + 1) v_{i+1}`, the double-double twin
/// of `P1(a, b)`. `v` has `n + 1 >= 2` entries.
pub(crate) fn lower(v: &[Cdd], a: Cdd, b: Cdd) -> Vec<Cdd> {
    let n = v.len() - 1;
    (0..n)
        .map(|i| a * v[i] * sqrt_count(n - i) + b * v[i + 1] * sqrt_count(i + 1))
        .collect()
}

/// Double-double twin of `P2(a, b)`.
pub(crate) fn raise(v: &[Cdd], a: Cdd, b: Cdd) -> Vec<Cdd> {
    let n = v.len() - 1;
    (0..=n + 1)
        .map(|i| {
            let mut acc = Complex::new(dd(0.0), dd(0.0));
            if i <= n {
                acc += a * v[i] * sqrt_count(n + 1 - i);
            }
            if i >= 1 {
                acc += b * v[i - 1] * sqrt_count(i);
            }
            acc
        })
        .collect()
}

pub(crate) fn normalize(v: &[Cdd]) -> Vec<Cdd> {
    let norm = norm_sqr(v).sqrt();
    v.iter()
        .map(|z| Complex::new(z.re / norm, z.im / norm))
        .collect()
}

/// `<u|v>`.
pub(crate) fn inner(u: &[Cdd], v: &[Cdd]) -> Cdd {
    u.iter()
        .zip(v)
        .fold(Complex::new(dd(0.0), dd(0.0)), |acc, (a, b)| {
            acc + a.conj() * b
        })
}
