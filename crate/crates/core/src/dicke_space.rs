//! Permutation-symmetric states in the Dicke basis.
//!
//! A symmetric `n`-qubit state is stored as its `n + 1` amplitudes on the
//! orthonormal Dicke basis `|D_n^0>, ..., |D_n^n>`, where `|D_n^i>` is the
//! equal-weight superposition of all bitstrings with `i` ones. States on
//! different qubit counts never share a value; every operator that changes
//! the qubit count returns a state tagged with the new `n`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Tolerance used by [`SymmetricState::is_normalized`].
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Label `(n, i)` of the Dicke state `|D_n^i>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DickeIndex {
    n: usize,
    i: usize,
}

impl DickeIndex {
    pub fn new(n: usize, i: usize) -> Result<Self> {
        if i > n {
            return Err(Error::IndexOutOfRange { index: i, max: n });
        }
        Ok(Self { n, i })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn i(&self) -> usize {
        self.i
    }
}

/// A (possibly unnormalized) vector of the symmetric subspace on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricState {
    n: usize,
    amps: Vec<Complex64>,
}

impl SymmetricState {
    /// Build a state from `n + 1` Dicke amplitudes.
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != n + 1 {
            return Err(Error::AmplitudeCount {
                expected: n + 1,
                actual: amps.len(),
            });
        }
        Ok(Self { n, amps })
    }

    /// Real amplitudes; the qubit count is `amps.len() - 1`.
    pub fn from_real(amps: &[f64]) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::AmplitudeCount {
                expected: 1,
                actual: 0,
            });
        }
        Ok(Self {
            n: amps.len() - 1,
            amps: amps.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
        })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            amps: vec![Complex64::new(0.0, 0.0); n + 1],
        }
    }

    /// `|D_0^0>`, the state with no qubits.
    pub fn vacuum() -> Self {
        Self {
            n: 0,
            amps: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn dicke(idx: DickeIndex) -> Self {
        let mut state = Self::zero(idx.n);
        state.amps[idx.i] = Complex64::new(1.0, 0.0);
        state
    }

    /// Unitarily invariant random state: i.i.d. complex Gaussian amplitudes,
    /// normalized.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let amps: Vec<Complex64> = (0..=n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let state = Self { n, amps };
            if let Ok((unit, _)) = state.normalized() {
                return unit;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, i: usize) -> Complex64 {
        self.amps[i]
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized {
                norm_sqr: self.norm_sqr(),
            })
        }
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_n(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<a|b>|^2 / (<a|a><b|b>)`: overlap of the two rays.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        let overlap = self.inner(other)?;
        let denom = self.norm_sqr() * other.norm_sqr();
        if denom == 0.0 {
            return Err(Error::DegenerateState("fidelity with the zero vector"));
        }
        Ok(overlap.norm_sqr() / denom)
    }

    /// Unit-norm copy together with the original norm.
    pub fn normalized(&self) -> Result<(Self, f64)> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::DegenerateState("cannot normalize the zero vector"));
        }
        Ok((self.scaled(Complex64::new(1.0 / norm, 0.0)), norm))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            n: self.n,
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        self.same_n(other)?;
        Ok(Self {
            n: self.n,
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    /// Largest amplitude modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_n(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }

    /// Same ray with the first non-negligible amplitude made positive real.
    pub fn with_canonical_phase(&self) -> Self {
        let scale = self.amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
        match self.amps.iter().find(|a| a.norm() > 1e-10 * scale) {
            Some(lead) => self.scaled(lead.conj() / lead.norm()),
            None => self.clone(),
        }
    }

    fn same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

pub fn dicke_state(idx: DickeIndex) -> SymmetricState {
    SymmetricState::dicke(idx)
}

pub fn inner_product(a: &SymmetricState, b: &SymmetricState) -> Result<Complex64> {
    a.inner(b)
}

/// Coefficients of `|D_n^i> = c1 |D_{n-1}^{i-1}>|1> + c0 |D_{n-1}^i>|0>`,
/// returned as `(c1, c0) = (sqrt(i/n), sqrt((n-i)/n))`.
pub fn last_qubit_split_coeffs(idx: DickeIndex) -> Result<(f64, f64)> {
    if idx.n == 0 {
        return Err(Error::NoQubit);
    }
    let n = idx.n as f64;
    let i = idx.i as f64;
    Ok(((i / n).sqrt(), ((n - i) / n).sqrt()))
}

pub fn normalize(state: &SymmetricState) -> Result<(SymmetricState, f64)> {
    state.normalized()
}
