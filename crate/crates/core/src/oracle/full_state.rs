//! Dense `2^m` statevectors.
//!
//! Qubit `0` is the leftmost tensor factor, the `x_1` below, and the most
//! significant bit of the basis index, so `|x_1 x_2 ... x_m>` sits at index
//! `x_1 2^{m-1} + ... + x_m`.

use num_complex::Complex64;

use crate::algebra::GateParams;
use crate::combinatorics::binomial;
use crate::dicke_space::SymmetricState;
use crate::error::{Error, Result};
use crate::rng::ProtocolRng;

/// Largest register the oracle will allocate.
pub const MAX_QUBITS: usize = 14;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn check_size(m: usize) -> Result<()> {
    if m > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            requested: m,
            cap: MAX_QUBITS,
        });
    }
    Ok(())
}

/// How a measurement picks its outcome.
pub enum Readout<'a> {
    /// Report the given outcome with its exact probability.
    Force(u8),
    Sample(&'a mut ProtocolRng),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub outcome: u8,
    pub probability: f64,
    /// Renormalized state with the measured qubit still present.
    pub post: FullState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl FullState {
    pub fn new(num_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_size(num_qubits)?;
        if amps.len() != 1 << num_qubits {
            return Err(Error::AmplitudeCount {
                expected: 1 << num_qubits,
                actual: amps.len(),
            });
        }
        Ok(Self { num_qubits, amps })
    }

    /// Computational basis state `|index>`.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        check_size(num_qubits)?;
        if index >= 1 << num_qubits {
            return Err(Error::IndexOutOfRange {
                index,
                max: (1 << num_qubits) - 1,
            });
        }
        let mut amps = vec![re(0.0); 1 << num_qubits];
        amps[index] = re(1.0);
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_size(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        let denom = self.norm_sqr() * other.norm_sqr();
        if denom == 0.0 {
            return Err(Error::DegenerateState("fidelity with the zero vector"));
        }
        Ok(self.inner(other)?.norm_sqr() / denom)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            num_qubits: self.num_qubits,
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::DegenerateState("cannot normalize the zero vector"));
        }
        Ok(self.scaled(re(1.0 / norm)))
    }

    /// Bit mask of qubit `q` within a basis index.
    pub fn mask(&self, q: usize) -> usize {
        1 << (self.num_qubits - 1 - q)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::IndexOutOfRange {
                index: q,
                max: self.num_qubits.saturating_sub(1),
            });
        }
        Ok(())
    }

    fn same_size(&self, other: &Self) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(())
    }

    /// Apply a 2x2 matrix (rows, then columns) to qubit `q`.
    pub fn apply_matrix(&mut self, q: usize, m: &[[Complex64; 2]; 2]) -> Result<()> {
        self.check_qubit(q)?;
        let bit = self.mask(q);
        for idx in 0..self.amps.len() {
            if idx & bit == 0 {
                let (a0, a1) = (self.amps[idx], self.amps[idx | bit]);
                self.amps[idx] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[idx | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    /// `U(first, second) = [[a, b], [b*, -a*]]` on qubit `q`.
    pub fn apply_gate(&self, q: usize, g: &GateParams) -> Result<Self> {
        let mut out = self.clone();
        out.apply_matrix(q, &g.gate_matrix())?;
        Ok(out)
    }

    pub fn swap(&mut self, a: usize, b: usize) -> Result<()> {
        self.controlled_swap(None, a, b)
    }

    /// Fredkin gate: swap qubits `a` and `b` where `control` (if any) is `1`.
    pub fn controlled_swap(&mut self, control: Option<usize>, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if let Some(c) = control {
            self.check_qubit(c)?;
        }
        if a == b {
            return Ok(());
        }
        let (ma, mb) = (self.mask(a), self.mask(b));
        let mc = control.map(|c| self.mask(c));
        for idx in 0..self.amps.len() {
            if mc.is_some_and(|m| idx & m == 0) {
                continue;
            }
            // visit each swapped pair once, from its (a=1, b=0) end
            if idx & ma != 0 && idx & mb == 0 {
                let partner = (idx & !ma) | mb;
                self.amps.swap(idx, partner);
            }
        }
        Ok(())
    }

    /// Probability that qubit `q` reads `outcome`.
    pub fn outcome_probability(&self, q: usize, outcome: u8) -> Result<f64> {
        self.check_qubit(q)?;
        let bit = self.mask(q);
        let want = if outcome == 0 { 0 } else { bit };
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx & bit == want)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Projective measurement of qubit `q` in the computational basis.
    pub fn measure(&self, q: usize, readout: Readout<'_>) -> Result<Measurement> {
        let p0 = self.outcome_probability(q, 0)?;
        let total = self.norm_sqr();
        let outcome = match readout {
            Readout::Force(o) => o.min(1),
            Readout::Sample(rng) => u8::from(rng.uniform() * total >= p0),
        };
        let probability = if outcome == 0 { p0 } else { total - p0 } / total;
        if probability <= 0.0 {
            return Err(Error::ZeroProbabilityBranch);
        }
        let bit = self.mask(q);
        let want = if outcome == 0 { 0 } else { bit };
        let mut post = self.clone();
        for (idx, a) in post.amps.iter_mut().enumerate() {
            if idx & bit != want {
                *a = re(0.0);
            }
        }
        Ok(Measurement {
            outcome,
            probability,
            post: post.normalized()?,
        })
    }

    /// Drop qubit `q`, keeping the amplitudes where it reads `value`.
    /// Exact when the qubit is already in that basis state.
    pub fn remove_qubit(&self, q: usize, value: u8) -> Result<Self> {
        self.check_qubit(q)?;
        let m = self.num_qubits;
        let low_bits = m - 1 - q;
        let mut amps = Vec::with_capacity(1 << (m - 1));
        for reduced in 0..1usize << (m - 1) {
            let high = reduced >> low_bits;
            let low = reduced & ((1 << low_bits) - 1);
            let idx = (high << (low_bits + 1)) | ((value as usize & 1) << low_bits) | low;
            amps.push(self.amps[idx]);
        }
        Ok(Self {
            num_qubits: m - 1,
            amps,
        })
    }

    /// `self ⊗ (c0|0> + c1|1>)`, new qubit last.
    pub fn append_qubit(&self, c0: Complex64, c1: Complex64) -> Result<Self> {
        check_size(self.num_qubits + 1)?;
        let mut amps = Vec::with_capacity(self.amps.len() * 2);
        for &a in &self.amps {
            amps.push(a * c0);
            amps.push(a * c1);
        }
        Ok(Self {
            num_qubits: self.num_qubits + 1,
            amps,
        })
    }

    /// `|anc> ⊗ self` with `k` fresh qubits in `|0>` on the left.
    pub fn prepend_zeros(&self, k: usize) -> Result<Self> {
        check_size(self.num_qubits + k)?;
        let mut amps = vec![re(0.0); self.amps.len() << k];
        amps[..self.amps.len()].copy_from_slice(&self.amps);
        Ok(Self {
            num_qubits: self.num_qubits + k,
            amps,
        })
    }
}

/// `sum_i ψ_i C(n,i)^{-1/2} sum_{|x| = i} |x>`.
pub fn embed(state: &SymmetricState) -> Result<FullState> {
    let n = state.n();
    check_size(n)?;
    let weights: Vec<Complex64> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, &a)| a / binomial(n, i).sqrt())
        .collect();
    let amps = (0..1usize << n)
        .map(|x| weights[x.count_ones() as usize])
        .collect();
    FullState::new(n, amps)
}

/// Component of `full` in the span of the embedded Dicke states, and the
/// norm of what is left over.
pub fn project_symmetric(full: &FullState) -> (SymmetricState, f64) {
    let n = full.num_qubits();
    let mut sums = vec![re(0.0); n + 1];
    for (x, &a) in full.amplitudes().iter().enumerate() {
        sums[x.count_ones() as usize] += a;
    }
    let psi: Vec<Complex64> = sums
        .iter()
        .enumerate()
        .map(|(i, &s)| s / binomial(n, i).sqrt())
        .collect();
    let per_string: Vec<Complex64> = sums
        .iter()
        .enumerate()
        .map(|(i, &s)| s / binomial(n, i))
        .collect();
    let residual = full
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(x, &a)| (a - per_string[x.count_ones() as usize]).norm_sqr())
        .sum::<f64>()
        .sqrt();
    (
        SymmetricState::new(n, psi).expect("n + 1 amplitudes"),
        residual,
    )
}
