//! Phase estimation of the cyclic qubit permutation `σ`, used to tell the
//! maximal total angular momentum sector (σ-eigenvalue 1) from the rest.
//!
//! Register layout is `[t ancillas, m system qubits]`. Ancilla `b` is qubit
//! `t - 1 - b`, so the ancilla register reads `k = sum_b x_b 2^b` from the
//! high bits of the basis index, and ancilla `b` controls `σ^{2^b}`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::ProtocolRng;

use super::full_state::{FullState, MAX_QUBITS};

/// How controlled shifts are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShiftCircuit {
    /// `2^b` repetitions of a chain of `m - 1` Fredkin gates.
    #[default]
    FredkinChain,
    /// Direct relabeling of basis indices.
    Permutation,
}

pub enum QpeReadout<'a> {
    /// Report the all-zero ancilla branch.
    Postselect,
    Sample(&'a mut ProtocolRng),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QpeOutcome {
    pub accepted: bool,
    /// Ancilla register value that was read.
    pub reading: usize,
    /// Exact probability of the all-zero ancilla branch.
    pub acceptance_probability: f64,
    /// Renormalized system state for the reading, if the branch is nonempty.
    pub post: Option<FullState>,
}

fn rotate_right(x: usize, r: usize, m: usize) -> usize {
    if m == 0 {
        return x;
    }
    let r = r % m;
    if r == 0 {
        return x;
    }
    let mask = (1usize << m) - 1;
    ((x >> r) | (x << (m - r))) & mask
}

/// `σ|x_1 ... x_m> = |x_m x_1 ... x_{m-1}>`, as the SWAP chain
/// `(m-2, m-1), ..., (0, 1)`.
pub fn cyclic_shift(full: &FullState) -> FullState {
    let mut out = full.clone();
    let m = full.num_qubits();
    for a in (0..m.saturating_sub(1)).rev() {
        out.swap(a, a + 1).expect("qubits in range");
    }
    out
}

/// `σ^r` by relabeling basis indices.
pub fn cyclic_shift_power(full: &FullState, r: usize) -> FullState {
    let m = full.num_qubits();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << m];
    for (x, &a) in full.amplitudes().iter().enumerate() {
        amps[rotate_right(x, r, m)] = a;
    }
    FullState::new(m, amps).expect("same size")
}

/// Controlled `σ^r` on qubits `offset..offset + m` with control `control`.
fn controlled_shift_power(
    state: &mut FullState,
    control: usize,
    offset: usize,
    m: usize,
    r: usize,
    circuit: ShiftCircuit,
) {
    match circuit {
        ShiftCircuit::FredkinChain => {
            for _ in 0..r {
                for a in (0..m.saturating_sub(1)).rev() {
                    state
                        .controlled_swap(Some(control), offset + a, offset + a + 1)
                        .expect("qubits in range");
                }
            }
        }
        ShiftCircuit::Permutation => {
            let total = state.num_qubits();
            let cbit = state.mask(control);
            let low = total - offset - m;
            let sys_mask = ((1usize << m) - 1) << low;
            let src = state.amplitudes().to_vec();
            let mut amps = src.clone();
            for (idx, &a) in src.iter().enumerate() {
                if idx & cbit == 0 {
                    continue;
                }
                let sys = (idx & sys_mask) >> low;
                let moved = (idx & !sys_mask) | (rotate_right(sys, r, m) << low);
                amps[moved] = a;
            }
            *state = FullState::new(total, amps).expect("same size");
        }
    }
}

/// Inverse Fourier transform on the high `t` qubits.
fn inverse_qft(state: &FullState, t: usize) -> FullState {
    let total = state.num_qubits();
    let m = total - t;
    let big_t = 1usize << t;
    let sys_dim = 1usize << m;
    let scale = 1.0 / (big_t as f64).sqrt();
    let src = state.amplitudes();
    let mut amps = vec![Complex64::new(0.0, 0.0); src.len()];
    for s in 0..sys_dim {
        for y in 0..big_t {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..big_t {
                let phase = -TAU * ((y * k) % big_t) as f64 / big_t as f64;
                acc += Complex64::from_polar(1.0, phase) * src[(k << m) | s];
            }
            amps[(y << m) | s] = acc * scale;
        }
    }
    FullState::new(total, amps).expect("same size")
}

fn reading_distribution(state: &FullState, t: usize) -> Vec<f64> {
    let m = state.num_qubits() - t;
    let mut probs = vec![0.0; 1 << t];
    for (idx, a) in state.amplitudes().iter().enumerate() {
        probs[idx >> m] += a.norm_sqr();
    }
    probs
}

fn system_branch(state: &FullState, t: usize, reading: usize) -> Option<FullState> {
    let m = state.num_qubits() - t;
    let amps = state.amplitudes()[reading << m..(reading + 1) << m].to_vec();
    let branch = FullState::new(m, amps).expect("system size");
    branch.normalized().ok()
}

/// Run the phase-estimation circuit on `full` with `t` ancillas.
pub fn qpe_angular_momentum(
    full: &FullState,
    t: usize,
    readout: QpeReadout<'_>,
    circuit: ShiftCircuit,
) -> Result<QpeOutcome> {
    if t == 0 {
        return Err(Error::InvalidParameter(
            "at least one ancilla is required".into(),
        ));
    }
    let m = full.num_qubits();
    if m + t > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            requested: m + t,
            cap: MAX_QUBITS,
        });
    }
    let norm_sqr = full.norm_sqr();
    let mut state = full.prepend_zeros(t)?;
    let h = crate::algebra::GateParams::hadamard().gate_matrix();
    for q in 0..t {
        state.apply_matrix(q, &h)?;
    }
    for b in 0..t {
        controlled_shift_power(&mut state, t - 1 - b, t, m, 1 << b, circuit);
    }
    let state = inverse_qft(&state, t);
    let probs: Vec<f64> = reading_distribution(&state, t)
        .into_iter()
        .map(|p| p / norm_sqr)
        .collect();
    let reading = match readout {
        QpeReadout::Postselect => 0,
        QpeReadout::Sample(rng) => {
            let u = rng.uniform();
            let mut acc = 0.0;
            probs
                .iter()
                .position(|p| {
                    acc += p;
                    u < acc
                })
                .unwrap_or(probs.len() - 1)
        }
    };
    Ok(QpeOutcome {
        accepted: reading == 0,
        reading,
        acceptance_probability: probs[0],
        post: system_branch(&state, t, reading),
    })
}

/// `|(1/T) sum_{k<T} e^{2πi φ k}|^2` with `T = 2^t`: all-zero probability
/// for a σ-eigenvector of phase `φ`.
pub fn geometric_acceptance(phase: f64, t: usize) -> f64 {
    let big_t = 1usize << t;
    let sum: Complex64 = (0..big_t)
        .map(|k| Complex64::from_polar(1.0, TAU * phase * k as f64))
        .sum();
    (sum / big_t as f64).norm_sqr()
}

/// Weight of `full` in each σ-eigenspace `e^{2πiℓ/m}`, `ℓ = 0..m`, via the
/// projectors `(1/m) sum_r e^{-2πiℓr/m} σ^r`.
pub fn sigma_eigen_weights(full: &FullState) -> Vec<f64> {
    let m = full.num_qubits().max(1);
    let powers: Vec<FullState> = (0..m).map(|r| cyclic_shift_power(full, r)).collect();
    (0..m)
        .map(|l| {
            let dim = full.amplitudes().len();
            let mut acc = vec![Complex64::new(0.0, 0.0); dim];
            for (r, p) in powers.iter().enumerate() {
                let w = Complex64::from_polar(1.0 / m as f64, -TAU * (l * r % m) as f64 / m as f64);
                for (a, b) in acc.iter_mut().zip(p.amplitudes()) {
                    *a += w * b;
                }
            }
            acc.iter().map(|a| a.norm_sqr()).sum()
        })
        .collect()
}

/// Acceptance predicted from the σ-eigenspace weights.
pub fn predicted_acceptance(full: &FullState, t: usize) -> f64 {
    let m = full.num_qubits().max(1);
    sigma_eigen_weights(full)
        .iter()
        .enumerate()
        .map(|(l, w)| w * geometric_acceptance(l as f64 / m as f64, t))
        .sum::<f64>()
        / full.norm_sqr()
}
