//! Brute-force ground truth on the full `2^n` register.
//!
//! Everything here works qubit by qubit and is used to cross-check the
//! Dicke-basis code: the Hamming-scheme matrices, total angular momentum,
//! the phase-estimation circuit for the symmetry test, and end-to-end runs
//! of both protocols.

pub mod angular;
pub mod full_state;
pub mod qpe;
pub mod scheme;

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::GateParams;
use crate::dicke_space::SymmetricState;
use crate::error::{Error, Result};
use crate::rng::ProtocolRng;

pub use full_state::{embed, project_symmetric, FullState, Measurement, Readout, MAX_QUBITS};
pub use qpe::{qpe_angular_momentum, QpeOutcome, QpeReadout, ShiftCircuit};

/// Both branches of Protocol 1 run on the full register.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol1Oracle {
    pub target: usize,
    pub success_probability: f64,
    pub failure_probability: f64,
    pub success_state: Option<SymmetricState>,
    pub failure_state: Option<SymmetricState>,
    /// Largest distance of a post-state from the symmetric subspace.
    pub residual: f64,
}

fn branch(
    full: &FullState,
    target: usize,
    outcome: u8,
) -> Result<(f64, Option<SymmetricState>, f64)> {
    let p = full.outcome_probability(target, outcome)?;
    if p <= 0.0 {
        return Ok((0.0, None, 0.0));
    }
    let m = full.measure(target, Readout::Force(outcome))?;
    let reduced = m.post.remove_qubit(target, outcome)?;
    let (sym, residual) = project_symmetric(&reduced);
    Ok((
        m.probability,
        sym.normalized().ok().map(|(s, _)| s),
        residual,
    ))
}

/// Gate on qubit `target`, then a computational-basis measurement of it;
/// outcome `0` is success.
pub fn protocol1_oracle(
    state: &SymmetricState,
    g: &GateParams,
    target: usize,
) -> Result<Protocol1Oracle> {
    if state.n() == 0 {
        return Err(Error::NoQubit);
    }
    state.require_normalized()?;
    g.require_physical()?;
    let full = embed(state)?.apply_gate(target, g)?;
    let (ps, ss, rs) = branch(&full, target, 0)?;
    let (pf, sf, rf) = branch(&full, target, 1)?;
    Ok(Protocol1Oracle {
        target,
        success_probability: ps,
        failure_probability: pf,
        success_state: ss,
        failure_state: sf,
        residual: rs.max(rf),
    })
}

/// [`protocol1_oracle`] on a uniformly drawn qubit.
pub fn protocol1_oracle_random_target(
    state: &SymmetricState,
    g: &GateParams,
    rng: &mut ProtocolRng,
) -> Result<Protocol1Oracle> {
    if state.n() == 0 {
        return Err(Error::NoQubit);
    }
    let target = rng.random_range(0..state.n());
    protocol1_oracle(state, g, target)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryTest {
    /// Exact projection onto the maximal-`j` sector.
    ExactProjector,
    /// Phase estimation of the cyclic shift with `ancillas` ancilla qubits.
    Qpe {
        ancillas: usize,
        circuit: ShiftCircuit,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Protocol2Oracle {
    pub success_probability: f64,
    /// Normalized symmetric part of the accepted state.
    pub success_state: Option<SymmetricState>,
    /// Norm of the non-symmetric part of the normalized accepted state.
    pub residual: f64,
}

/// Append `|0>`, apply `U(γ, δ*)` to it, and run the symmetry test.
pub fn protocol2_oracle(
    state: &SymmetricState,
    g: &GateParams,
    test: SymmetryTest,
) -> Result<Protocol2Oracle> {
    state.require_normalized()?;
    g.require_physical()?;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let ancilla_gate = GateParams::new(g.first(), g.second().conj());
    let appended = embed(state)?.append_qubit(one, zero)?;
    let last = appended.num_qubits() - 1;
    let full = appended.apply_gate(last, &ancilla_gate)?;
    match test {
        SymmetryTest::ExactProjector => {
            let (sym, _) = project_symmetric(&full);
            let p = sym.norm_sqr();
            Ok(Protocol2Oracle {
                success_probability: p,
                success_state: sym.normalized().ok().map(|(s, _)| s),
                residual: 0.0,
            })
        }
        SymmetryTest::Qpe { ancillas, circuit } => {
            let out = qpe_angular_momentum(&full, ancillas, QpeReadout::Postselect, circuit)?;
            let (success_state, residual) = match &out.post {
                Some(post) => {
                    let (sym, residual) = project_symmetric(post);
                    (sym.normalized().ok().map(|(s, _)| s), residual)
                }
                None => (None, 0.0),
            };
            Ok(Protocol2Oracle {
                success_probability: out.acceptance_probability,
                success_state,
                residual,
            })
        }
    }
}

/// State just before the symmetry test of Protocol 2.
pub fn protocol2_intermediate(state: &SymmetricState, g: &GateParams) -> Result<FullState> {
    let appended = embed(state)?.append_qubit(g.first(), g.second())?;
    Ok(appended)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dicke_space::DickeIndex;
    use crate::protocols::{protocol1_exact, protocol2_exact};

    fn d(n: usize, i: usize) -> SymmetricState {
        SymmetricState::dicke(DickeIndex::new(n, i).unwrap())
    }

    fn random_gate(rng: &mut ProtocolRng) -> GateParams {
        let s = SymmetricState::random(1, rng);
        GateParams::physical(s.amplitude(0), s.amplitude(1)).unwrap()
    }

    #[test]
    fn protocol1_on_d21() {
        let out = protocol1_oracle(&d(2, 1), &GateParams::hadamard(), 1).unwrap();
        assert!((out.success_probability - 0.5).abs() < 1e-15);
        let plus = SymmetricState::from_real(&[1.0, 1.0]).unwrap();
        assert!(out.success_state.unwrap().fidelity(&plus).unwrap() > 1.0 - 1e-14);
    }

    #[test]
    fn protocol1_matches_dicke_basis_on_every_qubit() {
        let mut rng = ProtocolRng::seed_from_u64(10);
        for n in 1..=6 {
            let psi = SymmetricState::random(n, &mut rng);
            let g = random_gate(&mut rng);
            let exact = protocol1_exact(&psi, &g).unwrap();
            for target in 0..n {
                let o = protocol1_oracle(&psi, &g, target).unwrap();
                assert!((o.success_probability - exact.success_probability).abs() < 1e-12);
                assert!((o.failure_probability - exact.failure_probability).abs() < 1e-12);
                assert!(o.residual < 1e-12);
                if let (Some(a), Some(b)) = (&o.success_state, &exact.success_state) {
                    assert!(a.fidelity(b).unwrap() > 1.0 - 1e-12);
                }
                if let (Some(a), Some(b)) = (&o.failure_state, &exact.failure_state) {
                    assert!(a.fidelity(b).unwrap() > 1.0 - 1e-12);
                }
            }
        }
    }

    #[test]
    fn protocol2_projector_matches_dicke_basis() {
        let mut rng = ProtocolRng::seed_from_u64(11);
        for n in 0..=6 {
            let psi = SymmetricState::random(n, &mut rng);
            let g = random_gate(&mut rng);
            let exact = protocol2_exact(&psi, &g).unwrap();
            let o = protocol2_oracle(&psi, &g, SymmetryTest::ExactProjector).unwrap();
            assert!((o.success_probability - exact.success_probability).abs() < 1e-12);
            let (a, b) = (o.success_state.unwrap(), exact.success_state.unwrap());
            assert!(a.fidelity(&b).unwrap() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn intermediate_matches_gate_on_appended_zero() {
        let mut rng = ProtocolRng::seed_from_u64(12);
        let psi = SymmetricState::random(3, &mut rng);
        let g = random_gate(&mut rng);
        let via_gate = embed(&psi)
            .unwrap()
            .append_qubit(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            .unwrap()
            .apply_gate(3, &GateParams::new(g.first(), g.second().conj()))
            .unwrap();
        assert_eq!(via_gate, protocol2_intermediate(&psi, &g).unwrap());
    }

    #[test]
    fn qpe_mode_on_phase_zero_input() {
        let g = GateParams::real(1.0, 0.0);
        for n in 0..=5 {
            let o = protocol2_oracle(
                &d(n, 0),
                &g,
                SymmetryTest::Qpe {
                    ancillas: 2,
                    circuit: ShiftCircuit::FredkinChain,
                },
            )
            .unwrap();
            assert!((o.success_probability - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn qpe_mode_gap_is_the_false_accept_mass() {
        let mut rng = ProtocolRng::seed_from_u64(13);
        for n in [2, 3, 4] {
            let psi = SymmetricState::random(n, &mut rng);
            let g = random_gate(&mut rng);
            let exact = protocol2_exact(&psi, &g).unwrap().success_probability;
            let inter = protocol2_intermediate(&psi, &g).unwrap();
            let weights = qpe::sigma_eigen_weights(&inter);
            let m = n + 1;
            let false_accept: f64 = (1..m)
                .map(|l| weights[l] * qpe::geometric_acceptance(l as f64 / m as f64, 2))
                .sum();
            let o = protocol2_oracle(
                &psi,
                &g,
                SymmetryTest::Qpe {
                    ancillas: 2,
                    circuit: ShiftCircuit::FredkinChain,
                },
            )
            .unwrap();
            assert!((weights[0] - exact).abs() < 1e-12);
            assert!((o.success_probability - exact - false_accept).abs() < 1e-12);
        }
    }
}
