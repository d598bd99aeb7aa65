//! Protocols 1 and 2 on symmetric states: exact branch probabilities,
//! seeded sampling, iterated rounds and their limit.
//!
//! Protocol 1 applies `U(α, β)` to the last qubit and measures it; outcome
//! `0` succeeds and leaves `P1(α,β)|ψ>/sqrt(n)` on the remaining qubits.
//! Protocol 2 appends `U(γ, δ*)|0> = γ|0> + δ|1>` and accepts when the total
//! angular momentum is maximal, leaving `P2(γ,δ)|ψ>/sqrt(n+1)`.

use num_complex::Complex64;

use crate::algebra::{self, GateParams, ProtocolOrder};
use crate::dicke_space::SymmetricState;
use crate::error::{Error, Result};
use crate::extended::{self, Cdd};
use crate::rng::ProtocolRng;
use crate::spectral::{self, FixedPointBasis};

/// Branches whose probability does not exceed this carry no state.
pub const EMPTY_BRANCH_PROBABILITY: f64 = 1e-28;

/// Smallest `|χ_k|` counted as a nonzero expansion coefficient.
pub const EXPANSION_TOLERANCE: f64 = 1e-12;

/// Both branches of Protocol 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol1Exact {
    pub success_probability: f64,
    pub failure_probability: f64,
    /// Normalized `P1|ψ>`; `None` when the branch is empty.
    pub success_state: Option<SymmetricState>,
    /// Normalized state of the remaining qubits after outcome `1`.
    pub failure_state: Option<SymmetricState>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Protocol2Exact {
    pub success_probability: f64,
    /// Normalized `P2|ψ>`; `None` when the branch is empty.
    pub success_state: Option<SymmetricState>,
}

impl Protocol2Exact {
    pub fn failure_probability(&self) -> f64 {
        1.0 - self.success_probability
    }
}

/// One realized run of a protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolOutcome {
    pub success: bool,
    /// Exact probability of the realized branch.
    pub probability: f64,
    /// Normalized post-state of the realized branch. A failed Protocol 2
    /// leaves a non-symmetric state, reported as `None`.
    pub state: Option<SymmetricState>,
}

fn branch_state(v: SymmetricState, probability: f64) -> Option<SymmetricState> {
    if probability > EMPTY_BRANCH_PROBABILITY {
        v.normalized().ok().map(|(s, _)| s)
    } else {
        None
    }
}

fn check_inputs(state: &SymmetricState, g: &GateParams) -> Result<()> {
    state.require_normalized()?;
    g.require_physical()
}

pub fn protocol1_exact(state: &SymmetricState, g: &GateParams) -> Result<Protocol1Exact> {
    if state.n() == 0 {
        return Err(Error::NoQubit);
    }
    check_inputs(state, g)?;
    let n = state.n();
    let nf = n as f64;
    let success = algebra::apply_p1(g, state)?.scaled(Complex64::new(1.0 / nf.sqrt(), 0.0));

    let psi = state.amplitudes();
    let (a, b) = (g.first().conj(), g.second().conj());
    let mut failure = SymmetricState::zero(n - 1);
    for (i, amp) in failure.amps_mut().iter_mut().enumerate() {
        *amp = b * (((n - i) as f64) / nf).sqrt() * psi[i]
            - a * (((i + 1) as f64) / nf).sqrt() * psi[i + 1];
    }

    let ps = success.norm_sqr();
    let pf = failure.norm_sqr();
    Ok(Protocol1Exact {
        success_probability: ps,
        failure_probability: pf,
        success_state: branch_state(success, ps),
        failure_state: branch_state(failure, pf),
    })
}

pub fn protocol2_exact(state: &SymmetricState, g: &GateParams) -> Result<Protocol2Exact> {
    check_inputs(state, g)?;
    let scale = 1.0 / ((state.n() + 1) as f64).sqrt();
    let success = algebra::apply_p2(g, state).scaled(Complex64::new(scale, 0.0));
    let ps = success.norm_sqr();
    Ok(Protocol2Exact {
        success_probability: ps,
        success_state: branch_state(success, ps),
    })
}

pub fn protocol1_sample(
    state: &SymmetricState,
    g: &GateParams,
    rng: &mut ProtocolRng,
) -> Result<ProtocolOutcome> {
    let exact = protocol1_exact(state, g)?;
    let success = rng.uniform() < exact.success_probability;
    Ok(if success {
        ProtocolOutcome {
            success,
            probability: exact.success_probability,
            state: exact.success_state,
        }
    } else {
        ProtocolOutcome {
            success,
            probability: exact.failure_probability,
            state: exact.failure_state,
        }
    })
}

pub fn protocol2_sample(
    state: &SymmetricState,
    g: &GateParams,
    rng: &mut ProtocolRng,
) -> Result<ProtocolOutcome> {
    let exact = protocol2_exact(state, g)?;
    let success = rng.uniform() < exact.success_probability;
    Ok(ProtocolOutcome {
        success,
        probability: if success {
            exact.success_probability
        } else {
            exact.failure_probability()
        },
        state: if success { exact.success_state } else { None },
    })
}

/// Exact postselection on success, or physical sampling with an explicit
/// generator.
pub enum Mode<'a> {
    ExactPostselect,
    Sampled(&'a mut ProtocolRng),
}

/// Success probabilities of the two steps of one round, in execution order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundRecord {
    pub first: f64,
    pub second: f64,
}

impl RoundRecord {
    pub fn probability(&self) -> f64 {
        self.first * self.second
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationLog {
    pub rounds_requested: usize,
    pub order: ProtocolOrder,
    /// Completed rounds only.
    pub rounds: Vec<RoundRecord>,
    pub cumulative_probability: f64,
    /// State after the last completed round.
    pub final_state: SymmetricState,
    /// Sampled mode: the round in which a protocol failed.
    pub failed_round: Option<usize>,
    /// Identifier of the generator used in sampled mode.
    pub rng_algorithm: Option<&'static str>,
}

impl IterationLog {
    pub fn rounds_completed(&self) -> usize {
        self.rounds.len()
    }

    pub fn round_probabilities(&self) -> Vec<f64> {
        self.rounds.iter().map(RoundRecord::probability).collect()
    }
}

enum Step {
    One,
    Two,
}

fn steps(order: ProtocolOrder) -> [Step; 2] {
    match order {
        ProtocolOrder::P2ThenP1 => [Step::Two, Step::One],
        ProtocolOrder::P1ThenP2 => [Step::One, Step::Two],
    }
}

/// `(success probability, success state)` of one step, exact.
fn exact_step(
    step: &Step,
    state: &SymmetricState,
    p1: &GateParams,
    p2: &GateParams,
) -> Result<(f64, Option<SymmetricState>)> {
    Ok(match step {
        Step::One => {
            let r = protocol1_exact(state, p1)?;
            (r.success_probability, r.success_state)
        }
        Step::Two => {
            let r = protocol2_exact(state, p2)?;
            (r.success_probability, r.success_state)
        }
    })
}

/// Alternate the two protocols for `rounds` rounds in the given order.
///
/// In exact mode every step is postselected on success; a step whose
/// success branch is empty ends the run with [`Error::DegenerateRun`].
/// In sampled mode the run stops at the first failure and the log records
/// the failing round.
pub fn iterate_composed(
    state: &SymmetricState,
    p1: &GateParams,
    p2: &GateParams,
    rounds: usize,
    order: ProtocolOrder,
    mut mode: Mode<'_>,
) -> Result<IterationLog> {
    state.require_normalized()?;
    p1.require_physical()?;
    p2.require_physical()?;
    let mut log = IterationLog {
        rounds_requested: rounds,
        order,
        rounds: Vec::with_capacity(rounds),
        cumulative_probability: 1.0,
        final_state: state.clone(),
        failed_round: None,
        rng_algorithm: match mode {
            Mode::ExactPostselect => None,
            Mode::Sampled(_) => Some(ProtocolRng::ALGORITHM),
        },
    };
    let mut current = state.clone();
    'rounds: for round in 0..rounds {
        let mut probs = [0.0; 2];
        for (k, step) in steps(order).iter().enumerate() {
            let (p, next) = exact_step(step, &current, p1, p2)?;
            probs[k] = p;
            match &mut mode {
                Mode::ExactPostselect => match next {
                    Some(s) => current = s,
                    None => return Err(Error::DegenerateRun { round }),
                },
                Mode::Sampled(rng) => {
                    if rng.uniform() < p {
                        current = next.expect("sampled success has a state");
                    } else {
                        log.failed_round = Some(round);
                        break 'rounds;
                    }
                }
            }
        }
        let record = RoundRecord {
            first: probs[0],
            second: probs[1],
        };
        log.cumulative_probability *= record.probability();
        log.rounds.push(record);
        log.final_state = current.clone();
    }
    Ok(log)
}

/// Limit of repeated successful rounds: the fixed point `B|D_n^k>` for the
/// smallest `k` with a nonzero expansion coefficient.
#[derive(Debug, Clone)]
pub struct AsymptoticPrediction {
    pub k: usize,
    pub limit_state: SymmetricState,
    /// `χ` in `ψ = sum_j χ_j B|D_n^j>`.
    pub coefficients: Vec<Complex64>,
    pub basis: FixedPointBasis,
}

pub fn asymptotic_prediction(
    state: &SymmetricState,
    p1: &GateParams,
    p2: &GateParams,
) -> Result<AsymptoticPrediction> {
    state.require_normalized()?;
    let basis = spectral::build_fixed_point_basis(state.n(), p1, p2)?;
    let chi = basis.expand(state)?;
    let k = chi
        .iter()
        .position(|z| z.norm() > EXPANSION_TOLERANCE)
        .expect("a normalized state has a nonzero expansion coefficient");
    Ok(AsymptoticPrediction {
        k,
        limit_state: basis.column(k),
        coefficients: chi,
        basis,
    })
}

/// Squared distances `d_N = ||ψ_{N+1} - e^{iφ_N} ψ_N||²` between
/// successive normalized iterates, phase-aligned, for `N = 0..rounds`.
///
/// Runs the same postselected iteration as [`iterate_composed`] in
/// double-double precision, so the geometric decay of `d_N` stays visible
/// long after it drops below `f64` resolution.
pub fn successive_distances(
    state: &SymmetricState,
    p1: &GateParams,
    p2: &GateParams,
    rounds: usize,
    order: ProtocolOrder,
) -> Result<Vec<f64>> {
    state.require_normalized()?;
    if order == ProtocolOrder::P1ThenP2 && state.n() == 0 {
        return Err(Error::NoQubit);
    }
    let (a, b) = (extended::cdd(p1.first()), extended::cdd(p1.second()));
    let (g, d) = (extended::cdd(p2.first()), extended::cdd(p2.second()));
    let round = |v: &[Cdd]| -> Vec<Cdd> {
        match order {
            ProtocolOrder::P2ThenP1 => extended::lower(&extended::raise(v, g, d), a, b),
            ProtocolOrder::P1ThenP2 => extended::raise(&extended::lower(v, a, b), g, d),
        }
    };
    let mut current: Vec<Cdd> = state
        .amplitudes()
        .iter()
        .map(|&z| extended::cdd(z))
        .collect();
    current = extended::normalize(&current);
    let mut out = Vec::with_capacity(rounds);
    for n_round in 0..rounds {
        let raw = round(&current);
        if extended::norm_sqr(&raw) == extended::dd(0.0) {
            return Err(Error::DegenerateRun { round: n_round });
        }
        let next = extended::normalize(&raw);
        let overlap = extended::inner(&current, &next);
        let mag = (overlap.re * overlap.re + overlap.im * overlap.im).sqrt();
        let phase = if mag == extended::dd(0.0) {
            extended::cdd(Complex64::new(1.0, 0.0))
        } else {
            num_complex::Complex::new(overlap.re / mag, overlap.im / mag)
        };
        let diff: Vec<Cdd> = next
            .iter()
            .zip(&current)
            .map(|(x, y)| *x - phase * *y)
            .collect();
        out.push(extended::norm_sqr(&diff).into());
        current = next;
    }
    Ok(out)
}
