//! JSON documents read and written by the command-line tool.
//!
//! Every real number is written with 17 significant digits so that a
//! round trip through text is lossless. Non-finite values become `null`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::algebra::GateParams;
use crate::dicke_space::SymmetricState;
use crate::error::{Error, Result};
use crate::preparation::{PreparationRun, PreparationSchedule};
use crate::protocols::{IterationLog, ProtocolOutcome};
use crate::spectral::{Construction, FixedPointBasis, UnitaryCaseGate};
use crate::verify::Report;

pub const FORMAT_VERSION: u32 = 1;

/// A real serialized as `{:.16e}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw =
            RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

/// `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cplx(pub Complex64);

impl Serialize for Cplx {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [Real(self.0.re), Real(self.0.im)].serialize(s)
    }
}

pub fn reals(xs: &[f64]) -> Vec<Real> {
    xs.iter().copied().map(Real).collect()
}

pub fn complexes(zs: &[Complex64]) -> Vec<Cplx> {
    zs.iter().copied().map(Cplx).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct StateDoc {
    pub format_version: u32,
    pub n: usize,
    pub amplitudes: Vec<Cplx>,
}

impl From<&SymmetricState> for StateDoc {
    fn from(s: &SymmetricState) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            n: s.n(),
            amplitudes: complexes(s.amplitudes()),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateInput {
    format_version: Option<u32>,
    n: usize,
    amplitudes: Vec<(f64, f64)>,
}

/// Parse `{"n": .., "amplitudes": [[re, im], ..]}`. `format_version`, if
/// present, must be the current one.
pub fn parse_state(text: &str) -> Result<SymmetricState> {
    let input: StateInput = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if let Some(v) = input.format_version {
        if v != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported format_version {v}, expected {FORMAT_VERSION}"
            )));
        }
    }
    if input.amplitudes.len() != input.n + 1 {
        return Err(Error::Format(format!(
            "n = {} needs {} amplitudes, got {}",
            input.n,
            input.n + 1,
            input.amplitudes.len()
        )));
    }
    let amps = input
        .amplitudes
        .into_iter()
        .map(|(re, im)| Complex64::new(re, im))
        .collect();
    SymmetricState::new(input.n, amps)
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

pub fn state_to_json(state: &SymmetricState) -> String {
    to_json(&StateDoc::from(state))
}

#[derive(Debug, Clone, Serialize)]
pub struct OutcomeDoc {
    pub success: bool,
    pub probability: Real,
    pub state: Option<StateDoc>,
}

impl From<&ProtocolOutcome> for OutcomeDoc {
    fn from(o: &ProtocolOutcome) -> Self {
        Self {
            success: o.success,
            probability: Real(o.probability),
            state: o.state.as_ref().map(StateDoc::from),
        }
    }
}

/// `[γ_re, γ_im, δ_re, δ_im]`.
pub fn gate_row(g: &GateParams) -> [Real; 4] {
    [
        Real(g.first().re),
        Real(g.first().im),
        Real(g.second().re),
        Real(g.second().im),
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct ScheduleDoc {
    pub format_version: u32,
    pub n: usize,
    pub schedule: Vec<[Real; 4]>,
    pub roots: Vec<Cplx>,
    pub infinity_roots: usize,
    pub residual: Real,
    pub fidelity: Real,
    pub probability: Real,
    pub step_probabilities: Vec<Real>,
    pub failed_step: Option<usize>,
    pub sampled: bool,
    pub seed: Option<u64>,
    pub rng_algorithm: Option<&'static str>,
    pub state: StateDoc,
}

impl ScheduleDoc {
    pub fn new(
        schedule: &PreparationSchedule,
        run: &PreparationRun,
        fidelity: f64,
        seed: Option<u64>,
        rng_algorithm: Option<&'static str>,
    ) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            n: schedule.n(),
            schedule: schedule.steps.iter().map(gate_row).collect(),
            roots: complexes(&schedule.finite_roots),
            infinity_roots: schedule.infinity_count,
            residual: Real(schedule.residual),
            fidelity: Real(fidelity),
            probability: Real(run.cumulative_probability),
            step_probabilities: reals(&run.step_probabilities),
            failed_step: run.failed_step,
            sampled: rng_algorithm.is_some(),
            seed,
            rng_algorithm,
            state: StateDoc::from(&run.state),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundDoc {
    pub first: Real,
    pub second: Real,
    pub probability: Real,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunLogDoc {
    pub format_version: u32,
    pub order: &'static str,
    pub rounds_requested: usize,
    pub rounds_completed: usize,
    pub rounds: Vec<RoundDoc>,
    pub cumulative_probability: Real,
    pub failed_round: Option<usize>,
    pub seed: Option<u64>,
    pub rng_algorithm: Option<&'static str>,
    pub final_state: StateDoc,
}

impl RunLogDoc {
    pub fn new(log: &IterationLog, seed: Option<u64>) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            order: match log.order {
                crate::algebra::ProtocolOrder::P2ThenP1 => "protocol2-then-protocol1",
                crate::algebra::ProtocolOrder::P1ThenP2 => "protocol1-then-protocol2",
            },
            rounds_requested: log.rounds_requested,
            rounds_completed: log.rounds_completed(),
            rounds: log
                .rounds
                .iter()
                .map(|r| RoundDoc {
                    first: Real(r.first),
                    second: Real(r.second),
                    probability: Real(r.probability()),
                })
                .collect(),
            cumulative_probability: Real(log.cumulative_probability),
            failed_round: log.failed_round,
            seed,
            rng_algorithm: log.rng_algorithm,
            final_state: StateDoc::from(&log.final_state),
        }
    }
}

/// Repeated runs of a single protocol.
#[derive(Debug, Clone, Serialize)]
pub struct SingleRunDoc {
    pub format_version: u32,
    pub protocol: u8,
    pub rounds_requested: usize,
    pub rounds_completed: usize,
    /// One entry per attempted round; a failed sampled round is the last.
    pub outcomes: Vec<OutcomeDoc>,
    pub cumulative_probability: Real,
    pub failed_round: Option<usize>,
    pub seed: Option<u64>,
    pub rng_algorithm: Option<&'static str>,
    pub final_state: StateDoc,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnglesDoc {
    pub theta: Cplx,
    pub phi: Cplx,
}

#[derive(Debug, Clone, Serialize)]
pub struct GateDoc {
    pub mu: Cplx,
    pub nu: Cplx,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenvaluesDoc {
    /// Protocol 2 first: the operator `P1 P2`.
    pub protocol2_then_protocol1: Vec<Cplx>,
    /// Protocol 1 first: the operator `P2 P1`.
    pub protocol1_then_protocol2: Vec<Cplx>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointsDoc {
    pub format_version: u32,
    pub n: usize,
    pub commutator_constant: Cplx,
    pub construction: &'static str,
    pub warning: Option<String>,
    pub angles: Option<AnglesDoc>,
    pub eigenvalues: EigenvaluesDoc,
    /// Column `j` is `B|D_n^j>`.
    pub basis: Vec<Vec<Cplx>>,
    pub unitary_gate: Option<GateDoc>,
}

impl FixedPointsDoc {
    pub fn new(basis: &FixedPointBasis, gate: Option<&UnitaryCaseGate>) -> Self {
        use crate::algebra::ProtocolOrder;
        let (construction, angles) = match basis.construction() {
            Construction::AngleBranch(a) => (
                "angle-branch",
                Some(AnglesDoc {
                    theta: Cplx(a.theta),
                    phi: Cplx(a.phi),
                }),
            ),
            Construction::DirectEigen => ("direct-eigen", None),
        };
        Self {
            format_version: FORMAT_VERSION,
            n: basis.n(),
            commutator_constant: Cplx(basis.commutator_constant()),
            construction,
            warning: basis.warning().map(str::to_owned),
            angles,
            eigenvalues: EigenvaluesDoc {
                protocol2_then_protocol1: complexes(&basis.eigenvalues(ProtocolOrder::P2ThenP1)),
                protocol1_then_protocol2: complexes(&basis.eigenvalues(ProtocolOrder::P1ThenP2)),
            },
            basis: (0..=basis.n())
                .map(|j| complexes(basis.column(j).amplitudes()))
                .collect(),
            unitary_gate: gate.map(|g| GateDoc {
                mu: Cplx(g.mu),
                nu: Cplx(g.nu),
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckDoc {
    pub name: String,
    pub residual: Real,
    pub tolerance: Real,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDoc {
    pub format_version: u32,
    pub suite: &'static str,
    pub max_n: usize,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckDoc>,
}

impl From<&Report> for ReportDoc {
    fn from(r: &Report) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            suite: r.suite.name(),
            max_n: r.max_n,
            seed: r.seed,
            passed: r.passed(),
            checks: r
                .checks
                .iter()
                .map(|c| CheckDoc {
                    name: c.name.clone(),
                    residual: Real(c.residual),
                    tolerance: Real(c.tolerance),
                    passed: c.passed,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dicke_space::DickeIndex;
    use crate::rng::ProtocolRng;

    #[test]
    fn reals_carry_seventeen_digits() {
        let s = serde_json::to_string(&Real(0.1)).unwrap();
        assert_eq!(s, "1.0000000000000001e-1");
        assert_eq!(serde_json::to_string(&Real(f64::NAN)).unwrap(), "null");
    }

    #[test]
    fn state_round_trip_is_lossless() {
        let mut rng = ProtocolRng::seed_from_u64(20);
        for n in 0..8 {
            let psi = SymmetricState::random(n, &mut rng);
            let back = parse_state(&state_to_json(&psi)).unwrap();
            assert_eq!(back, psi);
        }
    }

    #[test]
    fn state_parsing() {
        let d = parse_state(r#"{"n": 2, "amplitudes": [[0,0],[1,0],[0,0]]}"#).unwrap();
        assert_eq!(d, SymmetricState::dicke(DickeIndex::new(2, 1).unwrap()));
        for bad in [
            r#"{"n": 2, "amplitudes": [[0,0],[1,0]]}"#,
            r#"{"n": 1, "amplitudes": [[1],[0,0]]}"#,
            r#"{"n": 1, "amplitudes": [[1,0],[0,0]], "format_version": 9}"#,
            r#"{"n": 1, "amplitudes": [[1,0],[0,0]], "extra": 1}"#,
            "not json",
        ] {
            assert!(matches!(parse_state(bad), Err(Error::Format(_))), "{bad}");
        }
    }
}
