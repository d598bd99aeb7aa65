//! Invariant suites with measured residuals.
//!
//! Each check reports the worst residual it saw and the tolerance it was
//! held to. Tolerances can be overridden per check name, or for every check
//! at once.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::{self, max_abs_entry, GateParams, ProtocolOrder};
use crate::combinatorics::binomial;
use crate::dicke_space::{DickeIndex, SymmetricState};
use crate::error::{Error, Result};
use crate::krawtchouk::{krawtchouk_row, KrawtchoukParams};
use crate::oracle::{
    self, angular, qpe, scheme, FullState, QpeReadout, ShiftCircuit, SymmetryTest,
};
use crate::preparation;
use crate::protocols::{self, Mode};
use crate::rng::ProtocolRng;
use crate::spectral;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Algebra,
    Scheme,
    Hadamard,
    Qpe,
    Protocols,
    Spectral,
    Preparation,
    Krawtchouk,
}

impl Suite {
    pub const NAMES: [&'static str; 9] = [
        "all",
        "algebra",
        "scheme",
        "hadamard",
        "qpe",
        "protocols",
        "spectral",
        "preparation",
        "krawtchouk",
    ];

    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Algebra,
                Suite::Scheme,
                Suite::Hadamard,
                Suite::Qpe,
                Suite::Protocols,
                Suite::Spectral,
                Suite::Preparation,
                Suite::Krawtchouk,
            ],
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        const ALL: [Suite; 9] = [
            Suite::All,
            Suite::Algebra,
            Suite::Scheme,
            Suite::Hadamard,
            Suite::Qpe,
            Suite::Protocols,
            Suite::Spectral,
            Suite::Preparation,
            Suite::Krawtchouk,
        ];
        ALL.into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite '{s}'")))
    }
}

/// Overrides of the built-in tolerances.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tolerances {
    /// Applies to every check without a named override.
    pub global: Option<f64>,
    pub by_name: BTreeMap<String, f64>,
}

impl Tolerances {
    pub fn resolve(&self, name: &str, default: f64) -> f64 {
        self.by_name
            .get(name)
            .copied()
            .or(self.global)
            .unwrap_or(default)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: Suite,
    pub max_n: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// A draw of unconstrained complex parameters.
pub fn random_parameters(rng: &mut ProtocolRng) -> GateParams {
    let mut z = || {
        Complex64::new(
            StandardNormal.sample(&mut *rng),
            StandardNormal.sample(&mut *rng),
        )
    };
    GateParams::new(z(), z())
}

/// A draw of physical gate parameters, uniform on the unit 3-sphere.
pub fn random_gate(rng: &mut ProtocolRng) -> GateParams {
    let s = SymmetricState::random(1, rng);
    GateParams::new(s.amplitude(0), s.amplitude(1))
}

/// `(γ, δ) = e^{iχ}(α*, β*)`, the family whose composed operator is
/// Hermitian up to a phase.
pub fn hermitian_partner(p1: &GateParams, chi: f64) -> GateParams {
    let ph = Complex64::from_polar(1.0, chi);
    GateParams::new(ph * p1.first().conj(), ph * p1.second().conj())
}

struct Runner<'a> {
    tolerances: &'a Tolerances,
    checks: Vec<Check>,
}

impl Runner<'_> {
    fn record(&mut self, name: &str, default: f64, residual: f64) {
        let tolerance = self.tolerances.resolve(name, default);
        self.checks.push(Check {
            name: name.to_string(),
            residual,
            tolerance,
            // NaN residuals fail
            passed: residual <= tolerance,
        });
    }
}

fn basis_states(n: usize) -> impl Iterator<Item = SymmetricState> {
    (0..=n).map(move |i| SymmetricState::dicke(DickeIndex::new(n, i).expect("i <= n")))
}

fn diff(a: &SymmetricState, b: &SymmetricState) -> f64 {
    a.max_abs_diff(b).unwrap_or(f64::INFINITY)
}

fn sum(a: &SymmetricState, b: &SymmetricState, cb: Complex64) -> SymmetricState {
    a.combine(Complex64::new(1.0, 0.0), b, cb)
        .expect("same sector")
}

fn lower_or_zero(
    op: impl Fn(&SymmetricState) -> Result<SymmetricState>,
    s: &SymmetricState,
) -> Option<SymmetricState> {
    op(s).ok()
}

/// Runs the requested suite. `max_n` bounds the sector sizes; dense
/// full-register checks apply their own lower caps on top of it.
pub fn run(suite: Suite, max_n: usize, tolerances: &Tolerances, seed: u64) -> Result<Report> {
    let mut runner = Runner {
        tolerances,
        checks: Vec::new(),
    };
    let mut rng = ProtocolRng::seed_from_u64(seed);
    for s in suite.members() {
        let mut child = rng.split();
        match s {
            Suite::Algebra => algebra_suite(&mut runner, max_n, &mut child)?,
            Suite::Scheme => scheme_suite(&mut runner, max_n)?,
            Suite::Hadamard => hadamard_suite(&mut runner, max_n, &mut child)?,
            Suite::Qpe => qpe_suite(&mut runner, max_n, &mut child)?,
            Suite::Protocols => protocols_suite(&mut runner, max_n, &mut child)?,
            Suite::Spectral => spectral_suite(&mut runner, max_n, &mut child)?,
            Suite::Preparation => preparation_suite(&mut runner, max_n, &mut child)?,
            Suite::Krawtchouk => krawtchouk_suite(&mut runner, max_n)?,
            Suite::All => unreachable!(),
        }
    }
    Ok(Report {
        suite,
        max_n,
        seed,
        checks: runner.checks,
    })
}

fn algebra_suite(r: &mut Runner<'_>, max_n: usize, rng: &mut ProtocolRng) -> Result<()> {
    let top = max_n.min(10);
    let one = Complex64::new(1.0, 0.0);

    // [a_i, a_j†] = δ_ij
    let lowers: [fn(&SymmetricState) -> Result<SymmetricState>; 2] =
        [algebra::apply_a1, algebra::apply_a2];
    let raises: [fn(&SymmetricState) -> SymmetricState; 2] =
        [algebra::apply_a1_dag, algebra::apply_a2_dag];
    let mut worst = 0.0f64;
    for n in 0..=top {
        for s in basis_states(n) {
            for (i, lower) in lowers.iter().enumerate() {
                for (j, raise) in raises.iter().enumerate() {
                    let ab = lower(&raise(&s))?;
                    let ba = lower_or_zero(lower, &s)
                        .map(|x| raise(&x))
                        .unwrap_or(SymmetricState::zero(n));
                    let delta = if i == j {
                        one
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    let lhs = sum(&ab, &ba, -one);
                    worst = worst.max(diff(&lhs, &s.scaled(delta)));
                }
            }
        }
    }
    r.record("algebra.weyl_commutators", 1e-10, worst);

    let draws: Vec<(GateParams, GateParams)> = (0..20)
        .map(|_| (random_parameters(rng), random_parameters(rng)))
        .collect();

    // [N, P2] = P2 and [N, P1] = -P1
    let mut worst = 0.0f64;
    for (p1, p2) in &draws {
        for n in 0..=top {
            for s in basis_states(n) {
                let up = algebra::apply_p2(p2, &s);
                let comm = sum(
                    &algebra::apply_number(&up),
                    &algebra::apply_p2(p2, &algebra::apply_number(&s)),
                    -one,
                );
                worst = worst.max(diff(&comm, &up) / (1.0 + up.norm()));
                if n > 0 {
                    let down = algebra::apply_p1(p1, &s)?;
                    let comm = sum(
                        &algebra::apply_number(&down),
                        &algebra::apply_p1(p1, &algebra::apply_number(&s))?,
                        -one,
                    );
                    worst = worst.max(diff(&comm, &down.scaled(-one)) / (1.0 + down.norm()));
                }
            }
        }
    }
    r.record("algebra.number_commutators", 1e-10, worst);

    // P1 P2 - P2 P1 = (αγ + δβ) I
    let mut worst = 0.0f64;
    for (p1, p2) in &draws {
        let c = algebra::commutator_constant(p1, p2);
        for n in 0..=top {
            let m = algebra::p1p2_matrix(p1, p2, n) - algebra::p2p1_matrix(p1, p2, n);
            let expect = DMatrix::<Complex64>::identity(n + 1, n + 1) * c;
            let scale = 1.0 + max_abs_entry(&algebra::p1p2_matrix(p1, p2, n));
            worst = worst.max(max_abs_entry(&(m - expect)) / scale);
        }
    }
    r.record("algebra.protocol_commutator", 1e-10, worst);

    // P2 P1 = v·J + v0 N
    let mut worst = 0.0f64;
    for (p1, p2) in &draws {
        let v = algebra::symmetry_coeffs(p1, p2);
        for n in 0..=top.min(8) {
            let m = algebra::p2p1_matrix(p1, p2, n);
            let scale = 1.0 + max_abs_entry(&m);
            worst = worst.max(max_abs_entry(&(m - v.matrix(n))) / scale);
        }
    }
    r.record("algebra.su2_identification", 1e-10, worst);

    // [Jx, Jy] = i Jz
    let mut worst = 0.0f64;
    for n in 0..=top {
        let (x, y, z) = (
            algebra::jx_matrix(n),
            algebra::jy_matrix(n),
            algebra::jz_matrix(n),
        );
        let comm = &x * &y - &y * &x;
        worst = worst.max(max_abs_entry(&(comm - z * Complex64::new(0.0, 1.0))));
    }
    r.record("algebra.su2_commutators", 1e-10, worst);
    Ok(())
}

fn scheme_suite(r: &mut Runner<'_>, max_n: usize) -> Result<()> {
    let exact_top = max_n.min(5);
    let mut violation = 0i64;
    let mut mismatches = 0usize;
    for n in 0..=exact_top {
        violation = violation.max(scheme::bose_mesner(n)?.max_violation);
        mismatches += scheme::p_polynomial_mismatches(n)?;
    }
    r.record("scheme.bose_mesner", 0.0, violation as f64);
    r.record("scheme.p_polynomial", 0.0, mismatches as f64);

    let mut worst = 0.0f64;
    for n in 0..=max_n.min(6) {
        worst = worst.max(scheme::dicke_from_distance_residual(n)?);
    }
    r.record("scheme.dicke_from_distance", 1e-12, worst);

    let two = Complex64::new(2.0, 0.0);
    let mut worst = 0.0f64;
    for n in 0..=max_n.min(6) {
        let jx = angular::total_angular_momentum_matrix(n, angular::Axis::X)?;
        let jz = angular::total_angular_momentum_matrix(n, angular::Axis::Z)?;
        let a = scheme::scheme_matrix(n, scheme::SchemeKind::Adjacency)?.dense_complex();
        let d = scheme::scheme_matrix(n, scheme::SchemeKind::Dual)?.dense_complex();
        worst = worst.max(max_abs_entry(&(jx * two - a)));
        worst = worst.max(max_abs_entry(&(jz * two - d)));
    }
    r.record("scheme.spin_matrices", 1e-12, worst);

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let params = [
        (Complex64::new(s, 0.0), Complex64::new(s, 0.0)),
        (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)),
    ];
    let mut worst = 0.0f64;
    for n in 0..=exact_top {
        for i in 0..=n {
            for &(g, d) in &params {
                worst = worst.max(angular::clebsch_gordan_check(n, i, g, d)?.max_error);
            }
        }
    }
    r.record("scheme.clebsch_gordan", 1e-10, worst);
    Ok(())
}

fn hadamard_on_every_qubit(state: &SymmetricState) -> Result<SymmetricState> {
    let mut full = oracle::embed(state)?;
    let h = GateParams::hadamard().gate_matrix();
    for q in 0..state.n() {
        full.apply_matrix(q, &h)?;
    }
    Ok(oracle::project_symmetric(&full).0)
}

fn hadamard_suite(r: &mut Runner<'_>, max_n: usize, rng: &mut ProtocolRng) -> Result<()> {
    let mut worst = 0.0f64;
    for n in 0..=max_n.min(6) {
        worst = worst.max(scheme::hadamard_conjugation_residual(n)?);
    }
    r.record("hadamard.conjugation", 1e-10, worst);

    let mut worst_fid = 0.0f64;
    let mut worst_inv = 0.0f64;
    for n in 0..=max_n.min(10) {
        for _ in 0..3 {
            let psi = SymmetricState::random(n, rng);
            let fast = spectral::hadamard_transform(&psi);
            let slow = hadamard_on_every_qubit(&psi)?;
            worst_fid = worst_fid.max(1.0 - fast.fidelity(&slow)?);
            worst_inv = worst_inv.max(diff(&spectral::hadamard_transform(&fast), &psi));
        }
    }
    r.record("hadamard.transform_vs_oracle", 1e-10, worst_fid);
    r.record("hadamard.involution", 1e-10, worst_inv);
    Ok(())
}

fn qpe_suite(r: &mut Runner<'_>, max_n: usize, rng: &mut ProtocolRng) -> Result<()> {
    let top = max_n.min(6);
    let mut worst = 0.0f64;
    for m in 1..=top {
        for i in 0..=m {
            let d = oracle::embed(&SymmetricState::dicke(DickeIndex::new(m, i)?))?;
            for t in 1..=4 {
                let out = qpe::qpe_angular_momentum(
                    &d,
                    t,
                    QpeReadout::Postselect,
                    ShiftCircuit::Permutation,
                )?;
                worst = worst.max(1.0 - out.acceptance_probability);
            }
        }
    }
    r.record("qpe.zero_phase_acceptance", 1e-12, worst);

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let zero = Complex64::new(0.0, 0.0);
    let singlet = FullState::new(
        2,
        vec![zero, Complex64::new(h, 0.0), Complex64::new(-h, 0.0), zero],
    )?;
    let out = qpe::qpe_angular_momentum(
        &singlet,
        1,
        QpeReadout::Postselect,
        ShiftCircuit::FredkinChain,
    )?;
    r.record("qpe.singlet_rejection", 1e-12, out.acceptance_probability);

    // σ-eigenvector with eigenvalue e^{2πi/3}
    let base = FullState::basis_state(3, 0b001)?;
    let mut amps = vec![zero; 8];
    for k in 0..3 {
        let w = Complex64::from_polar(1.0 / 3f64.sqrt(), -std::f64::consts::TAU * k as f64 / 3.0);
        for (a, b) in amps
            .iter_mut()
            .zip(qpe::cyclic_shift_power(&base, k).amplitudes())
        {
            *a += w * b;
        }
    }
    let third = FullState::new(3, amps)?;
    let out = qpe::qpe_angular_momentum(
        &third,
        2,
        QpeReadout::Postselect,
        ShiftCircuit::FredkinChain,
    )?;
    r.record(
        "qpe.third_root_false_accept",
        1e-10,
        (out.acceptance_probability - 1.0 / 16.0).abs(),
    );

    let mut worst = 0.0f64;
    for m in 2..=max_n.min(5) {
        let amps: Vec<Complex64> = (0..1usize << m)
            .map(|_| {
                Complex64::new(
                    StandardNormal.sample(&mut *rng),
                    StandardNormal.sample(&mut *rng),
                )
            })
            .collect();
        let f = FullState::new(m, amps)?.normalized()?;
        for t in 1..=3 {
            let a = qpe::qpe_angular_momentum(
                &f,
                t,
                QpeReadout::Postselect,
                ShiftCircuit::FredkinChain,
            )?;
            let b = qpe::qpe_angular_momentum(
                &f,
                t,
                QpeReadout::Postselect,
                ShiftCircuit::Permutation,
            )?;
            worst = worst.max((a.acceptance_probability - b.acceptance_probability).abs());
            if let (Some(pa), Some(pb)) = (a.post, b.post) {
                worst = worst.max(1.0 - pa.fidelity(&pb)?);
            }
        }
    }
    r.record("qpe.fredkin_vs_permutation", 1e-12, worst);

    // accepted mass = exact success + Σ_ℓ w_ℓ |geometric sum|²
    let mut worst = 0.0f64;
    for n in 1..max_n.min(5) {
        let psi = SymmetricState::random(n, rng);
        let g = random_gate(rng);
        let exact = protocols::protocol2_exact(&psi, &g)?.success_probability;
        let inter = oracle::protocol2_intermediate(&psi, &g)?;
        let weights = qpe::sigma_eigen_weights(&inter);
        let m = n + 1;
        for t in 1..=3 {
            let false_accept: f64 = (1..m)
                .map(|l| weights[l] * qpe::geometric_acceptance(l as f64 / m as f64, t))
                .sum();
            let o = oracle::protocol2_oracle(
                &psi,
                &g,
                SymmetryTest::Qpe {
                    ancillas: t,
                    circuit: ShiftCircuit::FredkinChain,
                },
            )?;
            worst = worst.max((o.success_probability - exact - false_accept).abs());
        }
    }
    r.record("qpe.false_accept_gap", 1e-10, worst);
    Ok(())
}

fn protocols_suite(r: &mut Runner<'_>, max_n: usize, rng: &mut ProtocolRng) -> Result<()> {
    let top = max_n.min(8);
    let (mut p1_gap, mut p1_fid, mut p2_gap, mut p2_fid, mut invariance) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for n in 0..=top {
        for _ in 0..5 {
            let psi = SymmetricState::random(n, rng);
            let g = random_gate(rng);
            if n > 0 {
                let exact = protocols::protocol1_exact(&psi, &g)?;
                let o = oracle::protocol1_oracle_random_target(&psi, &g, rng)?;
                p1_gap = p1_gap.max((o.success_probability - exact.success_probability).abs());
                if let (Some(a), Some(b)) = (&o.success_state, &exact.success_state) {
                    p1_fid = p1_fid.max(1.0 - a.fidelity(b)?);
                }
                let first = oracle::protocol1_oracle(&psi, &g, 0)?;
                let last = oracle::protocol1_oracle(&psi, &g, n - 1)?;
                invariance =
                    invariance.max((first.success_probability - last.success_probability).abs());
                if let (Some(a), Some(b)) = (&first.success_state, &last.success_state) {
                    invariance = invariance.max(1.0 - a.fidelity(b)?);
                }
            }
            let exact = protocols::protocol2_exact(&psi, &g)?;
            let o = oracle::protocol2_oracle(&psi, &g, SymmetryTest::ExactProjector)?;
            p2_gap = p2_gap.max((o.success_probability - exact.success_probability).abs());
            if let (Some(a), Some(b)) = (&o.success_state, &exact.success_state) {
                p2_fid = p2_fid.max(1.0 - a.fidelity(b)?);
            }
        }
    }
    r.record("protocols.protocol1_probability_vs_oracle", 1e-10, p1_gap);
    r.record("protocols.protocol1_state_vs_oracle", 1e-10, p1_fid);
    r.record("protocols.protocol1_target_invariance", 1e-10, invariance);
    r.record("protocols.protocol2_probability_vs_oracle", 1e-10, p2_gap);
    r.record("protocols.protocol2_state_vs_oracle", 1e-10, p2_fid);
    Ok(())
}

fn spectral_suite(r: &mut Runner<'_>, max_n: usize, rng: &mut ProtocolRng) -> Result<()> {
    let top = max_n.min(10);
    let mut diag = 0.0f64;
    let mut closed = 0.0f64;
    for draw in 0..10 {
        let p1 = random_gate(rng);
        let p2 = if draw % 2 == 0 {
            random_gate(rng)
        } else {
            hermitian_partner(&p1, rng.uniform() * std::f64::consts::TAU)
        };
        let c = algebra::commutator_constant(&p1, &p2);
        if c.norm() < 1e-3 {
            continue;
        }
        for n in 0..=top {
            let basis = spectral::build_fixed_point_basis(n, &p1, &p2)?;
            for order in [ProtocolOrder::P2ThenP1, ProtocolOrder::P1ThenP2] {
                let conj = basis.conjugated(&p1, &p2, order)?;
                let expect =
                    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(basis.eigenvalues(order)));
                diag = diag.max(max_abs_entry(&(conj - expect)) / c.norm());
            }
            for j in 0..=n {
                if let Ok(coeffs) = spectral::fixed_point_coefficients(n, j, &p1, &p2) {
                    let closed_form = SymmetricState::new(n, coeffs)?;
                    closed = closed.max(1.0 - closed_form.fidelity(&basis.column(j))?);
                }
            }
        }
    }
    r.record(
        "spectral.diagonalization",
        spectral::DIAGONALIZATION_TOLERANCE,
        diag,
    );
    r.record("spectral.closed_form_overlap", 1e-8, closed);
    Ok(())
}

fn preparation_suite(r: &mut Runner<'_>, max_n: usize, rng: &mut ProtocolRng) -> Result<()> {
    let mut worst = 0.0f64;
    for n in 1..=max_n.min(8) {
        for _ in 0..10 {
            let target = SymmetricState::random(n, rng);
            let schedule = preparation::compile_schedule(&target)?;
            let run = preparation::run_schedule(&schedule, Mode::ExactPostselect)?;
            worst = worst.max(1.0 - run.state.fidelity(&target)?);
        }
    }
    r.record("preparation.round_trip", 1e-8, worst);
    Ok(())
}

fn krawtchouk_suite(r: &mut Runner<'_>, max_n: usize) -> Result<()> {
    let top = max_n.clamp(1, 20);
    let mut duality = 0.0f64;
    let mut recurrence = 0.0f64;
    let mut orthogonality = 0.0f64;
    for n in 0..=top {
        for p in [0.5, 0.3] {
            let params = KrawtchoukParams::new(p, n)?;
            // rows[x][i] = K_i(x)
            let rows: Vec<Vec<f64>> = (0..=n)
                .map(|x| krawtchouk_row(x, &params))
                .collect::<Result<_>>()?;
            let scale = rows.iter().flatten().fold(1.0f64, |a, v| a.max(v.abs()));
            #[allow(clippy::needless_range_loop)]
            for x in 0..=n {
                for i in 0..=n {
                    duality = duality.max((rows[x][i] - rows[i][x]).abs() / scale);
                    // difference equation in x
                    let (xf, nf, i_f) = (x as f64, n as f64, i as f64);
                    let up = if x < n {
                        p * (nf - xf) * rows[x + 1][i]
                    } else {
                        0.0
                    };
                    let down = if x > 0 {
                        xf * (1.0 - p) * rows[x - 1][i]
                    } else {
                        0.0
                    };
                    let res = up - (p * (nf - xf) + xf * (1.0 - p)) * rows[x][i]
                        + down
                        + i_f * rows[x][i];
                    recurrence = recurrence.max(res.abs() / (scale * (1.0 + nf)));
                }
            }
            for i in 0..=n {
                for j in 0..=n {
                    let s: f64 = (0..=n)
                        .map(|x| {
                            binomial(n, x)
                                * p.powi(x as i32)
                                * (1.0 - p).powi((n - x) as i32)
                                * rows[x][i]
                                * rows[x][j]
                        })
                        .sum();
                    let expect = if i == j {
                        1.0 / (binomial(n, i) * (p / (1.0 - p)).powi(i as i32))
                    } else {
                        0.0
                    };
                    let norm = (1.0 / (binomial(n, i) * (p / (1.0 - p)).powi(i as i32))).sqrt()
                        * (1.0 / (binomial(n, j) * (p / (1.0 - p)).powi(j as i32))).sqrt();
                    orthogonality = orthogonality.max((s - expect).abs() / norm);
                }
            }
        }
    }
    r.record("krawtchouk.self_duality", 1e-10, duality);
    r.record("krawtchouk.dual_recurrence", 1e-10, recurrence);
    r.record("krawtchouk.orthogonality", 1e-10, orthogonality);
    Ok(())
}
