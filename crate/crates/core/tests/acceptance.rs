#![allow(clippy::needless_range_loop)]

//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! Run with `cargo test -p dicke --test acceptance`. Detail lines under each
//! criterion give the measured residual of every part against its bound.
//! Lines marked `note` are diagnostics and do not affect the verdict.

use std::process::ExitCode;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_distr::StandardNormal;

use dicke::algebra::{self, GateParams, ProtocolOrder};
use dicke::krawtchouk::{krawtchouk_row, KrawtchoukParams};
use dicke::oracle::{self, qpe, scheme, FullState, QpeReadout, ShiftCircuit, SymmetryTest};
use dicke::preparation;
use dicke::protocols::{self, Mode};
use dicke::spectral;
use dicke::{DickeIndex, ProtocolRng, SymmetricState};

type C = Complex64;
type Mat = DMatrix<C>;

const SEED: u64 = 0x00d1_cce5;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn max_abs(m: &Mat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A residual held to `value <= bound`. Fidelities enter as `1 - F`.
struct Part {
    label: &'static str,
    value: f64,
    bound: f64,
}

impl Part {
    fn max(label: &'static str, value: f64, bound: f64) -> Self {
        Self {
            label,
            value,
            bound,
        }
    }

    fn ok(&self) -> bool {
        self.value <= self.bound
    }
}

struct Outcome {
    id: usize,
    title: &'static str,
    parts: Vec<Part>,
    notes: Vec<String>,
}

impl Outcome {
    fn new(id: usize, title: &'static str) -> Self {
        Self {
            id,
            title,
            parts: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn passed(&self) -> bool {
        self.parts.iter().all(Part::ok)
    }

    fn print(&self) {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {:>2}: {}", self.id, self.title);
        for p in &self.parts {
            let mark = if p.ok() { "ok  " } else { "FAIL" };
            println!(
                "       {mark} {:<50} {:.3e} (need <= {:.1e})",
                p.label, p.value, p.bound
            );
        }
        for n in &self.notes {
            println!("       note {n}");
        }
    }
}

fn rng() -> ProtocolRng {
    ProtocolRng::seed_from_u64(SEED)
}

fn normal_c(rng: &mut ProtocolRng) -> C {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn complex_params(rng: &mut ProtocolRng) -> (C, C) {
    (normal_c(rng), normal_c(rng))
}

fn unit_pair(rng: &mut ProtocolRng) -> (C, C) {
    let (a, b) = complex_params(rng);
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    (a / norm, b / norm)
}

fn gate(p: (C, C)) -> GateParams {
    GateParams::new(p.0, p.1)
}

fn dicke(n: usize, i: usize) -> SymmetricState {
    SymmetricState::dicke(DickeIndex::new(n, i).unwrap())
}

// Ladder operators built directly from their action on |D_n^i>, one
// sector at a time: a1 = sqrt(n-i), a2 = sqrt(i), a1† = sqrt(n+1-i),
// a2† = sqrt(i+1).

fn a1(n: usize) -> Mat {
    Mat::from_fn(n.max(1), n + 1, |r, col| {
        if n > 0 && r == col {
            c(((n - col) as f64).sqrt(), 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

fn a2(n: usize) -> Mat {
    Mat::from_fn(n.max(1), n + 1, |r, col| {
        if n > 0 && col == r + 1 {
            c((col as f64).sqrt(), 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

fn a1_dag(n: usize) -> Mat {
    Mat::from_fn(n + 2, n + 1, |r, col| {
        if r == col {
            c(((n + 1 - col) as f64).sqrt(), 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

fn a2_dag(n: usize) -> Mat {
    Mat::from_fn(n + 2, n + 1, |r, col| {
        if r == col + 1 {
            c(((col + 1) as f64).sqrt(), 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

fn p1(n: usize, (alpha, beta): (C, C)) -> Mat {
    a1(n) * alpha + a2(n) * beta
}

fn p2(n: usize, (gamma, delta): (C, C)) -> Mat {
    a1_dag(n) * gamma + a2_dag(n) * delta
}

/// `P1 P2` on sector `n` as an operator product (P2 acts first).
fn p1_p2(n: usize, g1: (C, C), g2: (C, C)) -> Mat {
    p1(n + 1, g1) * p2(n, g2)
}

/// `P2 P1` on sector `n` (P1 acts first). Zero on the vacuum.
fn p2_p1(n: usize, g1: (C, C), g2: (C, C)) -> Mat {
    if n == 0 {
        return Mat::zeros(1, 1);
    }
    p2(n - 1, g2) * p1(n, g1)
}

// Spin-n/2 matrices in the Dicke basis, m = n/2 - i.
fn spin(n: usize) -> (Mat, Mat, Mat) {
    let j = n as f64 / 2.0;
    let mut plus = Mat::zeros(n + 1, n + 1);
    for i in 1..=n {
        let m = j - i as f64;
        plus[(i - 1, i)] = c((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let minus = plus.adjoint();
    let jx = (&plus + &minus) * c(0.5, 0.0);
    let jy = (&plus - &minus) * c(0.0, -0.5);
    let jz = Mat::from_diagonal(&DVector::from_fn(n + 1, |i, _| c(j - i as f64, 0.0)));
    (jx, jy, jz)
}

/// `v_x J^x + v_y J^y + v_z J^z + v_0 N` with `v_x = αδ + γβ`,
/// `v_y = i(γβ - αδ)`, `v_z = αγ - δβ`, `v_0 = (αγ + δβ)/2`.
fn su2_combination(n: usize, (alpha, beta): (C, C), (gamma, delta): (C, C)) -> Mat {
    let vx = alpha * delta + gamma * beta;
    let vy = c(0.0, 1.0) * (gamma * beta - alpha * delta);
    let vz = alpha * gamma - delta * beta;
    let v0 = (alpha * gamma + delta * beta) / 2.0;
    let (jx, jy, jz) = spin(n);
    jx * vx + jy * vy + jz * vz + Mat::identity(n + 1, n + 1) * (v0 * n as f64)
}

fn commutator_constant((alpha, beta): (C, C), (gamma, delta): (C, C)) -> C {
    alpha * gamma + delta * beta
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new(1, "Weyl-algebra suite, n <= 10, 100 random complex draws");
    let mut rng = rng();
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);

    // [a_i, a_j†] = δ_ij on every basis state, operationally
    let lowers: [fn(&SymmetricState) -> dicke::Result<SymmetricState>; 2] =
        [algebra::apply_a1, algebra::apply_a2];
    let raises: [fn(&SymmetricState) -> SymmetricState; 2] =
        [algebra::apply_a1_dag, algebra::apply_a2_dag];
    let mut weyl = 0.0f64;
    for n in 0..=10 {
        for i in 0..=n {
            let s = dicke(n, i);
            for (a, lower) in lowers.iter().enumerate() {
                for (b, raise) in raises.iter().enumerate() {
                    let ab = lower(&raise(&s)).unwrap();
                    let ba = lower(&s)
                        .map(|x| raise(&x))
                        .unwrap_or(SymmetricState::zero(n));
                    let lhs = ab.combine(one, &ba, -one).unwrap();
                    let rhs = s.scaled(if a == b { one } else { zero });
                    weyl = weyl.max(lhs.max_abs_diff(&rhs).unwrap());
                }
            }
        }
    }
    out.parts
        .push(Part::max("[a_i, a_j+] - delta_ij", weyl, 1e-10));

    let (mut number, mut lit, mut true_form) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let (g1, g2) = (complex_params(&mut rng), complex_params(&mut rng));
        let (gp1, gp2) = (gate(g1), gate(g2));
        let cc = commutator_constant(g1, g2);
        for n in 0..=10 {
            for i in 0..=n {
                let s = dicke(n, i);
                let up = algebra::apply_p2(&gp2, &s);
                let comm = algebra::apply_number(&up)
                    .combine(
                        one,
                        &algebra::apply_p2(&gp2, &algebra::apply_number(&s)),
                        -one,
                    )
                    .unwrap();
                number = number.max(comm.max_abs_diff(&up).unwrap());

                // P2 P1 - P1 P2 on |s>
                let p1p2 = algebra::apply_p1(&gp1, &up).unwrap();
                let p2p1 = if n == 0 {
                    SymmetricState::zero(0)
                } else {
                    let down = algebra::apply_p1(&gp1, &s).unwrap();
                    let comm = algebra::apply_number(&down)
                        .combine(
                            one,
                            &algebra::apply_p1(&gp1, &algebra::apply_number(&s)).unwrap(),
                            -one,
                        )
                        .unwrap();
                    number = number.max(comm.max_abs_diff(&down.scaled(-one)).unwrap());
                    algebra::apply_p2(&gp2, &down)
                };
                let bracket = p2p1.combine(one, &p1p2, -one).unwrap();
                lit = lit.max(bracket.max_abs_diff(&s.scaled(cc)).unwrap());
                true_form = true_form.max(bracket.max_abs_diff(&s.scaled(-cc)).unwrap());
            }
        }
    }
    out.parts
        .push(Part::max("[N,P2] - P2 and [N,P1] + P1", number, 1e-10));
    out.parts.push(Part::max(
        "[P2,P1] - (alpha gamma + delta beta) Id",
        lit,
        1e-10,
    ));
    out.notes.push(format!(
        "[P2,P1] + (alpha gamma + delta beta) Id, i.e. [P1,P2] = (alpha gamma + delta beta) Id: residual {true_form:.3e}"
    ));
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new(2, "P1 P2 on D_n equals v.J + v0 N, n <= 8, 100 draws");
    let mut rng = rng();
    let (mut lit, mut lib, mut swapped, mut shifted) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let (g1, g2) = (complex_params(&mut rng), complex_params(&mut rng));
        let cc = commutator_constant(g1, g2);
        for n in 0..=8 {
            let prod = p1_p2(n, g1, g2);
            let target = su2_combination(n, g1, g2);
            lit = lit.max(max_abs(&(&prod - &target)));
            lib = lib.max(max_abs(
                &(algebra::p1p2_matrix(&gate(g1), &gate(g2), n) - &prod),
            ));
            swapped = swapped.max(max_abs(&(p2_p1(n, g1, g2) - &target)));
            shifted = shifted.max(max_abs(&(prod - target - Mat::identity(n + 1, n + 1) * cc)));
        }
    }
    out.parts.push(Part::max(
        "library P1 P2 vs independent ladder product",
        lib,
        1e-12,
    ));
    out.parts
        .push(Part::max("P1 P2 - (v.J + v0 N), entrywise", lit, 1e-10));
    out.notes
        .push(format!("P2 P1 - (v.J + v0 N): residual {swapped:.3e}"));
    out.notes.push(format!(
        "P1 P2 - (v.J + v0 N) - (alpha gamma + delta beta) Id: residual {shifted:.3e}"
    ));
    out
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new(
        3,
        "protocols agree with full-statevector execution, n <= 8, 50 draws",
    );
    let mut rng = rng();
    let (mut p1_gap, mut p1_fid, mut invariance, mut p2_gap, mut p2_fid) =
        (0.0f64, 1.0f64, 0.0f64, 0.0f64, 1.0f64);
    for n in 0..=8 {
        for _ in 0..50 {
            let psi = SymmetricState::random(n, &mut rng);
            let g = gate(unit_pair(&mut rng));
            if n > 0 {
                let exact = protocols::protocol1_exact(&psi, &g).unwrap();
                let target = rng.random_range(0..n);
                let o = oracle::protocol1_oracle(&psi, &g, target).unwrap();
                p1_gap = p1_gap.max((o.success_probability - exact.success_probability).abs());
                if let (Some(a), Some(b)) = (&o.success_state, &exact.success_state) {
                    p1_fid = p1_fid.min(a.fidelity(b).unwrap());
                }
                for q in 0..n {
                    let other = oracle::protocol1_oracle(&psi, &g, q).unwrap();
                    invariance =
                        invariance.max((other.success_probability - o.success_probability).abs());
                    if let (Some(a), Some(b)) = (&other.success_state, &o.success_state) {
                        invariance = invariance.max(1.0 - a.fidelity(b).unwrap());
                    }
                }
            }
            let exact = protocols::protocol2_exact(&psi, &g).unwrap();
            let o = oracle::protocol2_oracle(&psi, &g, SymmetryTest::ExactProjector).unwrap();
            p2_gap = p2_gap.max((o.success_probability - exact.success_probability).abs());
            if let (Some(a), Some(b)) = (&o.success_state, &exact.success_state) {
                p2_fid = p2_fid.min(a.fidelity(b).unwrap());
            }
        }
    }
    out.parts.push(Part::max(
        "Protocol 1 success-probability gap",
        p1_gap,
        1e-10,
    ));
    out.parts.push(Part::max(
        "1 - Protocol 1 post-state fidelity",
        1.0 - p1_fid,
        1e-10,
    ));
    out.parts.push(Part::max(
        "Protocol 1 spread over measured qubit",
        invariance,
        1e-10,
    ));
    out.parts.push(Part::max(
        "Protocol 2 success-probability gap",
        p2_gap,
        1e-10,
    ));
    out.parts.push(Part::max(
        "1 - Protocol 2 post-state fidelity",
        1.0 - p2_fid,
        1e-10,
    ));
    out
}

/// Largest distance after greedily pairing each expected value with the
/// nearest unused diagonal entry.
fn multiset_distance(diag: &[C], expected: &[C]) -> f64 {
    let mut used = vec![false; diag.len()];
    let mut worst = 0.0f64;
    for e in expected {
        let (k, d) = diag
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, z)| (k, (z - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new(
        4,
        "B^-1 (P1 P2) B diagonal, eigenvalues (alpha gamma + beta delta)(n - i), n <= 10",
    );
    let mut rng = rng();
    let (mut offdiag, mut multiset, mut overlap) = (0.0f64, 0.0f64, 1.0f64);
    let (mut shifted, mut swapped) = (0.0f64, 0.0f64);
    let mut draws = 0;
    let mut non_hermitian = 0;
    while draws < 50 {
        let g1 = unit_pair(&mut rng);
        let g2 = if draws < 45 {
            // (γ, δ) = e^{iχ}(α*, β*)
            let ph = C::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU);
            (ph * g1.0.conj(), ph * g1.1.conj())
        } else {
            unit_pair(&mut rng)
        };
        let cc = commutator_constant(g1, g2);
        if cc.norm() < 1e-2 {
            continue;
        }
        draws += 1;
        let hermitian_up_to_phase = {
            let m = p1_p2(3, g1, g2) / cc;
            max_abs(&(&m - m.adjoint())) < 1e-12
        };
        if !hermitian_up_to_phase {
            non_hermitian += 1;
        }
        for n in 0..=10 {
            let basis = spectral::build_fixed_point_basis(n, &gate(g1), &gate(g2)).unwrap();
            let b = basis.matrix().clone();
            let lu = b.clone().lu();
            let conj = lu.solve(&(p1_p2(n, g1, g2) * &b)).unwrap();
            let diag: Vec<C> = conj.diagonal().iter().copied().collect();
            let mut off = conj.clone();
            off.fill_diagonal(c(0.0, 0.0));
            offdiag = offdiag.max(max_abs(&off));
            let expected: Vec<C> = (0..=n).map(|i| cc * (n - i) as f64).collect();
            multiset = multiset.max(multiset_distance(&diag, &expected));
            let expected_shift: Vec<C> = (0..=n).map(|i| cc * (n + 1 - i) as f64).collect();
            shifted = shifted.max(multiset_distance(&diag, &expected_shift));
            let other = lu.solve(&(p2_p1(n, g1, g2) * &b)).unwrap();
            let other_diag: Vec<C> = other.diagonal().iter().copied().collect();
            swapped = swapped.max(multiset_distance(&other_diag, &expected));

            for j in 0..=n {
                if let Ok(coeffs) = spectral::fixed_point_coefficients(n, j, &gate(g1), &gate(g2)) {
                    let closed = SymmetricState::new(n, coeffs).unwrap();
                    overlap = overlap.min(closed.fidelity(&basis.column(j)).unwrap());
                }
            }
        }
    }
    out.parts.push(Part::max(
        "off-diagonal entries of B^-1 (P1 P2) B",
        offdiag,
        1e-8,
    ));
    out.parts.push(Part::max(
        "diagonal vs {(alpha gamma + beta delta)(n - i)}",
        multiset,
        1e-8,
    ));
    out.parts.push(Part::max(
        "1 - closed-form Krawtchouk vs B columns overlap",
        1.0 - overlap,
        1e-8,
    ));
    out.notes
        .push(format!("{non_hermitian} of 50 draws are non-hermitian"));
    out.notes.push(format!(
        "diagonal of B^-1 (P1 P2) B vs {{(alpha gamma + beta delta)(n - i + 1)}}: {shifted:.3e}"
    ));
    out.notes.push(format!(
        "diagonal of B^-1 (P2 P1) B vs {{(alpha gamma + beta delta)(n - i)}}: {swapped:.3e}"
    ));
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new(5, "Hadamard suite");
    let mut rng = rng();
    let mut conj = 0.0f64;
    for n in 0..=6 {
        conj = conj.max(scheme::hadamard_conjugation_residual(n).unwrap());
    }
    let (mut fid, mut inv) = (1.0f64, 0.0f64);
    let h = GateParams::hadamard().gate_matrix();
    for n in 0..=10 {
        for _ in 0..5 {
            let psi = SymmetricState::random(n, &mut rng);
            let fast = spectral::hadamard_transform(&psi);
            let mut full = oracle::embed(&psi).unwrap();
            for q in 0..n {
                full.apply_matrix(q, &h).unwrap();
            }
            let (slow, _) = oracle::project_symmetric(&full);
            fid = fid.min(fast.fidelity(&slow).unwrap());
            inv = inv.max(
                spectral::hadamard_transform(&fast)
                    .max_abs_diff(&psi)
                    .unwrap(),
            );
        }
    }
    out.parts
        .push(Part::max("H^n A H^n - A*, n <= 6", conj, 1e-10));
    out.parts.push(Part::max(
        "1 - Dicke-basis transform vs oracle, n <= 10",
        1.0 - fid,
        1e-10,
    ));
    out.parts
        .push(Part::max("transform applied twice - identity", inv, 1e-10));
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new(6, "Hamming-scheme suite");
    let (mut violation, mut mismatches, mut dicke_res) = (0i64, 0usize, 0.0f64);
    for n in 0..=5 {
        violation = violation.max(scheme::bose_mesner(n).unwrap().max_violation);
        mismatches += scheme::p_polynomial_mismatches(n).unwrap();
    }
    for n in 0..=6 {
        dicke_res = dicke_res.max(scheme::dicke_from_distance_residual(n).unwrap());
    }
    out.parts.push(Part::max(
        "Bose-Mesner closure, integer violation",
        violation as f64,
        0.0,
    ));
    out.parts.push(Part::max(
        "A_i vs C(n,i) K_i((n - A)/2), mismatched entries",
        mismatches as f64,
        0.0,
    ));
    out.parts.push(Part::max(
        "A_i|0> / sqrt C(n,i) vs embedded Dicke",
        dicke_res,
        1e-12,
    ));
    out
}

/// Target whose polynomial `sum_i ψ_i x^i / sqrt(i!(n-i)!)` is `q`.
fn state_from_poly(q: &[C]) -> SymmetricState {
    let n = q.len() - 1;
    let fact = |k: usize| (1..=k).map(|v| v as f64).product::<f64>();
    let amps = q
        .iter()
        .enumerate()
        .map(|(i, z)| z * (fact(i) * fact(n - i)).sqrt())
        .collect();
    SymmetricState::new(n, amps)
        .unwrap()
        .normalized()
        .unwrap()
        .0
}

fn poly_from_roots(roots: &[C]) -> Vec<C> {
    let mut q = vec![c(1.0, 0.0)];
    for r in roots {
        let mut next = vec![c(0.0, 0.0); q.len() + 1];
        for (k, a) in q.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        q = next;
    }
    q
}

/// Rebuild the target by running every scheduled Protocol 2 step on the
/// full register.
fn prepare_on_oracle(target: &SymmetricState) -> f64 {
    let schedule = preparation::compile_schedule(target).unwrap();
    let mut state = SymmetricState::vacuum();
    for g in &schedule.steps {
        state = oracle::protocol2_oracle(&state, g, SymmetryTest::ExactProjector)
            .unwrap()
            .success_state
            .unwrap();
    }
    state.fidelity(target).unwrap()
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new(
        7,
        "preparation round trip, 100 random targets per n in 1..8 plus degenerate targets",
    );
    let mut rng = rng();
    let mut random_fid = 1.0f64;
    for n in 1..=8 {
        for _ in 0..100 {
            random_fid = random_fid.min(prepare_on_oracle(&SymmetricState::random(n, &mut rng)));
        }
    }
    let (mut edge_fid, mut triple_fid) = (1.0f64, 1.0f64);
    for n in 2..=8 {
        for _ in 0..10 {
            let psi = SymmetricState::random(n, &mut rng);
            let mut top = psi.amplitudes().to_vec();
            top[n] = c(0.0, 0.0);
            let mut bottom = psi.amplitudes().to_vec();
            bottom[0] = c(0.0, 0.0);
            for amps in [top, bottom] {
                let s = SymmetricState::new(n, amps)
                    .unwrap()
                    .normalized()
                    .unwrap()
                    .0;
                edge_fid = edge_fid.min(prepare_on_oracle(&s));
            }
        }
        if n >= 3 {
            for _ in 0..10 {
                let r = normal_c(&mut rng);
                let mut roots = vec![r; 3];
                roots.extend((3..n).map(|_| normal_c(&mut rng)));
                triple_fid = triple_fid.min(prepare_on_oracle(&state_from_poly(&poly_from_roots(
                    &roots,
                ))));
            }
        }
    }
    out.parts.push(Part::max(
        "1 - random targets, fidelity",
        1.0 - random_fid,
        1e-8,
    ));
    out.parts.push(Part::max(
        "1 - psi_n = 0 or psi_0 = 0 targets, fidelity",
        1.0 - edge_fid,
        1e-8,
    ));
    out.parts.push(Part::max(
        "1 - triple-root targets, fidelity",
        1.0 - triple_fid,
        1e-6,
    ));
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new(
        8,
        "iterated convergence, n = 6, Hadamard parameters, 200 rounds",
    );
    let mut rng = rng();
    let n = 6;
    let h = GateParams::hadamard();
    let (mut fid, mut ratio_dev, mut shifted_dev) = (1.0f64, 0.0f64, 0.0f64);
    let mut ks = Vec::new();
    for _ in 0..20 {
        let psi = SymmetricState::random(n, &mut rng);
        let pred = protocols::asymptotic_prediction(&psi, &h, &h).unwrap();
        let log = protocols::iterate_composed(
            &psi,
            &h,
            &h,
            200,
            ProtocolOrder::P2ThenP1,
            Mode::ExactPostselect,
        )
        .unwrap();
        fid = fid.min(log.final_state.fidelity(&pred.limit_state).unwrap());

        let k = pred.k;
        ks.push(k);
        let d =
            protocols::successive_distances(&psi, &h, &h, 200, ProtocolOrder::P2ThenP1).unwrap();
        let claimed = (((n - k - 1) as f64) / ((n - k) as f64)).powi(2);
        let shifted = (((n - k) as f64) / ((n - k + 1) as f64)).powi(2);
        for w in d[150..].windows(2) {
            let r = w[1] / w[0];
            ratio_dev = ratio_dev.max((r / claimed - 1.0).abs());
            shifted_dev = shifted_dev.max((r / shifted - 1.0).abs());
        }
    }
    ks.sort();
    ks.dedup();
    out.parts.push(Part::max(
        "1 - fidelity with predicted B|D_n^k>",
        1.0 - fid,
        1e-6,
    ));
    out.parts.push(Part::max(
        "per-round ratio vs ((n-k-1)/(n-k))^2, relative",
        ratio_dev,
        0.05,
    ));
    out.notes
        .push(format!("limit index k over the draws: {ks:?}"));
    out.notes.push(format!(
        "per-round ratio vs ((n-k)/(n-k+1))^2, relative: {shifted_dev:.3e}"
    ));
    out
}

/// σ|x_1 ... x_m> = |x_m x_1 ... x_{m-1}>, written out on basis indices.
fn rotate(amps: &[C], m: usize) -> Vec<C> {
    let mut out = vec![c(0.0, 0.0); amps.len()];
    for (x, a) in amps.iter().enumerate() {
        let y = (x >> 1) | ((x & 1) << (m - 1));
        out[y] = *a;
    }
    out
}

fn criterion_9() -> Outcome {
    let mut out = Outcome::new(9, "total angular momentum measurement by phase estimation");
    let mut rng = rng();
    let mut zero_phase = 1.0f64;
    for m in 1..=6 {
        let mut inputs: Vec<SymmetricState> = (0..=m).map(|i| dicke(m, i)).collect();
        inputs.push(SymmetricState::random(m, &mut rng));
        for psi in &inputs {
            let full = oracle::embed(psi).unwrap();
            for t in 1..=4 {
                let o = qpe::qpe_angular_momentum(
                    &full,
                    t,
                    QpeReadout::Postselect,
                    ShiftCircuit::FredkinChain,
                )
                .unwrap();
                zero_phase = zero_phase.min(o.acceptance_probability);
            }
        }
    }

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = FullState::new(2, vec![c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)]).unwrap();
    let rejected = qpe::qpe_angular_momentum(
        &singlet,
        1,
        QpeReadout::Postselect,
        ShiftCircuit::FredkinChain,
    )
    .unwrap()
    .acceptance_probability;

    // e^{2πi/3} sector of three qubits: (1/3) sum_r e^{-2πir/3} σ^r applied to |001>
    let mut v = vec![c(0.0, 0.0); 8];
    let mut shifted = FullState::basis_state(3, 0b001)
        .unwrap()
        .amplitudes()
        .to_vec();
    for r in 0..3 {
        let w = C::from_polar(1.0, -std::f64::consts::TAU * r as f64 / 3.0);
        for (a, b) in v.iter_mut().zip(&shifted) {
            *a += w * b;
        }
        shifted = rotate(&shifted, 3);
    }
    let sector = FullState::new(3, v).unwrap().normalized().unwrap();
    let sigma_v = rotate(sector.amplitudes(), 3);
    let eigen_res = sigma_v
        .iter()
        .zip(sector.amplitudes())
        .map(|(a, b)| (a - C::from_polar(1.0, std::f64::consts::TAU / 3.0) * b).norm())
        .fold(0.0, f64::max);
    let measured = qpe::qpe_angular_momentum(
        &sector,
        2,
        QpeReadout::Postselect,
        ShiftCircuit::FredkinChain,
    )
    .unwrap()
    .acceptance_probability;
    let geometric = ((0..4)
        .map(|k| C::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0))
        .sum::<C>()
        / 4.0)
        .norm_sqr();

    let mut agree = 1.0f64;
    for m in 2..=6 {
        let amps: Vec<C> = (0..1usize << m).map(|_| normal_c(&mut rng)).collect();
        let f = FullState::new(m, amps).unwrap().normalized().unwrap();
        for t in 1..=3 {
            let a = qpe::qpe_angular_momentum(
                &f,
                t,
                QpeReadout::Postselect,
                ShiftCircuit::FredkinChain,
            )
            .unwrap();
            let b =
                qpe::qpe_angular_momentum(&f, t, QpeReadout::Postselect, ShiftCircuit::Permutation)
                    .unwrap();
            agree = agree.min(a.post.unwrap().fidelity(&b.post.unwrap()).unwrap());
            agree = agree.min(1.0 - (a.acceptance_probability - b.acceptance_probability).abs());
        }
    }

    out.parts.push(Part::max(
        "1 - maximal-j acceptance, m <= 6, t <= 4",
        1.0 - zero_phase,
        1e-12,
    ));
    out.parts
        .push(Part::max("singlet acceptance, t = 1", rejected, 1e-12));
    out.parts.push(Part::max(
        "e^{2 pi i/3} sector is a sigma eigenvector",
        eigen_res,
        1e-12,
    ));
    out.parts.push(Part::max(
        "false accept - 1/16, m = 3, t = 2",
        (measured - 1.0 / 16.0).abs(),
        1e-10,
    ));
    out.parts.push(Part::max(
        "1 - Fredkin chain vs permutation fidelity",
        1.0 - agree,
        1e-12,
    ));
    out.notes.push(format!(
        "geometric sum |(1/4) sum_k e^(2 pi i k/3)|^2 = {geometric:.16}"
    ));
    out
}

fn big(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `K_i(x; p, n)` from the terminating series, exactly.
fn krawtchouk_exact(i: usize, x: usize, p: &BigRational, n: usize) -> BigRational {
    let inv_p = big(1) / p;
    let mut term = big(1);
    let mut total = big(1);
    for k in 0..i.min(x) {
        let k = k as i64;
        term = term * big(k - i as i64) * big(k - x as i64) * &inv_p
            / (big(k - n as i64) * big(k + 1));
        total += &term;
    }
    total
}

fn criterion_10() -> Outcome {
    let mut out = Outcome::new(10, "Krawtchouk suite, n <= 20, all integer arguments");
    let params = [(1i64, 2i64), (3, 10), (7, 10)];
    let (mut duality_half, mut recurrence_half) = (0.0f64, 0.0f64);
    let (mut duality_rel, mut recurrence_rel, mut exact_rel) = (0.0f64, 0.0f64, 0.0f64);
    for n in 0..=20usize {
        for &(num, den) in &params {
            let p = num as f64 / den as f64;
            let kp = KrawtchoukParams::new(p, n).unwrap();
            // k[x][i] = K_i(x)
            let k: Vec<Vec<f64>> = (0..=n).map(|x| krawtchouk_row(x, &kp).unwrap()).collect();
            let scale = k.iter().flatten().fold(1.0f64, |a, v| a.max(v.abs()));
            let (mut dual, mut rec) = (0.0f64, 0.0f64);
            for x in 0..=n {
                for i in 0..=n {
                    dual = dual.max((k[x][i] - k[i][x]).abs());
                    let nf = n as f64;
                    let fi = i as f64;
                    let next = if i < n {
                        p * (nf - fi) * k[x][i + 1]
                    } else {
                        0.0
                    };
                    let prev = if i > 0 {
                        fi * (1.0 - p) * k[x][i - 1]
                    } else {
                        0.0
                    };
                    let res = x as f64 * k[x][i] + next
                        - (p * (nf - fi) + fi * (1.0 - p)) * k[x][i]
                        + prev;
                    rec = rec.max(res.abs());
                }
            }
            if num * 2 == den {
                duality_half = duality_half.max(dual);
                recurrence_half = recurrence_half.max(rec);
            } else {
                duality_rel = duality_rel.max(dual / scale);
                recurrence_rel = recurrence_rel.max(rec / (scale * (1.0 + n as f64)));
            }
            let pr = BigRational::new(BigInt::from(num), BigInt::from(den));
            for x in 0..=n {
                for i in 0..=n {
                    let exact = krawtchouk_exact(i, x, &pr, n).to_f64().unwrap();
                    exact_rel = exact_rel.max((k[x][i] - exact).abs() / scale);
                }
            }
        }
    }
    out.parts.push(Part::max(
        "self-duality, p = 1/2, absolute",
        duality_half,
        1e-10,
    ));
    out.parts.push(Part::max(
        "three-term recurrence, p = 1/2, absolute",
        recurrence_half,
        1e-10,
    ));
    out.parts.push(Part::max(
        "self-duality, p in {0.3, 0.7}, / max|K|",
        duality_rel,
        1e-10,
    ));
    out.parts.push(Part::max(
        "recurrence, p in {0.3, 0.7}, / ((n+1) max|K|)",
        recurrence_rel,
        1e-10,
    ));
    out.parts.push(Part::max(
        "agreement with exact rational series, / max|K|",
        exact_rel,
        1e-10,
    ));
    out
}

fn main() -> ExitCode {
    // libtest flags are accepted and ignored
    let criteria: [fn() -> Outcome; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let mut passed = 0;
    for run in criteria {
        let outcome = run();
        outcome.print();
        if outcome.passed() {
            passed += 1;
        }
    }
    println!("{passed}/10 criteria passed");
    if passed == 10 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
