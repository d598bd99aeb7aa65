//! Preparing symmetric states from the vacuum with Protocol 2 alone.
//!
//! Writing `|ψ> = sum_i ψ_i (a2†)^i (a1†)^(n-i) |vac> / sqrt(i!(n-i)!)`, the
//! target is a homogeneous polynomial of degree `n` in `(a1†, a2†)`. It
//! factors into linear forms `γ a1† + δ a2† = P2(γ, δ)`, one per root of
//!
//! ```text
//! Q(x) = sum_i ψ_i / sqrt(i!(n-i)!) x^i
//! ```
//!
//! A finite root `x` gives `(γ, δ) ∝ (-x, 1)`. Each unit of degree
//! deficiency (`ψ_n = 0`, a root at infinity) gives `(γ, δ) = (1, 0)`.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::algebra::GateParams;
use crate::combinatorics::ln_factorial;
use crate::dicke_space::SymmetricState;
use crate::error::{Error, Result};
use crate::protocols::{self, Mode};

/// Coefficients below this fraction of the largest are treated as zero
/// when locating roots at zero and at infinity.
pub const ZERO_COEFFICIENT: f64 = 1e-14;

/// Schedules whose reconstruction deficit `1 - fidelity` exceeds this are
/// rejected.
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-6;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Gate parameters of Protocol-2 steps building the target from `|D_0^0>`.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparationSchedule {
    pub steps: Vec<GateParams>,
    /// Finite roots of `Q`, zeros included, in the order of `steps`.
    pub finite_roots: Vec<Complex64>,
    /// `n - deg Q`; these steps come last.
    pub infinity_count: usize,
    /// `1 - fidelity` between the target and the state rebuilt from the
    /// roots in exact arithmetic on the polynomial side.
    pub residual: f64,
}

impl PreparationSchedule {
    pub fn n(&self) -> usize {
        self.steps.len()
    }
}

/// Coefficients of `Q`: `ψ_i / sqrt(i!(n-i)!)`.
pub fn target_polynomial(state: &SymmetricState) -> Result<Vec<Complex64>> {
    if state.norm_sqr() == 0.0 {
        return Err(Error::DegenerateState(
            "the zero vector has no generating polynomial",
        ));
    }
    let n = state.n();
    Ok(state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, &psi)| psi * (-0.5 * (ln_factorial(i) + ln_factorial(n - i))).exp())
        .collect())
}

/// Inverse of [`target_polynomial`], unnormalized.
fn state_from_polynomial(coeffs: &[Complex64]) -> SymmetricState {
    let n = coeffs.len() - 1;
    let amps = coeffs
        .iter()
        .enumerate()
        .map(|(i, &q)| q * (0.5 * (ln_factorial(i) + ln_factorial(n - i))).exp())
        .collect();
    SymmetricState::new(n, amps).expect("n + 1 coefficients")
}

fn horner(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = re(0.0);
    let mut dp = re(0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Radix-2 Parlett-Reinsch balancing of a complex matrix, in place.
fn balance(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    let norm1 = |z: &Complex64| z.re.abs() + z.im.abs();
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += norm1(&m[(j, i)]);
                    r += norm1(&m[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let (mut c, mut r) = (c, r);
            while c < r / 2.0 {
                c *= 4.0;
                r /= 4.0;
                f *= 2.0;
            }
            while c >= r * 2.0 {
                c /= 4.0;
                r *= 4.0;
                f /= 2.0;
            }
            if (c + r) < 0.95 * s {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// Roots of `sum_k c_k x^k` with `c_deg != 0` and `c_0 != 0`.
fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    let mut companion = DMatrix::from_element(deg, deg, re(0.0));
    for k in 0..deg {
        companion[(0, k)] = -coeffs[deg - 1 - k] / lead;
    }
    for k in 1..deg {
        companion[(k, k - 1)] = re(1.0);
    }
    balance(&mut companion);
    let schur = Schur::try_new(companion, f64::EPSILON, 10_000).ok_or(Error::RootFinding {
        residual: f64::INFINITY,
    })?;
    let eig = schur.eigenvalues().ok_or(Error::RootFinding {
        residual: f64::INFINITY,
    })?;
    Ok(eig
        .iter()
        .map(|&x| {
            let (p, dp) = horner(coeffs, x);
            if dp.norm() == 0.0 {
                return x;
            }
            let polished = x - p / dp;
            if horner(coeffs, polished).0.norm() < p.norm() {
                polished
            } else {
                x
            }
        })
        .collect())
}

fn step_for_root(x: Complex64) -> GateParams {
    let s = 1.0 / (1.0 + x.norm_sqr()).sqrt();
    GateParams::new(-x * s, re(s))
}

/// Product of the linear forms `γ z + δ y` as coefficients of `y^i z^(n-i)`.
fn expand_steps(steps: &[GateParams]) -> Vec<Complex64> {
    let mut poly = vec![re(1.0)];
    for g in steps {
        let mut next = vec![re(0.0); poly.len() + 1];
        for (i, &p) in poly.iter().enumerate() {
            next[i] += p * g.first();
            next[i + 1] += p * g.second();
        }
        poly = next;
    }
    poly
}

pub fn compile_schedule(state: &SymmetricState) -> Result<PreparationSchedule> {
    state.require_normalized()?;
    let n = state.n();
    let q = target_polynomial(state)?;
    let scale = q.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let is_zero = |z: &Complex64| z.norm() <= ZERO_COEFFICIENT * scale;

    let low = q.iter().take_while(|z| is_zero(z)).count();
    let high = q.iter().rev().take_while(|z| is_zero(z)).count();
    let core = &q[low..=n - high];

    let mut finite_roots = vec![re(0.0); low];
    finite_roots.extend(polynomial_roots(core)?);
    let mut steps: Vec<GateParams> = finite_roots.iter().map(|&x| step_for_root(x)).collect();
    steps.extend(std::iter::repeat_n(GateParams::real(1.0, 0.0), high));

    let rebuilt = state_from_polynomial(&expand_steps(&steps));
    let residual = (1.0 - state.fidelity(&rebuilt).unwrap_or(0.0)).max(0.0);
    if residual > RECONSTRUCTION_TOLERANCE {
        return Err(Error::RootFinding { residual });
    }
    Ok(PreparationSchedule {
        steps,
        finite_roots,
        infinity_count: high,
        residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreparationRun {
    /// State after the last successful step.
    pub state: SymmetricState,
    pub cumulative_probability: f64,
    pub step_probabilities: Vec<f64>,
    /// Sampled mode: index of the step at which Protocol 2 failed.
    pub failed_step: Option<usize>,
}

/// Apply Protocol 2 with each scheduled gate, starting from the vacuum.
pub fn run_schedule(schedule: &PreparationSchedule, mut mode: Mode<'_>) -> Result<PreparationRun> {
    let mut run = PreparationRun {
        state: SymmetricState::vacuum(),
        cumulative_probability: 1.0,
        step_probabilities: Vec::with_capacity(schedule.steps.len()),
        failed_step: None,
    };
    for (k, g) in schedule.steps.iter().enumerate() {
        let exact = protocols::protocol2_exact(&run.state, g)?;
        let p = exact.success_probability;
        let success = match &mut mode {
            Mode::ExactPostselect => true,
            Mode::Sampled(rng) => rng.uniform() < p,
        };
        if !success {
            run.failed_step = Some(k);
            return Ok(run);
        }
        run.state = exact.success_state.ok_or(Error::ZeroProbabilityBranch)?;
        run.cumulative_probability *= p;
        run.step_probabilities.push(p);
    }
    Ok(run)
}
