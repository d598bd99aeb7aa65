//! Ladder operators, protocol operators and the restricted su(2) generators.
//!
//! On the direct sum of all symmetric subspaces the two protocols act as
//!
//! ```text
//! P1(α, β) = α a1 + β a2          (removes a qubit)
//! P2(γ, δ) = γ a1† + δ a2†        (adds a qubit)
//! ```
//!
//! with the two commuting Weyl pairs
//!
//! ```text
//! a1 |D_n^i> = sqrt(n-i)   |D_{n-1}^i>      a1† |D_n^i> = sqrt(n+1-i) |D_{n+1}^i>
//! a2 |D_n^i> = sqrt(i)     |D_{n-1}^{i-1}>  a2† |D_n^i> = sqrt(i+1)   |D_{n+1}^{i+1}>
//! ```
//!
//! Both compositions preserve `n`. On each `D_n`
//!
//! ```text
//! P2 P1 = v_x Jx + v_y Jy + v_z Jz + v_0 N
//! P1 P2 = P2 P1 + (αγ + δβ)
//! ```
//!
//! with the coefficients of [`symmetry_coeffs`].
//!
//! Operators are applied directly to [`SymmetricState`] values in `O(n)`;
//! dense matrices are only built on request by [`sector_matrix`].

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dicke_space::SymmetricState;
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// A complex pair used either as a single-qubit gate `U(first, second)`
/// or as the coefficients of a protocol operator.
///
/// As a gate the pair parametrizes
///
/// ```text
/// U(a, b) = [ a    b  ]
///           [ b*  -a* ]
/// ```
///
/// and must satisfy `|a|^2 + |b|^2 = 1`. As an algebra element any complex
/// pair is allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateParams {
    first: Complex64,
    second: Complex64,
}

impl GateParams {
    pub const UNITARITY_TOLERANCE: f64 = 1e-12;

    /// Unconstrained pair, for use as an algebra element.
    pub const fn new(first: Complex64, second: Complex64) -> Self {
        Self { first, second }
    }

    /// Pair that must describe a unitary gate.
    pub fn physical(first: Complex64, second: Complex64) -> Result<Self> {
        let g = Self { first, second };
        g.require_physical()?;
        Ok(g)
    }

    pub fn real(first: f64, second: f64) -> Self {
        Self::new(re(first), re(second))
    }

    /// `(1/sqrt 2, 1/sqrt 2)`: `U` is the Hadamard gate.
    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::real(h, h)
    }

    pub fn first(&self) -> Complex64 {
        self.first
    }

    pub fn second(&self) -> Complex64 {
        self.second
    }

    pub fn norm_sqr(&self) -> f64 {
        self.first.norm_sqr() + self.second.norm_sqr()
    }

    pub fn is_physical(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= Self::UNITARITY_TOLERANCE
    }

    pub fn require_physical(&self) -> Result<()> {
        if self.is_physical() {
            Ok(())
        } else {
            Err(Error::NotPhysical {
                norm_sqr: self.norm_sqr(),
            })
        }
    }

    /// Rescale onto the unit sphere.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter(
                "gate parameters (0, 0) cannot be normalized".into(),
            ));
        }
        Ok(Self::new(self.first / norm, self.second / norm))
    }

    /// `[[a, b], [b*, -a*]]`, rows then columns.
    pub fn gate_matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [self.first, self.second],
            [self.second.conj(), -self.first.conj()],
        ]
    }
}

/// Coefficients `(v_x, v_y, v_z, v_0)` of `P2(γ,δ) P1(α,β)` in the basis
/// `(Jx, Jy, Jz, N)`. The other order adds `(αγ + δβ)` times the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryCoeffs {
    pub v_x: Complex64,
    pub v_y: Complex64,
    pub v_z: Complex64,
    pub v_0: Complex64,
}

impl SymmetryCoeffs {
    /// `v_x Jx + v_y Jy + v_z Jz + v_0 N` applied to `state`.
    pub fn apply(&self, state: &SymmetricState) -> SymmetricState {
        let x = apply_jx(state);
        let y = apply_jy(state);
        let z = apply_jz(state);
        let n = apply_number(state);
        let mut out = SymmetricState::zero(state.n());
        for (k, amp) in out.amps_mut().iter_mut().enumerate() {
            *amp = self.v_x * x.amplitude(k)
                + self.v_y * y.amplitude(k)
                + self.v_z * z.amplitude(k)
                + self.v_0 * n.amplitude(k);
        }
        out
    }

    pub fn matrix(&self, n: usize) -> DMatrix<Complex64> {
        sector_matrix(n, |s| Ok(self.apply(s))).expect("n-preserving operator")
    }
}

pub fn symmetry_coeffs(p1: &GateParams, p2: &GateParams) -> SymmetryCoeffs {
    let (alpha, beta) = (p1.first, p1.second);
    let (gamma, delta) = (p2.first, p2.second);
    SymmetryCoeffs {
        v_x: alpha * delta + gamma * beta,
        v_y: I * (gamma * beta - alpha * delta),
        v_z: alpha * gamma - delta * beta,
        v_0: (alpha * gamma + delta * beta) / 2.0,
    }
}

/// `αγ + δβ = <0| U(α,β) U(γ,δ*) |0>`, so that `[P1, P2] = αγ + δβ`.
pub fn commutator_constant(p1: &GateParams, p2: &GateParams) -> Complex64 {
    p1.first * p2.first + p2.second * p1.second
}

/// Lowers `n` by one. `coeff(i)` gives the weights of `|D_{n-1}^i>` and
/// `|D_{n-1}^{i-1}>` picked up from `psi_i`.
fn lower(state: &SymmetricState, a: Complex64, b: Complex64) -> Result<SymmetricState> {
    let n = state.n();
    if n == 0 {
        return Err(Error::Annihilated);
    }
    let psi = state.amplitudes();
    let mut out = SymmetricState::zero(n - 1);
    for (i, amp) in out.amps_mut().iter_mut().enumerate() {
        *amp = a * ((n - i) as f64).sqrt() * psi[i] + b * ((i + 1) as f64).sqrt() * psi[i + 1];
    }
    Ok(out)
}

fn raise(state: &SymmetricState, a: Complex64, b: Complex64) -> SymmetricState {
    let n = state.n();
    let psi = state.amplitudes();
    let mut out = SymmetricState::zero(n + 1);
    for (i, amp) in out.amps_mut().iter_mut().enumerate() {
        let mut v = Complex64::new(0.0, 0.0);
        if i <= n {
            v += a * ((n + 1 - i) as f64).sqrt() * psi[i];
        }
        if i >= 1 {
            v += b * (i as f64).sqrt() * psi[i - 1];
        }
        *amp = v;
    }
    out
}

pub fn apply_a1(state: &SymmetricState) -> Result<SymmetricState> {
    lower(state, re(1.0), re(0.0))
}

pub fn apply_a2(state: &SymmetricState) -> Result<SymmetricState> {
    lower(state, re(0.0), re(1.0))
}

pub fn apply_a1_dag(state: &SymmetricState) -> SymmetricState {
    raise(state, re(1.0), re(0.0))
}

pub fn apply_a2_dag(state: &SymmetricState) -> SymmetricState {
    raise(state, re(0.0), re(1.0))
}

/// The qubit-number operator `N|D_n^i> = n|D_n^i>`.
pub fn apply_number(state: &SymmetricState) -> SymmetricState {
    state.scaled(re(state.n() as f64))
}

/// `P1(α, β) = α a1 + β a2`, the map induced by a successful Protocol 1.
pub fn apply_p1(g: &GateParams, state: &SymmetricState) -> Result<SymmetricState> {
    lower(state, g.first, g.second)
}

/// `P2(γ, δ) = γ a1† + δ a2†`, the map induced by a successful Protocol 2.
pub fn apply_p2(g: &GateParams, state: &SymmetricState) -> SymmetricState {
    raise(state, g.first, g.second)
}

/// `P1(p1) P2(p2)`: Protocol 2 first, then Protocol 1.
pub fn apply_p1p2(p1: &GateParams, p2: &GateParams, state: &SymmetricState) -> SymmetricState {
    apply_p1(p1, &apply_p2(p2, state)).expect("P2 output has at least one qubit")
}

/// `P2(p2) P1(p1)`: Protocol 1 first, then Protocol 2.
pub fn apply_p2p1(
    p1: &GateParams,
    p2: &GateParams,
    state: &SymmetricState,
) -> Result<SymmetricState> {
    Ok(apply_p2(p2, &apply_p1(p1, state)?))
}

/// Which protocol runs first in a composed round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProtocolOrder {
    /// Protocol 2, then Protocol 1: the operator `P1 P2`.
    P2ThenP1,
    /// Protocol 1, then Protocol 2: the operator `P2 P1`.
    P1ThenP2,
}

impl ProtocolOrder {
    pub fn apply(
        self,
        p1: &GateParams,
        p2: &GateParams,
        state: &SymmetricState,
    ) -> Result<SymmetricState> {
        match self {
            Self::P2ThenP1 => Ok(apply_p1p2(p1, p2, state)),
            Self::P1ThenP2 => apply_p2p1(p1, p2, state),
        }
    }

    pub fn matrix(self, p1: &GateParams, p2: &GateParams, n: usize) -> DMatrix<Complex64> {
        match self {
            Self::P2ThenP1 => p1p2_matrix(p1, p2, n),
            Self::P1ThenP2 => p2p1_matrix(p1, p2, n),
        }
    }

    /// Constant added to `v.J + v_0 N` by this order: `αγ + δβ` or zero.
    pub fn offset(self, p1: &GateParams, p2: &GateParams) -> Complex64 {
        match self {
            Self::P2ThenP1 => commutator_constant(p1, p2),
            Self::P1ThenP2 => re(0.0),
        }
    }
}

/// Tridiagonal action of the n-preserving combination
/// `up * |D^{i+1}> + down * |D^{i-1}>` weighted by the su(2) ladder norms.
fn su2_offdiag(state: &SymmetricState, up: Complex64, down: Complex64) -> SymmetricState {
    let n = state.n();
    let psi = state.amplitudes();
    let mut out = SymmetricState::zero(n);
    let amps = out.amps_mut();
    for i in 0..=n {
        if i < n {
            amps[i + 1] += up * (((i + 1) * (n - i)) as f64).sqrt() / 2.0 * psi[i];
        }
        if i > 0 {
            amps[i - 1] += down * ((i * (n - i + 1)) as f64).sqrt() / 2.0 * psi[i];
        }
    }
    out
}

/// `Jx = A/2` on `D_n`, with `A` the hypercube adjacency matrix.
pub fn apply_jx(state: &SymmetricState) -> SymmetricState {
    su2_offdiag(state, re(1.0), re(1.0))
}

/// `Jy = i[Jx, Jz]` on `D_n`.
pub fn apply_jy(state: &SymmetricState) -> SymmetricState {
    su2_offdiag(state, I, -I)
}

/// `Jz = A*/2` on `D_n`: `Jz|D_n^i> = (n/2 - i)|D_n^i>`.
pub fn apply_jz(state: &SymmetricState) -> SymmetricState {
    let n = state.n() as f64;
    let mut out = state.clone();
    for (i, amp) in out.amps_mut().iter_mut().enumerate() {
        *amp *= (n - 2.0 * i as f64) / 2.0;
    }
    out
}

/// Dense matrix of `op` restricted to `D_n`, built column by column from
/// the Dicke basis. The row count follows the qubit count of the output.
pub fn sector_matrix<F>(n: usize, op: F) -> Result<DMatrix<Complex64>>
where
    F: Fn(&SymmetricState) -> Result<SymmetricState>,
{
    let mut columns = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut e = SymmetricState::zero(n);
        e.amps_mut()[i] = re(1.0);
        columns.push(op(&e)?);
    }
    let rows = columns[0].n() + 1;
    Ok(DMatrix::from_fn(rows, n + 1, |r, c| {
        columns[c].amplitude(r)
    }))
}

/// Largest entry modulus of a complex matrix.
pub fn max_abs_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn jx_matrix(n: usize) -> DMatrix<Complex64> {
    sector_matrix(n, |s| Ok(apply_jx(s))).expect("n-preserving operator")
}

pub fn jy_matrix(n: usize) -> DMatrix<Complex64> {
    sector_matrix(n, |s| Ok(apply_jy(s))).expect("n-preserving operator")
}

pub fn jz_matrix(n: usize) -> DMatrix<Complex64> {
    sector_matrix(n, |s| Ok(apply_jz(s))).expect("n-preserving operator")
}

/// Matrix of `P1(p1) P2(p2)` on `D_n`.
pub fn p1p2_matrix(p1: &GateParams, p2: &GateParams, n: usize) -> DMatrix<Complex64> {
    sector_matrix(n, |s| Ok(apply_p1p2(p1, p2, s))).expect("n-preserving operator")
}

/// Matrix of `P2(p2) P1(p1)` on `D_n`. Requires no extra qubit: the
/// lowering step leaves `n - 1 >= 0` qubits for `n >= 1`, and is the zero
/// map on `D_0`.
pub fn p2p1_matrix(p1: &GateParams, p2: &GateParams, n: usize) -> DMatrix<Complex64> {
    if n == 0 {
        return DMatrix::zeros(1, 1);
    }
    sector_matrix(n, |s| apply_p2p1(p1, p2, s)).expect("n >= 1")
}
