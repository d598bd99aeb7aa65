//! Hadamard transform, fixed points of the composed protocols, and the
//! map `B = exp(iθ Jz) exp(iφ Jy)` that diagonalizes them.
//!
//! On `D_n` the operator `P2 P1 = v.J + v_0 N` is a complexified rotation of
//! `c Jz` with `c = αγ + δβ`, so its eigenvalues are `c (n - j)`; the other
//! order `P1 P2` only adds `c`. The columns `B|D_n^j>` are common
//! eigenvectors of both orders: fixed points, up to normalization, of any
//! number of successful rounds.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{self, GateParams, ProtocolOrder};
use crate::combinatorics::binomial;
use crate::dicke_space::{DickeIndex, SymmetricState};
use crate::error::{Error, Result};
use crate::extended::{self, Cdd};
use crate::krawtchouk::{krawtchouk_row, krawtchouk_row_extended, KrawtchoukParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Entrywise tolerance for accepting a diagonalizing branch.
pub const DIAGONALIZATION_TOLERANCE: f64 = 1e-8;

/// Imaginary parts below this count as real angles.
pub const REAL_ANGLE_TOLERANCE: f64 = 1e-10;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `2^{-n/2} sum_k sqrt(C(n,i) C(n,k)) K_i(k; 1/2, n) psi_k`: the action of
/// `H^{⊗n}` on Dicke amplitudes.
pub fn hadamard_transform(state: &SymmetricState) -> SymmetricState {
    let n = state.n();
    let params = KrawtchoukParams::half(n);
    let scale = 2f64.powf(-(n as f64) / 2.0);
    let mut out = SymmetricState::zero(n);
    for (k, &psi_k) in state.amplitudes().iter().enumerate() {
        if psi_k == re(0.0) {
            continue;
        }
        let row = krawtchouk_row(k, &params).expect("k <= n");
        let ck = binomial(n, k);
        for (i, amp) in out.amps_mut().iter_mut().enumerate() {
            *amp += psi_k * (scale * (binomial(n, i) * ck).sqrt() * row[i]);
        }
    }
    out
}

/// `|F_n^i> = H^{⊗n} |D_n^i>`, the eigenvector of `2Jx` for `n - 2i`.
pub fn adjacency_eigenvector(n: usize, i: usize) -> Result<SymmetricState> {
    let idx = DickeIndex::new(n, i)?;
    Ok(hadamard_transform(&SymmetricState::dicke(idx)))
}

/// Complex angles `(θ, φ)` parametrizing `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angles {
    pub theta: Complex64,
    pub phi: Complex64,
}

impl Angles {
    pub fn is_real(&self) -> bool {
        self.theta.im.abs() <= REAL_ANGLE_TOLERANCE && self.phi.im.abs() <= REAL_ANGLE_TOLERANCE
    }
}

/// Principal branch of `tan θ = v_y / v_x`, `cos φ = v_z / (αγ + δβ)`.
///
/// These angles are not guaranteed to diagonalize anything: the sign of `θ`
/// and the branch of `φ` are settled by [`build_fixed_point_basis`].
pub fn angles(p1: &GateParams, p2: &GateParams) -> Result<Angles> {
    let c = algebra::commutator_constant(p1, p2);
    if c == re(0.0) {
        return Err(Error::DegenerateSpectrum);
    }
    let v = algebra::symmetry_coeffs(p1, p2);
    let theta = if v.v_x == re(0.0) && v.v_y == re(0.0) {
        re(0.0)
    } else if v.v_x != re(0.0) {
        (v.v_y / v.v_x).atan()
    } else {
        complex_atan2(v.v_y, v.v_x)
    };
    let phi = (v.v_z / c).acos();
    Ok(Angles { theta, phi })
}

/// `atan2` continued to complex arguments: the angle with
/// `(cos θ, sin θ) ∝ (x, y)`. Undefined when `x² + y² = 0`.
fn complex_atan2(y: Complex64, x: Complex64) -> Complex64 {
    let r = (x * x + y * y).sqrt();
    -I * ((x + I * y) / r).ln()
}

/// `exp(i θ Jz)` on `D_n`.
pub fn exp_i_jz(theta: Complex64, n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n + 1, n + 1, |r, c| {
        if r == c {
            (I * theta * ((n as f64 - 2.0 * r as f64) / 2.0)).exp()
        } else {
            re(0.0)
        }
    })
}

/// `exp(i φ Jy)` on `D_n`, through the spectral decomposition of the
/// hermitian `Jy`. Valid for complex `φ`.
pub fn exp_i_jy(phi: Complex64, n: usize) -> DMatrix<Complex64> {
    let eig = algebra::jy_matrix(n).symmetric_eigen();
    let v = &eig.eigenvectors;
    let d = DMatrix::from_fn(n + 1, n + 1, |r, c| {
        if r == c {
            (I * phi * eig.eigenvalues[r]).exp()
        } else {
            re(0.0)
        }
    });
    v * d * v.adjoint()
}

/// How the columns of a [`FixedPointBasis`] were obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Construction {
    /// `B = exp(iθ Jz) exp(iφ Jy)` for the recorded branch.
    AngleBranch(Angles),
    /// Null vectors of `P2 P1 - c(n-j)`; used when no angle branch works.
    DirectEigen,
}

/// Fixed-point basis of the composed protocols on `D_n`.
#[derive(Debug, Clone)]
pub struct FixedPointBasis {
    n: usize,
    basis: DMatrix<Complex64>,
    c: Complex64,
    construction: Construction,
    warning: Option<String>,
}

impl FixedPointBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Columns `B|D_n^j>`, each of unit norm with its first nonzero entry
    /// positive real.
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.basis
    }

    pub fn column(&self, j: usize) -> SymmetricState {
        SymmetricState::new(self.n, self.basis.column(j).iter().copied().collect())
            .expect("column length n + 1")
    }

    /// `αγ + δβ`.
    pub fn commutator_constant(&self) -> Complex64 {
        self.c
    }

    /// Eigenvalue of column `j` under the composed round in `order`:
    /// `c(n - j + 1)` for `P1 P2`, `c(n - j)` for `P2 P1`.
    pub fn eigenvalue(&self, j: usize, order: ProtocolOrder) -> Complex64 {
        let shift = match order {
            ProtocolOrder::P2ThenP1 => 1.0,
            ProtocolOrder::P1ThenP2 => 0.0,
        };
        self.c * ((self.n - j) as f64 + shift)
    }

    pub fn eigenvalues(&self, order: ProtocolOrder) -> Vec<Complex64> {
        (0..=self.n).map(|j| self.eigenvalue(j, order)).collect()
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    /// Set when the angle construction failed and columns came from the
    /// direct eigen-solve.
    pub fn warning(&self) -> Option<&str> {
        self.warning.as_deref()
    }

    /// `B⁻¹ M B` for the composed operator `M` of the given order, with
    /// `B⁻¹` from an LU factorization of the normalized basis.
    pub fn conjugated(
        &self,
        p1: &GateParams,
        p2: &GateParams,
        order: ProtocolOrder,
    ) -> Result<DMatrix<Complex64>> {
        let m = order.matrix(p1, p2, self.n);
        self.basis
            .clone()
            .lu()
            .solve(&(m * &self.basis))
            .ok_or(Error::SpectralConstruction {
                residual: f64::INFINITY,
            })
    }

    /// Expansion coefficients `χ` of `state = sum_j χ_j B|D_n^j>`.
    pub fn expand(&self, state: &SymmetricState) -> Result<Vec<Complex64>> {
        if state.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: state.n(),
            });
        }
        let rhs = DMatrix::from_column_slice(self.n + 1, 1, state.amplitudes());
        let chi = self
            .basis
            .clone()
            .lu()
            .solve(&rhs)
            .ok_or(Error::DegenerateSpectrum)?;
        Ok(chi.iter().copied().collect())
    }
}

/// Branches tried, in order: the sign of `θ` opposite to the principal one
/// first, since `v_y = c sinφ sinθ` and `v_x = -c sinφ cosθ` under the
/// `Jy` convention used here.
fn branch_candidates(a: Angles) -> Vec<Angles> {
    let pi = re(std::f64::consts::PI);
    let mut out = Vec::with_capacity(8);
    for theta in [-a.theta, -a.theta + pi, a.theta, a.theta + pi] {
        for phi in [a.phi, -a.phi] {
            out.push(Angles { theta, phi });
        }
    }
    out
}

fn finite(a: &Angles) -> bool {
    a.theta.is_finite() && a.phi.is_finite()
}

/// `max |B⁻¹ (v.J + v_0 N) B - c (Jz + n/2)|` for the branch `a`, with the
/// inverse taken analytically as `exp(-iφJy) exp(-iθJz)`.
fn branch_residual(
    a: &Angles,
    target: &DMatrix<Complex64>,
    c: Complex64,
    n: usize,
) -> (f64, DMatrix<Complex64>) {
    let b = exp_i_jz(a.theta, n) * exp_i_jy(a.phi, n);
    let b_inv = exp_i_jy(-a.phi, n) * exp_i_jz(-a.theta, n);
    let mut d = &b_inv * target * &b;
    for j in 0..=n {
        d[(j, j)] -= c * (n - j) as f64;
    }
    (algebra::max_abs_entry(&d), b)
}

/// First angle branch that diagonalizes `P2 P1` on `D_n`, with its `B`.
fn select_branch(
    p1: &GateParams,
    p2: &GateParams,
    n: usize,
) -> Result<Option<(Angles, DMatrix<Complex64>)>> {
    let principal = angles(p1, p2)?;
    let c = algebra::commutator_constant(p1, p2);
    let target = algebra::p2p1_matrix(p1, p2, n);
    for cand in branch_candidates(principal) {
        if !finite(&cand) {
            continue;
        }
        let (res, b) = branch_residual(&cand, &target, c, n);
        if res <= DIAGONALIZATION_TOLERANCE {
            return Ok(Some((cand, b)));
        }
    }
    Ok(None)
}

/// Unit norm, first entry above `1e-12` of the column maximum made real
/// positive.
fn canonical_column(col: &[Complex64]) -> Vec<Complex64> {
    let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let scale = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let lead = col
        .iter()
        .find(|z| z.norm() > 1e-12 * scale)
        .copied()
        .unwrap_or(re(1.0));
    let phase = lead.conj() / lead.norm();
    col.iter().map(|z| z * phase / norm).collect()
}

fn canonical_matrix(b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n1 = b.ncols();
    let cols: Vec<Vec<Complex64>> = (0..n1)
        .map(|j| canonical_column(&b.column(j).iter().copied().collect::<Vec<_>>()))
        .collect();
    DMatrix::from_fn(b.nrows(), n1, |r, c| cols[c][r])
}

/// Right singular vector of `m` for its smallest singular value.
fn null_vector(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let (k, _) =
        svd.singular_values
            .iter()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |best, (i, &s)| if s < best.1 { (i, s) } else { best },
            );
    v_t.row(k).iter().map(|z| z.conj()).collect()
}

fn direct_eigenbasis(p1: &GateParams, p2: &GateParams, n: usize) -> Result<DMatrix<Complex64>> {
    let c = algebra::commutator_constant(p1, p2);
    let m = algebra::p2p1_matrix(p1, p2, n);
    let mut cols = Vec::with_capacity(n + 1);
    let mut worst = 0.0f64;
    for j in 0..=n {
        let lambda = c * (n - j) as f64;
        let shifted = &m - DMatrix::<Complex64>::identity(n + 1, n + 1) * lambda;
        let v = canonical_column(&null_vector(&shifted));
        let x = DMatrix::from_column_slice(n + 1, 1, &v);
        worst = worst.max(algebra::max_abs_entry(&(shifted * x)));
        cols.push(v);
    }
    if worst > DIAGONALIZATION_TOLERANCE {
        return Err(Error::SpectralConstruction { residual: worst });
    }
    Ok(DMatrix::from_fn(n + 1, n + 1, |r, c| cols[c][r]))
}

/// Columns `B|D_n^j>` with `P2 P1 B|D_n^j> = c(n - j) B|D_n^j>` and
/// `P1 P2 B|D_n^j> = c(n - j + 1) B|D_n^j>`.
///
/// Tries the angle construction first. If no branch of `(θ, φ)` reaches
/// [`DIAGONALIZATION_TOLERANCE`], the columns are computed directly as null
/// vectors and the basis carries a warning.
pub fn build_fixed_point_basis(
    n: usize,
    p1: &GateParams,
    p2: &GateParams,
) -> Result<FixedPointBasis> {
    let c = algebra::commutator_constant(p1, p2);
    if c == re(0.0) {
        return Err(Error::DegenerateSpectrum);
    }
    if let Some((a, b)) = select_branch(p1, p2, n)? {
        return Ok(FixedPointBasis {
            n,
            basis: canonical_matrix(&b),
            c,
            construction: Construction::AngleBranch(a),
            warning: None,
        });
    }
    let basis = direct_eigenbasis(p1, p2, n)?;
    Ok(FixedPointBasis {
        n,
        basis,
        c,
        construction: Construction::DirectEigen,
        warning: Some(
            "no branch of (theta, phi) diagonalizes the composed operator; \
             columns computed as direct eigenvectors"
                .into(),
        ),
    })
}

/// Closed form of the fixed point `B|D_n^j>`:
/// `psi_i ∝ (δ/γ)^i sqrt(C(n,i)) K_i(j; βδ/(αγ+βδ), n)`.
///
/// The Krawtchouk row is accumulated in double-double precision and the
/// result is returned with the column phase convention of
/// [`FixedPointBasis`].
pub fn fixed_point_coefficients(
    n: usize,
    j: usize,
    p1: &GateParams,
    p2: &GateParams,
) -> Result<Vec<Complex64>> {
    if j > n {
        return Err(Error::IndexOutOfRange { index: j, max: n });
    }
    let (beta, gamma, delta) = (p1.second(), p2.first(), p2.second());
    let c = algebra::commutator_constant(p1, p2);
    if c == re(0.0) {
        return Err(Error::DegenerateSpectrum);
    }
    if gamma == re(0.0) {
        return Err(Error::ClosedFormNotApplicable("gamma = 0"));
    }
    if beta * delta == re(0.0) {
        return Err(Error::ClosedFormNotApplicable("beta * delta = 0"));
    }
    let p = beta * delta / c;
    let k = krawtchouk_row_extended(j, p, n)?;
    let ratio = extended::cdd(delta) / extended::cdd(gamma);
    let mut power: Cdd = extended::cdd(re(1.0));
    let mut coeffs = Vec::with_capacity(n + 1);
    for (i, ki) in k.iter().enumerate() {
        let b = extended::dd(binomial(n, i)).sqrt();
        coeffs.push(power * *ki * b);
        power *= ratio;
    }
    let unit = extended::normalize(&coeffs);
    Ok(canonical_column(
        &unit.into_iter().map(extended::to_c64).collect::<Vec<_>>(),
    ))
}

/// Single-qubit factor of `B` when the angles are real: `B = (-i U(μ, ν))^{⊗n}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryCaseGate {
    pub mu: Complex64,
    pub nu: Complex64,
    pub angles: Angles,
}

impl UnitaryCaseGate {
    /// `-i U(μ, ν)` as a 2x2 matrix.
    pub fn factor(&self) -> [[Complex64; 2]; 2] {
        let u = GateParams::new(self.mu, self.nu).gate_matrix();
        [[-I * u[0][0], -I * u[0][1]], [-I * u[1][0], -I * u[1][1]]]
    }

    /// The restriction of `(-i U(μ, ν))^{⊗n}` to `D_n`.
    pub fn basis(&self, n: usize) -> DMatrix<Complex64> {
        symmetric_power(&self.factor(), n)
    }
}

/// `μ = i e^{iθ/2} cos(φ/2)`, `ν = i e^{iθ/2} sin(φ/2)` for the branch of
/// `(θ, φ)` that diagonalizes the composed operator on one qubit, or `None`
/// when that branch has complex angles.
pub fn unitary_case_gate(p1: &GateParams, p2: &GateParams) -> Result<Option<UnitaryCaseGate>> {
    if algebra::commutator_constant(p1, p2) == re(0.0) {
        return Err(Error::DegenerateSpectrum);
    }
    let Some((a, _)) = select_branch(p1, p2, 1)? else {
        return Ok(None);
    };
    if !a.is_real() {
        return Ok(None);
    }
    let (theta, phi) = (a.theta.re, a.phi.re);
    let front = I * Complex64::from_polar(1.0, theta / 2.0);
    Ok(Some(UnitaryCaseGate {
        mu: front * (phi / 2.0).cos(),
        nu: front * (phi / 2.0).sin(),
        angles: Angles {
            theta: re(theta),
            phi: re(phi),
        },
    }))
}

/// Restriction of `V^{⊗n}` to the symmetric subspace, in the Dicke basis.
///
/// Column `j` collects the coefficients `c_i` of `z^{n-i} y^i` in
/// `(V00 z + V10 y)^{n-j} (V01 z + V11 y)^j`, rescaled by
/// `sqrt(i!(n-i)! / (j!(n-j)!))`.
pub fn symmetric_power(v: &[[Complex64; 2]; 2], n: usize) -> DMatrix<Complex64> {
    let mul = |poly: &[Complex64], z: Complex64, y: Complex64| -> Vec<Complex64> {
        let mut out = vec![re(0.0); poly.len() + 1];
        for (i, &p) in poly.iter().enumerate() {
            out[i] += p * z;
            out[i + 1] += p * y;
        }
        out
    };
    let mut m = DMatrix::from_element(n + 1, n + 1, re(0.0));
    for j in 0..=n {
        let mut poly = vec![re(1.0)];
        for _ in 0..n - j {
            poly = mul(&poly, v[0][0], v[1][0]);
        }
        for _ in 0..j {
            poly = mul(&poly, v[0][1], v[1][1]);
        }
        let col_scale = binomial(n, j).sqrt();
        for (i, &p) in poly.iter().enumerate() {
            m[(i, j)] = p * (col_scale / binomial(n, i).sqrt());
        }
    }
    m
}
