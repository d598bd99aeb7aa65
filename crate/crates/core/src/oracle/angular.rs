//! Total angular momentum on the full register and the Clebsch-Gordan
//! split of `|D_n^i> ⊗ (γ|0> + δ|1>)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dicke_space::{DickeIndex, SymmetricState};
use crate::error::{Error, Result};

use super::full_state::embed;
use super::scheme::MAX_DENSE_QUBITS;

/// Cap for dense `J^a` matrices.
pub const MAX_ANGULAR_QUBITS: usize = 10;
/// Eigenvalues of the Casimir matrix within this distance are one cluster.
pub const CLUSTER_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cap(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::TooManyQubits {
            requested: n,
            cap: limit,
        });
    }
    Ok(())
}

/// `sum_q σ^a_q / 2` on `n` qubits.
pub fn total_angular_momentum_matrix(n: usize, axis: Axis) -> Result<DMatrix<Complex64>> {
    cap(n, MAX_ANGULAR_QUBITS)?;
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        for q in 0..n {
            let bit = 1usize << (n - 1 - q);
            let one = x & bit != 0;
            // column x, row = image of |x> under σ^a on qubit q
            match axis {
                Axis::X => m[(x ^ bit, x)] += c(0.5, 0.0),
                Axis::Y => m[(x ^ bit, x)] += if one { c(0.0, -0.5) } else { c(0.0, 0.5) },
                Axis::Z => m[(x, x)] += if one { c(-0.5, 0.0) } else { c(0.5, 0.0) },
            }
        }
    }
    Ok(m)
}

/// `(J^x)^2 + (J^y)^2 + (J^z)^2`.
pub fn casimir_matrix(n: usize) -> Result<DMatrix<Complex64>> {
    cap(n, MAX_DENSE_QUBITS)?;
    let mut total = DMatrix::zeros(1 << n, 1 << n);
    for axis in [Axis::X, Axis::Y, Axis::Z] {
        let j = total_angular_momentum_matrix(n, axis)?;
        total += &j * &j;
    }
    Ok(total)
}

/// Orthogonal projector onto the Casimir eigenspace `j(j+1)`, built from a
/// Hermitian eigendecomposition. `two_j` is `2j`.
pub fn sector_projector(n: usize, two_j: usize) -> Result<DMatrix<Complex64>> {
    let casimir = casimir_matrix(n)?;
    let j = two_j as f64 / 2.0;
    let target = j * (j + 1.0);
    let eig = casimir.symmetric_eigen();
    let dim = 1usize << n;
    let mut proj = DMatrix::zeros(dim, dim);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if (lambda - target).abs() <= CLUSTER_TOLERANCE {
            let v = eig.eigenvectors.column(k);
            proj += v * v.adjoint();
        }
    }
    Ok(proj)
}

/// Projected magnitudes against the closed-form coefficients, in the order
/// `(j1+½, m1+½)`, `(j1-½, m1+½)`, `(j1+½, m1-½)`, `(j1-½, m1-½)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClebschGordanCheck {
    pub n: usize,
    pub i: usize,
    pub computed: [f64; 4],
    pub expected: [f64; 4],
    pub max_error: f64,
}

/// Closed-form magnitudes with `j1 = n/2`, `m1 = n/2 - i`.
pub fn clebsch_gordan_magnitudes(
    n: usize,
    i: usize,
    gamma: Complex64,
    delta: Complex64,
) -> [f64; 4] {
    let half = (n as f64 + 1.0) / 2.0;
    let up = (half - i as f64) / half;
    let down = ((n as f64 - 1.0) / 2.0 - i as f64) / half;
    [
        gamma.norm() * (0.5 * (1.0 + up)).sqrt(),
        gamma.norm() * (0.5 * (1.0 - up)).max(0.0).sqrt(),
        delta.norm() * (0.5 * (1.0 - down)).sqrt(),
        delta.norm() * (0.5 * (1.0 + down)).max(0.0).sqrt(),
    ]
}

/// Project `embed(|D_n^i>) ⊗ (γ|0> + δ|1>)` onto the two `j` sectors at
/// each `J^z` weight and compare magnitudes with the closed form.
pub fn clebsch_gordan_check(
    n: usize,
    i: usize,
    gamma: Complex64,
    delta: Complex64,
) -> Result<ClebschGordanCheck> {
    cap(n + 1, MAX_DENSE_QUBITS)?;
    let state =
        embed(&SymmetricState::dicke(DickeIndex::new(n, i)?))?.append_qubit(gamma, delta)?;
    let amps = state.amplitudes();
    let upper = sector_projector(n + 1, n + 1)?;
    let lower = if n > 0 {
        Some(sector_projector(n + 1, n - 1)?)
    } else {
        None
    };

    // J^z weight classes: number of ones i (m1+½) and i + 1 (m1-½)
    let masked = |ones: usize| {
        DVector::from_iterator(
            amps.len(),
            amps.iter().enumerate().map(|(x, &a)| {
                if x.count_ones() as usize == ones {
                    a
                } else {
                    c(0.0, 0.0)
                }
            }),
        )
    };
    let (plus, minus) = (masked(i), masked(i + 1));
    let norm_in = |p: &Option<DMatrix<Complex64>>, v: &DVector<Complex64>| {
        p.as_ref().map_or(0.0, |p| (p * v).norm())
    };
    let upper = Some(upper);
    let computed = [
        norm_in(&upper, &plus),
        norm_in(&lower, &plus),
        norm_in(&upper, &minus),
        norm_in(&lower, &minus),
    ];
    let expected = clebsch_gordan_magnitudes(n, i, gamma, delta);
    let max_error = computed
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(ClebschGordanCheck {
        n,
        i,
        computed,
        expected,
        max_error,
    })
}
