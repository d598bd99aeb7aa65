//! Matrices of the binary Hamming scheme on `n`-bit strings.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;

use crate::algebra::max_abs_entry;
use crate::combinatorics::binomial;
use crate::dicke_space::{DickeIndex, SymmetricState};
use crate::error::{Error, Result};

use super::full_state::{embed, MAX_QUBITS};

/// Largest `n` for which dense `2^n x 2^n` products are formed.
pub const MAX_DENSE_QUBITS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    /// `A`: ones between strings at Hamming distance 1.
    Adjacency,
    /// `A*`: diagonal `n - 2|x|`.
    Dual,
    /// `A_i`: ones between strings at Hamming distance `i`.
    Distance(usize),
    /// `J`.
    AllOnes,
}

/// Sparse integer matrix: row `x` lists its nonzero `(column, value)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeMatrix {
    pub n: usize,
    pub kind: SchemeKind,
    rows: Vec<Vec<(usize, i64)>>,
}

impl SchemeMatrix {
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn row(&self, x: usize) -> &[(usize, i64)] {
        &self.rows[x]
    }

    pub fn entry(&self, x: usize, y: usize) -> i64 {
        self.rows[x]
            .iter()
            .find(|(c, _)| *c == y)
            .map_or(0, |(_, v)| *v)
    }

    pub fn dense(&self) -> DMatrix<i64> {
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for (x, row) in self.rows.iter().enumerate() {
            for &(y, v) in row {
                m[(x, y)] = v;
            }
        }
        m
    }

    pub fn dense_complex(&self) -> DMatrix<Complex64> {
        self.dense().map(|v| Complex64::new(v as f64, 0.0))
    }

    /// Sparse action on a vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(y, w)| v[y] * w as f64).sum())
            .collect()
    }
}

pub fn hamming_distance(x: usize, y: usize) -> usize {
    (x ^ y).count_ones() as usize
}

pub fn scheme_matrix(n: usize, kind: SchemeKind) -> Result<SchemeMatrix> {
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            requested: n,
            cap: MAX_QUBITS,
        });
    }
    if let SchemeKind::Distance(i) = kind {
        if i > n {
            return Err(Error::IndexOutOfRange { index: i, max: n });
        }
    }
    let dim = 1usize << n;
    let rows = (0..dim)
        .map(|x| match kind {
            SchemeKind::Adjacency => (0..n).map(|b| (x ^ (1 << b), 1)).collect(),
            SchemeKind::Dual => vec![(x, n as i64 - 2 * x.count_ones() as i64)],
            SchemeKind::Distance(i) => (0..dim)
                .filter(|&y| hamming_distance(x, y) == i)
                .map(|y| (y, 1))
                .collect(),
            SchemeKind::AllOnes => (0..dim).map(|y| (y, 1)).collect(),
        })
        .collect();
    Ok(SchemeMatrix { n, kind, rows })
}

fn dense_limit(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits {
            requested: n,
            cap: MAX_DENSE_QUBITS,
        });
    }
    Ok(())
}

fn distance_matrices(n: usize) -> Result<Vec<DMatrix<i64>>> {
    (0..=n)
        .map(|i| scheme_matrix(n, SchemeKind::Distance(i)).map(|m| m.dense()))
        .collect()
}

/// Intersection numbers `p[i][j][k]` of `A_i A_j = sum_k p_ij^k A_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoseMesner {
    pub n: usize,
    pub intersection: Vec<Vec<Vec<i64>>>,
    /// Largest entry of `|A_i A_j - sum_k p_ij^k A_k|` over all `i, j`.
    pub max_violation: i64,
}

/// Read `p_ij^k` off row `0` of `A_i A_j` and check the expansion on every
/// entry.
pub fn bose_mesner(n: usize) -> Result<BoseMesner> {
    dense_limit(n)?;
    let a = distance_matrices(n)?;
    // a representative column at each distance from 0
    let reps: Vec<usize> = (0..=n).map(|k| (1usize << k) - 1).collect();
    let mut intersection = vec![vec![vec![0i64; n + 1]; n + 1]; n + 1];
    let mut max_violation = 0i64;
    for i in 0..=n {
        for j in 0..=n {
            let prod = &a[i] * &a[j];
            let mut expansion = DMatrix::<i64>::zeros(prod.nrows(), prod.ncols());
            for k in 0..=n {
                let p = prod[(0, reps[k])];
                intersection[i][j][k] = p;
                expansion += &a[k] * p;
            }
            let v = (prod - expansion)
                .iter()
                .map(|x| x.abs())
                .max()
                .unwrap_or(0);
            max_violation = max_violation.max(v);
        }
    }
    Ok(BoseMesner {
        n,
        intersection,
        max_violation,
    })
}

type Q = Ratio<i128>;

/// `C(n,i) K_i((n - A)/2; 1/2, n)` as an exact rational matrix.
///
/// With `1/p = 2` the hypergeometric terms are
/// `(-i)_k (-x)_k 2^k / ((-n)_k k!)`, and `(-x)_k 2^k` at `x = (n - A)/2`
/// is the integer matrix `prod_{l<k} (A - (n - 2l))`.
pub fn distance_polynomial(n: usize, i: usize) -> Result<DMatrix<Q>> {
    dense_limit(n)?;
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    let adj = scheme_matrix(n, SchemeKind::Adjacency)?
        .dense()
        .map(|v| v as i128);
    let dim = adj.nrows();
    let id = DMatrix::<i128>::identity(dim, dim);
    let mut p_k = id.clone();
    let mut coeff = Q::from_integer(binom_exact(n, i));
    let mut sum = DMatrix::<Q>::from_element(dim, dim, Q::from_integer(0));
    for k in 0..=i {
        sum += p_k.map(|v| Q::from_integer(v) * coeff);
        if k == i {
            break;
        }
        let kk = k as i128;
        // ratio of successive coefficients: (k - i) / ((k - n)(k + 1))
        coeff *= Q::new(kk - i as i128, (kk - n as i128) * (kk + 1));
        p_k = &p_k * (&adj - &id * (n as i128 - 2 * kk));
    }
    Ok(sum)
}

fn binom_exact(n: usize, k: usize) -> i128 {
    (0..k).fold(1i128, |acc, t| acc * (n - t) as i128 / (t + 1) as i128)
}

/// Number of entries where `A_i` and `C(n,i) K_i((n-A)/2)` differ, summed
/// over `i`.
pub fn p_polynomial_mismatches(n: usize) -> Result<usize> {
    let a = distance_matrices(n)?;
    let mut bad = 0;
    for (i, ai) in a.iter().enumerate() {
        let poly = distance_polynomial(n, i)?;
        bad += ai
            .iter()
            .zip(poly.iter())
            .filter(|(x, y)| Q::from_integer(**x as i128) != **y)
            .count();
    }
    Ok(bad)
}

/// `max_i |A_i|0> / sqrt(C(n,i)) - embed(|D_n^i>)|`.
pub fn dicke_from_distance_residual(n: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    let dim = 1usize << n;
    let mut zero = vec![Complex64::new(0.0, 0.0); dim];
    zero[0] = Complex64::new(1.0, 0.0);
    for i in 0..=n {
        let ai = scheme_matrix(n, SchemeKind::Distance(i))?;
        let scale = 1.0 / binomial(n, i).sqrt();
        let lhs: Vec<Complex64> = ai.apply(&zero).iter().map(|z| z * scale).collect();
        let rhs = embed(&SymmetricState::dicke(DickeIndex::new(n, i)?))?;
        for (a, b) in lhs.iter().zip(rhs.amplitudes()) {
            worst = worst.max((a - b).norm());
        }
    }
    Ok(worst)
}

/// `H^{⊗n}` as a dense matrix.
pub fn hadamard_power(n: usize) -> Result<DMatrix<Complex64>> {
    dense_limit(n)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let single = DMatrix::from_row_slice(2, 2, &[h, h, h, -h].map(|v| Complex64::new(v, 0.0)));
    let mut m = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for _ in 0..n {
        m = m.kronecker(&single);
    }
    Ok(m)
}

/// `max |H^{⊗n} A H^{⊗n} - A*|`.
pub fn hadamard_conjugation_residual(n: usize) -> Result<f64> {
    let h = hadamard_power(n)?;
    let a = scheme_matrix(n, SchemeKind::Adjacency)?.dense_complex();
    let dual = scheme_matrix(n, SchemeKind::Dual)?.dense_complex();
    Ok(max_abs_entry(&(&h * a * &h - dual)))
}
