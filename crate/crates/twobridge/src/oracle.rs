//! Brute-force Fox-calculus oracle for twisted Alexander polynomials.
//!
//! Independent of the product formula, this pipeline represents the dihedral
//! coloring by explicit ell x ell permutation matrices F (the row-reversed
//! identity) and R (the cyclic row shift), assembles the twisted Alexander
//! matrix
//!
//!   A = I + sum_{k=1}^{(q-1)/2} t^{s_{2k}} (I - t^{-e_{2k}} F) R^{m k e_{2k}},
//!
//! takes its exact symbolic determinant, and divides by the closed-form
//! denominator -(1+t)^{(ell-1)/2} (1-t)^{(ell+1)/2}. Agreement of this
//! pipeline with the product formula is the crate's master consistency check.

use num_bigint::BigInt;
use serde::Serialize;

use crate::laurent::IntLaurent;
use crate::product::{alexander, Method, TwistedResult};
use crate::two_bridge::{epsilon_sequence, TwoBridgeFraction};
use crate::{require_odd_prime, Error, Result};

/// A small dense integer matrix. Only permutation-like contents appear here,
/// but the type does not assume that.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntMatrix {
    n: usize,
    /// Row-major entries.
    entries: Vec<i64>,
}

impl IntMatrix {
    /// The n x n identity.
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        IntMatrix { n, entries }
    }

    /// The identity with its rows reversed.
    pub fn row_reversal(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + (n - 1 - i)] = 1;
        }
        IntMatrix { n, entries }
    }

    /// The identity with its rows cyclically shifted down one step: row i of
    /// the result is row i-1 (mod n) of the identity.
    pub fn cyclic_shift(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            let j = (i + n - 1) % n;
            entries[i * n + j] = 1;
        }
        IntMatrix { n, entries }
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// The (i, j) entry.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    /// Matrix product.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        IntMatrix { n, entries }
    }

    /// Nonnegative matrix power.
    pub fn pow(&self, k: u32) -> IntMatrix {
        let mut out = IntMatrix::identity(self.n);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// True iff this is the identity.
    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.n)
    }
}

/// A dense square matrix of integer Laurent polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LaurentMatrix {
    n: usize,
    entries: Vec<IntLaurent>,
}

impl LaurentMatrix {
    /// The zero matrix.
    pub fn zero(n: usize) -> Self {
        LaurentMatrix {
            n,
            entries: vec![IntLaurent::zero(); n * n],
        }
    }

    /// The identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut out = LaurentMatrix::zero(n);
        for i in 0..n {
            out.entries[i * n + i] = IntLaurent::one();
        }
        out
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// The (i, j) entry.
    pub fn get(&self, i: usize, j: usize) -> &IntLaurent {
        &self.entries[i * self.n + j]
    }

    /// Overwrite the (i, j) entry.
    pub fn set(&mut self, i: usize, j: usize, value: IntLaurent) {
        self.entries[i * self.n + j] = value;
    }

    /// Add `value` into the (i, j) entry.
    pub fn add_to(&mut self, i: usize, j: usize, value: &IntLaurent) {
        let slot = &mut self.entries[i * self.n + j];
        *slot = &*slot + value;
    }
}

fn check_m(ell: u32, m: u32) -> Result<()> {
    if 1 <= m && m < ell {
        Ok(())
    } else {
        Err(Error::BadM { m, ell })
    }
}

/// The representation matrices (F, F R^m) of the two bridge generators under
/// the dihedral coloring with parameter m.
pub fn dihedral_matrices(ell: u32, m: u32) -> Result<(IntMatrix, IntMatrix)> {
    require_odd_prime(ell)?;
    check_m(ell, m)?;
    let f = IntMatrix::row_reversal(ell as usize);
    let r = IntMatrix::cyclic_shift(ell as usize);
    Ok((f.clone(), f.mul(&r.pow(m))))
}

/// The twisted Alexander matrix of K_{p/q} for the coloring (ell, m), built
/// term by term from the epsilon sequence.
pub fn twisted_matrix(f: TwoBridgeFraction, ell: u32, m: u32) -> Result<LaurentMatrix> {
    require_odd_prime(ell)?;
    check_m(ell, m)?;
    f.require_ell_divides_q(ell)?;
    let graph = epsilon_sequence(f);
    let n = ell as usize;
    let flip = IntMatrix::row_reversal(n);
    let shift = IntMatrix::cyclic_shift(n);

    let mut a = LaurentMatrix::identity(n);
    for k in 1..=(f.q() - 1) / 2 {
        let eps = graph.epsilon(2 * k as usize);
        let level = graph.level(2 * k as usize);
        let r_exp = (i64::from(m) * k * eps).rem_euclid(i64::from(ell)) as u32;
        let r_pow = shift.pow(r_exp);
        let flipped = flip.mul(&r_pow);
        for i in 0..n {
            for j in 0..n {
                if r_pow.get(i, j) != 0 {
                    a.add_to(i, j, &IntLaurent::monomial(level, r_pow.get(i, j)));
                }
                if flipped.get(i, j) != 0 {
                    a.add_to(
                        i,
                        j,
                        &IntLaurent::monomial(level - eps, -flipped.get(i, j)),
                    );
                }
            }
        }
    }
    Ok(a)
}

/// Exact determinant by fraction-free elimination.
///
/// Each row is first multiplied by a power of t to clear negative exponents
/// (the product of the cleared units is restored at the end), then Bareiss
/// elimination runs over the polynomial ring: every interior division is
/// exact, so no rational functions ever appear. Column pivoting with sign
/// tracking handles zero pivots.
pub fn symbolic_det(matrix: &LaurentMatrix) -> IntLaurent {
    let n = matrix.dim();
    if n == 0 {
        return IntLaurent::one();
    }
    let mut m: Vec<Vec<IntLaurent>> = (0..n)
        .map(|i| (0..n).map(|j| matrix.get(i, j).clone()).collect())
        .collect();

    let mut unit_shift = 0i64;
    for row in m.iter_mut() {
        let min_e = row.iter().filter_map(IntLaurent::min_exp).min();
        if let Some(min_e) = min_e {
            if min_e < 0 {
                for entry in row.iter_mut() {
                    *entry = entry.shifted(-min_e);
                }
                unit_shift += min_e;
            }
        }
    }

    let mut sign = 1i32;
    let mut prev = IntLaurent::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return IntLaurent::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            let lead = std::mem::replace(&mut m[i][k], IntLaurent::zero());
            for j in k + 1..n {
                let num = &(&pivot * &m[i][j]) - &(&lead * &m[k][j]);
                m[i][j] = num
                    .exact_div(&prev)
                    .expect("fraction-free elimination divides exactly over a polynomial ring");
            }
        }
        prev = pivot;
    }

    let det = m[n - 1][n - 1].shifted(unit_shift);
    if sign < 0 {
        -&det
    } else {
        det
    }
}

/// Determinant by cofactor expansion along the first row. Exponential in the
/// dimension; used as an independent cross-check of `symbolic_det` on small
/// matrices.
pub fn cofactor_det(matrix: &LaurentMatrix) -> IntLaurent {
    let n = matrix.dim();
    if n == 0 {
        return IntLaurent::one();
    }
    if n == 1 {
        return matrix.get(0, 0).clone();
    }
    let mut det = IntLaurent::zero();
    for j in 0..n {
        if matrix.get(0, j).is_zero() {
            continue;
        }
        let mut minor = LaurentMatrix::zero(n - 1);
        for i in 1..n {
            let mut jj = 0;
            for col in 0..n {
                if col == j {
                    continue;
                }
                minor.set(i - 1, jj, matrix.get(i, col).clone());
                jj += 1;
            }
        }
        let term = &*matrix.get(0, j) * &cofactor_det(&minor);
        det = if j % 2 == 0 { &det + &term } else { &det - &term };
    }
    det
}

/// The closed-form denominator -(1+t)^{(ell-1)/2} (1-t)^{(ell+1)/2}, which
/// equals det(t F R^m - I) for every m.
pub fn denominator(ell: u32) -> IntLaurent {
    let one_plus_t = IntLaurent::from_terms([(0i64, 1), (1, 1)]);
    let one_minus_t = IntLaurent::from_terms([(0i64, 1), (1, -1)]);
    let product = &one_plus_t.pow((ell - 1) / 2) * &one_minus_t.pow((ell + 1) / 2);
    -&product
}

/// Compute the twisted Alexander polynomial by determinant and division.
/// The division must be exact; a remainder would falsify the denominator
/// identity and is surfaced as an error.
pub fn twisted_alexander_oracle(f: TwoBridgeFraction, ell: u32, m: u32) -> Result<TwistedResult> {
    let matrix = twisted_matrix(f, ell, m)?;
    let det = symbolic_det(&matrix);
    let twisted = det.exact_div(&denominator(ell))?;
    Ok(TwistedResult {
        fraction: f,
        ell,
        m: Some(m),
        method: Method::FoxOracle,
        delta: alexander(f),
        d_factors: Vec::new(),
        e_factors: Vec::new(),
        big_d: Vec::new(),
        twisted,
    })
}

/// Helper shared by tests and the sweep binaries: t F R^m - I.
pub fn shifted_generator_matrix(ell: u32, m: u32) -> Result<LaurentMatrix> {
    require_odd_prime(ell)?;
    check_m(ell, m)?;
    let n = ell as usize;
    let fr = IntMatrix::row_reversal(n).mul(&IntMatrix::cyclic_shift(n).pow(m));
    let mut out = LaurentMatrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            let mut entry = IntLaurent::zero();
            if fr.get(i, j) != 0 {
                entry.add_term(1, BigInt::from(fr.get(i, j)));
            }
            if i == j {
                entry.add_term(0, BigInt::from(-1));
            }
            out.set(i, j, entry);
        }
    }
    Ok(out)
}
