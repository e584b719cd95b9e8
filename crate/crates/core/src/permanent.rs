//! Exact permanents, generating polynomials, and the diagonal-congruence
//! identity. Ryser's inclusion-exclusion with Gray-code updates is the main
//! path; the naive n! sum and the derivative route are small-size oracles.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::mixed_disc::symbolic_det;
use crate::poly::MultiPoly;
use crate::scalar::{values_agree, Coeff};

/// Hard cap for Ryser: 2^n subsets.
pub const MAX_RYSER_DIM: usize = 30;
/// Cap for the naive n! oracle.
pub const MAX_NAIVE_DIM: usize = 8;
/// Cap for symbolic routes (derivative and perstable expansions).
pub const MAX_SYMBOLIC_DIM: usize = 8;

/// Permanent by Ryser's formula
/// per(A) = (-1)^n sum_{S != 0} (-1)^{|S|} prod_i sum_{j in S} a_ij,
/// with Gray-code row-sum updates. Exact in rational mode; the float path
/// accumulates 2^n signed products, so expect cancellation noise beyond
/// n ~ 20.
pub fn permanent_ryser<T: Coeff>(a: &Mat<T>) -> Result<T> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(
            "permanent needs a square matrix".into(),
        ));
    }
    let n = a.nrows();
    if n > MAX_RYSER_DIM {
        return Err(Error::SizeCap {
            what: "Ryser permanent size",
            limit: MAX_RYSER_DIM,
            got: n,
        });
    }
    if n == 0 {
        return Ok(T::one());
    }
    let mut row_sums = vec![T::zero(); n];
    let mut total = T::zero();
    let mut popcount = 0usize;
    for m in 1u64..(1 << n) {
        // Bit flipped between consecutive Gray codes g(m-1) and g(m).
        let bit = m.trailing_zeros() as usize;
        let added = (m ^ (m >> 1)) & (1 << bit) != 0;
        for (i, sum) in row_sums.iter_mut().enumerate() {
            let entry = a[(i, bit)].clone();
            *sum = if added {
                sum.clone() + entry
            } else {
                sum.clone() - entry
            };
        }
        if added {
            popcount += 1;
        } else {
            popcount -= 1;
        }
        let prod = row_sums.iter().fold(T::one(), |acc, s| acc * s.clone());
        if (n - popcount).is_multiple_of(2) {
            total = total + prod;
        } else {
            total = total - prod;
        }
    }
    Ok(total)
}

/// Permanent by direct summation over all n! permutations. Ground-truth
/// oracle, capped at n <= 8.
pub fn permanent_naive<T: Coeff>(a: &Mat<T>) -> Result<T> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(
            "permanent needs a square matrix".into(),
        ));
    }
    let n = a.nrows();
    if n > MAX_NAIVE_DIM {
        return Err(Error::SizeCap {
            what: "naive permanent size",
            limit: MAX_NAIVE_DIM,
            got: n,
        });
    }
    fn rec<T: Coeff>(a: &Mat<T>, row: usize, used: &mut [bool], acc: T, total: &mut T) {
        let n = a.nrows();
        if row == n {
            *total = total.clone() + acc;
            return;
        }
        for col in 0..n {
            if used[col] || a[(row, col)].is_zero() {
                continue;
            }
            used[col] = true;
            rec(a, row + 1, used, acc.clone() * a[(row, col)].clone(), total);
            used[col] = false;
        }
    }
    let mut total = T::zero();
    let mut used = vec![false; n];
    rec(a, 0, &mut used, T::one(), &mut total);
    Ok(total)
}

/// The generating polynomial f_A = prod_j (sum_i a_ij x_i), i.e. the
/// determinant of sum_i x_i A_i for the diagonal coefficient matrices
/// A_i = diag(a_i1, ..., a_in). Its coefficient at x_1...x_n is per(A).
pub fn generating_polynomial<T: Coeff>(a: &Mat<T>) -> Result<MultiPoly<T>> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(
            "generating polynomial needs a square matrix".into(),
        ));
    }
    let n = a.nrows();
    let mut f = MultiPoly::constant(n, T::one());
    for j in 0..n {
        f = f.mul(&MultiPoly::linear_form(&a.col(j)))?;
    }
    Ok(f)
}

/// per(A) as the repeated derivative prod_k d_{x_k} of f_A evaluated at zero.
pub fn permanent_via_derivatives<T: Coeff>(a: &Mat<T>) -> Result<T> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(
            "permanent needs a square matrix".into(),
        ));
    }
    let n = a.nrows();
    if n > MAX_SYMBOLIC_DIM {
        return Err(Error::SizeCap {
            what: "derivative permanent size",
            limit: MAX_SYMBOLIC_DIM,
            got: n,
        });
    }
    let mut f = generating_polynomial(a)?;
    for k in 0..n {
        f = f.partial(k)?;
    }
    f.evaluate(&vec![T::zero(); n])
}

#[derive(Clone, Debug)]
pub struct CongruenceReport<T> {
    /// per(D A D) by Ryser.
    pub congruent: T,
    /// det(D)^2 per(A).
    pub scaled: T,
    pub agree: bool,
}

/// Verifies per(D A D) = det(D)^2 per(A) for a diagonal D with nonzero
/// entries.
pub fn diagonal_congruence_per<T: Coeff>(a: &Mat<T>, diag: &[T]) -> Result<CongruenceReport<T>> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(
            "permanent needs a square matrix".into(),
        ));
    }
    let n = a.nrows();
    if diag.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: diag.len(),
        });
    }
    if diag.iter().any(Zero::is_zero) {
        return Err(Error::Precondition(
            "diagonal congruence needs nonzero entries".into(),
        ));
    }
    let dad = Mat::from_fn(n, n, |i, j| {
        diag[i].clone() * a[(i, j)].clone() * diag[j].clone()
    });
    let congruent = permanent_ryser(&dad)?;
    let det_d = diag.iter().fold(T::one(), |acc, d| acc * d.clone());
    let scaled = det_d.clone() * det_d * permanent_ryser(a)?;
    let agree = values_agree(&congruent, &scaled, 1e-9);
    Ok(CongruenceReport {
        congruent,
        scaled,
        agree,
    })
}

#[derive(Clone, Debug)]
pub struct PerstableReport<T> {
    /// Coefficient of x_1...x_n in det(sum x_i A_i) with A_i =
    /// sum_j a_ij v_j v_j^T.
    pub coefficient: T,
    /// det(V)^2 per(A).
    pub expected: T,
    pub agree: bool,
}

/// Builds the rank-one-span coefficient matrices from the columns of `v`,
/// expands the determinantal polynomial symbolically, and compares the
/// x_1...x_n coefficient with det(V)^2 per(A). Requires invertible `v` and
/// entrywise nonnegative `a`.
pub fn perstable_coefficient<T: Coeff>(v: &Mat<T>, a: &Mat<T>) -> Result<PerstableReport<T>> {
    if !v.is_square() || !a.is_square() || v.nrows() != a.nrows() {
        return Err(Error::ShapeMismatch(
            "perstable needs square V, A of equal size".into(),
        ));
    }
    let n = v.nrows();
    if n > 5 {
        return Err(Error::SizeCap {
            what: "perstable expansion size",
            limit: 5,
            got: n,
        });
    }
    for i in 0..n {
        for j in 0..n {
            if a[(i, j)] < T::zero() {
                return Err(Error::Precondition(
                    "perstable needs a nonnegative matrix A".into(),
                ));
            }
        }
    }
    let det_v = v.det()?;
    let singular = if T::EXACT {
        det_v.is_zero()
    } else {
        det_v.abs().to_f64() <= 1e-12
    };
    if singular {
        return Err(Error::SingularMatrix);
    }
    // A_i = sum_j a_ij v_j v_j^T; the pencil entry (r,c) is a linear form.
    let columns: Vec<Vec<T>> = (0..n).map(|j| v.col(j)).collect();
    let entries: Vec<Vec<MultiPoly<T>>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let coeffs: Vec<T> = (0..n)
                        .map(|i| {
                            (0..n).fold(T::zero(), |acc, j| {
                                acc + a[(i, j)].clone()
                                    * columns[j][r].clone()
                                    * columns[j][c].clone()
                            })
                        })
                        .collect();
                    MultiPoly::linear_form(&coeffs)
                })
                .collect()
        })
        .collect();
    let det = symbolic_det(&entries)?;
    let coefficient = det.coefficient(&vec![1u32; n]);
    let expected = det_v.clone() * det_v * permanent_ryser(a)?;
    let agree = values_agree(&coefficient, &expected, 1e-8);
    Ok(PerstableReport {
        coefficient,
        expected,
        agree,
    })
}
