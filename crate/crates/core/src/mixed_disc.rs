//! Mixed discriminants of matrix tuples, the coefficient-extraction route
//! through determinantal polynomials, and the generalized matrix determinant
//! lemma.
//!
//! The direct double-sum evaluation is an oracle, not a production path: it
//! is capped at small sizes and kept exact so the two routes can be compared
//! coefficient for coefficient.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::poly::MultiPoly;
use crate::scalar::{values_agree, Coeff};

/// Size cap for the direct double-sum evaluation.
pub const MAX_MD_DIM: usize = 8;
/// Size cap for the symbolic determinant expansion.
pub const MAX_SYMBOLIC_DIM: usize = 6;

fn validate_tuple<T: Coeff>(matrices: &[(Mat<T>, usize)]) -> Result<(usize, usize)> {
    if matrices.is_empty() {
        return Err(Error::InvalidInput("empty matrix tuple".into()));
    }
    let n = matrices[0].0.nrows();
    for (m, _) in matrices {
        if !m.is_square() || m.nrows() != n {
            return Err(Error::ShapeMismatch(format!(
                "expected {n}x{n} matrices, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    let k: usize = matrices.iter().map(|(_, mult)| mult).sum();
    if k > n {
        return Err(Error::Precondition(format!(
            "total multiplicity {k} exceeds matrix size {n}"
        )));
    }
    if n > MAX_MD_DIM || k > MAX_MD_DIM {
        return Err(Error::SizeCap {
            what: "mixed discriminant size",
            limit: MAX_MD_DIM,
            got: n.max(k),
        });
    }
    Ok((n, k))
}

/// Mixed discriminant by its defining double sum: over order-preserving
/// k-subsets of rows/columns and distinct permutations of the multiset of
/// matrix labels, of the k x k determinant whose i-th row comes from the
/// permuted matrix.
pub fn mixed_discriminant<T: Coeff>(matrices: &[(Mat<T>, usize)]) -> Result<T> {
    let (n, k) = validate_tuple(matrices)?;
    // Multiset of matrix indices, e.g. (A, A, B) -> [0, 0, 1].
    let labels: Vec<usize> = matrices
        .iter()
        .enumerate()
        .flat_map(|(idx, (_, mult))| std::iter::repeat_n(idx, *mult))
        .collect();
    let mut total = T::zero();
    for subset in (0..n).combinations(k) {
        let mut perm = labels.clone();
        loop {
            let block = Mat::from_fn(k, k, |r, c| {
                matrices[perm[r]].0[(subset[r], subset[c])].clone()
            });
            total = total + block.det()?;
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    Ok(total)
}

/// Mixed discriminant via symbolic coefficient extraction: expands
/// det(sum x_i A_i) (or det(I + sum x_i A_i) when the total multiplicity is
/// below the matrix size) and reads off the monomial coefficient.
pub fn md_via_coefficients<T: Coeff>(matrices: &[(Mat<T>, usize)]) -> Result<T> {
    let (n, k) = validate_tuple(matrices)?;
    if n > MAX_SYMBOLIC_DIM {
        return Err(Error::SizeCap {
            what: "symbolic determinant size",
            limit: MAX_SYMBOLIC_DIM,
            got: n,
        });
    }
    let m = matrices.len();
    let with_identity = k < n;
    let entries: Vec<Vec<MultiPoly<T>>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let mut terms: Vec<(Vec<u32>, T)> = Vec::with_capacity(m + 1);
                    if with_identity && r == c {
                        terms.push((vec![0; m], T::one()));
                    }
                    for (i, (a, _)) in matrices.iter().enumerate() {
                        let mut e = vec![0u32; m];
                        e[i] = 1;
                        terms.push((e, a[(r, c)].clone()));
                    }
                    MultiPoly::from_terms(m, terms)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let det = symbolic_det(&entries)?;
    let target: Vec<u32> = matrices.iter().map(|(_, mult)| *mult as u32).collect();
    Ok(det.coefficient(&target))
}

/// Determinant of a polynomial matrix by Laplace expansion along the first row.
pub(crate) fn symbolic_det<T: Coeff>(entries: &[Vec<MultiPoly<T>>]) -> Result<MultiPoly<T>> {
    let n = entries.len();
    let nvars = entries[0][0].nvars();
    if n == 1 {
        return Ok(entries[0][0].clone());
    }
    let mut det = MultiPoly::zero(nvars);
    for (j, pivot) in entries[0].iter().enumerate() {
        if pivot.is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly<T>>> = entries[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let mut cofactor = pivot.mul(&symbolic_det(&minor)?)?;
        if j % 2 == 1 {
            cofactor = cofactor.neg();
        }
        det = det.add(&cofactor)?;
    }
    Ok(det)
}

/// One term of the determinant-of-sum expansion.
#[derive(Clone, Debug)]
pub struct DetSumTerm<T> {
    /// Multiplicity of each input matrix in this mixed discriminant.
    pub multiplicities: Vec<usize>,
    pub value: T,
}

#[derive(Clone, Debug)]
pub struct DetSumReport<T> {
    /// det(sum A_i) computed directly.
    pub direct: T,
    /// Sum of the mixed-discriminant terms.
    pub from_terms: T,
    pub terms: Vec<DetSumTerm<T>>,
    pub agree: bool,
}

/// det(sum A_i) as the sum of mixed discriminants over all multiplicity
/// splittings, generalizing the matrix determinant lemma. Both routes are
/// returned and compared.
pub fn det_of_sum_expansion<T: Coeff>(matrices: &[Mat<T>]) -> Result<DetSumReport<T>> {
    if matrices.is_empty() {
        return Err(Error::InvalidInput("empty matrix list".into()));
    }
    let n = matrices[0].nrows();
    for m in matrices {
        if !m.is_square() || m.nrows() != n {
            return Err(Error::ShapeMismatch(format!(
                "expected {n}x{n} matrices, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    if n > MAX_MD_DIM || matrices.len() > MAX_MD_DIM {
        return Err(Error::SizeCap {
            what: "determinant-of-sum size",
            limit: MAX_MD_DIM,
            got: n.max(matrices.len()),
        });
    }
    let mut sum = matrices[0].clone();
    for m in &matrices[1..] {
        sum = sum.add(m)?;
    }
    let direct = sum.det()?;

    let mut terms = Vec::new();
    let mut from_terms = T::zero();
    for split in compositions(n, matrices.len()) {
        let tuple: Vec<(Mat<T>, usize)> = matrices
            .iter()
            .zip(&split)
            .filter(|(_, &mult)| mult > 0)
            .map(|(m, &mult)| (m.clone(), mult))
            .collect();
        let value = mixed_discriminant(&tuple)?;
        from_terms = from_terms + value.clone();
        terms.push(DetSumTerm {
            multiplicities: split,
            value,
        });
    }
    let agree = values_agree(&direct, &from_terms, 1e-9);
    Ok(DetSumReport {
        direct,
        from_terms,
        terms,
        agree,
    })
}

#[derive(Clone, Debug)]
pub struct RankOneReport<T> {
    /// det(A + u v^T) computed directly.
    pub direct: T,
    /// (1 + v^T A^{-1} u) det(A).
    pub via_lemma: T,
    pub agree: bool,
}

/// The matrix determinant lemma, both sides. Errors on singular `A`.
pub fn rank_one_update_det<T: Coeff>(a: &Mat<T>, u: &[T], v: &[T]) -> Result<RankOneReport<T>> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(
            "rank-one update needs a square matrix".into(),
        ));
    }
    let n = a.nrows();
    if u.len() != n || v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: u.len().max(v.len()),
        });
    }
    let w = a.solve(u)?;
    let vtw = v
        .iter()
        .zip(&w)
        .fold(T::zero(), |acc, (vi, wi)| acc + vi.clone() * wi.clone());
    let via_lemma = (T::one() + vtw) * a.det()?;
    let direct = a.add(&Mat::outer(u, v))?.det()?;
    let agree = values_agree(&direct, &via_lemma, 1e-9);
    Ok(RankOneReport {
        direct,
        via_lemma,
        agree,
    })
}

/// Checks D(X a_1 A_1 Y, ..., X a_n A_n Y) = det(X) det(Y) prod a_i D(A_1,...,A_n).
pub fn scaling_identity_check<T: Coeff>(
    x: &Mat<T>,
    y: &Mat<T>,
    matrices: &[Mat<T>],
    alphas: &[T],
) -> Result<bool> {
    let n = matrices.len();
    if alphas.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: alphas.len(),
        });
    }
    for m in matrices {
        if !m.is_square() || m.nrows() != n {
            return Err(Error::ShapeMismatch(format!(
                "scaling identity needs an n-tuple of n x n matrices with n = {n}"
            )));
        }
    }
    if x.nrows() != n || !x.is_square() || y.nrows() != n || !y.is_square() {
        return Err(Error::ShapeMismatch(
            "X and Y must match the tuple size".into(),
        ));
    }
    let transformed: Vec<(Mat<T>, usize)> = matrices
        .iter()
        .zip(alphas)
        .map(|(a, alpha)| Ok((x.matmul(&a.scale(alpha))?.matmul(y)?, 1)))
        .collect::<Result<Vec<_>>>()?;
    let lhs = mixed_discriminant(&transformed)?;
    let base: Vec<(Mat<T>, usize)> = matrices.iter().map(|a| (a.clone(), 1)).collect();
    let alpha_prod = alphas.iter().fold(T::one(), |acc, a| acc * a.clone());
    let rhs = x.det()? * y.det()? * alpha_prod * mixed_discriminant(&base)?;
    Ok(values_agree(&lhs, &rhs, 1e-9))
}

/// Lexicographic next permutation; returns false once the sequence is the
/// last (descending) one.
pub(crate) fn next_permutation(arr: &mut [usize]) -> bool {
    if arr.len() < 2 {
        return false;
    }
    let mut i = arr.len() - 1;
    while i > 0 && arr[i - 1] >= arr[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = arr.len() - 1;
    while arr[j] <= arr[i - 1] {
        j -= 1;
    }
    arr.swap(i - 1, j);
    arr[i..].reverse();
    true
}

/// All ways to write `total` as an ordered sum of `parts` nonnegative integers.
pub(crate) fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; parts];
    fn rec(total: usize, pos: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos + 1 == current.len() {
            current[pos] = total;
            out.push(current.clone());
            return;
        }
        for v in 0..=total {
            current[pos] = v;
            rec(total - v, pos + 1, current, out);
        }
    }
    if parts == 0 {
        return out;
    }
    rec(total, 0, &mut current, &mut out);
    out
}
