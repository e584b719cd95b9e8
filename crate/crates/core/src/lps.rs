//! k-locally PSD and nonsingular locally singular (NLS) matrices: the G(n,k)
//! family, C(n,m), closed-form permanents, positivity predicates, and the
//! trace-normalized bound.
//!
//! Everything here is exact big-rational arithmetic: the sign table at
//! n = 19 is meaningless in floats, while the closed form is O(n).

use itertools::Itertools;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{Mat, SymMatrix};
use crate::scalar::Coeff;

/// Combinatorial cap for principal-submatrix scans: C(16, 8) = 12870.
pub const MAX_LOCAL_DIM: usize = 16;

fn rat(p: i64) -> BigRational {
    BigRational::from_int(p)
}

/// G(n,k) = k/(k-1) I - 1/(k-1) J: diagonal 1, off-diagonal -1/(k-1).
pub fn gnk(n: usize, k: usize) -> Result<SymMatrix<BigRational>> {
    if k < 2 {
        return Err(Error::Precondition(format!("G(n,k) needs k >= 2, got {k}")));
    }
    if n < 2 {
        return Err(Error::Precondition(format!("G(n,k) needs n >= 2, got {n}")));
    }
    let off = BigRational::from_ratio(-1, k as i64 - 1);
    Ok(SymMatrix::from_fn(n, |i, j| {
        if i == j {
            rat(1)
        } else {
            off.clone()
        }
    }))
}

/// per(G(n,k)) in closed form:
/// (k/(k-1))^n * sum_{i=0}^n (-1/k)^i n!/(n-i)!.
pub fn gnk_per_closed_form(n: usize, k: usize) -> Result<BigRational> {
    if k < 2 || n < 2 {
        return Err(Error::Precondition(format!(
            "closed form needs n >= 2 and k >= 2, got ({n},{k})"
        )));
    }
    let neg_inv_k = BigRational::from_ratio(-1, k as i64);
    let mut sum = BigRational::zero();
    let mut falling = BigRational::one(); // n!/(n-i)! at i = 0
    let mut power = BigRational::one(); // (-1/k)^i at i = 0
    for i in 0..=n {
        if i > 0 {
            falling *= rat((n - i + 1) as i64);
            power *= neg_inv_k.clone();
        }
        sum += power.clone() * falling.clone();
    }
    let ratio = BigRational::from_ratio(k as i64, k as i64 - 1);
    let mut scale = BigRational::one();
    for _ in 0..n {
        scale *= ratio.clone();
    }
    Ok(scale * sum)
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityVerdict {
    pub guaranteed_positive: bool,
    pub reason: String,
}

/// The sufficient condition for per(G(n,k)) > 0: even n with n-1 > k > 2 or
/// (n,k) = (4,2); odd n with n-1 > k > sqrt(2(n-1)). Sufficiency only: the
/// closed form is positive for some pairs outside this range.
pub fn nls_positivity_predicate(n: usize, k: usize) -> Result<PositivityVerdict> {
    if k < 2 || n < 2 {
        return Err(Error::Precondition(format!(
            "predicate needs n >= 2 and k >= 2, got ({n},{k})"
        )));
    }
    if (n, k) == (4, 2) {
        return Ok(PositivityVerdict {
            guaranteed_positive: true,
            reason: "(n,k) = (4,2)".into(),
        });
    }
    if n.is_multiple_of(2) {
        if n - 1 > k && k > 2 {
            Ok(PositivityVerdict {
                guaranteed_positive: true,
                reason: format!("even n = {n} with n-1 > k > 2"),
            })
        } else {
            Ok(PositivityVerdict {
                guaranteed_positive: false,
                reason: format!("even n = {n} needs n-1 > k > 2 (or (4,2)); not met by k = {k}"),
            })
        }
    } else if n - 1 > k && k * k > 2 * (n - 1) {
        Ok(PositivityVerdict {
            guaranteed_positive: true,
            reason: format!("odd n = {n} with n-1 > k > sqrt(2(n-1))"),
        })
    } else {
        Ok(PositivityVerdict {
            guaranteed_positive: false,
            reason: format!(
                "odd n = {n} needs n-1 > k > sqrt(2(n-1)) ~= {:.3}; not met by k = {k}",
                (2.0 * (n as f64 - 1.0)).sqrt()
            ),
        })
    }
}

fn isqrt(v: usize) -> usize {
    let mut r = (v as f64).sqrt() as usize;
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    while r * r > v {
        r -= 1;
    }
    r
}

/// The k-range of the nested chain for a given n:
/// {1 + floor(sqrt(2(n-1))), ..., n-1}.
pub fn nested_k_range(n: usize) -> (usize, usize) {
    (1 + isqrt(2 * (n - 1)), n.saturating_sub(1))
}

/// Verifies the nested chain per(G(4,2)) > ... > per(G(n,k)) > per(G(n,k+1))
/// by exact evaluation over the stated k-range.
pub fn gnk_nested_check(n: usize) -> Result<bool> {
    let (k_min, k_max) = nested_k_range(n);
    if k_min > k_max {
        return Err(Error::Precondition(format!(
            "empty k range for n = {n}: {{{k_min}, ..., {k_max}}}"
        )));
    }
    let top = gnk_per_closed_form(4, 2)?;
    let mut prev: Option<BigRational> = None;
    for k in k_min..=k_max {
        let value = gnk_per_closed_form(n, k)?;
        if (n, k) != (4, 2) && value >= top {
            return Ok(false);
        }
        if let Some(p) = prev {
            if value >= p {
                return Ok(false);
            }
        }
        prev = Some(value);
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct NormalizedGnk {
    /// G(n,k)/n, trace exactly 1.
    pub matrix: SymMatrix<BigRational>,
    /// per of the normalized matrix, exactly per(G(n,k))/n^n.
    pub per: BigRational,
}

/// The trace-normalized matrix G(n,k)/tr(G(n,k)) and its exact permanent.
pub fn gnk_normalized(n: usize, k: usize) -> Result<NormalizedGnk> {
    let g = gnk(n, k)?;
    let inv_n = BigRational::from_ratio(1, n as i64);
    let matrix = g.scale(&inv_n);
    let mut n_pow = BigRational::one();
    for _ in 0..n {
        n_pow *= rat(n as i64);
    }
    let per = gnk_per_closed_form(n, k)? / n_pow;
    Ok(NormalizedGnk { matrix, per })
}

/// C(n,m): ones everywhere except -1 on the last m diagonal entries.
/// C(n,n) = -G(n,2).
pub fn cnm(n: usize, m: usize) -> Result<Mat<BigRational>> {
    if m > n {
        return Err(Error::Precondition(format!(
            "C(n,m) needs m <= n, got ({n},{m})"
        )));
    }
    Ok(Mat::from_fn(n, n, |i, j| {
        if i == j && i >= n - m {
            rat(-1)
        } else {
            rat(1)
        }
    }))
}

/// All k x k principal submatrices PSD: minimum eigenvalue >= -tol, default
/// band 1e-9 * max(1, ||M||_F).
pub fn is_k_locally_psd<T: Coeff>(m: &SymMatrix<T>, k: usize, tol: Option<f64>) -> Result<bool> {
    let n = m.n();
    if n > MAX_LOCAL_DIM {
        return Err(Error::SizeCap {
            what: "local PSD scan size",
            limit: MAX_LOCAL_DIM,
            got: n,
        });
    }
    if k == 0 || k > n {
        return Err(Error::Precondition(format!(
            "local PSD scan needs 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    let tau = tol.unwrap_or_else(|| 1e-9 * m.frobenius_norm().max(1.0));
    for indices in (0..n).combinations(k) {
        let sub = m.principal_submatrix(&indices);
        let sig = crate::spectra::eigen_signature(&sub, Some(tau))?;
        if sig.eigenvalues.first().is_some_and(|&l| l < -tau) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nonsingular locally singular: every k x k principal submatrix is PSD and
/// singular while the full matrix is nonsingular. Singularity is an exact
/// determinant test in rational mode and an eigenvalue band in float mode.
pub fn is_nls<T: Coeff>(m: &SymMatrix<T>, k: usize, tol: Option<f64>) -> Result<bool> {
    let n = m.n();
    if n > MAX_LOCAL_DIM {
        return Err(Error::SizeCap {
            what: "local PSD scan size",
            limit: MAX_LOCAL_DIM,
            got: n,
        });
    }
    if k == 0 || k > n {
        return Err(Error::Precondition(format!(
            "NLS test needs 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    if !is_k_locally_psd(m, k, tol)? {
        return Ok(false);
    }
    let tau = tol.unwrap_or_else(|| 1e-9 * m.frobenius_norm().max(1.0));
    for indices in (0..n).combinations(k) {
        let sub = m.principal_submatrix(&indices);
        let singular = if T::EXACT {
            sub.mat().det()?.is_zero()
        } else {
            let sig = crate::spectra::eigen_signature(&sub, Some(tau))?;
            sig.n_zero > 0
        };
        if !singular {
            return Ok(false);
        }
    }
    let det = m.mat().det()?;
    let nonsingular = if T::EXACT {
        !det.is_zero()
    } else {
        det.abs().to_f64() > tau
    };
    Ok(nonsingular)
}
