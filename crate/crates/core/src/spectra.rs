//! Symmetric-matrix inertia classification and the quadratic-form checks
//! behind log-concavity: eigenvalue signatures, the rank-one deflation test,
//! and the c-Rayleigh inequality scan.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::poly::MultiPoly;
use crate::scalar::Coeff;

/// Inertia of a symmetric matrix: counts of eigenvalues above, inside, and
/// below the zero band `[-tolerance, tolerance]`.
#[derive(Clone, Debug, Serialize)]
pub struct SignatureReport {
    pub n_pos: usize,
    pub n_zero: usize,
    pub n_neg: usize,
    /// Sorted ascending.
    pub eigenvalues: Vec<f64>,
    pub tolerance: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LorentzClass {
    /// No positive eigenvalue.
    NegativeSemidefinite,
    /// Exactly one positive eigenvalue, no zero eigenvalue: signature (+,-,...,-).
    LorentzianStrict,
    /// One positive eigenvalue with a nontrivial kernel.
    Lorentzian,
    /// Two or more positive eigenvalues.
    NotLorentzian,
}

impl LorentzClass {
    /// At most one positive eigenvalue.
    pub fn is_lorentzian(self) -> bool {
        self != LorentzClass::NotLorentzian
    }

    pub fn is_strict(self) -> bool {
        self == LorentzClass::LorentzianStrict
    }
}

impl SignatureReport {
    pub fn classify(&self) -> LorentzClass {
        if self.n_pos >= 2 {
            LorentzClass::NotLorentzian
        } else if self.n_pos == 0 {
            LorentzClass::NegativeSemidefinite
        } else if self.n_zero == 0 {
            LorentzClass::LorentzianStrict
        } else {
            LorentzClass::Lorentzian
        }
    }
}

fn default_band(frobenius: f64) -> f64 {
    1e-9 * frobenius.max(1.0)
}

fn symmetric_eigenvalues(m: DMatrix<f64>) -> Result<Vec<f64>> {
    let eig =
        nalgebra::SymmetricEigen::try_new(m, f64::EPSILON, 10_000).ok_or(Error::EigenFailure)?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Full-spectrum inertia of `q` with zero band `tol`, defaulting to
/// `1e-9 * max(1, ||Q||_F)`.
pub fn eigen_signature<T: Coeff>(q: &SymMatrix<T>, tol: Option<f64>) -> Result<SignatureReport> {
    let tolerance = tol.unwrap_or_else(|| default_band(q.frobenius_norm()));
    let eigenvalues = symmetric_eigenvalues(q.to_dmatrix())?;
    let n_pos = eigenvalues.iter().filter(|&&l| l > tolerance).count();
    let n_neg = eigenvalues.iter().filter(|&&l| l < -tolerance).count();
    Ok(SignatureReport {
        n_pos,
        n_zero: eigenvalues.len() - n_pos - n_neg,
        n_neg,
        eigenvalues,
        tolerance,
    })
}

pub fn lorentz_class<T: Coeff>(q: &SymMatrix<T>) -> Result<LorentzClass> {
    Ok(eigen_signature(q, None)?.classify())
}

/// Tests the rank-one deflation `(a^T Q a) Q - t (Qa)(Qa)^T <= 0`: true when
/// the deflated matrix has no eigenvalue above its zero band. Requires
/// `a^T Q a > 0` and `t >= 1`.
pub fn deflation_check<T: Coeff>(q: &SymMatrix<T>, a: &[f64], t: f64) -> Result<bool> {
    let n = q.n();
    if a.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.len(),
        });
    }
    if t < 1.0 {
        return Err(Error::Precondition(format!(
            "deflation needs t >= 1, got {t}"
        )));
    }
    let qf = q.to_dmatrix();
    let av = nalgebra::DVector::from_column_slice(a);
    let qa = &qf * &av;
    let aqa = av.dot(&qa);
    if aqa <= 0.0 {
        return Err(Error::Precondition(format!(
            "deflation needs a^T Q a > 0, got {aqa}"
        )));
    }
    let deflated = &qf * aqa - (&qa * qa.transpose()) * t;
    let frob = deflated.norm();
    let vals = symmetric_eigenvalues(deflated)?;
    let tau = default_band(frob);
    Ok(vals.iter().all(|&l| l <= tau))
}

/// Whether the quadratic form of `q` is negative definite on the hyperplane
/// `(Qa)^perp`, tested by restricting to an orthonormal basis of the
/// complement. When `Qa = 0` the complement is the whole space and `q` itself
/// must be negative definite.
pub fn negdef_on_complement<T: Coeff>(q: &SymMatrix<T>, a: &[f64]) -> Result<bool> {
    let n = q.n();
    if a.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.len(),
        });
    }
    let qf = q.to_dmatrix();
    let qa = &qf * nalgebra::DVector::from_column_slice(a);
    let norm = qa.norm();
    let restricted = if norm <= default_band(q.frobenius_norm()) {
        qf
    } else {
        if n == 1 {
            // One dimension: the complement of a nonzero vector is {0}.
            return Ok(true);
        }
        let u = qa / norm;
        // Householder reflector mapping e1 to -sign(u1) u; its trailing
        // columns form an orthonormal basis of u^perp.
        let mut w = u.clone();
        let sign = if w[0] >= 0.0 { 1.0 } else { -1.0 };
        w[0] += sign;
        let w = &w / w.norm();
        let h = DMatrix::identity(n, n) - (&w * w.transpose()) * 2.0;
        let basis = h.columns(1, n - 1).into_owned();
        basis.transpose() * qf * basis
    };
    let tau = default_band(restricted.norm());
    let vals = symmetric_eigenvalues(restricted)?;
    Ok(vals.iter().all(|&l| l < -tau))
}

/// One failure of the c-Rayleigh inequality
/// `d^a f * d^{a+e_i+e_j} f <= c * d^{a+e_i} f * d^{a+e_j} f` at a point.
#[derive(Clone, Debug, Serialize)]
pub struct RayleighViolation {
    pub point_index: usize,
    pub alpha: Vec<u32>,
    pub i: usize,
    pub j: usize,
    pub lhs: f64,
    pub rhs: f64,
}

/// Scans the c-Rayleigh inequality over multilinear tuples: multi-indices
/// `alpha` in {0,1}^n with `|alpha| <= deg f - 2` and variable pairs `i != j`
/// outside the support of `alpha`, so no variable is differentiated twice.
/// (For mixed-sign polynomials, tuples with repeated variables hit vanishing
/// or negative derivative factors and would violate trivially; the
/// multilinear scan is the one the tight constants refer to.)
///
/// Sample-based: the definition quantifies over a whole cone, which sampling
/// cannot decide; an empty result certifies only the scanned points.
pub fn rayleigh_check(
    f: &MultiPoly<f64>,
    c: f64,
    points: &[Vec<f64>],
) -> Result<Vec<RayleighViolation>> {
    if c.is_infinite() && c > 0.0 {
        return Ok(Vec::new());
    }
    let n = f.nvars();
    let d = f.degree() as u32;
    for p in points {
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.len(),
            });
        }
    }
    // All mixed partials up to order deg f, computed once.
    let mut derivs: HashMap<Vec<u32>, MultiPoly<f64>> = HashMap::new();
    for beta in multi_indices_up_to(n, d) {
        let g = f.partial_derivative(&beta)?;
        derivs.insert(beta, g);
    }
    let alphas: Vec<Vec<u32>> = multi_indices_up_to(n, d.saturating_sub(2))
        .into_iter()
        .filter(|a| a.iter().all(|&e| e <= 1))
        .collect();
    let mut violations = Vec::new();
    for (point_index, x) in points.iter().enumerate() {
        let value = |beta: &[u32]| -> f64 {
            derivs
                .get(beta)
                .map(|g| g.evaluate(x).expect("dimension checked"))
                .unwrap_or(0.0)
        };
        for alpha in &alphas {
            for i in 0..n {
                for j in 0..n {
                    if i == j || alpha[i] != 0 || alpha[j] != 0 {
                        continue;
                    }
                    let mut a_ij = alpha.clone();
                    a_ij[i] += 1;
                    a_ij[j] += 1;
                    let lhs = value(alpha) * value(&a_ij);
                    let mut a_i = alpha.clone();
                    a_i[i] += 1;
                    let mut a_j = alpha.clone();
                    a_j[j] += 1;
                    let rhs = c * value(&a_i) * value(&a_j);
                    let slack = 1e-9 * lhs.abs().max(rhs.abs()).max(1.0);
                    if lhs > rhs + slack {
                        violations.push(RayleighViolation {
                            point_index,
                            alpha: alpha.clone(),
                            i,
                            j,
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
    }
    Ok(violations)
}

/// All exponent vectors of length `n` with total degree at most `max_total`,
/// in graded-lex order.
pub(crate) fn multi_indices_up_to(n: usize, max_total: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    for total in 0..=max_total {
        fill_indices(n, 0, total, &mut current, &mut out);
    }
    out
}

fn fill_indices(
    n: usize,
    pos: usize,
    remaining: u32,
    current: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if pos == n {
        if remaining == 0 {
            out.push(current.clone());
        }
        return;
    }
    if pos == n - 1 {
        current[pos] = remaining;
        out.push(current.clone());
        current[pos] = 0;
        return;
    }
    for v in 0..=remaining {
        current[pos] = v;
        fill_indices(n, pos + 1, remaining - v, current, out);
        current[pos] = 0;
    }
}
