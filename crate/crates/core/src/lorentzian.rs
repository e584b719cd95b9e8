//! Log-concavity and Lorentzian-signature predicates over cones, conic
//! stability, and the M-convex support test.
//!
//! The cone-quantified predicates sample directions from the cone and report
//! seeds alongside the verdicts; they are probabilistic certificates, not
//! proofs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::{is_hyperbolic, ConeSpec};
use crate::poly::MultiPoly;
use crate::scalar::Coeff;
use crate::spectra::{deflation_check, lorentz_class, negdef_on_complement, LorentzClass};

/// Log-concavity at a point: the Hessian has at most one positive eigenvalue.
/// Degree <= 1 polynomials (including the zero polynomial) are log-concave by
/// convention.
pub fn is_log_concave_at(f: &MultiPoly<f64>, a: &[f64]) -> Result<bool> {
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    if a.len() != f.nvars() {
        return Err(Error::DimensionMismatch {
            expected: f.nvars(),
            got: a.len(),
        });
    }
    if f.degree() <= 1 {
        return Ok(true);
    }
    Ok(lorentz_class(&f.hessian_at(a)?)?.is_lorentzian())
}

/// Strict log-concavity at a point with f(a) > 0: the Hessian has the
/// Lorentzian signature (+,-,...,-). The eigenvalue classification is
/// cross-validated against the rank-one deflation and the restriction to
/// (Qa)^perp; disagreement surfaces as a numerical error.
pub fn is_strictly_log_concave_at(f: &MultiPoly<f64>, a: &[f64]) -> Result<bool> {
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let fa = f.evaluate(a)?;
    if fa <= 0.0 {
        return Err(Error::Precondition(format!(
            "strict log-concavity needs f(a) > 0, got {fa}"
        )));
    }
    if f.degree() <= 1 {
        return Ok(true);
    }
    let q = f.hessian_at(a)?;
    let strict = lorentz_class(&q)?.is_strict();
    // a^T Q a = d(d-1) f(a) > 0, so the deflation precondition holds.
    let deflation = deflation_check(&q, a, 1.0)?;
    let complement = negdef_on_complement(&q, a)?;
    if strict && !(deflation && complement) {
        return Err(Error::Numerical(format!(
            "strict signature disagrees with cross-checks (deflation {deflation}, complement {complement})"
        )));
    }
    Ok(strict)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// A derivative chain whose Hessian has two or more positive eigenvalues.
    NotLorentzian,
    /// A full contraction D_{a1}...D_{ad} f that failed to be positive.
    NonpositiveContraction,
}

/// A failing chain: the sampled directions plus what went wrong.
#[derive(Clone, Debug, Serialize)]
pub struct ChainWitness {
    pub kind: WitnessKind,
    pub directions: Vec<Vec<f64>>,
    pub inertia: Option<[usize; 3]>,
    pub contraction: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LorentzReport {
    /// No sampled chain was NOT_LORENTZIAN and every sampled full contraction
    /// was positive.
    pub holds: bool,
    /// All sampled chains had strictly Lorentzian (nonsingular) Hessians.
    pub strict: bool,
    pub chains: usize,
    pub seed: u64,
    pub witnesses: Vec<ChainWitness>,
}

/// Samples derivative chains D_{a3}...D_{ad} f with directions from the cone,
/// classifies the resulting quadratics' Hessians, and checks positivity of
/// full contractions D_{a1}...D_{ad} f.
pub fn lorentzian_over_cone(
    f: &MultiPoly<f64>,
    cone: &ConeSpec,
    n_chains: usize,
    seed: u64,
) -> Result<LorentzReport> {
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    if cone.dim() != f.nvars() {
        return Err(Error::DimensionMismatch {
            expected: f.nvars(),
            got: cone.dim(),
        });
    }
    let mut report = LorentzReport {
        holds: true,
        strict: true,
        chains: n_chains,
        seed,
        witnesses: Vec::new(),
    };
    if f.is_zero() {
        // The zero polynomial has Lorentzian signature by convention.
        report.strict = false;
        return Ok(report);
    }
    let d = f.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_chains {
        let dirs = cone.sample_interior(d.max(2), &mut rng)?;
        if d >= 2 {
            // Contract down to a quadratic with the last d-2 directions.
            let mut g = f.clone();
            for a in &dirs[2..d.max(2)] {
                g = g.directional_derivative(a)?;
            }
            let q = g.hessian_at(&vec![0.0; f.nvars()])?;
            let class = lorentz_class(&q)?;
            if class == LorentzClass::NotLorentzian {
                report.holds = false;
                report.strict = false;
                let sig = crate::spectra::eigen_signature(&q, None)?;
                report.witnesses.push(ChainWitness {
                    kind: WitnessKind::NotLorentzian,
                    directions: dirs[2..].to_vec(),
                    inertia: Some([sig.n_pos, sig.n_zero, sig.n_neg]),
                    contraction: None,
                });
                continue;
            }
            if class != LorentzClass::LorentzianStrict {
                report.strict = false;
            }
            // Full contraction a1^T H_g a2 over the remaining two directions.
            let mut value = 0.0;
            for i in 0..f.nvars() {
                for j in 0..f.nvars() {
                    value += dirs[0][i] * q[(i, j)] * dirs[1][j];
                }
            }
            if value <= 0.0 {
                report.holds = false;
                report.witnesses.push(ChainWitness {
                    kind: WitnessKind::NonpositiveContraction,
                    directions: dirs.clone(),
                    inertia: None,
                    contraction: Some(value),
                });
            }
        } else {
            // Degree 0 or 1: only the positivity condition remains.
            let mut g = f.clone();
            for a in dirs.iter().take(d) {
                g = g.directional_derivative(a)?;
            }
            let value = g.coefficient(&vec![0u32; f.nvars()]).to_f64();
            if value <= 0.0 {
                report.holds = false;
                report.witnesses.push(ChainWitness {
                    kind: WitnessKind::NonpositiveContraction,
                    directions: dirs[..d].to_vec(),
                    inertia: None,
                    contraction: Some(value),
                });
            }
        }
    }
    Ok(report)
}

/// Sampled conic-stability check: `f` must be hyperbolic with respect to
/// every sampled interior point of the cone. Since a conic stable polynomial
/// cannot vanish on the connected interior, a sign change between samples
/// also refutes stability; that check catches sign-indefinite polynomials
/// whose zero set sampling would otherwise miss.
pub fn k_stable_check(
    f: &MultiPoly<f64>,
    cone: &ConeSpec,
    n_samples: usize,
    seed: u64,
) -> Result<bool> {
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    if cone.dim() != f.nvars() {
        return Err(Error::DimensionMismatch {
            expected: f.nvars(),
            got: cone.dim(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = cone.sample_interior(n_samples, &mut rng)?;
    let mut sign = 0.0_f64;
    for (idx, y) in points.iter().enumerate() {
        let fy = f.evaluate(y)?;
        let scale = f.evaluate_abs(y)?;
        if fy.abs() <= 1e-12 * scale.max(1e-300) {
            return Ok(false);
        }
        if sign == 0.0 {
            sign = fy.signum();
        } else if fy.signum() != sign {
            return Ok(false);
        }
        // Derive per-point seeds so the whole check stays reproducible.
        if !is_hyperbolic(f, y, 64, seed.wrapping_add(idx as u64 + 1))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Brute-force check of the M-convex exchange property on the support of `f`.
pub fn m_convex_support<T: Coeff>(f: &MultiPoly<T>) -> bool {
    let support = f.support();
    for alpha in &support {
        for beta in &support {
            for i in 0..alpha.len() {
                if alpha[i] <= beta[i] {
                    continue;
                }
                let witness = (0..alpha.len()).any(|j| {
                    if alpha[j] >= beta[j] {
                        return false;
                    }
                    let mut moved = alpha.clone();
                    moved[i] -= 1;
                    moved[j] += 1;
                    support.contains(&moved)
                });
                if !witness {
                    return false;
                }
            }
        }
    }
    true
}
