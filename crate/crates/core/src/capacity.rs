//! Polynomial capacity over the positive orthant intersected with a cone:
//! multi-start projected gradient descent on log f(e^y) - <alpha, y>.
//!
//! For mixed-sign hyperbolic polynomials this objective is the minimization
//! of a concave function over a convex set, not a convex program, so the
//! returned value is an upper bound on the true capacity: the best local
//! value across the starts, with convergence diagnostics attached.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::ConeSpec;
use crate::matrix::Mat;
use crate::poly::MultiPoly;

#[derive(Clone, Debug)]
pub struct CapacityConfig {
    pub starts: usize,
    pub max_iter: usize,
    /// Relative objective-change stopping tolerance.
    pub tol: f64,
    pub seed: u64,
}

impl Default for CapacityConfig {
    fn default() -> Self {
        CapacityConfig {
            starts: 16,
            max_iter: 500,
            tol: 1e-10,
            seed: 0,
        }
    }
}

/// Best capacity value found. `value` is an upper bound on the true
/// capacity; `feasible = false` means no positive cone point with f > 0 was
/// found within the sampling budget.
#[derive(Clone, Debug, Serialize)]
pub struct CapacityResult {
    pub value: f64,
    pub log_value: f64,
    pub argmin: Vec<f64>,
    pub iterations: usize,
    pub starts: usize,
    pub converged: bool,
    pub feasible: bool,
}

struct Objective<'a> {
    f: &'a MultiPoly<f64>,
    partials: Vec<MultiPoly<f64>>,
    alpha: &'a [f64],
    cone: &'a ConeSpec,
}

impl Objective<'_> {
    /// g(y) = log f(e^y) - <alpha, y>; NaN when infeasible.
    fn eval(&self, y: &[f64]) -> f64 {
        let x: Vec<f64> = y.iter().map(|v| v.exp()).collect();
        let fx = match self.f.evaluate(&x) {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        if !fx.is_finite() || fx <= 0.0 {
            return f64::NAN;
        }
        match self.cone.contains(&x) {
            Ok(true) => {}
            _ => return f64::NAN,
        }
        fx.ln() - self.alpha.iter().zip(y).map(|(a, yi)| a * yi).sum::<f64>()
    }

    fn gradient(&self, y: &[f64]) -> Vec<f64> {
        let x: Vec<f64> = y.iter().map(|v| v.exp()).collect();
        let fx = self.f.evaluate(&x).unwrap_or(f64::NAN);
        self.partials
            .iter()
            .zip(&x)
            .zip(self.alpha)
            .map(|((p, xi), ai)| xi * p.evaluate(&x).unwrap_or(f64::NAN) / fx - ai)
            .collect()
    }
}

fn project_hyperplane(g: &mut [f64]) {
    let mean = g.iter().sum::<f64>() / g.len() as f64;
    for gi in g {
        *gi -= mean;
    }
}

/// Minimizes log f(e^y) - <alpha, y> over y with e^y inside the cone, by
/// multi-start projected gradient descent with backtracking line search that
/// rejects steps leaving the feasible region. For alpha = all-ones the
/// iterates are projected onto the hyperplane sum y_i = 0.
pub fn capacity_estimate(
    f: &MultiPoly<f64>,
    alpha: &[f64],
    cone: &ConeSpec,
    cfg: &CapacityConfig,
) -> Result<CapacityResult> {
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let n = f.nvars();
    if alpha.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: alpha.len(),
        });
    }
    if alpha.iter().any(|&a| a < 0.0) {
        return Err(Error::Precondition(
            "capacity exponents must be nonnegative".into(),
        ));
    }
    if cone.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: cone.dim(),
        });
    }
    let partials: Vec<MultiPoly<f64>> = (0..n).map(|i| f.partial(i)).collect::<Result<_>>()?;
    let obj = Objective {
        f,
        partials,
        alpha,
        cone,
    };
    let project = alpha.iter().all(|&a| a == 1.0);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(cfg.starts);
    // The all-ones point comes first when feasible: it pins the estimate at
    // or below f(1,...,1), which the bound audits rely on.
    let ones = vec![0.0; n];
    if obj.eval(&ones).is_finite() {
        starts.push(ones);
    }
    let mut budget = 200 * cfg.starts;
    while starts.len() < cfg.starts && budget > 0 {
        budget -= 1;
        let batch = match cone.sample_interior(1, &mut rng) {
            Ok(b) => b,
            Err(Error::ConeSampling(_)) => break,
            Err(e) => return Err(e),
        };
        let x = &batch[0];
        if x.iter().all(|&v| v > 0.0) {
            let mut y: Vec<f64> = x.iter().map(|v| v.ln()).collect();
            if project {
                project_hyperplane(&mut y);
            }
            if obj.eval(&y).is_finite() {
                starts.push(y);
            }
        }
    }
    if starts.is_empty() {
        return Ok(CapacityResult {
            value: f64::INFINITY,
            log_value: f64::INFINITY,
            argmin: Vec::new(),
            iterations: 0,
            starts: cfg.starts,
            converged: false,
            feasible: false,
        });
    }

    let mut best: Option<(f64, Vec<f64>, usize, bool)> = None;
    for start in &starts {
        let (y, val, iters, converged) = descend(&obj, start, project, cfg);
        let better = match &best {
            Some((bv, ..)) => val < *bv,
            None => true,
        };
        if better {
            best = Some((val, y, iters, converged));
        }
    }
    let (log_value, y, iterations, converged) =
        best.ok_or_else(|| Error::Numerical("all capacity starts failed".into()))?;
    let argmin: Vec<f64> = y.iter().map(|v| v.exp()).collect();
    // Direct ratio at the minimizer; the invariant value = f(x)/x^alpha.
    let fx = f.evaluate(&argmin)?;
    let denom: f64 = argmin.iter().zip(alpha).map(|(x, a)| x.powf(*a)).product();
    let value = fx / denom;
    let feasible = argmin.iter().all(|&v| v > 0.0) && cone.contains(&argmin)?;
    Ok(CapacityResult {
        value,
        log_value,
        argmin,
        iterations,
        starts: cfg.starts,
        converged: converged && feasible,
        feasible,
    })
}

fn descend(
    obj: &Objective<'_>,
    start: &[f64],
    project: bool,
    cfg: &CapacityConfig,
) -> (Vec<f64>, f64, usize, bool) {
    let mut y = start.to_vec();
    let mut val = obj.eval(&y);
    let mut converged = false;
    let mut iters = 0;
    for _ in 0..cfg.max_iter {
        iters += 1;
        let mut g = obj.gradient(&y);
        if project {
            project_hyperplane(&mut g);
        }
        let gnorm2: f64 = g.iter().map(|v| v * v).sum();
        if !gnorm2.is_finite() {
            break;
        }
        if gnorm2.sqrt() <= 1e-14 * (1.0 + val.abs()) {
            converged = true;
            break;
        }
        let mut eta = 1.0 / (1.0 + gnorm2.sqrt());
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = y.iter().zip(&g).map(|(yi, gi)| yi - eta * gi).collect();
            // Keep exponents in a range where exp() and the polynomial stay finite.
            if cand.iter().any(|v| v.abs() > 40.0) {
                eta *= 0.5;
                continue;
            }
            let cand_val = obj.eval(&cand);
            if cand_val.is_finite() && cand_val <= val - 1e-4 * eta * gnorm2 {
                let change = (val - cand_val).abs();
                y = cand;
                val = cand_val;
                accepted = true;
                if change <= cfg.tol * val.abs().max(1.0) {
                    converged = true;
                }
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            // No feasible descent step: treat as a local minimum.
            converged = true;
            break;
        }
        if converged {
            break;
        }
    }
    (y, val, iters, converged)
}

/// Bound audit for nonnegative polynomials: f(1,...,1) >= Cap_mu(f) >= f_mu.
#[derive(Clone, Debug, Serialize)]
pub struct CapacityAudit {
    pub f_at_ones: f64,
    pub coeff_mu: f64,
    pub capacity: CapacityResult,
    pub upper_ok: bool,
    pub lower_ok: bool,
}

/// Runs the capacity estimator over the positive orthant and checks the
/// sandwich f(1) >= Cap >= f_mu. Requires all coefficients nonnegative and
/// mu in the support.
pub fn capacity_bounds_audit(f: &MultiPoly<f64>, mu: &[u32]) -> Result<CapacityAudit> {
    for (exp, coef) in f.terms() {
        if *coef < 0.0 {
            return Err(Error::NegativeCoefficient(exp.to_vec()));
        }
    }
    if mu.len() != f.nvars() {
        return Err(Error::DimensionMismatch {
            expected: f.nvars(),
            got: mu.len(),
        });
    }
    let coeff_mu = f.coefficient(mu);
    if coeff_mu == 0.0 {
        return Err(Error::Precondition(
            "mu must lie in the support of f".into(),
        ));
    }
    let alpha: Vec<f64> = mu.iter().map(|&m| m as f64).collect();
    let cone = ConeSpec::orthant(f.nvars());
    let capacity = capacity_estimate(f, &alpha, &cone, &CapacityConfig::default())?;
    let f_at_ones = f.evaluate(&vec![1.0; f.nvars()])?;
    let slack = 1e-7 * f_at_ones.abs().max(1.0);
    let upper_ok = capacity.feasible && capacity.value <= f_at_ones + slack;
    let lower_ok = capacity.feasible && capacity.value >= coeff_mu - slack;
    Ok(CapacityAudit {
        f_at_ones,
        coeff_mu,
        capacity,
        upper_ok,
        lower_ok,
    })
}

/// Sinkhorn row/column normalization towards a doubly stochastic matrix.
/// Requires strictly positive entries.
pub fn sinkhorn_normalize(a: &Mat<f64>, max_iter: usize, tol: f64) -> Result<Mat<f64>> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(
            "sinkhorn needs a square matrix".into(),
        ));
    }
    let n = a.nrows();
    for i in 0..n {
        for j in 0..n {
            if a[(i, j)] <= 0.0 {
                return Err(Error::Precondition(
                    "sinkhorn needs positive entries".into(),
                ));
            }
        }
    }
    let mut m = a.clone();
    for _ in 0..max_iter {
        for i in 0..n {
            let s: f64 = (0..n).map(|j| m[(i, j)]).sum();
            for j in 0..n {
                m[(i, j)] /= s;
            }
        }
        for j in 0..n {
            let s: f64 = (0..n).map(|i| m[(i, j)]).sum();
            for i in 0..n {
                m[(i, j)] /= s;
            }
        }
        let worst = (0..n)
            .map(|i| ((0..n).map(|j| m[(i, j)]).sum::<f64>() - 1.0).abs())
            .chain((0..n).map(|j| ((0..n).map(|i| m[(i, j)]).sum::<f64>() - 1.0).abs()))
            .fold(0.0, f64::max);
        if worst <= tol {
            return Ok(m);
        }
    }
    Err(Error::Numerical("sinkhorn failed to converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permanent::generating_polynomial;
    use rand::Rng;
    use rand::SeedableRng;

    /// Generating polynomial of J_n (all entries 1/n): ((x1+...+xn)/n)^n.
    fn jn_poly(n: usize) -> MultiPoly<f64> {
        let jn = Mat::from_fn(n, n, |_, _| 1.0 / n as f64);
        generating_polynomial(&jn).unwrap()
    }

    #[test]
    fn capacity_of_product_is_one() {
        // f = x1 x2 x3: f / x^1 is constantly 1.
        let f = MultiPoly::from_terms(3, vec![(vec![1, 1, 1], 1.0)]).unwrap();
        let r = capacity_estimate(
            &f,
            &[1.0; 3],
            &ConeSpec::orthant(3),
            &CapacityConfig::default(),
        )
        .unwrap();
        assert!(r.feasible);
        assert!((r.value - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn capacity_of_j2_polynomial() {
        let f = jn_poly(2);
        let r = capacity_estimate(
            &f,
            &[1.0; 2],
            &ConeSpec::orthant(2),
            &CapacityConfig::default(),
        )
        .unwrap();
        assert!(r.feasible);
        assert!(r.value <= 1.0 + 1e-6, "value {}", r.value);
        assert!(r.value >= 1.0 - 1e-3, "value {}", r.value);
    }

    #[test]
    fn capacity_scaling_covariance() {
        // Cap(c f) = c Cap(f).
        let f = jn_poly(3);
        let cfg = CapacityConfig::default();
        let cone = ConeSpec::orthant(3);
        let base = capacity_estimate(&f, &[1.0; 3], &cone, &cfg).unwrap();
        let scaled = capacity_estimate(&f.scale(&2.5), &[1.0; 3], &cone, &cfg).unwrap();
        assert!((scaled.value - 2.5 * base.value).abs() <= 1e-8 * scaled.value.max(1.0));
    }

    #[test]
    fn capacity_quartic_over_hyperbolicity_cone() {
        let g = Mat::from_fn(4, 4, |i, j| if i == j { 1.0 } else { -1.0 });
        let f = generating_polynomial(&g).unwrap();
        let cone = ConeSpec::hyperbolicity(f.clone(), vec![1.0; 4], 64, 0).unwrap();
        let r = capacity_estimate(&f, &[1.0; 4], &cone, &CapacityConfig::default()).unwrap();
        assert!(r.feasible);
        assert!(r.value.is_finite() && r.value > 0.0);
        assert!(r.argmin.iter().all(|&v| v > 0.0));
        assert!(cone.contains(&r.argmin).unwrap());
    }

    #[test]
    fn audit_bilinear_all_bounds_tight() {
        let f = MultiPoly::from_terms(2, vec![(vec![1, 1], 1.0)]).unwrap();
        let audit = capacity_bounds_audit(&f, &[1, 1]).unwrap();
        assert!(audit.upper_ok && audit.lower_ok);
        assert!((audit.capacity.value - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn audit_sum_of_squares() {
        // f = x1^2 + x2^2, mu = (2,0): 2 >= Cap >= 1, and Cap = 1 at x2 -> 0.
        let f = MultiPoly::from_terms(2, vec![(vec![2, 0], 1.0), (vec![0, 2], 1.0)]).unwrap();
        let audit = capacity_bounds_audit(&f, &[2, 0]).unwrap();
        assert!(audit.upper_ok && audit.lower_ok);
        assert!(audit.capacity.value <= 2.0 + 1e-7);
        assert!(audit.capacity.value >= 1.0 - 1e-7);
    }

    #[test]
    fn audit_jn_bounds() {
        // 1 >= Cap_1(f_{J_n}) >= n!/n^n for n = 2, 3, 4.
        for n in 2..=4usize {
            let audit = capacity_bounds_audit(&jn_poly(n), &vec![1; n]).unwrap();
            assert!(audit.upper_ok && audit.lower_ok, "n = {n}");
            assert!((audit.f_at_ones - 1.0).abs() <= 1e-12);
            let vdw: f64 = (1..=n).map(|i| i as f64 / n as f64).product();
            assert!(audit.capacity.value >= vdw - 1e-9);
        }
    }

    #[test]
    fn audit_rejects_negative_coefficients() {
        let f = MultiPoly::from_terms(2, vec![(vec![2, 0], 1.0), (vec![0, 2], -1.0)]).unwrap();
        assert!(matches!(
            capacity_bounds_audit(&f, &[2, 0]),
            Err(Error::NegativeCoefficient(_))
        ));
    }

    #[test]
    fn sinkhorn_produces_doubly_stochastic() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let a = Mat::from_fn(4, 4, |_, _| rng.random_range(0.1..2.0));
        let m = sinkhorn_normalize(&a, 10_000, 1e-12).unwrap();
        for i in 0..4 {
            let row: f64 = (0..4).map(|j| m[(i, j)]).sum();
            let col: f64 = (0..4).map(|j| m[(j, i)]).sum();
            assert!((row - 1.0).abs() <= 1e-10);
            assert!((col - 1.0).abs() <= 1e-10);
        }
    }
}
