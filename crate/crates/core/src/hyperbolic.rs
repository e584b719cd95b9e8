//! Hyperbolicity machinery: real-rootedness of line restrictions, cone
//! membership, generating-polynomial directions, Nuij perturbation,
//! interlacing, and derivative-relaxation checks.
//!
//! Universal statements ("for all x", "over the whole cone") are undecidable
//! by sampling, so the boolean tests here are Monte-Carlo certificates: each
//! takes an explicit sample count and seed, and a `true` answer means "no
//! counterexample found".

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::poly::MultiPoly;
use crate::scalar::Coeff;

/// Realness threshold on the scaled imaginary part |Im r| / (1 + |r|).
pub const ROOT_TOL: f64 = 1e-8;

/// Default sample count for Monte-Carlo hyperbolicity certificates.
pub const DEFAULT_SAMPLES: usize = 256;

/// Roots of a univariate restriction with realness/negativity verdicts.
#[derive(Clone, Debug)]
pub struct RootProfile {
    pub roots: Vec<Complex<f64>>,
    /// max over roots of |Im r| / (1 + |r|).
    pub max_imag_ratio: f64,
    pub all_real: bool,
    /// All roots strictly negative (within the scaled tolerance). Only
    /// meaningful when `all_real` holds.
    pub all_negative: bool,
}

impl RootProfile {
    /// Closed-cone variant: all roots real and at most the tolerance band.
    pub fn all_nonpositive(&self) -> bool {
        self.all_real
            && self
                .roots
                .iter()
                .all(|r| r.re <= ROOT_TOL * (1.0 + r.norm()))
    }
}

/// Roots of the polynomial with ascending coefficients `coeffs` via
/// companion-matrix eigenvalues. Errors on the zero polynomial.
pub fn real_root_profile(coeffs: &[f64]) -> Result<RootProfile> {
    let mut deg = None;
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c != 0.0 {
            deg = Some(i);
            break;
        }
    }
    let Some(deg) = deg else {
        return Err(Error::ZeroPolynomial);
    };
    if deg == 0 {
        return Ok(RootProfile {
            roots: Vec::new(),
            max_imag_ratio: 0.0,
            all_real: true,
            all_negative: true,
        });
    }
    let lead = coeffs[deg];
    let companion = DMatrix::from_fn(deg, deg, |i, j| {
        if j + 1 == deg {
            -coeffs[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let roots: Vec<Complex<f64>> = companion.complex_eigenvalues().iter().copied().collect();
    let max_imag_ratio = roots
        .iter()
        .map(|r| r.im.abs() / (1.0 + r.norm()))
        .fold(0.0, f64::max);
    let all_real = max_imag_ratio <= ROOT_TOL;
    let all_negative = all_real && roots.iter().all(|r| r.re < -ROOT_TOL * (1.0 + r.norm()));
    Ok(RootProfile {
        roots,
        max_imag_ratio,
        all_real,
        all_negative,
    })
}

/// Monte-Carlo hyperbolicity certificate: true when the restriction of `f` to
/// `n_samples` random Gaussian lines through `e` is always real-rooted.
pub fn is_hyperbolic(f: &MultiPoly<f64>, e: &[f64], n_samples: usize, seed: u64) -> Result<bool> {
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let fe = f.evaluate(e)?;
    let scale = f.evaluate_abs(e)?;
    if fe.abs() <= 1e-12 * scale.max(1e-300) {
        return Err(Error::Precondition(
            "f(e) = 0: not a hyperbolicity direction".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_samples {
        let x: Vec<f64> = (0..f.nvars()).map(|_| rng.sample(StandardNormal)).collect();
        let coeffs = f.restrict_line(&x, e)?;
        if !real_root_profile(&coeffs)?.all_real {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in the open hyperbolicity cone: all roots of t -> f(x + t e)
/// real and strictly negative. Assumes `is_hyperbolic(f, e)`.
pub fn cone_membership(f: &MultiPoly<f64>, e: &[f64], x: &[f64]) -> Result<bool> {
    let coeffs = f.restrict_line(x, e)?;
    match real_root_profile(&coeffs) {
        Ok(profile) => Ok(profile.all_negative),
        Err(Error::ZeroPolynomial) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Solves A^T e = 1 (all-ones) so that the diagonal coefficient matrices of
/// the generating polynomial sum to the identity along `e`. Errors when the
/// system is inconsistent.
pub fn direction_for_matrix(a: &Mat<f64>) -> Result<Vec<f64>> {
    let (n, m) = (a.nrows(), a.ncols());
    let at = DMatrix::from_fn(m, n, |i, j| a[(j, i)]);
    let ones = DVector::from_element(m, 1.0);
    let frob = at.norm();
    let svd = at.clone().svd(true, true);
    let eps = 1e-12 * frob.max(1.0);
    let mut e = svd
        .solve(&ones, eps)
        .map_err(|msg| Error::Numerical(msg.to_string()))?;
    // Iterative refinement tightens consistent systems to near machine
    // precision even for ill-conditioned A.
    for _ in 0..3 {
        let r = &ones - &at * &e;
        if r.amax() <= f64::EPSILON * frob {
            break;
        }
        if let Ok(correction) = svd.solve(&r, eps) {
            e += correction;
        } else {
            break;
        }
    }
    let residual = (&at * &e - &ones).amax();
    if residual > 1e-9 * frob.max(1.0) {
        return Err(Error::InconsistentSystem { residual });
    }
    Ok(e.iter().copied().collect())
}

/// One Nuij perturbation step (1 + s x_i d_j) f.
pub fn nuij_step<T: Coeff>(f: &MultiPoly<T>, i: usize, j: usize, s: &T) -> Result<MultiPoly<T>> {
    let n = f.nvars();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, len: n });
    }
    if i == j {
        return Err(Error::Precondition("nuij_step needs i != j".into()));
    }
    let mut e = vec![0u32; n];
    e[i] = 1;
    let xi = MultiPoly::monomial(n, e, s.clone())?;
    f.add(&xi.mul(&f.partial(j)?)?)
}

/// The full Nuij approximation: applies (1 + s x_i d_j) deg(f) times for each
/// i != j. The result converges to `f` coefficientwise as s -> 0 and is
/// strictly hyperbolic along e_j for s != 0.
pub fn nuij_approx<T: Coeff>(f: &MultiPoly<T>, j: usize, s: &T) -> Result<MultiPoly<T>> {
    let n = f.nvars();
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, len: n });
    }
    let d = f.degree();
    let mut out = f.clone();
    for i in 0..n {
        if i == j {
            continue;
        }
        for _ in 0..d {
            out = nuij_step(&out, i, j, s)?;
        }
    }
    Ok(out)
}

/// Weak interlacing of root sequences: deg g = deg f - 1, both real-rooted,
/// and sorted roots satisfy alpha_i <= beta_i <= alpha_{i+1} within the root
/// tolerance.
pub fn interlaces(g: &[f64], f: &[f64]) -> Result<bool> {
    let pf = real_root_profile(f)?;
    let pg = real_root_profile(g)?;
    if pg.roots.len() + 1 != pf.roots.len() {
        return Err(Error::Precondition(format!(
            "interlacing needs deg g = deg f - 1, got {} and {}",
            pg.roots.len(),
            pf.roots.len()
        )));
    }
    if !pf.all_real || !pg.all_real {
        return Err(Error::Precondition(
            "interlacing needs real-rooted inputs".into(),
        ));
    }
    let mut alpha: Vec<f64> = pf.roots.iter().map(|r| r.re).collect();
    let mut beta: Vec<f64> = pg.roots.iter().map(|r| r.re).collect();
    alpha.sort_by(f64::total_cmp);
    beta.sort_by(f64::total_cmp);
    let tol = |v: f64| ROOT_TOL * (1.0 + v.abs());
    Ok(beta
        .iter()
        .enumerate()
        .all(|(i, &b)| b >= alpha[i] - tol(alpha[i]) && b <= alpha[i + 1] + tol(alpha[i + 1])))
}

/// Checks the derivative-relaxation inclusions: every sampled point of the
/// hyperbolicity cone of `f` lies in the closed cone of the m-th directional
/// derivative along `e` for 1 <= m <= k. Errors when k >= deg f.
pub fn relaxation_inclusion_check(
    f: &MultiPoly<f64>,
    e: &[f64],
    k: usize,
    n_samples: usize,
    seed: u64,
) -> Result<bool> {
    if k >= f.degree() {
        return Err(Error::Precondition(format!(
            "relaxation order k = {k} must be below deg f = {}",
            f.degree()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = sample_hyperbolicity_cone(f, e, n_samples, &mut rng)?;
    let mut derivs = Vec::with_capacity(k);
    let mut g = f.clone();
    for _ in 0..k {
        g = g.directional_derivative(e)?;
        derivs.push(g.clone());
    }
    for x in &points {
        for g in &derivs {
            let coeffs = g.restrict_line(x, e)?;
            match real_root_profile(&coeffs) {
                Ok(profile) if profile.all_nonpositive() => {}
                Ok(_) => return Ok(false),
                Err(Error::ZeroPolynomial) => return Ok(false),
                Err(err) => return Err(err),
            }
        }
    }
    Ok(true)
}

/// Description of a closed convex cone: the nonnegative orthant, a finitely
/// generated cone, or a hyperbolicity cone.
#[derive(Clone, Debug)]
pub enum ConeSpec {
    Orthant {
        dim: usize,
    },
    Generators {
        generators: Vec<Vec<f64>>,
    },
    Hyperbolicity {
        poly: MultiPoly<f64>,
        direction: Vec<f64>,
    },
}

impl ConeSpec {
    pub fn orthant(dim: usize) -> Self {
        ConeSpec::Orthant { dim }
    }

    pub fn generators(generators: Vec<Vec<f64>>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("generator list is empty".into()));
        }
        let dim = generators[0].len();
        for g in &generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: g.len(),
                });
            }
            if g.iter().all(|&v| v == 0.0) {
                return Err(Error::InvalidInput("zero generator".into()));
            }
        }
        Ok(ConeSpec::Generators { generators })
    }

    /// Builds a hyperbolicity cone after verifying f(e) > 0 and the sampled
    /// hyperbolicity certificate.
    pub fn hyperbolicity(
        poly: MultiPoly<f64>,
        direction: Vec<f64>,
        n_check: usize,
        seed: u64,
    ) -> Result<Self> {
        if poly.evaluate(&direction)? <= 0.0 {
            return Err(Error::Precondition(
                "hyperbolicity cone needs f(e) > 0".into(),
            ));
        }
        if !is_hyperbolic(&poly, &direction, n_check, seed)? {
            return Err(Error::Precondition(
                "polynomial failed the sampled hyperbolicity certificate".into(),
            ));
        }
        Ok(ConeSpec::Hyperbolicity { poly, direction })
    }

    /// Builds the hyperbolicity variant without running the certificate;
    /// for callers that have already established hyperbolicity.
    pub fn hyperbolicity_unchecked(poly: MultiPoly<f64>, direction: Vec<f64>) -> Self {
        ConeSpec::Hyperbolicity { poly, direction }
    }

    pub fn dim(&self) -> usize {
        match self {
            ConeSpec::Orthant { dim } => *dim,
            ConeSpec::Generators { generators } => generators[0].len(),
            ConeSpec::Hyperbolicity { poly, .. } => poly.nvars(),
        }
    }

    /// Interior membership test. Orthant: strict positivity. Hyperbolicity:
    /// strictly negative restriction roots. Generators: nonnegative
    /// least-squares residual within tolerance (closed cone; interiors of
    /// finitely generated cones are not decided here).
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        match self {
            ConeSpec::Orthant { .. } => Ok(x.iter().all(|&v| v > 0.0)),
            ConeSpec::Generators { generators } => {
                let residual = nnls_residual(generators, x);
                let scale = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
                Ok(residual <= 1e-8 * scale.max(1.0))
            }
            ConeSpec::Hyperbolicity { poly, direction } => cone_membership(poly, direction, x),
        }
    }

    /// Draws `n` interior points. Orthant coordinates are Exp(1); generator
    /// cones use Dirichlet-weighted convex combinations scaled by Exp(1);
    /// hyperbolicity cones use rejection sampling around the direction with
    /// an adaptive radius.
    pub fn sample_interior(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<f64>>> {
        match self {
            ConeSpec::Orthant { dim } => Ok((0..n)
                .map(|_| (0..*dim).map(|_| rng.sample(Exp1)).collect())
                .collect()),
            ConeSpec::Generators { generators } => Ok((0..n)
                .map(|_| {
                    // Dirichlet(1,...,1) weights via normalized exponentials.
                    let mut w: Vec<f64> = (0..generators.len()).map(|_| rng.sample(Exp1)).collect();
                    let total: f64 = w.iter().sum();
                    for wi in &mut w {
                        *wi /= total;
                    }
                    let scale: f64 = rng.sample(Exp1);
                    let dim = generators[0].len();
                    let mut x = vec![0.0; dim];
                    for (g, wi) in generators.iter().zip(&w) {
                        for (xi, gi) in x.iter_mut().zip(g) {
                            *xi += scale * wi * gi;
                        }
                    }
                    x
                })
                .collect()),
            ConeSpec::Hyperbolicity { poly, direction } => {
                sample_hyperbolicity_cone(poly, direction, n, rng)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ConeSpec::Orthant { dim } => json!({ "variant": "orthant", "dim": dim }),
            ConeSpec::Generators { generators } => {
                json!({ "variant": "generators", "generators": generators })
            }
            ConeSpec::Hyperbolicity { poly, direction } => json!({
                "variant": "hyperbolicity",
                "poly": poly.to_json(),
                "direction": direction,
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let variant = v
            .get("variant")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::InvalidInput("cone JSON needs a \"variant\"".into()))?;
        match variant {
            "orthant" => {
                let dim = v
                    .get("dim")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::InvalidInput("orthant cone needs \"dim\"".into()))?;
                Ok(ConeSpec::orthant(dim as usize))
            }
            "generators" => {
                let gens = v
                    .get("generators")
                    .and_then(Value::as_array)
                    .ok_or_else(|| {
                        Error::InvalidInput("generator cone needs \"generators\"".into())
                    })?
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .ok_or_else(|| Error::InvalidInput("generators must be arrays".into()))?
                            .iter()
                            .map(|e| {
                                e.as_f64().ok_or_else(|| {
                                    Error::InvalidInput("generator entries must be numbers".into())
                                })
                            })
                            .collect::<Result<Vec<f64>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                ConeSpec::generators(gens)
            }
            "hyperbolicity" => {
                let poly = MultiPoly::from_json(v.get("poly").ok_or_else(|| {
                    Error::InvalidInput("hyperbolicity cone needs \"poly\"".into())
                })?)?;
                let direction = v
                    .get("direction")
                    .and_then(Value::as_array)
                    .ok_or_else(|| {
                        Error::InvalidInput("hyperbolicity cone needs \"direction\"".into())
                    })?
                    .iter()
                    .map(|e| {
                        e.as_f64().ok_or_else(|| {
                            Error::InvalidInput("direction entries must be numbers".into())
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                if poly.evaluate(&direction)? <= 0.0 {
                    return Err(Error::Precondition(
                        "hyperbolicity cone needs f(e) > 0".into(),
                    ));
                }
                Ok(ConeSpec::Hyperbolicity { poly, direction })
            }
            other => Err(Error::InvalidInput(format!(
                "unknown cone variant {other:?}"
            ))),
        }
    }
}

/// Rejection sampler for the open hyperbolicity cone: Gaussian perturbations
/// of the direction, radius adapted to keep the acceptance rate workable.
pub(crate) fn sample_hyperbolicity_cone(
    f: &MultiPoly<f64>,
    e: &[f64],
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<f64>>> {
    let dim = e.len();
    let e_norm = e.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
    let mut radius = 0.5 * e_norm;
    let mut points = Vec::with_capacity(n);
    let mut tries_since_hit = 0usize;
    let mut window_tries = 0usize;
    let mut window_hits = 0usize;
    while points.len() < n {
        let x: Vec<f64> = (0..dim)
            .map(|i| e[i] + radius * rng.sample::<f64, _>(StandardNormal))
            .collect();
        window_tries += 1;
        if cone_membership(f, e, &x)? {
            points.push(x);
            window_hits += 1;
            tries_since_hit = 0;
        } else {
            tries_since_hit += 1;
            if tries_since_hit > 10_000 {
                return Err(Error::ConeSampling(format!(
                    "no interior point found after {tries_since_hit} rejections (radius {radius:.3e})"
                )));
            }
        }
        if window_tries >= 64 {
            let rate = window_hits as f64 / window_tries as f64;
            if rate < 0.1 {
                radius *= 0.5;
            } else if rate > 0.6 {
                radius = (radius * 1.5).min(1e3 * e_norm);
            }
            window_tries = 0;
            window_hits = 0;
        }
    }
    Ok(points)
}

/// Residual of projecting `x` onto the cone spanned by `generators`, via
/// projected gradient on the nonnegative coefficients.
fn nnls_residual(generators: &[Vec<f64>], x: &[f64]) -> f64 {
    let dim = x.len();
    let m = generators.len();
    let g = DMatrix::from_fn(dim, m, |i, j| generators[j][i]);
    let xv = DVector::from_column_slice(x);
    let gtg = g.transpose() * &g;
    let gtx = g.transpose() * &xv;
    // Lipschitz constant of the gradient; trace bounds the spectral norm.
    let lip = gtg.trace().max(1e-12);
    let mut lambda = DVector::from_element(m, 0.0);
    for _ in 0..2000 {
        let grad = &gtg * &lambda - &gtx;
        let mut next = &lambda - grad / lip;
        next.iter_mut().for_each(|v| *v = v.max(0.0));
        let step = (&next - &lambda).norm();
        lambda = next;
        if step <= 1e-14 * (1.0 + lambda.norm()) {
            break;
        }
    }
    (&g * lambda - xv).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::quartic_f64;

    fn lorentz_quadric() -> MultiPoly<f64> {
        MultiPoly::from_terms(
            3,
            vec![
                (vec![2, 0, 0], 1.0),
                (vec![0, 2, 0], -1.0),
                (vec![0, 0, 2], -1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn root_profile_shifted_quadratic() {
        // (t+2)^2 - 2: roots -2 +- sqrt(2), real and negative.
        let p = real_root_profile(&[2.0, 4.0, 1.0]).unwrap();
        assert!(p.all_real);
        assert!(p.all_negative);
        let mut roots: Vec<f64> = p.roots.iter().map(|r| r.re).collect();
        roots.sort_by(f64::total_cmp);
        assert!((roots[0] + 2.0 + 2.0_f64.sqrt()).abs() < 1e-9);
        assert!((roots[1] + 2.0 - 2.0_f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn root_profile_symmetric_quadratic() {
        // t^2 - 2: real roots +-sqrt(2), not all negative.
        let p = real_root_profile(&[-2.0, 0.0, 1.0]).unwrap();
        assert!(p.all_real);
        assert!(!p.all_negative);
    }

    #[test]
    fn root_profile_complex_pair() {
        let p = real_root_profile(&[1.0, 0.0, 1.0]).unwrap();
        assert!(!p.all_real);
    }

    #[test]
    fn root_profile_zero_poly_errors() {
        assert!(matches!(
            real_root_profile(&[0.0, 0.0]),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn hyperbolicity_of_lorentz_quadric() {
        let f = lorentz_quadric();
        assert!(is_hyperbolic(&f, &[1.0, 0.0, 0.0], 128, 7).unwrap());
    }

    #[test]
    fn sum_of_squares_is_not_hyperbolic() {
        let f = MultiPoly::from_terms(2, vec![(vec![2, 0], 1.0), (vec![0, 2], 1.0)]).unwrap();
        assert!(!is_hyperbolic(&f, &[1.0, 0.0], 128, 7).unwrap());
    }

    #[test]
    fn vanishing_direction_is_rejected() {
        let f = MultiPoly::from_terms(2, vec![(vec![1, 1], 1.0)]).unwrap();
        assert!(matches!(
            is_hyperbolic(&f, &[1.0, 0.0], 16, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn interlacing_error_paths() {
        // Degree gap of two.
        assert!(matches!(
            interlaces(&[1.0, 1.0], &[1.0, 0.0, 0.0, 1.0]),
            Err(Error::Precondition(_))
        ));
        // Non-real-rooted f.
        assert!(matches!(
            interlaces(&[-1.0, 1.0], &[1.0, 0.0, 1.0]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn quartic_hyperbolic_at_ones() {
        assert!(is_hyperbolic(&quartic_f64(), &[1.0; 4], 256, 0).unwrap());
    }

    #[test]
    fn hyperbolic_both_signs_of_direction() {
        let f = quartic_f64();
        let neg = [-1.0; 4];
        assert!(is_hyperbolic(&f, &neg, 128, 3).unwrap());
    }

    #[test]
    fn cone_membership_examples() {
        let f = lorentz_quadric();
        let e = [1.0, 0.0, 0.0];
        assert!(cone_membership(&f, &e, &[2.0, 1.0, 1.0]).unwrap());
        assert!(!cone_membership(&f, &e, &[1.0, 2.0, 0.0]).unwrap());
        // x = e: the restriction is (1+t)^d f(e).
        assert!(cone_membership(&f, &e, &e).unwrap());
    }

    #[test]
    fn cone_membership_scale_invariant() {
        let f = lorentz_quadric();
        let e = [1.0, 0.0, 0.0];
        let x = [3.0, 1.0, -0.5];
        let lx = [9.0, 3.0, -1.5];
        assert_eq!(
            cone_membership(&f, &e, &x).unwrap(),
            cone_membership(&f, &e, &lx).unwrap()
        );
    }

    #[test]
    fn direction_identity_and_inconsistent() {
        let e = direction_for_matrix(&Mat::identity(3)).unwrap();
        for v in e {
            assert!((v - 1.0).abs() < 1e-12);
        }
        let bad = Mat::from_rows(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        assert!(matches!(
            direction_for_matrix(&bad),
            Err(Error::InconsistentSystem { .. })
        ));
    }

    #[test]
    fn direction_for_g42() {
        // G(4,2) row sums are -2, so e = -1/2 ones solves G e = 1.
        let g = Mat::from_fn(4, 4, |i, j| if i == j { 1.0 } else { -1.0 });
        let e = direction_for_matrix(&g).unwrap();
        for v in e {
            assert!((v + 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn nuij_step_expansion() {
        // (1 + s x2 d1)(x1^2 - x2^2) = x1^2 - x2^2 + 2 s x1 x2.
        let f = MultiPoly::from_terms(2, vec![(vec![2, 0], 1.0), (vec![0, 2], -1.0)]).unwrap();
        let s = 0.25;
        let g = nuij_step(&f, 1, 0, &s).unwrap();
        let expect = MultiPoly::from_terms(
            2,
            vec![(vec![2, 0], 1.0), (vec![0, 2], -1.0), (vec![1, 1], 2.0 * s)],
        )
        .unwrap();
        assert_eq!(g, expect);
        assert_eq!(nuij_step(&f, 1, 0, &0.0).unwrap(), f);
    }

    #[test]
    fn nuij_step_rejects_equal_indices() {
        let f = MultiPoly::from_terms(2, vec![(vec![2, 0], 1.0)]).unwrap();
        assert!(matches!(
            nuij_step(&f, 0, 0, &0.1),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            nuij_step(&f, 5, 0, &0.1),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn nuij_approx_converges() {
        let f = MultiPoly::from_terms(2, vec![(vec![2, 0], 1.0), (vec![0, 2], -1.0)]).unwrap();
        assert_eq!(nuij_approx(&f, 0, &0.0).unwrap(), f);
        let s = 1e-3;
        let g = nuij_approx(&f, 0, &s).unwrap();
        let diff = g.sub(&f).unwrap();
        assert!(diff.max_abs_coeff() <= 10.0 * s);
    }

    #[test]
    fn interlacing_examples() {
        // f = (t-1)(t-3), g = (t-2): interlaces.
        assert!(interlaces(&[-2.0, 1.0], &[3.0, -4.0, 1.0]).unwrap());
        // f = (t-1)(t-2), g = (t-3): does not.
        assert!(!interlaces(&[-3.0, 1.0], &[2.0, -3.0, 1.0]).unwrap());
    }

    #[test]
    fn derivative_interlaces_random_real_rooted() {
        // Rolle: f' / deg f interlaces f for real-rooted f.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let roots: Vec<f64> = (0..4)
                .map(|_| rng.sample::<f64, _>(StandardNormal) * 3.0)
                .collect();
            // Expand prod (t - r).
            let mut coeffs = vec![1.0];
            for r in &roots {
                let mut next = vec![0.0; coeffs.len() + 1];
                for (i, &c) in coeffs.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= c * r;
                }
                coeffs = next;
            }
            let deriv: Vec<f64> = (1..coeffs.len()).map(|i| coeffs[i] * i as f64).collect();
            assert!(interlaces(&deriv, &coeffs).unwrap());
        }
    }

    #[test]
    fn relaxation_inclusion_elementary_symmetric() {
        // f = x1 x2 x3, e = ones: k = 1 relaxation contains the orthant.
        let f = MultiPoly::from_terms(3, vec![(vec![1, 1, 1], 1.0)]).unwrap();
        assert!(relaxation_inclusion_check(&f, &[1.0; 3], 1, 64, 5).unwrap());
        assert!(matches!(
            relaxation_inclusion_check(&f, &[1.0; 3], 3, 8, 5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn relaxation_inclusion_quartic() {
        assert!(relaxation_inclusion_check(&quartic_f64(), &[1.0; 4], 2, 48, 5).unwrap());
    }

    #[test]
    fn orthant_sampling_is_positive() {
        let cone = ConeSpec::orthant(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in cone.sample_interior(32, &mut rng).unwrap() {
            assert!(p.iter().all(|&v| v > 0.0));
            assert!(cone.contains(&p).unwrap());
        }
    }

    #[test]
    fn generator_cone_membership() {
        let cone = ConeSpec::generators(vec![vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert!(cone.contains(&[2.0, 1.0]).unwrap());
        assert!(!cone.contains(&[-1.0, 0.0]).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in cone.sample_interior(16, &mut rng).unwrap() {
            assert!(cone.contains(&p).unwrap());
        }
    }

    #[test]
    fn hyperbolicity_cone_sampling_stays_inside() {
        let f = quartic_f64();
        let cone = ConeSpec::hyperbolicity(f.clone(), vec![1.0; 4], 64, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in cone.sample_interior(32, &mut rng).unwrap() {
            assert!(cone_membership(&f, &[1.0; 4], &p).unwrap());
        }
    }

    #[test]
    fn cone_json_roundtrip() {
        let cone = ConeSpec::hyperbolicity_unchecked(quartic_f64(), vec![1.0; 4]);
        let v = cone.to_json();
        let back = ConeSpec::from_json(&v).unwrap();
        match back {
            ConeSpec::Hyperbolicity { poly, direction } => {
                assert_eq!(poly, quartic_f64());
                assert_eq!(direction, vec![1.0; 4]);
            }
            _ => panic!("wrong variant"),
        }
    }
}
