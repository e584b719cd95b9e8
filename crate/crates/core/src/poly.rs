//! Sparse multivariate polynomials with exact or float coefficients.
//!
//! Terms are kept in graded-lex order for deterministic iteration and
//! serialization. Values are immutable after construction; every operation
//! returns a fresh polynomial.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::{Mat, SymMatrix};
use crate::scalar::Coeff;

/// Exponent vector ordered graded-lex: total degree first, then lex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Expo(pub Vec<u32>);

impl Expo {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Expo {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Expo {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse homogeneous-friendly multivariate polynomial.
///
/// Invariants: no stored coefficient is zero; every exponent vector has
/// length `nvars`; `degree` is the maximum total degree (0 for the zero
/// polynomial); `homogeneous` is true when all terms share that total degree
/// (the zero polynomial counts as homogeneous).
#[derive(Clone, PartialEq, Debug)]
pub struct MultiPoly<T: Coeff> {
    nvars: usize,
    degree: usize,
    homogeneous: bool,
    terms: BTreeMap<Expo, T>,
}

impl<T: Coeff> MultiPoly<T> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            degree: 0,
            homogeneous: true,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Self::from_terms(nvars, vec![(vec![0; nvars], c)]).expect("constant term is well formed")
    }

    /// Builds from (exponent, coefficient) pairs. Duplicates are summed and
    /// zero results dropped.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, T)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Expo, T> = BTreeMap::new();
        for (exp, coef) in terms {
            if exp.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: exp.len(),
                });
            }
            if coef.is_zero() {
                continue;
            }
            let key = Expo(exp);
            match map.remove(&key) {
                Some(old) => {
                    let sum = old + coef;
                    if !sum.is_zero() {
                        map.insert(key, sum);
                    }
                }
                None => {
                    map.insert(key, coef);
                }
            }
        }
        Ok(Self::from_map(nvars, map))
    }

    fn from_map(nvars: usize, terms: BTreeMap<Expo, T>) -> Self {
        let degree = terms.keys().map(|e| e.total() as usize).max().unwrap_or(0);
        let homogeneous = terms.keys().all(|e| e.total() as usize == degree);
        MultiPoly {
            nvars,
            degree,
            homogeneous,
            terms,
        }
    }

    pub fn monomial(nvars: usize, exp: Vec<u32>, coef: T) -> Result<Self> {
        Self::from_terms(nvars, vec![(exp, coef)])
    }

    /// The linear form sum_i c_i x_i.
    pub fn linear_form(coeffs: &[T]) -> Self {
        let n = coeffs.len();
        let terms = coeffs.iter().enumerate().map(|(i, c)| {
            let mut e = vec![0u32; n];
            e[i] = 1;
            (e, c.clone())
        });
        Self::from_terms(n, terms).expect("linear form exponents are well formed")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &T)> {
        self.terms.iter().map(|(e, c)| (e.0.as_slice(), c))
    }

    pub fn support(&self) -> Vec<Vec<u32>> {
        self.terms.keys().map(|e| e.0.clone()).collect()
    }

    /// The coefficient c_alpha, zero if absent.
    pub fn coefficient(&self, alpha: &[u32]) -> T {
        self.terms
            .get(&Expo(alpha.to_vec()))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    pub fn evaluate(&self, x: &[T]) -> Result<T> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: x.len(),
            });
        }
        let mut acc = T::zero();
        for (exp, coef) in &self.terms {
            let mut term = coef.clone();
            for (xi, &e) in x.iter().zip(&exp.0) {
                term = term * pow(xi, e);
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Evaluates |f| at |x|: sum of |c_alpha| |x|^alpha, the natural scale for
    /// relative zero tests.
    pub fn evaluate_abs(&self, x: &[T]) -> Result<T> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: x.len(),
            });
        }
        let mut acc = T::zero();
        for (exp, coef) in &self.terms {
            let mut term = coef.abs();
            for (xi, &e) in x.iter().zip(&exp.0) {
                term = term * pow(&xi.abs(), e);
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        let mut map = self.terms.clone();
        for (exp, coef) in &other.terms {
            match map.remove(exp) {
                Some(old) => {
                    let sum = old + coef.clone();
                    if !sum.is_zero() {
                        map.insert(exp.clone(), sum);
                    }
                }
                None => {
                    map.insert(exp.clone(), coef.clone());
                }
            }
        }
        Ok(Self::from_map(self.nvars, map))
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), -c.clone()))
            .collect();
        Self::from_map(self.nvars, terms)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, k)| (e.clone(), k.clone() * c.clone()))
            .collect();
        Self::from_map(self.nvars, terms)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        let mut map: BTreeMap<Expo, T> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp = Expo(ea.0.iter().zip(&eb.0).map(|(a, b)| a + b).collect());
                let prod = ca.clone() * cb.clone();
                match map.remove(&exp) {
                    Some(old) => {
                        let sum = old + prod;
                        if !sum.is_zero() {
                            map.insert(exp, sum);
                        }
                    }
                    None => {
                        map.insert(exp, prod);
                    }
                }
            }
        }
        Ok(Self::from_map(self.nvars, map))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.nvars, T::one());
        for _ in 0..e {
            acc = acc.mul(self).expect("same variable count");
        }
        acc
    }

    /// Single partial derivative d/dx_i.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.nvars,
            });
        }
        let mut map = BTreeMap::new();
        for (exp, coef) in &self.terms {
            let e = exp.0[i];
            if e == 0 {
                continue;
            }
            let mut new_exp = exp.0.clone();
            new_exp[i] -= 1;
            map.insert(Expo(new_exp), coef.clone() * T::from_int(e as i64));
        }
        Ok(Self::from_map(self.nvars, map))
    }

    /// The mixed partial d^alpha; the zero polynomial when |alpha| exceeds the
    /// degree.
    pub fn partial_derivative(&self, alpha: &[u32]) -> Result<Self> {
        if alpha.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: alpha.len(),
            });
        }
        let mut out = self.clone();
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                if out.is_zero() {
                    return Ok(out);
                }
                out = out.partial(i)?;
            }
        }
        Ok(out)
    }

    /// D_a f = sum_i a_i d_i f. Drops the degree by exactly one unless the
    /// result vanishes.
    pub fn directional_derivative(&self, a: &[T]) -> Result<Self> {
        if a.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: a.len(),
            });
        }
        let mut acc = Self::zero(self.nvars);
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            acc = acc.add(&self.partial(i)?.scale(ai))?;
        }
        Ok(acc)
    }

    /// The Hessian (d_i d_j f) evaluated at `a`. Zero matrix when deg f < 2.
    pub fn hessian_at(&self, a: &[T]) -> Result<SymMatrix<T>> {
        if a.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: a.len(),
            });
        }
        if self.degree < 2 {
            return Ok(SymMatrix::zeros(self.nvars));
        }
        let partials: Vec<Self> = (0..self.nvars)
            .map(|i| self.partial(i))
            .collect::<Result<_>>()?;
        let mut entries = vec![vec![T::zero(); self.nvars]; self.nvars];
        #[allow(clippy::needless_range_loop)]
        for (i, pi) in partials.iter().enumerate() {
            for j in i..self.nvars {
                let v = pi.partial(j)?.evaluate(a)?;
                entries[i][j] = v.clone();
                entries[j][i] = v;
            }
        }
        SymMatrix::from_rows(entries)
    }

    /// f(Mx): substitutes x_i = sum_j M[i][j] y_j and expands exactly. `M`
    /// must have `nvars` rows; the result has `M.ncols()` variables.
    pub fn compose_linear(&self, m: &Mat<T>) -> Result<Self> {
        if m.nrows() != self.nvars {
            return Err(Error::ShapeMismatch(format!(
                "compose_linear: matrix has {} rows, polynomial has {} variables",
                m.nrows(),
                self.nvars
            )));
        }
        let new_vars = m.ncols();
        let forms: Vec<Self> = (0..self.nvars)
            .map(|i| Self::linear_form(m.row(i)))
            .collect();
        let mut acc = Self::zero(new_vars);
        for (exp, coef) in &self.terms {
            let mut term = Self::constant(new_vars, coef.clone());
            for (i, &e) in exp.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&forms[i].pow(e))?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Coefficients of the univariate restriction t -> f(x + t e), ascending
    /// in t, length deg f + 1. The leading entry equals f(e).
    pub fn restrict_line(&self, x: &[T], e: &[T]) -> Result<Vec<T>> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: x.len(),
            });
        }
        if e.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: e.len(),
            });
        }
        let mut out = vec![T::zero(); self.degree + 1];
        for (exp, coef) in &self.terms {
            // Convolve the binomial expansions (x_k + t e_k)^{e_k} across
            // variables.
            let mut poly_t = vec![coef.clone()];
            for (k, &ek) in exp.0.iter().enumerate() {
                if ek == 0 {
                    continue;
                }
                let factor = binomial_powers(&x[k], &e[k], ek);
                poly_t = convolve(&poly_t, &factor);
            }
            for (i, c) in poly_t.into_iter().enumerate() {
                out[i] = out[i].clone() + c;
            }
        }
        Ok(out)
    }

    pub fn to_f64(&self) -> MultiPoly<f64> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.0.clone(), c.to_f64()))
            .collect::<Vec<_>>();
        MultiPoly::from_terms(self.nvars, terms).expect("exponents already validated")
    }

    /// Largest absolute coefficient, as f64. Zero for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.abs().to_f64())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| json!({ "exp": e.0, "coef": c.coef_to_json() }))
            .collect();
        json!({ "nvars": self.nvars, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let nvars = v
            .get("nvars")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InvalidInput("polynomial JSON needs \"nvars\"".into()))?
            as usize;
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("polynomial JSON needs a \"terms\" array".into()))?;
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            let exp = t
                .get("exp")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidInput("term needs an \"exp\" array".into()))?
                .iter()
                .map(|e| {
                    e.as_u64().map(|e| e as u32).ok_or_else(|| {
                        Error::InvalidInput("exponents must be nonnegative integers".into())
                    })
                })
                .collect::<Result<Vec<u32>>>()?;
            let coef = t
                .get("coef")
                .ok_or_else(|| Error::InvalidInput("term needs a \"coef\"".into()))?;
            parsed.push((exp, T::coef_from_json(coef)?));
        }
        Self::from_terms(nvars, parsed)
    }
}

impl<T: Coeff> fmt::Display for MultiPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, coef) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({coef})")?;
            for (i, &e) in exp.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

fn pow<T: Coeff>(x: &T, e: u32) -> T {
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc * x.clone();
    }
    acc
}

/// Coefficients of (x + t e)^n in t: C(n,j) x^{n-j} e^j.
fn binomial_powers<T: Coeff>(x: &T, e: &T, n: u32) -> Vec<T> {
    (0..=n)
        .map(|j| {
            let b = T::from_int(binomial(n, j) as i64);
            b * pow(x, n - j) * pow(e, j)
        })
        .collect()
}

fn convolve<T: Coeff>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + ai.clone() * bj.clone();
        }
    }
    out
}

pub(crate) fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}
