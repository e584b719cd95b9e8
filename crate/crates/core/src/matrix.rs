//! Dense matrices over a coefficient field, plus the symmetric wrapper used
//! for Hessians, coefficient matrices, and the G(n,k) family.

use nalgebra::DMatrix;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat<T> {
    nrows: usize,
    ncols: usize,
    data: Vec<T>,
}

impl<T: Coeff> Mat<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Mat {
            nrows,
            ncols,
            data: vec![T::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// The all-ones matrix.
    pub fn ones(n: usize) -> Self {
        Mat {
            nrows: n,
            ncols: n,
            data: vec![T::one(); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for r in &rows {
            if r.len() != ncols {
                return Err(Error::ShapeMismatch(format!(
                    "ragged rows: expected {ncols}, got {}",
                    r.len()
                )));
            }
        }
        Ok(Mat {
            nrows,
            ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                data.push(f(i, j));
            }
        }
        Mat { nrows, ncols, data }
    }

    pub fn from_diag(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    /// Rank-one matrix u v^T.
    pub fn outer(u: &[T], v: &[T]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i].clone() * v[j].clone())
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.nrows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map(Coeff::to_f64)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} + {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        Ok(Mat {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut out = Self::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: x.len(),
            });
        }
        Ok((0..self.nrows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    /// Determinant by Gaussian elimination. Pivots are chosen by float
    /// magnitude; the arithmetic itself stays in `T`, so rational inputs give
    /// exact answers.
    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "determinant of {}x{}",
                self.nrows, self.ncols
            )));
        }
        let n = self.nrows;
        let mut a = self.clone();
        let mut det = T::one();
        let mut negate = false;
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&r1, &r2| {
                    a[(r1, col)]
                        .abs()
                        .to_f64()
                        .total_cmp(&a[(r2, col)].abs().to_f64())
                })
                .unwrap();
            if a[(pivot_row, col)].is_zero() {
                return Ok(T::zero());
            }
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                negate = !negate;
            }
            let pivot = a[(col, col)].clone();
            det = det * pivot.clone();
            for r in col + 1..n {
                let factor = a[(r, col)].clone() / pivot.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let delta = factor.clone() * a[(col, c)].clone();
                    a[(r, c)] = a[(r, c)].clone() - delta;
                }
            }
        }
        Ok(if negate { -det } else { det })
    }

    /// Solves A x = b by Gauss-Jordan elimination with partial pivoting.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("solve needs a square matrix".into()));
        }
        let n = self.nrows;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.len(),
            });
        }
        let mut a = self.clone();
        let mut rhs = b.to_vec();
        let scale = self
            .data
            .iter()
            .map(|x| x.abs().to_f64())
            .fold(0.0_f64, f64::max);
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&r1, &r2| {
                    a[(r1, col)]
                        .abs()
                        .to_f64()
                        .total_cmp(&a[(r2, col)].abs().to_f64())
                })
                .unwrap();
            let pivot_ok = if T::EXACT {
                !a[(pivot_row, col)].is_zero()
            } else {
                a[(pivot_row, col)].abs().to_f64() > 1e-13 * scale.max(1.0)
            };
            if !pivot_ok {
                return Err(Error::SingularMatrix);
            }
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                rhs.swap(pivot_row, col);
            }
            let pivot = a[(col, col)].clone();
            for c in col..n {
                a[(col, c)] = a[(col, c)].clone() / pivot.clone();
            }
            rhs[col] = rhs[col].clone() / pivot;
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for c in col..n {
                    let delta = factor.clone() * a[(col, c)].clone();
                    a[(r, c)] = a[(r, c)].clone() - delta;
                }
                let delta = factor * rhs[col].clone();
                rhs[r] = rhs[r].clone() - delta;
            }
        }
        Ok(rhs)
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for c in 0..self.ncols {
            self.data.swap(r1 * self.ncols + c, r2 * self.ncols + c);
        }
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.nrows)
            .map(|i| Value::Array(self.row(i).iter().map(Coeff::coef_to_json).collect()))
            .collect();
        json!({ "rows": rows })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rows = v
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("matrix JSON needs a \"rows\" array".into()))?;
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::InvalidInput("matrix rows must be arrays".into()))?;
            out.push(
                row.iter()
                    .map(T::coef_from_json)
                    .collect::<Result<Vec<T>>>()?,
            );
        }
        Self::from_rows(out)
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.ncols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.ncols + j]
    }
}

/// Symmetric matrix. Entries satisfy `m[(i,j)] == m[(j,i)]` exactly; the
/// constructors enforce it.
#[derive(Clone, PartialEq, Debug)]
pub struct SymMatrix<T> {
    mat: Mat<T>,
}

impl<T: Coeff> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            mat: Mat::zeros(n, n),
        }
    }

    pub fn from_mat(mat: Mat<T>) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSymmetric);
        }
        for i in 0..mat.nrows() {
            for j in i + 1..mat.ncols() {
                if mat[(i, j)] != mat[(j, i)] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(SymMatrix { mat })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::from_mat(Mat::from_rows(rows)?)
    }

    /// Builds from the upper triangle; `f` is called once per `i <= j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut mat = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                mat[(i, j)] = v.clone();
                mat[(j, i)] = v;
            }
        }
        SymMatrix { mat }
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &Mat<T> {
        &self.mat
    }

    pub fn into_mat(self) -> Mat<T> {
        self.mat
    }

    pub fn to_f64(&self) -> SymMatrix<f64> {
        SymMatrix {
            mat: self.mat.to_f64(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        SymMatrix {
            mat: self.mat.scale(c),
        }
    }

    pub fn trace(&self) -> T {
        (0..self.n()).fold(T::zero(), |acc, i| acc + self.mat[(i, i)].clone())
    }

    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        SymMatrix {
            mat: Mat::from_fn(indices.len(), indices.len(), |i, j| {
                self.mat[(indices[i], indices[j])].clone()
            }),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat
            .data
            .iter()
            .map(|x| {
                let v = x.to_f64();
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        let n = self.n();
        DMatrix::from_fn(n, n, |i, j| self.mat[(i, j)].to_f64())
    }

    pub fn to_json(&self) -> Value {
        self.mat.to_json()
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        Self::from_mat(Mat::from_json(v)?)
    }
}

impl<T> std::ops::Index<(usize, usize)> for SymMatrix<T> {
    type Output = T;
    fn index(&self, idx: (usize, usize)) -> &T {
        &self.mat[idx]
    }
}
