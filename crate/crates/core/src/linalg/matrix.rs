//! Dense rational matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no solution")]
    NoSolution,
}

/// A `rows x cols` matrix of exact rationals, stored row-major.
///
/// Matrices with zero rows or columns are legal; they are the maps into and
/// out of the zero space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Result of row reduction.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: RatMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self, MatrixError> {
        let r = rows.len();
        if let Some(bad) = rows.iter().find(|row| row.len() != cols) {
            return Err(MatrixError::DimensionMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        Ok(RatMatrix { rows: r, cols, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix from integer rows. Panics on ragged input; meant for
    /// literals in code and tests.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix literal");
                r.iter().map(|&x| Rational::from_integer(x)).collect()
            })
            .collect();
        Self::from_rows(rows, cols).expect("checked above")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    /// A matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(Rational::is_integer)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(
        &self,
        rhs: &RatMatrix,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<RatMatrix, MatrixError> {
        if self.shape() != rhs.shape() {
            return Err(MatrixError::DimensionMismatch(format!(
                "shapes {:?} and {:?} differ",
                self.shape(),
                rhs.shape()
            )));
        }
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, rhs: &RatMatrix) -> Result<RatMatrix, MatrixError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &RatMatrix) -> Result<RatMatrix, MatrixError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn neg(&self) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, s: &Rational) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// `[self | rhs]`
    pub fn hstack(&self, rhs: &RatMatrix) -> Result<RatMatrix, MatrixError> {
        if self.rows != rhs.rows {
            return Err(MatrixError::DimensionMismatch(format!("hstack of {} and {} rows", self.rows, rhs.rows)));
        }
        Ok(Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - self.cols)].clone()
            }
        }))
    }

    /// `[self ; rhs]`
    pub fn vstack(&self, rhs: &RatMatrix) -> Result<RatMatrix, MatrixError> {
        if self.cols != rhs.cols {
            return Err(MatrixError::DimensionMismatch(format!("vstack of {} and {} columns", self.cols, rhs.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Ok(RatMatrix { rows: self.rows + rhs.rows, cols: self.cols, data })
    }

    pub fn block_diag(&self, rhs: &RatMatrix) -> RatMatrix {
        Self::from_fn(self.rows + rhs.rows, self.cols + rhs.cols, |i, j| match (i < self.rows, j < self.cols) {
            (true, true) => self[(i, j)].clone(),
            (false, false) => rhs[(i - self.rows, j - self.cols)].clone(),
            _ => Rational::zero(),
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> RatMatrix {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> RatMatrix {
        Self::from_fn(rows.len(), self.cols, |i, j| self[(rows[i], j)].clone())
    }

    pub fn remove_row(&self, r: usize) -> RatMatrix {
        let keep: Vec<usize> = (0..self.rows).filter(|&i| i != r).collect();
        self.select_rows(&keep)
    }

    pub fn remove_column(&self, c: usize) -> RatMatrix {
        let keep: Vec<usize> = (0..self.cols).filter(|&j| j != c).collect();
        self.select_columns(&keep)
    }

    /// Reduced row echelon form by Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    m[(r, j)] = &m[(r, j)] * &inv;
                }
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let rj = &m[(r, j)];
                    if !rj.is_zero() {
                        let v = &m[(i, j)] - &(&factor * rj);
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the nullspace as columns of a `cols x (cols - rank)` matrix:
    /// one vector per free column, with a 1 in that column.
    pub fn nullspace_matrix(&self) -> RatMatrix {
        let Rref { matrix: r, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out[(f, k)] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                out[(p, k)] = -&r[(i, f)];
            }
        }
        out
    }

    /// Some `X` with `self * X = b`, free variables set to zero.
    pub fn solve_right(&self, b: &RatMatrix) -> Result<RatMatrix, MatrixError> {
        if self.rows != b.rows {
            return Err(MatrixError::DimensionMismatch(format!("solve_right: {} rows vs {} rows", self.rows, b.rows)));
        }
        let aug = self.hstack(b)?;
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(MatrixError::NoSolution);
        }
        let mut x = Self::zeros(self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = r[(i, self.cols + j)].clone();
            }
        }
        Ok(x)
    }

    /// Exact inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<RatMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        match self.solve_right(&Self::identity(n)) {
            Ok(x) if self.rank() == n => Some(x),
            _ => None,
        }
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, "]")
    }
}

/// JSON form: `{"rows": r, "cols": c, "data": [["p/q", ...], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Rational>>,
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson { rows: self.rows, cols: self.cols, data: (0..self.rows).map(|i| self.row(i).to_vec()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        if j.data.len() != j.rows {
            return Err(serde::de::Error::custom(format!("matrix declares {} rows but has {}", j.rows, j.data.len())));
        }
        RatMatrix::from_rows(j.data, j.cols).map_err(serde::de::Error::custom)
    }
}
