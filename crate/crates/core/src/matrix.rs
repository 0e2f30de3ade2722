//! Dense row-major matrices over exact rationals or `f64`, plus the
//! canonical whitespace-separated text format.

use std::fmt;
use std::ops::Neg;

use num_traits::{Num, Zero};

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::rational::{self, Rational};

/// Row count from which [`Matrix::mul`] splits rows across threads.
const PARALLEL_MUL_ROWS: usize = 16;

pub trait Scalar: Num + Clone + Neg<Output = Self> + PartialEq + fmt::Debug + Send + Sync {}

impl<T> Scalar for T where T: Num + Clone + Neg<Output = T> + PartialEq + fmt::Debug + Send + Sync {}

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RatMatrix = Matrix<Rational>;
pub type FloatMatrix = Matrix<f64>;

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimension(format!("{rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidDimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::InvalidDimension("ragged rows".into()));
        }
        Self::new(n_rows, n_cols, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(values: &[T]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i].clone() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Order of a square matrix.
    pub fn order(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::InvalidDimension(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols).map(<[T]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "add")?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "sub")?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    /// Adds `s` to every entry.
    pub fn offset(&self, s: &T) -> Self {
        self.map(|v| v.clone() + s.clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let exec = if self.rows >= PARALLEL_MUL_ROWS {
            Execution::default()
        } else {
            Execution::Sequential
        };
        self.mul_with(other, exec)
    }

    pub fn mul_with(&self, other: &Self, exec: Execution) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let rows = par::map_range(exec, self.rows, |i| {
            let lhs = self.row(i);
            (0..other.cols)
                .map(|j| {
                    lhs.iter()
                        .enumerate()
                        .fold(T::zero(), |acc, (k, a)| acc + a.clone() * other.get(k, j).clone())
                })
                .collect::<Vec<T>>()
        });
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "mul_vec: {} columns vs vector of length {}",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn row_sums(&self) -> Vec<T> {
        self.data
            .chunks(self.cols)
            .map(|r| r.iter().cloned().fold(T::zero(), |a, b| a + b))
            .collect()
    }

    pub fn col_sums(&self) -> Vec<T> {
        (0..self.cols)
            .map(|j| (0..self.rows).fold(T::zero(), |a, i| a + self.get(i, j).clone()))
            .collect()
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let rows = self.rows + other.rows;
        let cols = self.cols + other.cols;
        Self::from_fn(rows, cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                T::zero()
            }
        })
    }

    /// `[1] ⊕ self`.
    pub fn bordered_one(&self) -> Self {
        Self::identity(1).direct_sum(self)
    }

    /// Rows and columns `from..` of a square-ish matrix.
    pub fn trailing_block(&self, from: usize) -> Result<Self> {
        if from >= self.rows || from >= self.cols {
            return Err(Error::InvalidDimension(format!(
                "block from {from} in a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(Self::from_fn(self.rows - from, self.cols - from, |i, j| {
            self.get(i + from, j + from).clone()
        }))
    }
}

impl<T: Scalar + PartialOrd> Matrix<T> {
    pub fn min_entry(&self) -> T {
        self.data
            .iter()
            .skip(1)
            .fold(self.data[0].clone(), |m, v| if *v < m { v.clone() } else { m })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|v| *v >= T::zero())
    }
}

impl RatMatrix {
    pub fn to_float(&self) -> FloatMatrix {
        self.map(rational::to_f64)
    }
}

impl FloatMatrix {
    /// Exact rational image of every entry; fails on non-finite entries.
    pub fn to_exact(&self) -> Result<RatMatrix> {
        let data = self
            .data
            .iter()
            .map(|v| rational::from_f64(*v).ok_or_else(|| Error::Precondition("non-finite entry".into())))
            .collect::<Result<Vec<_>>>()?;
        RatMatrix::new(self.rows, self.cols, data)
    }

    pub fn ensure_finite(&self) -> Result<()> {
        if self.data.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::Precondition("matrix has non-finite entries".into()))
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_shape(other, "compare")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

fn split_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(k, line)| {
        let content = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        (!tokens.is_empty()).then_some((k + 1, tokens))
    })
}

fn parse_grid<T: Scalar>(text: &str, entry: impl Fn(&str, usize) -> Result<T>) -> Result<Matrix<T>> {
    let mut rows: Vec<Vec<T>> = Vec::new();
    for (line, tokens) in split_lines(text) {
        let row = tokens
            .iter()
            .map(|t| entry(t, line))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::parse(
                    line,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::parse(0, "no matrix rows found"));
    }
    Matrix::from_rows(rows)
}

/// Parses the canonical matrix text format into exact rationals.
pub fn parse_matrix(text: &str) -> Result<RatMatrix> {
    parse_grid(text, |t, line| rational::parse_token(t, line).map(|(v, _)| v))
}

/// Same grammar as [`parse_matrix`]; decimals are rounded once by the
/// standard float parser, fractions via their exact value.
pub fn parse_float_matrix(text: &str) -> Result<FloatMatrix> {
    parse_grid(text, |t, line| {
        let (value, notation) = rational::parse_token(t, line)?;
        let v = match notation {
            rational::Notation::Fraction => rational::to_f64(&value),
            _ => t
                .parse::<f64>()
                .map_err(|e| Error::parse(line, e.to_string()))?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::parse(line, format!("`{t}` overflows a float")))
        }
    })
}

pub fn format_matrix(m: &RatMatrix) -> String {
    format_grid(m, rational::format)
}

/// Shortest round-trip decimal form, never with an exponent, so the output
/// re-parses under the canonical grammar to the identical float.
pub fn format_float(v: f64) -> String {
    let s = format!("{v}");
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

pub fn format_float_matrix(m: &FloatMatrix) -> String {
    format_grid(m, |v| format_float(*v))
}

fn format_grid<T>(m: &Matrix<T>, f: impl Fn(&T) -> String) -> String {
    let mut out = String::new();
    for row in m.data.chunks(m.cols) {
        let line: Vec<String> = row.iter().map(&f).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_matrix(self))
    }
}

impl fmt::Display for FloatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_float_matrix(self))
    }
}

/// Builds a rational matrix from `(num, den)` pairs; handy for fixtures.
pub fn rat_matrix(rows: &[&[(i64, i64)]]) -> RatMatrix {
    RatMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&(p, q)| rational::frac(p, q)).collect())
            .collect(),
    )
    .expect("well-formed fixture")
}

pub fn is_zero_matrix<T: Scalar>(m: &Matrix<T>) -> bool {
    m.data.iter().all(Zero::is_zero)
}

pub fn is_identity<T: Scalar>(m: &Matrix<T>) -> bool {
    m.is_square()
        && (0..m.rows).all(|i| (0..m.cols).all(|j| (i == j) == m.get(i, j).is_one()))
}
