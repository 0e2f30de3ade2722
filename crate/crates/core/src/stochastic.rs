//! The constant projector `J_n`, column statistics, stochasticity
//! classes and the squared Frobenius metric.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::{self, Rational};

/// `n x n` matrix with every entry `1/n`.
pub fn constant_j(n: usize) -> Result<RatMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension("J_n needs n >= 1".into()));
    }
    let v = Rational::new(1.into(), n.into());
    Ok(RatMatrix::from_fn(n, n, |_, _| v.clone()))
}

/// Column sums `x_j` and column minima `a_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnStats {
    pub sums: Vec<Rational>,
    pub minima: Vec<Rational>,
}

pub fn column_stats(a: &RatMatrix) -> Result<ColumnStats> {
    let n = a.order()?;
    let minima = (0..n)
        .map(|j| {
            (1..n).fold(a.get(0, j).clone(), |m, i| {
                let v = a.get(i, j);
                if *v < m {
                    v.clone()
                } else {
                    m
                }
            })
        })
        .collect();
    Ok(ColumnStats {
        sums: a.col_sums(),
        minima,
    })
}

fn all_equal(values: &[Rational]) -> Option<Rational> {
    let first = values.first()?;
    values.iter().all(|v| v == first).then(|| first.clone())
}

/// Common row sum, if every row sums to the same value.
pub fn constant_row_sum(a: &RatMatrix) -> Option<Rational> {
    all_equal(&a.row_sums())
}

pub fn constant_col_sum(a: &RatMatrix) -> Option<Rational> {
    all_equal(&a.col_sums())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StochTag {
    NonnegativeOnly,
    RGenStochastic,
    RGenDoublyStochastic,
    Stochastic,
    DoublyStochastic,
    General,
}

impl StochTag {
    pub fn name(self) -> &'static str {
        match self {
            StochTag::NonnegativeOnly => "NONNEGATIVE_ONLY",
            StochTag::RGenStochastic => "R_GEN_STOCHASTIC",
            StochTag::RGenDoublyStochastic => "R_GEN_DOUBLY_STOCHASTIC",
            StochTag::Stochastic => "STOCHASTIC",
            StochTag::DoublyStochastic => "DOUBLY_STOCHASTIC",
            StochTag::General => "GENERAL",
        }
    }

    /// Constant row sums (with `r >= 0`) are implied by the tag.
    pub fn has_row_sum(self) -> bool {
        !matches!(self, StochTag::NonnegativeOnly | StochTag::General)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StochClass {
    pub tag: StochTag,
    /// Common row sum for the tags that carry one.
    pub r: Option<Rational>,
}

impl fmt::Display for StochClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.r {
            Some(r) => write!(f, "{} r={}", self.tag.name(), rational::format(r)),
            None => f.write_str(self.tag.name()),
        }
    }
}

/// Most specific class of a square matrix. `r`-generalized classes need a
/// nonnegative common sum; nonnegativity of entries is not required for them.
pub fn classify(a: &RatMatrix) -> Result<StochClass> {
    a.order()?;
    let nonneg = a.is_nonnegative();
    let rows = constant_row_sum(a).filter(|r| !r.is_negative());
    let doubly = rows
        .as_ref()
        .is_some_and(|r| constant_col_sum(a).as_ref() == Some(r));

    let tag = match &rows {
        None if nonneg => StochTag::NonnegativeOnly,
        None => StochTag::General,
        Some(r) if nonneg && r.is_one() => {
            if doubly {
                StochTag::DoublyStochastic
            } else {
                StochTag::Stochastic
            }
        }
        Some(_) if doubly => StochTag::RGenDoublyStochastic,
        Some(_) => StochTag::RGenStochastic,
    };
    Ok(StochClass { tag, r: rows })
}

/// Squared Frobenius distance `sum (a_ij - b_ij)^2`, kept exact.
pub fn frobenius_distance(a: &RatMatrix, b: &RatMatrix) -> Result<Rational> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "frobenius: {}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(a.entries()
        .iter()
        .zip(b.entries())
        .fold(Rational::zero(), |acc, (x, y)| {
            let d = x - y;
            acc + &d * &d
        }))
}

/// Frobenius inner product `sum a_ij b_ij`.
pub fn frobenius_inner(a: &RatMatrix, b: &RatMatrix) -> Result<Rational> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch("frobenius inner product".into()));
    }
    Ok(a.entries()
        .iter()
        .zip(b.entries())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y))
}
