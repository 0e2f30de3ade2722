//! Frobenius-nearest projection onto the affine set of matrices whose row
//! and column sums are all 1, and the column-slack condition under which a
//! stochastic matrix is cospectral to its projection, which is then doubly
//! stochastic.

use std::fmt::Write as _;

use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::{self, Rational};
use crate::report;
use crate::stochastic::{classify, column_stats, frobenius_distance, StochTag};

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSlack {
    /// 0-based column index.
    pub j: usize,
    pub x_j: Rational,
    pub a_j: Rational,
    /// `1 + n·a_j - x_j`.
    pub slack: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSlackReport {
    pub holds: bool,
    pub per_column: Vec<ColumnSlack>,
    pub first_violation: Option<usize>,
}

impl ColumnSlackReport {
    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds,
            "per_column": self.per_column.iter().map(|c| json!({
                "j": c.j + 1,
                "x_j": report::rational_json(&c.x_j),
                "a_j": report::rational_json(&c.a_j),
                "slack": report::rational_json(&c.slack),
            })).collect::<Vec<_>>(),
            "first_violation": self.first_violation.map(|j| j + 1),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "holds={}", self.holds);
        for c in &self.per_column {
            let _ = writeln!(
                out,
                "column {}: x={} a={} slack={}",
                c.j + 1,
                rational::format(&c.x_j),
                rational::format(&c.a_j),
                rational::format(&c.slack)
            );
        }
        match self.first_violation {
            Some(j) => {
                let _ = writeln!(out, "first_violation={}", j + 1);
            }
            None => out.push_str("first_violation=none\n"),
        }
        out
    }
}

fn require_stochastic(a: &RatMatrix) -> Result<()> {
    match classify(a)?.tag {
        StochTag::Stochastic | StochTag::DoublyStochastic => Ok(()),
        other => Err(Error::Precondition(format!(
            "expected a stochastic matrix, got {}",
            other.name()
        ))),
    }
}

/// Evaluates `x_j ≤ 1 + n·a_j` for every column of a stochastic matrix.
pub fn column_slack_condition(a: &RatMatrix) -> Result<ColumnSlackReport> {
    require_stochastic(a)?;
    let n = rational::from_usize(a.order()?);
    let stats = column_stats(a)?;
    let per_column: Vec<ColumnSlack> = stats
        .sums
        .into_iter()
        .zip(stats.minima)
        .enumerate()
        .map(|(j, (x_j, a_j))| ColumnSlack {
            j,
            slack: Rational::one() + &n * &a_j - &x_j,
            x_j,
            a_j,
        })
        .collect();
    let first_violation = per_column.iter().position(|c| c.slack.is_negative());
    Ok(ColumnSlackReport {
        holds: first_violation.is_none(),
        per_column,
        first_violation,
    })
}

/// Doubly stochastic matrix cospectral to the stochastic `A`:
/// `b_ij = a_ij + (1 - x_j)/n`, i.e. `A - J_nA + J_n`. Refuses when the
/// column-slack condition fails.
pub fn cospectral_ds(a: &RatMatrix) -> Result<RatMatrix> {
    let report = column_slack_condition(a)?;
    if !report.holds {
        return Err(Error::SlackConditionFails(Box::new(report)));
    }
    let n = rational::from_usize(a.order()?);
    let offsets: Vec<Rational> = report
        .per_column
        .iter()
        .map(|c| (Rational::one() - &c.x_j) / &n)
        .collect();
    Ok(RatMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) + &offsets[j]))
}

/// `(I - J)A(I - J) + J`, the unique closest matrix to `A` in Frobenius
/// norm among matrices with all row and column sums equal to 1. Computed
/// as a double centering: `a_ij - ā_i· - ā_·j + ā + 1/n`.
pub fn nearest_ds(a: &RatMatrix) -> Result<RatMatrix> {
    let n = a.order()?;
    let nr = rational::from_usize(n);
    let row_means: Vec<Rational> = a.row_sums().into_iter().map(|s| s / &nr).collect();
    let col_means: Vec<Rational> = a.col_sums().into_iter().map(|s| s / &nr).collect();
    let grand = row_means.iter().fold(Rational::from_integer(0.into()), |s, v| s + v) / &nr;
    let base = grand + nr.recip();
    Ok(RatMatrix::from_fn(n, n, |i, j| {
        a.get(i, j) - &row_means[i] - &col_means[j] + &base
    }))
}

/// Squared Frobenius gap between `A` and its projection.
pub fn nearest_ds_distance(a: &RatMatrix) -> Result<Rational> {
    frobenius_distance(a, &nearest_ds(a)?)
}
