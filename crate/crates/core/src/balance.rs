//! Column balancing: turning a nonnegative matrix with constant row sums
//! `r` into a nonnegative generalized doubly stochastic matrix with
//! spectrum `(r+ε; λ_2, …, λ_n)`.
//!
//! The balanced matrix adds a constant offset per column,
//! `b_ij = a_ij + (r + ε - x_j)/n`, where `x_j` is the `j`th column sum.
//! Offsets written against the column `m` of largest sum are
//! `y_j = y_m + (x_m - x_j)/n`, and the Perron shift is
//! `ε = n·y_m + x_m - r`. The least admissible shift is
//! `k_A = max_j (x_j - n·a_j) - r`, with `a_j` the column minimum, and it
//! never drops below `-r`.

use std::fmt::Write as _;

use num_traits::Signed;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::{FloatMatrix, RatMatrix};
use crate::rational::{self, Rational};
use crate::report;
use crate::stochastic::{column_stats, constant_row_sum};

/// Common row sum, or a precondition error.
pub fn required_row_sum(a: &RatMatrix) -> Result<Rational> {
    a.order()?;
    constant_row_sum(a).ok_or_else(|| Error::Precondition("row sums are not constant".into()))
}

fn required_nonneg_row_sum(a: &RatMatrix) -> Result<Rational> {
    let r = required_row_sum(a)?;
    if !a.is_nonnegative() {
        return Err(Error::Precondition("matrix has negative entries".into()));
    }
    Ok(r)
}

/// Index of the largest value, ties to the smallest index.
pub fn argmax(values: &[Rational]) -> usize {
    values
        .iter()
        .enumerate()
        .fold(0, |best, (k, v)| if *v > values[best] { k } else { best })
}

/// Column offsets `y_j` solving the column-balancing system with `y_m`
/// fixed, where `m` is the column of largest sum.
pub fn balance_offsets(a: &RatMatrix, y_m: &Rational) -> Result<Vec<Rational>> {
    required_row_sum(a)?;
    let n = rational::from_usize(a.order()?);
    let x = a.col_sums();
    let x_m = x[argmax(&x)].clone();
    Ok(x.iter().map(|x_j| y_m + (&x_m - x_j) / &n).collect())
}

pub fn epsilon_from_y(y_m: &Rational, x_m: &Rational, r: &Rational, n: usize) -> Rational {
    rational::from_usize(n) * y_m + x_m - r
}

pub fn y_from_epsilon(eps: &Rational, x_m: &Rational, r: &Rational, n: usize) -> Rational {
    (eps - x_m + r) / rational::from_usize(n)
}

/// Per-column excess `x_j - n·a_j`.
fn column_excess(a: &RatMatrix) -> Result<Vec<Rational>> {
    let n = rational::from_usize(a.order()?);
    let stats = column_stats(a)?;
    Ok(stats
        .sums
        .iter()
        .zip(&stats.minima)
        .map(|(x, m)| x - &n * m)
        .collect())
}

/// Least Perron shift `k_A` for which the balanced matrix is nonnegative.
pub fn epsilon_threshold(a: &RatMatrix) -> Result<Rational> {
    let r = required_nonneg_row_sum(a)?;
    let excess = column_excess(a)?;
    Ok(excess[argmax(&excess)].clone() - r)
}

/// The same threshold expressed in the offset `y_m` of the largest column.
pub fn y_threshold(a: &RatMatrix) -> Result<Rational> {
    let r = required_nonneg_row_sum(a)?;
    let k = epsilon_threshold(a)?;
    let x = a.col_sums();
    Ok(y_from_epsilon(&k, &x[argmax(&x)], &r, a.order()?))
}

fn balanced_unchecked(a: &RatMatrix, r: &Rational, eps: &Rational) -> Result<RatMatrix> {
    let n = rational::from_usize(a.order()?);
    let offsets: Vec<Rational> = a.col_sums().iter().map(|x| (r + eps - x) / &n).collect();
    Ok(RatMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) + &offsets[j]))
}

/// Balanced matrix with Perron value `r + ε`: nonnegative, every row and
/// column summing to `r + ε`, and cospectral with `A` off the Perron root.
pub fn balance(a: &RatMatrix, eps: &Rational) -> Result<RatMatrix> {
    let r = required_nonneg_row_sum(a)?;
    let threshold = epsilon_threshold(a)?;
    if *eps < threshold {
        let excess = column_excess(a)?;
        let column = excess
            .iter()
            .position(|e| e - &r > *eps)
            .unwrap_or_else(|| argmax(&excess));
        return Err(Error::Infeasible { column, threshold });
    }
    balanced_unchecked(a, &r, eps)
}

/// Unchecked family member: same formula without the nonnegativity guard.
/// Entries may be negative below the threshold.
pub fn balance_family(a: &RatMatrix, eps: &Rational) -> Result<RatMatrix> {
    let r = required_row_sum(a)?;
    balanced_unchecked(a, &r, eps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceReport {
    pub r: Rational,
    pub x: Vec<Rational>,
    pub a: Vec<Rational>,
    /// Column of largest sum (0-based; ties to the smallest index).
    pub m: usize,
    pub y_threshold: Rational,
    pub epsilon_threshold: Rational,
    pub b_min: RatMatrix,
    /// Columns attaining the threshold (0-based).
    pub tight_columns: Vec<usize>,
}

impl BalanceReport {
    pub fn to_json(&self) -> Value {
        json!({
            "r": report::rational_json(&self.r),
            "x": report::rationals_json(&self.x),
            "a": report::rationals_json(&self.a),
            "m": self.m + 1,
            "y_threshold": report::rational_json(&self.y_threshold),
            "epsilon_threshold": report::rational_json(&self.epsilon_threshold),
            "B_min": report::matrix_json(&self.b_min),
            "tight_columns": self.tight_columns.iter().map(|j| j + 1).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let tight: Vec<String> = self.tight_columns.iter().map(|j| (j + 1).to_string()).collect();
        let _ = writeln!(out, "r={}", rational::format(&self.r));
        let _ = writeln!(out, "x={}", report::rationals_text(&self.x));
        let _ = writeln!(out, "a={}", report::rationals_text(&self.a));
        let _ = writeln!(out, "m={}", self.m + 1);
        let _ = writeln!(out, "y_threshold={}", rational::format(&self.y_threshold));
        let _ = writeln!(out, "epsilon_threshold={}", rational::format(&self.epsilon_threshold));
        let _ = writeln!(out, "B_min={}", report::matrix_text(&self.b_min));
        let _ = writeln!(out, "tight_columns={}", tight.join(" "));
        out
    }
}

/// Everything about the least balanced matrix in one report.
pub fn balance_minimal(a: &RatMatrix) -> Result<BalanceReport> {
    let r = required_nonneg_row_sum(a)?;
    let stats = column_stats(a)?;
    let excess = column_excess(a)?;
    let best = excess[argmax(&excess)].clone();
    let eps = &best - &r;
    let m = argmax(&stats.sums);
    let b_min = balanced_unchecked(a, &r, &eps)?;
    if !b_min.is_nonnegative() {
        return Err(Error::Internal("balanced matrix at the threshold has a negative entry".into()));
    }
    Ok(BalanceReport {
        y_threshold: y_from_epsilon(&eps, &stats.sums[m], &r, a.order()?),
        tight_columns: (0..excess.len()).filter(|&j| excess[j] == best).collect(),
        epsilon_threshold: eps,
        m,
        r,
        x: stats.sums,
        a: stats.minima,
        b_min,
    })
}

/// Balanced matrix whose row and column sums are all `n·r`; always
/// feasible because every column sum is at most `n·r`.
pub fn balance_to_order_multiple(a: &RatMatrix) -> Result<RatMatrix> {
    let r = required_nonneg_row_sum(a)?;
    let n = rational::from_usize(a.order()?);
    let eps = &n * &r - &r;
    let b = balance(a, &eps)?;
    if !b.is_nonnegative() {
        return Err(Error::Internal("n·r balance produced a negative entry".into()));
    }
    Ok(b)
}

pub const PERRON_TOLERANCE: f64 = 1e-12;
pub const PERRON_MAX_ITERATIONS: usize = 10_000;
pub const PERRON_MIN_COMPONENT: f64 = 1e-10;

/// Perron root and Perron vector (max component 1) by power iteration on
/// `A + I`, which shares eigenvectors with `A` and avoids oscillation on
/// periodic matrices.
pub fn perron_pair(a: &FloatMatrix) -> Result<(f64, Vec<f64>)> {
    let n = a.order()?;
    a.ensure_finite()?;
    if !a.is_nonnegative() {
        return Err(Error::Precondition("matrix has negative entries".into()));
    }
    let shifted = a.add(&FloatMatrix::identity(n))?;
    let mut v = vec![1.0; n];
    for _ in 0..PERRON_MAX_ITERATIONS {
        let mut w = shifted.mul_vec(&v)?;
        let top = w.iter().copied().fold(0.0, f64::max);
        if top <= 0.0 || !top.is_finite() {
            return Err(Error::Normalization("power iteration collapsed".into()));
        }
        w.iter_mut().for_each(|c| *c /= top);
        let change = w.iter().zip(&v).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        v = w;
        if change < PERRON_TOLERANCE {
            if let Some(k) = v.iter().position(|c| *c < PERRON_MIN_COMPONENT) {
                return Err(Error::Normalization(format!(
                    "Perron vector component {} is {:e}; matrix looks reducible",
                    k + 1,
                    v[k]
                )));
            }
            let av = a.mul_vec(&v)?;
            let root = av.iter().sum::<f64>() / v.iter().sum::<f64>();
            return Ok((root, v));
        }
    }
    Err(Error::Normalization(format!(
        "power iteration did not converge in {PERRON_MAX_ITERATIONS} iterations"
    )))
}

/// Diagonal similarity `D⁻¹AD` with `D = diag(Perron vector)`: a
/// nonnegative matrix with every row summing to the Perron root `r`.
pub fn normalize_to_stochastic(a: &FloatMatrix) -> Result<(FloatMatrix, f64)> {
    let (root, v) = perron_pair(a)?;
    let n = a.rows();
    let b = FloatMatrix::from_fn(n, n, |i, j| a.get(i, j) * v[j] / v[i]);
    Ok((b, root))
}

/// Exact check of `b ≥ 0` for every entry, reporting the first negative.
pub fn first_negative(b: &RatMatrix) -> Option<(usize, usize)> {
    (0..b.rows())
        .flat_map(|i| (0..b.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| b.get(i, j).is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rat_matrix;
    use crate::poly::{charpoly, charpoly_f64, coeff_residual, Poly};
    use crate::rational::{frac, int};
    use crate::stochastic::{classify, constant_j, StochTag};
    use num_traits::Zero;

    fn skewed_stochastic() -> RatMatrix {
        rat_matrix(&[&[(1, 3), (1, 3), (1, 3)], &[(1, 4), (1, 4), (1, 2)], &[(1, 6), (1, 6), (2, 3)]])
    }

    fn skewed_balanced() -> RatMatrix {
        rat_matrix(&[&[(1, 4), (1, 4), (0, 1)], &[(1, 6), (1, 6), (1, 6)], &[(1, 12), (1, 12), (1, 3)]])
    }

    fn first_column(n: usize, r: &Rational) -> RatMatrix {
        RatMatrix::from_fn(n, n, |_, j| if j == 0 { r.clone() } else { int(0) })
    }

    /// Direct exact solve of the column-balancing system with `y_m` fixed:
    /// unknowns `y_j` (j ≠ m) satisfy `n y_j + x_j = r + Σ y` .
    fn solve_offsets_directly(a: &RatMatrix, y_m: &Rational) -> Vec<Rational> {
        let n = a.rows();
        let x = a.col_sums();
        let r = constant_row_sum(a).unwrap();
        let m = argmax(&x);
        let free: Vec<usize> = (0..n).filter(|&j| j != m).collect();
        // rows j ≠ m: (n-1) y_j - Σ_{k≠j,m} y_k = r + y_m - x_j
        let k = free.len();
        let mut aug: Vec<Vec<Rational>> = free
            .iter()
            .map(|&j| {
                let mut row: Vec<Rational> = free
                    .iter()
                    .map(|&c| if c == j { rational::from_usize(n - 1) } else { int(-1) })
                    .collect();
                row.push(&r + y_m - &x[j]);
                row
            })
            .collect();
        for c in 0..k {
            let p = (c..k).find(|&i| !aug[i][c].is_zero()).unwrap();
            aug.swap(c, p);
            let pivot = aug[c][c].clone();
            for v in aug[c].iter_mut() {
                *v = &*v / &pivot;
            }
            for i in 0..k {
                if i != c {
                    let f = aug[i][c].clone();
                    let prow = aug[c].clone();
                    for (v, pv) in aug[i].iter_mut().zip(prow) {
                        *v -= &f * pv;
                    }
                }
            }
        }
        let mut y = vec![y_m.clone(); n];
        for (row, &j) in aug.iter().zip(&free) {
            y[j] = row[k].clone();
        }
        y
    }

    #[test]
    fn offsets_fixtures() {
        let y = balance_offsets(&skewed_stochastic(), &frac(-1, 3)).unwrap();
        assert_eq!(y, vec![frac(-1, 12), frac(-1, 12), frac(-1, 3)]);
        assert_eq!(y, solve_offsets_directly(&skewed_stochastic(), &frac(-1, 3)));
        let j3 = constant_j(3).unwrap();
        assert_eq!(balance_offsets(&j3, &frac(2, 5)).unwrap(), vec![frac(2, 5); 3]);
        let ds = rat_matrix(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]]);
        assert_eq!(balance_offsets(&ds, &int(0)).unwrap(), vec![int(0); 2]);
    }

    #[test]
    fn offsets_sum_matches_perron_shift() {
        let a = skewed_stochastic();
        let y_m = frac(3, 11);
        let y = balance_offsets(&a, &y_m).unwrap();
        let total = y.iter().fold(int(0), |s, v| s + v);
        assert_eq!(total, epsilon_from_y(&y_m, &frac(3, 2), &int(1), 3));
    }

    #[test]
    fn threshold_fixtures() {
        assert_eq!(epsilon_threshold(&skewed_stochastic()).unwrap(), frac(-1, 2));
        assert_eq!(y_threshold(&skewed_stochastic()).unwrap(), frac(-1, 3));
        for r in [int(1), frac(5, 3)] {
            assert_eq!(epsilon_threshold(&first_column(4, &r)).unwrap(), -r.clone());
        }
        assert_eq!(epsilon_threshold(&constant_j(5).unwrap()).unwrap(), int(-1));
        let neg = rat_matrix(&[&[(2, 1), (-1, 1)], &[(2, 1), (-1, 1)]]);
        assert!(matches!(epsilon_threshold(&neg), Err(Error::Precondition(_))));
        let uneven = rat_matrix(&[&[(1, 1), (0, 1)], &[(1, 1), (1, 1)]]);
        assert!(matches!(epsilon_threshold(&uneven), Err(Error::Precondition(_))));
    }

    #[test]
    fn balance_fixtures() {
        let a = skewed_stochastic();
        assert_eq!(balance(&a, &frac(-1, 2)).unwrap(), skewed_balanced());
        let ds = balance(&a, &int(0)).unwrap();
        assert_eq!(ds, skewed_balanced().add(&constant_j(3).unwrap().scale(&frac(1, 2))).unwrap());
        assert_eq!(classify(&ds).unwrap().tag, StochTag::DoublyStochastic);
        assert_eq!(charpoly(&ds).unwrap(), Poly::from_roots(&[int(1), int(0), frac(1, 4)]));
        let dsa = rat_matrix(&[&[(1, 3), (2, 3)], &[(2, 3), (1, 3)]]);
        assert_eq!(balance(&dsa, &int(0)).unwrap(), dsa);
    }

    #[test]
    fn balance_below_threshold_is_infeasible() {
        let err = balance(&skewed_stochastic(), &frac(-3, 5)).unwrap_err();
        assert_eq!(
            err,
            Error::Infeasible {
                column: 2,
                threshold: frac(-1, 2)
            }
        );
        let below = balance_family(&skewed_stochastic(), &frac(-501, 1000)).unwrap();
        assert_eq!(first_negative(&below), Some((0, 2)));
    }

    #[test]
    fn minimal_report_fixtures() {
        let rep = balance_minimal(&skewed_stochastic()).unwrap();
        assert_eq!(rep.epsilon_threshold, frac(-1, 2));
        assert_eq!(rep.y_threshold, frac(-1, 3));
        assert_eq!(rep.b_min, skewed_balanced());
        assert_eq!(rep.tight_columns, vec![2]);
        assert_eq!(rep.m, 2);
        assert!(rep.b_min.get(0, 2).is_zero());

        let r = int(2);
        let rep = balance_minimal(&first_column(4, &r)).unwrap();
        assert_eq!(rep.epsilon_threshold, int(-2));
        assert_eq!(rep.b_min, RatMatrix::zeros(4, 4));

        let rep = balance_minimal(&constant_j(3).unwrap()).unwrap();
        assert_eq!(rep.epsilon_threshold, int(-1));
        assert_eq!(rep.b_min, RatMatrix::zeros(3, 3));
        assert_eq!(rep.tight_columns, vec![0, 1, 2]);
    }

    #[test]
    fn report_renderings() {
        let rep = balance_minimal(&skewed_stochastic()).unwrap();
        let text = rep.to_text();
        assert!(text.contains("y_threshold=-1/3\n"));
        assert!(text.contains("epsilon_threshold=-1/2\n"));
        assert!(text.contains("B_min=1/4 1/4 0; 1/6 1/6 1/6; 1/12 1/12 1/3\n"));
        let js = rep.to_json();
        assert_eq!(js["epsilon_threshold"], "-1/2");
        assert_eq!(js["tight_columns"][0], 3);
        assert_eq!(js["B_min"][2][2], "1/3");
        assert_eq!(js["x"][2], "3/2");
    }

    #[test]
    fn single_entry_matrix() {
        let a = rat_matrix(&[&[(3, 2)]]);
        assert_eq!(epsilon_threshold(&a).unwrap(), frac(-3, 2));
        assert_eq!(balance(&a, &frac(1, 2)).unwrap(), rat_matrix(&[&[(2, 1)]]));
    }

    #[test]
    fn order_multiple_fixtures() {
        let b = balance_to_order_multiple(&skewed_stochastic()).unwrap();
        assert!(b.row_sums().iter().chain(b.col_sums().iter()).all(|s| *s == int(3)));
        assert_eq!(charpoly(&b).unwrap(), Poly::from_roots(&[int(3), int(0), frac(1, 4)]));
        let n = 4;
        let ones = balance_to_order_multiple(&constant_j(n).unwrap()).unwrap();
        assert!(ones.entries().iter().all(|v| *v == int(1)));
        let b = balance_to_order_multiple(&RatMatrix::identity(n)).unwrap();
        let expected = RatMatrix::from_fn(n, n, |i, j| {
            let off = frac(3, 4);
            if i == j {
                off + int(1)
            } else {
                off
            }
        });
        assert_eq!(b, expected);
    }

    #[test]
    fn normalize_fixtures() {
        let a = skewed_stochastic().to_float();
        let (b, r) = normalize_to_stochastic(&a).unwrap();
        assert!(b.max_abs_diff(&a).unwrap() < 1e-12);
        assert!((r - 1.0).abs() < 1e-12);

        let swap = FloatMatrix::from_rows(vec![vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap();
        let (b, r) = normalize_to_stochastic(&swap).unwrap();
        assert_eq!(b, swap);
        assert!((r - 2.0).abs() < 1e-12);

        let rank_one = FloatMatrix::from_rows(vec![vec![1.0, 2.0], vec![3.0, 6.0]]).unwrap();
        let (b, r) = normalize_to_stochastic(&rank_one).unwrap();
        let expected = FloatMatrix::from_rows(vec![vec![1.0, 6.0], vec![1.0, 6.0]]).unwrap();
        assert!(b.max_abs_diff(&expected).unwrap() < 1e-9);
        assert!((r - 7.0).abs() < 1e-9);
        let before = charpoly_f64(&rank_one).unwrap();
        let after = charpoly_f64(&b).unwrap();
        assert!(coeff_residual(&before, &after) < 1e-9);
    }

    #[test]
    fn normalize_rejects_reducible_and_negative() {
        let reducible = FloatMatrix::from_rows(vec![vec![1.0, 0.0], vec![1.0, 2.0]]).unwrap();
        assert!(matches!(normalize_to_stochastic(&reducible), Err(Error::Normalization(_))));
        let neg = FloatMatrix::from_rows(vec![vec![1.0, -1.0], vec![1.0, 2.0]]).unwrap();
        assert!(matches!(normalize_to_stochastic(&neg), Err(Error::Precondition(_))));
    }
}
