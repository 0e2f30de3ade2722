//! Exact Gaussian elimination: reduced row echelon form, nullspaces,
//! inverses, and the unit-eigenspace orthogonality test.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::poly::charpoly;
use crate::rational::Rational;

/// Reduced row echelon form and its pivot columns. The first nonzero
/// entry in each column is taken as pivot.
pub fn rref(a: &RatMatrix) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut rows = a.to_rows();
    let (m, n) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (rows, pivots)
}

pub fn rank(a: &RatMatrix) -> usize {
    rref(a).1.len()
}

/// Basis of `{v : A v = 0}`, one vector per free column (free entry 1).
pub fn nullspace(a: &RatMatrix) -> Vec<Vec<Rational>> {
    let (rows, pivots) = rref(a);
    let n = a.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rows[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn inverse(a: &RatMatrix) -> Result<RatMatrix> {
    let n = a.order()?;
    let aug = RatMatrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            a.get(i, j).clone()
        } else if j - n == i {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    let (rows, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Precondition("matrix is singular".into()));
    }
    Ok(RatMatrix::from_fn(n, n, |i, j| rows[i][n + j].clone()))
}

pub fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

/// A list of basis vectors.
pub type Basis = Vec<Vec<Rational>>;

/// Bases of the right and left eigenspaces of `A` for eigenvalue 1.
pub fn unit_eigenspaces(a: &RatMatrix) -> Result<(Basis, Basis)> {
    let n = a.order()?;
    if !charpoly(a)?.eval(&Rational::one()).is_zero() {
        return Err(Error::Precondition("1 is not an eigenvalue".into()));
    }
    let id = RatMatrix::identity(n);
    let right = nullspace(&a.sub(&id)?);
    let left = nullspace(&a.transpose().sub(&id)?);
    Ok((right, left))
}

/// Whether the left and right eigenspaces of `A` for eigenvalue 1 fail to
/// be orthogonal, which is exactly when `A` is similar to a matrix with all
/// row and column sums 1. Requires 1 to be an eigenvalue.
pub fn unit_eigenspaces_nonorthogonal(a: &RatMatrix) -> Result<bool> {
    let (right, left) = unit_eigenspaces(a)?;
    Ok(left
        .iter()
        .any(|l| right.iter().any(|r| !dot(l, r).is_zero())))
}
