//! Batch evaluation of the exact constructions over many matrices.
//! Output order always matches input order.

use crate::balance::{balance_family, epsilon_threshold, required_row_sum};
use crate::error::Result;
use crate::matrix::RatMatrix;
use crate::nearness::nearest_ds;
use crate::par::{self, Execution};
use crate::poly::{charpoly, Poly};
use crate::rational::Rational;
use crate::stochastic::frobenius_distance;

pub fn charpolys(mats: &[RatMatrix], exec: Execution) -> Vec<Result<Poly>> {
    par::map_slice(exec, mats, charpoly)
}

pub fn epsilon_thresholds(mats: &[RatMatrix], exec: Execution) -> Vec<Result<Rational>> {
    par::map_slice(exec, mats, epsilon_threshold)
}

pub fn nearest_projections(mats: &[RatMatrix], exec: Execution) -> Vec<Result<RatMatrix>> {
    par::map_slice(exec, mats, nearest_ds)
}

/// Whether `charpoly(B_ε)·(x - r) = charpoly(A)·(x - (r+ε))` holds for
/// each `(A, ε)` pair.
pub fn balance_identities(cases: &[(RatMatrix, Rational)], exec: Execution) -> Vec<Result<bool>> {
    par::map_slice(exec, cases, |(a, eps)| {
        let r = required_row_sum(a)?;
        let b = balance_family(a, eps)?;
        let lhs = charpoly(&b)?.mul(&Poly::linear(&r));
        let rhs = charpoly(a)?.mul(&Poly::linear(&(&r + eps)));
        Ok(lhs == rhs)
    })
}

/// Index of the first candidate strictly closer to `target` than
/// `reference`, if any.
pub fn first_closer(
    target: &RatMatrix,
    reference: &RatMatrix,
    candidates: &[RatMatrix],
    exec: Execution,
) -> Result<Option<usize>> {
    let best = frobenius_distance(target, reference)?;
    let dists = par::map_slice(exec, candidates, |c| frobenius_distance(target, c));
    for (k, d) in dists.into_iter().enumerate() {
        if d? < best {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
