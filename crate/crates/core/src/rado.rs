//! Rank-`r` eigenvalue replacement `A ↦ A + XC` and its rank-one
//! specialization, the Perron shift `A ↦ A + εJ_n`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::poly::{charpoly, Poly};
use crate::rational::{self, Rational};
use crate::stochastic::{constant_j, constant_row_sum};

/// Eigenvector block `X` (n×r), coefficient block `C` (r×n) and the
/// eigenvalues attached to the columns of `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadoUpdate {
    x: RatMatrix,
    c: RatMatrix,
    lambda: Vec<Rational>,
}

impl RadoUpdate {
    /// Validates shapes and `A X_k = λ_k X_k` exactly for every column.
    pub fn new(a: &RatMatrix, x: RatMatrix, c: RatMatrix, lambda: Vec<Rational>) -> Result<Self> {
        let u = RadoUpdate { x, c, lambda };
        u.validate(a)?;
        Ok(u)
    }

    pub fn x(&self) -> &RatMatrix {
        &self.x
    }

    pub fn c(&self) -> &RatMatrix {
        &self.c
    }

    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }

    pub fn validate(&self, a: &RatMatrix) -> Result<()> {
        let n = a.order()?;
        let r = self.x.cols();
        if self.x.rows() != n || r > n {
            return Err(Error::DimensionMismatch(format!(
                "eigenvector block is {}x{r} for order {n}",
                self.x.rows()
            )));
        }
        if self.c.rows() != r || self.c.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "coefficient block is {}x{}, expected {r}x{n}",
                self.c.rows(),
                self.c.cols()
            )));
        }
        if self.lambda.len() != r {
            return Err(Error::DimensionMismatch(format!(
                "{} eigenvalues for {r} eigenvectors",
                self.lambda.len()
            )));
        }
        for k in 0..r {
            let col = self.x.column(k);
            if col.iter().all(Zero::is_zero) {
                return Err(Error::EigenvectorMismatch { column: k });
            }
            let image = a.mul_vec(&col)?;
            if image.iter().zip(&col).any(|(y, v)| *y != &self.lambda[k] * v) {
                return Err(Error::EigenvectorMismatch { column: k });
            }
        }
        Ok(())
    }

    /// `Λ + C X`, whose eigenvalues replace `λ_1..λ_r`.
    pub fn reduced(&self) -> Result<RatMatrix> {
        RatMatrix::diagonal(&self.lambda).add(&self.c.mul(&self.x)?)
    }
}

/// Eigenvalue of each column of `X`, read off the first nonzero component;
/// fails when a column is not an eigenvector of `A`.
pub fn infer_eigenvalues(a: &RatMatrix, x: &RatMatrix) -> Result<Vec<Rational>> {
    let n = a.order()?;
    if x.rows() != n {
        return Err(Error::DimensionMismatch("eigenvector block height".into()));
    }
    (0..x.cols())
        .map(|k| {
            let col = x.column(k);
            let image = a.mul_vec(&col)?;
            let i = col
                .iter()
                .position(|v| !v.is_zero())
                .ok_or(Error::EigenvectorMismatch { column: k })?;
            let lambda = &image[i] / &col[i];
            if image.iter().zip(&col).any(|(y, v)| *y != &lambda * v) {
                return Err(Error::EigenvectorMismatch { column: k });
            }
            Ok(lambda)
        })
        .collect()
}

/// `A + X C`. Its spectrum is that of `Λ + CX` together with the
/// eigenvalues of `A` not attached to `X`.
pub fn rado_update(a: &RatMatrix, u: &RadoUpdate) -> Result<RatMatrix> {
    u.validate(a)?;
    a.add(&u.x.mul(&u.c)?)
}

/// Checks `charpoly(A+XC)·charpoly(Λ) = charpoly(Λ+CX)·charpoly(A)`.
pub fn rado_identity_holds(a: &RatMatrix, u: &RadoUpdate) -> Result<bool> {
    let updated = rado_update(a, u)?;
    let lambda_poly = u.lambda.iter().fold(Poly::one(), |p, l| p.mul(&Poly::linear(l)));
    let lhs = charpoly(&updated)?.mul(&lambda_poly);
    let rhs = charpoly(&u.reduced()?)?.mul(&charpoly(a)?);
    Ok(lhs == rhs)
}

/// `A + εJ_n` for `A` with constant row sums `r`; the result has spectrum
/// `(r+ε, λ_2, …, λ_n)`.
pub fn shift(a: &RatMatrix, eps: &Rational) -> Result<RatMatrix> {
    let n = a.order()?;
    if constant_row_sum(a).is_none() {
        return Err(Error::Precondition("row sums are not constant".into()));
    }
    a.add(&constant_j(n)?.scale(eps))
}

/// Least `ε` making `A + εJ_n` entrywise nonnegative: `n · max(0, -min a_ij)`.
/// The classical form `k = |min a_ij|` adds `k` to every entry, which is
/// `nk · J_n`.
pub fn shift_nonneg_threshold(a: &RatMatrix) -> Result<Rational> {
    let n = a.order()?;
    let min = a.min_entry();
    if min.is_negative() {
        Ok(rational::from_usize(n) * -min)
    } else {
        Ok(Rational::zero())
    }
}
