//! Orthogonal embedding `X ↦ U(1 ⊕ X)Uᵀ` of `(n-1)×(n-1)` matrices into
//! the matrices with all row and column sums 1, its inverse, and the
//! companion-matrix realization of a prescribed spectrum.
//!
//! Everything here is floating point: the canonical basis has entries
//! `1/√n`.

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::FloatMatrix;
use crate::poly::{charpoly_f64, coeff_residual, companion, Poly};
use crate::rational;
use crate::spectrum::{poly_from_entries, SpectrumList};

pub const ASSEMBLY_TOLERANCE: f64 = 1e-12;
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-10;
pub const EXTRACT_TOLERANCE: f64 = 1e-8;
pub const SPECTRAL_TOLERANCE: f64 = 1e-9;
/// How far a decimal Perron entry may sit from 1.
pub const PERRON_UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisSource {
    Canonical,
    UserSupplied,
}

/// Orthogonal matrix whose first column is `(1/√n)(1, …, 1)ᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoBasis {
    u: FloatMatrix,
    source: BasisSource,
}

fn max_abs(values: impl Iterator<Item = f64>) -> f64 {
    values.map(f64::abs).fold(0.0, f64::max)
}

impl OrthoBasis {
    /// The symmetric involution
    /// `U_n = [[1/√n, √((n-1)/n) e_{n-1}ᵀ], [√((n-1)/n) e_{n-1}, V_{n-1}]]`
    /// with `V_{n-1} = I - (1 + 1/√n) J_{n-1}`.
    pub fn canonical(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("basis order must be >= 1".into()));
        }
        let nf = n as f64;
        let inv_sqrt_n = 1.0 / nf.sqrt();
        let u = if n == 1 {
            FloatMatrix::identity(1)
        } else {
            let m = (n - 1) as f64;
            let border = (m.sqrt() / nf.sqrt()) * (1.0 / m.sqrt());
            let v_off = -(1.0 + inv_sqrt_n) / m;
            FloatMatrix::from_fn(n, n, |i, j| match (i, j) {
                (0, 0) => inv_sqrt_n,
                (0, _) | (_, 0) => border,
                _ if i == j => 1.0 + v_off,
                _ => v_off,
            })
        };
        let basis = OrthoBasis {
            u,
            source: BasisSource::Canonical,
        };
        basis.check(ASSEMBLY_TOLERANCE).map_err(|e| Error::Internal(e.to_string()))?;
        Ok(basis)
    }

    /// Validates a caller-supplied orthogonal matrix.
    pub fn from_matrix(u: FloatMatrix) -> Result<Self> {
        u.order()?;
        u.ensure_finite()?;
        let basis = OrthoBasis {
            u,
            source: BasisSource::UserSupplied,
        };
        basis.check(ASSEMBLY_TOLERANCE)?;
        Ok(basis)
    }

    /// Gram–Schmidt (two passes) on the normalized ones vector followed
    /// by uniform random vectors from a seeded generator.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("basis order must be >= 1".into()));
        }
        let mut rng = crate::random::rng(seed);
        let mut columns: Vec<Vec<f64>> = vec![vec![1.0 / (n as f64).sqrt(); n]];
        while columns.len() < n {
            let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            for _ in 0..2 {
                for q in &columns {
                    let d: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= d * qi);
                }
            }
            let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm < 1e-6 {
                continue;
            }
            columns.push(v.into_iter().map(|c| c / norm).collect());
        }
        Self::from_matrix(FloatMatrix::from_fn(n, n, |i, j| columns[j][i]))
    }

    pub fn order(&self) -> usize {
        self.u.rows()
    }

    pub fn matrix(&self) -> &FloatMatrix {
        &self.u
    }

    pub fn source(&self) -> BasisSource {
        self.source
    }

    fn check(&self, tol: f64) -> Result<()> {
        let n = self.u.rows();
        let gram = self.u.transpose().mul(&self.u)?;
        let off = gram.max_abs_diff(&FloatMatrix::identity(n))?;
        if off > tol {
            return Err(Error::Precondition(format!("basis is not orthogonal (deviation {off:e})")));
        }
        let e = 1.0 / (n as f64).sqrt();
        let dev = max_abs((0..n).map(|i| self.u.get(i, 0) - e));
        if dev > tol {
            return Err(Error::Precondition(format!(
                "first column is not the normalized ones vector (deviation {dev:e})"
            )));
        }
        if self.source == BasisSource::Canonical {
            let sym = self.u.max_abs_diff(&self.u.transpose())?;
            let inv = self.u.mul(&self.u)?.max_abs_diff(&FloatMatrix::identity(n))?;
            if sym > tol || inv > tol {
                return Err(Error::Precondition("canonical basis is not a symmetric involution".into()));
            }
        }
        Ok(())
    }
}

/// `U(1 ⊕ X)Uᵀ`; every row and column sum of the result is 1.
pub fn embed(basis: &OrthoBasis, x: &FloatMatrix) -> Result<FloatMatrix> {
    let n = basis.order();
    if x.rows() + 1 != n || x.cols() + 1 != n {
        return Err(Error::DimensionMismatch(format!(
            "block is {}x{}, basis order {n}",
            x.rows(),
            x.cols()
        )));
    }
    let u = basis.matrix();
    u.mul(&x.bordered_one())?.mul(&u.transpose())
}

/// Largest deviation of any row or column sum from `target`.
pub fn sum_deviation(a: &FloatMatrix, target: f64) -> f64 {
    max_abs(a.row_sums().into_iter().chain(a.col_sums()).map(|s| s - target))
}

/// Inverse of [`embed`] for `A` with all row and column sums 1: the
/// trailing block of `UᵀAU`.
pub fn extract(basis: &OrthoBasis, a: &FloatMatrix) -> Result<FloatMatrix> {
    let n = basis.order();
    if a.rows() != n || a.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, basis order {n}",
            a.rows(),
            a.cols()
        )));
    }
    let dev = sum_deviation(a, 1.0);
    if dev > EXTRACT_TOLERANCE {
        return Err(Error::NotUnitSum(format!("row/column sums deviate by {dev:e}")));
    }
    if n == 1 {
        return Err(Error::InvalidDimension("order 1 has an empty block".into()));
    }
    let u = basis.matrix();
    let m = u.transpose().mul(a)?.mul(u)?;
    let border = max_abs(
        (0..n)
            .map(|k| {
                let target = if k == 0 { 1.0 } else { 0.0 };
                (m.get(0, k) - target).abs().max((m.get(k, 0) - target).abs())
            }),
    );
    if border > EXTRACT_TOLERANCE {
        return Err(Error::NotUnitSum(format!("leading border deviates by {border:e}")));
    }
    m.trailing_block(1)
}

fn require_unit_perron(s: &SpectrumList) -> Result<()> {
    let p = s.perron();
    let ok = if p.exact {
        p.re.is_one() && p.im.is_zero()
    } else {
        (rational::to_f64(&p.re) - 1.0).abs() <= PERRON_UNIT_TOLERANCE
            && rational::to_f64(&p.im).abs() <= PERRON_UNIT_TOLERANCE
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("Perron entry is {p}, expected 1")))
    }
}

/// Monic polynomial of the non-Perron entries.
pub fn tail_poly(s: &SpectrumList) -> Result<Poly> {
    poly_from_entries(&s.tail())
}

/// Matrix with all row and column sums 1 and the given spectrum (Perron
/// entry 1): the companion matrix of the remaining entries, embedded.
pub fn realize_cospectral(s: &SpectrumList, basis: &OrthoBasis) -> Result<FloatMatrix> {
    require_unit_perron(s)?;
    if basis.order() != s.len() {
        return Err(Error::DimensionMismatch(format!(
            "spectrum of length {} with basis of order {}",
            s.len(),
            basis.order()
        )));
    }
    let tail = tail_poly(s)?;
    if s.len() == 1 {
        return Ok(FloatMatrix::identity(1));
    }
    let c = companion(&tail)?.to_float();
    embed(basis, &c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonnegRealization {
    /// Least shift making `B₀ + k·J_n` nonnegative: `n·max(0, -min b_ij)`.
    pub k: f64,
    /// `|min b_ij|` of `B₀` (0 when `B₀ ≥ 0`), the per-entry amount.
    pub entry_shift: f64,
    /// Unshifted realization with all sums 1.
    pub base: FloatMatrix,
    /// `B₀ + k·J_n`, nonnegative with all sums `1 + k`.
    pub matrix: FloatMatrix,
    /// Largest coefficient gap between the charpoly of `matrix` and the
    /// target with Perron entry `1 + k`.
    pub charpoly_residual: f64,
}

impl NonnegRealization {
    pub fn row_sum(&self) -> f64 {
        1.0 + self.k
    }
}

/// Nonnegative generalized doubly stochastic realization of
/// `(1 + k; λ_2, …, λ_n)` with the least `k` for the given basis.
pub fn realize_nonneg(s: &SpectrumList, basis: &OrthoBasis) -> Result<NonnegRealization> {
    let base = realize_cospectral(s, basis)?;
    let n = s.len();
    let min = base.min_entry();
    let entry_shift = if min < 0.0 { -min } else { 0.0 };
    let k = n as f64 * entry_shift;
    let matrix = base.offset(&entry_shift);
    let target = mul_linear(&tail_poly(s)?.to_f64(), 1.0 + k);
    let charpoly_residual = coeff_residual(&charpoly_f64(&matrix)?, &target);
    Ok(NonnegRealization {
        k,
        entry_shift,
        base,
        matrix,
        charpoly_residual,
    })
}

/// Coefficients of `q(x)·(x - root)`.
pub fn mul_linear(q: &[f64], root: f64) -> Vec<f64> {
    let mut out = vec![0.0; q.len() + 1];
    for (k, c) in q.iter().enumerate() {
        out[k + 1] += c;
        out[k] -= root * c;
    }
    out
}

/// Float coefficients of the target characteristic polynomial.
pub fn target_coefficients(s: &SpectrumList) -> Result<Vec<f64>> {
    poly_from_entries(s.entries()).map(|p| p.to_f64())
}
