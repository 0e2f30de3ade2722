//! Univariate polynomials with exact rational coefficients, characteristic
//! polynomials (Faddeev–LeVerrier) and companion matrices.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{FloatMatrix, Matrix, RatMatrix, Scalar};
use crate::rational::{self, Rational};

/// Coefficients lowest degree first, trailing zeros trimmed. The zero
/// polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `x - root`.
    pub fn linear(root: &Rational) -> Self {
        Poly::new(vec![-root.clone(), Rational::one()])
    }

    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(Poly::one(), |p, r| p.mul(&Poly::linear(r)))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Poly::new(
            (0..len)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + other.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational::to_f64).collect()
    }
}

impl fmt::Display for Poly {
    /// Space-separated coefficients, lowest degree first; `0` for the zero
    /// polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(rational::format).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Coefficients of `det(xI - A)`, lowest degree first, via the
/// Faddeev–LeVerrier recurrence `M_k = A M_{k-1} + c_{n-k+1} I`,
/// `c_{n-k} = -tr(A M_k) / k`.
fn faddeev_leverrier<T: Scalar>(a: &Matrix<T>, from_usize: impl Fn(usize) -> T) -> Result<Vec<T>> {
    let n = a.order()?;
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    let mut m = Matrix::<T>::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&m)?;
        for i in 0..n {
            let d = next.get(i, i).clone() + coeffs[n - k + 1].clone();
            next.set(i, i, d);
        }
        m = next;
        let am = a.mul(&m)?;
        coeffs[n - k] = -am.trace() / from_usize(k);
    }
    Ok(coeffs)
}

/// Exact monic characteristic polynomial `det(xI - A)`.
pub fn charpoly(a: &RatMatrix) -> Result<Poly> {
    faddeev_leverrier(a, rational::from_usize).map(Poly::new)
}

/// Floating-point characteristic polynomial coefficients, lowest degree
/// first, by the same recurrence.
pub fn charpoly_f64(a: &FloatMatrix) -> Result<Vec<f64>> {
    faddeev_leverrier(a, |k| k as f64)
}

/// Largest absolute coefficient difference; missing coefficients count as 0.
pub fn coeff_residual(a: &[f64], b: &[f64]) -> f64 {
    (0..a.len().max(b.len()))
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// True when `charpoly(A) = charpoly(B)` exactly.
pub fn cospectral(a: &RatMatrix, b: &RatMatrix) -> Result<bool> {
    let (n, m) = (a.order()?, b.order()?);
    if n != m {
        return Err(Error::DimensionMismatch(format!("orders {n} and {m}")));
    }
    Ok(charpoly(a)? == charpoly(b)?)
}

/// Companion matrix with ones on the super-diagonal and last row
/// `(-c_0, …, -c_{k-1})`.
pub fn companion(p: &Poly) -> Result<RatMatrix> {
    if !p.is_monic() {
        return Err(Error::Precondition("companion matrix needs a monic polynomial".into()));
    }
    let k = match p.degree() {
        Some(0) | None => {
            return Err(Error::Precondition("companion matrix needs degree >= 1".into()))
        }
        Some(k) => k,
    };
    Ok(RatMatrix::from_fn(k, k, |i, j| {
        if i == k - 1 {
            -p.coeffs()[j].clone()
        } else if j == i + 1 {
            Rational::one()
        } else {
            Rational::zero()
        }
    }))
}
