use std::fmt;

use crate::linalg::Matrix;
use crate::scalar::Exact;

/// Univariate polynomial in `t`, coefficients lowest degree first.
///
/// Always normalized: no trailing zero coefficients, so the zero polynomial
/// has an empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Exact> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// Convenience constructor from small integer coefficients.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_i64(c).expect("i64 fits")).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn constant_term(&self) -> T {
        self.coeff(0)
    }

    /// Largest `k` with `t^k` dividing `self` (0 for the zero polynomial).
    pub fn t_adic_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// `self / t^k` where `k` is the t-adic valuation.
    pub fn strip_t_factors(&self) -> Self {
        Self::new(self.coeffs[self.t_adic_valuation()..].to_vec())
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// `p(A)` by Horner's scheme. `A` must be square.
    pub fn eval_matrix(&self, a: &Matrix<T>) -> crate::Result<Matrix<T>> {
        if !a.is_square() {
            return Err(crate::error::shape("polynomial evaluated at a non-square matrix"));
        }
        let n = a.rows();
        let mut acc = Matrix::<T>::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(a)?.add(&Matrix::<T>::identity(n).scale(c))?;
        }
        Ok(acc)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
}

impl<T: Exact> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let unit = mag.is_one();
            match k {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "t")?,
                1 => write!(f, "{mag}t")?,
                _ if unit => write!(f, "t^{k}")?,
                _ => write!(f, "{mag}t^{k}")?,
            }
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Polynomial").field(&self.coeffs).finish()
    }
}
