//! Exact integer matrix arithmetic and normal forms.

pub mod bareiss;
mod charpoly;
mod matrix;
mod poly;
mod smith;

pub use bareiss::{determinant, rank};
pub use charpoly::char_poly;
pub use matrix::Matrix;
pub use poly::Polynomial;
pub use smith::{smith_normal_form, SmithDecomposition};

use crate::error::Result;
use crate::scalar::Exact;

pub fn mat_mul<T: Exact>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    a.mul(b)
}

pub fn mat_pow<T: Exact>(a: &Matrix<T>, m: u32) -> Result<Matrix<T>> {
    a.pow(m)
}

pub fn is_essential<T: Exact>(a: &Matrix<T>) -> Result<bool> {
    a.is_essential()
}

/// Builds a matrix from small integer rows; panics on ragged input.
pub fn int_matrix<T: Exact>(rows: &[&[i64]]) -> Matrix<T> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| T::from_i64(x).expect("i64 fits")).collect())
            .collect(),
    )
    .expect("well-formed literal matrix")
}
