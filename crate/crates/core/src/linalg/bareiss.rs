//! Fraction-free elimination: exact rank and determinant over the integers.

use crate::error::{shape, Result};
use crate::linalg::Matrix;
use crate::scalar::Exact;

/// Rank over the rationals, computed without leaving the integers.
pub fn rank<T: Exact>(m: &Matrix<T>) -> usize {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut prev = T::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let pivot = a.get(r, c).clone();
        for i in r + 1..rows {
            let lead = a.get(i, c).clone();
            for j in c + 1..cols {
                let val = (pivot.clone() * a.get(i, j).clone() - lead.clone() * a.get(r, j).clone())
                    / prev.clone();
                a.set(i, j, val);
            }
            a.set(i, c, T::zero());
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// Determinant by Bareiss elimination.
pub fn determinant<T: Exact>(m: &Matrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(shape("determinant of a non-square matrix"));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut prev = T::one();
    let mut negate = false;
    for k in 0..n {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                Some(p) => {
                    a.swap_rows(k, p);
                    negate = !negate;
                }
                None => return Ok(T::zero()),
            }
        }
        let pivot = a.get(k, k).clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let val = (pivot.clone() * a.get(i, j).clone()
                    - a.get(i, k).clone() * a.get(k, j).clone())
                    / prev.clone();
                a.set(i, j, val);
            }
        }
        prev = pivot;
    }
    let det = a.get(n - 1, n - 1).clone();
    Ok(if negate { -det } else { det })
}
