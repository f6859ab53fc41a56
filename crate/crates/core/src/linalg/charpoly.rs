use crate::error::{shape, Result};
use crate::linalg::{Matrix, Polynomial};
use crate::scalar::Exact;

/// `det(tI - A)` by the Faddeev–LeVerrier recurrence.
///
/// Every division in the recurrence is exact over the integers, so the
/// computation never leaves the ring.
pub fn char_poly<T: Exact>(a: &Matrix<T>) -> Result<Polynomial<T>> {
    if !a.is_square() {
        return Err(shape(format!(
            "characteristic polynomial of non-square {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let id = Matrix::<T>::identity(n);
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    let mut aux = Matrix::<T>::zeros(n, n);
    for k in 1..=n {
        aux = a.mul(&aux)?.add(&id.scale(&coeffs[n - k + 1]))?;
        let tr = a.mul(&aux)?.trace();
        let k_t = T::from_usize(k).expect("size fits the ring");
        debug_assert!(tr.is_multiple_of(&k_t));
        coeffs[n - k] = -(tr / k_t);
    }
    Ok(Polynomial::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<i64>>) -> Matrix<i64> {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn two_by_two_formula() {
        // t^2 - tr t + det
        for a in [
            m(vec![vec![1, 1], vec![1, 1]]),
            m(vec![vec![0, 1], vec![1, 0]]),
            m(vec![vec![3, 7], vec![2, 5]]),
        ] {
            let tr = a.trace();
            let det = a.get(0, 0) * a.get(1, 1) - a.get(0, 1) * a.get(1, 0);
            assert_eq!(char_poly(&a).unwrap(), Polynomial::from_i64(&[det, -tr, 1]));
        }
        assert_eq!(char_poly(&m(vec![vec![2]])).unwrap(), Polynomial::from_i64(&[-2, 1]));
    }

    #[test]
    fn non_square_rejected() {
        assert!(char_poly(&m(vec![vec![1, 2]])).is_err());
    }
}
