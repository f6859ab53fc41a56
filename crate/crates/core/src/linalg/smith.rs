//! Smith normal form with unimodular transforms.

use crate::linalg::Matrix;
use crate::scalar::Exact;

/// `left · m · right = diag(diag)` padded with zeros to the shape of `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition<T> {
    pub left: Matrix<T>,
    pub diag: Vec<T>,
    pub right: Matrix<T>,
}

impl<T: Exact> SmithDecomposition<T> {
    /// The diagonal matrix `left · m · right` should equal.
    pub fn diagonal_matrix(&self) -> Matrix<T> {
        let (rows, cols) = (self.left.rows(), self.right.cols());
        Matrix::from_fn(rows, cols, |i, j| {
            if i == j {
                self.diag[i].clone()
            } else {
                T::zero()
            }
        })
    }

    /// Number of zero invariant factors.
    pub fn zero_count(&self) -> usize {
        self.diag.iter().filter(|d| d.is_zero()).count()
    }
}

fn smallest_pivot<T: Exact>(m: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, T)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let x = m.get(i, j);
            if x.is_zero() {
                continue;
            }
            let mag = x.abs();
            // strict comparison keeps the lexicographically first among ties
            if best.as_ref().is_none_or(|(_, _, b)| mag < *b) {
                best = Some((i, j, mag));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn add_row_multiple<T: Exact>(m: &mut Matrix<T>, target: usize, source: usize, q: &T) {
    for j in 0..m.cols() {
        let v = m.get(target, j).clone() - q.clone() * m.get(source, j).clone();
        m.set(target, j, v);
    }
}

fn add_col_multiple<T: Exact>(m: &mut Matrix<T>, target: usize, source: usize, q: &T) {
    for i in 0..m.rows() {
        let v = m.get(i, target).clone() - q.clone() * m.get(i, source).clone();
        m.set(i, target, v);
    }
}

/// Smith normal form of an arbitrary integer matrix.
///
/// Pivots are the smallest nonzero entry in absolute value, ties broken by
/// `(row, col)`, so the transforms are reproducible. Invariant factors are
/// nonnegative with `d_i | d_{i+1}`, zeros last.
pub fn smith_normal_form<T: Exact>(input: &Matrix<T>) -> SmithDecomposition<T> {
    let (rows, cols) = input.shape();
    let mut m = input.clone();
    let mut left = Matrix::<T>::identity(rows);
    let mut right = Matrix::<T>::identity(cols);
    let mut t = 0;

    'pivot: while t < rows.min(cols) {
        let Some((pi, pj)) = smallest_pivot(&m, t) else {
            break;
        };
        m.swap_rows(t, pi);
        left.swap_rows(t, pi);
        m.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            let pivot = m.get(t, t).clone();
            let mut leftover = false;
            for i in t + 1..rows {
                let x = m.get(i, t).clone();
                if x.is_zero() {
                    continue;
                }
                let q = x.div_floor(&pivot);
                add_row_multiple(&mut m, i, t, &q);
                add_row_multiple(&mut left, i, t, &q);
                leftover |= !m.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let x = m.get(t, j).clone();
                if x.is_zero() {
                    continue;
                }
                let q = x.div_floor(&pivot);
                add_col_multiple(&mut m, j, t, &q);
                add_col_multiple(&mut right, j, t, &q);
                leftover |= !m.get(t, j).is_zero();
            }
            if leftover {
                // a smaller remainder now exists; pick it as the new pivot
                continue 'pivot;
            }
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !m.get(i, j).is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => {
                    let minus_one = -T::one();
                    add_row_multiple(&mut m, t, i, &minus_one);
                    add_row_multiple(&mut left, t, i, &minus_one);
                }
                None => {
                    t += 1;
                    continue 'pivot;
                }
            }
        }
    }

    let n = rows.min(cols);
    for i in 0..n {
        if m.get(i, i).is_negative() {
            for j in 0..cols {
                let v = -m.get(i, j).clone();
                m.set(i, j, v);
            }
            for j in 0..rows {
                let v = -left.get(i, j).clone();
                left.set(i, j, v);
            }
        }
    }
    let diag = (0..n).map(|i| m.get(i, i).clone()).collect();
    SmithDecomposition { left, diag, right }
}
