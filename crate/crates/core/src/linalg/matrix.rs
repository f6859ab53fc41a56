use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{domain, shape, Result};

/// Dense rectangular matrix stored row-major.
///
/// Shapes are always at least 1×1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(shape(format!("matrix must be at least 1x1, got {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(shape(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Self::new(nrows, ncols, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0, "matrix must be at least 1x1");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.cols)
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        self.iter_rows().map(<[T]>::to_vec).collect()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U, E>(&self, f: impl FnMut(&T) -> std::result::Result<U, E>) -> std::result::Result<Matrix<U>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<std::result::Result<_, _>>()?,
        })
    }

    pub fn transpose(&self) -> Self
    where
        T: Clone,
    {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Simultaneous row/column relabeling: entry `(i, j)` of the result is
    /// entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self
    where
        T: Clone,
    {
        assert!(self.is_square() && perm.len() == self.rows);
        Self::from_fn(self.rows, self.cols, |i, j| self.get(perm[i], perm[j]).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T: Clone + Zero + PartialOrd> Matrix<T> {
    pub fn is_nonnegative(&self) -> bool {
        let zero = T::zero();
        self.data.iter().all(|x| *x >= zero)
    }

    /// First negative entry as `(row, col)`, if any.
    pub fn first_negative(&self) -> Option<(usize, usize)> {
        let zero = T::zero();
        self.data
            .iter()
            .position(|x| *x < zero)
            .map(|k| (k / self.cols, k % self.cols))
    }

    pub fn require_nonnegative(&self, what: &str) -> Result<()> {
        match self.first_negative() {
            None => Ok(()),
            Some((i, j)) => Err(domain(format!("{what} has a negative entry at ({i}, {j})"))),
        }
    }

    /// No zero row and no zero column. Requires a square nonnegative matrix.
    pub fn is_essential(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(shape(format!(
                "essentiality needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        self.require_nonnegative("matrix")?;
        let rows_ok = (0..self.rows).all(|i| self.row(i).iter().any(|x| !x.is_zero()));
        let cols_ok = (0..self.cols).all(|j| (0..self.rows).any(|i| !self.get(i, j).is_zero()));
        Ok(rows_ok && cols_ok)
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    /// Exact product; errors when `self.cols != rhs.rows`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a.clone() * rhs.get(k, j).clone();
                    let slot = out.get_mut(i, j);
                    *slot = slot.clone() + prod;
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| c.clone() * x.clone())
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
{
    /// `self^m` by repeated squaring; `self^0` is the identity.
    pub fn pow(&self, m: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(shape(format!(
                "power of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }
}

impl<T> Matrix<T>
where
    T: Clone + Add<Output = T>,
{
    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(shape("addition of differently shaped matrices"));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        })
    }
}

impl<T> Matrix<T>
where
    T: Clone + Sub<Output = T>,
{
    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(shape("subtraction of differently shaped matrices"));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        })
    }
}

impl<T: Clone + Neg<Output = T>> Matrix<T> {
    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.iter_rows().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}", self.rows, self.cols)?;
        f.debug_list().entries(self.iter_rows()).finish()
    }
}
