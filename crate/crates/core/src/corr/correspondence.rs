use std::fmt;

use crate::error::{domain, shape, Result};
use crate::linalg::Matrix;
use crate::scalar::Exact;

/// One edge `(v, α, w)` of a single factor `X(R)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: usize,
    pub alpha: usize,
    pub target: usize,
}

/// Basis vector of a (possibly composite) graph correspondence: a path with
/// one edge per tensor factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisPath {
    pub edges: Vec<Edge>,
}

impl BasisPath {
    pub fn source(&self) -> usize {
        self.edges.first().map_or(0, |e| e.source)
    }

    pub fn target(&self) -> usize {
        self.edges.last().map_or(0, |e| e.target)
    }

    // lexicographic key: (next vertex, α) per step
    fn key(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.target, e.alpha)).collect()
    }
}

/// Finite `c(V)`–`c(W)` correspondence `X(R_1) ⊗ ... ⊗ X(R_k)`.
///
/// Block `(v, w)` is `C^{dims[v][w]}` with `dims = R_1 ⋯ R_k`. Basis vectors
/// are edge paths ordered lexicographically by their sequence of
/// `(next vertex, α)` steps; block coordinates number the paths of one block
/// in that order. Because the order only depends on the flattened path,
/// `(X ⊗ Y) ⊗ Z` and `X ⊗ (Y ⊗ Z)` are the same value and the associator is
/// the identity.
#[derive(Clone)]
pub struct GraphCorrespondence {
    left_index: Vec<String>,
    right_index: Vec<String>,
    factors: Vec<Matrix<usize>>,
    dims: Matrix<usize>,
    // per left vertex: basis vectors leaving it in path order, as
    // (right vertex, position inside that block)
    slots: Vec<Vec<(usize, usize)>>,
}

impl PartialEq for GraphCorrespondence {
    fn eq(&self, other: &Self) -> bool {
        self.left_index == other.left_index
            && self.right_index == other.right_index
            && self.slots == other.slots
    }
}

impl Eq for GraphCorrespondence {}

impl fmt::Debug for GraphCorrespondence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphCorrespondence")
            .field("left_index", &self.left_index)
            .field("right_index", &self.right_index)
            .field("dims", &self.dims)
            .field("factors", &self.factors.len())
            .finish()
    }
}

pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn check_labels(labels: &[String], what: &str) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(shape(format!("duplicate {what} label {l:?}")));
        }
    }
    Ok(())
}

fn single_factor_slots(r: &Matrix<usize>) -> Vec<Vec<(usize, usize)>> {
    (0..r.rows())
        .map(|v| {
            (0..r.cols())
                .flat_map(|w| (0..*r.get(v, w)).map(move |a| (w, a)))
                .collect()
        })
        .collect()
}

impl GraphCorrespondence {
    /// `X(R)` for a nonnegative `|V| × |W|` matrix.
    pub fn from_matrix<T: Exact>(r: &Matrix<T>, left: Vec<String>, right: Vec<String>) -> Result<Self> {
        r.require_nonnegative("correspondence matrix")?;
        let dims = r.try_map(|x| {
            x.to_usize().ok_or_else(|| domain(format!("block dimension {x} is too large")))
        })?;
        Self::from_dims(dims, left, right)
    }

    /// `X(R)` with vertices labelled `0, 1, ...`.
    pub fn from_matrix_default<T: Exact>(r: &Matrix<T>) -> Result<Self> {
        Self::from_matrix(r, default_labels(r.rows()), default_labels(r.cols()))
    }

    pub fn from_dims(dims: Matrix<usize>, left: Vec<String>, right: Vec<String>) -> Result<Self> {
        if left.len() != dims.rows() || right.len() != dims.cols() {
            return Err(shape(format!(
                "{}x{} matrix with {} left and {} right labels",
                dims.rows(),
                dims.cols(),
                left.len(),
                right.len()
            )));
        }
        check_labels(&left, "left")?;
        check_labels(&right, "right")?;
        let slots = single_factor_slots(&dims);
        Ok(Self { left_index: left, right_index: right, factors: vec![dims.clone()], dims, slots })
    }

    /// `X(I)` over the given vertex set.
    pub fn identity(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(shape("empty vertex set"));
        }
        Self::from_dims(Matrix::identity(n), labels.clone(), labels)
    }

    /// Interior tensor product over the shared middle vertex set.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.right_index != other.left_index {
            return Err(shape(format!(
                "cannot tensor: right index {:?} differs from left index {:?}",
                self.right_index, other.left_index
            )));
        }
        let dims = self.dims.mul(&other.dims)?;
        let mut slots = Vec::with_capacity(self.slots.len());
        for row in &self.slots {
            let mut counters = vec![0usize; other.right_index.len()];
            let mut out = Vec::new();
            for &(u, _) in row {
                for &(w, _) in &other.slots[u] {
                    out.push((w, counters[w]));
                    counters[w] += 1;
                }
            }
            slots.push(out);
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(Self {
            left_index: self.left_index.clone(),
            right_index: other.right_index.clone(),
            factors,
            dims,
            slots,
        })
    }

    /// `X^{⊗m}`; `m = 0` gives `X(I)` over the left index.
    pub fn power(&self, m: usize) -> Result<Self> {
        if self.left_index != self.right_index {
            return Err(shape("tensor power of a non-square correspondence"));
        }
        if m == 0 {
            return Self::identity(self.left_index.clone());
        }
        let mut acc = self.clone();
        for _ in 1..m {
            acc = acc.tensor(self)?;
        }
        Ok(acc)
    }

    pub fn left_index(&self) -> &[String] {
        &self.left_index
    }

    pub fn right_index(&self) -> &[String] {
        &self.right_index
    }

    pub fn dims(&self) -> &Matrix<usize> {
        &self.dims
    }

    pub fn factors(&self) -> &[Matrix<usize>] {
        &self.factors
    }

    pub fn n_left(&self) -> usize {
        self.left_index.len()
    }

    pub fn n_right(&self) -> usize {
        self.right_index.len()
    }

    pub fn block_dim(&self, v: usize, w: usize) -> usize {
        *self.dims.get(v, w)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.entries().iter().sum()
    }

    /// Same vertex sets and block dimensions (the basis order may differ).
    pub fn same_blocks(&self, other: &Self) -> bool {
        self.left_index == other.left_index
            && self.right_index == other.right_index
            && self.dims == other.dims
    }

    pub fn is_square(&self) -> bool {
        self.left_index == self.right_index
    }

    /// Basis vectors leaving `v`, in path order, as `(w, position in block (v, w))`.
    pub fn row_slots(&self, v: usize) -> &[(usize, usize)] {
        &self.slots[v]
    }

    /// For block `(v, w)` of `self ⊗ other`: `out[u][i * d2 + j]` is the
    /// block coordinate of `e_i ⊗ f_j` with `e_i` in block `(v, u)` of
    /// `self` and `f_j` in block `(u, w)` of `other` (`d2` its dimension).
    pub fn tensor_positions(&self, other: &Self, v: usize, w: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (0..self.n_right())
            .map(|u| vec![usize::MAX; self.block_dim(v, u) * other.block_dim(u, w)])
            .collect();
        let mut next = 0;
        for &(u, i) in &self.slots[v] {
            let d2 = other.block_dim(u, w);
            for &(w2, j) in &other.slots[u] {
                if w2 == w {
                    out[u][i * d2 + j] = next;
                    next += 1;
                }
            }
        }
        debug_assert_eq!(next, self.dims.mul(&other.dims).map_or(0, |d| *d.get(v, w)));
        out
    }

    /// Basis of block `(v, w)` as explicit edge paths, in block order.
    pub fn block_basis(&self, v: usize, w: usize) -> Vec<BasisPath> {
        let mut paths = Vec::new();
        let mut current = Vec::with_capacity(self.factors.len());
        self.walk(v, 0, &mut current, &mut |p| {
            if p.last().is_some_and(|e| e.target == w) {
                paths.push(BasisPath { edges: p.to_vec() });
            }
        });
        paths
    }

    /// Whole basis in order `(v, w, block position)`.
    pub fn basis(&self) -> Vec<BasisPath> {
        let mut out = Vec::with_capacity(self.total_dim());
        for v in 0..self.n_left() {
            for w in 0..self.n_right() {
                out.extend(self.block_basis(v, w));
            }
        }
        out
    }

    fn walk(&self, at: usize, depth: usize, current: &mut Vec<Edge>, emit: &mut impl FnMut(&[Edge])) {
        if depth == self.factors.len() {
            emit(current);
            return;
        }
        let f = &self.factors[depth];
        for next in 0..f.cols() {
            for alpha in 0..*f.get(at, next) {
                current.push(Edge { source: at, alpha, target: next });
                self.walk(next, depth + 1, current, emit);
                current.pop();
            }
        }
    }

    /// Ordering sanity check: block bases enumerated by walking paths agree
    /// with the slot bookkeeping used by the tensor operations.
    pub fn basis_is_consistent(&self) -> bool {
        (0..self.n_left()).all(|v| {
            let mut seen = vec![0usize; self.n_right()];
            let mut walked = Vec::new();
            let mut current = Vec::new();
            self.walk(v, 0, &mut current, &mut |p| walked.push(BasisPath { edges: p.to_vec() }));
            let sorted = walked.windows(2).all(|w| w[0].key() < w[1].key());
            let slots_match = walked.len() == self.slots[v].len()
                && walked.iter().zip(&self.slots[v]).all(|(p, &(w, i))| {
                    let ok = p.target() == w && seen[w] == i;
                    seen[w] += 1;
                    ok
                });
            sorted && slots_match
        })
    }
}

/// Object `(c(V), X)`: a square correspondence with essential dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectPair {
    x: GraphCorrespondence,
}

impl ObjectPair {
    pub fn new(x: GraphCorrespondence) -> Result<Self> {
        if !x.is_square() {
            return Err(shape("object correspondence must have equal left and right index"));
        }
        if !x.dims().is_essential()? {
            return Err(domain("object correspondence must be essential"));
        }
        Ok(Self { x })
    }

    /// `(c(V), X(A))` with default labels.
    pub fn from_matrix<T: Exact>(a: &Matrix<T>) -> Result<Self> {
        Self::new(GraphCorrespondence::from_matrix_default(a)?)
    }

    pub fn index(&self) -> &[String] {
        self.x.left_index()
    }

    pub fn x(&self) -> &GraphCorrespondence {
        &self.x
    }

    pub fn size(&self) -> usize {
        self.x.n_left()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_matrix;

    fn corr(rows: &[&[i64]]) -> GraphCorrespondence {
        GraphCorrespondence::from_matrix_default(&int_matrix::<i64>(rows)).unwrap()
    }

    #[test]
    fn single_block() {
        let x = corr(&[&[2]]);
        assert_eq!(x.total_dim(), 2);
        let basis = x.basis();
        assert_eq!(basis[0].edges, vec![Edge { source: 0, alpha: 0, target: 0 }]);
        assert_eq!(basis[1].edges, vec![Edge { source: 0, alpha: 1, target: 0 }]);
    }

    #[test]
    fn entry_sum_and_zero_rows() {
        assert_eq!(corr(&[&[1, 1], &[1, 0]]).basis().len(), 3);
        let x = corr(&[&[0, 0], &[1, 2]]);
        assert_eq!(x.total_dim(), 3);
        assert!(ObjectPair::new(x).is_err());
    }

    #[test]
    fn tensor_dims_and_paths() {
        let r = corr(&[&[1, 1]]);
        let s = corr(&[&[1], &[1]]);
        let rs = r.tensor(&s).unwrap();
        assert_eq!(rs.block_dim(0, 0), 2);
        assert_eq!(rs.block_basis(0, 0).len(), 2);
        assert!(rs.basis_is_consistent());
        let id = GraphCorrespondence::identity(default_labels(2)).unwrap();
        assert_eq!(r.tensor(&id).unwrap().dims(), r.dims());
        assert_eq!(r.tensor(&id).unwrap(), r);
    }

    #[test]
    fn associativity_is_literal() {
        let x = corr(&[&[1, 2], &[1, 0]]);
        let y = corr(&[&[0, 1], &[2, 1]]);
        let z = corr(&[&[1, 1], &[1, 1]]);
        let left = x.tensor(&y).unwrap().tensor(&z).unwrap();
        let right = x.tensor(&y.tensor(&z).unwrap()).unwrap();
        assert_eq!(left, right);
        assert!(left.basis_is_consistent());
        assert_eq!(left.basis(), right.basis());
    }

    #[test]
    fn eight_paths_through_three_copies_of_two() {
        let x = corr(&[&[2]]);
        let cube = x.power(3).unwrap();
        let basis = cube.block_basis(0, 0);
        assert_eq!(basis.len(), 8);
        // binary counting on (α1, α2, α3)
        for (k, p) in basis.iter().enumerate() {
            let alphas: Vec<usize> = p.edges.iter().map(|e| e.alpha).collect();
            assert_eq!(alphas, vec![k >> 2 & 1, k >> 1 & 1, k & 1]);
        }
    }

    #[test]
    fn mismatched_tensor() {
        let r = corr(&[&[1, 1]]);
        assert!(r.tensor(&r).is_err());
    }
}
