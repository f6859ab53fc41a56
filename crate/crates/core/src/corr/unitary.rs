use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use super::correspondence::GraphCorrespondence;
use crate::error::{shape, Result};
use crate::scalar::Real;

pub type CMatrix<T> = DMatrix<Complex<T>>;

/// Largest singular value; zero for an empty block.
pub fn op_norm<T: Real>(m: &CMatrix<T>) -> T {
    if m.is_empty() {
        return T::zero();
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(T::zero(), |acc, &s| if s > acc { s } else { acc })
}

/// Haar-distributed `n × n` unitary from the QR factorization of a complex
/// Gaussian matrix, with the phases of `R`'s diagonal moved into `Q`.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let g = CMatrix::<T>::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(T::from_f64_lossy(re), T::from_f64_lossy(im))
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let norm = d.norm();
        if norm > T::zero() {
            let phase = d / Complex::from(norm);
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Bounded operator `X → X'` between correspondences over the same vertex
/// sets that commutes with both actions: one complex matrix per block
/// `(v, w)`, mapping `X_{vw}` to `X'_{vw}` in the block coordinates of the
/// two correspondences.
#[derive(Clone, PartialEq)]
pub struct BlockUnitary<T: Real> {
    source: GraphCorrespondence,
    target: GraphCorrespondence,
    // row-major over (v, w)
    blocks: Vec<CMatrix<T>>,
}

impl<T: Real> fmt::Debug for BlockUnitary<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlockUnitary")
            .field("dims", self.source.dims())
            .field("blocks", &self.blocks)
            .finish()
    }
}

impl<T: Real> BlockUnitary<T> {
    pub fn new(
        source: GraphCorrespondence,
        target: GraphCorrespondence,
        blocks: Vec<CMatrix<T>>,
    ) -> Result<Self> {
        if !source.same_blocks(&target) {
            return Err(shape(format!(
                "block map between correspondences with dims {} and {}",
                source.dims(),
                target.dims()
            )));
        }
        let expected = source.n_left() * source.n_right();
        if blocks.len() != expected {
            return Err(shape(format!("expected {expected} blocks, got {}", blocks.len())));
        }
        for (k, b) in blocks.iter().enumerate() {
            let (v, w) = (k / source.n_right(), k % source.n_right());
            let d = source.block_dim(v, w);
            if b.nrows() != d || b.ncols() != d {
                return Err(shape(format!(
                    "block ({v}, {w}) is {}x{}, expected {d}x{d}",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(Self { source, target, blocks })
    }

    /// Block `(v, w)` built by `f(v, w, dim)`.
    pub fn from_fn(
        source: GraphCorrespondence,
        target: GraphCorrespondence,
        mut f: impl FnMut(usize, usize, usize) -> CMatrix<T>,
    ) -> Result<Self> {
        let mut blocks = Vec::with_capacity(source.n_left() * source.n_right());
        for v in 0..source.n_left() {
            for w in 0..source.n_right() {
                blocks.push(f(v, w, source.block_dim(v, w)));
            }
        }
        Self::new(source, target, blocks)
    }

    pub fn identity(x: &GraphCorrespondence) -> Self {
        Self::canonical(x.clone(), x.clone()).expect("a correspondence has its own block dims")
    }

    /// Map sending the `k`-th basis vector of each source block to the
    /// `k`-th basis vector of the same target block.
    pub fn canonical(source: GraphCorrespondence, target: GraphCorrespondence) -> Result<Self> {
        Self::from_fn(source, target, |_, _, d| CMatrix::identity(d, d))
    }

    pub fn random<R: Rng + ?Sized>(
        source: GraphCorrespondence,
        target: GraphCorrespondence,
        rng: &mut R,
    ) -> Result<Self> {
        Self::from_fn(source, target, |_, _, d| random_unitary(d, rng))
    }

    pub fn source(&self) -> &GraphCorrespondence {
        &self.source
    }

    pub fn target(&self) -> &GraphCorrespondence {
        &self.target
    }

    pub fn block(&self, v: usize, w: usize) -> &CMatrix<T> {
        &self.blocks[v * self.source.n_right() + w]
    }

    pub fn blocks(&self) -> &[CMatrix<T>] {
        &self.blocks
    }

    /// Blocks paired with their `(v, w)` coordinates.
    pub fn indexed_blocks(&self) -> impl Iterator<Item = ((usize, usize), &CMatrix<T>)> {
        let n = self.source.n_right();
        self.blocks.iter().enumerate().map(move |(k, b)| ((k / n, k % n), b))
    }

    /// Same blocks with the endpoints replaced by correspondences of equal
    /// block dimensions.
    pub fn with_endpoints(self, source: GraphCorrespondence, target: GraphCorrespondence) -> Result<Self> {
        if !self.source.same_blocks(&source) || !self.target.same_blocks(&target) {
            return Err(shape("new endpoints do not match the block dimensions"));
        }
        Self::new(source, target, self.blocks)
    }

    pub fn map_blocks(&self, mut f: impl FnMut(usize, usize, &CMatrix<T>) -> CMatrix<T>) -> Result<Self> {
        let n = self.source.n_right();
        let blocks = self.blocks.iter().enumerate().map(|(k, b)| f(k / n, k % n, b)).collect();
        Self::new(self.source.clone(), self.target.clone(), blocks)
    }

    /// Composite `next ∘ self`; needs `self.target == next.source`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if self.target != next.source {
            return Err(crate::Error::Composition(format!(
                "target with dims {} does not match source with dims {}",
                self.target.dims(),
                next.source.dims()
            )));
        }
        let blocks = next.blocks.iter().zip(&self.blocks).map(|(b, a)| b * a).collect();
        Ok(Self { source: self.source.clone(), target: next.target.clone(), blocks })
    }

    /// Adjoint, which is the inverse for unitary blocks.
    pub fn adjoint(&self) -> Self {
        Self {
            source: self.target.clone(),
            target: self.source.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    /// `self ⊗ other`, acting as `e ⊗ f ↦ self(e) ⊗ other(f)` on elementary
    /// tensors. Needs the right index of `self` to match the left index of
    /// `other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let source = self.source.tensor(&other.source)?;
        let target = self.target.tensor(&other.target)?;
        let mid = self.source.n_right();
        let mut blocks = Vec::with_capacity(source.n_left() * source.n_right());
        for v in 0..source.n_left() {
            for w in 0..source.n_right() {
                let d = source.block_dim(v, w);
                let mut out = CMatrix::zeros(d, d);
                let src = self.source.tensor_positions(&other.source, v, w);
                let tgt = self.target.tensor_positions(&other.target, v, w);
                for u in 0..mid {
                    let a = self.block(v, u);
                    let b = other.block(u, w);
                    let (d1, d2) = (a.nrows(), b.nrows());
                    for i in 0..d1 {
                        for j in 0..d2 {
                            let col = src[u][i * d2 + j];
                            for i2 in 0..d1 {
                                let aij = a[(i2, i)];
                                for j2 in 0..d2 {
                                    out[(tgt[u][i2 * d2 + j2], col)] = aij * b[(j2, j)];
                                }
                            }
                        }
                    }
                }
                blocks.push(out);
            }
        }
        Ok(Self { source, target, blocks })
    }

    /// Max over blocks of `‖U*U − I‖_op`.
    pub fn unitarity_residual(&self) -> T {
        self.blocks
            .iter()
            .map(|b| op_norm(&(b.adjoint() * b - CMatrix::identity(b.nrows(), b.ncols()))))
            .fold(T::zero(), Float::max)
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_residual() <= tol
    }

    /// Max over blocks of `‖U_vw − V_vw‖_op`; needs equal block dimensions.
    pub fn distance(&self, other: &Self) -> Result<T> {
        if !self.source.same_blocks(&other.source) {
            return Err(shape("distance between maps with different block dimensions"));
        }
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| op_norm(&(a - b)))
            .fold(T::zero(), Float::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::correspondence::default_labels;
    use crate::linalg::int_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn corr(rows: &[&[i64]]) -> GraphCorrespondence {
        GraphCorrespondence::from_matrix_default(&int_matrix::<i64>(rows)).unwrap()
    }

    // dense matrix of a block map over the whole basis, for a Kronecker oracle
    fn dense(u: &BlockUnitary<f64>) -> CMatrix<f64> {
        let x = u.source();
        let n = x.total_dim();
        let mut offsets = vec![0; x.n_left() * x.n_right() + 1];
        for k in 0..x.n_left() * x.n_right() {
            offsets[k + 1] = offsets[k] + x.block_dim(k / x.n_right(), k % x.n_right());
        }
        let mut out = CMatrix::zeros(n, n);
        for (k, b) in u.blocks().iter().enumerate() {
            out.view_mut((offsets[k], offsets[k]), b.shape()).copy_from(b);
        }
        out
    }

    #[test]
    fn random_blocks_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = corr(&[&[2, 1], &[0, 3]]);
        let u = BlockUnitary::<f64>::random(x.clone(), x, &mut rng).unwrap();
        assert!(u.unitarity_residual() < 1e-12);
        let back = u.then(&u.adjoint()).unwrap();
        assert!(back.distance(&BlockUnitary::identity(u.source())).unwrap() < 1e-12);
    }

    #[test]
    fn tensor_of_one_vertex_maps_is_kronecker() {
        // one vertex: block order is lexicographic in (α1, α2), which is the
        // Kronecker convention
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = corr(&[&[2]]);
        let y = corr(&[&[3]]);
        let a = BlockUnitary::<f64>::random(x.clone(), x, &mut rng).unwrap();
        let b = BlockUnitary::<f64>::random(y.clone(), y, &mut rng).unwrap();
        let t = a.tensor(&b).unwrap();
        let k = a.block(0, 0).kronecker(b.block(0, 0));
        assert!(op_norm(&(t.block(0, 0) - k)) < 1e-12);
    }

    #[test]
    fn tensor_respects_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = corr(&[&[1, 2], &[1, 1]]);
        let y = corr(&[&[0, 2], &[1, 1]]);
        let a1 = BlockUnitary::<f64>::random(x.clone(), x.clone(), &mut rng).unwrap();
        let a2 = BlockUnitary::<f64>::random(x.clone(), x.clone(), &mut rng).unwrap();
        let b1 = BlockUnitary::<f64>::random(y.clone(), y.clone(), &mut rng).unwrap();
        let b2 = BlockUnitary::<f64>::random(y.clone(), y.clone(), &mut rng).unwrap();
        let lhs = a1.then(&a2).unwrap().tensor(&b1.then(&b2).unwrap()).unwrap();
        let rhs = a1.tensor(&b1).unwrap().then(&a2.tensor(&b2).unwrap()).unwrap();
        assert!(lhs.distance(&rhs).unwrap() < 1e-12);
        assert!(lhs.unitarity_residual() < 1e-12);
    }

    #[test]
    fn tensor_with_identity_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = corr(&[&[1, 2], &[3, 0]]);
        let a = BlockUnitary::<f64>::random(x.clone(), x.clone(), &mut rng).unwrap();
        let id = BlockUnitary::identity(&GraphCorrespondence::identity(default_labels(2)).unwrap());
        assert!(a.tensor(&id).unwrap().distance(&a).unwrap() < 1e-15);
        assert!(id.tensor(&a).unwrap().distance(&a).unwrap() < 1e-15);
        assert!(op_norm(&dense(&a)) - 1.0 < 1e-12);
    }

    #[test]
    fn block_shape_errors() {
        let x = corr(&[&[2]]);
        let bad = BlockUnitary::<f64>::new(x.clone(), x.clone(), vec![CMatrix::identity(3, 3)]);
        assert!(bad.is_err());
        let y = corr(&[&[3]]);
        assert!(BlockUnitary::<f64>::canonical(x, y).is_err());
    }
}
