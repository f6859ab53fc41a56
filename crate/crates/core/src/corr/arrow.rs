use super::correspondence::{GraphCorrespondence, ObjectPair};
use super::unitary::BlockUnitary;
use crate::error::{shape, Error, Result};
use crate::scalar::Real;

/// 1-arrow `[F, Φ_F] : (B, Y) ← (A, X)`.
///
/// `f` is a `c(B)`–`c(A)` correspondence and `phi` a unitary
/// `Y ⊗ F → F ⊗ X`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneArrow<T: Real> {
    to: ObjectPair,
    from: ObjectPair,
    f: GraphCorrespondence,
    phi: BlockUnitary<T>,
}

impl<T: Real> OneArrow<T> {
    pub fn new(to: ObjectPair, from: ObjectPair, f: GraphCorrespondence, phi: BlockUnitary<T>) -> Result<Self> {
        if f.left_index() != to.index() || f.right_index() != from.index() {
            return Err(shape("correspondence indices do not match the arrow's objects"));
        }
        if *phi.source() != to.x().tensor(&f)? || *phi.target() != f.tensor(from.x())? {
            return Err(shape("intertwiner must map Y ⊗ F to F ⊗ X"));
        }
        Ok(Self { to, from, f, phi })
    }

    /// Builds `phi`'s endpoints from the objects; only the blocks are taken
    /// from `blocks`.
    pub fn from_blocks(to: ObjectPair, from: ObjectPair, f: GraphCorrespondence, blocks: BlockUnitary<T>) -> Result<Self> {
        let source = to.x().tensor(&f)?;
        let target = f.tensor(from.x())?;
        let phi = blocks.with_endpoints(source, target)?;
        Self::new(to, from, f, phi)
    }

    /// Codomain `(B, Y)`.
    pub fn to(&self) -> &ObjectPair {
        &self.to
    }

    /// Domain `(A, X)`.
    pub fn from(&self) -> &ObjectPair {
        &self.from
    }

    pub fn f(&self) -> &GraphCorrespondence {
        &self.f
    }

    pub fn phi(&self) -> &BlockUnitary<T> {
        &self.phi
    }

    /// Same objects and correspondence, replacing the intertwiner.
    pub fn with_phi(&self, phi: BlockUnitary<T>) -> Result<Self> {
        Self::new(self.to.clone(), self.from.clone(), self.f.clone(), phi)
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.phi.is_unitary(tol)
    }
}

/// `[I, 1]` on `(A, X)`.
pub fn identity_arrow<T: Real>(obj: &ObjectPair) -> OneArrow<T> {
    power_arrow(obj, 0).expect("identity arrow is well formed")
}

/// `[X^{⊗m}, 1] : (A, X) ← (A, X)`; `m = 0` is the identity arrow.
pub fn power_arrow<T: Real>(obj: &ObjectPair, m: usize) -> Result<OneArrow<T>> {
    let f = obj.x().power(m)?;
    let phi = BlockUnitary::canonical(obj.x().tensor(&f)?, f.tensor(obj.x())?)?;
    OneArrow::new(obj.clone(), obj.clone(), f, phi)
}

/// `[G, Φ_G] ⊗ [F, Φ_F] = [G ⊗ F, (1_G ⊗ Φ_F)(Φ_G ⊗ 1_F)]`.
pub fn compose_one_arrows<T: Real>(g: &OneArrow<T>, f: &OneArrow<T>) -> Result<OneArrow<T>> {
    if g.from != f.to {
        return Err(Error::Composition(
            "domain of the outer arrow differs from the codomain of the inner arrow".into(),
        ));
    }
    let first = g.phi.tensor(&BlockUnitary::identity(&f.f))?;
    let second = BlockUnitary::identity(&g.f).tensor(&f.phi)?;
    let phi = first.then(&second)?;
    OneArrow::new(g.to.clone(), f.from.clone(), g.f.tensor(&f.f)?, phi)
}

/// Commutation residual of `ψ : F → G` as a 2-arrow `[F, Φ_F] ⇒ [G, Φ_G]`:
/// max over blocks of `‖(ψ ⊗ 1_X) Φ_F − Φ_G (1_Y ⊗ ψ)‖_op`.
pub fn two_arrow_residual<T: Real>(psi: &BlockUnitary<T>, f: &OneArrow<T>, g: &OneArrow<T>) -> Result<T> {
    if f.to != g.to || f.from != g.from {
        return Err(shape("2-arrow between 1-arrows with different objects"));
    }
    if *psi.source() != f.f || *psi.target() != g.f {
        return Err(shape("2-arrow must map F to G"));
    }
    let y = BlockUnitary::identity(f.to.x());
    let x = BlockUnitary::identity(f.from.x());
    let lhs = f.phi.then(&psi.tensor(&x)?)?;
    let rhs = y.tensor(psi)?.then(&g.phi)?;
    lhs.distance(&rhs)
}

/// Whether `ψ` intertwines `Φ_F` and `Φ_G` within `tol`. Unitarity of `ψ`
/// is a separate check ([`BlockUnitary::is_unitary`]).
pub fn check_two_arrow<T: Real>(psi: &BlockUnitary<T>, f: &OneArrow<T>, g: &OneArrow<T>, tol: T) -> Result<bool> {
    Ok(two_arrow_residual(psi, f, g)? <= tol)
}

/// The 2-arrow `Φ_F : [Y, 1] ⊗ [F, Φ_F] ⇒ [F, Φ_F] ⊗ [X, 1]`, returned with
/// its source and target 1-arrows.
pub fn induced_two_arrow<T: Real>(f: &OneArrow<T>) -> Result<(BlockUnitary<T>, OneArrow<T>, OneArrow<T>)> {
    let lhs = compose_one_arrows(&power_arrow(&f.to, 1)?, f)?;
    let rhs = compose_one_arrows(f, &power_arrow(&f.from, 1)?)?;
    Ok((f.phi.clone(), lhs, rhs))
}

/// `Φ^{(n)} : Y^{⊗n} ⊗ F → F ⊗ X^{⊗n}`, pushing `n` copies of `Y` through
/// `F`; `n = 0` is the identity of `F`.
pub fn iterated_intertwiner<T: Real>(f: &OneArrow<T>, n: usize) -> Result<BlockUnitary<T>> {
    if n == 0 {
        let ident = GraphCorrespondence::identity(f.to.index().to_vec())?;
        return BlockUnitary::canonical(ident.tensor(&f.f)?, f.f.clone());
    }
    let mut acc = f.phi.clone();
    for k in 1..n {
        let y_k = BlockUnitary::identity(&f.to.x().power(k)?);
        let x = BlockUnitary::identity(f.from.x());
        acc = y_k.tensor(&f.phi)?.then(&acc.tensor(&x)?)?;
    }
    Ok(acc)
}
