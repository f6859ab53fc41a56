//! Concrete shifts between graph correspondences and their alignment.

use crate::corr::{
    compose_one_arrows, iterated_intertwiner, power_arrow, two_arrow_residual, BlockUnitary,
    GraphCorrespondence, ObjectPair, OneArrow,
};
use crate::error::{contract, domain, shape, Error, Result};
use crate::scalar::{Exact, Real};
use crate::shift::SeWitness;

/// `(M, N, Φ_M, Φ_N, Ψ_X, Ψ_Y)` with lag `m` between `(A, X)` and `(B, Y)`.
///
/// `m_arrow` is `[M, Φ_M] : (A, X) ← (B, Y)`, so `Φ_M : X ⊗ M → M ⊗ Y`;
/// `n_arrow` is `[N, Φ_N] : (B, Y) ← (A, X)`. `psi_x : M ⊗ N → X^{⊗m}` and
/// `psi_y : N ⊗ M → Y^{⊗m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlignedShiftData<T: Real> {
    x_obj: ObjectPair,
    y_obj: ObjectPair,
    m_arrow: OneArrow<T>,
    n_arrow: OneArrow<T>,
    psi_x: BlockUnitary<T>,
    psi_y: BlockUnitary<T>,
    lag: usize,
}

/// Operator-norm defects of the two alignment equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlignmentResiduals<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> AlignmentResiduals<T> {
    pub fn max(&self) -> T {
        if self.x > self.y { self.x } else { self.y }
    }

    pub fn within(&self, tol: T) -> bool {
        self.x <= tol && self.y <= tol
    }
}

impl<T: Real> AlignedShiftData<T> {
    pub fn new(
        x_obj: ObjectPair,
        y_obj: ObjectPair,
        m_arrow: OneArrow<T>,
        n_arrow: OneArrow<T>,
        psi_x: BlockUnitary<T>,
        psi_y: BlockUnitary<T>,
        lag: usize,
    ) -> Result<Self> {
        if lag == 0 {
            return Err(domain("lag must be at least 1"));
        }
        if *m_arrow.to() != x_obj || *m_arrow.from() != y_obj {
            return Err(shape("M must be an arrow (A, X) <- (B, Y)"));
        }
        if *n_arrow.to() != y_obj || *n_arrow.from() != x_obj {
            return Err(shape("N must be an arrow (B, Y) <- (A, X)"));
        }
        let mn = m_arrow.f().tensor(n_arrow.f())?;
        let nm = n_arrow.f().tensor(m_arrow.f())?;
        if *psi_x.source() != mn || *psi_x.target() != x_obj.x().power(lag)? {
            return Err(shape(format!("psi_x must map M ⊗ N to X^{lag}")));
        }
        if *psi_y.source() != nm || *psi_y.target() != y_obj.x().power(lag)? {
            return Err(shape(format!("psi_y must map N ⊗ M to Y^{lag}")));
        }
        Ok(Self { x_obj, y_obj, m_arrow, n_arrow, psi_x, psi_y, lag })
    }

    pub fn x_obj(&self) -> &ObjectPair {
        &self.x_obj
    }

    pub fn y_obj(&self) -> &ObjectPair {
        &self.y_obj
    }

    pub fn m_arrow(&self) -> &OneArrow<T> {
        &self.m_arrow
    }

    pub fn n_arrow(&self) -> &OneArrow<T> {
        &self.n_arrow
    }

    pub fn psi_x(&self) -> &BlockUnitary<T> {
        &self.psi_x
    }

    pub fn psi_y(&self) -> &BlockUnitary<T> {
        &self.psi_y
    }

    pub fn lag(&self) -> usize {
        self.lag
    }

    /// Largest unitarity defect among `Φ_M, Φ_N, Ψ_X, Ψ_Y`.
    pub fn unitarity_residual(&self) -> T {
        [
            self.m_arrow.phi().unitarity_residual(),
            self.n_arrow.phi().unitarity_residual(),
            self.psi_x.unitarity_residual(),
            self.psi_y.unitarity_residual(),
        ]
        .into_iter()
        .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// All four maps are blockwise unitary within `tol`. Shapes were checked
    /// on construction.
    pub fn verify_concrete_shift(&self, tol: T) -> bool {
        self.unitarity_residual() <= tol
    }

    /// Defects of `(Ψ_X ⊗ 1_X)(1_M ⊗ Φ_N)(Φ_M ⊗ 1_N) = 1_X ⊗ Ψ_X` on
    /// `X ⊗ M ⊗ N` and of the symmetric equation on `Y ⊗ N ⊗ M`.
    pub fn alignment_residuals(&self) -> Result<AlignmentResiduals<T>> {
        let x = triple_defect(
            self.x_obj.x(),
            self.m_arrow.f(),
            self.n_arrow.f(),
            self.m_arrow.phi(),
            self.n_arrow.phi(),
            &self.psi_x,
        )?;
        let y = triple_defect(
            self.y_obj.x(),
            self.n_arrow.f(),
            self.m_arrow.f(),
            self.n_arrow.phi(),
            self.m_arrow.phi(),
            &self.psi_y,
        )?;
        Ok(AlignmentResiduals { x, y })
    }

    /// Residuals of `Ψ_X` as a 2-arrow `[M ⊗ N, Φ_M ⊙ Φ_N] ⇒ [X^{⊗m}, 1]`
    /// and of `Ψ_Y` as a 2-arrow `[N ⊗ M, Φ_N ⊙ Φ_M] ⇒ [Y^{⊗m}, 1]`.
    pub fn two_arrow_residuals(&self) -> Result<AlignmentResiduals<T>> {
        let mn = compose_one_arrows(&self.m_arrow, &self.n_arrow)?;
        let nm = compose_one_arrows(&self.n_arrow, &self.m_arrow)?;
        let x = two_arrow_residual(&self.psi_x, &mn, &power_arrow(&self.x_obj, self.lag)?)?;
        let y = two_arrow_residual(&self.psi_y, &nm, &power_arrow(&self.y_obj, self.lag)?)?;
        Ok(AlignmentResiduals { x, y })
    }

    /// Both alignment equations hold within `tol`. Errors with a contract
    /// error when the data is not a concrete shift within `tol`.
    pub fn verify_aligned(&self, tol: T) -> Result<bool> {
        self.require_concrete(tol)?;
        Ok(self.alignment_residuals()?.within(tol))
    }

    /// Same predicate, evaluated through the 2-arrow formulation.
    pub fn verify_aligned_via_two_arrows(&self, tol: T) -> Result<bool> {
        self.require_concrete(tol)?;
        Ok(self.two_arrow_residuals()?.within(tol))
    }

    fn require_concrete(&self, tol: T) -> Result<()> {
        let r = self.unitarity_residual();
        if r <= tol {
            Ok(())
        } else {
            Err(contract(format!("not a concrete shift: unitarity defect {r:e} exceeds {tol:e}")))
        }
    }

    /// Swaps the roles of `X` and `Y`, without checks.
    pub fn reversed(&self) -> Self {
        Self {
            x_obj: self.y_obj.clone(),
            y_obj: self.x_obj.clone(),
            m_arrow: self.n_arrow.clone(),
            n_arrow: self.m_arrow.clone(),
            psi_x: self.psi_y.clone(),
            psi_y: self.psi_x.clone(),
            lag: self.lag,
        }
    }

    /// Coherent change of basis by unitaries `u` on `M` and `w` on `N`:
    /// `Φ_M ↦ (u ⊗ 1) Φ_M (1 ⊗ u)*`, `Φ_N ↦ (w ⊗ 1) Φ_N (1 ⊗ w)*`,
    /// `Ψ_X ↦ Ψ_X (u ⊗ w)*`, `Ψ_Y ↦ Ψ_Y (w ⊗ u)*`. Preserves alignment.
    pub fn conjugated(&self, u: &BlockUnitary<T>, w: &BlockUnitary<T>) -> Result<Self> {
        let (m, n) = (self.m_arrow.f(), self.n_arrow.f());
        if u.source() != m || u.target() != m || w.source() != n || w.target() != n {
            return Err(shape("conjugating unitaries must act on M and N"));
        }
        let id_x = BlockUnitary::identity(self.x_obj.x());
        let id_y = BlockUnitary::identity(self.y_obj.x());
        let phi_m = id_x
            .tensor(&u.adjoint())?
            .then(self.m_arrow.phi())?
            .then(&u.tensor(&id_y)?)?;
        let phi_n = id_y
            .tensor(&w.adjoint())?
            .then(self.n_arrow.phi())?
            .then(&w.tensor(&id_x)?)?;
        let psi_x = u.adjoint().tensor(&w.adjoint())?.then(&self.psi_x)?;
        let psi_y = w.adjoint().tensor(&u.adjoint())?.then(&self.psi_y)?;
        Self::new(
            self.x_obj.clone(),
            self.y_obj.clone(),
            self.m_arrow.with_phi(phi_m)?,
            self.n_arrow.with_phi(phi_n)?,
            psi_x,
            psi_y,
            self.lag,
        )
    }

    /// Replaces `Ψ_X` (same endpoints required).
    pub fn with_psi_x(&self, psi_x: BlockUnitary<T>) -> Result<Self> {
        let mut out = self.clone();
        out.psi_x = psi_x;
        Self::new(out.x_obj, out.y_obj, out.m_arrow, out.n_arrow, out.psi_x, out.psi_y, out.lag)
    }

    /// Replaces `Ψ_Y` (same endpoints required).
    pub fn with_psi_y(&self, psi_y: BlockUnitary<T>) -> Result<Self> {
        let mut out = self.clone();
        out.psi_y = psi_y;
        Self::new(out.x_obj, out.y_obj, out.m_arrow, out.n_arrow, out.psi_x, out.psi_y, out.lag)
    }
}

// (Ψ ⊗ 1_X)(1_P ⊗ Φ_Q)(Φ_P ⊗ 1_Q) − 1_X ⊗ Ψ on X ⊗ P ⊗ Q
fn triple_defect<T: Real>(
    x: &GraphCorrespondence,
    p: &GraphCorrespondence,
    q: &GraphCorrespondence,
    phi_p: &BlockUnitary<T>,
    phi_q: &BlockUnitary<T>,
    psi: &BlockUnitary<T>,
) -> Result<T> {
    let id_x = BlockUnitary::identity(x);
    let lhs = phi_p
        .tensor(&BlockUnitary::identity(q))?
        .then(&BlockUnitary::identity(p).tensor(phi_q)?)?
        .then(&psi.tensor(&id_x)?)?;
    let rhs = id_x.tensor(psi)?;
    lhs.distance(&rhs)
}

/// Reverse of a concrete shift; contract error if it is not one within `tol`.
pub fn reverse_shift<T: Real>(d: &AlignedShiftData<T>, tol: T) -> Result<AlignedShiftData<T>> {
    d.require_concrete(tol)?;
    Ok(d.reversed())
}

/// `M = X^{⊗j}`, `N = X^{⊗k}`, lag `j + k`, every map the identity.
pub fn trivial_shift<T: Real>(obj: &ObjectPair, j: usize, k: usize) -> Result<AlignedShiftData<T>> {
    let m = power_arrow(obj, j)?;
    let n = power_arrow(obj, k)?;
    let mn = m.f().tensor(n.f())?;
    let nm = n.f().tensor(m.f())?;
    let target = obj.x().power(j + k)?;
    let psi_x = BlockUnitary::canonical(mn, target.clone())?;
    let psi_y = BlockUnitary::canonical(nm, target)?;
    AlignedShiftData::new(obj.clone(), obj.clone(), m, n, psi_x, psi_y, j + k)
}

/// Optional user-supplied maps for [`build_from_se`]; omitted maps are the
/// canonical basis identifications.
#[derive(Clone, Debug, Default)]
pub struct ShiftOverrides<T: Real> {
    pub phi_m: Option<BlockUnitary<T>>,
    pub phi_n: Option<BlockUnitary<T>>,
    pub psi_x: Option<BlockUnitary<T>>,
    pub psi_y: Option<BlockUnitary<T>>,
}

/// Concrete shift `M = X(R)`, `N = X(S)` from a verified witness.
///
/// Each omitted map sends the `k`-th path of a block to the `k`-th path of
/// the same block on the other side, using the matrix identities of the
/// witness (`AR = RB` for `Φ_M`, `BS = SA` for `Φ_N`, `RS = A^m`,
/// `SR = B^m`). Supplied maps only contribute their blocks, must match those
/// dimensions (shape error) and must be unitary within the default tolerance
/// (domain error).
pub fn build_from_se<E: Exact, T: Real>(
    w: &SeWitness<E>,
    overrides: ShiftOverrides<T>,
) -> Result<AlignedShiftData<T>> {
    if !w.verify()? {
        return Err(contract("witness does not verify"));
    }
    let x_obj = ObjectPair::from_matrix(&w.a)?;
    let y_obj = ObjectPair::from_matrix(&w.b)?;
    let labels = |n| crate::corr::default_labels(n);
    let m = GraphCorrespondence::from_matrix(&w.r, labels(w.a.rows()), labels(w.b.rows()))?;
    let n = GraphCorrespondence::from_matrix(&w.s, labels(w.b.rows()), labels(w.a.rows()))?;
    let lag = w.lag as usize;

    let pick = |given: Option<BlockUnitary<T>>, source: GraphCorrespondence, target: GraphCorrespondence, what: &str| {
        match given {
            None => BlockUnitary::canonical(source, target),
            Some(u) => {
                let u = u.with_endpoints(source, target).map_err(|e| match e {
                    Error::Shape(msg) => shape(format!("{what}: {msg}")),
                    other => other,
                })?;
                let r = u.unitarity_residual();
                if r > T::default_tolerance() {
                    return Err(domain(format!("{what} is not unitary (defect {r:e})")));
                }
                Ok(u)
            }
        }
    };

    let phi_m = pick(overrides.phi_m, x_obj.x().tensor(&m)?, m.tensor(y_obj.x())?, "phi_m")?;
    let phi_n = pick(overrides.phi_n, y_obj.x().tensor(&n)?, n.tensor(x_obj.x())?, "phi_n")?;
    let psi_x = pick(overrides.psi_x, m.tensor(&n)?, x_obj.x().power(lag)?, "psi_x")?;
    let psi_y = pick(overrides.psi_y, n.tensor(&m)?, y_obj.x().power(lag)?, "psi_y")?;
    let m_arrow = OneArrow::new(x_obj.clone(), y_obj.clone(), m, phi_m)?;
    let n_arrow = OneArrow::new(y_obj.clone(), x_obj.clone(), n, phi_n)?;
    AlignedShiftData::new(x_obj, y_obj, m_arrow, n_arrow, psi_x, psi_y, lag)
}

/// Lag `m + n` shift `X ~ Z` from aligned shifts `X ~ Y` (lag `m`) and
/// `Y ~ Z` (lag `n`), with `M = M₁ ⊗ M₂` and `N = N₂ ⊗ N₁`.
///
/// `Ψ'_X = (Ψ_X ⊗ 1)(1_{M₁} ⊗ Φ_{N₁}^{(n)})(1_{M₁} ⊗ Ψ²_X ⊗ 1_{N₁})` where
/// `Ψ²_X : M₂ ⊗ N₂ → Y^{⊗n}` comes from the second shift and `Φ^{(n)}`
/// pushes `Y^{⊗n}` through `N₁`; `Ψ'_Z` is built the same way from
/// `Ψ¹_Y`, `Φ_{M₂}^{(m)}` and `Ψ²_Y`. The result is aligned up to rounding
/// (eight unitary factors per equation).
pub fn compose_shifts<T: Real>(
    d1: &AlignedShiftData<T>,
    d2: &AlignedShiftData<T>,
    tol: T,
) -> Result<AlignedShiftData<T>> {
    if d1.y_obj != d2.x_obj {
        return Err(Error::Composition("second shift does not start where the first ends".into()));
    }
    if !d1.verify_aligned(tol)? || !d2.verify_aligned(tol)? {
        return Err(contract("compose_shifts needs aligned inputs"));
    }
    let (m, n) = (d1.lag, d2.lag);
    let (m1, n1) = (&d1.m_arrow, &d1.n_arrow);
    let (m2, n2) = (&d2.m_arrow, &d2.n_arrow);
    let id = |c: &GraphCorrespondence| BlockUnitary::<T>::identity(c);

    let psi_x = id(m1.f())
        .tensor(&d2.psi_x)?
        .tensor(&id(n1.f()))?
        .then(&id(m1.f()).tensor(&iterated_intertwiner(n1, n)?)?)?
        .then(&d1.psi_x.tensor(&id(&d1.x_obj.x().power(n)?))?)?;
    let psi_z = id(n2.f())
        .tensor(&d1.psi_y)?
        .tensor(&id(m2.f()))?
        .then(&id(n2.f()).tensor(&iterated_intertwiner(m2, m)?)?)?
        .then(&d2.psi_y.tensor(&id(&d2.y_obj.x().power(m)?))?)?;

    AlignedShiftData::new(
        d1.x_obj.clone(),
        d2.y_obj.clone(),
        compose_one_arrows(m1, m2)?,
        compose_one_arrows(n2, n1)?,
        psi_x,
        psi_z,
        m + n,
    )
}
