//! Shift equivalence witnesses: verification, composition, search and
//! random generation of elementary chains.

mod chain;
mod search;

use std::fmt;

pub use chain::{random_sse_chain, random_sse_chain_capped, SseChain};
pub use search::{search_se, search_se_parallel};

use crate::error::{contract, shape, Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Exact;

/// `(A, B, R, S, m)` claiming `A^m = RS`, `B^m = SR`, `BS = SA`, `AR = RB`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeWitness<T> {
    pub a: Matrix<T>,
    pub b: Matrix<T>,
    pub r: Matrix<T>,
    pub s: Matrix<T>,
    pub lag: u32,
}

/// The four defining equations, in the order they are checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeEquation {
    APowerIsRS,
    BPowerIsSR,
    BSIsSA,
    ARIsRB,
}

impl SeEquation {
    pub const ALL: [SeEquation; 4] = [
        SeEquation::APowerIsRS,
        SeEquation::BPowerIsSR,
        SeEquation::BSIsSA,
        SeEquation::ARIsRB,
    ];
}

impl fmt::Display for SeEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeEquation::APowerIsRS => "A^m = RS",
            SeEquation::BPowerIsSR => "B^m = SR",
            SeEquation::BSIsSA => "BS = SA",
            SeEquation::ARIsRB => "AR = RB",
        })
    }
}

impl<T: Exact> SeWitness<T> {
    pub fn new(a: Matrix<T>, b: Matrix<T>, r: Matrix<T>, s: Matrix<T>, lag: u32) -> Self {
        Self { a, b, r, s, lag }
    }

    /// `(A, A, I, A, 1)`.
    pub fn identity(a: &Matrix<T>) -> Self {
        Self::new(a.clone(), a.clone(), Matrix::identity(a.rows()), a.clone(), 1)
    }

    /// Shape and sign preconditions shared by every operation.
    pub fn check_shapes(&self) -> Result<()> {
        let (v, w) = (self.a.rows(), self.b.rows());
        if !self.a.is_square() || !self.b.is_square() {
            return Err(shape("A and B must be square"));
        }
        if self.r.shape() != (v, w) {
            return Err(shape(format!("R must be {v}x{w}, got {}x{}", self.r.rows(), self.r.cols())));
        }
        if self.s.shape() != (w, v) {
            return Err(shape(format!("S must be {w}x{v}, got {}x{}", self.s.rows(), self.s.cols())));
        }
        if self.lag == 0 {
            return Err(Error::Domain("lag must be at least 1".into()));
        }
        self.a.require_nonnegative("A")?;
        self.b.require_nonnegative("B")?;
        self.r.require_nonnegative("R")?;
        self.s.require_nonnegative("S")?;
        Ok(())
    }

    /// First equation that fails, or `None` when the witness verifies.
    pub fn first_failure(&self) -> Result<Option<SeEquation>> {
        self.check_shapes()?;
        for eq in SeEquation::ALL {
            let holds = match eq {
                SeEquation::APowerIsRS => self.a.pow(self.lag)? == self.r.mul(&self.s)?,
                SeEquation::BPowerIsSR => self.b.pow(self.lag)? == self.s.mul(&self.r)?,
                SeEquation::BSIsSA => self.b.mul(&self.s)? == self.s.mul(&self.a)?,
                SeEquation::ARIsRB => self.a.mul(&self.r)? == self.r.mul(&self.b)?,
            };
            if !holds {
                return Ok(Some(eq));
            }
        }
        Ok(None)
    }

    pub fn verify(&self) -> Result<bool> {
        Ok(self.first_failure()?.is_none())
    }

    pub(crate) fn require_verified(&self, what: &str) -> Result<()> {
        match self.first_failure()? {
            None => Ok(()),
            Some(eq) => Err(contract(format!("{what} is not a shift equivalence: {eq} fails"))),
        }
    }

    /// `(B, A, S, R, m)`.
    pub fn reverse(&self) -> Result<Self> {
        self.require_verified("witness")?;
        Ok(self.reversed_unchecked())
    }

    pub(crate) fn reversed_unchecked(&self) -> Self {
        Self::new(self.b.clone(), self.a.clone(), self.s.clone(), self.r.clone(), self.lag)
    }

    /// `(A, C, R1 R2, S2 S1, m1 + m2)` for witnesses `A ~ B` and `B ~ C`.
    pub fn compose(&self, next: &Self) -> Result<Self> {
        if self.b != next.a {
            return Err(Error::Composition(
                "target matrix of the first witness differs from source of the second".into(),
            ));
        }
        self.require_verified("first witness")?;
        next.require_verified("second witness")?;
        Ok(Self::new(
            self.a.clone(),
            next.b.clone(),
            self.r.mul(&next.r)?,
            next.s.mul(&self.s)?,
            self.lag + next.lag,
        ))
    }
}

pub fn verify_se<T: Exact>(w: &SeWitness<T>) -> Result<bool> {
    w.verify()
}

/// Lag-one verification.
pub fn verify_elementary<T: Exact>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    r: &Matrix<T>,
    s: &Matrix<T>,
) -> Result<bool> {
    SeWitness::new(a.clone(), b.clone(), r.clone(), s.clone(), 1).verify()
}

pub fn compose_se<T: Exact>(w1: &SeWitness<T>, w2: &SeWitness<T>) -> Result<SeWitness<T>> {
    w1.compose(w2)
}

pub fn reverse_se<T: Exact>(w: &SeWitness<T>) -> Result<SeWitness<T>> {
    w.reverse()
}
