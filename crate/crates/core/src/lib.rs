//! Shift equivalence of nonnegative integer matrices and the finite
//! bicategory of graph correspondences built on top of it.
//!
//! The crate is split along two scalar axes:
//!
//! * exact integer algebra ([`linalg`], [`shift`], [`invariants`]) is generic
//!   over any [`Exact`] ring element; [`BigInt`] is the production choice and
//!   `i64` works for small inputs;
//! * the correspondence calculus ([`corr`], [`aligned`], [`homotopy`]) is
//!   generic over a [`Real`] scalar, with complex entries `Complex<T>`.
//!
//! Concrete aliases for the common instantiations live at the crate root.

pub mod aligned;
pub mod corr;
pub mod error;
pub mod homotopy;
pub mod invariants;
pub mod json;
pub mod linalg;
pub mod scalar;
pub mod shift;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use scalar::{Exact, Real};

pub use aligned::{AlignedShiftData, AlignmentResiduals, ShiftOverrides};
pub use corr::{BlockUnitary, GraphCorrespondence, ObjectPair, OneArrow};
pub use homotopy::{ArrowHomotopy, HomotopyReport, HomotopyShiftBundle, UnitaryPath};
pub use invariants::{BowenFranks, ComparisonVerdict, DimensionInvariants, Invariant};
pub use linalg::{Matrix, Polynomial, SmithDecomposition};
pub use shift::{SeWitness, SseChain};

/// Arbitrary-precision integer matrix.
pub type IntMatrix = Matrix<BigInt>;
/// Arbitrary-precision integer polynomial.
pub type IntPolynomial = Polynomial<BigInt>;
pub type IntSmithDecomposition = SmithDecomposition<BigInt>;
pub type SEWitness = SeWitness<BigInt>;
pub type SSEChain = SseChain<BigInt>;
pub type IntDimensionInvariants = DimensionInvariants<BigInt>;

/// Double-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;
pub type BlockUnitary64 = BlockUnitary<f64>;
pub type OneArrow64 = OneArrow<f64>;
pub type AlignedShiftData64 = AlignedShiftData<f64>;
pub type UnitaryPath64 = UnitaryPath<f64>;
pub type ArrowHomotopy64 = ArrowHomotopy<f64>;
pub type HomotopyShiftBundle64 = HomotopyShiftBundle<f64>;

/// Default tolerance for unitarity and commutation checks in double precision.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
