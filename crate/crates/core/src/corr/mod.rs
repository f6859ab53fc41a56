//! Graph correspondences over finite-dimensional commutative C*-algebras,
//! block unitaries between them, and the 1- and 2-arrows built from those.

pub mod arrow;
pub mod correspondence;
pub mod unitary;

pub use arrow::{
    compose_one_arrows, identity_arrow, induced_two_arrow, iterated_intertwiner, power_arrow,
    two_arrow_residual, check_two_arrow, OneArrow,
};
pub use correspondence::{default_labels, BasisPath, Edge, GraphCorrespondence, ObjectPair};
pub use unitary::{op_norm, random_unitary, BlockUnitary, CMatrix};
