//! Computable shift-equivalence invariants.
//!
//! These are the finite shadows of the dimension triple: the part of the
//! characteristic polynomial away from zero, the Bowen–Franks group
//! `coker(I - A)`, the eventual rank and the product of nonzero eigenvalues.
//! Equal invariants never prove shift equivalence, so comparison only ever
//! refutes.

use std::fmt;

use crate::error::{domain, shape, Result};
use crate::linalg::{char_poly, rank, smith_normal_form, Matrix, Polynomial};
use crate::scalar::Exact;

/// Finitely generated abelian group `Z^free_rank ⊕ ⊕ Z/d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BowenFranks<T> {
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<T>,
    pub free_rank: usize,
}

impl<T: Exact> BowenFranks<T> {
    /// Cokernel of a square integer matrix.
    pub fn cokernel(m: &Matrix<T>) -> Self {
        let snf = smith_normal_form(m);
        Self {
            torsion: snf.diag.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect(),
            free_rank: snf.zero_count() + m.rows().saturating_sub(m.cols()),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }
}

impl<T: Exact> fmt::Display for BowenFranks<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            k => parts.push(format!("Z^{k}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionInvariants<T> {
    /// `det(tI - A)` with every factor of `t` removed.
    pub nonzero_char_poly: Polynomial<T>,
    /// `coker(I - A)`.
    pub bowen_franks: BowenFranks<T>,
    /// Rank of `A^n` over the rationals, `n` the size of `A`.
    pub eventual_rank: usize,
    /// Product of the nonzero eigenvalues with multiplicity.
    pub det_away_from_zero: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Invariant {
    NonzeroCharPoly,
    BowenFranks,
    EventualRank,
    DetAwayFromZero,
}

impl Invariant {
    pub fn name(self) -> &'static str {
        match self {
            Invariant::NonzeroCharPoly => "nonzero_char_poly",
            Invariant::BowenFranks => "bowen_franks",
            Invariant::EventualRank => "eventual_rank",
            Invariant::DetAwayFromZero => "det_away_from_zero",
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of [`compare`]. `Distinguished` lists every separating
/// invariant in declaration order of [`Invariant`], never empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComparisonVerdict {
    Distinguished(Vec<Invariant>),
    Inconclusive,
}

impl ComparisonVerdict {
    pub fn is_distinguished(&self) -> bool {
        matches!(self, ComparisonVerdict::Distinguished(_))
    }

    pub fn separates_by(&self, inv: Invariant) -> bool {
        match self {
            ComparisonVerdict::Distinguished(list) => list.contains(&inv),
            ComparisonVerdict::Inconclusive => false,
        }
    }
}

fn require_essential<T: Exact>(a: &Matrix<T>) -> Result<()> {
    if !a.is_essential()? {
        return Err(domain("invariants are defined for essential matrices"));
    }
    Ok(())
}

pub fn compute_invariants<T: Exact>(a: &Matrix<T>) -> Result<DimensionInvariants<T>> {
    require_essential(a)?;
    let n = a.rows();
    let nonzero_char_poly = char_poly(a)?.strip_t_factors();
    let degree = nonzero_char_poly.degree().unwrap_or(0);
    let c0 = nonzero_char_poly.constant_term();
    let det_away_from_zero = if degree % 2 == 0 { c0 } else { -c0 };
    let i_minus_a = Matrix::<T>::identity(n).sub(a)?;
    Ok(DimensionInvariants {
        nonzero_char_poly,
        bowen_franks: BowenFranks::cokernel(&i_minus_a),
        eventual_rank: rank(&a.pow(n as u32)?),
        det_away_from_zero,
    })
}

pub fn compare<T: Exact>(a: &Matrix<T>, b: &Matrix<T>) -> Result<ComparisonVerdict> {
    let ia = compute_invariants(a)?;
    let ib = compute_invariants(b)?;
    let mut separating = Vec::new();
    if ia.nonzero_char_poly != ib.nonzero_char_poly {
        separating.push(Invariant::NonzeroCharPoly);
    }
    if ia.bowen_franks != ib.bowen_franks {
        separating.push(Invariant::BowenFranks);
    }
    if ia.eventual_rank != ib.eventual_rank {
        separating.push(Invariant::EventualRank);
    }
    if ia.det_away_from_zero != ib.det_away_from_zero {
        separating.push(Invariant::DetAwayFromZero);
    }
    Ok(if separating.is_empty() {
        ComparisonVerdict::Inconclusive
    } else {
        ComparisonVerdict::Distinguished(separating)
    })
}

/// `coker(p(A))`, a shift-equivalence invariant whenever `p(0) = ±1`.
pub fn bowen_franks_general<T: Exact>(a: &Matrix<T>, p: &Polynomial<T>) -> Result<BowenFranks<T>> {
    if !a.is_square() {
        return Err(shape("generalized Bowen–Franks group of a non-square matrix"));
    }
    if !p.constant_term().abs().is_one() {
        return Err(domain(format!("p(0) must be 1 or -1, got {}", p.constant_term())));
    }
    Ok(BowenFranks::cokernel(&p.eval_matrix(a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_matrix;
    use num_bigint::BigInt;

    type M = Matrix<BigInt>;

    fn m(rows: &[&[i64]]) -> M {
        int_matrix(rows)
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn full_shift_on_two() {
        let inv = compute_invariants(&m(&[&[2]])).unwrap();
        assert_eq!(inv.nonzero_char_poly, Polynomial::from_i64(&[-2, 1]));
        assert!(inv.bowen_franks.is_trivial());
        assert_eq!(inv.eventual_rank, 1);
        assert_eq!(inv.det_away_from_zero, big(2));
    }

    #[test]
    fn full_shift_on_three() {
        let inv = compute_invariants(&m(&[&[3]])).unwrap();
        assert_eq!(inv.nonzero_char_poly, Polynomial::from_i64(&[-3, 1]));
        assert_eq!(inv.bowen_franks, BowenFranks { torsion: vec![big(2)], free_rank: 0 });
        assert_eq!(inv.bowen_franks.to_string(), "Z/2");
    }

    #[test]
    fn all_ones_two_by_two() {
        let inv = compute_invariants(&m(&[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(inv.nonzero_char_poly, Polynomial::from_i64(&[-2, 1]));
        assert!(inv.bowen_franks.is_trivial());
        assert_eq!(inv.eventual_rank, 1);
    }

    #[test]
    fn comparisons() {
        let v = compare(&m(&[&[2]]), &m(&[&[3]])).unwrap();
        assert!(v.separates_by(Invariant::NonzeroCharPoly));
        assert_eq!(
            compare(&m(&[&[2]]), &m(&[&[1, 1], &[1, 1]])).unwrap(),
            ComparisonVerdict::Inconclusive
        );
        let a = m(&[&[1, 1], &[1, 0]]);
        assert_eq!(compare(&a, &a).unwrap(), ComparisonVerdict::Inconclusive);
    }

    #[test]
    fn identity_has_free_bowen_franks() {
        // I - I = 0, so the cokernel is Z^2
        let inv = compute_invariants(&m(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(inv.bowen_franks, BowenFranks { torsion: vec![], free_rank: 2 });
    }

    #[test]
    fn generalized_groups() {
        let one_minus_t = Polynomial::from_i64(&[1, -1]);
        assert_eq!(
            bowen_franks_general(&m(&[&[3]]), &one_minus_t).unwrap().torsion,
            vec![big(2)]
        );
        assert!(bowen_franks_general(&m(&[&[5, 2], &[1, 7]]), &Polynomial::from_i64(&[1]))
            .unwrap()
            .is_trivial());
        // det(I - A) = -1 for the golden mean shift
        assert!(bowen_franks_general(&m(&[&[1, 1], &[1, 0]]), &one_minus_t).unwrap().is_trivial());
        assert!(matches!(
            bowen_franks_general(&m(&[&[3]]), &Polynomial::from_i64(&[2, -1])),
            Err(crate::Error::Domain(_))
        ));
    }

    #[test]
    fn rejects_inessential() {
        assert!(matches!(
            compute_invariants(&m(&[&[1, 0], &[1, 0]])),
            Err(crate::Error::Domain(_))
        ));
    }
}
