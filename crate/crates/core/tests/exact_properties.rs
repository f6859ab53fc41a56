//! Property tests for the exact layer: linear algebra, witnesses, invariants.

mod common;

use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use shiftcalc::invariants::{bowen_franks_general, compare, compute_invariants};
use shiftcalc::linalg::{char_poly, determinant, mat_pow, rank, smith_normal_form, Matrix, Polynomial};
use shiftcalc::shift::{random_sse_chain_capped, SeWitness};

fn square(max_size: usize, max: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_size).prop_flat_map(move |n| prop::collection::vec(prop::collection::vec(0..=max, n), n))
}

fn essential_square(max_size: usize, max: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    square(max_size, max).prop_filter("essential", |rows| essential(rows))
}

fn signed_rect() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=4usize, 1..=4usize)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

fn permutation_of(n: usize, seed: u64) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut s = seed;
    for i in (1..n).rev() {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        p.swap(i, (s >> 33) as usize % (i + 1));
    }
    p
}

fn conjugate_by(rows: &[Vec<i64>], perm: &[usize]) -> Vec<Vec<i64>> {
    let n = rows.len();
    (0..n).map(|i| (0..n).map(|j| rows[perm[i]][perm[j]]).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn powers_add(rows in square(3, 3), m in 0u32..4, n in 0u32..4) {
        let a = to_matrix(&rows);
        let lhs = mat_pow(&a, m + n).unwrap();
        let rhs = mat_pow(&a, m).unwrap().mul(&mat_pow(&a, n).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn char_poly_of_transpose(rows in square(4, 3)) {
        let a = to_matrix(&rows);
        prop_assert_eq!(char_poly(&a).unwrap(), char_poly(&a.transpose()).unwrap());
        // constant term is (-1)^n det A
        let n = rows.len();
        let det = determinant(&a).unwrap();
        let expected = if n % 2 == 0 { det } else { -det };
        prop_assert_eq!(char_poly(&a).unwrap().constant_term(), expected);
    }

    #[test]
    fn smith_form_certificate(rows in signed_rect()) {
        let m = to_matrix(&rows);
        let snf = smith_normal_form(&m);
        let d = snf.left.mul(&m).unwrap().mul(&snf.right).unwrap();
        prop_assert_eq!(&d, &snf.diagonal_matrix());
        prop_assert_eq!(determinant(&snf.left).unwrap().magnitude().clone(), 1u32.into());
        prop_assert_eq!(determinant(&snf.right).unwrap().magnitude().clone(), 1u32.into());
        let nonzero: Vec<&BigInt> = snf.diag.iter().filter(|x| **x != BigInt::from(0)).collect();
        prop_assert_eq!(nonzero.len(), rank(&m));
        for pair in nonzero.windows(2) {
            prop_assert_eq!(pair[1] % pair[0], BigInt::from(0));
        }
    }

    #[test]
    fn smith_factors_ignore_permutations(rows in signed_rect(), seed in any::<u64>()) {
        let m = to_matrix(&rows);
        let rp = permutation_of(m.rows(), seed);
        let cp = permutation_of(m.cols(), seed ^ 0x9e37);
        let permuted = Matrix::from_fn(m.rows(), m.cols(), |i, j| m.get(rp[i], cp[j]).clone());
        prop_assert_eq!(smith_normal_form(&m).diag, smith_normal_form(&permuted).diag);
    }

    #[test]
    fn eventual_rank_of_transpose(rows in essential_square(4, 2)) {
        let a = to_matrix(&rows);
        let ia = compute_invariants(&a).unwrap();
        let it = compute_invariants(&a.transpose()).unwrap();
        prop_assert_eq!(ia.eventual_rank, it.eventual_rank);
    }

    #[test]
    fn invariants_ignore_relabeling(rows in essential_square(4, 3), seed in any::<u64>()) {
        let perm = permutation_of(rows.len(), seed);
        let a = to_matrix(&rows);
        let b = to_matrix(&conjugate_by(&rows, &perm));
        prop_assert_eq!(compute_invariants(&a).unwrap(), compute_invariants(&b).unwrap());
    }

    #[test]
    fn reverse_and_compose_preserve_validity(rows in essential_square(3, 2), seed in 0u64..10_000) {
        let a = to_matrix(&rows);
        let chain = random_sse_chain_capped(&a, 3, seed, 4).unwrap();
        prop_assert!(chain.validate().unwrap());
        for step in &chain.steps {
            prop_assert!(step.verify().unwrap());
            prop_assert!(step.reverse().unwrap().verify().unwrap());
        }
        let folded = chain.fold().unwrap().unwrap();
        prop_assert!(folded.verify().unwrap());
        prop_assert_eq!(folded.lag as usize, chain.len());
        let back = folded.reverse().unwrap();
        let round = folded.compose(&back).unwrap();
        prop_assert!(round.verify().unwrap());
        prop_assert_eq!(&round.a, &round.b);
    }

    #[test]
    fn invariants_agree_along_chains(rows in essential_square(3, 3), seed in 0u64..10_000) {
        let a = to_matrix(&rows);
        let chain = random_sse_chain_capped(&a, 4, seed, 4).unwrap();
        let w = chain.fold().unwrap().unwrap();
        prop_assert!(!compare(&w.a, &w.b).unwrap().is_distinguished());
        for p in [[1i64, -1, 0], [1, 1, 0], [1, 0, -1], [-1, 2, 1]] {
            let p: Polynomial<BigInt> = Polynomial::from_i64(&p);
            prop_assert_eq!(bowen_franks_general(&w.a, &p).unwrap(), bowen_franks_general(&w.b, &p).unwrap());
        }
    }

    #[test]
    fn identity_witness_verifies(rows in square(4, 5)) {
        let a = to_matrix(&rows);
        prop_assert!(SeWitness::identity(&a).verify().unwrap());
    }
}

#[test]
fn non_square_and_negative_inputs() {
    let a = big(&[&[1, 2]]);
    assert!(compute_invariants(&a).is_err());
    assert!(compute_invariants(&big(&[&[1, -1], &[1, 1]])).is_err());
    assert!(compute_invariants(&big(&[&[0, 0], &[1, 1]])).is_err());
    assert!(bowen_franks_general(&big(&[&[2]]), &Polynomial::from_i64(&[2, 1])).is_err());
}
