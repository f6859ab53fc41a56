//! Property tests for correspondences, arrows, aligned shifts and homotopies.

mod common;

use common::*;
use proptest::prelude::*;
use shiftcalc::aligned::{build_from_se, compose_shifts, reverse_shift, trivial_shift, ShiftOverrides};
use shiftcalc::corr::{compose_one_arrows, iterated_intertwiner, power_arrow, two_arrow_residual, BlockUnitary, GraphCorrespondence};
use shiftcalc::homotopy::{connect_unitaries, constant_homotopy, homotopy_to_identity, verify_homotopy, HomotopyFailure};
use shiftcalc::json;
use shiftcalc::{AlignedShiftData64, SEWitness};

const TAU: f64 = 1e-9;

fn rect(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(0i64..=3, cols), rows)
}

type Rows = Vec<Vec<i64>>;

fn chain3() -> impl Strategy<Value = (Rows, Rows, Rows)> {
    (1..=3usize, 1..=3usize, 1..=3usize, 1..=3usize)
        .prop_flat_map(|(p, q, r, s)| (rect(p, q), rect(q, r), rect(r, s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tensor_matches_path_count((r, s, _) in chain3()) {
        let x = GraphCorrespondence::from_matrix_default(&to_matrix(&r)).unwrap();
        let y = GraphCorrespondence::from_matrix_default(&to_matrix(&s)).unwrap();
        let xy = x.tensor(&y).unwrap();
        let counts = path_counts(&r, &s);
        for (v, row) in counts.iter().enumerate() {
            for (w, &c) in row.iter().enumerate() {
                prop_assert_eq!(xy.block_dim(v, w), c);
                let basis = xy.block_basis(v, w);
                prop_assert_eq!(basis.len(), c);
                prop_assert!(basis.iter().all(|p| p.source() == v && p.target() == w));
            }
        }
        prop_assert!(xy.basis_is_consistent());
    }

    #[test]
    fn associator_is_identity((r, s, t) in chain3()) {
        let x = GraphCorrespondence::from_matrix_default(&to_matrix(&r)).unwrap();
        let y = GraphCorrespondence::from_matrix_default(&to_matrix(&s)).unwrap();
        let z = GraphCorrespondence::from_matrix_default(&to_matrix(&t)).unwrap();
        let left = x.tensor(&y).unwrap().tensor(&z).unwrap();
        let right = x.tensor(&y.tensor(&z).unwrap()).unwrap();
        prop_assert_eq!(left.basis(), right.basis());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn arrow_composition_is_associative(seed in any::<u64>()) {
        let mut rng = rng(seed);
        // f ∘ g ∘ f with f : (RS) ← (SR) and g : (SR) ← (RS)
        let (g, f) = random_arrow_pair(&mut rng, 2, 2);
        let left = compose_one_arrows(&compose_one_arrows(&f, &g).unwrap(), &f).unwrap();
        let right = compose_one_arrows(&f, &compose_one_arrows(&g, &f).unwrap()).unwrap();
        prop_assert_eq!(left.f(), right.f());
        prop_assert!(left.phi().distance(right.phi()).unwrap() < 1e-12);
    }

    #[test]
    fn iterated_intertwiners_are_two_arrows(seed in any::<u64>(), n in 0usize..3) {
        let mut rng = rng(seed);
        let f = random_arrow(&mut rng, 2, 1);
        let psi = iterated_intertwiner(&f, n).unwrap();
        let lhs = compose_one_arrows(&power_arrow(f.to(), n).unwrap(), &f).unwrap();
        let rhs = compose_one_arrows(&f, &power_arrow(f.from(), n).unwrap()).unwrap();
        prop_assert!(two_arrow_residual(&psi, &lhs, &rhs).unwrap() < TAU);
    }

    #[test]
    fn reverse_preserves_alignment(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let obj = small_object(&mut rng);
        let d = random_aligned_shift(&obj, &mut rng);
        prop_assert!(d.verify_aligned(TAU).unwrap());
        let r = reverse_shift(&d, TAU).unwrap();
        prop_assert!(r.verify_aligned(TAU).unwrap());
        prop_assert_eq!(r.reversed(), d);
    }

    #[test]
    fn compose_with_reverse_is_aligned(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let obj = small_object(&mut rng);
        let d = random_aligned_shift(&obj, &mut rng);
        let c = compose_shifts(&d, &d.reversed(), TAU).unwrap();
        prop_assert_eq!(c.lag(), 2 * d.lag());
        prop_assert!(c.verify_aligned(8.0 * TAU).unwrap());
        prop_assert!(c.verify_aligned_via_two_arrows(8.0 * TAU).unwrap());
    }

    #[test]
    fn homotopy_is_an_equivalence(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let obj = small_object(&mut rng);
        let f = obj.x().power(1).unwrap();
        let src = obj.x().tensor(&f).unwrap();
        let tgt = f.tensor(obj.x()).unwrap();
        let phi1 = BlockUnitary::random(src.clone(), tgt.clone(), &mut rng).unwrap();
        let phi2 = BlockUnitary::random(src, tgt, &mut rng).unwrap();
        let h1 = homotopy_to_identity(&phi1, &obj, 1, 6).unwrap();
        let h2 = homotopy_to_identity(&phi2, &obj, 1, 6).unwrap();
        prop_assert!(verify_homotopy(&constant_homotopy(&h1.g_arrow, 3).unwrap(), TAU).ok);
        let back = h1.reversed();
        prop_assert!(verify_homotopy(&back, TAU).ok);
        let joined = back.concatenated(&h2, 9).unwrap();
        let report = verify_homotopy(&joined, TAU);
        prop_assert!(report.ok, "{:?}", report);
        prop_assert_eq!(&joined.f_arrow, &h1.g_arrow);
        prop_assert_eq!(&joined.g_arrow, &h2.g_arrow);
    }

    #[test]
    fn geodesic_endpoints(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = rng(seed);
        let x = GraphCorrespondence::from_matrix_default(&big(&[&[d as i64, 1], &[1, 1]])).unwrap();
        let u0 = BlockUnitary::<f64>::random(x.clone(), x.clone(), &mut rng).unwrap();
        let u1 = BlockUnitary::<f64>::random(x.clone(), x, &mut rng).unwrap();
        let path = connect_unitaries(&u0, &u1, 7).unwrap();
        prop_assert!(path.source().distance(&u0).unwrap() < 1e-10);
        prop_assert!(path.target().distance(&u1).unwrap() < 1e-10);
        prop_assert!(path.samples().iter().all(|(_, u)| u.unitarity_residual() < 1e-10));
        let rev = path.reversed();
        prop_assert!(rev.at(0.25).distance(&path.at(0.75)).unwrap() < 1e-10);
    }
}

#[test]
fn corrupted_sample_is_named() {
    let mut rng = rng(99);
    let obj = small_object(&mut rng);
    let f = obj.x().clone();
    let phi = BlockUnitary::random(obj.x().tensor(&f).unwrap(), f.tensor(obj.x()).unwrap(), &mut rng).unwrap();
    let h = homotopy_to_identity(&phi, &obj, 1, 8).unwrap();
    let moved = h.path.samples()[5].1.map_blocks(|_, _, b| b.map(|z| z * 0.5)).unwrap();
    let mut broken = h.clone();
    broken.path = h.path.with_sample(5, moved).unwrap();
    let report = verify_homotopy(&broken, TAU);
    assert!(!report.ok);
    assert!(matches!(report.first_failure, Some(HomotopyFailure::SampleNotUnitary { index: 5, .. })));
}

#[test]
fn trivial_compositions() {
    let obj = shiftcalc::ObjectPair::from_matrix(&big(&[&[1, 1], &[1, 0]])).unwrap();
    let t: AlignedShiftData64 = trivial_shift(&obj, 1, 0).unwrap();
    let c = compose_shifts(&t, &t, TAU).unwrap();
    assert_eq!(c.lag(), 2);
    assert!(c.verify_aligned(TAU).unwrap());
    assert_eq!(c.m_arrow().f(), &obj.x().power(2).unwrap());
}

#[test]
fn json_round_trips() {
    let w: SEWitness = shiftcalc::SeWitness::new(big(&[&[2]]), big(&[&[1, 1], &[1, 1]]), big(&[&[1, 1]]), big(&[&[1], &[1]]), 1);
    let d: AlignedShiftData64 = build_from_se(&w, ShiftOverrides::default()).unwrap();
    let text = json::to_pretty(&json::shift_to_json(&d));
    let back: AlignedShiftData64 = json::shift_from_json(&json::parse_text(&text).unwrap()).unwrap();
    assert_eq!(back, d);
    let mut rng = rng(3);
    let f = random_arrow(&mut rng, 2, 2);
    let back = json::one_arrow_from_json::<f64>(&json::one_arrow_to_json(&f), "f").unwrap();
    assert_eq!(back, f);
}
