//! Compact property suite on fixtures bundled into the binary.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use shiftcalc::aligned::{build_from_se, compose_shifts, trivial_shift, ShiftOverrides};
use shiftcalc::homotopy::{homotopy_shift_equivalence_from_se, verify_homotopy};
use shiftcalc::invariants::{compare, compute_invariants};
use shiftcalc::json;
use shiftcalc::shift::{random_sse_chain_capped, search_se};
use shiftcalc::{AlignedShiftData64, BigInt, BlockUnitary64, ComparisonVerdict, IntMatrix, Invariant, ObjectPair, SEWitness};

use crate::commands::{Context, Outcome};
use crate::io::CliError;
use crate::report::{Exit, RunReport};

const TWO: &str = include_str!("../fixtures/two.json");
const THREE: &str = include_str!("../fixtures/three.json");
const ONE_TWO_TWO_ONE: &str = include_str!("../fixtures/one_two_two_one.json");
const FULL_TWO: &str = include_str!("../fixtures/full_two.json");
const WITNESS: &str = include_str!("../fixtures/witness.json");
const GOLDEN: &str = include_str!("../fixtures/invariants_golden.json");

type Check = fn(&Context, &mut ChaCha8Rng) -> Result<String, String>;

const CHECKS: &[(&str, Check)] = &[
    ("witness_verifies_and_perturbations_fail", witness_checks),
    ("invariants_match_golden", golden_invariants),
    ("compare_separates_fixtures", compare_fixtures),
    ("search_finds_and_exhausts", search_checks),
    ("random_chains_fold_to_witnesses", random_chains),
    ("default_shift_is_aligned", default_shift),
    ("conjugation_preserves_alignment", conjugation),
    ("composed_shifts_are_aligned", composition),
    ("homotopies_verify", homotopies),
    ("json_round_trips", round_trips),
];

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn matrix(text: &str) -> Result<IntMatrix, String> {
    json::parse_matrix(text).map_err(err)
}

fn witness() -> Result<SEWitness, String> {
    json::witness_from_json(&json::parse_text(WITNESS).map_err(err)?).map_err(err)
}

fn witness_checks(_: &Context, _: &mut ChaCha8Rng) -> Result<String, String> {
    let w = witness()?;
    ensure(w.verify().map_err(err)?, || "bundled witness does not verify".into())?;
    let mut refuted = 0;
    for which in 0..2 {
        let (rows, cols) = if which == 0 { w.r.shape() } else { w.s.shape() };
        for i in 0..rows {
            for j in 0..cols {
                let mut bad = w.clone();
                let m = if which == 0 { &mut bad.r } else { &mut bad.s };
                *m.get_mut(i, j) += BigInt::from(1);
                ensure(bad.first_failure().map_err(err)?.is_some(), || format!("perturbation {which}/{i}/{j} verifies"))?;
                refuted += 1;
            }
        }
    }
    ensure(w.reverse().map_err(err)?.verify().map_err(err)?, || "reverse does not verify".into())?;
    Ok(format!("{refuted} perturbations refuted"))
}

fn golden_invariants(_: &Context, _: &mut ChaCha8Rng) -> Result<String, String> {
    let golden = json::parse_text(GOLDEN).map_err(err)?;
    let cases = golden["cases"].as_object().ok_or("golden file has no cases")?;
    for (name, case) in cases {
        let rows: Vec<Vec<BigInt>> = case["matrix"]
            .as_array()
            .ok_or("matrix rows")?
            .iter()
            .map(|r| r.as_array().into_iter().flatten().map(|x| x.to_string().parse::<BigInt>().map_err(err)).collect())
            .collect::<Result<_, _>>()?;
        let a = IntMatrix::from_rows(rows).map_err(err)?;
        let got = json::invariants_to_json(&compute_invariants(&a).map_err(err)?);
        let pairs = [
            (&got["nonzero_char_poly"]["coeffs"], &case["nonzero_char_poly"]),
            (&got["bowen_franks"]["torsion"], &case["bowen_franks"]["torsion"]),
            (&got["bowen_franks"]["free_rank"], &case["bowen_franks"]["free_rank"]),
            (&got["eventual_rank"], &case["eventual_rank"]),
            (&got["det_away_from_zero"], &case["det_away_from_zero"]),
        ];
        for (g, want) in pairs {
            ensure(g == want, || format!("{name}: got {g}, want {want}"))?;
        }
    }
    Ok(format!("{} golden cases", cases.len()))
}

fn compare_fixtures(_: &Context, _: &mut ChaCha8Rng) -> Result<String, String> {
    let (two, three, b) = (matrix(TWO)?, matrix(THREE)?, matrix(ONE_TWO_TWO_ONE)?);
    let v = compare(&two, &three).map_err(err)?;
    ensure(v.separates_by(Invariant::NonzeroCharPoly), || format!("[2] vs [3]: {v:?}"))?;
    let v = compare(&three, &b).map_err(err)?;
    ensure(v.separates_by(Invariant::BowenFranks), || format!("[3] vs [[1,2],[2,1]]: {v:?}"))?;
    let v = compare(&two, &matrix(FULL_TWO)?).map_err(err)?;
    ensure(v == ComparisonVerdict::Inconclusive, || format!("[2] vs [[1,1],[1,1]]: {v:?}"))?;
    Ok("3 pairs".into())
}

fn search_checks(ctx: &Context, _: &mut ChaCha8Rng) -> Result<String, String> {
    let (two, three, full) = (matrix(TWO)?, matrix(THREE)?, matrix(FULL_TWO)?);
    let found = shiftcalc::shift::search_se_parallel(&two, &full, 1, 1, ctx.jobs).map_err(err)?;
    let w = found.ok_or("no witness for [2] ~ [[1,1],[1,1]]")?;
    ensure(w.verify().map_err(err)?, || "found witness does not verify".into())?;
    ensure(search_se(&two, &three, 1, 3).map_err(err)?.is_none(), || "[2] ~ [3] found".into())?;
    Ok("found lag 1 witness; [2], [3] exhausted".into())
}

fn random_chains(_: &Context, rng: &mut ChaCha8Rng) -> Result<String, String> {
    use rand_chacha::rand_core::RngCore;
    let starts = [matrix(ONE_TWO_TWO_ONE)?, matrix(FULL_TWO)?, matrix(TWO)?];
    let mut count = 0;
    for a in &starts {
        for _ in 0..5 {
            let seed = rng.next_u64();
            let chain = random_sse_chain_capped(a, 3, seed, 4).map_err(err)?;
            ensure(chain.validate().map_err(err)?, || format!("seed {seed}: chain invalid"))?;
            let w = chain.fold().map_err(err)?.ok_or("empty chain")?;
            ensure(w.verify().map_err(err)?, || format!("seed {seed}: folded witness fails"))?;
            let v = compare(&w.a, &w.b).map_err(err)?;
            ensure(v == ComparisonVerdict::Inconclusive, || format!("seed {seed}: invariants differ: {v:?}"))?;
            let back = w.compose(&w.reverse().map_err(err)?).map_err(err)?;
            ensure(back.verify().map_err(err)?, || format!("seed {seed}: w then reverse fails"))?;
            count += 1;
        }
    }
    Ok(format!("{count} chains"))
}

fn default_shift(ctx: &Context, _: &mut ChaCha8Rng) -> Result<String, String> {
    let d: AlignedShiftData64 = build_from_se(&witness()?, ShiftOverrides::default()).map_err(err)?;
    ensure(d.verify_concrete_shift(ctx.tol), || "maps not unitary".into())?;
    ensure(d.verify_aligned(ctx.tol).map_err(err)?, || "not aligned".into())?;
    ensure(d.verify_aligned_via_two_arrows(ctx.tol).map_err(err)?, || "2-arrow route disagrees".into())?;
    ensure(d.reversed().verify_aligned(ctx.tol).map_err(err)?, || "reverse not aligned".into())?;
    Ok(format!("residual {:.2e}", d.alignment_residuals().map_err(err)?.max()))
}

fn conjugated_trivial(obj: &ObjectPair, j: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<AlignedShiftData64, String> {
    let d: AlignedShiftData64 = trivial_shift(obj, j, k).map_err(err)?;
    let m = d.m_arrow().f().clone();
    let n = d.n_arrow().f().clone();
    let u = BlockUnitary64::random(m.clone(), m, rng).map_err(err)?;
    let w = BlockUnitary64::random(n.clone(), n, rng).map_err(err)?;
    d.conjugated(&u, &w).map_err(err)
}

fn objects() -> Result<Vec<ObjectPair>, String> {
    [TWO, FULL_TWO, ONE_TWO_TWO_ONE]
        .into_iter()
        .map(|t| ObjectPair::from_matrix(&matrix(t)?).map_err(err))
        .collect()
}

fn conjugation(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut worst = 0.0f64;
    for obj in objects()? {
        let d = conjugated_trivial(&obj, 1, 1, rng)?;
        let r = d.alignment_residuals().map_err(err)?.max();
        worst = worst.max(r);
        ensure(d.verify_aligned(ctx.tol).map_err(err)?, || format!("conjugated shift misaligned ({r:e})"))?;
        let psi = BlockUnitary64::random(d.psi_x().source().clone(), d.psi_x().target().clone(), rng).map_err(err)?;
        let bad = d.with_psi_x(psi).map_err(err)?;
        ensure(!bad.verify_aligned(ctx.tol).map_err(err)?, || "random psi_x still aligned".into())?;
        ensure(!bad.verify_aligned_via_two_arrows(ctx.tol).map_err(err)?, || "2-arrow route accepts random psi_x".into())?;
    }
    Ok(format!("max residual {worst:.2e}"))
}

fn composition(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut worst = 0.0f64;
    for obj in objects()? {
        let d1 = conjugated_trivial(&obj, 1, 0, rng)?;
        let d2 = conjugated_trivial(&obj, 0, 1, rng)?;
        let c = compose_shifts(&d1, &d2, ctx.tol).map_err(err)?;
        ensure(c.lag() == 2, || format!("lag {}", c.lag()))?;
        let r = c.alignment_residuals().map_err(err)?.max();
        worst = worst.max(r);
        ensure(c.verify_aligned(8.0 * ctx.tol).map_err(err)?, || format!("composite misaligned ({r:e})"))?;
    }
    Ok(format!("max residual {worst:.2e}"))
}

fn homotopies(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let bundle = homotopy_shift_equivalence_from_se::<BigInt, f64>(&witness()?, 16).map_err(err)?;
    for (side, h) in [("X", &bundle.x_homotopy), ("Y", &bundle.y_homotopy)] {
        let r = verify_homotopy(h, ctx.tol);
        ensure(r.ok, || format!("{side}: {:?}", r.first_failure))?;
        let bad_u = BlockUnitary64::random(h.path.source().source().clone(), h.path.source().target().clone(), rng)
            .map_err(err)?;
        let mut bad = h.clone();
        bad.path = h.path.with_sample(5, bad_u).map_err(err)?;
        ensure(!verify_homotopy(&bad, ctx.tol).ok, || format!("{side}: corrupted sample accepted"))?;
    }
    Ok("both sides verify; corrupted samples rejected".into())
}

fn round_trips(_: &Context, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let obj = objects()?.remove(1);
    let d = conjugated_trivial(&obj, 1, 1, rng)?;
    let text = json::to_pretty(&json::shift_to_json(&d));
    let back: AlignedShiftData64 = json::shift_from_json(&json::parse_text(&text).map_err(err)?).map_err(err)?;
    ensure(back == d, || "shift changed in a round trip".into())?;
    let w = witness()?;
    let back: SEWitness = json::witness_from_json(&json::witness_to_json(&w)).map_err(err)?;
    ensure(back == w, || "witness changed in a round trip".into())?;
    Ok("shift and witness".into())
}

pub fn run(ctx: &Context, seed: u64) -> Result<Outcome, CliError> {
    let mut report = RunReport::new("selftest");
    report.tolerance(ctx.tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::new();
    let mut failed = 0;
    for (name, check) in CHECKS {
        let started = std::time::Instant::now();
        let outcome = check(ctx, &mut rng);
        if ctx.verbose {
            let mark = if outcome.is_ok() { "PASS" } else { "FAIL" };
            eprintln!("{mark} {name} ({:?})", started.elapsed());
        }
        let entry = match outcome {
            Ok(detail) => json!({ "name": name, "ok": true, "detail": detail }),
            Err(detail) => {
                failed += 1;
                json!({ "name": name, "ok": false, "detail": detail })
            }
        };
        results.push(entry);
    }
    report.set("seed", json!(seed));
    report.set("passed", json!(CHECKS.len() - failed));
    report.set("failed", json!(failed));
    report.set("checks", Value::Array(results));
    let summary = format!("{} of {} checks passed", CHECKS.len() - failed, CHECKS.len());
    Ok(Outcome { report, exit: if failed == 0 { Exit::Ok } else { Exit::Negative }, summary })
}
