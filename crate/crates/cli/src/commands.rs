use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value};
use shiftcalc::aligned::{build_from_se, ShiftOverrides};
use shiftcalc::corr::{check_two_arrow, two_arrow_residual};
use shiftcalc::homotopy::{homotopy_shift_equivalence_from_se, verify_homotopy};
use shiftcalc::invariants::{compare as compare_invariants, compute_invariants};
use shiftcalc::json;
use shiftcalc::shift::search_se_parallel;
use shiftcalc::{AlignedShiftData64, BlockUnitary64, ComparisonVerdict, HomotopyReport, HomotopyShiftBundle64, OneArrow64, SEWitness};

use crate::io::{self, in_file, CliError};
use crate::report::{Exit, RunReport};
use crate::GlobalOpts;

pub const TOL_ENV: &str = "SHIFTCALC_TOL";

/// Settings shared by every subcommand.
#[derive(Debug)]
pub struct Context {
    pub tol: f64,
    pub jobs: usize,
    pub verbose: bool,
    started: Instant,
}

/// Result of a subcommand that ran to completion.
#[derive(Debug)]
pub struct Outcome {
    pub report: RunReport,
    pub exit: Exit,
    /// One line for `--verbose`.
    pub summary: String,
}

impl Context {
    pub fn new(opts: &GlobalOpts) -> Result<Self, String> {
        let tol = match opts.tol {
            Some(t) => t,
            None => match std::env::var(TOL_ENV) {
                Ok(text) => text.trim().parse::<f64>().map_err(|_| format!("{TOL_ENV}={text:?} is not a number"))?,
                Err(_) => shiftcalc::DEFAULT_TOLERANCE,
            },
        };
        if !(tol.is_finite() && tol > 0.0) {
            return Err(format!("tolerance must be positive and finite, got {tol}"));
        }
        Ok(Self { tol, jobs: opts.jobs as usize, verbose: opts.verbose, started: Instant::now() })
    }

    /// Prints the report to stdout and maps the outcome to an exit status.
    pub fn finish(&self, outcome: Result<Outcome, CliError>) -> Exit {
        match outcome {
            Ok(out) => {
                print!("{}", json::to_pretty(&out.report.to_json()));
                if self.verbose {
                    eprintln!("{}", out.summary);
                    eprintln!("elapsed: {:?}", self.started.elapsed());
                }
                out.exit
            }
            Err(e) => {
                eprintln!("shiftcalc: {e}");
                Exit::Data
            }
        }
    }
}

fn num(x: f64) -> Value {
    json!(x)
}

pub enum WitnessSource {
    File(PathBuf),
    Parts { a: PathBuf, b: PathBuf, r: PathBuf, s: PathBuf, lag: u32 },
}

fn load_witness(source: &WitnessSource, report: &mut RunReport) -> Result<SEWitness, CliError> {
    match source {
        WitnessSource::File(path) => io::read_witness(path, report),
        WitnessSource::Parts { a, b, r, s, lag } => {
            let a = io::parse_matrix_file(a, "a", report)?;
            let b = io::parse_matrix_file(b, "b", report)?;
            let r = io::parse_matrix_file(r, "r", report)?;
            let s = io::parse_matrix_file(s, "s", report)?;
            Ok(SEWitness::new(a, b, r, s, *lag))
        }
    }
}

pub fn verify_se(_ctx: &Context, source: &WitnessSource) -> Result<Outcome, CliError> {
    let mut report = RunReport::new("verify-se");
    let w = load_witness(source, &mut report)?;
    let failure = w.first_failure()?;
    report.set("lag", json!(w.lag));
    report.set("verified", json!(failure.is_none()));
    report.set("first_failure", failure.map_or(Value::Null, |eq| json!(eq.to_string())));
    let (exit, summary) = match failure {
        None => (Exit::Ok, "verified: all four equations hold".to_string()),
        Some(eq) => {
            eprintln!("refuted: {eq} fails");
            (Exit::Negative, format!("refuted: {eq} fails"))
        }
    };
    Ok(Outcome { report, exit, summary })
}

pub fn search_se(
    ctx: &Context,
    a: &Path,
    b: &Path,
    lag: u32,
    bound: u64,
    out: Option<&Path>,
) -> Result<Outcome, CliError> {
    let mut report = RunReport::new("search-se");
    let a = io::parse_matrix_file(a, "a", &mut report)?;
    let b = io::parse_matrix_file(b, "b", &mut report)?;
    let found = search_se_parallel(&a, &b, lag, bound, ctx.jobs)?;
    report.set("lag", json!(lag));
    report.set("bound", json!(bound));
    report.set("found", json!(found.is_some()));
    let Some(w) = found else {
        report.set("witness", Value::Null);
        let summary = format!("no witness of lag {lag} with entries in [0, {bound}]");
        return Ok(Outcome { report, exit: Exit::Negative, summary });
    };
    let doc = json::witness_to_json(&w);
    match out {
        Some(path) => io::write_json(path, &doc, &mut report)?,
        None => report.set("witness", doc),
    }
    Ok(Outcome { report, exit: Exit::Ok, summary: format!("found a witness of lag {lag}") })
}

pub fn invariants(_ctx: &Context, a: &Path) -> Result<Outcome, CliError> {
    let mut report = RunReport::new("invariants");
    let m = io::parse_matrix_file(a, "a", &mut report)?;
    let inv = in_file(a, compute_invariants(&m))?;
    let summary = format!(
        "char poly {}, BF {}, eventual rank {}, det {}",
        inv.nonzero_char_poly, inv.bowen_franks, inv.eventual_rank, inv.det_away_from_zero
    );
    report.set("invariants", json::invariants_to_json(&inv));
    Ok(Outcome { report, exit: Exit::Ok, summary })
}

pub fn compare(_ctx: &Context, a: &Path, b: &Path) -> Result<Outcome, CliError> {
    let mut report = RunReport::new("compare");
    let ma = io::parse_matrix_file(a, "a", &mut report)?;
    let mb = io::parse_matrix_file(b, "b", &mut report)?;
    let verdict = compare_invariants(&ma, &mb)?;
    Ok(match verdict {
        ComparisonVerdict::Distinguished(list) => {
            let names: Vec<&str> = list.iter().map(|i| i.name()).collect();
            report.set("result", json!("distinguished"));
            report.set("separated_by", json!(names));
            let summary = format!("not shift equivalent: separated by {}", names.join(", "));
            Outcome { report, exit: Exit::Distinguished, summary }
        }
        ComparisonVerdict::Inconclusive => {
            report.set("result", json!("inconclusive"));
            report.set("separated_by", json!([]));
            Outcome { report, exit: Exit::Ok, summary: "inconclusive: all invariants agree".into() }
        }
    })
}

pub fn corr_tensor(_ctx: &Context, r: &Path, s: &Path, out: Option<&Path>) -> Result<Outcome, CliError> {
    let mut report = RunReport::new("corr tensor");
    let x = in_file(r, json::correspondence_from_json(&io::read_json(r, "r", &mut report)?, "r"))?;
    let y = in_file(s, json::correspondence_from_json(&io::read_json(s, "s", &mut report)?, "s"))?;
    let product = x.tensor(&y)?;
    let summary = format!("product has {} basis vectors", product.total_dim());
    let dims = json::matrix_to_json(&product.dims().map(|&d| shiftcalc::BigInt::from(d)));
    report.set("dims", dims);
    let doc = json::with_schema(json::correspondence_to_json(&product));
    match out {
        Some(path) => io::write_json(path, &doc, &mut report)?,
        None => report.set("product", doc),
    }
    Ok(Outcome { report, exit: Exit::Ok, summary })
}

pub fn check_two_arrow_cmd(ctx: &Context, psi: &Path, f: &Path, g: &Path) -> Result<Outcome, CliError> {
    let mut report = RunReport::new("corr check-2arrow");
    report.tolerance(ctx.tol);
    let psi_doc = io::read_json(psi, "psi", &mut report)?;
    let f_arrow: OneArrow64 = in_file(f, json::one_arrow_from_json(&io::read_json(f, "f", &mut report)?, "f"))?;
    let g_arrow: OneArrow64 = in_file(g, json::one_arrow_from_json(&io::read_json(g, "g", &mut report)?, "g"))?;
    let psi_map: BlockUnitary64 = in_file(psi, json::block_unitary_standalone(&psi_doc, "psi"))?;
    let psi_map = in_file(psi, psi_map.with_endpoints(f_arrow.f().clone(), g_arrow.f().clone()))?;
    let residual = two_arrow_residual(&psi_map, &f_arrow, &g_arrow)?;
    let intertwines = check_two_arrow(&psi_map, &f_arrow, &g_arrow, ctx.tol)?;
    let unitarity = psi_map.unitarity_residual();
    let unitary = unitarity <= ctx.tol;
    report.set("two_arrow", json!(intertwines && unitary));
    report.set("intertwines", json!(intertwines));
    report.set("residual", num(residual));
    report.set("unitary", json!(unitary));
    report.set("unitarity_residual", num(unitarity));
    let ok = intertwines && unitary;
    let summary = format!("2-arrow: {ok} (residual {residual:e}, unitarity defect {unitarity:e})");
    Ok(Outcome { report, exit: if ok { Exit::Ok } else { Exit::Negative }, summary })
}

fn shift_verdict(report: &mut RunReport, d: &AlignedShiftData64, tol: f64) -> Result<(bool, bool), CliError> {
    let unitarity = d.unitarity_residual();
    let concrete = d.verify_concrete_shift(tol);
    report.set("lag", json!(d.lag()));
    report.set("concrete", json!(concrete));
    report.set("unitarity_residual", num(unitarity));
    let r = d.alignment_residuals()?;
    let aligned = concrete && r.within(tol);
    report.set("aligned", json!(aligned));
    report.set("alignment_residual_x", num(r.x));
    report.set("alignment_residual_y", num(r.y));
    Ok((concrete, aligned))
}

pub fn aligned_verify(ctx: &Context, data: &Path) -> Result<Outcome, CliError> {
    let mut report = RunReport::new("aligned verify");
    report.tolerance(ctx.tol);
    let d: AlignedShiftData64 = in_file(data, json::shift_from_json(&io::read_json(data, "data", &mut report)?))?;
    let (concrete, aligned) = shift_verdict(&mut report, &d, ctx.tol)?;
    let summary = match (concrete, aligned) {
        (false, _) => "not a concrete shift: some map is not unitary".to_string(),
        (true, false) => "concrete shift, not aligned".to_string(),
        (true, true) => "aligned shift".to_string(),
    };
    Ok(Outcome { report, exit: if aligned { Exit::Ok } else { Exit::Negative }, summary })
}

pub struct OverridePaths {
    pub phi_m: Option<PathBuf>,
    pub phi_n: Option<PathBuf>,
    pub psi_x: Option<PathBuf>,
    pub psi_y: Option<PathBuf>,
}

fn read_override(path: &Option<PathBuf>, role: &str, report: &mut RunReport) -> Result<Option<BlockUnitary64>, CliError> {
    let Some(path) = path else { return Ok(None) };
    let doc = io::read_json(path, role, report)?;
    in_file(path, json::block_unitary_standalone(&doc, role)).map(Some)
}

fn unverified(mut report: RunReport, w: &SEWitness) -> Result<Outcome, CliError> {
    let eq = w.first_failure()?.map(|e| e.to_string()).unwrap_or_default();
    eprintln!("witness refuted: {eq} fails");
    report.set("built", json!(false));
    report.set("first_failure", json!(eq));
    Ok(Outcome { report, exit: Exit::Negative, summary: format!("witness refuted: {eq} fails") })
}

pub fn aligned_from_se(
    ctx: &Context,
    witness: &Path,
    paths: &OverridePaths,
    out: Option<&Path>,
) -> Result<Outcome, CliError> {
    let mut report = RunReport::new("aligned from-se");
    report.tolerance(ctx.tol);
    let w = io::read_witness(witness, &mut report)?;
    let overrides = ShiftOverrides {
        phi_m: read_override(&paths.phi_m, "phi_m", &mut report)?,
        phi_n: read_override(&paths.phi_n, "phi_n", &mut report)?,
        psi_x: read_override(&paths.psi_x, "psi_x", &mut report)?,
        psi_y: read_override(&paths.psi_y, "psi_y", &mut report)?,
    };
    if !w.verify()? {
        return unverified(report, &w);
    }
    let d: AlignedShiftData64 = build_from_se(&w, overrides)?;
    report.set("built", json!(true));
    let (_, aligned) = shift_verdict(&mut report, &d, ctx.tol)?;
    let doc = json::shift_to_json(&d);
    match out {
        Some(path) => io::write_json(path, &doc, &mut report)?,
        None => report.set("shift", doc),
    }
    let summary = format!("built a concrete shift of lag {}; aligned: {aligned}", d.lag());
    Ok(Outcome { report, exit: Exit::Ok, summary })
}

pub fn homotopy_report_json(r: &HomotopyReport) -> Value {
    json!({
        "ok": r.ok,
        "first_failure": r.first_failure.as_ref().map_or(Value::Null, |f| json!(f.to_string())),
        "start_residual": num(r.start_residual),
        "end_residual": num(r.end_residual),
        "max_sample_unitarity": num(r.max_sample_unitarity),
        "max_sample_deviation": num(r.max_sample_deviation),
    })
}

pub fn homotopy_from_se(ctx: &Context, witness: &Path, steps: usize, out: Option<&Path>) -> Result<Outcome, CliError> {
    let mut report = RunReport::new("homotopy from-se");
    report.tolerance(ctx.tol);
    let w = io::read_witness(witness, &mut report)?;
    if !w.verify()? {
        return unverified(report, &w);
    }
    let bundle: HomotopyShiftBundle64 = homotopy_shift_equivalence_from_se(&w, steps)?;
    let x = verify_homotopy(&bundle.x_homotopy, ctx.tol);
    let y = verify_homotopy(&bundle.y_homotopy, ctx.tol);
    let concrete = bundle.shift.verify_concrete_shift(ctx.tol);
    let ok = concrete && x.ok && y.ok;
    report.set("built", json!(true));
    report.set("steps", json!(steps));
    report.set("concrete", json!(concrete));
    report.set("x_homotopy", homotopy_report_json(&x));
    report.set("y_homotopy", homotopy_report_json(&y));
    report.set("ok", json!(ok));
    let doc = json::bundle_to_json(&bundle);
    match out {
        Some(path) => io::write_json(path, &doc, &mut report)?,
        None => report.set("bundle", doc),
    }
    let summary = match (&x.first_failure, &y.first_failure) {
        (None, None) if ok => format!("homotopy shift of lag {} with {steps} samples per side", bundle.shift.lag()),
        (Some(f), _) => format!("X-side homotopy failed: {f}"),
        (_, Some(f)) => format!("Y-side homotopy failed: {f}"),
        _ => "shift maps are not unitary".to_string(),
    };
    Ok(Outcome { report, exit: if ok { Exit::Ok } else { Exit::Negative }, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(tol: Option<f64>) -> GlobalOpts {
        GlobalOpts { verbose: false, jobs: 2, tol }
    }

    #[test]
    fn explicit_tolerance_wins() {
        let ctx = Context::new(&opts(Some(1e-6))).unwrap();
        assert_eq!(ctx.tol, 1e-6);
        assert_eq!(ctx.jobs, 2);
    }

    #[test]
    fn nonpositive_tolerance_is_rejected() {
        assert!(Context::new(&opts(Some(0.0))).is_err());
        assert!(Context::new(&opts(Some(-1.0))).is_err());
        assert!(Context::new(&opts(Some(f64::NAN))).is_err());
    }
}
