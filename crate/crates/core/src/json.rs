//! JSON file formats. Every top-level document carries
//! `"schema": "shiftcalc/v1"`; readers accept a missing schema field and
//! reject any other value. Integers are written as exact JSON numbers of
//! any size, complex entries as `[re, im]` pairs.

use std::str::FromStr;

use num_complex::Complex;
use serde_json::{Map, Number, Value};

use crate::aligned::AlignedShiftData;
use crate::corr::{BlockUnitary, CMatrix, GraphCorrespondence, ObjectPair, OneArrow};
use crate::error::{Error, Result};
use crate::homotopy::{ArrowHomotopy, HomotopyShiftBundle, Segment, UnitaryPath};
use crate::invariants::{BowenFranks, DimensionInvariants};
use crate::linalg::{Matrix, Polynomial};
use crate::scalar::{Exact, Real};
use crate::shift::SeWitness;

pub const SCHEMA: &str = "shiftcalc/v1";

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parses text, reporting syntax errors with line and column.
pub fn parse_text(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(format!("{e}")))
}

/// Pretty-printed with a trailing newline.
pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("Value always serializes");
    s.push('\n');
    s
}

pub fn with_schema(mut value: Value) -> Value {
    if let Value::Object(map) = &mut value {
        let mut out = Map::new();
        out.insert("schema".into(), Value::String(SCHEMA.into()));
        for (k, v) in std::mem::take(map) {
            out.insert(k, v);
        }
        *map = out;
    }
    value
}

pub fn check_schema(value: &Value) -> Result<()> {
    match value.get("schema") {
        None => Ok(()),
        Some(Value::String(s)) if s == SCHEMA => Ok(()),
        Some(other) => Err(parse_err(format!("unsupported schema {other}, expected {SCHEMA:?}"))),
    }
}

fn object<'a>(value: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    value.as_object().ok_or_else(|| parse_err(format!("{what} must be a JSON object")))
}

fn field<'a>(value: &'a Value, key: &str, what: &str) -> Result<&'a Value> {
    object(value, what)?
        .get(key)
        .ok_or_else(|| parse_err(format!("{what}: missing \"{key}\"")))
}

fn array<'a>(value: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    value.as_array().ok_or_else(|| parse_err(format!("{what} must be an array")))
}

fn usize_of(value: &Value, what: &str) -> Result<usize> {
    value
        .as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| parse_err(format!("{what} must be a nonnegative integer")))
}

fn f64_of(value: &Value, what: &str) -> Result<f64> {
    value.as_f64().ok_or_else(|| parse_err(format!("{what} must be a number")))
}

fn int_of<T: Exact>(value: &Value, what: &str) -> Result<T> {
    let Value::Number(n) = value else {
        return Err(parse_err(format!("{what} must be an integer")));
    };
    let text = n.to_string();
    T::from_str_radix(&text, 10).map_err(|_| parse_err(format!("{what} must be an integer, got {text}")))
}

fn int_value<T: Exact>(x: &T) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integers are valid JSON numbers"))
}

fn real_value<T: Real>(x: T) -> Value {
    let x = x.to_f64_lossy();
    Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn labels_value(labels: &[String]) -> Value {
    Value::Array(labels.iter().map(|l| Value::String(l.clone())).collect())
}

fn labels_of(value: &Value, what: &str) -> Result<Vec<String>> {
    array(value, what)?
        .iter()
        .map(|v| match v {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => Err(parse_err(format!("{what} entries must be strings"))),
        })
        .collect()
}

// ---- integer matrices -------------------------------------------------

pub fn matrix_to_json<T: Exact>(m: &Matrix<T>) -> Value {
    let entries = m.iter_rows().map(|row| Value::Array(row.iter().map(int_value).collect())).collect();
    serde_json::json!({ "rows": m.rows(), "cols": m.cols(), "entries": Value::Array(entries) })
}

/// `{"rows": r, "cols": c, "entries": [[...], ...]}`.
pub fn matrix_from_json<T: Exact>(value: &Value, what: &str) -> Result<Matrix<T>> {
    check_schema(value)?;
    let rows = usize_of(field(value, "rows", what)?, &format!("{what}.rows"))?;
    let cols = usize_of(field(value, "cols", what)?, &format!("{what}.cols"))?;
    let entries = array(field(value, "entries", what)?, &format!("{what}.entries"))?;
    if entries.len() != rows {
        return Err(parse_err(format!("{what}: \"rows\" is {rows} but entries has {} rows", entries.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in entries.iter().enumerate() {
        let row = array(row, &format!("{what}.entries[{i}]"))?;
        if row.len() != cols {
            return Err(parse_err(format!(
                "{what}: row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for (j, x) in row.iter().enumerate() {
            data.push(int_of(x, &format!("{what}.entries[{i}][{j}]"))?);
        }
    }
    Matrix::new(rows, cols, data).map_err(|e| parse_err(format!("{what}: {e}")))
}

pub fn parse_matrix<T: Exact>(text: &str) -> Result<Matrix<T>> {
    matrix_from_json(&parse_text(text)?, "matrix")
}

fn usize_matrix_to_json(m: &Matrix<usize>) -> Value {
    matrix_to_json(&m.map(|&x| x as i128))
}

fn usize_matrix_from_json(value: &Value, what: &str) -> Result<Matrix<usize>> {
    let m: Matrix<i128> = matrix_from_json(value, what)?;
    m.require_nonnegative(what)?;
    m.try_map(|&x| usize::try_from(x).map_err(|_| parse_err(format!("{what}: entry {x} too large"))))
}

pub fn polynomial_to_json<T: Exact>(p: &Polynomial<T>) -> Value {
    Value::Array(p.coeffs().iter().map(int_value).collect())
}

// ---- witnesses ----------------------------------------------------------

pub fn witness_to_json<T: Exact>(w: &SeWitness<T>) -> Value {
    with_schema(serde_json::json!({
        "a": matrix_to_json(&w.a),
        "b": matrix_to_json(&w.b),
        "r": matrix_to_json(&w.r),
        "s": matrix_to_json(&w.s),
        "lag": w.lag,
    }))
}

/// `{"a", "b", "r", "s": matrix, "lag": m}`.
pub fn witness_from_json<T: Exact>(value: &Value) -> Result<SeWitness<T>> {
    check_schema(value)?;
    let m = |k: &str| matrix_from_json(field(value, k, "witness")?, &format!("witness.{k}"));
    let lag = usize_of(field(value, "lag", "witness")?, "witness.lag")?;
    let lag = u32::try_from(lag).map_err(|_| parse_err("witness.lag is too large"))?;
    Ok(SeWitness::new(m("a")?, m("b")?, m("r")?, m("s")?, lag))
}

// ---- invariants -------------------------------------------------------

pub fn bowen_franks_to_json<T: Exact>(bf: &BowenFranks<T>) -> Value {
    serde_json::json!({
        "torsion": Value::Array(bf.torsion.iter().map(int_value).collect()),
        "free_rank": bf.free_rank,
        "group": bf.to_string(),
    })
}

pub fn invariants_to_json<T: Exact>(inv: &DimensionInvariants<T>) -> Value {
    serde_json::json!({
        "nonzero_char_poly": {
            "coeffs": polynomial_to_json(&inv.nonzero_char_poly),
            "text": inv.nonzero_char_poly.to_string(),
        },
        "bowen_franks": bowen_franks_to_json(&inv.bowen_franks),
        "eventual_rank": inv.eventual_rank,
        "det_away_from_zero": int_value(&inv.det_away_from_zero),
    })
}

// ---- correspondences ----------------------------------------------------

pub fn correspondence_to_json(x: &GraphCorrespondence) -> Value {
    serde_json::json!({
        "left_index": labels_value(x.left_index()),
        "right_index": labels_value(x.right_index()),
        "factors": Value::Array(x.factors().iter().map(usize_matrix_to_json).collect()),
    })
}

/// `{"left_index", "right_index", "factors": [matrix, ...]}`: the tensor
/// product of the factor correspondences. A bare matrix is read as a single
/// factor with default labels.
pub fn correspondence_from_json(value: &Value, what: &str) -> Result<GraphCorrespondence> {
    check_schema(value)?;
    if object(value, what)?.contains_key("entries") {
        let m = usize_matrix_from_json(value, what)?;
        let (l, r) = (crate::corr::default_labels(m.rows()), crate::corr::default_labels(m.cols()));
        return GraphCorrespondence::from_dims(m, l, r);
    }
    let left = labels_of(field(value, "left_index", what)?, &format!("{what}.left_index"))?;
    let right = labels_of(field(value, "right_index", what)?, &format!("{what}.right_index"))?;
    let factors = array(field(value, "factors", what)?, &format!("{what}.factors"))?;
    if factors.is_empty() {
        return Err(parse_err(format!("{what}: needs at least one factor")));
    }
    let k = factors.len();
    let mut acc: Option<GraphCorrespondence> = None;
    for (i, f) in factors.iter().enumerate() {
        let m = usize_matrix_from_json(f, &format!("{what}.factors[{i}]"))?;
        let l = if i == 0 { left.clone() } else { crate::corr::default_labels(m.rows()) };
        let r = if i + 1 == k { right.clone() } else { crate::corr::default_labels(m.cols()) };
        let factor = GraphCorrespondence::from_dims(m, l, r)?;
        acc = Some(match acc {
            None => factor,
            Some(prev) => {
                // inner labels are positional; relabel to chain
                let factor = GraphCorrespondence::from_dims(
                    factor.dims().clone(),
                    prev.right_index().to_vec(),
                    factor.right_index().to_vec(),
                )?;
                prev.tensor(&factor)?
            }
        });
    }
    Ok(acc.expect("at least one factor"))
}

// ---- block unitaries ------------------------------------------------------

fn cmatrix_to_json<T: Real>(m: &CMatrix<T>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| {
                Value::Array(
                    (0..m.ncols())
                        .map(|j| Value::Array(vec![real_value(m[(i, j)].re), real_value(m[(i, j)].im)]))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn cmatrix_from_json<T: Real>(value: &Value, d: usize, what: &str) -> Result<CMatrix<T>> {
    let rows = array(value, what)?;
    if rows.len() != d {
        return Err(Error::Shape(format!("{what}: expected {d} rows, got {}", rows.len())));
    }
    let mut out = CMatrix::zeros(d, d);
    for (i, row) in rows.iter().enumerate() {
        let row = array(row, &format!("{what}[{i}]"))?;
        if row.len() != d {
            return Err(Error::Shape(format!("{what}: row {i} has {} entries, expected {d}", row.len())));
        }
        for (j, z) in row.iter().enumerate() {
            let at = format!("{what}[{i}][{j}]");
            let pair = array(z, &at)?;
            if pair.len() != 2 {
                return Err(parse_err(format!("{at} must be [re, im]")));
            }
            out[(i, j)] = Complex::new(T::from_f64_lossy(f64_of(&pair[0], &at)?), T::from_f64_lossy(f64_of(&pair[1], &at)?));
        }
    }
    Ok(out)
}

fn blocks_to_json<T: Real>(x: &GraphCorrespondence, blocks: &[CMatrix<T>]) -> Value {
    let mut map = Map::new();
    for (k, b) in blocks.iter().enumerate() {
        if b.nrows() > 0 {
            map.insert(format!("{},{}", k / x.n_right(), k % x.n_right()), cmatrix_to_json(b));
        }
    }
    Value::Object(map)
}

fn blocks_from_json<T: Real>(value: &Value, x: &GraphCorrespondence, what: &str) -> Result<Vec<CMatrix<T>>> {
    let map = object(value, what)?;
    for key in map.keys() {
        let ok = key.split_once(',').and_then(|(v, w)| Some((v.parse::<usize>().ok()?, w.parse::<usize>().ok()?)));
        match ok {
            Some((v, w)) if v < x.n_left() && w < x.n_right() && x.block_dim(v, w) > 0 => {}
            _ => return Err(Error::Shape(format!("{what}: unexpected block key {key:?}"))),
        }
    }
    let mut blocks = Vec::with_capacity(x.n_left() * x.n_right());
    for v in 0..x.n_left() {
        for w in 0..x.n_right() {
            let d = x.block_dim(v, w);
            let key = format!("{v},{w}");
            blocks.push(match map.get(&key) {
                Some(b) => cmatrix_from_json(b, d, &format!("{what}[{key}]"))?,
                None if d == 0 => CMatrix::zeros(0, 0),
                None => return Err(parse_err(format!("{what}: missing block \"{key}\""))),
            });
        }
    }
    Ok(blocks)
}

pub fn block_unitary_to_json<T: Real>(u: &BlockUnitary<T>) -> Value {
    let x = u.source();
    serde_json::json!({
        "left_index": labels_value(x.left_index()),
        "right_index": labels_value(x.right_index()),
        "dims": usize_matrix_to_json(x.dims()),
        "blocks": blocks_to_json(x, u.blocks()),
    })
}

/// Reads the blocks of a map `source → target`; the file's `dims` must
/// match the block dimensions of the context.
pub fn block_unitary_from_json<T: Real>(
    value: &Value,
    source: &GraphCorrespondence,
    target: &GraphCorrespondence,
    what: &str,
) -> Result<BlockUnitary<T>> {
    check_schema(value)?;
    let dims = usize_matrix_from_json(field(value, "dims", what)?, &format!("{what}.dims"))?;
    if &dims != source.dims() {
        return Err(Error::Shape(format!(
            "{what}: dims {dims} do not match the expected block dimensions {}",
            source.dims()
        )));
    }
    let blocks = blocks_from_json(field(value, "blocks", what)?, source, &format!("{what}.blocks"))?;
    BlockUnitary::new(source.clone(), target.clone(), blocks)
}

/// Reads a block map on its own: source and target are the single-factor
/// correspondence with the stored labels and dims.
pub fn block_unitary_standalone<T: Real>(value: &Value, what: &str) -> Result<BlockUnitary<T>> {
    let dims = usize_matrix_from_json(field(value, "dims", what)?, &format!("{what}.dims"))?;
    let left = match value.get("left_index") {
        Some(v) => labels_of(v, &format!("{what}.left_index"))?,
        None => crate::corr::default_labels(dims.rows()),
    };
    let right = match value.get("right_index") {
        Some(v) => labels_of(v, &format!("{what}.right_index"))?,
        None => crate::corr::default_labels(dims.cols()),
    };
    let x = GraphCorrespondence::from_dims(dims, left, right)?;
    block_unitary_from_json(value, &x, &x, what)
}

// ---- arrows -----------------------------------------------------------------

/// Objects are stored as their integer matrix; vertex labels are `0, 1, ...`.
fn object_from_json(value: &Value, what: &str) -> Result<ObjectPair> {
    let m: Matrix<i128> = matrix_from_json(value, what)?;
    ObjectPair::from_matrix(&m)
}

fn object_to_json(obj: &ObjectPair) -> Value {
    usize_matrix_to_json(obj.x().dims())
}

pub fn one_arrow_to_json<T: Real>(f: &OneArrow<T>) -> Value {
    serde_json::json!({
        "to": object_to_json(f.to()),
        "from": object_to_json(f.from()),
        "f": correspondence_to_json(f.f()),
        "phi": block_unitary_to_json(f.phi()),
    })
}

/// `{"to": matrix B, "from": matrix A, "f": correspondence, "phi": block map}`
/// for `[F, Φ] : (B, Y) ← (A, X)`.
pub fn one_arrow_from_json<T: Real>(value: &Value, what: &str) -> Result<OneArrow<T>> {
    check_schema(value)?;
    let to = object_from_json(field(value, "to", what)?, &format!("{what}.to"))?;
    let from = object_from_json(field(value, "from", what)?, &format!("{what}.from"))?;
    let f = correspondence_from_json(field(value, "f", what)?, &format!("{what}.f"))?;
    let source = to.x().tensor(&f)?;
    let target = f.tensor(from.x())?;
    let phi = block_unitary_from_json(field(value, "phi", what)?, &source, &target, &format!("{what}.phi"))?;
    OneArrow::new(to, from, f, phi)
}

// ---- concrete shifts ---------------------------------------------------------

pub fn shift_to_json<T: Real>(d: &AlignedShiftData<T>) -> Value {
    with_schema(serde_json::json!({
        "lag": d.lag(),
        "x": object_to_json(d.x_obj()),
        "y": object_to_json(d.y_obj()),
        "m": correspondence_to_json(d.m_arrow().f()),
        "n": correspondence_to_json(d.n_arrow().f()),
        "phi_m": block_unitary_to_json(d.m_arrow().phi()),
        "phi_n": block_unitary_to_json(d.n_arrow().phi()),
        "psi_x": block_unitary_to_json(d.psi_x()),
        "psi_y": block_unitary_to_json(d.psi_y()),
    }))
}

/// Inverse of [`shift_to_json`]; every map is re-attached to the
/// correspondences it must act between.
pub fn shift_from_json<T: Real>(value: &Value) -> Result<AlignedShiftData<T>> {
    check_schema(value)?;
    let what = "shift";
    let lag = usize_of(field(value, "lag", what)?, "shift.lag")?;
    let x = object_from_json(field(value, "x", what)?, "shift.x")?;
    let y = object_from_json(field(value, "y", what)?, "shift.y")?;
    let m = correspondence_from_json(field(value, "m", what)?, "shift.m")?;
    let n = correspondence_from_json(field(value, "n", what)?, "shift.n")?;
    let unit = |key: &str, s: &GraphCorrespondence, t: &GraphCorrespondence| {
        block_unitary_from_json::<T>(field(value, key, what)?, s, t, &format!("shift.{key}"))
    };
    let phi_m = unit("phi_m", &x.x().tensor(&m)?, &m.tensor(y.x())?)?;
    let phi_n = unit("phi_n", &y.x().tensor(&n)?, &n.tensor(x.x())?)?;
    let psi_x = unit("psi_x", &m.tensor(&n)?, &x.x().power(lag)?)?;
    let psi_y = unit("psi_y", &n.tensor(&m)?, &y.x().power(lag)?)?;
    let m_arrow = OneArrow::new(x.clone(), y.clone(), m, phi_m)?;
    let n_arrow = OneArrow::new(y.clone(), x.clone(), n, phi_n)?;
    AlignedShiftData::new(x, y, m_arrow, n_arrow, psi_x, psi_y, lag)
}

// ---- homotopies ----------------------------------------------------------------

pub fn path_to_json<T: Real>(p: &UnitaryPath<T>) -> Value {
    let segments = p
        .segments()
        .iter()
        .map(|s| {
            serde_json::json!({
                "t0": real_value(s.t0),
                "t1": real_value(s.t1),
                "base": block_unitary_to_json(&s.base),
                "generator": blocks_to_json(s.base.source(), &s.generator),
            })
        })
        .collect();
    let samples = p
        .samples()
        .iter()
        .map(|(t, u)| serde_json::json!({ "t": real_value(*t), "unitary": block_unitary_to_json(u) }))
        .collect();
    serde_json::json!({ "segments": Value::Array(segments), "samples": Value::Array(samples) })
}

pub fn path_from_json<T: Real>(
    value: &Value,
    source: &GraphCorrespondence,
    target: &GraphCorrespondence,
    what: &str,
) -> Result<UnitaryPath<T>> {
    let segs = array(field(value, "segments", what)?, &format!("{what}.segments"))?;
    let mut segments = Vec::with_capacity(segs.len());
    for (i, s) in segs.iter().enumerate() {
        let at = format!("{what}.segments[{i}]");
        segments.push(Segment {
            t0: T::from_f64_lossy(f64_of(field(s, "t0", &at)?, &format!("{at}.t0"))?),
            t1: T::from_f64_lossy(f64_of(field(s, "t1", &at)?, &format!("{at}.t1"))?),
            base: block_unitary_from_json(field(s, "base", &at)?, source, target, &format!("{at}.base"))?,
            generator: blocks_from_json(field(s, "generator", &at)?, source, &format!("{at}.generator"))?,
        });
    }
    let raw = array(field(value, "samples", what)?, &format!("{what}.samples"))?;
    let mut samples = Vec::with_capacity(raw.len());
    for (i, s) in raw.iter().enumerate() {
        let at = format!("{what}.samples[{i}]");
        let t = T::from_f64_lossy(f64_of(field(s, "t", &at)?, &format!("{at}.t"))?);
        samples.push((t, block_unitary_from_json(field(s, "unitary", &at)?, source, target, &at)?));
    }
    UnitaryPath::from_parts(segments, samples)
}

pub fn homotopy_to_json<T: Real>(h: &ArrowHomotopy<T>) -> Value {
    serde_json::json!({
        "f": one_arrow_to_json(&h.f_arrow),
        "g": one_arrow_to_json(&h.g_arrow),
        "fiber": correspondence_to_json(&h.fiber),
        "path": path_to_json(&h.path),
        "h0": block_unitary_to_json(&h.h0),
        "h1": block_unitary_to_json(&h.h1),
    })
}

pub fn homotopy_from_json<T: Real>(value: &Value, what: &str) -> Result<ArrowHomotopy<T>> {
    check_schema(value)?;
    let f_arrow: OneArrow<T> = one_arrow_from_json(field(value, "f", what)?, &format!("{what}.f"))?;
    let g_arrow: OneArrow<T> = one_arrow_from_json(field(value, "g", what)?, &format!("{what}.g"))?;
    let fiber = correspondence_from_json(field(value, "fiber", what)?, &format!("{what}.fiber"))?;
    let source = f_arrow.to().x().tensor(&fiber)?;
    let target = fiber.tensor(f_arrow.from().x())?;
    let path = path_from_json(field(value, "path", what)?, &source, &target, &format!("{what}.path"))?;
    let h0 = block_unitary_from_json(field(value, "h0", what)?, &fiber, f_arrow.f(), &format!("{what}.h0"))?;
    let h1 = block_unitary_from_json(field(value, "h1", what)?, &fiber, g_arrow.f(), &format!("{what}.h1"))?;
    Ok(ArrowHomotopy { f_arrow, g_arrow, fiber, path, h0, h1 })
}

pub fn bundle_to_json<T: Real>(b: &HomotopyShiftBundle<T>) -> Value {
    with_schema(serde_json::json!({
        "shift": shift_to_json(&b.shift),
        "x_homotopy": homotopy_to_json(&b.x_homotopy),
        "y_homotopy": homotopy_to_json(&b.y_homotopy),
    }))
}

pub fn bundle_from_json<T: Real>(value: &Value) -> Result<HomotopyShiftBundle<T>> {
    check_schema(value)?;
    Ok(HomotopyShiftBundle {
        shift: shift_from_json(field(value, "shift", "bundle")?)?,
        x_homotopy: homotopy_from_json(field(value, "x_homotopy", "bundle")?, "bundle.x_homotopy")?,
        y_homotopy: homotopy_from_json(field(value, "y_homotopy", "bundle")?, "bundle.y_homotopy")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aligned::{build_from_se, ShiftOverrides};
    use crate::homotopy::homotopy_shift_equivalence_from_se;
    use crate::linalg::int_matrix;
    use num_bigint::BigInt;

    fn witness() -> SeWitness<i64> {
        SeWitness::new(
            int_matrix(&[&[2]]),
            int_matrix(&[&[1, 1], &[1, 1]]),
            int_matrix(&[&[1, 1]]),
            int_matrix(&[&[1], &[1]]),
            1,
        )
    }

    #[test]
    fn matrix_examples() {
        let m: Matrix<BigInt> = parse_matrix(r#"{"rows":1,"cols":1,"entries":[[2]]}"#).unwrap();
        assert_eq!(m, int_matrix(&[&[2]]));
        let missing = parse_matrix::<BigInt>(r#"{"rows":1,"cols":1}"#).unwrap_err();
        assert!(matches!(&missing, Error::Parse(msg) if msg.contains("entries")));
        let ragged = parse_matrix::<BigInt>(r#"{"rows":2,"cols":2,"entries":[[1,2],[3]]}"#).unwrap_err();
        assert!(matches!(&ragged, Error::Parse(msg) if msg.contains("row 1")));
        let syntax = parse_matrix::<BigInt>("{\n\"rows\": 1,\n\"cols\" 1}").unwrap_err();
        assert!(matches!(&syntax, Error::Parse(msg) if msg.contains("line 3")));
    }

    #[test]
    fn big_integers_survive() {
        let text = r#"{"rows":1,"cols":2,"entries":[[123456789012345678901234567890, -3]]}"#;
        let m: Matrix<BigInt> = parse_matrix(text).unwrap();
        let again: Matrix<BigInt> = matrix_from_json(&matrix_to_json(&m), "m").unwrap();
        assert_eq!(m, again);
        assert!(matrix_to_json(&m).to_string().contains("123456789012345678901234567890"));
        assert!(parse_matrix::<BigInt>(r#"{"rows":1,"cols":1,"entries":[[1.5]]}"#).is_err());
    }

    #[test]
    fn witness_round_trip() {
        let w = witness();
        assert_eq!(witness_from_json::<i64>(&witness_to_json(&w)).unwrap(), w);
        let bad = serde_json::json!({"schema": "other/v9", "a": 1});
        assert!(witness_from_json::<i64>(&bad).is_err());
    }

    #[test]
    fn shift_round_trip_is_exact() {
        let d: AlignedShiftData<f64> = build_from_se(&witness(), ShiftOverrides::default()).unwrap();
        let back: AlignedShiftData<f64> = shift_from_json(&shift_to_json(&d)).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn bundle_round_trip_is_exact() {
        let b: HomotopyShiftBundle<f64> = homotopy_shift_equivalence_from_se(&witness(), 4).unwrap();
        let text = to_pretty(&bundle_to_json(&b));
        let back: HomotopyShiftBundle<f64> = bundle_from_json(&parse_text(&text).unwrap()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn correspondence_round_trip() {
        let x = GraphCorrespondence::from_matrix_default(&int_matrix::<i64>(&[&[1, 2], &[0, 1]])).unwrap();
        let xx = x.power(3).unwrap();
        let back = correspondence_from_json(&correspondence_to_json(&xx), "x").unwrap();
        assert_eq!(back, xx);
        assert_eq!(back.factors().len(), 3);
    }

    #[test]
    fn wrong_block_dims_are_shape_errors() {
        let x = GraphCorrespondence::from_matrix_default(&int_matrix::<i64>(&[&[2]])).unwrap();
        let y = GraphCorrespondence::from_matrix_default(&int_matrix::<i64>(&[&[3]])).unwrap();
        let u = BlockUnitary::<f64>::identity(&x);
        let err = block_unitary_from_json::<f64>(&block_unitary_to_json(&u), &y, &y, "u").unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
    }
}
