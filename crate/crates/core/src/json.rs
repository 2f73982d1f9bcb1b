//! JSON exchange formats.
//!
//! Exact numbers are strings (`"3"`, `"-1/3"`, `"0.25"`); bare JSON numbers
//! are accepted only where a document declares `"mode": "float"`. Subsets are
//! lists of 1-based elements. Schema errors name the offending field path.

use serde_json::{json, Map, Value};

use crate::compound::{
    CertificateTerm, CompoundInput, DecompositionCertificate, TermGroup, Threshold,
};
use crate::error::{Error, Result};
use crate::grid::{DiscreteMeasure, Grid, GridFunction, GridWitness};
use crate::multilinear::{MLPoly, DEFAULT_FLOAT_TOLERANCE};
use crate::partition::{PartitionResult, SetInterval, VectorFamily};
use crate::scalar::{parse_rational, to_f64, Rational};
use crate::subset::{PBFunction, SubsetMask, SubsetWitness};

/// Parses JSON text; syntax errors carry line and column.
pub fn parse(text: &str) -> Result<Value> {
    Ok(serde_json::from_str(text)?)
}

fn schema(field: &str, reason: impl Into<String>) -> Error {
    Error::Schema {
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

pub fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| {
        schema(
            if path.is_empty() { "<root>" } else { path },
            "expected an object",
        )
    })
}

/// Required member `key` of an object, with `path` naming the object.
pub fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| schema(&join(path, key), "missing field"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| schema(path, "expected an array"))
}

fn usize_of(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| schema(path, "expected a nonnegative integer"))
}

fn rational_of(v: &Value, path: &str) -> Result<Rational> {
    match v {
        Value::String(s) => {
            parse_rational(s).map_err(|_| schema(path, format!("invalid number {s:?}")))
        }
        Value::Number(_) => Err(schema(
            path,
            "bare numbers are only accepted in float mode; quote exact values",
        )),
        _ => Err(schema(path, "expected a number string")),
    }
}

fn float_of(v: &Value, path: &str) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| schema(path, "number out of range")),
        Value::String(_) => Ok(to_f64(&rational_of(v, path)?)),
        _ => Err(schema(path, "expected a number")),
    }
}

/// A list of exact number strings.
pub fn rationals(v: &Value, path: &str) -> Result<Vec<Rational>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| rational_of(x, &format!("{path}[{i}]")))
        .collect()
}

fn floats(v: &Value, path: &str) -> Result<Vec<f64>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| float_of(x, &format!("{path}[{i}]")))
        .collect()
}

fn strings(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn numbers(v: &[f64]) -> Value {
    json!(v)
}

/// Exact or floating numeric mode of a table or polynomial document.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NumericMode {
    Exact,
    Float { tolerance: f64 },
}

fn numeric_mode(m: &Map<String, Value>, path: &str) -> Result<NumericMode> {
    let mode = match m.get("mode") {
        None => return Ok(NumericMode::Exact),
        Some(v) => v
            .as_str()
            .ok_or_else(|| schema(&join(path, "mode"), "expected \"exact\" or \"float\""))?,
    };
    match mode {
        "exact" => {
            if m.contains_key("tolerance") {
                return Err(schema(
                    &join(path, "tolerance"),
                    "exact mode admits no tolerance",
                ));
            }
            Ok(NumericMode::Exact)
        }
        "float" => {
            let tolerance = match m.get("tolerance") {
                None => DEFAULT_FLOAT_TOLERANCE,
                Some(v) => float_of(v, &join(path, "tolerance"))?,
            };
            if !(tolerance >= 0.0 && tolerance.is_finite()) {
                return Err(schema(
                    &join(path, "tolerance"),
                    "must be finite and nonnegative",
                ));
            }
            Ok(NumericMode::Float { tolerance })
        }
        other => Err(schema(
            &join(path, "mode"),
            format!("unknown mode {other:?}; expected \"exact\" or \"float\""),
        )),
    }
}

fn positive_d(m: &Map<String, Value>, path: &str) -> Result<usize> {
    let d = usize_of(field(m, "d", path)?, &join(path, "d"))?;
    if d == 0 {
        return Err(schema(&join(path, "d"), "must be at least 1"));
    }
    Ok(d)
}

fn wrap_len(e: Error, path: &str) -> Error {
    match e {
        Error::LengthMismatch {
            expected, found, ..
        } => schema(path, format!("expected {expected} entries, found {found}")),
        Error::DimensionOutOfRange { d, max } => {
            schema(path, format!("ground set size {d} exceeds {max}"))
        }
        other => other,
    }
}

/// A pseudo-Boolean table in either numeric mode.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyTable {
    Exact(PBFunction<Rational>),
    Float(PBFunction<f64>, f64),
}

pub fn table_from_value(v: &Value, path: &str) -> Result<AnyTable> {
    let m = object(v, path)?;
    let d = positive_d(m, path)?;
    let values_path = join(path, "values");
    let values = field(m, "values", path)?;
    match numeric_mode(m, path)? {
        NumericMode::Exact => PBFunction::new(d, rationals(values, &values_path)?)
            .map(AnyTable::Exact)
            .map_err(|e| wrap_len(e, &values_path)),
        NumericMode::Float { tolerance } => PBFunction::new(d, floats(values, &values_path)?)
            .map(|f| AnyTable::Float(f, tolerance))
            .map_err(|e| wrap_len(e, &values_path)),
    }
}

pub fn table_from_json(text: &str) -> Result<AnyTable> {
    table_from_value(&parse(text)?, "")
}

/// Exact table; a float document is a schema error.
pub fn exact_table_from_value(v: &Value, path: &str) -> Result<PBFunction<Rational>> {
    match table_from_value(v, path)? {
        AnyTable::Exact(f) => Ok(f),
        AnyTable::Float(..) => Err(schema(&join(path, "mode"), "exact values required here")),
    }
}

pub fn table_to_json(f: &PBFunction<Rational>) -> Value {
    json!({ "d": f.d(), "values": strings(f.values()) })
}

pub fn float_table_to_json(f: &PBFunction<f64>, tolerance: f64) -> Value {
    json!({ "d": f.d(), "mode": "float", "tolerance": tolerance, "values": numbers(f.values()) })
}

/// A multilinear polynomial in either numeric mode.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPoly {
    Exact(MLPoly<Rational>),
    Float(MLPoly<f64>, f64),
}

pub fn poly_from_value(v: &Value, path: &str) -> Result<AnyPoly> {
    let m = object(v, path)?;
    let d = positive_d(m, path)?;
    let coeffs_path = join(path, "coeffs");
    let coeffs = field(m, "coeffs", path)?;
    match numeric_mode(m, path)? {
        NumericMode::Exact => MLPoly::new(d, rationals(coeffs, &coeffs_path)?)
            .map(AnyPoly::Exact)
            .map_err(|e| wrap_len(e, &coeffs_path)),
        NumericMode::Float { tolerance } => MLPoly::new(d, floats(coeffs, &coeffs_path)?)
            .map(|p| AnyPoly::Float(p, tolerance))
            .map_err(|e| wrap_len(e, &coeffs_path)),
    }
}

pub fn poly_from_json(text: &str) -> Result<AnyPoly> {
    poly_from_value(&parse(text)?, "")
}

pub fn poly_to_json(p: &MLPoly<Rational>) -> Value {
    json!({ "d": p.d(), "mode": "exact", "coeffs": strings(p.coeffs()) })
}

pub fn float_poly_to_json(p: &MLPoly<f64>, tolerance: f64) -> Value {
    json!({ "d": p.d(), "mode": "float", "tolerance": tolerance, "coeffs": numbers(p.coeffs()) })
}

pub fn grid_from_value(v: &Value, path: &str) -> Result<Grid> {
    let axes = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, a)| rationals(a, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Grid::from_points(axes).map_err(|e| match e {
        Error::InvalidAxis { axis, reason } => schema(&format!("{path}[{axis}]"), reason),
        Error::GridDimension { dim, max } => {
            schema(path, format!("grid dimension {dim} out of range 1..={max}"))
        }
        other => other,
    })
}

fn grid_to_json(grid: &Grid) -> Value {
    Value::Array(grid.axes().iter().map(|a| strings(a.points())).collect())
}

pub fn grid_function_from_value(v: &Value, path: &str) -> Result<GridFunction<Rational>> {
    let m = object(v, path)?;
    let grid = grid_from_value(field(m, "axes", path)?, &join(path, "axes"))?;
    let values_path = join(path, "values");
    let values = rationals(field(m, "values", path)?, &values_path)?;
    GridFunction::new(grid, values).map_err(|e| wrap_len(e, &values_path))
}

pub fn grid_function_from_json(text: &str) -> Result<GridFunction<Rational>> {
    grid_function_from_value(&parse(text)?, "")
}

/// A list of points, each a list of exact number strings.
pub fn point_list(v: &Value, path: &str) -> Result<Vec<Vec<Rational>>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, p)| rationals(p, &format!("{path}[{i}]")))
        .collect()
}

pub fn grid_function_to_json(f: &GridFunction<Rational>) -> Value {
    json!({ "axes": grid_to_json(f.grid()), "values": strings(f.values()) })
}

pub fn measure_from_value(v: &Value, path: &str) -> Result<DiscreteMeasure<Rational>> {
    let m = object(v, path)?;
    let points_path = join(path, "points");
    let points = array(field(m, "points", path)?, &points_path)?
        .iter()
        .enumerate()
        .map(|(i, p)| rationals(p, &format!("{points_path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let masses = rationals(field(m, "masses", path)?, &join(path, "masses"))?;
    DiscreteMeasure::new(points, masses).map_err(|e| match e {
        Error::Schema { field, reason } => schema(&join(path, &field), reason),
        Error::LengthMismatch {
            expected, found, ..
        } => schema(
            &join(path, "masses"),
            format!("expected {expected} entries, found {found}"),
        ),
        Error::VectorLengthMismatch {
            index,
            expected,
            found,
        } => schema(
            &format!("{points_path}[{index}]"),
            format!("expected {expected} coordinates, found {found}"),
        ),
        other => other,
    })
}

pub fn measure_from_json(text: &str) -> Result<DiscreteMeasure<Rational>> {
    measure_from_value(&parse(text)?, "")
}

pub fn measure_to_json(mu: &DiscreteMeasure<Rational>) -> Value {
    json!({
        "points": mu.points().iter().map(|p| strings(p)).collect::<Vec<_>>(),
        "masses": strings(mu.masses()),
    })
}

pub fn family_from_value(v: &Value, path: &str) -> Result<VectorFamily> {
    let m = object(v, path)?;
    let vectors_path = join(path, "vectors");
    let vectors = array(field(m, "vectors", path)?, &vectors_path)?
        .iter()
        .enumerate()
        .map(|(i, x)| rationals(x, &format!("{vectors_path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let family = VectorFamily::new(vectors).map_err(|e| match e {
        Error::VectorLengthMismatch {
            index,
            expected,
            found,
        } => schema(
            &format!("{vectors_path}[{index}]"),
            format!("expected {expected} coordinates, found {found}"),
        ),
        Error::DimensionOutOfRange { d, max } => {
            schema(&vectors_path, format!("{d} vectors; expected 1..={max}"))
        }
        other => other,
    })?;
    if let Some(k) = m.get("k") {
        let k = usize_of(k, &join(path, "k"))?;
        if k != family.k() {
            return Err(schema(
                &join(path, "k"),
                format!("k = {k} but vectors have {} coordinates", family.k()),
            ));
        }
    }
    Ok(family)
}

pub fn family_from_json(text: &str) -> Result<VectorFamily> {
    family_from_value(&parse(text)?, "")
}

pub fn family_to_json(x: &VectorFamily) -> Value {
    json!({
        "k": x.k(),
        "vectors": x.vectors().iter().map(|v| strings(v)).collect::<Vec<_>>(),
    })
}

pub fn mask_to_json(m: SubsetMask) -> Value {
    json!(m.elements())
}

fn mask_from_value(v: &Value, d: usize, path: &str) -> Result<SubsetMask> {
    let elements = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, e)| usize_of(e, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    SubsetMask::from_elements(&elements, d)
        .map_err(|_| schema(path, format!("elements must lie in 1..={d}")))
}

/// Reads intervals; without a `"d"` field the ground set is `default_d`, or
/// the largest element mentioned when that is `None`.
pub fn partition_from_value(
    v: &Value,
    path: &str,
    default_d: Option<usize>,
) -> Result<PartitionResult> {
    let m = object(v, path)?;
    let intervals_path = join(path, "intervals");
    let raw = array(field(m, "intervals", path)?, &intervals_path)?;
    let d = match m.get("d") {
        Some(d) => usize_of(d, &join(path, "d"))?,
        None => match default_d {
            Some(d) => d,
            None => raw
                .iter()
                .filter_map(|iv| iv.get("tau").and_then(Value::as_array))
                .flatten()
                .filter_map(Value::as_u64)
                .max()
                .unwrap_or(0) as usize,
        },
    };
    let intervals = raw
        .iter()
        .enumerate()
        .map(|(i, iv)| {
            let p = format!("{intervals_path}[{i}]");
            let o = object(iv, &p)?;
            let sigma = mask_from_value(field(o, "sigma", &p)?, d, &join(&p, "sigma"))?;
            let tau = mask_from_value(field(o, "tau", &p)?, d, &join(&p, "tau"))?;
            SetInterval::new(sigma, tau).map_err(|_| schema(&p, "sigma must be a subset of tau"))
        })
        .collect::<Result<Vec<_>>>()?;
    PartitionResult::new(d, intervals)
}

pub fn partition_from_json(text: &str, default_d: Option<usize>) -> Result<PartitionResult> {
    partition_from_value(&parse(text)?, "", default_d)
}

pub fn partition_to_json(r: &PartitionResult) -> Value {
    json!({
        "d": r.d(),
        "intervals": r.intervals().iter().map(|iv| json!({
            "sigma": mask_to_json(iv.sigma()),
            "tau": mask_to_json(iv.tau()),
        })).collect::<Vec<_>>(),
    })
}

pub fn compound_input_from_value(v: &Value, path: &str) -> Result<CompoundInput<Rational>> {
    let m = object(v, path)?;
    let f = exact_table_from_value(field(m, "f", path)?, &join(path, "f"))?;
    let gs_path = join(path, "gs");
    let gs = array(field(m, "gs", path)?, &gs_path)?
        .iter()
        .enumerate()
        .map(|(i, g)| grid_function_from_value(g, &format!("{gs_path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    CompoundInput::new(f, gs).map_err(|e| match e {
        Error::FunctionCount { expected, found } => schema(
            &gs_path,
            format!("expected {expected} functions, found {found}"),
        ),
        Error::GridMismatch { function } => schema(
            &format!("{gs_path}[{function}].axes"),
            "all functions must share one grid",
        ),
        Error::ValueOutsideUnitInterval {
            function,
            index,
            value,
        } => schema(
            &format!("{gs_path}[{function}].values[{index}]"),
            format!("value {value} is outside [0, 1]"),
        ),
        other => other,
    })
}

pub fn compound_input_from_json(text: &str) -> Result<CompoundInput<Rational>> {
    compound_input_from_value(&parse(text)?, "")
}

pub fn compound_input_to_json(input: &CompoundInput<Rational>) -> Value {
    json!({
        "f": table_to_json(input.f()),
        "gs": input.gs().iter().map(grid_function_to_json).collect::<Vec<_>>(),
    })
}

pub fn certificate_to_json(c: &DecompositionCertificate) -> Value {
    let terms: Vec<Value> = c
        .terms()
        .iter()
        .map(|t| {
            let threshold = match &t.threshold {
                Threshold::Always => json!("always"),
                Threshold::AtLeast(a) => strings(a),
            };
            let mut o = json!({
                "weight": t.weight.to_string(),
                "threshold": threshold,
                "group": match t.group { TermGroup::Low => "low", TermGroup::Interval(_) => "interval" },
                "support": mask_to_json(t.support),
            });
            if let TermGroup::Interval(j) = t.group {
                o["interval"] = json!(j);
            }
            o
        })
        .collect();
    json!({
        "axes": grid_to_json(c.grid()),
        "terms": terms,
        "partition": partition_to_json(c.partition()),
        "weight_sum": c.weight_sum().to_string(),
    })
}

pub fn certificate_from_value(v: &Value, path: &str) -> Result<DecompositionCertificate> {
    let m = object(v, path)?;
    let grid = grid_from_value(field(m, "axes", path)?, &join(path, "axes"))?;
    let partition =
        partition_from_value(field(m, "partition", path)?, &join(path, "partition"), None)?;
    let d = partition.d();
    let terms_path = join(path, "terms");
    let terms = array(field(m, "terms", path)?, &terms_path)?
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let p = format!("{terms_path}[{i}]");
            let o = object(t, &p)?;
            let weight = rational_of(field(o, "weight", &p)?, &join(&p, "weight"))?;
            let threshold = match field(o, "threshold", &p)? {
                Value::String(s) if s == "always" => Threshold::Always,
                other => Threshold::AtLeast(rationals(other, &join(&p, "threshold"))?),
            };
            let group = match field(o, "group", &p)?.as_str() {
                Some("low") => TermGroup::Low,
                Some("interval") => {
                    TermGroup::Interval(usize_of(field(o, "interval", &p)?, &join(&p, "interval"))?)
                }
                _ => {
                    return Err(schema(
                        &join(&p, "group"),
                        "expected \"low\" or \"interval\"",
                    ))
                }
            };
            let support = mask_from_value(field(o, "support", &p)?, d, &join(&p, "support"))?;
            Ok(CertificateTerm {
                weight,
                threshold,
                group,
                support,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecompositionCertificate::from_parts(grid, terms, partition))
}

pub fn certificate_from_json(text: &str) -> Result<DecompositionCertificate> {
    certificate_from_value(&parse(text)?, "")
}

pub fn subset_witness_to_json<T: std::fmt::Display>(w: &SubsetWitness<T>) -> Value {
    json!({
        "beta": mask_to_json(w.beta),
        "gamma": mask_to_json(w.gamma),
        "value": w.value.to_string(),
    })
}

pub fn grid_witness_to_json<T: std::fmt::Display>(w: &GridWitness<T>) -> Value {
    json!({
        "p": w.p,
        "s": strings(&w.s),
        "h": strings(&w.h),
        "value": w.value.to_string(),
    })
}
