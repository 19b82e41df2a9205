//! JSON file formats for groups, measures, matrices and reports.
//!
//! Any JSON argument may be inline text (starting with `{` or `[`) or a
//! path. A group referenced by path from inside a measure file is resolved
//! relative to that file.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::dynamics::{BasinDescription, OmegaLimitReport};
use crate::error::{Error, Result};
use crate::group::{build_named, same_group, GroupRef, GroupSpec};
use crate::matrix::Matrix;
use crate::measure::ProbMeasure;
use crate::scalar::{parse_rational, Rational, Scalar};

/// A parsed JSON document and the directory that relative paths inside it
/// refer to.
#[derive(Debug, Clone)]
pub struct Document {
    pub value: Value,
    pub base: PathBuf,
}

fn parse_text(text: &str, origin: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{origin}: {e}")))
}

/// Reads `arg` as inline JSON or as a file path.
pub fn load(arg: &str, base: &Path) -> Result<Document> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(Document { value: parse_text(arg, "inline JSON")?, base: base.to_path_buf() });
    }
    let path = base.join(arg);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let value = parse_text(&text, &path.display().to_string())?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(Document { value, base })
}

/// Builds a group from an inline description or a path string.
pub fn parse_group(value: &Value, base: &Path, max_order: usize) -> Result<GroupRef> {
    match value {
        Value::String(path) => {
            let doc = load(path, base)?;
            parse_group(&doc.value, &doc.base, max_order)
        }
        Value::Object(_) => {
            let spec: GroupSpec =
                serde_json::from_value(value.clone()).map_err(|e| Error::Parse(format!("group: {e}")))?;
            Ok(Arc::new(build_named(&spec, max_order)?))
        }
        _ => Err(Error::Parse("group must be an object or a path string".into())),
    }
}

pub fn load_group(arg: &str, max_order: usize) -> Result<GroupRef> {
    let doc = load(arg, Path::new(""))?;
    parse_group(&doc.value, &doc.base, max_order)
}

/// Weights as read, before a mode is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

impl Weights {
    pub fn is_exact(&self) -> bool {
        matches!(self, Weights::Exact(_))
    }
}

/// Strings parse as rationals, numbers as floats; a mixture is rejected.
pub fn parse_weights(value: &Value) -> Result<Weights> {
    let items = value.as_array().ok_or_else(|| Error::Parse("weights must be an array".into()))?;
    if items.iter().all(Value::is_string) {
        let exact = items.iter().map(|v| parse_rational(v.as_str().unwrap())).collect::<Result<_>>()?;
        Ok(Weights::Exact(exact))
    } else if items.iter().all(Value::is_number) {
        Ok(Weights::Float(items.iter().map(|v| v.as_f64().unwrap()).collect()))
    } else if items.iter().all(|v| v.is_string() || v.is_number()) {
        Err(Error::ModeMismatch("weights mix rational strings and float numbers".into()))
    } else {
        Err(Error::Parse("weights must be rational strings or numbers".into()))
    }
}

/// A measure file: optional group and a weight vector.
#[derive(Debug, Clone)]
pub struct MeasureFile {
    pub group: GroupRef,
    pub weights: Weights,
}

impl MeasureFile {
    pub fn exact(&self) -> Result<ProbMeasure<Rational>> {
        match &self.weights {
            Weights::Exact(w) => ProbMeasure::new(self.group.clone(), w.clone()),
            Weights::Float(_) => Err(Error::ModeMismatch("exact mode needs rational string weights".into())),
        }
    }

    /// Float weights as given, or rational weights rounded to f64.
    pub fn float(&self) -> Result<ProbMeasure<f64>> {
        match &self.weights {
            Weights::Exact(w) => Ok(ProbMeasure::new(self.group.clone(), w.clone())?.to_f64()),
            Weights::Float(w) => ProbMeasure::new(self.group.clone(), w.clone()),
        }
    }
}

/// Parses a measure file. The group comes from `group` when given (and must
/// match any group embedded in the file), otherwise from the file itself.
pub fn parse_measure(doc: &Document, group: Option<&GroupRef>, max_order: usize) -> Result<MeasureFile> {
    let obj = doc.value.as_object().ok_or_else(|| Error::Parse("measure must be an object".into()))?;
    if let Some(key) = obj.keys().find(|k| *k != "group" && *k != "weights") {
        return Err(Error::Parse(format!("unknown field {key:?} in measure")));
    }
    let weights = parse_weights(obj.get("weights").ok_or_else(|| Error::Parse("measure lacks \"weights\"".into()))?)?;
    let embedded = obj.get("group").map(|g| parse_group(g, &doc.base, max_order)).transpose()?;
    let group = match (group, embedded) {
        (Some(given), Some(own)) => {
            if !same_group(given, &own) {
                return Err(Error::GroupMismatch);
            }
            given.clone()
        }
        (Some(given), None) => given.clone(),
        (None, Some(own)) => own,
        (None, None) => return Err(Error::Parse("no group given for the measure".into())),
    };
    Ok(MeasureFile { group, weights })
}

pub fn load_measure(arg: &str, group: Option<&GroupRef>, max_order: usize) -> Result<MeasureFile> {
    parse_measure(&load(arg, Path::new(""))?, group, max_order)
}

/// Rationals become "num/den" strings, floats JSON numbers.
pub fn scalar_json<S: Scalar>(x: &S) -> Value {
    if S::EXACT {
        Value::String(x.to_string())
    } else {
        json!(x.to_f64())
    }
}

pub fn vector_json<S: Scalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(scalar_json).collect())
}

pub fn measure_json<S: Scalar>(m: &ProbMeasure<S>) -> Value {
    vector_json(m.weights())
}

/// A measure in the input format, with its group inlined.
pub fn measure_file_json<S: Scalar>(m: &ProbMeasure<S>) -> Value {
    let g = m.group();
    json!({
        "group": {"family": "table", "labels": g.labels(), "cayley": g.cayley_rows()},
        "weights": measure_json(m),
    })
}

pub fn matrix_json<S: Scalar>(m: &Matrix<S>) -> Value {
    let entries: Vec<Value> = (0..m.order()).map(|i| vector_json(m.row(i))).collect();
    json!({"order": m.order(), "entries": entries})
}

pub fn parse_matrix(value: &Value) -> Result<Matrix<Rational>> {
    let rows = value
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("matrix lacks \"entries\"".into()))?;
    let rows = rows
        .iter()
        .map(|r| match parse_weights(r)? {
            Weights::Exact(v) => Ok(v),
            Weights::Float(_) => Err(Error::ModeMismatch("expected rational entries".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

pub fn omega_report_json<S: Scalar>(r: &OmegaLimitReport<S>) -> Value {
    json!({
        "points": r.points.iter().map(measure_json).collect::<Vec<_>>(),
        "period": r.period,
        "verified": r.verified,
    })
}

pub fn basin_json<S: Scalar>(b: &BasinDescription<S>) -> Value {
    let constraints: Vec<Value> = b
        .decomposition
        .blocks()
        .iter()
        .zip(&b.required_sums)
        .map(|(block, sum)| json!({"block": block, "sum": scalar_json(sum)}))
        .collect();
    json!({"constraints": constraints, "dimension": b.dimension, "feasible": b.feasible})
}

/// Labels of a list of index sets.
pub fn labelled_sets(g: &GroupRef, sets: &[Vec<usize>]) -> Value {
    Value::Array(sets.iter().map(|s| json!(s.iter().map(|&i| g.label(i)).collect::<Vec<_>>())).collect())
}

/// Reads a homomorphism image list: target indices or target labels.
pub fn parse_map(value: &Value, target: &GroupRef) -> Result<Vec<usize>> {
    let items = value.as_array().ok_or_else(|| Error::Parse("map must be an array".into()))?;
    items
        .iter()
        .map(|v| match v {
            Value::Number(n) => n
                .as_u64()
                .map(|i| i as usize)
                .ok_or_else(|| Error::Parse(format!("bad map index {n}"))),
            Value::String(l) => target.index_of(l).ok_or_else(|| Error::Parse(format!("unknown target label {l:?}"))),
            _ => Err(Error::Parse("map entries must be indices or labels".into())),
        })
        .collect()
}
