//! JSON documents: point sets, function assignments, boundaries, matrices and
//! the report shapes emitted by the command-line tool.
//!
//! Rationals are written as `"p/q"` in lowest terms with `q > 0`, or `"p"`
//! for integers.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::analysis::{BoundarySet, Decomposition, GoodnessReport};
use crate::components::{GeodesicResult, Partition};
use crate::linalg::{format_rational, parse_rational, LinalgError, Matrix, Rational};
use crate::model::{validate, CoordinateLabel, ModelError, PointSet};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Rational(#[from] LinalgError),
    #[error("point index {index} is out of range for {len} points")]
    BadIndex { index: usize, len: usize },
    #[error("point index {0} is not a non-negative integer")]
    BadIndexText(String),
    #[error("point index {0} is assigned twice")]
    DuplicateIndex(usize),
    #[error("no function value for point {0}")]
    MissingValue(usize),
    #[error("coordinate reference {0:?} is not of the form symbol@axis")]
    BadLabel(String),
    #[error("coordinate {0} is listed twice")]
    DuplicateLabel(CoordinateLabel),
    #[error("matrix rows have different lengths")]
    Ragged,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetDoc {
    pub dimension: usize,
    pub points: Vec<Vec<String>>,
}

impl PointSetDoc {
    pub fn from_set(set: &PointSet) -> Self {
        Self {
            dimension: set.dimension(),
            points: set
                .iter()
                .map(|p| p.symbols().map(str::to_owned).collect())
                .collect(),
        }
    }

    pub fn into_set(self) -> Result<PointSet, ModelError> {
        validate(&self.points, self.dimension)
    }
}

pub fn parse_point_set(text: &str) -> Result<PointSet, IoError> {
    let doc: PointSetDoc = serde_json::from_str(text)?;
    Ok(doc.into_set()?)
}

/// Pretty-printed point-set document with a trailing newline.
pub fn point_set_json(set: &PointSet) -> String {
    let mut s = serde_json::to_string_pretty(&PointSetDoc::from_set(set)).expect("serializable");
    s.push('\n');
    s
}

/// Point index as written in documents: a JSON number or a decimal string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum IndexKey {
    Number(usize),
    Text(String),
}

impl IndexKey {
    fn resolve(&self) -> Result<usize, IoError> {
        match self {
            IndexKey::Number(n) => Ok(*n),
            IndexKey::Text(t) => t.trim().parse().map_err(|_| IoError::BadIndexText(t.clone())),
        }
    }
}

#[derive(Debug, Deserialize)]
struct FunctionDoc {
    values: Vec<(IndexKey, String)>,
}

/// Function values keyed by point position; every point must be assigned
/// exactly once.
pub fn parse_function(text: &str, set: &PointSet) -> Result<Vec<Rational>, IoError> {
    let doc: FunctionDoc = serde_json::from_str(text)?;
    let mut values: Vec<Option<Rational>> = vec![None; set.len()];
    for (key, value) in &doc.values {
        let index = key.resolve()?;
        let slot = values.get_mut(index).ok_or(IoError::BadIndex {
            index,
            len: set.len(),
        })?;
        if slot.is_some() {
            return Err(IoError::DuplicateIndex(index));
        }
        *slot = Some(parse_rational(value)?);
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or(IoError::MissingValue(i)))
        .collect()
}

pub fn function_json(values: &[Rational]) -> Value {
    json!({
        "values": values
            .iter()
            .enumerate()
            .map(|(i, v)| json!([i, format_rational(v)]))
            .collect::<Vec<_>>()
    })
}

/// `symbol@axis`; the symbol itself may contain `@`.
pub fn parse_label(text: &str) -> Result<CoordinateLabel, IoError> {
    let bad = || IoError::BadLabel(text.to_owned());
    let (symbol, axis) = text.rsplit_once('@').ok_or_else(bad)?;
    let axis: usize = axis.parse().map_err(|_| bad())?;
    CoordinateLabel::parse(axis, symbol).ok_or_else(bad)
}

#[derive(Debug, Deserialize)]
struct BoundaryDoc {
    coords: Vec<(usize, String)>,
    #[serde(default)]
    values: Vec<(String, String)>,
}

pub fn parse_boundary(
    text: &str,
) -> Result<(BoundarySet, HashMap<CoordinateLabel, Rational>), IoError> {
    let doc: BoundaryDoc = serde_json::from_str(text)?;
    let coords = doc
        .coords
        .iter()
        .map(|(axis, symbol)| {
            CoordinateLabel::parse(*axis, symbol)
                .ok_or_else(|| IoError::BadLabel(format!("{symbol}@{axis}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut values = HashMap::new();
    for (label, value) in &doc.values {
        let label = parse_label(label)?;
        if values.insert(label.clone(), parse_rational(value)?).is_some() {
            return Err(IoError::DuplicateLabel(label));
        }
    }
    Ok((BoundarySet::new(coords), values))
}

pub fn boundary_json(boundary: &BoundarySet, values: Option<&HashMap<CoordinateLabel, Rational>>) -> Value {
    let mut doc = json!({
        "coords": boundary
            .coords
            .iter()
            .map(|c| json!([c.axis(), c.symbol()]))
            .collect::<Vec<_>>(),
    });
    if let Some(values) = values {
        doc["values"] = boundary
            .coords
            .iter()
            .filter_map(|c| values.get(c).map(|v| json!([c.to_string(), format_rational(v)])))
            .collect();
    }
    doc
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| m.row(r).iter().map(|v| Value::String(format_rational(v))).collect())
            .collect(),
    )
}

pub fn parse_matrix(text: &str) -> Result<Matrix, IoError> {
    let rows: Vec<Vec<String>> = serde_json::from_str(text)?;
    let cols = rows.first().map_or(0, Vec::len);
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(rows, cols).map_err(|_| IoError::Ragged)
}

pub fn goodness_json(report: &GoodnessReport, boundary: Option<&BoundarySet>, full: Option<bool>) -> Value {
    json!({
        "good": report.is_good,
        "full": full,
        "rank": report.rank,
        "points": report.point_count,
        "coordinates": report.coordinate_count,
        "kernelDim": report.kernel_dim,
        "boundary": boundary.map(|b| boundary_json(b, None)),
        "certificate": report.certificate.as_ref().map(|c| json!({
            "weights": c
                .weights
                .iter()
                .map(|(i, w)| json!([i, format_rational(w)]))
                .collect::<Vec<_>>()
        })),
    })
}

pub fn decomposition_json(d: &Decomposition, dimension: usize) -> Value {
    let per_axis: Vec<Value> = (1..=dimension)
        .map(|axis| {
            let mut obj = serde_json::Map::new();
            for (c, v) in d.axis(axis) {
                obj.insert(c.symbol().to_owned(), Value::String(format_rational(v)));
            }
            Value::Object(obj)
        })
        .collect();
    json!({ "perAxis": per_axis })
}

pub fn partition_json(p: &Partition) -> Value {
    json!({ "blocks": p.blocks })
}

pub fn geodesic_json(g: &GeodesicResult) -> Value {
    json!({
        "found": g.found(),
        "subset": g.subset.clone().unwrap_or_default(),
        "alternatives": g.alternatives(),
        "minimal": g.minimal,
        "witnesses": g.witnesses,
    })
}
