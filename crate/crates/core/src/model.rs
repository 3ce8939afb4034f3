//! Points, coordinate namespaces and the incidence system.
//!
//! Coordinates are opaque symbols scoped to one axis: `x` on axis 1 and `x` on
//! axis 2 are different coordinates. A [`PointSet`] keeps insertion order so
//! that row indices, and everything derived from them, are reproducible.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{Matrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("point {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("point {index} duplicates point {first}")]
    DuplicatePoint { index: usize, first: usize },
    #[error("point {index} has an empty symbol on axis {axis}")]
    EmptySymbol { index: usize, axis: usize },
    #[error("point {index} has a symbol containing whitespace on axis {axis}: {symbol:?}")]
    InvalidSymbol {
        index: usize,
        axis: usize,
        symbol: String,
    },
    #[error("axis {axis} is out of range 1..={dimension}")]
    AxisOutOfRange { axis: usize, dimension: usize },
    #[error("point index {index} is out of range for a set of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
}

/// A coordinate value bound to one axis (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordinateLabel {
    axis: usize,
    symbol: String,
}

impl CoordinateLabel {
    /// Panics if `axis == 0` or `symbol` is empty or contains whitespace; use
    /// [`CoordinateLabel::parse`] for untrusted input.
    pub fn new(axis: usize, symbol: impl Into<String>) -> Self {
        let symbol = symbol.into();
        assert!(axis >= 1, "axes are 1-based");
        assert!(symbol_is_valid(&symbol), "invalid coordinate symbol {symbol:?}");
        Self { axis, symbol }
    }

    pub fn parse(axis: usize, symbol: &str) -> Option<Self> {
        (axis >= 1 && symbol_is_valid(symbol)).then(|| Self {
            axis,
            symbol: symbol.to_owned(),
        })
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }
}

impl fmt::Display for CoordinateLabel {
    /// `symbol@axis`, the form used by boundary value documents.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.symbol, self.axis)
    }
}

fn symbol_is_valid(symbol: &str) -> bool {
    !symbol.is_empty() && !symbol.chars().any(char::is_whitespace)
}

/// An n-tuple of coordinates; `coords()[i]` lives on axis `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<CoordinateLabel>,
}

impl Point {
    /// Builds a point from one symbol per axis. Panics on invalid symbols.
    pub fn from_symbols<S: AsRef<str>>(symbols: &[S]) -> Self {
        Self {
            coords: symbols
                .iter()
                .enumerate()
                .map(|(i, s)| CoordinateLabel::new(i + 1, s.as_ref()))
                .collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[CoordinateLabel] {
        &self.coords
    }

    /// Coordinate on a 1-based axis.
    pub fn coord(&self, axis: usize) -> &CoordinateLabel {
        &self.coords[axis - 1]
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.coords.iter().map(|c| c.symbol.as_str())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c.symbol)?;
        }
        write!(f, ")")
    }
}

/// A finite, duplicate-free set of points of a fixed dimension.
#[derive(Debug, Clone)]
pub struct PointSet {
    dimension: usize,
    points: Vec<Point>,
    index: HashMap<Point, usize>,
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension && self.points == other.points
    }
}

impl Eq for PointSet {}

impl PointSet {
    pub fn empty(dimension: usize) -> Result<Self, ModelError> {
        validate::<Vec<String>>(&[], dimension)
    }

    /// Builds a set from already constructed points, rejecting duplicates and
    /// dimension mismatches.
    pub fn from_points(dimension: usize, points: Vec<Point>) -> Result<Self, ModelError> {
        if dimension < 2 {
            return Err(ModelError::DimensionTooSmall(dimension));
        }
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if p.dimension() != dimension {
                return Err(ModelError::DimensionMismatch {
                    index: i,
                    expected: dimension,
                    found: p.dimension(),
                });
            }
            if let Some(&first) = index.get(p) {
                return Err(ModelError::DuplicatePoint { index: i, first });
            }
            index.insert(p.clone(), i);
        }
        Ok(Self {
            dimension,
            points,
            index,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, index: usize) -> &Point {
        &self.points[index]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn index_of(&self, point: &Point) -> Option<usize> {
        self.index.get(point).copied()
    }

    pub fn contains(&self, point: &Point) -> bool {
        self.index.contains_key(point)
    }

    /// The sub-collection at `indices`, in the order given.
    pub fn subset(&self, indices: &[usize]) -> Result<PointSet, ModelError> {
        let points = indices
            .iter()
            .map(|&i| {
                self.points.get(i).cloned().ok_or(ModelError::IndexOutOfRange {
                    index: i,
                    len: self.points.len(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        PointSet::from_points(self.dimension, points)
    }

    /// Distinct coordinates on `axis` in first-occurrence order.
    pub fn projection(&self, axis: usize) -> Result<Vec<CoordinateLabel>, ModelError> {
        if axis == 0 || axis > self.dimension {
            return Err(ModelError::AxisOutOfRange {
                axis,
                dimension: self.dimension,
            });
        }
        let mut seen = std::collections::HashSet::new();
        Ok(self
            .points
            .iter()
            .map(|p| p.coord(axis))
            .filter(|c| seen.insert(*c))
            .cloned()
            .collect())
    }

    /// All distinct coordinates, sorted by axis and then first occurrence.
    /// This is the column order of the incidence system.
    pub fn coordinates(&self) -> Vec<CoordinateLabel> {
        (1..=self.dimension)
            .flat_map(|axis| self.projection(axis).expect("axis in range"))
            .collect()
    }

    pub fn coordinate_count(&self) -> usize {
        self.coordinates().len()
    }
}

/// Validates raw symbol rows as a point set of dimension `n`.
pub fn validate<S: AsRef<[String]>>(raw: &[S], n: usize) -> Result<PointSet, ModelError> {
    if n < 2 {
        return Err(ModelError::DimensionTooSmall(n));
    }
    let mut points = Vec::with_capacity(raw.len());
    for (index, row) in raw.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != n {
            return Err(ModelError::DimensionMismatch {
                index,
                expected: n,
                found: row.len(),
            });
        }
        let mut coords = Vec::with_capacity(n);
        for (i, symbol) in row.iter().enumerate() {
            let axis = i + 1;
            if symbol.is_empty() {
                return Err(ModelError::EmptySymbol { index, axis });
            }
            let label = CoordinateLabel::parse(axis, symbol).ok_or_else(|| {
                ModelError::InvalidSymbol {
                    index,
                    axis,
                    symbol: symbol.clone(),
                }
            })?;
            coords.push(label);
        }
        points.push(Point { coords });
    }
    PointSet::from_points(n, points)
}

/// The 0/1 system behind the additive decomposition: one row per point, one
/// column per distinct coordinate, a one wherever the point uses the
/// coordinate.
#[derive(Debug, Clone)]
pub struct IncidenceSystem {
    matrix: Matrix,
    rows: Vec<Point>,
    cols: Vec<CoordinateLabel>,
    col_lookup: HashMap<CoordinateLabel, usize>,
}

impl IncidenceSystem {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn row_points(&self) -> &[Point] {
        &self.rows
    }

    pub fn col_labels(&self) -> &[CoordinateLabel] {
        &self.cols
    }

    pub fn column_of(&self, label: &CoordinateLabel) -> Option<usize> {
        self.col_lookup.get(label).copied()
    }

    /// Column indices used by one row, in axis order.
    pub fn row_columns(&self, row: usize) -> Vec<usize> {
        self.rows[row]
            .coords()
            .iter()
            .map(|c| self.col_lookup[c])
            .collect()
    }

    pub fn point_count(&self) -> usize {
        self.rows.len()
    }

    pub fn coordinate_count(&self) -> usize {
        self.cols.len()
    }
}

pub fn build_incidence(set: &PointSet) -> IncidenceSystem {
    let cols = set.coordinates();
    let col_lookup: HashMap<_, _> = cols.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let mut matrix = Matrix::zeros(set.len(), cols.len());
    for (r, p) in set.iter().enumerate() {
        for c in p.coords() {
            matrix.set(r, col_lookup[c], Rational::one());
        }
    }
    debug_assert!(matrix.entries().all(|x| x.is_zero() || x.is_one()));
    IncidenceSystem {
        matrix,
        rows: set.points().to_vec(),
        cols,
        col_lookup,
    }
}
