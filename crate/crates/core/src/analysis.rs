//! Goodness, fullness, boundary sets and the additive decomposition.
//!
//! For a finite set `S` with `p` points over `c` distinct coordinates:
//!
//! * `S` is good iff the `p` incidence rows are linearly independent;
//! * a coordinate set `B` is a boundary iff `|B| = c - p` and the kernel of
//!   the incidence matrix projects bijectively onto the coordinates in `B`;
//! * `S` is full iff it is good and `c - p = n - 1`.

use std::collections::{HashMap, HashSet};

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{self, Matrix, Rational};
use crate::model::{build_incidence, CoordinateLabel, IncidenceSystem, Point, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("the point set is not good")]
    NotGood,
    #[error("the point set is empty")]
    EmptySet,
    #[error("the coordinate set is not a boundary")]
    NotABoundary,
    #[error("coordinate {0} does not occur in the point set")]
    UnknownCoordinate(CoordinateLabel),
    #[error("no boundary value given for {0}")]
    MissingBoundaryValue(CoordinateLabel),
    #[error("boundary value given for {0}, which is not in the boundary")]
    UnexpectedBoundaryValue(CoordinateLabel),
    #[error("function has {found} values, the set has {expected} points")]
    FunctionLength { expected: usize, found: usize },
}

/// Nonzero weights on points whose weighted incidence rows sum to zero.
///
/// Any `f` with `sum(weight * f(point)) != 0` has no additive decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependenceCertificate {
    /// `(point index, weight)`, nonzero weights only, in point order.
    pub weights: Vec<(usize, Rational)>,
}

impl DependenceCertificate {
    pub fn weight(&self, index: usize) -> Rational {
        self.weights
            .iter()
            .find(|(i, _)| *i == index)
            .map_or_else(Rational::zero, |(_, w)| w.clone())
    }

    /// Checks the defining relation against an incidence system.
    pub fn verify(&self, inc: &IncidenceSystem) -> bool {
        let mut acc = vec![Rational::zero(); inc.coordinate_count()];
        for (row, w) in &self.weights {
            for c in inc.row_columns(*row) {
                acc[c] += w;
            }
        }
        !self.weights.is_empty() && acc.iter().all(Zero::is_zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodnessReport {
    pub is_good: bool,
    pub rank: usize,
    pub point_count: usize,
    pub coordinate_count: usize,
    /// `coordinate_count - rank`.
    pub kernel_dim: usize,
    pub certificate: Option<DependenceCertificate>,
}

/// A set of coordinates on which prescribing the `u_i` pins the decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoundarySet {
    pub coords: Vec<CoordinateLabel>,
}

impl BoundarySet {
    pub fn new(coords: Vec<CoordinateLabel>) -> Self {
        Self { coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn contains(&self, label: &CoordinateLabel) -> bool {
        self.coords.contains(label)
    }
}

/// The functions `u_1, ..., u_n`, one value per coordinate of the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    values: Vec<(CoordinateLabel, Rational)>,
    lookup: HashMap<CoordinateLabel, usize>,
}

impl Decomposition {
    fn new(values: Vec<(CoordinateLabel, Rational)>) -> Self {
        let lookup = values
            .iter()
            .enumerate()
            .map(|(i, (c, _))| (c.clone(), i))
            .collect();
        Self { values, lookup }
    }

    pub fn get(&self, label: &CoordinateLabel) -> Option<&Rational> {
        self.lookup.get(label).map(|&i| &self.values[i].1)
    }

    /// All values in incidence column order.
    pub fn values(&self) -> &[(CoordinateLabel, Rational)] {
        &self.values
    }

    /// The function `u_axis` as `(coordinate, value)` pairs.
    pub fn axis(&self, axis: usize) -> impl Iterator<Item = (&CoordinateLabel, &Rational)> {
        self.values
            .iter()
            .filter(move |(c, _)| c.axis() == axis)
            .map(|(c, v)| (c, v))
    }

    /// `u_1(x_1) + ... + u_n(x_n)`, or `None` if a coordinate is unknown.
    pub fn evaluate(&self, point: &Point) -> Option<Rational> {
        point
            .coords()
            .iter()
            .try_fold(Rational::zero(), |acc, c| Some(acc + self.get(c)?))
    }
}

pub fn analyze_goodness(set: &PointSet) -> GoodnessReport {
    analyze_incidence(&build_incidence(set))
}

pub(crate) fn analyze_incidence(inc: &IncidenceSystem) -> GoodnessReport {
    let m = inc.matrix();
    let rank = linalg::rank(m);
    let p = inc.point_count();
    let c = inc.coordinate_count();
    let is_good = rank == p;
    let certificate = (!is_good).then(|| {
        let relations = linalg::kernel_basis(&m.transpose());
        let w = linalg::primitive_integer(&relations[0]);
        DependenceCertificate {
            weights: w
                .into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    });
    GoodnessReport {
        is_good,
        rank,
        point_count: p,
        coordinate_count: c,
        kernel_dim: c - rank,
        certificate,
    }
}

pub fn is_full(set: &PointSet) -> Result<bool, AnalysisError> {
    if set.is_empty() {
        return Err(AnalysisError::EmptySet);
    }
    let report = analyze_goodness(set);
    Ok(report.is_good && report.coordinate_count - report.point_count == set.dimension() - 1)
}

/// Kernel basis of a good set's incidence matrix laid out with one row per
/// coordinate (`c x (c - p)`).
fn kernel_by_coordinate(inc: &IncidenceSystem) -> Result<Matrix, AnalysisError> {
    let m = inc.matrix();
    if linalg::rank(m) != inc.point_count() {
        return Err(AnalysisError::NotGood);
    }
    let basis = linalg::kernel_basis(m);
    let mut k = Matrix::zeros(inc.coordinate_count(), basis.len());
    for (j, v) in basis.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            k.set(i, j, x.clone());
        }
    }
    Ok(k)
}

/// Incrementally maintained row space, used for greedy independent choices.
struct RowSpace {
    /// Reduced rows with their pivot column.
    rows: Vec<(usize, Vec<Rational>)>,
}

impl RowSpace {
    fn new() -> Self {
        Self { rows: Vec::new() }
    }

    /// Adds `v` if it is independent of the rows so far.
    fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let f = v[*pivot].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x -= &f * r;
                    }
                }
            }
        }
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pivot].recip();
        for x in &mut v {
            *x *= &inv;
        }
        self.rows.push((pivot, v));
        true
    }
}

/// The first boundary in canonical column order: coordinates are taken
/// greedily while their kernel rows stay independent.
pub fn find_boundary(set: &PointSet) -> Result<BoundarySet, AnalysisError> {
    let inc = build_incidence(set);
    let k = kernel_by_coordinate(&inc)?;
    let dim = k.cols();
    let mut space = RowSpace::new();
    let mut coords = Vec::with_capacity(dim);
    for (i, label) in inc.col_labels().iter().enumerate() {
        if coords.len() == dim {
            break;
        }
        if space.insert(k.row(i).to_vec()) {
            coords.push(label.clone());
        }
    }
    debug_assert_eq!(coords.len(), dim);
    Ok(BoundarySet { coords })
}

/// Resolves labels to distinct incidence columns.
fn boundary_columns(
    inc: &IncidenceSystem,
    coords: &[CoordinateLabel],
) -> Result<Vec<usize>, AnalysisError> {
    let mut seen = HashSet::new();
    let mut cols = Vec::with_capacity(coords.len());
    for label in coords {
        let c = inc
            .column_of(label)
            .ok_or_else(|| AnalysisError::UnknownCoordinate(label.clone()))?;
        if seen.insert(c) {
            cols.push(c);
        }
    }
    Ok(cols)
}

pub fn is_boundary(set: &PointSet, coords: &[CoordinateLabel]) -> Result<bool, AnalysisError> {
    let inc = build_incidence(set);
    let k = kernel_by_coordinate(&inc)?;
    let cols = boundary_columns(&inc, coords)?;
    Ok(kernel_projects_onto(&k, &cols))
}

pub(crate) fn kernel_projects_onto(kernel: &Matrix, cols: &[usize]) -> bool {
    if cols.len() != kernel.cols() {
        return false;
    }
    let all: Vec<usize> = (0..kernel.cols()).collect();
    linalg::rank(&kernel.select(cols, &all)) == kernel.cols()
}

/// Solves `f(s) = sum_i u_i(s_i)` for every `s` in `set`, with `u` fixed to
/// `boundary_values` on the boundary. `f` is indexed by point position.
pub fn decompose(
    set: &PointSet,
    f: &[Rational],
    boundary: &BoundarySet,
    boundary_values: &HashMap<CoordinateLabel, Rational>,
) -> Result<Decomposition, AnalysisError> {
    let inc = build_incidence(set);
    let k = kernel_by_coordinate(&inc)?;
    if f.len() != set.len() {
        return Err(AnalysisError::FunctionLength {
            expected: set.len(),
            found: f.len(),
        });
    }
    let b_cols = boundary_columns(&inc, &boundary.coords)?;
    if !kernel_projects_onto(&k, &b_cols) {
        return Err(AnalysisError::NotABoundary);
    }
    for label in &boundary.coords {
        if !boundary_values.contains_key(label) {
            return Err(AnalysisError::MissingBoundaryValue(label.clone()));
        }
    }
    if let Some(extra) = boundary_values.keys().find(|l| !boundary.contains(l)) {
        return Err(AnalysisError::UnexpectedBoundaryValue(extra.clone()));
    }

    let labels = inc.col_labels();
    let m = inc.matrix();
    let mut fixed: Vec<Option<Rational>> = vec![None; labels.len()];
    for &c in &b_cols {
        fixed[c] = Some(boundary_values[&labels[c]].clone());
    }
    let free: Vec<usize> = (0..labels.len()).filter(|&c| fixed[c].is_none()).collect();
    let rhs: Vec<Rational> = (0..set.len())
        .map(|r| {
            b_cols.iter().fold(f[r].clone(), |acc, &c| {
                if m.get(r, c).is_zero() {
                    acc
                } else {
                    acc - fixed[c].as_ref().expect("boundary value")
                }
            })
        })
        .collect();
    let rows: Vec<usize> = (0..set.len()).collect();
    let reduced = m.select(&rows, &free);
    let x = linalg::solve(&reduced, &rhs).expect("boundary complement is invertible");
    for (&c, v) in free.iter().zip(x) {
        fixed[c] = Some(v);
    }
    let values = labels
        .iter()
        .cloned()
        .zip(fixed.into_iter().map(|v| v.expect("every column assigned")))
        .collect();
    Ok(Decomposition::new(values))
}

/// Boundary `B` from [`find_boundary`] with `U = 0` on it.
pub fn decompose_default(set: &PointSet, f: &[Rational]) -> Result<Decomposition, AnalysisError> {
    let boundary = find_boundary(set)?;
    let zeros = boundary
        .coords
        .iter()
        .map(|c| (c.clone(), Rational::zero()))
        .collect();
    decompose(set, f, &boundary, &zeros)
}
