//! A three-dimensional good set whose related components are singletons
//! although the set is full, and the machinery that checks every claim made
//! about it on finite prefixes.
//!
//! Points `a_1, a_2, ...` are listed in blocks. The first block is
//!
//! ```text
//! a_1 = (x1, x2, x3)   a_2 = (y1, y2, x3)   a_3 = (y1, x2, z3)
//! ```
//!
//! and block `A_m` (`m >= 1`) is, writing `α_k` for fresh symbols,
//!
//! ```text
//! a_{5m-1} = (α_{5m-4}, α_{5m-3}, α_{5m-2})
//! a_{5m}   = (α_{5m-1}, α_{5m},   α_{5m-2})
//! a_{5m+1} = (α_{5m-4}, α_{5m},   α_{5m-7})
//! a_{5m+2} = (α_{5m-1}, α_{5m-3}, x3)
//! a_{5m+3} = (x1,       α_{5m-8}, α_{5m-2})
//! ```
//!
//! For `m = 1` the indices `5m-7 = -2` and `5m-8 = -3` fall before the first
//! block; they stand for `z3` and `y2`, which gives `a_6 = (α1, α5, z3)` and
//! `a_8 = (x1, y2, α3)`.
//!
//! `D_n` is the first `3 + 5n` points, `b_n = (α_{5n-1}, y2, z3)` and
//! `F_n = D_n ∪ {b_n}`. Each `α_k` lives on a fixed axis determined by
//! `k mod 5`.

use std::collections::HashSet;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::analysis::{self, analyze_goodness, find_boundary, BoundarySet};
use crate::components::{self, ComponentsError};
use crate::linalg::{self, int, LinalgError, Matrix, Rational};
use crate::model::{build_incidence, CoordinateLabel, ModelError, Point, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("family index must be non-negative, got {0}")]
    NegativeIndex(i64),
    #[error("operation needs n >= {needed}, got n = {n}")]
    FamilyTooSmall { n: usize, needed: usize },
    #[error("verification of {check} failed: {detail}")]
    VerificationFailed { check: &'static str, detail: String },
    #[error(transparent)]
    Components(#[from] ComponentsError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn failed(check: &'static str, detail: impl Into<String>) -> FamilyError {
    FamilyError::VerificationFailed {
        check,
        detail: detail.into(),
    }
}

/// `α_k` for `k >= 1`, with `z3` and `y2` standing in for `k = -2, -3`.
pub fn alpha(k: i64) -> CoordinateLabel {
    match k {
        -2 => CoordinateLabel::new(3, "z3"),
        -3 => CoordinateLabel::new(2, "y2"),
        k if k >= 1 => {
            let axis = match k % 5 {
                1 | 4 => 1,
                2 | 0 => 2,
                _ => 3,
            };
            CoordinateLabel::new(axis, format!("α{k}"))
        }
        _ => panic!("α_{k} is not part of the family"),
    }
}

fn label(axis: usize, symbol: &str) -> CoordinateLabel {
    CoordinateLabel::new(axis, symbol)
}

fn point(a: CoordinateLabel, b: CoordinateLabel, c: CoordinateLabel) -> Point {
    debug_assert_eq!((a.axis(), b.axis(), c.axis()), (1, 2, 3));
    Point::from_symbols(&[a.symbol(), b.symbol(), c.symbol()])
}

fn first_block() -> Vec<Point> {
    vec![
        point(label(1, "x1"), label(2, "x2"), label(3, "x3")),
        point(label(1, "y1"), label(2, "y2"), label(3, "x3")),
        point(label(1, "y1"), label(2, "x2"), label(3, "z3")),
    ]
}

/// The five points of block `A_m`, `m >= 1`.
fn block(m: i64) -> [Point; 5] {
    let a = |k: i64| alpha(5 * m + k);
    [
        point(a(-4), a(-3), a(-2)),
        point(a(-1), a(0), a(-2)),
        point(a(-4), a(0), a(-7)),
        point(a(-1), a(-3), label(3, "x3")),
        point(label(1, "x1"), a(-8), a(-2)),
    ]
}

/// `b_n = (α_{5n-1}, y2, z3)`.
pub fn closing_point(n: usize) -> Point {
    point(alpha(5 * n as i64 - 1), label(2, "y2"), label(3, "z3"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyInstance {
    n: usize,
    prefix: PointSet,
    closing: Option<Point>,
    full: Option<PointSet>,
}

pub fn gen_family(n: i64) -> Result<FamilyInstance, FamilyError> {
    if n < 0 {
        return Err(FamilyError::NegativeIndex(n));
    }
    let mut points = first_block();
    for m in 1..=n {
        points.extend(block(m));
    }
    let prefix = PointSet::from_points(3, points)?;
    let n = n as usize;
    let (closing, full) = if n >= 1 {
        let b = closing_point(n);
        let mut pts = prefix.points().to_vec();
        pts.push(b.clone());
        (Some(b), Some(PointSet::from_points(3, pts)?))
    } else {
        (None, None)
    };
    Ok(FamilyInstance {
        n,
        prefix,
        closing,
        full,
    })
}

impl FamilyInstance {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `D_n`, the first `3 + 5n` points.
    pub fn prefix(&self) -> &PointSet {
        &self.prefix
    }

    /// `b_n`, present for `n >= 1`.
    pub fn closing_point(&self) -> Option<&Point> {
        self.closing.as_ref()
    }

    /// `F_n = D_n ∪ {b_n}`, present for `n >= 1`.
    pub fn full_set(&self) -> Option<&PointSet> {
        self.full.as_ref()
    }

    /// Point indices of block `A_m` within `D_n`; block 0 is the first three
    /// points.
    pub fn block_indices(&self, m: usize) -> std::ops::Range<usize> {
        assert!(m <= self.n, "block {m} beyond n = {}", self.n);
        if m == 0 {
            0..3
        } else {
            3 + 5 * (m - 1)..3 + 5 * m
        }
    }

    pub fn block(&self, m: usize) -> PointSet {
        let ix: Vec<usize> = self.block_indices(m).collect();
        self.prefix.subset(&ix).expect("block in range")
    }

    /// The same family with `b_n` removed, so that `F_n` degenerates to
    /// `D_n`. Used to check that verification actually rejects something.
    pub fn without_closing_point(&self) -> FamilyInstance {
        FamilyInstance {
            closing: None,
            full: self.full.as_ref().map(|_| self.prefix.clone()),
            ..self.clone()
        }
    }

    fn require(&self, needed: usize) -> Result<&PointSet, FamilyError> {
        match &self.full {
            Some(f) if self.n >= needed => Ok(f),
            _ => Err(FamilyError::FamilyTooSmall { n: self.n, needed }),
        }
    }
}

/// `F_n`'s incidence with the row of `a_1` and the columns `x1, x2, x3`
/// removed. Rows are `a_2, ..., a_{5n+3}, b_n`; columns are
/// `y1, y2, z3, α_1, ..., α_{5n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedMatrix {
    pub matrix: Matrix,
    pub row_points: Vec<Point>,
    pub col_coords: Vec<CoordinateLabel>,
}

pub fn reduced_matrix(inst: &FamilyInstance) -> Result<ReducedMatrix, FamilyError> {
    let full = inst.require(1)?;
    let inc = build_incidence(full);
    let col_coords: Vec<CoordinateLabel> = [label(1, "y1"), label(2, "y2"), label(3, "z3")]
        .into_iter()
        .chain((1..=5 * inst.n as i64).map(alpha))
        .collect();
    let cols: Vec<usize> = col_coords
        .iter()
        .map(|c| inc.column_of(c).expect("every reduced column occurs in F_n"))
        .collect();
    let rows: Vec<usize> = (1..full.len()).collect();
    Ok(ReducedMatrix {
        matrix: inc.matrix().select(&rows, &cols),
        row_points: full.points()[1..].to_vec(),
        col_coords,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullnessReport {
    pub n: usize,
    pub size: usize,
    pub inverse: Matrix,
    pub coordinates_minus_points: usize,
}

/// Two independent routes to "F_n is full": the reduced matrix is invertible,
/// and F_n is good with `c - p = 2`. Both must hold.
pub fn verify_full_via_inverse(inst: &FamilyInstance) -> Result<FullnessReport, FamilyError> {
    const CHECK: &str = "fullness";
    let full = inst.require(1)?;
    let reduced = reduced_matrix(inst)?;
    let inverse = linalg::invert(&reduced.matrix);
    let report = analyze_goodness(full);
    let excess = report.coordinate_count as isize - report.point_count as isize;
    let rank_full = report.is_good && excess == 2;
    match (inverse, rank_full) {
        (Ok(inverse), true) => Ok(FullnessReport {
            n: inst.n,
            size: reduced.matrix.rows(),
            inverse,
            coordinates_minus_points: excess as usize,
        }),
        (inverse, rank_full) => {
            let mut halves = Vec::new();
            if let Err(e) = inverse {
                halves.push(format!("reduced matrix: {e}"));
            }
            if !rank_full {
                halves.push(format!(
                    "rank/count: good = {}, c - p = {excess}",
                    report.is_good
                ));
            }
            Err(failed(CHECK, halves.join("; ")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixBoundaryReport {
    pub n: usize,
    pub kernel_dim: usize,
    pub old_coordinates: usize,
    /// Rank of the kernel basis restricted to coordinates of `D_{n-1}`.
    pub restricted_rank: usize,
    /// Number of 3-subsets of old coordinates rejected by direct boundary
    /// tests, when the scan was small enough to run.
    pub exhaustive_checked: Option<usize>,
    /// The canonical boundary of `D_n`.
    pub boundary: BoundarySet,
}

const EXHAUSTIVE_BOUNDARY_SCAN_LIMIT: usize = 16;

/// No three-point boundary of `D_n` lies inside the coordinates of `D_{n-1}`.
pub fn verify_prefix_boundary(inst: &FamilyInstance) -> Result<PrefixBoundaryReport, FamilyError> {
    const CHECK: &str = "prefix boundary";
    let d = inst.prefix();
    let boundary = find_boundary(d).map_err(|e| failed(CHECK, format!("D_{}: {e}", inst.n)))?;
    if inst.n == 0 {
        return Ok(PrefixBoundaryReport {
            n: 0,
            kernel_dim: boundary.len(),
            old_coordinates: 0,
            restricted_rank: 0,
            exhaustive_checked: None,
            boundary,
        });
    }
    let inc = build_incidence(d);
    let basis = linalg::kernel_basis(inc.matrix());
    if basis.len() != 3 {
        return Err(failed(CHECK, format!("kernel dimension {} != 3", basis.len())));
    }
    let old: HashSet<CoordinateLabel> = inst
        .prefix()
        .subset(&(0..3 + 5 * (inst.n - 1)).collect::<Vec<_>>())?
        .coordinates()
        .into_iter()
        .collect();
    let old_cols: Vec<usize> = inc
        .col_labels()
        .iter()
        .enumerate()
        .filter(|(_, c)| old.contains(*c))
        .map(|(i, _)| i)
        .collect();
    let mut k = Matrix::zeros(inc.coordinate_count(), 3);
    for (j, v) in basis.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            k.set(i, j, x.clone());
        }
    }
    let restricted_rank = linalg::rank(&k.select(&old_cols, &[0, 1, 2]));
    if restricted_rank >= 3 {
        return Err(failed(
            CHECK,
            format!("kernel restricted to old coordinates has rank {restricted_rank}"),
        ));
    }
    let exhaustive_checked = if old_cols.len() <= EXHAUSTIVE_BOUNDARY_SCAN_LIMIT {
        let mut checked = 0;
        for triple in old_cols.iter().copied().combinations(3) {
            if analysis::kernel_projects_onto(&k, &triple) {
                let names = triple.iter().map(|&c| inc.col_labels()[c].to_string()).join(", ");
                return Err(failed(CHECK, format!("old coordinates {{{names}}} form a boundary")));
            }
            checked += 1;
        }
        Some(checked)
    } else {
        None
    };
    if boundary.coords.iter().all(|c| old.contains(c)) {
        return Err(failed(CHECK, "canonical boundary avoids the newest block"));
    }
    Ok(PrefixBoundaryReport {
        n: inst.n,
        kernel_dim: 3,
        old_coordinates: old_cols.len(),
        restricted_rank,
        exhaustive_checked,
        boundary,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockReport {
    pub m: usize,
    /// Coordinates first introduced by the block.
    pub new_coordinates: Vec<CoordinateLabel>,
    pub subsets_checked: usize,
    /// Earlier points each subset was compared against.
    pub singletons_checked: usize,
}

/// The two counting properties of block `A_m`, over all 31 non-empty subsets:
/// every `k` points use at least `k` coordinates new to the block, and at
/// least `k + 1` coordinates missing from any single earlier point.
pub fn verify_block_properties(
    inst: &FamilyInstance,
    m: usize,
) -> Result<BlockReport, FamilyError> {
    const CHECK: &str = "block properties";
    if m == 0 || m > inst.n {
        return Err(FamilyError::FamilyTooSmall { n: inst.n, needed: m.max(1) });
    }
    let earlier: Vec<Point> = inst.prefix().points()[..3 + 5 * (m - 1)].to_vec();
    let old: HashSet<&CoordinateLabel> = earlier.iter().flat_map(|p| p.coords()).collect();
    let blk = inst.block(m);
    let new_coordinates: Vec<CoordinateLabel> = blk
        .coordinates()
        .into_iter()
        .filter(|c| !old.contains(c))
        .collect();
    let expected: HashSet<CoordinateLabel> =
        (5 * m as i64 - 4..=5 * m as i64).map(alpha).collect();
    if new_coordinates.iter().cloned().collect::<HashSet<_>>() != expected {
        return Err(failed(
            CHECK,
            format!("block {m} introduces {} coordinates, not α_{}..α_{}", new_coordinates.len(), 5 * m - 4, 5 * m),
        ));
    }
    let base = 3 + 5 * (m - 1);
    let mut subsets_checked = 0;
    for k in 1..=5 {
        for subset in (0..5).combinations(k) {
            let coords: HashSet<&CoordinateLabel> =
                subset.iter().flat_map(|&i| blk.point(i).coords()).collect();
            let fresh = coords.iter().filter(|c| !old.contains(**c)).count();
            let names = || subset.iter().map(|i| format!("a{}", base + i + 1)).join(", ");
            if fresh < k {
                return Err(failed(
                    CHECK,
                    format!("{{{}}} uses only {fresh} new coordinates", names()),
                ));
            }
            for (i, a) in earlier.iter().enumerate() {
                let avoid = coords.iter().filter(|c| !a.coords().contains(c)).count();
                if avoid < k + 1 {
                    return Err(failed(
                        CHECK,
                        format!("{{{}}} has only {avoid} coordinates outside a{}", names(), i + 1),
                    ));
                }
            }
            subsets_checked += 1;
        }
    }
    Ok(BlockReport {
        m,
        new_coordinates,
        subsets_checked,
        singletons_checked: earlier.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoFullSubsetsReport {
    pub n: usize,
    pub points: usize,
    pub full_subsets: usize,
}

/// Exhaustively confirms that only singletons of `D_n` are full.
pub fn verify_no_full_subsets(
    inst: &FamilyInstance,
    cap: usize,
) -> Result<NoFullSubsetsReport, FamilyError> {
    let d = inst.prefix();
    let full = components::full_subset_indices(d, d.len(), cap)?;
    if let Some(bad) = full.iter().find(|s| s.len() > 1) {
        let names = bad.iter().map(|i| format!("a{}", i + 1)).join(", ");
        return Err(failed("no full subsets", format!("{{{names}}} is full")));
    }
    if full.len() != d.len() {
        return Err(failed("no full subsets", "some singleton was not reported full"));
    }
    Ok(NoFullSubsetsReport {
        n: inst.n,
        points: d.len(),
        full_subsets: full.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicReport {
    pub n: usize,
    pub from: usize,
    pub to: usize,
    pub size: usize,
    pub alternatives: usize,
}

/// The geodesic between `a_1` and `a_{5n+3}` in `F_n` is all of `F_n`.
pub fn verify_geodesic(inst: &FamilyInstance, cap: usize) -> Result<GeodesicReport, FamilyError> {
    const CHECK: &str = "geodesic";
    let full = inst.require(1)?;
    let (from, to) = (0, 5 * inst.n + 2);
    let g = components::geodesic(full, full.point(from), full.point(to), cap)?;
    let everything: Vec<usize> = (0..full.len()).collect();
    match &g.subset {
        None => Err(failed(CHECK, "no full subset contains both endpoints")),
        Some(s) if *s != everything => {
            let names = s.iter().map(|i| format!("#{i}")).join(", ");
            Err(failed(CHECK, format!("smaller full witness {{{names}}}")))
        }
        Some(_) if g.alternatives() > 0 || !g.minimal => {
            Err(failed(CHECK, "witness is not the unique minimal one"))
        }
        Some(s) => Ok(GeodesicReport {
            n: inst.n,
            from,
            to,
            size: s.len(),
            alternatives: 0,
        }),
    }
}

/// Per-block row-sum statistics of `M_n⁻¹` and a bound
/// `C1 + C2 (1 - 2^-m)` holding for every block of every `n` up to `n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSumBoundFit {
    pub c1: Rational,
    pub c2: Rational,
    pub n_max: usize,
    /// `block_sums[n - 1][m - 1]`: largest absolute row sum among the five
    /// rows of block `m` of `M_n⁻¹`.
    pub block_sums: Vec<Vec<Rational>>,
    /// Signed sum of the row attaining each entry of `block_sums`.
    pub signed_block_sums: Vec<Vec<Rational>>,
    /// Whether block `m` has the same sum for every `n > m`.
    pub stable: bool,
    /// Coordinate of each row of `M_{n_max}⁻¹` (rows follow the reduced
    /// matrix's columns).
    pub row_coordinates: Vec<CoordinateLabel>,
}

impl RowSumBoundFit {
    pub fn bound(&self, m: usize) -> Rational {
        &self.c1 + &self.c2 * (Rational::one() - half_pow(m))
    }
}

fn half_pow(m: usize) -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(2).pow(m as u32))
}

/// Rows `5m-1 ..= 5m+3` (1-based) of `M_n⁻¹`, i.e. the rows of `α_{5m-4}..α_{5m}`.
pub fn inverse_block_rows(m: usize) -> std::ops::RangeInclusive<usize> {
    5 * m - 2..=5 * m + 2
}

/// Per-block `(max absolute row sum, signed sum of that row)` of an inverse.
pub fn block_row_sums(inverse: &Matrix, n: usize) -> Vec<(Rational, Rational)> {
    let abs = linalg::abs_row_sums(inverse);
    let signed = linalg::row_sums(inverse);
    (1..=n)
        .map(|m| {
            let r = inverse_block_rows(m)
                .max_by(|&a, &b| abs[a].cmp(&abs[b]).then(b.cmp(&a)))
                .expect("five rows");
            (abs[r].clone(), signed[r].clone())
        })
        .collect()
}

/// The tightest `(C1, C2)` with `C2 >= 0` over per-block maxima `peaks[m-1]`:
/// minimizes the total slack `sum_m (C1 + C2 g_m - peak_m)` with
/// `g_m = 1 - 2^-m`. The optimum is a vertex of the feasible region, so the
/// candidates are the pairwise intersections of tight constraints and the
/// flat bound `C2 = 0`.
pub fn fit_bound(peaks: &[Rational]) -> (Rational, Rational) {
    assert!(!peaks.is_empty());
    let g: Vec<Rational> = (1..=peaks.len()).map(|m| Rational::one() - half_pow(m)).collect();
    let feasible = |c1: &Rational, c2: &Rational| {
        !c2.is_negative() && peaks.iter().zip(&g).all(|(s, gm)| c1 + c2 * gm >= *s)
    };
    let weight: Rational = g.iter().sum();
    let objective = |c1: &Rational, c2: &Rational| int(peaks.len() as i64) * c1 + c2 * &weight;

    let flat = peaks.iter().max().expect("non-empty").clone();
    let mut best = (flat, Rational::zero());
    for (i, j) in (0..peaks.len()).tuple_combinations() {
        let c2 = (&peaks[j] - &peaks[i]) / (&g[j] - &g[i]);
        let c1 = &peaks[i] - &c2 * &g[i];
        if !feasible(&c1, &c2) {
            continue;
        }
        let better = objective(&c1, &c2)
            .cmp(&objective(&best.0, &best.1))
            .then_with(|| c1.cmp(&best.0))
            .is_lt();
        if better {
            best = (c1, c2);
        }
    }
    best
}

pub fn row_sum_bound_report(n_max: usize) -> Result<RowSumBoundFit, FamilyError> {
    const CHECK: &str = "row sums";
    if n_max < 2 {
        return Err(FamilyError::FamilyTooSmall { n: n_max, needed: 2 });
    }
    let mut block_sums = Vec::with_capacity(n_max);
    let mut signed_block_sums = Vec::with_capacity(n_max);
    let mut row_coordinates = Vec::new();
    for n in 1..=n_max {
        let inst = gen_family(n as i64)?;
        let reduced = reduced_matrix(&inst)?;
        let inverse = linalg::invert(&reduced.matrix).map_err(|e: LinalgError| {
            failed(CHECK, format!("M_{n} is not invertible: {e}"))
        })?;
        let (abs, signed): (Vec<_>, Vec<_>) = block_row_sums(&inverse, n).into_iter().unzip();
        block_sums.push(abs);
        signed_block_sums.push(signed);
        if n == n_max {
            row_coordinates = reduced.col_coords;
        }
    }
    let peaks: Vec<Rational> = (0..n_max)
        .map(|m| {
            block_sums[m..]
                .iter()
                .map(|row| row[m].clone())
                .max()
                .expect("n_max >= m")
        })
        .collect();
    let (c1, c2) = fit_bound(&peaks);
    let stable = (0..n_max).all(|m| {
        block_sums[m + 1..]
            .iter()
            .map(|row| &row[m])
            .all_equal()
    });
    let fit = RowSumBoundFit {
        c1,
        c2,
        n_max,
        block_sums,
        signed_block_sums,
        stable,
        row_coordinates,
    };
    for (n, row) in fit.block_sums.iter().enumerate() {
        for (m, s) in row.iter().enumerate() {
            if *s > fit.bound(m + 1) {
                return Err(failed(
                    CHECK,
                    format!("block {} of M_{}⁻¹ sums to {s} above the bound", m + 1, n + 1),
                ));
            }
        }
    }
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frac;

    fn syms(p: &Point) -> Vec<&str> {
        p.symbols().collect()
    }

    #[test]
    fn first_block_points() {
        let f = gen_family(0).unwrap();
        let d = f.prefix();
        assert_eq!(d.len(), 3);
        assert_eq!(syms(d.point(0)), ["x1", "x2", "x3"]);
        assert_eq!(syms(d.point(1)), ["y1", "y2", "x3"]);
        assert_eq!(syms(d.point(2)), ["y1", "x2", "z3"]);
        assert!(f.full_set().is_none());
        assert_eq!(f.block_indices(0), 0..3);
    }

    #[test]
    fn listed_points_of_first_two_blocks() {
        let f = gen_family(2).unwrap();
        let d = f.prefix();
        let listed: [&[&str]; 10] = [
            &["α1", "α2", "α3"],
            &["α4", "α5", "α3"],
            &["α1", "α5", "z3"],
            &["α4", "α2", "x3"],
            &["x1", "y2", "α3"],
            &["α6", "α7", "α8"],
            &["α9", "α10", "α8"],
            &["α6", "α10", "α3"],
            &["α9", "α7", "x3"],
            &["x1", "α2", "α8"],
        ];
        for (i, want) in listed.iter().enumerate() {
            assert_eq!(syms(d.point(3 + i)), *want, "a{}", 4 + i);
        }
        assert_eq!(syms(f.closing_point().unwrap()), ["α9", "y2", "z3"]);
    }

    #[test]
    fn negative_index_rejected() {
        assert_eq!(gen_family(-1), Err(FamilyError::NegativeIndex(-1)));
    }

    #[test]
    fn alpha_axes_are_consistent() {
        assert_eq!(alpha(3).axis(), 3);
        assert_eq!(alpha(8).axis(), 3);
        assert_eq!(alpha(2).axis(), 2);
        assert_eq!(alpha(10).axis(), 2);
        assert_eq!(alpha(4).axis(), 1);
        assert_eq!(alpha(-2), label(3, "z3"));
        assert_eq!(alpha(-3), label(2, "y2"));
    }

    #[test]
    fn reduced_matrix_rows() {
        let r = reduced_matrix(&gen_family(1).unwrap()).unwrap();
        let m = &r.matrix;
        assert_eq!((m.rows(), m.cols()), (8, 8));
        let row = |i: usize| -> Vec<i64> {
            m.row(i).iter().map(|v| if v.is_zero() { 0 } else { 1 }).collect()
        };
        assert_eq!(row(0), [1, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(row(1), [1, 0, 1, 0, 0, 0, 0, 0]);
        assert_eq!(row(2), [0, 0, 0, 1, 1, 1, 0, 0]);
        assert_eq!(row(3), [0, 0, 0, 0, 0, 1, 1, 1]);
        assert_eq!(row(4), [0, 0, 1, 1, 0, 0, 0, 1]);
        assert_eq!(row(5), [0, 0, 0, 0, 1, 0, 1, 0]);
        assert_eq!(row(6), [0, 1, 0, 0, 0, 1, 0, 0]);
        assert_eq!(row(7), [0, 1, 1, 0, 0, 0, 1, 0]);
        assert_eq!(
            reduced_matrix(&gen_family(0).unwrap()),
            Err(FamilyError::FamilyTooSmall { n: 0, needed: 1 })
        );
    }

    #[test]
    fn inverse_first_row_matches_display() {
        let rep = verify_full_via_inverse(&gen_family(1).unwrap()).unwrap();
        let want = [
            frac(2, 3),
            frac(1, 3),
            frac(1, 3),
            frac(1, 3),
            frac(-1, 3),
            frac(-1, 3),
            frac(-2, 3),
            int(0),
        ];
        assert_eq!(rep.inverse.row(0), want);
        assert_eq!(linalg::abs_row_sums(&rep.inverse)[0], int(3));
        assert_eq!(linalg::row_sums(&rep.inverse)[0], frac(1, 3));
    }

    #[test]
    fn dropping_closing_point_fails_fullness() {
        let inst = gen_family(2).unwrap().without_closing_point();
        match verify_full_via_inverse(&inst) {
            Err(FamilyError::VerificationFailed { check, detail }) => {
                assert_eq!(check, "fullness");
                assert!(detail.contains("not square"), "{detail}");
                assert!(detail.contains("c - p = 3"), "{detail}");
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn prefix_boundary_small_cases() {
        let r0 = verify_prefix_boundary(&gen_family(0).unwrap()).unwrap();
        assert_eq!(r0.kernel_dim, 3);
        let r1 = verify_prefix_boundary(&gen_family(1).unwrap()).unwrap();
        assert_eq!(r1.old_coordinates, 6);
        assert_eq!(r1.exhaustive_checked, Some(20));
        assert!(r1.restricted_rank < 3);
        assert!(r1.boundary.coords.iter().any(|c| c.symbol().starts_with('α')));
    }

    #[test]
    fn block_property_counts() {
        let inst = gen_family(2).unwrap();
        let r = verify_block_properties(&inst, 1).unwrap();
        assert_eq!(r.subsets_checked, 31);
        assert_eq!(r.singletons_checked, 3);
        assert_eq!(r.new_coordinates.len(), 5);
        let r = verify_block_properties(&inst, 2).unwrap();
        assert_eq!(r.singletons_checked, 8);
        assert!(verify_block_properties(&inst, 3).is_err());
        assert!(verify_block_properties(&inst, 0).is_err());
    }

    #[test]
    fn fit_recovers_exact_curve() {
        let peaks: Vec<Rational> = (1..=6)
            .map(|m| int(3) + int(5) * (Rational::one() - half_pow(m)))
            .collect();
        assert_eq!(fit_bound(&peaks), (int(3), int(5)));
        assert_eq!(fit_bound(&[int(2), int(1)]), (int(2), int(0)));
    }

    #[test]
    fn small_row_sum_report() {
        let fit = row_sum_bound_report(3).unwrap();
        assert_eq!(fit.block_sums[0], vec![frac(22, 3)]);
        assert_eq!(fit.block_sums[1], vec![frac(13, 2), frac(47, 6)]);
        assert!(fit.stable);
        assert!(row_sum_bound_report(1).is_err());
    }
}
