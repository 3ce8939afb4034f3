//! Full subsets, full and related components, and geodesics.
//!
//! Everything here is exhaustive search over subsets, so it only runs on sets
//! up to an enumeration cap. A subset `F` can only be full when
//! `c(F) - |F| = n - 1`; that count is maintained incrementally during the
//! search and the rank test runs only on subsets that pass it. When the
//! ambient set is good every subset is good, and the rank test is skipped.

use itertools::Itertools;
use thiserror::Error;

use crate::analysis::analyze_incidence;
use crate::linalg;
use crate::model::{build_incidence, IncidenceSystem, ModelError, Point, PointSet};

pub const DEFAULT_ENUMERATION_CAP: usize = 22;

/// Subsets are held as bitmasks, so no cap can exceed this.
pub const MAX_ENUMERATION_CAP: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComponentsError {
    #[error("set has {size} points, above the enumeration cap of {cap}; raise the cap to proceed")]
    SetTooLarge { size: usize, cap: usize },
    #[error("the point set is not good")]
    NotGood,
    #[error("point {0} is not in the set")]
    PointNotInSet(Point),
    #[error("maximal full subsets overlap without coinciding")]
    OverlappingComponents,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Disjoint blocks of point indices covering the set, each sorted, ordered by
/// their smallest index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    fn from_masks(mut masks: Vec<u64>) -> Self {
        masks.sort_by_key(|m| m.trailing_zeros());
        Self {
            blocks: masks.into_iter().map(mask_indices).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn point_sets(&self, set: &PointSet) -> Vec<PointSet> {
        self.blocks
            .iter()
            .map(|b| set.subset(b).expect("block indices in range"))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicResult {
    pub endpoints: (Point, Point),
    /// The canonical minimum-cardinality full subset, as point indices.
    pub subset: Option<Vec<usize>>,
    /// Every full subset of that minimum cardinality containing both
    /// endpoints, canonical one first.
    pub witnesses: Vec<Vec<usize>>,
    /// Post-hoc check: dropping any point of `subset` loses an endpoint or
    /// fullness.
    pub minimal: bool,
}

impl GeodesicResult {
    pub fn found(&self) -> bool {
        self.subset.is_some()
    }

    /// Number of minimum-cardinality witnesses besides the canonical one.
    pub fn alternatives(&self) -> usize {
        self.witnesses.len().saturating_sub(1)
    }
}

fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

fn indices_mask(indices: &[usize]) -> u64 {
    indices.iter().fold(0, |m, &i| m | 1 << i)
}

fn check_cap(set: &PointSet, cap: usize) -> Result<(), ComponentsError> {
    let cap = cap.min(MAX_ENUMERATION_CAP);
    if set.len() > cap {
        return Err(ComponentsError::SetTooLarge {
            size: set.len(),
            cap,
        });
    }
    Ok(())
}

/// Fullness tests for subsets of one fixed set.
struct SubsetOracle {
    inc: IncidenceSystem,
    row_cols: Vec<Vec<usize>>,
    target: usize,
    ambient_good: bool,
}

impl SubsetOracle {
    fn new(set: &PointSet) -> Self {
        let inc = build_incidence(set);
        let row_cols = (0..set.len()).map(|r| inc.row_columns(r)).collect();
        let ambient_good = analyze_incidence(&inc).is_good;
        Self {
            inc,
            row_cols,
            target: set.dimension() - 1,
            ambient_good,
        }
    }

    fn coordinate_count(&self, rows: &[usize]) -> usize {
        rows.iter()
            .flat_map(|&r| self.row_cols[r].iter().copied())
            .unique()
            .count()
    }

    fn rows_independent(&self, rows: &[usize]) -> bool {
        if self.ambient_good {
            return true;
        }
        let cols: Vec<usize> = (0..self.inc.coordinate_count()).collect();
        linalg::rank(&self.inc.matrix().select(rows, &cols)) == rows.len()
    }

    fn is_full(&self, rows: &[usize]) -> bool {
        !rows.is_empty()
            && self.coordinate_count(rows) == rows.len() + self.target
            && self.rows_independent(rows)
    }

    /// Depth-first search over all subsets with at most `max_size` points,
    /// tracking coordinate multiplicities so the count test is O(n) per node.
    fn full_masks(&self, max_size: usize) -> Vec<u64> {
        struct Walk<'a> {
            oracle: &'a SubsetOracle,
            max_size: usize,
            counts: Vec<u32>,
            distinct: usize,
            chosen: Vec<usize>,
            found: Vec<u64>,
        }

        impl Walk<'_> {
            fn visit(&mut self, start: usize) {
                let oracle = self.oracle;
                if self.chosen.len() == self.max_size {
                    return;
                }
                for i in start..oracle.row_cols.len() {
                    for &c in &oracle.row_cols[i] {
                        if self.counts[c] == 0 {
                            self.distinct += 1;
                        }
                        self.counts[c] += 1;
                    }
                    self.chosen.push(i);
                    if self.distinct == self.chosen.len() + oracle.target
                        && oracle.rows_independent(&self.chosen)
                    {
                        self.found.push(indices_mask(&self.chosen));
                    }
                    self.visit(i + 1);
                    self.chosen.pop();
                    for &c in &oracle.row_cols[i] {
                        self.counts[c] -= 1;
                        if self.counts[c] == 0 {
                            self.distinct -= 1;
                        }
                    }
                }
            }
        }

        let mut walk = Walk {
            oracle: self,
            max_size,
            counts: vec![0; self.inc.coordinate_count()],
            distinct: 0,
            chosen: Vec::new(),
            found: Vec::new(),
        };
        walk.visit(0);
        let mut found = walk.found;
        found.sort_by_key(|&m| (m.count_ones(), mask_indices(m)));
        found
    }
}

/// Point indices of every full subset with at most `max_size` points, ordered
/// by size and then lexicographically.
pub fn full_subset_indices(
    set: &PointSet,
    max_size: usize,
    cap: usize,
) -> Result<Vec<Vec<usize>>, ComponentsError> {
    check_cap(set, cap)?;
    Ok(SubsetOracle::new(set)
        .full_masks(max_size)
        .into_iter()
        .map(mask_indices)
        .collect())
}

pub fn enumerate_full_subsets(
    set: &PointSet,
    max_size: usize,
    cap: usize,
) -> Result<Vec<PointSet>, ComponentsError> {
    full_subset_indices(set, max_size, cap)?
        .iter()
        .map(|ix| set.subset(ix).map_err(Into::into))
        .collect()
}

fn full_masks_of_good_set(set: &PointSet, cap: usize) -> Result<Vec<u64>, ComponentsError> {
    check_cap(set, cap)?;
    let oracle = SubsetOracle::new(set);
    if !oracle.ambient_good {
        return Err(ComponentsError::NotGood);
    }
    Ok(oracle.full_masks(set.len()))
}

/// Maximal full subsets. Candidates are scanned largest first; each one must
/// either lie inside an accepted block or be disjoint from all of them.
pub fn full_components(set: &PointSet, cap: usize) -> Result<Partition, ComponentsError> {
    let mut masks = full_masks_of_good_set(set, cap)?;
    masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    let mut blocks: Vec<u64> = Vec::new();
    for m in masks {
        if blocks.iter().any(|&b| m & b == m) {
            continue;
        }
        if blocks.iter().any(|&b| m & b != 0) {
            return Err(ComponentsError::OverlappingComponents);
        }
        blocks.push(m);
    }
    debug_assert_eq!(
        blocks.iter().fold(0u64, |a, b| a | b).count_ones() as usize,
        set.len()
    );
    Ok(Partition::from_masks(blocks))
}

/// Classes of "some full subset contains both points", closed transitively.
pub fn related_components(set: &PointSet, cap: usize) -> Result<Partition, ComponentsError> {
    let masks = full_masks_of_good_set(set, cap)?;
    let mut parent: Vec<usize> = (0..set.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for m in masks {
        let ix = mask_indices(m);
        for &j in &ix[1..] {
            let (a, b) = (find(&mut parent, ix[0]), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: Vec<u64> = Vec::new();
    let mut root_slot = std::collections::HashMap::new();
    for i in 0..set.len() {
        let r = find(&mut parent, i);
        let slot = *root_slot.entry(r).or_insert_with(|| {
            classes.push(0);
            classes.len() - 1
        });
        classes[slot] |= 1 << i;
    }
    Ok(Partition::from_masks(classes))
}

/// A minimum-cardinality full subset containing `x` and `y`, searched by
/// increasing size. All witnesses of that size are reported.
pub fn geodesic(
    set: &PointSet,
    x: &Point,
    y: &Point,
    cap: usize,
) -> Result<GeodesicResult, ComponentsError> {
    let xi = set
        .index_of(x)
        .ok_or_else(|| ComponentsError::PointNotInSet(x.clone()))?;
    let yi = set
        .index_of(y)
        .ok_or_else(|| ComponentsError::PointNotInSet(y.clone()))?;
    check_cap(set, cap)?;
    let oracle = SubsetOracle::new(set);
    let ends: Vec<usize> = if xi == yi { vec![xi] } else { vec![xi, yi] };
    let others: Vec<usize> = (0..set.len()).filter(|i| !ends.contains(i)).collect();

    let mut witnesses = Vec::new();
    for extra in 0..=others.len() {
        for combo in others.iter().copied().combinations(extra) {
            let mut rows: Vec<usize> = ends.iter().copied().chain(combo).collect();
            rows.sort_unstable();
            if oracle.is_full(&rows) {
                witnesses.push(rows);
            }
        }
        if !witnesses.is_empty() {
            break;
        }
    }
    witnesses.sort();
    let subset = witnesses.first().cloned();
    let minimal = subset.as_ref().is_none_or(|s| {
        (0..s.len()).all(|drop| {
            let rest: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != drop)
                .map(|(_, &i)| i)
                .collect();
            !(rest.contains(&xi) && rest.contains(&yi) && oracle.is_full(&rest))
        })
    });
    Ok(GeodesicResult {
        endpoints: (x.clone(), y.clone()),
        subset,
        witnesses,
        minimal,
    })
}
