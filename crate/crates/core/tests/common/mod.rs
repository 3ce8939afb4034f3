//! Generators and independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use goodsets::analysis;
use goodsets::linalg::{frac, Rational};
use goodsets::model::validate;
use goodsets::PointSet;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn set_of(n: usize, rows: &[&[&str]]) -> PointSet {
    let raw: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect())
        .collect();
    validate(&raw, n).unwrap()
}

/// Up to `max_points` distinct random points, each axis drawing from
/// `alphabet` symbols.
pub fn random_set(rng: &mut impl Rng, dim: usize, max_points: usize, alphabet: usize) -> PointSet {
    let target = rng.gen_range(1..=max_points);
    let mut rows: Vec<Vec<String>> = Vec::new();
    for _ in 0..target * 3 {
        if rows.len() == target {
            break;
        }
        let row: Vec<String> = (0..dim)
            .map(|axis| format!("s{}_{}", axis, rng.gen_range(0..alphabet)))
            .collect();
        if !rows.contains(&row) {
            rows.push(row);
        }
    }
    validate(&rows, dim).unwrap()
}

/// A random good set: points of a random set are kept greedily while the
/// rows stay independent.
pub fn random_good_set(rng: &mut impl Rng, dim: usize, max_points: usize) -> PointSet {
    let alphabet = rng.gen_range(2..=5);
    let raw = random_set(rng, dim, max_points, alphabet);
    let mut kept: Vec<usize> = Vec::new();
    for i in 0..raw.len() {
        kept.push(i);
        if !analysis::analyze_goodness(&raw.subset(&kept).unwrap()).is_good {
            kept.pop();
        }
    }
    raw.subset(&kept).unwrap()
}

pub fn random_rational(rng: &mut impl Rng) -> Rational {
    frac(rng.gen_range(-20..=20), rng.gen_range(1..=6))
}

/// Disjoint-set forest used as the graph-side oracle in dimension 2.
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    /// False when `a` and `b` were already connected.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// The bipartite graph of a 2-D set: vertices are coordinates (left symbols
/// then right symbols), edges are points.
pub struct Bipartite {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

pub fn bipartite(set: &PointSet) -> Bipartite {
    assert_eq!(set.dimension(), 2);
    let mut ids: HashMap<(usize, String), usize> = HashMap::new();
    let mut id = |axis: usize, s: &str| {
        let next = ids.len();
        *ids.entry((axis, s.to_owned())).or_insert(next)
    };
    let edges = set
        .iter()
        .map(|p| {
            let mut s = p.symbols();
            let a = id(1, s.next().unwrap());
            let b = id(2, s.next().unwrap());
            (a, b)
        })
        .collect();
    Bipartite {
        vertices: ids.len(),
        edges,
    }
}

/// `(acyclic, tree)` for the bipartite graph of a 2-D set.
pub fn forest_shape(set: &PointSet) -> (bool, bool) {
    let g = bipartite(set);
    let mut uf = UnionFind::new(g.vertices);
    let acyclic = g.edges.iter().all(|&(a, b)| uf.union(a, b));
    let tree = acyclic && !g.edges.is_empty() && g.vertices == g.edges.len() + 1;
    (acyclic, tree)
}

/// Minimal subtree containing edges `e1` and `e2` of a forest, as sorted
/// edge indices; `None` if they lie in different trees.
pub fn tree_path(set: &PointSet, e1: usize, e2: usize) -> Option<Vec<usize>> {
    let g = bipartite(set);
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.vertices];
    for (e, &(a, b)) in g.edges.iter().enumerate() {
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    let bfs = |from: usize, to: usize| -> Option<Vec<usize>> {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; g.vertices];
        let mut seen = vec![false; g.vertices];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut path = Vec::new();
                let mut cur = to;
                while let Some((p, e)) = prev[cur] {
                    path.push(e);
                    cur = p;
                }
                return Some(path);
            }
            for &(w, e) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = Some((v, e));
                    queue.push_back(w);
                }
            }
        }
        None
    };
    let (a1, b1) = g.edges[e1];
    let (a2, b2) = g.edges[e2];
    let best = [(a1, a2), (a1, b2), (b1, a2), (b1, b2)]
        .iter()
        .filter_map(|&(u, v)| bfs(u, v))
        .min_by_key(Vec::len)?;
    let mut edges: Vec<usize> = best.into_iter().chain([e1, e2]).collect();
    edges.sort_unstable();
    edges.dedup();
    Some(edges)
}

/// A random forest as a 2-D point set: each new right vertex either starts
/// a new tree or hangs off an existing left vertex, and vice versa.
pub fn random_forest(rng: &mut impl Rng, max_edges: usize) -> PointSet {
    let edges = rng.gen_range(1..=max_edges);
    let mut left = vec![0usize];
    let mut right = vec![0usize];
    let mut rows = vec![vec!["l0".to_string(), "r0".to_string()]];
    while rows.len() < edges {
        match rng.gen_range(0..3) {
            0 => {
                let l = *left.choose(rng).unwrap();
                let r = right.len();
                right.push(r);
                rows.push(vec![format!("l{l}"), format!("r{r}")]);
            }
            1 => {
                let r = *right.choose(rng).unwrap();
                let l = left.len();
                left.push(l);
                rows.push(vec![format!("l{l}"), format!("r{r}")]);
            }
            _ => {
                let (l, r) = (left.len(), right.len());
                left.push(l);
                right.push(r);
                rows.push(vec![format!("l{l}"), format!("r{r}")]);
            }
        }
    }
    rows.shuffle(rng);
    validate(&rows, 2).unwrap()
}

/// Every full subset by direct test of each of the `2^|S|` subsets.
pub fn brute_force_full(set: &PointSet) -> Vec<Vec<usize>> {
    assert!(set.len() <= 16);
    let mut out: Vec<Vec<usize>> = (1u32..1 << set.len())
        .map(|mask| (0..set.len()).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|ix| analysis::is_full(&set.subset(ix).unwrap()).unwrap())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}
