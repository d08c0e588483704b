//! Bipartite graphs, their primal and dual hypergraphs, induced
//! subhypergraphs, Delaunay graphs and brute-force VC-dimension.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::geometry::{intersects, GeomObject};
use crate::par::{self, Exec};

/// Smallest integer size `s` with `s >= eps * n`, never below 1.
///
/// A tiny relative slack absorbs products such as `0.3 * 10` that land just
/// above an integer in floating point.
pub fn heavy_threshold(eps: f64, n: usize) -> usize {
    let x = eps * n as f64;
    let c = (x - 1e-9 * x.abs().max(1.0)).ceil();
    (c.max(1.0)) as usize
}

/// `floor(eps * n)` with the same slack as [`heavy_threshold`].
pub fn floor_product(eps: f64, n: usize) -> usize {
    let x = eps * n as f64;
    (x + 1e-9 * x.abs().max(1.0)).floor().max(0.0) as usize
}

/// A bipartite graph with sides `A = 0..m` and `B = 0..n`, stored as sorted
/// adjacency lists on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    adj_a: Vec<Vec<usize>>,
    adj_b: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn empty(m: usize, n: usize) -> Self {
        BipartiteGraph { adj_a: vec![Vec::new(); m], adj_b: vec![Vec::new(); n] }
    }

    /// Build from `(a, b)` index pairs; duplicates are ignored.
    ///
    /// # Panics
    /// If an index is out of range.
    pub fn from_edges<I>(m: usize, n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj_a = vec![Vec::new(); m];
        for (i, j) in edges {
            assert!(i < m && j < n, "edge ({i},{j}) out of range for {m}x{n}");
            adj_a[i].push(j);
        }
        for row in &mut adj_a {
            row.sort_unstable();
            row.dedup();
        }
        Self::from_rows(adj_a, n)
    }

    /// Build from the A-side adjacency rows (each sorted, deduplicated).
    pub(crate) fn from_rows(adj_a: Vec<Vec<usize>>, n: usize) -> Self {
        let mut adj_b = vec![Vec::new(); n];
        for (i, row) in adj_a.iter().enumerate() {
            for &j in row {
                adj_b[j].push(i);
            }
        }
        BipartiteGraph { adj_a, adj_b }
    }

    pub fn m(&self) -> usize {
        self.adj_a.len()
    }

    pub fn n(&self) -> usize {
        self.adj_b.len()
    }

    pub fn neighbors_a(&self, i: usize) -> &[usize] {
        &self.adj_a[i]
    }

    pub fn neighbors_b(&self, j: usize) -> &[usize] {
        &self.adj_b[j]
    }

    pub fn degree_a(&self, i: usize) -> usize {
        self.adj_a[i].len()
    }

    pub fn degree_b(&self, j: usize) -> usize {
        self.adj_b[j].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj_a.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj_a[i].binary_search(&j).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj_a.iter().enumerate().flat_map(|(i, row)| row.iter().map(move |&j| (i, j)))
    }

    /// The same graph with the roles of A and B exchanged.
    pub fn swapped(&self) -> Self {
        BipartiteGraph { adj_a: self.adj_b.clone(), adj_b: self.adj_a.clone() }
    }

    /// Induced subgraph on the given (sorted, distinct) vertex lists,
    /// reindexed to `0..keep_a.len()` and `0..keep_b.len()`.
    pub fn induced(&self, keep_a: &[usize], keep_b: &[usize]) -> Self {
        let mut pos_b = vec![usize::MAX; self.n()];
        for (new, &old) in keep_b.iter().enumerate() {
            pos_b[old] = new;
        }
        let rows = keep_a
            .iter()
            .map(|&i| self.adj_a[i].iter().filter_map(|&j| Some(pos_b[j]).filter(|&p| p != usize::MAX)).collect())
            .collect();
        Self::from_rows(rows, keep_b.len())
    }

    /// A copy with the edge `(i, j)` removed.
    pub fn without_edge(&self, i: usize, j: usize) -> Self {
        let mut g = self.clone();
        g.adj_a[i].retain(|&x| x != j);
        g.adj_b[j].retain(|&x| x != i);
        g
    }
}

/// Two geometric families and their bipartite intersection graph.
#[derive(Debug, Clone)]
pub struct BipartiteIntersectionGraph {
    pub side_a: Vec<GeomObject>,
    pub side_b: Vec<GeomObject>,
    pub graph: BipartiteGraph,
}

impl BipartiteIntersectionGraph {
    pub fn build(side_a: Vec<GeomObject>, side_b: Vec<GeomObject>) -> Self {
        Self::build_with(side_a, side_b, Exec::default())
    }

    /// Pairwise intersection tests, parallel over the A side.
    pub fn build_with(side_a: Vec<GeomObject>, side_b: Vec<GeomObject>, exec: Exec) -> Self {
        let rows = par::map(exec, &side_a, |a| {
            side_b.iter().enumerate().filter(|(_, b)| intersects(a, b)).map(|(j, _)| j).collect()
        });
        let graph = BipartiteGraph::from_rows(rows, side_b.len());
        BipartiteIntersectionGraph { side_a, side_b, graph }
    }

    pub fn m(&self) -> usize {
        self.side_a.len()
    }

    pub fn n(&self) -> usize {
        self.side_b.len()
    }

    /// Keep only the listed objects (sorted indices); the graph is
    /// restricted, not recomputed.
    pub fn restrict(&self, keep_a: &[usize], keep_b: &[usize]) -> Self {
        BipartiteIntersectionGraph {
            side_a: keep_a.iter().map(|&i| self.side_a[i]).collect(),
            side_b: keep_b.iter().map(|&j| self.side_b[j]).collect(),
            graph: self.graph.induced(keep_a, keep_b),
        }
    }
}

/// A finite hypergraph on `0..vertex_count`. Hyperedges are sorted vertex
/// lists and may repeat; [`Hypergraph::dedup_view`] gives the distinct ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypergraph {
    pub vertex_count: usize,
    pub hyperedges: Vec<Vec<usize>>,
    /// For each hyperedge, the index of the object that defined it.
    pub source_labels: Option<Vec<usize>>,
}

impl Hypergraph {
    /// Normalizes each hyperedge (sort, dedup).
    ///
    /// # Panics
    /// If a hyperedge mentions a vertex outside `0..vertex_count`.
    pub fn new(vertex_count: usize, hyperedges: Vec<Vec<usize>>) -> Self {
        let hyperedges = hyperedges
            .into_iter()
            .map(|mut e| {
                e.sort_unstable();
                e.dedup();
                assert!(e.iter().all(|&v| v < vertex_count), "hyperedge vertex out of range");
                e
            })
            .collect();
        Hypergraph { vertex_count, hyperedges, source_labels: None }
    }

    /// Distinct hyperedges in sorted order.
    pub fn dedup_view(&self) -> Vec<Vec<usize>> {
        let set: BTreeSet<&Vec<usize>> = self.hyperedges.iter().collect();
        set.into_iter().cloned().collect()
    }

    /// Distinct hyperedges of size at least `threshold`.
    pub fn heavy_edges(&self, threshold: usize) -> Vec<Vec<usize>> {
        let set: BTreeSet<&Vec<usize>> =
            self.hyperedges.iter().filter(|e| e.len() >= threshold).collect();
        set.into_iter().cloned().collect()
    }
}

/// `H_G = (A, {N(b)})`: one hyperedge per B-vertex.
pub fn primal_hypergraph(g: &BipartiteGraph) -> Hypergraph {
    Hypergraph {
        vertex_count: g.m(),
        hyperedges: (0..g.n()).map(|j| g.neighbors_b(j).to_vec()).collect(),
        source_labels: Some((0..g.n()).collect()),
    }
}

/// `H*_G = (B, {N(a)})`: one hyperedge per A-vertex.
pub fn dual_hypergraph(g: &BipartiteGraph) -> Hypergraph {
    Hypergraph {
        vertex_count: g.n(),
        hyperedges: (0..g.m()).map(|i| g.neighbors_a(i).to_vec()).collect(),
        source_labels: Some((0..g.m()).collect()),
    }
}

/// Traces `e ∩ keep`, reindexed over `keep` in increasing vertex order.
/// Duplicates in `keep` are ignored.
pub fn induced_subhypergraph(h: &Hypergraph, keep: &[usize]) -> Hypergraph {
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    let mut pos = vec![usize::MAX; h.vertex_count];
    for (new, &old) in keep.iter().enumerate() {
        pos[old] = new;
    }
    let hyperedges = h
        .hyperedges
        .iter()
        .map(|e| e.iter().map(|&v| pos[v]).filter(|&p| p != usize::MAX).collect())
        .collect();
    Hypergraph { vertex_count: keep.len(), hyperedges, source_labels: h.source_labels.clone() }
}

/// A simple undirected graph; edges stored as `(u, v)` with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Graph {
    pub vertex_count: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(vertex_count: usize, edges: I) -> Self {
        let edges = edges
            .into_iter()
            .map(|(u, v)| {
                assert!(u != v, "self-loop at {u}");
                assert!(u < vertex_count && v < vertex_count);
                (u.min(v), u.max(v))
            })
            .collect();
        Graph { vertex_count, edges }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of edges with both endpoints in `vertices`.
    pub fn induced_edge_count(&self, vertices: &[usize]) -> usize {
        let mut mark = vec![false; self.vertex_count];
        for &v in vertices {
            mark[v] = true;
        }
        self.edges.iter().filter(|&&(u, v)| mark[u] && mark[v]).count()
    }
}

/// Canonical `k`-tuples, each kept with the first witness found for it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalTupleFamily<W> {
    pub k: usize,
    pub tuples: BTreeMap<Vec<usize>, W>,
}

impl<W> CanonicalTupleFamily<W> {
    pub fn new(k: usize) -> Self {
        CanonicalTupleFamily { k, tuples: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.tuples.contains_key(tuple)
    }

    /// Keeps the earlier witness when the tuple is already present.
    pub fn insert(&mut self, tuple: Vec<usize>, witness: W) {
        self.tuples.entry(tuple).or_insert(witness);
    }
}

/// Graph whose edges are the distinct hyperedges of cardinality two.
pub fn delaunay_graph(h: &Hypergraph) -> Graph {
    Graph::new(
        h.vertex_count,
        h.hyperedges.iter().filter(|e| e.len() == 2).map(|e| (e[0], e[1])),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VcProfile {
    pub vc_dim: usize,
    pub witness_shattered_set: Vec<usize>,
    pub cap_reached: bool,
}

/// Is `set` shattered: do the traces realize all `2^|set|` subsets?
pub fn is_shattered(h: &Hypergraph, set: &[usize]) -> bool {
    let k = set.len();
    assert!(k < 64);
    let traces: HashSet<u64> = h.hyperedges.iter().map(|e| trace_mask(e, set)).collect();
    traces.len() as u128 == 1u128 << k
}

fn trace_mask(edge: &[usize], set: &[usize]) -> u64 {
    set.iter()
        .enumerate()
        .filter(|(_, v)| edge.binary_search(v).is_ok())
        .fold(0u64, |acc, (i, _)| acc | (1 << i))
}

/// Brute-force VC-dimension, searching shattered sets level by level.
///
/// Shattering is inherited by subsets, so a `(k+1)`-set is tried only when
/// its `k`-subsets are all shattered. Stops at `cap` and reports
/// `cap_reached` when a shattered set of size `cap` exists.
pub fn vc_dimension(h: &Hypergraph, cap: usize) -> VcProfile {
    // The empty set is shattered iff there is at least one hyperedge.
    if h.hyperedges.is_empty() {
        return VcProfile { vc_dim: 0, witness_shattered_set: vec![], cap_reached: cap == 0 };
    }
    let mut level: Vec<Vec<usize>> = vec![vec![]];
    let mut best: Vec<usize> = vec![];
    while best.len() < cap {
        let current: HashSet<&Vec<usize>> = level.iter().collect();
        let mut next = Vec::new();
        for s in &level {
            let start = s.last().map_or(0, |&v| v + 1);
            for v in start..h.vertex_count {
                let mut cand = s.clone();
                cand.push(v);
                let subsets_ok = (0..cand.len()).all(|skip| {
                    let sub: Vec<usize> =
                        cand.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
                    current.contains(&sub)
                });
                if subsets_ok && is_shattered(h, &cand) {
                    next.push(cand);
                }
            }
        }
        match next.first() {
            Some(s) => best = s.clone(),
            None => break,
        }
        level = next;
    }
    VcProfile { vc_dim: best.len(), cap_reached: best.len() >= cap, witness_shattered_set: best }
}

/// Distinct nonempty hyperedges of size at most `t`.
pub fn small_hyperedges(h: &Hypergraph, t: usize) -> BTreeSet<Vec<usize>> {
    h.hyperedges.iter().filter(|e| !e.is_empty() && e.len() <= t).cloned().collect()
}

/// Number of distinct traces on `subset`: one point evaluation of the
/// shatter function.
pub fn trace_count(h: &Hypergraph, subset: &[usize]) -> usize {
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    h.hyperedges.iter().map(|e| trace_mask(e, &s)).collect::<HashSet<_>>().len()
}
