//! Epsilon-nets and epsilon-t-nets: constructors, verifiers and an exact
//! minimum oracle for tiny instances.
//!
//! Throughout, a hyperedge is *heavy* when its size is at least
//! `eps * vertex_count` (see [`heavy_threshold`]). Verification runs on the
//! distinct heavy hyperedges; identical traces share coverage status.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{heavy_threshold, induced_subhypergraph, Hypergraph};

/// Search budget of [`min_t_net_bruteforce`].
pub const MIN_NET_BUDGET: u128 = 1 << 22;

/// A set of `t`-subsets of vertices, each stored sorted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TNet {
    pub t: usize,
    pub epsilon: f64,
    pub tuples: BTreeSet<Vec<usize>>,
}

impl TNet {
    pub fn new(t: usize, epsilon: f64) -> Self {
        TNet { t, epsilon, tuples: BTreeSet::new() }
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// Outcome of a net verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Valid,
    /// A heavy hyperedge the net fails to hit.
    Missed(Vec<usize>),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// Bookkeeping of the two-stage pseudo-disc construction.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct NetBuildTrace {
    /// `S`, the union of the layers.
    pub cover_set: Vec<usize>,
    /// `K_1, ..., K_t`.
    pub layer_nets: Vec<Vec<usize>>,
    pub removal_order: Vec<usize>,
    pub per_step_tuple_counts: Vec<usize>,
}

/// A sampled epsilon-net and the number of samples drawn to get it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EpsNet {
    pub vertices: Vec<usize>,
    pub attempts: usize,
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange(format!("epsilon must lie in (0, 1], got {eps}")))
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|v| big.binary_search(v).is_ok())
}

/// Calls `f` on every `k`-subset of `items` in lexicographic order.
pub(crate) fn for_each_combination<F: FnMut(&[usize])>(items: &[usize], k: usize, mut f: F) {
    if k > items.len() {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf);
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + items.len() - k) else {
            return;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
        for q in pos..k {
            buf[q] = items[idx[q]];
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Does `s` hit every hyperedge of size at least `eps * n`?
pub fn verify_epsilon_net(h: &Hypergraph, eps: f64, s: &[usize]) -> Result<Verdict> {
    if let Some(&v) = s.iter().find(|&&v| v >= h.vertex_count) {
        return Err(Error::MalformedNet(format!("vertex {v} out of range")));
    }
    let mut mark = vec![false; h.vertex_count];
    for &v in s {
        mark[v] = true;
    }
    let thr = heavy_threshold(eps, h.vertex_count);
    let missed = h.hyperedges.iter().find(|e| e.len() >= thr && !e.iter().any(|&v| mark[v]));
    Ok(missed.map_or(Verdict::Valid, |e| Verdict::Missed(e.clone())))
}

/// Verify-and-retry random sampling.
///
/// Starts with `ceil((8/eps) ln(4/eps)) + 8` vertices drawn without
/// replacement, doubles on failure, and ends at the full vertex set, which
/// is always a net.
pub fn sampled_epsilon_net(h: &Hypergraph, eps: f64, seed: u64) -> Result<EpsNet> {
    check_eps(eps)?;
    let n = h.vertex_count;
    let thr = heavy_threshold(eps, n);
    if h.hyperedges.iter().all(|e| e.len() < thr) {
        return Ok(EpsNet { vertices: vec![], attempts: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut size = ((8.0 / eps) * (4.0 / eps).ln()).ceil() as usize + 8;
    let mut attempts = 0;
    loop {
        attempts += 1;
        if size >= n {
            return Ok(EpsNet { vertices: (0..n).collect(), attempts });
        }
        let mut sample = rand::seq::index::sample(&mut rng, n, size).into_vec();
        sample.sort_unstable();
        if verify_epsilon_net(h, eps, &sample)?.is_valid() {
            return Ok(EpsNet { vertices: sample, attempts });
        }
        size = size.saturating_mul(2);
    }
}

/// `S = K_1 ∪ ... ∪ K_t`: `K_1` an eps-net of `h`, each later `K_i` an
/// (eps/2)-net of the hypergraph induced on the vertices not yet taken.
/// When `eps * n >= 2t`, every heavy hyperedge keeps at least `t` vertices
/// of `S`.
pub fn stacked_cover_set(h: &Hypergraph, eps: f64, t: usize, seed: u64) -> Result<NetBuildTrace> {
    check_eps(eps)?;
    check_t(t)?;
    let need = 2.0 * t as f64;
    let have = eps * h.vertex_count as f64;
    if have + 1e-9 * need < need {
        return Err(Error::PreconditionViolated(format!(
            "eps * n >= 2t required, got eps * n = {have} < {need}"
        )));
    }
    let mut taken = vec![false; h.vertex_count];
    let mut layers = Vec::with_capacity(t);
    for i in 0..t {
        let remaining: Vec<usize> = (0..h.vertex_count).filter(|&v| !taken[v]).collect();
        let layer: Vec<usize> = if i == 0 {
            sampled_epsilon_net(h, eps, seed)?.vertices
        } else {
            let sub = induced_subhypergraph(h, &remaining);
            let net = sampled_epsilon_net(&sub, eps / 2.0, seed.wrapping_add(i as u64))?;
            net.vertices.into_iter().map(|v| remaining[v]).collect()
        };
        for &v in &layer {
            taken[v] = true;
        }
        layers.push(layer);
    }
    let cover_set = (0..h.vertex_count).filter(|&v| taken[v]).collect();
    Ok(NetBuildTrace { cover_set, layer_nets: layers, ..NetBuildTrace::default() })
}

fn check_t(t: usize) -> Result<()> {
    if t == 0 {
        Err(Error::ParamOutOfRange("t must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Two-stage epsilon-t-net for intersection hypergraphs of pseudo-discs.
///
/// Builds the cover set `S`, restricts the heavy hyperedges to `S`, then
/// peels vertices of `S` one at a time: each step picks the vertex lying in
/// the fewest distinct traces of size exactly `t` (lowest index on ties),
/// adds those traces to the net and deletes the vertex.
pub fn pseudodisc_t_net(h: &Hypergraph, eps: f64, t: usize, seed: u64) -> Result<(TNet, NetBuildTrace)> {
    let mut trace = stacked_cover_set(h, eps, t, seed)?;
    let thr = heavy_threshold(eps, h.vertex_count);
    let mut in_s = vec![false; h.vertex_count];
    for &v in &trace.cover_set {
        in_s[v] = true;
    }
    let traces: Vec<Vec<usize>> = h
        .heavy_edges(thr)
        .into_iter()
        .map(|e| e.into_iter().filter(|&v| in_s[v]).collect())
        .collect();
    let mut incidence: HashMap<usize, Vec<usize>> = HashMap::new();
    for (id, tr) in traces.iter().enumerate() {
        for &v in tr {
            incidence.entry(v).or_default().push(id);
        }
    }
    let mut size: Vec<usize> = traces.iter().map(Vec::len).collect();
    let mut alive = in_s;
    let mut net = TNet::new(t, eps);

    for _ in 0..trace.cover_set.len() {
        let exact: BTreeSet<Vec<usize>> = (0..traces.len())
            .filter(|&id| size[id] == t)
            .map(|id| traces[id].iter().copied().filter(|&v| alive[v]).collect())
            .collect();
        let mut count: HashMap<usize, usize> = HashMap::new();
        for tuple in &exact {
            for &v in tuple {
                *count.entry(v).or_default() += 1;
            }
        }
        let chosen = trace
            .cover_set
            .iter()
            .copied()
            .filter(|&v| alive[v])
            .min_by_key(|v| (count.get(v).copied().unwrap_or(0), *v))
            .expect("an alive vertex remains");
        let added: Vec<&Vec<usize>> = exact.iter().filter(|tp| tp.binary_search(&chosen).is_ok()).collect();
        trace.per_step_tuple_counts.push(added.len());
        net.tuples.extend(added.into_iter().cloned());
        trace.removal_order.push(chosen);
        alive[chosen] = false;
        for &id in incidence.get(&chosen).map(Vec::as_slice).unwrap_or(&[]) {
            size[id] -= 1;
        }
    }
    Ok((net, trace))
}

/// Greedy set cover over `t`-subsets of the heavy hyperedges: repeatedly
/// take the subset lying in the most uncovered heavy hyperedges
/// (lexicographically smallest on ties).
pub fn greedy_cover_t_net(h: &Hypergraph, eps: f64, t: usize) -> Result<TNet> {
    check_eps(eps)?;
    check_t(t)?;
    let heavy = heavy_edges_fitting(h, eps, t)?;
    let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
    for e in &heavy {
        for_each_combination(e, t, |c| *counts.entry(c.to_vec()).or_default() += 1);
    }
    let mut heap: BinaryHeap<(usize, Reverse<Vec<usize>>)> =
        counts.iter().map(|(k, &c)| (c, Reverse(k.clone()))).collect();
    let mut covered = vec![false; heavy.len()];
    let mut net = TNet::new(t, eps);
    while let Some((stored, Reverse(tuple))) = heap.pop() {
        let current = counts.get(&tuple).copied().unwrap_or(0);
        if current == 0 {
            continue;
        }
        if current != stored {
            // counts only decrease, so a stale entry is re-queued at its true value
            heap.push((current, Reverse(tuple)));
            continue;
        }
        for (id, e) in heavy.iter().enumerate() {
            if !covered[id] && is_subset(&tuple, e) {
                covered[id] = true;
                for_each_combination(e, t, |c| {
                    if let Some(x) = counts.get_mut(c) {
                        *x -= 1;
                    }
                });
            }
        }
        net.tuples.insert(tuple);
    }
    debug_assert!(covered.iter().all(|&c| c));
    Ok(net)
}

/// Distinct heavy hyperedges; errors when one is too small to hold a
/// `t`-tuple, since then no epsilon-t-net exists.
fn heavy_edges_fitting(h: &Hypergraph, eps: f64, t: usize) -> Result<Vec<Vec<usize>>> {
    let heavy = h.heavy_edges(heavy_threshold(eps, h.vertex_count));
    if let Some(e) = heavy.iter().find(|e| e.len() < t) {
        return Err(Error::PreconditionViolated(format!(
            "heavy hyperedge {e:?} has fewer than t = {t} vertices; no epsilon-t-net exists"
        )));
    }
    Ok(heavy)
}

/// Does every heavy hyperedge contain some tuple of the net?
pub fn verify_t_net(h: &Hypergraph, eps: f64, net: &TNet) -> Result<Verdict> {
    let mut by_first: HashMap<usize, Vec<&Vec<usize>>> = HashMap::new();
    for tuple in &net.tuples {
        let mut sorted = tuple.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != net.t || sorted != *tuple {
            return Err(Error::MalformedNet(format!("tuple {tuple:?} is not a sorted {}-set", net.t)));
        }
        if let Some(&v) = tuple.iter().find(|&&v| v >= h.vertex_count) {
            return Err(Error::MalformedNet(format!("tuple {tuple:?} mentions absent vertex {v}")));
        }
        by_first.entry(tuple[0]).or_default().push(tuple);
    }
    let thr = heavy_threshold(eps, h.vertex_count);
    for e in h.heavy_edges(thr) {
        let hit = e.iter().any(|v| {
            by_first.get(v).is_some_and(|ts| ts.iter().any(|tp| is_subset(tp, &e)))
        });
        if !hit {
            return Ok(Verdict::Missed(e));
        }
    }
    Ok(Verdict::Valid)
}

/// A minimum-cardinality epsilon-t-net over `t`-subsets of heavy
/// hyperedges.
///
/// Iterative deepening on the net size. Each branch picks the smallest
/// uncovered heavy hyperedge and tries each of its `t`-subsets, since any
/// valid net must contain one of them. A packing of uncovered hyperedges
/// that pairwise share fewer than `t` vertices gives a lower bound used
/// for pruning.
pub fn min_t_net_bruteforce(h: &Hypergraph, eps: f64, t: usize) -> Result<TNet> {
    check_eps(eps)?;
    check_t(t)?;
    let heavy = heavy_edges_fitting(h, eps, t)?;
    let candidates: u128 = heavy.iter().map(|e| binomial(e.len(), t)).sum();
    if candidates > MIN_NET_BUDGET {
        return Err(Error::BudgetExceeded { needed: candidates, budget: MIN_NET_BUDGET });
    }
    let mut search = MinSearch { heavy: &heavy, t, nodes: 0, chosen: Vec::new() };
    let all: Vec<usize> = (0..heavy.len()).collect();
    for depth in 0..=heavy.len() {
        if search.dfs(&all, depth)? {
            let mut net = TNet::new(t, eps);
            net.tuples.extend(search.chosen);
            return Ok(net);
        }
    }
    unreachable!("one tuple per heavy hyperedge always suffices")
}

struct MinSearch<'a> {
    heavy: &'a [Vec<usize>],
    t: usize,
    nodes: u128,
    chosen: Vec<Vec<usize>>,
}

impl MinSearch<'_> {
    fn lower_bound(&self, uncovered: &[usize]) -> usize {
        let mut packing: Vec<usize> = Vec::new();
        let mut by_size = uncovered.to_vec();
        by_size.sort_by_key(|&id| (self.heavy[id].len(), id));
        for id in by_size {
            let e = &self.heavy[id];
            let independent = packing.iter().all(|&p| {
                self.heavy[p].iter().filter(|v| e.binary_search(v).is_ok()).count() < self.t
            });
            if independent {
                packing.push(id);
            }
        }
        packing.len()
    }

    fn dfs(&mut self, uncovered: &[usize], depth: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > MIN_NET_BUDGET * 16 {
            return Err(Error::BudgetExceeded { needed: self.nodes, budget: MIN_NET_BUDGET * 16 });
        }
        if uncovered.is_empty() {
            return Ok(true);
        }
        if depth == 0 || self.lower_bound(uncovered) > depth {
            return Ok(false);
        }
        let pivot = *uncovered
            .iter()
            .min_by_key(|&&id| (self.heavy[id].len(), id))
            .expect("nonempty");
        let mut options = Vec::new();
        for_each_combination(&self.heavy[pivot], self.t, |c| options.push(c.to_vec()));
        for tuple in options {
            let rest: Vec<usize> =
                uncovered.iter().copied().filter(|&id| !is_subset(&tuple, &self.heavy[id])).collect();
            self.chosen.push(tuple);
            if self.dfs(&rest, depth - 1)? {
                return Ok(true);
            }
            self.chosen.pop();
        }
        Ok(false)
    }
}
