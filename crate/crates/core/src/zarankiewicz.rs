//! `K_{t,t}` detection, heavy/light partitions, the recursive edge-count
//! bound and its closed-form evaluator.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{dual_hypergraph, floor_product, heavy_threshold, primal_hypergraph, BipartiteGraph, Hypergraph};
use crate::nets::{binomial, greedy_cover_t_net, pseudodisc_t_net, verify_t_net, TNet};

/// Largest number of `t`-subsets the biclique search may enumerate.
pub const DEFAULT_BUDGET: u128 = 1 << 40;

/// A complete bipartite subgraph: `t` vertices of A, each adjacent to all
/// `t` vertices of B.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KttWitness {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

/// Returns a `K_{t,t}` of `g` if there is one (`None` means the graph is
/// `K_{t,t}`-free).
///
/// Enumerates `t`-subsets of the smaller side in lexicographic order and
/// intersects their neighborhoods, abandoning a prefix as soon as the
/// common neighborhood drops below `t`.
pub fn is_ktt_free(g: &BipartiteGraph, t: usize) -> Result<Option<KttWitness>> {
    is_ktt_free_with_budget(g, t, DEFAULT_BUDGET)
}

pub fn is_ktt_free_with_budget(g: &BipartiteGraph, t: usize, budget: u128) -> Result<Option<KttWitness>> {
    let alive_a = vec![true; g.m()];
    let alive_b = vec![true; g.n()];
    Ok(find_biclique_from(g, t, &alive_a, &alive_b, None, budget)?.map(|(w, _)| w))
}

/// Biclique search restricted to alive vertices, starting at the `t`-subset
/// `resume` of the enumerated side (inclusive). Also returns the subset at
/// which the witness was found, so a caller that only deletes vertices can
/// continue from there.
pub fn find_biclique_from(
    g: &BipartiteGraph,
    t: usize,
    alive_a: &[bool],
    alive_b: &[bool],
    resume: Option<&[usize]>,
    budget: u128,
) -> Result<Option<(KttWitness, Vec<usize>)>> {
    if t == 0 {
        return Err(Error::ParamOutOfRange("t must be at least 1".into()));
    }
    let swap = g.n() < g.m();
    let (side_len, alive_side, alive_other) = if swap { (g.n(), alive_b, alive_a) } else { (g.m(), alive_a, alive_b) };
    let nbrs = |v: usize| if swap { g.neighbors_b(v) } else { g.neighbors_a(v) };
    let alive_count = alive_side.iter().filter(|&&x| x).count();
    let needed = binomial(alive_count, t);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    // vertices with fewer than t alive neighbors cannot take part
    let usable: Vec<usize> = (0..side_len)
        .filter(|&v| alive_side[v] && nbrs(v).iter().filter(|&&w| alive_other[w]).count() >= t)
        .collect();
    let mut search = Biclique { t, usable: &usable, nbrs: &nbrs, alive_other, chosen: Vec::with_capacity(t) };
    let Some(common) = search.dfs(0, None, resume) else {
        return Ok(None);
    };
    let subset = search.chosen;
    let other: Vec<usize> = common[..t].to_vec();
    let witness =
        if swap { KttWitness { a: other, b: subset.clone() } } else { KttWitness { a: subset.clone(), b: other } };
    Ok(Some((witness, subset)))
}

struct Biclique<'a, F> {
    t: usize,
    usable: &'a [usize],
    nbrs: &'a F,
    alive_other: &'a [bool],
    chosen: Vec<usize>,
}

impl<'a, F: Fn(usize) -> &'a [usize]> Biclique<'a, F> {
    /// `resume` is `Some` while the chosen prefix equals the resume prefix.
    fn dfs(&mut self, from: usize, common: Option<&[usize]>, resume: Option<&[usize]>) -> Option<Vec<usize>> {
        let depth = self.chosen.len();
        let mut start = from;
        if let Some(r) = resume {
            start = start.max(self.usable.partition_point(|&v| v < r[depth]));
        }
        let remaining = self.t - depth;
        for pos in start..self.usable.len() {
            if self.usable.len() - pos < remaining {
                break;
            }
            let v = self.usable[pos];
            let next: Vec<usize> = match common {
                None => (self.nbrs)(v).iter().copied().filter(|&w| self.alive_other[w]).collect(),
                Some(c) => {
                    let nv = (self.nbrs)(v);
                    c.iter().copied().filter(|w| nv.binary_search(w).is_ok()).collect()
                }
            };
            if next.len() < self.t {
                continue;
            }
            self.chosen.push(v);
            if remaining == 1 {
                return Some(next);
            }
            let on_path = resume.filter(|r| r[depth] == v);
            if let Some(found) = self.dfs(pos + 1, Some(&next), on_path) {
                return Some(found);
            }
            self.chosen.pop();
        }
        None
    }
}

/// Which side's heavy vertices are being counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeavyLightPartition {
    pub epsilon: f64,
    pub epsilon_prime: f64,
    /// Degree cutoff for A: `ceil(eps' * n)`.
    pub threshold_a: usize,
    /// Degree cutoff for B: `ceil(eps * m)`.
    pub threshold_b: usize,
    pub heavy_a: Vec<usize>,
    pub heavy_b: Vec<usize>,
}

fn check_eps(name: &str, eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange(format!("{name} must lie in (0, 1], got {eps}")))
    }
}

/// `A' = {deg >= eps' n}`, `B' = {deg >= eps m}`.
pub fn heavy_light_partition(g: &BipartiteGraph, eps: f64, eps_prime: f64) -> Result<HeavyLightPartition> {
    check_eps("epsilon", eps)?;
    check_eps("epsilon'", eps_prime)?;
    let threshold_a = heavy_threshold(eps_prime, g.n());
    let threshold_b = heavy_threshold(eps, g.m());
    Ok(HeavyLightPartition {
        epsilon: eps,
        epsilon_prime: eps_prime,
        threshold_a,
        threshold_b,
        heavy_a: (0..g.m()).filter(|&i| g.degree_a(i) >= threshold_a).collect(),
        heavy_b: (0..g.n()).filter(|&j| g.degree_b(j) >= threshold_b).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeavyCountReport {
    pub heavy_count: usize,
    /// `(t - 1) * |net|`.
    pub bound: usize,
    pub pass: bool,
}

/// The hypergraph whose heavy hyperedges are the heavy vertices of `side`:
/// neighborhoods of B over A for `Side::B`, and the reverse for `Side::A`.
fn side_hypergraph(g: &BipartiteGraph, side: Side) -> Hypergraph {
    match side {
        Side::B => primal_hypergraph(g),
        Side::A => dual_hypergraph(g),
    }
}

/// Checks `|heavy vertices of side| <= (t - 1) |net|` after verifying that
/// `net` is an epsilon-t-net (at `net.epsilon`) of the matching hypergraph.
/// On a `K_{t,t}`-free graph each net tuple lies in at most `t - 1`
/// neighborhoods, so the check must pass there.
pub fn heavy_count_check(g: &BipartiteGraph, t: usize, net: &TNet, side: Side) -> Result<HeavyCountReport> {
    let h = side_hypergraph(g, side);
    if let crate::nets::Verdict::Missed(e) = verify_t_net(&h, net.epsilon, net)? {
        return Err(Error::InvalidNet(format!("heavy hyperedge {e:?} contains no net tuple")));
    }
    let thr = heavy_threshold(net.epsilon, h.vertex_count);
    let heavy_count = h.hyperedges.iter().filter(|e| e.len() >= thr).count();
    let bound = t.saturating_sub(1) * net.len();
    Ok(HeavyCountReport { heavy_count, bound, pass: heavy_count <= bound })
}

/// How each level of [`num_edges_bound`] picks `eps` and `eps'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EpsRule {
    /// Degree cutoff `ell = 2 * c_hat * t^6` on both sides: `eps = ell / m`,
    /// `eps' = ell / n`, clamped to 1.
    HeavyDegree { c_hat: f64 },
    /// Degree cutoff `ell` on both sides, clamped the same way.
    Degree(f64),
    Fixed { eps: f64, eps_prime: f64 },
}

impl Default for EpsRule {
    fn default() -> Self {
        EpsRule::HeavyDegree { c_hat: 1.0 }
    }
}

impl EpsRule {
    pub fn choose(&self, m: usize, n: usize, t: usize) -> (f64, f64) {
        let from_degree = |ell: f64| {
            let pick = |size: usize| if size == 0 { 1.0 } else { (ell / size as f64).clamp(f64::MIN_POSITIVE, 1.0) };
            (pick(m), pick(n))
        };
        match *self {
            EpsRule::HeavyDegree { c_hat } => from_degree(2.0 * c_hat * (t as f64).powi(6)),
            EpsRule::Degree(ell) => from_degree(ell),
            EpsRule::Fixed { eps, eps_prime } => (eps, eps_prime),
        }
    }
}

/// Net constructor used by [`num_edges_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum NetStrategy {
    /// Pseudo-disc construction when its preconditions hold and the result
    /// verifies; greedy cover otherwise.
    #[default]
    Auto,
    PseudoDisc,
    GreedyCover,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConfig {
    pub t: usize,
    pub net: NetStrategy,
    pub eps_rule: EpsRule,
    pub seed: u64,
}

impl BoundConfig {
    pub fn new(t: usize) -> Self {
        BoundConfig { t, net: NetStrategy::Auto, eps_rule: EpsRule::default(), seed: 0 }
    }
}

/// One level of the recursion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRecord {
    pub level: usize,
    pub m: usize,
    pub n: usize,
    pub eps: f64,
    pub eps_prime: f64,
    /// Size of the net on the primal hypergraph (`None` when no
    /// epsilon-t-net exists because a heavy neighborhood has fewer than `t`
    /// vertices).
    pub s: Option<usize>,
    /// Size of the net on the dual hypergraph.
    pub s_prime: Option<usize>,
    pub heavy_a: usize,
    pub heavy_b: usize,
    /// `n floor(eps m) + m floor(eps' n)`.
    pub additive: u64,
    /// Bound returned from this level.
    pub bound: u64,
    pub edges: usize,
    /// `|B'| <= (t - 1) s`, when a net exists.
    pub heavy_b_within: Option<bool>,
    /// `|A'| <= (t - 1) s'`, when a net exists.
    pub heavy_a_within: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub t: usize,
    pub levels: Vec<LevelRecord>,
    pub bound: u64,
    pub actual_edges: usize,
}

impl BoundReport {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn is_sound(&self) -> bool {
        self.bound >= self.actual_edges as u64
    }

    /// Every level where a net was built satisfied the heavy-count bound.
    pub fn heavy_checks_pass(&self) -> bool {
        self.levels.iter().all(|l| l.heavy_a_within != Some(false) && l.heavy_b_within != Some(false))
    }
}

fn build_net(h: &Hypergraph, eps: f64, t: usize, strategy: NetStrategy, seed: u64) -> Result<Option<TNet>> {
    let greedy = || match greedy_cover_t_net(h, eps, t) {
        Ok(net) => Ok(Some(net)),
        Err(Error::PreconditionViolated(_)) => Ok(None),
        Err(e) => Err(e),
    };
    let net = match strategy {
        NetStrategy::GreedyCover => return greedy(),
        NetStrategy::PseudoDisc => pseudodisc_t_net(h, eps, t, seed)?.0,
        NetStrategy::Auto => match pseudodisc_t_net(h, eps, t, seed) {
            Ok((net, _)) if verify_t_net(h, eps, &net)?.is_valid() => return Ok(Some(net)),
            Ok(_) | Err(Error::PreconditionViolated(_)) => return greedy(),
            Err(e) => return Err(e),
        },
    };
    match verify_t_net(h, eps, &net)? {
        crate::nets::Verdict::Valid => Ok(Some(net)),
        crate::nets::Verdict::Missed(e) => {
            Err(Error::InvalidNet(format!("heavy hyperedge {e:?} contains no net tuple")))
        }
    }
}

/// The recursive edge-count bound.
///
/// Each level splits off the edges at a light vertex, `n floor(eps m)` of
/// them at light B vertices and `m floor(eps' n)` at light A vertices, and
/// recurses on the subgraph induced by the heavy vertices. Nets are built
/// and verified on both hypergraphs at every level to check that the heavy
/// sides obey `|B'| <= (t - 1) s` and `|A'| <= (t - 1) s'`; the bound itself
/// is sound for any graph. A level whose heavy part is the whole graph
/// returns `m n`; a level with an empty heavy side adds nothing further.
pub fn num_edges_bound(g: &BipartiteGraph, cfg: &BoundConfig) -> Result<BoundReport> {
    let t = cfg.t;
    if t == 0 {
        return Err(Error::ParamOutOfRange("t must be at least 1".into()));
    }
    let mut levels: Vec<LevelRecord> = Vec::new();
    let mut cur = g.clone();
    let mut full_at_bottom = false;
    loop {
        let (m, n) = (cur.m(), cur.n());
        let (eps, eps_prime) = cfg.eps_rule.choose(m, n, t);
        let part = heavy_light_partition(&cur, eps, eps_prime)?;
        let seed = cfg.seed.wrapping_add(levels.len() as u64 * 2);
        let (s_net, s_prime_net) = if m > 0 && n > 0 {
            (
                build_net(&primal_hypergraph(&cur), eps, t, cfg.net, seed)?,
                build_net(&dual_hypergraph(&cur), eps_prime, t, cfg.net, seed + 1)?,
            )
        } else {
            (None, None)
        };
        let within = |heavy: usize, net: &Option<TNet>| net.as_ref().map(|x| heavy <= (t - 1) * x.len());
        let additive = n as u64 * floor_product(eps, m) as u64 + m as u64 * floor_product(eps_prime, n) as u64;
        levels.push(LevelRecord {
            level: levels.len(),
            m,
            n,
            eps,
            eps_prime,
            s: s_net.as_ref().map(TNet::len),
            s_prime: s_prime_net.as_ref().map(TNet::len),
            heavy_a: part.heavy_a.len(),
            heavy_b: part.heavy_b.len(),
            additive,
            bound: 0,
            edges: cur.edge_count(),
            heavy_b_within: within(part.heavy_b.len(), &s_net),
            heavy_a_within: within(part.heavy_a.len(), &s_prime_net),
        });
        let (ha, hb) = (part.heavy_a.len(), part.heavy_b.len());
        if ha == 0 || hb == 0 {
            break;
        }
        if ha * hb >= m * n {
            full_at_bottom = true;
            break;
        }
        cur = cur.induced(&part.heavy_a, &part.heavy_b);
    }
    let mut below = 0u64;
    let last = levels.len() - 1;
    for (i, rec) in levels.iter_mut().enumerate().rev() {
        let product = rec.m as u64 * rec.n as u64;
        rec.bound = if i == last && full_at_bottom { product } else { product.min(rec.additive + below) };
        below = rec.bound;
    }
    let bound = levels[0].bound;
    Ok(BoundReport { t, levels, bound, actual_edges: g.edge_count() })
}

/// Net-size functions for the closed-form bound: `f(m, k)` bounds the
/// epsilon-t-net size on the primal side for `eps = k / m`, `f_star(n, ell)`
/// on the dual side.
pub struct RecursiveBoundSpec {
    pub f: Box<dyn Fn(usize, usize) -> f64 + Send + Sync>,
    pub f_star: Box<dyn Fn(usize, usize) -> f64 + Send + Sync>,
}

impl RecursiveBoundSpec {
    pub fn new<F, G>(f: F, f_star: G) -> Self
    where
        F: Fn(usize, usize) -> f64 + Send + Sync + 'static,
        G: Fn(usize, usize) -> f64 + Send + Sync + 'static,
    {
        RecursiveBoundSpec { f: Box::new(f), f_star: Box::new(f_star) }
    }

    /// Nonnegative and nondecreasing in the first argument on the sampled
    /// points `(size, k)` with `k < size <= max_size`.
    pub fn check_monotone(&self, max_size: usize) -> bool {
        let ok = |h: &dyn Fn(usize, usize) -> f64| {
            (2..=max_size).all(|size| {
                (1..size).all(|k| {
                    let v = h(size, k);
                    v >= 0.0 && (size == max_size || h(size + 1, k) >= v - 1e-9)
                })
            })
        };
        ok(&*self.f) && ok(&*self.f_star)
    }
}

fn ceil_tol(x: f64) -> usize {
    if x <= 0.0 {
        0
    } else {
        (x - 1e-9 * x.max(1.0)).ceil() as usize
    }
}

struct Evaluator<'a> {
    spec: &'a RecursiveBoundSpec,
    t: usize,
    memo: HashMap<(usize, usize), u64>,
}

impl Evaluator<'_> {
    /// Sizes after one step: `(ceil((t-1) f(m,k)), ceil((t-1) f*(n,ell)))`.
    fn next(&self, m: usize, n: usize, k: usize, ell: usize) -> (usize, usize) {
        let tm = (self.t - 1) as f64;
        (ceil_tol(tm * (self.spec.f)(m, k)), ceil_tol(tm * (self.spec.f_star)(n, ell)))
    }

    /// Smallest `k` for each distinct value of the next size; among equal
    /// next sizes the additive term favors the smallest parameter.
    fn groups(&self, size: usize, dual: bool) -> Vec<(usize, usize)> {
        let tm = (self.t - 1) as f64;
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for k in 1..size {
            let v = if dual { (self.spec.f_star)(size, k) } else { (self.spec.f)(size, k) };
            seen.entry(ceil_tol(tm * v)).or_insert(k);
        }
        let mut out: Vec<(usize, usize)> = seen.into_iter().map(|(v, k)| (k, v)).collect();
        out.sort_unstable();
        out
    }

    fn tail(&mut self, m: usize, n: usize, m2: usize, n2: usize) -> u64 {
        if m2 <= m && n2 <= n && (m2, n2) != (m, n) {
            self.g(m2, n2)
        } else {
            m2 as u64 * n2 as u64
        }
    }

    fn unroll(&mut self, m: usize, n: usize, k: usize, ell: usize) -> u64 {
        let (m2, n2) = self.next(m, n, k, ell);
        (k as u64 - 1) * n as u64 + (ell as u64 - 1) * m as u64 + self.tail(m, n, m2, n2)
    }

    fn best(&mut self, m: usize, n: usize) -> Option<(u64, usize, usize)> {
        let ks = self.groups(m, false);
        let ls = self.groups(n, true);
        let mut best: Option<(u64, usize, usize)> = None;
        for &(k, m2) in &ks {
            for &(ell, n2) in &ls {
                let v = (k as u64 - 1) * n as u64 + (ell as u64 - 1) * m as u64 + self.tail(m, n, m2, n2);
                if best.is_none_or(|(b, _, _)| v < b) {
                    best = Some((v, k, ell));
                }
            }
        }
        best
    }

    fn g(&mut self, m: usize, n: usize) -> u64 {
        if let Some(&v) = self.memo.get(&(m, n)) {
            return v;
        }
        let product = m as u64 * n as u64;
        let v = match self.best(m, n) {
            Some((b, _, _)) => b.min(product),
            None => product,
        };
        self.memo.insert((m, n), v);
        v
    }
}

fn check_grid(m: usize, n: usize, t: usize) -> Result<()> {
    if t < 1 || m < 2 || n < 2 {
        return Err(Error::ParamOutOfRange(format!("need t >= 1 and m, n >= 2, got t={t}, m={m}, n={n}")));
    }
    Ok(())
}

/// One unrolling of
/// `g(m, n) <= (k-1) n + (ell-1) m + g((t-1) f(m,k), (t-1) f*(n,ell))`.
///
/// The inner `g` is `min(m n, best unrolling)`, recursing only while both
/// arguments do not grow and at least one shrinks; otherwise it is the
/// product of its arguments.
pub fn recursive_bound(m: usize, n: usize, t: usize, spec: &RecursiveBoundSpec, k: usize, ell: usize) -> Result<u64> {
    check_grid(m, n, t)?;
    if !(1..m).contains(&k) || !(1..n).contains(&ell) {
        return Err(Error::ParamOutOfRange(format!("need 1 <= k < {m} and 1 <= ell < {n}, got k={k}, ell={ell}")));
    }
    Ok(Evaluator { spec, t, memo: HashMap::new() }.unroll(m, n, k, ell))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundChoice {
    pub value: u64,
    pub k: usize,
    pub ell: usize,
}

/// Minimum of [`recursive_bound`] over all `1 <= k < m`, `1 <= ell < n`
/// (smallest `k`, then smallest `ell`, among minimizers of a given pair of
/// next sizes).
pub fn recursive_bound_min(m: usize, n: usize, t: usize, spec: &RecursiveBoundSpec) -> Result<BoundChoice> {
    check_grid(m, n, t)?;
    let mut ev = Evaluator { spec, t, memo: HashMap::new() };
    let (value, k, ell) = ev.best(m, n).expect("grid is nonempty");
    Ok(BoundChoice { value, k, ell })
}

/// `eps = C_1^(1/d) (t-1) / m^(1/d)`, clamped to `(0, 1]`: the choice that
/// balances the two terms of the one-sided bound for a dual hypergraph of
/// VC-dimension `d`. `C_1` is a free constant (1 by default in reports).
pub fn vc_epsilon(m: usize, t: usize, d_star: usize, c1: f64) -> f64 {
    let d = d_star.max(1) as f64;
    let eps = c1.powf(1.0 / d) * (t.saturating_sub(1)).max(1) as f64 / (m.max(1) as f64).powf(1.0 / d);
    eps.clamp(f64::MIN_POSITIVE, 1.0)
}

/// The one-sided bound: heavy B vertices number at most `(t-1)|N|`, each
/// with at most `m` edges; light ones have fewer than `eps m` edges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneSidedReport {
    pub eps: f64,
    pub net_size: usize,
    pub heavy_b: usize,
    pub light_b: usize,
    pub heavy_within: bool,
    pub bound: u64,
    pub edges: usize,
}

pub fn one_sided_report(g: &BipartiteGraph, t: usize, eps: f64, strategy: NetStrategy, seed: u64) -> Result<OneSidedReport> {
    check_eps("epsilon", eps)?;
    let h = primal_hypergraph(g);
    let net = build_net(&h, eps, t, strategy, seed)?;
    let thr = heavy_threshold(eps, g.m());
    let heavy_b = (0..g.n()).filter(|&j| g.degree_b(j) >= thr).count();
    let light_b = g.n() - heavy_b;
    let net_size = net.as_ref().map_or(0, TNet::len);
    let heavy_within = net.is_some() && heavy_b <= t.saturating_sub(1) * net_size;
    let bound = heavy_b as u64 * g.m() as u64 + light_b as u64 * floor_product(eps, g.m()) as u64;
    Ok(OneSidedReport { eps, net_size, heavy_b, light_b, heavy_within, bound, edges: g.edge_count() })
}

/// `|E| / (t^6 max(m, n))`: the constant a linear bound `c t^6 n` would
/// need on this instance.
pub fn linear_constant(g: &BipartiteGraph, t: usize) -> f64 {
    let size = g.m().max(g.n()).max(1) as f64;
    g.edge_count() as f64 / ((t as f64).powi(6) * size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn naive_ktt(g: &BipartiteGraph, t: usize) -> bool {
        (0..g.m()).combinations(t).any(|sa| {
            (0..g.n()).combinations(t).any(|sb| sa.iter().all(|&i| sb.iter().all(|&j| g.has_edge(i, j))))
        })
    }

    fn random_graph(m: usize, n: usize, p: f64, seed: u64) -> BipartiteGraph {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let edges: Vec<(usize, usize)> =
            (0..m).cartesian_product(0..n).filter(|_| rng.gen_bool(p)).collect();
        BipartiteGraph::from_edges(m, n, edges)
    }

    #[test]
    fn ktt_examples() {
        let k22 = BipartiteGraph::from_edges(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]);
        let w = is_ktt_free(&k22, 2).unwrap().unwrap();
        assert_eq!(w, KttWitness { a: vec![0, 1], b: vec![0, 1] });
        let path = BipartiteGraph::from_edges(2, 1, [(0, 0), (1, 0)]);
        assert!(is_ktt_free(&path, 2).unwrap().is_none());
        assert!(is_ktt_free(&path, 1).unwrap().is_some());
        assert!(is_ktt_free(&path, 0).is_err());
    }

    #[test]
    fn ktt_witness_maps_back_when_sides_swap() {
        // A is larger, so B is enumerated
        let g = BipartiteGraph::from_edges(4, 2, [(1, 0), (1, 1), (3, 0), (3, 1), (0, 0)]);
        let w = is_ktt_free(&g, 2).unwrap().unwrap();
        assert_eq!(w, KttWitness { a: vec![1, 3], b: vec![0, 1] });
    }

    #[test]
    fn ktt_budget() {
        let g = random_graph(30, 30, 0.1, 1);
        assert!(matches!(is_ktt_free_with_budget(&g, 3, 100), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn ktt_matches_naive_on_random_graphs() {
        for seed in 0..200 {
            let g = random_graph(8, 8, 0.45, seed);
            for t in [2, 3] {
                let fast = is_ktt_free(&g, t).unwrap();
                assert_eq!(fast.is_some(), naive_ktt(&g, t), "seed {seed} t {t}");
                if let Some(w) = fast {
                    assert!(w.a.iter().all(|&i| w.b.iter().all(|&j| g.has_edge(i, j))));
                }
            }
        }
    }

    #[test]
    fn resumed_search_skips_earlier_subsets() {
        let g = BipartiteGraph::from_edges(
            3,
            3,
            [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2)],
        );
        let (alive_a, alive_b) = (vec![true; 3], vec![true; 3]);
        let (w, at) = find_biclique_from(&g, 2, &alive_a, &alive_b, None, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!(at, vec![0, 1]);
        assert_eq!(w.b, vec![0, 1]);
        let (w, at) = find_biclique_from(&g, 2, &alive_a, &alive_b, Some(&[0, 2]), DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!(at, vec![1, 2]);
        assert_eq!(w.b, vec![1, 2]);
        assert!(find_biclique_from(&g, 2, &alive_a, &alive_b, Some(&[2, 2]), DEFAULT_BUDGET).unwrap().is_none());
    }

    #[test]
    fn partition_examples() {
        // m = 10, b0 has degree 3, b1 degree 2
        let g = BipartiteGraph::from_edges(10, 2, [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)]);
        let p = heavy_light_partition(&g, 0.3, 1.0).unwrap();
        assert_eq!(p.heavy_b, vec![0]);
        assert_eq!(p.threshold_b, 3);
        assert_eq!(p.heavy_a, vec![0, 1]);
        let p = heavy_light_partition(&g, 1.0, 1.0).unwrap();
        assert!(p.heavy_b.is_empty());
        assert!(heavy_light_partition(&g, 0.0, 1.0).is_err());
    }

    #[test]
    fn heavy_count_examples() {
        let g = BipartiteGraph::empty(4, 4);
        let net = TNet::new(2, 0.5);
        let r = heavy_count_check(&g, 2, &net, Side::B).unwrap();
        assert_eq!(r, HeavyCountReport { heavy_count: 0, bound: 0, pass: true });
        // b0 sees all of A; a net without its pair is rejected
        let g = BipartiteGraph::from_edges(2, 1, [(0, 0), (1, 0)]);
        assert!(matches!(heavy_count_check(&g, 2, &TNet::new(2, 1.0), Side::B), Err(Error::InvalidNet(_))));
        let mut net = TNet::new(2, 1.0);
        net.tuples.insert(vec![0, 1]);
        assert!(heavy_count_check(&g, 2, &net, Side::B).unwrap().pass);
    }

    #[test]
    fn bound_examples() {
        let cfg = BoundConfig::new(2);
        let r = num_edges_bound(&BipartiteGraph::empty(5, 5), &cfg).unwrap();
        assert_eq!(r.depth(), 1);
        assert!(r.is_sound());
        let one = BipartiteGraph::from_edges(1, 1, [(0, 0)]);
        let r = num_edges_bound(&one, &cfg).unwrap();
        assert_eq!(r.bound, 1);
        assert_eq!(r.actual_edges, 1);
    }

    #[test]
    fn bound_is_sound_on_random_ktt_free_graphs() {
        for seed in 0..30 {
            let g = random_graph(40, 40, 0.08, seed);
            let g = crate::generators::prune_to_ktt_free(&g, 2).unwrap().graph;
            for rule in [EpsRule::default(), EpsRule::Fixed { eps: 0.1, eps_prime: 0.1 }, EpsRule::Degree(4.0)] {
                let cfg = BoundConfig { t: 2, net: NetStrategy::Auto, eps_rule: rule, seed };
                let r = num_edges_bound(&g, &cfg).unwrap();
                assert!(r.is_sound(), "seed {seed}: {} < {}", r.bound, r.actual_edges);
                assert!(r.heavy_checks_pass(), "seed {seed}");
            }
        }
    }

    #[test]
    fn bound_full_level_returns_product() {
        // eps = eps' = 1/3 on K_{3,3}: every vertex heavy, so the level returns m n
        let k33 = BipartiteGraph::from_edges(3, 3, (0..3).cartesian_product(0..3));
        let cfg = BoundConfig { t: 4, net: NetStrategy::GreedyCover, eps_rule: EpsRule::Fixed { eps: 0.3, eps_prime: 0.3 }, seed: 0 };
        let r = num_edges_bound(&k33, &cfg).unwrap();
        assert_eq!(r.bound, 9);
        assert_eq!(r.depth(), 1);
    }

    #[test]
    fn recursive_bound_examples() {
        let spec = RecursiveBoundSpec::new(|_, _| 5.0, |_, _| 5.0);
        assert_eq!(recursive_bound(10, 10, 2, &spec, 2, 2).unwrap(), 45);
        // additive terms vanish at k = ell = 1
        assert_eq!(recursive_bound(10, 10, 2, &spec, 1, 1).unwrap(), 25);
        assert!(recursive_bound(10, 10, 2, &spec, 10, 1).is_err());
        assert!(spec.check_monotone(20));
    }

    #[test]
    fn recursive_min_matches_grid() {
        let spec = RecursiveBoundSpec::new(|m, k| m as f64 / k as f64, |n, l| n as f64 / l as f64);
        let best = recursive_bound_min(100, 100, 2, &spec).unwrap();
        let mut grid = u64::MAX;
        for k in 1..100 {
            for l in 1..100 {
                grid = grid.min(recursive_bound(100, 100, 2, &spec, k, l).unwrap());
            }
        }
        assert_eq!(best.value, grid);
        assert_eq!(recursive_bound(100, 100, 2, &spec, best.k, best.ell).unwrap(), grid);
    }

    #[test]
    fn vc_epsilon_and_one_sided() {
        assert!((vc_epsilon(10_000, 2, 4, 1.0) - 0.1).abs() < 1e-12);
        assert_eq!(vc_epsilon(1, 5, 4, 1.0), 1.0);
        let g = random_graph(30, 30, 0.1, 3);
        let g = crate::generators::prune_to_ktt_free(&g, 2).unwrap().graph;
        let r = one_sided_report(&g, 2, 0.2, NetStrategy::GreedyCover, 0).unwrap();
        assert!(r.bound >= r.edges as u64);
        assert!(r.heavy_within || r.heavy_b == 0);
        assert!(linear_constant(&g, 2) > 0.0);
    }

    proptest! {
        #[test]
        fn deleting_an_edge_never_raises_the_bound(seed in 0u64..500, pick in 0usize..1000) {
            let g = random_graph(12, 12, 0.3, seed);
            let edges: Vec<_> = g.edges().collect();
            prop_assume!(!edges.is_empty());
            let (i, j) = edges[pick % edges.len()];
            for rule in [EpsRule::Fixed { eps: 0.25, eps_prime: 0.25 }, EpsRule::Degree(3.0)] {
                let cfg = BoundConfig { t: 3, net: NetStrategy::GreedyCover, eps_rule: rule, seed };
                let before = num_edges_bound(&g, &cfg).unwrap();
                let after = num_edges_bound(&g.without_edge(i, j), &cfg).unwrap();
                prop_assert!(after.bound <= before.bound);
                prop_assert!(before.is_sound());
            }
        }

        #[test]
        fn partition_thresholds_are_exact(seed in 0u64..500, e in 1u32..=10, ep in 1u32..=10) {
            let g = random_graph(10, 9, 0.4, seed);
            let (eps, eps_prime) = (e as f64 / 10.0, ep as f64 / 10.0);
            let p = heavy_light_partition(&g, eps, eps_prime).unwrap();
            for j in 0..9 {
                let heavy = g.degree_b(j) as f64 >= eps * 10.0 - 1e-9;
                prop_assert_eq!(p.heavy_b.contains(&j), heavy);
            }
            for i in 0..10 {
                let heavy = g.degree_a(i) as f64 >= eps_prime * 9.0 - 1e-9;
                prop_assert_eq!(p.heavy_a.contains(&i), heavy);
            }
        }
    }
}
