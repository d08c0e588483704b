//! Rectangle families: the four-type intersection census, the corner and
//! crossing graphs, canonical segment tuples and the counting chain
//! `d_i - 2t + 2 <= x_i`, `sum x_i <= (2t - 2) |F|`.
//!
//! Rectangle pairs meet in exactly one of four ways (see
//! [`IntersectionType`]). The third kind is where the real counting happens:
//! there a vertical edge of a B-rectangle crosses a horizontal edge of an
//! A-rectangle, so those pairs are bounded through the crossing graph.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{check_general_position, classify_rect_pair, AxisRect, GeomObject, IntersectionType, Segment};
use crate::hypergraph::{BipartiteGraph, BipartiteIntersectionGraph, CanonicalTupleFamily, Graph, Hypergraph};
use crate::par::{self, Exec};
use crate::zarankiewicz::is_ktt_free;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct IntersectionTypeCounts {
    pub type1: usize,
    pub type2: usize,
    pub type3: usize,
    pub type4: usize,
    /// Intersecting pairs, counted independently of the classification.
    pub intersecting: usize,
}

impl IntersectionTypeCounts {
    pub fn classified(&self) -> usize {
        self.type1 + self.type2 + self.type3 + self.type4
    }

    fn add(mut self, o: Self) -> Self {
        self.type1 += o.type1;
        self.type2 += o.type2;
        self.type3 += o.type3;
        self.type4 += o.type4;
        self.intersecting += o.intersecting;
        self
    }
}

fn require_general_position(a: &[AxisRect], b: &[AxisRect]) -> Result<()> {
    if check_general_position(a.iter().chain(b)) {
        Ok(())
    } else {
        Err(Error::DegenerateInput("two rectangle edges share a supporting line".into()))
    }
}

pub fn intersection_type_census(a: &[AxisRect], b: &[AxisRect]) -> Result<IntersectionTypeCounts> {
    intersection_type_census_with(a, b, Exec::default())
}

/// Classifies every intersecting pair; parallel over `a`.
pub fn intersection_type_census_with(a: &[AxisRect], b: &[AxisRect], exec: Exec) -> Result<IntersectionTypeCounts> {
    require_general_position(a, b)?;
    let rows = par::try_map(exec, a, |ra| {
        let mut c = IntersectionTypeCounts::default();
        for rb in b {
            if ra.intersects(rb) {
                c.intersecting += 1;
            }
            match classify_rect_pair(ra, rb)? {
                Some(IntersectionType::Type1) => c.type1 += 1,
                Some(IntersectionType::Type2) => c.type2 += 1,
                Some(IntersectionType::Type3) => c.type3 += 1,
                Some(IntersectionType::Type4) => c.type4 += 1,
                None => {}
            }
        }
        Ok::<_, Error>(c)
    })?;
    Ok(rows.into_iter().fold(IntersectionTypeCounts::default(), IntersectionTypeCounts::add))
}

/// Corners of `a` (four per rectangle, in [`AxisRect::corners`] order)
/// against the rectangles of `b`, adjacent when the corner lies in the
/// rectangle.
pub fn corner_incidence_graph(a: &[AxisRect], b: &[AxisRect]) -> BipartiteIntersectionGraph {
    let corners = a.iter().flat_map(|r| r.corners()).map(GeomObject::Point).collect();
    BipartiteIntersectionGraph::build(corners, b.iter().copied().map(GeomObject::Rect).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CornerClaim {
    pub t: usize,
    /// `G_{A,B}` is `K_{t,t}`-free.
    pub graph_free: bool,
    /// The corner graph is `K_{4t-3,4t-3}`-free.
    pub corner_free: bool,
}

impl CornerClaim {
    /// The implication "graph free => corner graph free".
    pub fn holds(&self) -> bool {
        !self.graph_free || self.corner_free
    }
}

/// Checks that a `K_{t,t}`-free rectangle intersection graph has a
/// `K_{4t-3,4t-3}`-free corner graph: `4t - 3` corners span at least `t`
/// rectangles of A.
pub fn corner_claim_check(a: &[AxisRect], b: &[AxisRect], t: usize) -> Result<CornerClaim> {
    let g = BipartiteIntersectionGraph::build(
        a.iter().copied().map(GeomObject::Rect).collect(),
        b.iter().copied().map(GeomObject::Rect).collect(),
    );
    let graph_free = is_ktt_free(&g.graph, t)?.is_none();
    let corner = corner_incidence_graph(a, b);
    let corner_free = is_ktt_free(&corner.graph, 4 * t - 3)?.is_none();
    Ok(CornerClaim { t, graph_free, corner_free })
}

/// Horizontal edges of A (`2i` bottom, `2i + 1` top of rectangle `i`)
/// against vertical edges of B (`2j` left, `2j + 1` right), adjacent when
/// they cross.
#[derive(Debug, Clone)]
pub struct CrossingGraph {
    pub horizontals: Vec<Segment>,
    pub verticals: Vec<Segment>,
    pub graph: BipartiteGraph,
}

pub fn crossing_graph(a: &[AxisRect], b: &[AxisRect]) -> CrossingGraph {
    crossing_graph_with(a, b, Exec::default())
}

pub fn crossing_graph_with(a: &[AxisRect], b: &[AxisRect], exec: Exec) -> CrossingGraph {
    let horizontals: Vec<Segment> = a.iter().flat_map(|r| r.horizontal_edges()).collect();
    let verticals: Vec<Segment> = b.iter().flat_map(|r| r.vertical_edges()).collect();
    let rows = par::map(exec, &horizontals, |h| {
        verticals.iter().enumerate().filter(|(_, v)| h.intersects(v)).map(|(j, _)| j).collect()
    });
    let graph = BipartiteGraph::from_rows(rows, verticals.len());
    CrossingGraph { horizontals, verticals, graph }
}

/// Abscissae at which the set of horizontal segments met by a vertical
/// line takes every possible value: each distinct endpoint abscissa and one
/// point inside each gap between consecutive ones.
fn sample_abscissae(hsegs: &[Segment]) -> Vec<f64> {
    let mut xs: Vec<f64> = hsegs.iter().flat_map(|s| [s.lo, s.hi]).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut out = Vec::with_capacity(2 * xs.len());
    for (i, &x) in xs.iter().enumerate() {
        out.push(x);
        if let Some(&next) = xs.get(i + 1) {
            out.push(0.5 * (x + next));
        }
    }
    out
}

/// Segments met by the vertical line at `x`, grouped by ordinate (equal
/// ordinates share a group) and sorted bottom to top.
fn stacked_at(hsegs: &[Segment], x: f64) -> Vec<(f64, Vec<usize>)> {
    let mut active: Vec<usize> = (0..hsegs.len()).filter(|&i| hsegs[i].lo <= x && x <= hsegs[i].hi).collect();
    active.sort_by(|&i, &j| hsegs[i].fixed.total_cmp(&hsegs[j].fixed).then(i.cmp(&j)));
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for i in active {
        let y = hsegs[i].fixed;
        match groups.last_mut() {
            Some((gy, members)) if *gy == y => members.push(i),
            _ => groups.push((y, vec![i])),
        }
    }
    groups
}

/// Stab sets of size exactly `k` of vertical segments at `x`: runs of
/// consecutive groups with `k` members in total.
fn runs_at(hsegs: &[Segment], x: f64, k: usize) -> Vec<(Vec<usize>, Segment)> {
    let groups = stacked_at(hsegs, x);
    let mut out = Vec::new();
    for start in 0..groups.len() {
        let mut members = Vec::new();
        for end in start..groups.len() {
            members.extend_from_slice(&groups[end].1);
            if members.len() >= k {
                if members.len() == k {
                    let mut tuple = members.clone();
                    tuple.sort_unstable();
                    out.push((tuple, Segment::vertical(x, groups[start].0, groups[end].0)));
                }
                break;
            }
        }
    }
    out
}

pub fn canonical_segment_tuples(hsegs: &[Segment], k: usize) -> CanonicalTupleFamily<Segment> {
    canonical_segment_tuples_with(hsegs, k, Exec::default())
}

/// Every `k`-set of horizontal segments that is exactly the set met by some
/// vertical segment, with a witness vertical segment for each.
///
/// A vertical segment at abscissa `x` meets a run of segments consecutive
/// in the bottom-to-top order at `x`, and the set met by a vertical line is
/// constant between consecutive endpoint abscissae, so it suffices to look
/// at the endpoint abscissae and one point per gap.
pub fn canonical_segment_tuples_with(hsegs: &[Segment], k: usize, exec: Exec) -> CanonicalTupleFamily<Segment> {
    let mut family = CanonicalTupleFamily::new(k);
    if k == 0 {
        return family;
    }
    let xs = sample_abscissae(hsegs);
    for runs in par::map(exec, &xs, |&x| runs_at(hsegs, x, k)) {
        for (tuple, witness) in runs {
            family.insert(tuple, witness);
        }
    }
    family
}

/// The hypergraph of all nonempty sets of horizontal segments met by a
/// single vertical segment. Its size is quadratic per abscissa; meant for
/// cross-checks on small inputs.
pub fn stab_hypergraph(hsegs: &[Segment]) -> Hypergraph {
    let mut edges = std::collections::BTreeSet::new();
    for x in sample_abscissae(hsegs) {
        let groups = stacked_at(hsegs, x);
        for start in 0..groups.len() {
            let mut members: Vec<usize> = Vec::new();
            for g in &groups[start..] {
                members.extend_from_slice(&g.1);
                let mut e = members.clone();
                e.sort_unstable();
                edges.insert(e);
            }
        }
    }
    Hypergraph::new(hsegs.len(), edges.into_iter().collect())
}

/// The Delaunay graph of the stab hypergraph together with a witness for
/// each edge.
#[derive(Debug, Clone)]
pub struct SegmentDelaunay {
    pub graph: Graph,
    pub witnesses: CanonicalTupleFamily<Segment>,
}

pub fn segment_delaunay(hsegs: &[Segment]) -> SegmentDelaunay {
    let witnesses = canonical_segment_tuples(hsegs, 2);
    let graph = Graph::new(hsegs.len(), witnesses.tuples.keys().map(|t| (t[0], t[1])));
    SegmentDelaunay { graph, witnesses }
}

impl SegmentDelaunay {
    /// Planar drawing as SVG. Vertices sit at right endpoints; the edge
    /// `{i, j}` with witness abscissa `x` runs left along segment `i` to `x`,
    /// up or down to segment `j`, and right along it to its endpoint. The
    /// horizontal legs are lifted toward the other segment by a tenth of the
    /// smallest ordinate gap so that strokes stay apart.
    pub fn to_svg(&self, hsegs: &[Segment]) -> String {
        const SIZE: f64 = 800.0;
        const MARGIN: f64 = 20.0;
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for s in hsegs {
            x0 = x0.min(s.lo);
            x1 = x1.max(s.hi);
            y0 = y0.min(s.fixed);
            y1 = y1.max(s.fixed);
        }
        if hsegs.is_empty() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        let px = |x: f64| MARGIN + (x - x0) * scale;
        let py = |y: f64| MARGIN + (y1 - y) * scale;

        let mut ys: Vec<f64> = hsegs.iter().map(|s| s.fixed).collect();
        ys.sort_by(f64::total_cmp);
        ys.dedup();
        let min_gap = ys.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let hair = if min_gap.is_finite() { min_gap / 10.0 } else { span / 100.0 };

        let mut out = String::new();
        let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
        let _ = writeln!(out, r##"<g stroke="#bbbbbb" stroke-width="1">"##);
        for s in hsegs {
            let _ = writeln!(
                out,
                r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
                px(s.lo),
                py(s.fixed),
                px(s.hi),
                py(s.fixed)
            );
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(out, r##"<g stroke="#1f5fbf" stroke-width="1.2" fill="none">"##);
        for (tuple, w) in &self.witnesses.tuples {
            let (si, sj) = (&hsegs[tuple[0]], &hsegs[tuple[1]]);
            let toward = (sj.fixed - si.fixed).signum();
            let leg_i = si.fixed + toward * hair;
            let leg_j = sj.fixed - toward * hair;
            let _ = writeln!(
                out,
                r#"<polyline data-edge="{} {}" points="{:.3},{:.3} {:.3},{:.3} {:.3},{:.3} {:.3},{:.3}"/>"#,
                tuple[0],
                tuple[1],
                px(si.hi),
                py(si.fixed),
                px(w.fixed),
                py(leg_i),
                px(w.fixed),
                py(leg_j),
                px(sj.hi),
                py(sj.fixed)
            );
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(out, r##"<g fill="#c0392b">"##);
        for (i, s) in hsegs.iter().enumerate() {
            let _ = writeln!(out, r#"<circle data-vertex="{i}" cx="{:.3}" cy="{:.3}" r="2.5"/>"#, px(s.hi), py(s.fixed));
        }
        let _ = writeln!(out, "</g>");
        out.push_str("</svg>\n");
        out
    }
}

/// Largest edge count a planar graph on `v` vertices can have.
pub fn planar_edge_limit(v: usize) -> usize {
    if v >= 3 {
        3 * v - 6
    } else {
        v * v.saturating_sub(1) / 2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanarityReport {
    /// Induced subgraphs examined, the full graph included.
    pub checked: usize,
    pub violations: usize,
    /// Largest `edges / planar_edge_limit` seen (subgraphs with a zero
    /// limit are skipped).
    pub worst_ratio: f64,
}

impl PlanarityReport {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// Euler bound `|E(g[V'])| <= 3|V'| - 6` on the full graph and on `samples`
/// random induced subgraphs (uniform size, then a uniform subset).
pub fn hereditary_planarity_check(g: &Graph, samples: usize, seed: u64) -> PlanarityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.vertex_count;
    let mut report = PlanarityReport { checked: 0, violations: 0, worst_ratio: 0.0 };
    let mut record = |vertices: &[usize]| {
        let e = g.induced_edge_count(vertices);
        let limit = planar_edge_limit(vertices.len());
        report.checked += 1;
        if e > limit {
            report.violations += 1;
        }
        if limit > 0 {
            report.worst_ratio = report.worst_ratio.max(e as f64 / limit as f64);
        }
    };
    record(&(0..n).collect::<Vec<_>>());
    if n > 0 {
        for _ in 0..samples {
            let size = rng.gen_range(1..=n);
            let subset = sample(&mut rng, n, size).into_vec();
            record(&subset);
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RectangleBoundReport {
    pub t: usize,
    pub census: IntersectionTypeCounts,
    /// Corner-in-rectangle incidences, which count each type-1 pair four
    /// times and also include corner overlaps already counted as type 3.
    pub corner_incidences: usize,
    pub crossing_edges: usize,
    /// `|F|` for `k = 2t - 1`.
    pub canonical_tuples: usize,
    /// `d_i`: crossings of each vertical edge of B.
    pub d: Vec<usize>,
    /// `x_i`: canonical tuples whose segments all cross vertical edge `i`.
    pub x: Vec<usize>,
    pub sum_d: usize,
    pub sum_x: usize,
    /// `(2t - 2) |F|`.
    pub upper: usize,
}

/// Counting chain for the crossing graph: every vertical edge crossing
/// `d_i` horizontals fully crosses at least `d_i - 2t + 2` canonical
/// `(2t - 1)`-tuples (its consecutive windows), and on a `K_{t,t}`-free
/// input each canonical tuple is fully crossed by at most `2t - 2` vertical
/// edges. Returns `InequalityViolated` when either fails.
pub fn rectangle_bound_report(a: &[AxisRect], b: &[AxisRect], t: usize) -> Result<RectangleBoundReport> {
    if t == 0 {
        return Err(Error::ParamOutOfRange("t must be at least 1".into()));
    }
    let census = intersection_type_census(a, b)?;
    let corner_incidences = corner_incidence_graph(a, b).graph.edge_count();
    let k = 2 * t - 1;
    let cross = crossing_graph(a, b);
    let family = canonical_segment_tuples(&cross.horizontals, k);
    let mut by_first: HashMap<usize, Vec<&Vec<usize>>> = HashMap::new();
    for tuple in family.tuples.keys() {
        by_first.entry(tuple[0]).or_default().push(tuple);
    }
    let per_vertical = par::map_range(Exec::default(), cross.verticals.len(), |j| {
        let crossed = cross.graph.neighbors_b(j);
        let x = crossed
            .iter()
            .filter_map(|h| by_first.get(h))
            .flatten()
            .filter(|tp| tp.iter().all(|v| crossed.binary_search(v).is_ok()))
            .count();
        (crossed.len(), x)
    });
    let (d, x): (Vec<usize>, Vec<usize>) = per_vertical.into_iter().unzip();
    for (j, (&dj, &xj)) in d.iter().zip(&x).enumerate() {
        if dj + 1 > k && dj + 1 - k > xj {
            return Err(Error::InequalityViolated(format!(
                "vertical edge {j}: d = {dj} crossings but only x = {xj} canonical tuples (need at least d - 2t + 2)"
            )));
        }
    }
    let sum_x: usize = x.iter().sum();
    let upper = (k - 1) * family.len();
    if sum_x > upper {
        return Err(Error::InequalityViolated(format!("sum of x_i = {sum_x} exceeds (2t - 2)|F| = {upper}")));
    }
    Ok(RectangleBoundReport {
        t,
        census,
        corner_incidences,
        crossing_edges: cross.graph.edge_count(),
        canonical_tuples: family.len(),
        sum_d: d.iter().sum(),
        d,
        x,
        sum_x,
        upper,
    })
}
