//! Points against discs: shrinking a disc toward one of its points and the
//! canonical `t`-tuples this exposes.
//!
//! A disc `d = (c, r)` shrinks toward an anchor `p` inside it along
//! `center(s) = (1 - s) c + s p`, `radius(s) = (1 - s) r` for `s` in
//! `[0, 1]`. Every intermediate object is a disc contained in the previous
//! ones, so the set of points it holds only loses elements, and the anchor
//! stays until the end.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Disc, Point};
use crate::hypergraph::CanonicalTupleFamily;
use crate::par::{self, Exec};

/// A point leaving the shrinking disc.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShrinkEvent {
    pub s: f64,
    pub lost_point: usize,
    /// Points still held right after this one leaves.
    pub remaining: Vec<usize>,
}

/// The disc at parameter `s` of the shrink toward `anchor`.
pub fn shrunk_disc(d: &Disc, anchor: Point, s: f64) -> Disc {
    Disc::new(
        (1.0 - s) * d.center.x + s * anchor.x,
        (1.0 - s) * d.center.y + s * anchor.y,
        (1.0 - s) * d.radius,
    )
}

/// Smallest `s` in `[0, 1]` with `|p - center(s)| = radius(s)`, or 1 when
/// the point never leaves (it is the anchor).
///
/// With `u = p - c` and `w = anchor - c` the condition is
/// `s^2 (|w|^2 - r^2) + s (2 r^2 - 2 u.w) + |u|^2 - r^2 = 0`.
pub fn exit_parameter(d: &Disc, anchor: Point, p: Point) -> f64 {
    let (ux, uy) = (p.x - d.center.x, p.y - d.center.y);
    let (wx, wy) = (anchor.x - d.center.x, anchor.y - d.center.y);
    let r2 = d.radius * d.radius;
    let qa = wx * wx + wy * wy - r2;
    let qb = 2.0 * r2 - 2.0 * (ux * wx + uy * wy);
    let qc = ux * ux + uy * uy - r2;
    if qc >= 0.0 {
        return 0.0;
    }
    let mut roots = Vec::with_capacity(2);
    if qa.abs() <= 1e-14 * r2 {
        if qb != 0.0 {
            roots.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            // cancellation-free pair of roots
            let q = -0.5 * (qb + qb.signum() * disc.sqrt());
            if q != 0.0 {
                roots.extend([q / qa, qc / q]);
            }
        }
    }
    roots.into_iter().filter(|&s| (0.0..1.0).contains(&s)).fold(1.0, f64::min)
}

/// Exit events of the contained points, sorted by `s` and then by index.
/// Points outside `d` are ignored; the anchor (and any point equal to it)
/// gets the sentinel `s = 1`.
pub fn shrink_events(d: &Disc, anchor: Point, pts: &[Point]) -> Result<Vec<ShrinkEvent>> {
    if !d.contains(anchor) {
        return Err(Error::PreconditionViolated(format!("anchor {anchor:?} is not inside {d:?}")));
    }
    let mut exits: Vec<(f64, usize)> = pts
        .iter()
        .enumerate()
        .filter(|(_, p)| d.contains(**p))
        .map(|(i, &p)| (if p == anchor { 1.0 } else { exit_parameter(d, anchor, p) }, i))
        .collect();
    exits.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let mut remaining: Vec<usize> = exits.iter().map(|e| e.1).collect();
    remaining.sort_unstable();
    Ok(exits
        .into_iter()
        .map(|(s, i)| {
            remaining.retain(|&v| v != i);
            ShrinkEvent { s, lost_point: i, remaining: remaining.clone() }
        })
        .collect())
}

/// The chain of point sets held along the shrink: the initial set, then the
/// set after each group of simultaneous exits (the final empty set
/// excluded).
fn held_chain(d: &Disc, anchor: Point, pts: &[Point]) -> Result<Vec<Vec<usize>>> {
    let events = shrink_events(d, anchor, pts)?;
    let mut chain = Vec::new();
    let mut initial: Vec<usize> = events.iter().map(|e| e.lost_point).collect();
    initial.sort_unstable();
    chain.push(initial);
    for (i, e) in events.iter().enumerate() {
        let group_ends = events.get(i + 1).is_none_or(|next| next.s != e.s);
        if group_ends && !e.remaining.is_empty() {
            chain.push(e.remaining.clone());
        }
    }
    Ok(chain)
}

/// Which shrink produced a canonical tuple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShrinkWitness {
    pub disc: usize,
    pub anchor: usize,
}

pub fn shrink_canonical_tuples(a_pts: &[Point], b_discs: &[Disc], t: usize) -> CanonicalTupleFamily<ShrinkWitness> {
    shrink_canonical_tuples_with(a_pts, b_discs, t, Exec::default())
}

/// Point sets of size exactly `t` held by some disc of `b_discs` while it
/// shrinks toward one of its points, over every disc and every contained
/// anchor. Parallel over discs.
pub fn shrink_canonical_tuples_with(
    a_pts: &[Point],
    b_discs: &[Disc],
    t: usize,
    exec: Exec,
) -> CanonicalTupleFamily<ShrinkWitness> {
    let per_disc = par::map_range(exec, b_discs.len(), |j| {
        let d = &b_discs[j];
        let mut found = Vec::new();
        for (i, &anchor) in a_pts.iter().enumerate() {
            if !d.contains(anchor) {
                continue;
            }
            let chain = held_chain(d, anchor, a_pts).expect("anchor is inside the disc");
            found.extend(
                chain.into_iter().filter(|set| set.len() == t).map(|set| (set, ShrinkWitness { disc: j, anchor: i })),
            );
        }
        found
    });
    let mut family = CanonicalTupleFamily::new(t);
    for (tuple, w) in per_disc.into_iter().flatten() {
        family.insert(tuple, w);
    }
    family
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointDiscReport {
    pub t: usize,
    /// `|E| = sum d_i`, point-disc incidences.
    pub edges: usize,
    /// `sum floor(d_i / t)`.
    pub sum_floor: usize,
    /// `sum x_i`, with `x_i` the canonical tuples inside disc `i`.
    pub sum_x: usize,
    pub canonical_tuples: usize,
    /// `(t - 1) |F|`.
    pub upper: usize,
    /// Largest number of discs holding a single canonical tuple.
    pub max_multiplicity: usize,
    /// Every point of a disc holding at least `t` points lies in a canonical
    /// tuple inside that disc.
    pub coverage: bool,
}

/// Checks `sum floor(d_i / t) <= sum x_i <= (t - 1) |F|`; the right-hand
/// inequality relies on `K_{t,t}`-freeness (no `t` discs share a `t`-set).
pub fn counting_inequality_check(a_pts: &[Point], b_discs: &[Disc], t: usize) -> Result<PointDiscReport> {
    if t == 0 {
        return Err(Error::ParamOutOfRange("t must be at least 1".into()));
    }
    let family = shrink_canonical_tuples(a_pts, b_discs, t);
    let mut by_first: HashMap<usize, Vec<&Vec<usize>>> = HashMap::new();
    for tuple in family.tuples.keys() {
        by_first.entry(tuple[0]).or_default().push(tuple);
    }
    let mut multiplicity: HashMap<&Vec<usize>, usize> = HashMap::new();
    let (mut edges, mut sum_floor, mut sum_x, mut coverage) = (0, 0, 0, true);
    for d in b_discs {
        let held: Vec<usize> = (0..a_pts.len()).filter(|&i| d.contains(a_pts[i])).collect();
        let inside: Vec<&Vec<usize>> = held
            .iter()
            .filter_map(|v| by_first.get(v))
            .flatten()
            .copied()
            .filter(|tp| tp.iter().all(|v| held.binary_search(v).is_ok()))
            .collect();
        edges += held.len();
        sum_floor += held.len() / t;
        sum_x += inside.len();
        for tp in &inside {
            *multiplicity.entry(tp).or_default() += 1;
        }
        if held.len() >= t {
            coverage &= held.iter().all(|v| inside.iter().any(|tp| tp.contains(v)));
        }
    }
    let upper = (t - 1) * family.len();
    if sum_floor > sum_x {
        return Err(Error::InequalityViolated(format!("sum floor(d_i / t) = {sum_floor} exceeds sum x_i = {sum_x}")));
    }
    if sum_x > upper {
        return Err(Error::InequalityViolated(format!("sum x_i = {sum_x} exceeds (t - 1)|F| = {upper}")));
    }
    Ok(PointDiscReport {
        t,
        edges,
        sum_floor,
        sum_x,
        canonical_tuples: family.len(),
        upper,
        max_multiplicity: multiplicity.values().copied().max().unwrap_or(0),
        coverage,
    })
}
