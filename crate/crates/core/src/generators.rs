//! Seeded instance generators and a pruner that removes every `K_{t,t}`.
//!
//! Random coordinates are snapped to a grid of `2^20` steps across the
//! window. Rectangle and segment generators draw grid lines without
//! replacement, so their output is in general position by construction.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{AxisRect, Disc, Frame, GeomObject, Point, Segment};
use crate::hypergraph::BipartiteGraph;
use crate::zarankiewicz::{find_biclique_from, KttWitness, DEFAULT_BUDGET};

const GRID_STEPS: u32 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Kind {
    RandomDiscs,
    RandomRects,
    RandomFrames,
    GridPoints,
    RandomPoints,
    DyadicRects,
}

impl Kind {
    pub const ALL: [Kind; 6] = [
        Kind::RandomDiscs,
        Kind::RandomRects,
        Kind::RandomFrames,
        Kind::GridPoints,
        Kind::RandomPoints,
        Kind::DyadicRects,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::RandomDiscs => "random_discs",
            Kind::RandomRects => "random_rects",
            Kind::RandomFrames => "random_frames",
            Kind::GridPoints => "grid_points",
            Kind::RandomPoints => "random_points",
            Kind::DyadicRects => "dyadic_rects",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::ParamOutOfRange(format!("unknown kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RadiusDist {
    Uniform,
    LogUniform,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenParams {
    /// Square coordinate window `[lo, hi]^2`.
    pub window: (f64, f64),
    /// Disc radius range.
    pub radius: (f64, f64),
    pub radius_dist: RadiusDist,
    /// Rectangle / segment side length range.
    pub side: (f64, f64),
    /// Dyadic rectangles have area `window_width^2 * 2^-levels`.
    pub dyadic_levels: u32,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            window: (0.0, 1.0),
            radius: (0.01, 0.1),
            radius_dist: RadiusDist::Uniform,
            side: (0.02, 0.3),
            dyadic_levels: 6,
        }
    }
}

impl GenParams {
    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.window;
        let width = hi - lo;
        let bad = |msg: &str| Err(Error::ParamOutOfRange(msg.to_string()));
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return bad("window must satisfy lo < hi");
        }
        if !(self.radius.0 > 0.0 && self.radius.0 <= self.radius.1 && self.radius.1.is_finite()) {
            return bad("radius range must satisfy 0 < lo <= hi");
        }
        let step = width / GRID_STEPS as f64;
        if !(self.side.0 >= step && self.side.0 <= self.side.1 && self.side.1 < width) {
            return bad("side range must satisfy grid step <= lo <= hi < window width");
        }
        if self.dyadic_levels > 20 {
            return bad("dyadic_levels must be at most 20");
        }
        Ok(())
    }

    fn step(&self) -> f64 {
        (self.window.1 - self.window.0) / GRID_STEPS as f64
    }

    fn coord(&self, k: u32) -> f64 {
        self.window.0 + k as f64 * self.step()
    }
}

/// Draws grid lines without replacement.
struct LinePool {
    used: HashSet<u32>,
}

impl LinePool {
    fn new() -> Self {
        LinePool { used: HashSet::new() }
    }

    /// A pair `(lo, lo + len)` of unused grid indices.
    fn draw_pair(&mut self, rng: &mut ChaCha8Rng, len_range: (u32, u32)) -> Result<(u32, u32)> {
        for _ in 0..10_000 {
            let len = rng.gen_range(len_range.0..=len_range.1);
            let lo = rng.gen_range(0..=GRID_STEPS - len);
            let hi = lo + len;
            if lo != hi && !self.used.contains(&lo) && !self.used.contains(&hi) {
                self.used.insert(lo);
                self.used.insert(hi);
                return Ok((lo, hi));
            }
        }
        Err(Error::ParamOutOfRange("grid exhausted; too many objects for the window".into()))
    }

    fn draw_one(&mut self, rng: &mut ChaCha8Rng) -> Result<u32> {
        for _ in 0..10_000 {
            let k = rng.gen_range(0..=GRID_STEPS);
            if self.used.insert(k) {
                return Ok(k);
            }
        }
        Err(Error::ParamOutOfRange("grid exhausted".into()))
    }
}

fn rng_for(kind: Kind, seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (kind as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn side_steps(params: &GenParams) -> (u32, u32) {
    let s = params.step();
    ((params.side.0 / s).round().max(1.0) as u32, (params.side.1 / s).round() as u32)
}

/// Generate `count` objects of the given kind. Deterministic in `seed`.
pub fn generate(kind: Kind, count: usize, params: &GenParams, seed: u64) -> Result<Vec<GeomObject>> {
    params.validate()?;
    let mut rng = rng_for(kind, seed);
    let grid_point = |rng: &mut ChaCha8Rng| {
        Point::new(params.coord(rng.gen_range(0..=GRID_STEPS)), params.coord(rng.gen_range(0..=GRID_STEPS)))
    };
    match kind {
        Kind::RandomDiscs => Ok((0..count)
            .map(|_| {
                let center = grid_point(&mut rng);
                let (lo, hi) = params.radius;
                let radius = match params.radius_dist {
                    RadiusDist::Uniform if lo == hi => lo,
                    RadiusDist::Uniform => rng.gen_range(lo..hi),
                    RadiusDist::LogUniform if lo == hi => lo,
                    RadiusDist::LogUniform => rng.gen_range(lo.ln()..hi.ln()).exp(),
                };
                GeomObject::Disc(Disc { center, radius })
            })
            .collect()),
        Kind::RandomRects | Kind::RandomFrames => {
            let rects = random_rects(count, params, &mut rng)?;
            Ok(rects
                .into_iter()
                .map(|r| if kind == Kind::RandomRects { GeomObject::Rect(r) } else { GeomObject::Frame(Frame(r)) })
                .collect())
        }
        Kind::RandomPoints => Ok((0..count).map(|_| GeomObject::Point(grid_point(&mut rng))).collect()),
        Kind::GridPoints => {
            let side = (count as f64).sqrt().ceil().max(1.0) as usize;
            let (lo, hi) = params.window;
            let gap = (hi - lo) / (side + 1) as f64;
            Ok((0..count)
                .map(|i| {
                    let (r, c) = (i / side, i % side);
                    GeomObject::Point(Point::new(lo + gap * (c + 1) as f64, lo + gap * (r + 1) as f64))
                })
                .collect())
        }
        Kind::DyadicRects => {
            let levels = params.dyadic_levels;
            let (lo, hi) = params.window;
            let width = hi - lo;
            Ok((0..count)
                .map(|_| {
                    let i = rng.gen_range(0..=levels);
                    let j = levels - i;
                    let a = rng.gen_range(0..1u64 << i);
                    let b = rng.gen_range(0..1u64 << j);
                    let wx = width / (1u64 << i) as f64;
                    let wy = width / (1u64 << j) as f64;
                    GeomObject::Rect(AxisRect::new(
                        lo + a as f64 * wx,
                        lo + (a + 1) as f64 * wx,
                        lo + b as f64 * wy,
                        lo + (b + 1) as f64 * wy,
                    ))
                })
                .collect())
        }
    }
}

fn random_rects(count: usize, params: &GenParams, rng: &mut ChaCha8Rng) -> Result<Vec<AxisRect>> {
    let steps = side_steps(params);
    let mut xs = LinePool::new();
    let mut ys = LinePool::new();
    (0..count)
        .map(|_| {
            let (x0, x1) = xs.draw_pair(rng, steps)?;
            let (y0, y1) = ys.draw_pair(rng, steps)?;
            Ok(AxisRect::new(params.coord(x0), params.coord(x1), params.coord(y0), params.coord(y1)))
        })
        .collect()
}

/// Families for both sides of an instance. When the kinds agree, both
/// come from one draw, so the grid-without-replacement guarantee (general
/// position for rectangles) covers their union.
pub fn generate_pair(
    kind_a: Kind,
    m: usize,
    kind_b: Kind,
    n: usize,
    params: &GenParams,
    seed: u64,
) -> Result<(Vec<GeomObject>, Vec<GeomObject>)> {
    if kind_a == kind_b {
        let mut all = generate(kind_a, m + n, params, seed)?;
        let b = all.split_off(m);
        Ok((all, b))
    } else {
        Ok((generate(kind_a, m, params, seed)?, generate(kind_b, n, params, seed.wrapping_add(1))?))
    }
}

/// Horizontal segments with pairwise distinct endpoint abscissae and
/// pairwise distinct ordinates.
pub fn random_hsegments(count: usize, params: &GenParams, seed: u64) -> Result<Vec<Segment>> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EC5_EC5E);
    let steps = side_steps(params);
    let mut xs = LinePool::new();
    let mut ys = LinePool::new();
    (0..count)
        .map(|_| {
            let (x0, x1) = xs.draw_pair(&mut rng, steps)?;
            let y = ys.draw_one(&mut rng)?;
            Ok(Segment::horizontal(params.coord(y), params.coord(x0), params.coord(x1)))
        })
        .collect()
}

/// Result of [`prune_to_ktt_free`]: the surviving vertices (original
/// indices, sorted) and the induced graph on them.
#[derive(Debug, Clone)]
pub struct Pruned {
    pub graph: BipartiteGraph,
    pub kept_a: Vec<usize>,
    pub kept_b: Vec<usize>,
    pub removed_a: Vec<usize>,
    pub removed_b: Vec<usize>,
}

impl Pruned {
    pub fn removed_count(&self) -> usize {
        self.removed_a.len() + self.removed_b.len()
    }
}

/// Repeatedly find the lexicographically first `K_{t,t}` and delete its
/// vertex of maximum current degree (ties: B side first, then lowest
/// index) until none remains.
///
/// Deleting vertices never creates a biclique, so the search resumes where
/// the previous witness was found instead of restarting.
pub fn prune_to_ktt_free(g: &BipartiteGraph, t: usize) -> Result<Pruned> {
    prune_to_ktt_free_with_budget(g, t, DEFAULT_BUDGET)
}

pub fn prune_to_ktt_free_with_budget(g: &BipartiteGraph, t: usize, budget: u128) -> Result<Pruned> {
    if t < 2 {
        return Err(Error::PreconditionViolated(format!("pruning needs t >= 2, got {t}")));
    }
    let mut alive_a = vec![true; g.m()];
    let mut alive_b = vec![true; g.n()];
    let mut deg_a: Vec<usize> = (0..g.m()).map(|i| g.degree_a(i)).collect();
    let mut deg_b: Vec<usize> = (0..g.n()).map(|j| g.degree_b(j)).collect();
    let mut removed_a = Vec::new();
    let mut removed_b = Vec::new();
    let mut resume: Option<Vec<usize>> = None;
    while let Some((witness, at)) =
        find_biclique_from(g, t, &alive_a, &alive_b, resume.as_deref(), budget)?
    {
        let KttWitness { a, b } = witness;
        // (degree, prefer B, prefer low index)
        let pick_b = b.iter().map(|&j| (deg_b[j], 1usize, std::cmp::Reverse(j), true, j));
        let pick_a = a.iter().map(|&i| (deg_a[i], 0usize, std::cmp::Reverse(i), false, i));
        let (_, _, _, on_b, v) = pick_b.chain(pick_a).max().expect("witness is nonempty");
        if on_b {
            alive_b[v] = false;
            removed_b.push(v);
            for &i in g.neighbors_b(v) {
                if alive_a[i] {
                    deg_a[i] -= 1;
                }
            }
        } else {
            alive_a[v] = false;
            removed_a.push(v);
            for &j in g.neighbors_a(v) {
                if alive_b[j] {
                    deg_b[j] -= 1;
                }
            }
        }
        resume = Some(at);
    }
    let kept_a: Vec<usize> = (0..g.m()).filter(|&i| alive_a[i]).collect();
    let kept_b: Vec<usize> = (0..g.n()).filter(|&j| alive_b[j]).collect();
    removed_a.sort_unstable();
    removed_b.sort_unstable();
    Ok(Pruned { graph: g.induced(&kept_a, &kept_b), kept_a, kept_b, removed_a, removed_b })
}
