//! The `suite` batch: a fixed grid of generated instances, each pruned to
//! be `K_{2,2}`-free and run through the checks that apply to its class.
//! Instances run in parallel; rows come back in grid order, so the output
//! depends only on the seed.

use serde::Serialize;
use ztnet::generators::{generate_pair, prune_to_ktt_free_with_budget, random_hsegments, GenParams, Kind};
use ztnet::hypergraph::primal_hypergraph;
use ztnet::nets::{pseudodisc_t_net, verify_t_net};
use ztnet::pseudodiscs::counting_inequality_check;
use ztnet::rectangles::{hereditary_planarity_check, rectangle_bound_report, segment_delaunay};
use ztnet::zarankiewicz::{heavy_count_check, num_edges_bound, BoundConfig, Side};
use ztnet::{par, AxisRect, BipartiteIntersectionGraph, Disc, Exec, GeomObject, Point};

use crate::error::CliError;
use crate::report::{csv_with_meta, json_with_meta, Meta};

const T: usize = 2;
const SIZES: [usize; 3] = [64, 128, 256];
const SEEDS_PER_SIZE: u64 = 2;
const NET_EPS: f64 = 0.1;
const PLANARITY_SAMPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    DiscDisc,
    RectRect,
    PointDisc,
    Segments,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::DiscDisc => "disc-disc",
            Family::RectRect => "rect-rect",
            Family::PointDisc => "point-disc",
            Family::Segments => "segments",
        })
    }
}

/// One instance of the suite. The three `chain_*` columns hold the
/// counting chain of the class: `sum d, sum x, (2t-2)|F|` for rectangles
/// and `sum floor(d/t), sum x, (t-1)|F|` for points against discs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteRow {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    pub t: usize,
    pub removed: usize,
    pub edges: usize,
    pub bound: Option<u64>,
    pub levels: Option<usize>,
    pub net_size: Option<usize>,
    pub heavy: Option<usize>,
    pub chain_low: Option<usize>,
    pub chain_mid: Option<usize>,
    pub chain_high: Option<usize>,
    pub worst_ratio: Option<f64>,
    pub pass: bool,
}

impl SuiteRow {
    fn new(family: Family, n: usize, seed: u64) -> Self {
        SuiteRow {
            family,
            n,
            seed,
            t: T,
            removed: 0,
            edges: 0,
            bound: None,
            levels: None,
            net_size: None,
            heavy: None,
            chain_low: None,
            chain_mid: None,
            chain_high: None,
            worst_ratio: None,
            pass: true,
        }
    }
}

fn jobs(seed: u64) -> Vec<(Family, usize, u64)> {
    let mut out = Vec::new();
    for family in [Family::DiscDisc, Family::RectRect, Family::PointDisc, Family::Segments] {
        for &n in &SIZES {
            for i in 0..SEEDS_PER_SIZE {
                let job_seed = seed.wrapping_mul(1_000_003).wrapping_add(out.len() as u64 * 31 + i);
                out.push((family, n, job_seed));
            }
        }
    }
    out
}

struct Pruned {
    a: Vec<GeomObject>,
    b: Vec<GeomObject>,
    inst: BipartiteIntersectionGraph,
    removed: usize,
}

fn pruned_pair(kind_a: Kind, kind_b: Kind, n: usize, params: &GenParams, seed: u64, budget: u128) -> Result<Pruned, CliError> {
    let (a, b) = generate_pair(kind_a, n, kind_b, n, params, seed)?;
    let full = BipartiteIntersectionGraph::build_with(a, b, Exec::Sequential);
    let p = prune_to_ktt_free_with_budget(&full.graph, T, budget)?;
    let inst = full.restrict(&p.kept_a, &p.kept_b);
    Ok(Pruned { a: inst.side_a.clone(), b: inst.side_b.clone(), inst, removed: p.removed_count() })
}

fn bound_columns(row: &mut SuiteRow, p: &Pruned, seed: u64) -> Result<(), CliError> {
    let g = &p.inst.graph;
    let report = num_edges_bound(g, &BoundConfig { seed, ..BoundConfig::new(T) })?;
    row.removed = p.removed;
    row.edges = g.edge_count();
    row.bound = Some(report.bound);
    row.levels = Some(report.depth());
    row.pass &= report.is_sound() && report.heavy_checks_pass();
    Ok(())
}

fn run_job(family: Family, n: usize, seed: u64, budget: u128) -> Result<SuiteRow, CliError> {
    let mut row = SuiteRow::new(family, n, seed);
    match family {
        Family::DiscDisc => {
            let p = pruned_pair(Kind::RandomDiscs, Kind::RandomDiscs, n, &GenParams::default(), seed, budget)?;
            bound_columns(&mut row, &p, seed)?;
            let g = &p.inst.graph;
            if NET_EPS * g.m() as f64 >= 2.0 * T as f64 {
                let h = primal_hypergraph(g);
                let (net, _) = pseudodisc_t_net(&h, NET_EPS, T, seed)?;
                row.pass &= verify_t_net(&h, NET_EPS, &net)?.is_valid();
                let check = heavy_count_check(g, T, &net, Side::B)?;
                row.net_size = Some(net.len());
                row.heavy = Some(check.heavy_count);
                row.pass &= check.pass;
            }
        }
        Family::RectRect => {
            let p = pruned_pair(Kind::RandomRects, Kind::RandomRects, n, &GenParams::default(), seed, budget)?;
            bound_columns(&mut row, &p, seed)?;
            let rects = |v: &[GeomObject]| v.iter().map(|o| *o.as_rect().expect("rectangles")).collect::<Vec<AxisRect>>();
            let r = rectangle_bound_report(&rects(&p.a), &rects(&p.b), T)?;
            row.chain_low = Some(r.sum_d);
            row.chain_mid = Some(r.sum_x);
            row.chain_high = Some(r.upper);
            row.pass &= r.census.classified() == r.census.intersecting;
        }
        Family::PointDisc => {
            let params = GenParams { radius: (0.03, 0.15), ..GenParams::default() };
            let p = pruned_pair(Kind::RandomPoints, Kind::RandomDiscs, n, &params, seed, budget)?;
            bound_columns(&mut row, &p, seed)?;
            let pts: Vec<Point> = p.a.iter().map(|o| if let GeomObject::Point(x) = o { *x } else { unreachable!() }).collect();
            let discs: Vec<Disc> = p.b.iter().map(|o| if let GeomObject::Disc(d) = o { *d } else { unreachable!() }).collect();
            let r = counting_inequality_check(&pts, &discs, T)?;
            row.chain_low = Some(r.sum_floor);
            row.chain_mid = Some(r.sum_x);
            row.chain_high = Some(r.upper);
            row.pass &= r.coverage && r.max_multiplicity < T;
        }
        Family::Segments => {
            let hsegs = random_hsegments(n, &GenParams::default(), seed)?;
            let del = segment_delaunay(&hsegs);
            let planar = hereditary_planarity_check(&del.graph, PLANARITY_SAMPLES, seed);
            row.edges = del.graph.edge_count();
            row.worst_ratio = Some(planar.worst_ratio);
            row.pass &= planar.pass();
        }
    }
    Ok(row)
}

/// Runs every job. A job whose checks raise an inequality or net error
/// becomes a failing row instead of aborting the batch.
pub fn run_suite(seed: u64, budget: u128) -> Result<Vec<SuiteRow>, CliError> {
    let jobs = jobs(seed);
    par::try_map(Exec::default(), &jobs, |&(family, n, job_seed)| match run_job(family, n, job_seed, budget) {
        Ok(row) => Ok(row),
        Err(e) if e.exit_code() == 2 => Ok(SuiteRow { pass: false, ..SuiteRow::new(family, n, job_seed) }),
        Err(e) => Err(e),
    })
}

fn meta(seed: u64) -> Meta {
    Meta::new("suite", seed)
        .with("t", T)
        .with("sizes", format!("{SIZES:?}"))
        .with("seeds_per_size", SEEDS_PER_SIZE)
        .with("net_eps", NET_EPS)
        .with("planarity_samples", PLANARITY_SAMPLES)
}

pub fn suite_csv(seed: u64, rows: &[SuiteRow]) -> Result<String, CliError> {
    csv_with_meta(&meta(seed), rows)
}

pub fn suite_json(seed: u64, rows: &[SuiteRow]) -> String {
    json_with_meta(&meta(seed), &rows)
}
