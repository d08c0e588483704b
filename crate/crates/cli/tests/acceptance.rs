//! Acceptance run: twelve end-to-end criteria, one PASS/FAIL line each.
//!
//! Built without the libtest harness so the lines always reach the
//! terminal; the process exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ztnet::generators::{generate, generate_pair, prune_to_ktt_free, random_hsegments, GenParams, Kind, RadiusDist};
use ztnet::hypergraph::{heavy_threshold, primal_hypergraph, vc_dimension, dual_hypergraph};
use ztnet::nets::{greedy_cover_t_net, min_t_net_bruteforce, pseudodisc_t_net, stacked_cover_set, verify_t_net};
use ztnet::pseudodiscs::{counting_inequality_check, exit_parameter, shrink_canonical_tuples, shrunk_disc};
use ztnet::rectangles::{
    canonical_segment_tuples, hereditary_planarity_check, intersection_type_census, rectangle_bound_report,
    segment_delaunay,
};
use ztnet::zarankiewicz::{heavy_count_check, is_ktt_free, num_edges_bound, BoundConfig, EpsRule, NetStrategy, Side};
use ztnet::{AxisRect, BipartiteGraph, BipartiteIntersectionGraph, Disc, GeomObject, Hypergraph, Point};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn disc_params(lo: f64, hi: f64) -> GenParams {
    GenParams { radius: (lo, hi), ..GenParams::default() }
}

fn graph_of(a: Vec<GeomObject>, b: Vec<GeomObject>) -> BipartiteIntersectionGraph {
    BipartiteIntersectionGraph::build(a, b)
}

fn disc_instance(n: usize, params: &GenParams, seed: u64) -> BipartiteIntersectionGraph {
    let (a, b) = generate_pair(Kind::RandomDiscs, n, Kind::RandomDiscs, n, params, seed).unwrap();
    graph_of(a, b)
}

fn pruned(g: &BipartiteIntersectionGraph, t: usize) -> BipartiteIntersectionGraph {
    let p = prune_to_ktt_free(&g.graph, t).unwrap();
    g.restrict(&p.kept_a, &p.kept_b)
}

fn as_rects(v: &[GeomObject]) -> Vec<AxisRect> {
    v.iter().map(|o| *o.as_rect().unwrap()).collect()
}

fn as_points(v: &[GeomObject]) -> Vec<Point> {
    v.iter().map(|o| if let GeomObject::Point(p) = o { *p } else { panic!("not a point") }).collect()
}

fn as_discs(v: &[GeomObject]) -> Vec<Disc> {
    v.iter().map(|o| if let GeomObject::Disc(d) = o { *d } else { panic!("not a disc") }).collect()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 { v[k / 2] } else { 0.5 * (v[k / 2 - 1] + v[k / 2]) }
}

const SOUND_SEEDS: u64 = 50;
const SOUND_EPS: f64 = 0.1;

/// Disc-disc instances shared by criteria 1 and 2. The radius range makes
/// neighborhoods of 20+ discs (the eps = 0.1 threshold) common.
fn soundness_instances() -> Vec<Hypergraph> {
    (0..SOUND_SEEDS).map(|s| primal_hypergraph(&disc_instance(200, &disc_params(0.02, 0.2), 100 + s).graph)).collect()
}

fn heavy_edges(h: &Hypergraph, eps: f64) -> usize {
    let thr = heavy_threshold(eps, h.vertex_count);
    h.hyperedges.iter().filter(|e| e.len() >= thr).count()
}

fn criterion_1(hs: &[Hypergraph]) -> Outcome {
    let (mut bad, mut checked, mut heavy) = (0, 0, 0);
    for (i, h) in hs.iter().enumerate() {
        heavy += heavy_edges(h, SOUND_EPS);
        for t in [2, 3] {
            let (pd, _) = pseudodisc_t_net(h, SOUND_EPS, t, i as u64).unwrap();
            let gr = greedy_cover_t_net(h, SOUND_EPS, t).unwrap();
            for net in [&pd, &gr] {
                checked += 1;
                if !verify_t_net(h, SOUND_EPS, net).unwrap().is_valid() {
                    bad += 1;
                }
            }
        }
    }
    outcome(bad == 0, format!("{checked} nets verified on {} instances ({heavy} heavy hyperedges), {bad} with a missed hyperedge", hs.len()))
}

fn cover_depth_failures(h: &Hypergraph, eps: f64, t: usize, seed: u64) -> (usize, usize) {
    let tr = stacked_cover_set(h, eps, t, seed).unwrap();
    let mut in_s = vec![false; h.vertex_count];
    for &v in &tr.cover_set {
        in_s[v] = true;
    }
    let thr = heavy_threshold(eps, h.vertex_count);
    let heavy: Vec<&Vec<usize>> = h.hyperedges.iter().filter(|e| e.len() >= thr).collect();
    let shallow = heavy.iter().filter(|e| e.iter().filter(|&&v| in_s[v]).count() < t).count();
    (heavy.len(), shallow)
}

fn criterion_2(hs: &[Hypergraph]) -> Outcome {
    let (mut heavy, mut shallow) = (0, 0);
    for (i, h) in hs.iter().enumerate() {
        for t in [2, 3] {
            let (hv, sh) = cover_depth_failures(h, SOUND_EPS, t, i as u64);
            heavy += hv;
            shallow += sh;
        }
    }
    // larger instances where the sampled nets are proper subsets
    let mut proper = 0;
    for s in 0..3 {
        let h = primal_hypergraph(&disc_instance(1500, &disc_params(0.1, 0.4), 900 + s).graph);
        let tr = stacked_cover_set(&h, 0.3, 3, s).unwrap();
        if tr.cover_set.len() < h.vertex_count {
            proper += 1;
        }
        let (hv, sh) = cover_depth_failures(&h, 0.3, 3, s);
        heavy += hv;
        shallow += sh;
    }
    outcome(
        shallow == 0,
        format!("{heavy} heavy hyperedges checked, {shallow} with fewer than t cover vertices; {proper}/3 large covers were proper subsets"),
    )
}

fn random_small_hypergraph(rng: &mut ChaCha8Rng) -> Hypergraph {
    let n = rng.gen_range(4..=12);
    let edges = (0..rng.gen_range(1..=4))
        .map(|_| {
            let size = rng.gen_range(1..=5.min(n));
            rand::seq::index::sample(rng, n, size).into_vec()
        })
        .collect();
    Hypergraph::new(n, edges)
}

/// Minimum net size by exhaustive search: a net must give each heavy
/// hyperedge one of its own t-subsets, so try every such assignment.
fn exhaustive_min(h: &Hypergraph, eps: f64, t: usize) -> Option<usize> {
    let heavy = h.heavy_edges(heavy_threshold(eps, h.vertex_count));
    if heavy.iter().any(|e| e.len() < t) {
        return None;
    }
    let options: Vec<Vec<Vec<usize>>> = heavy.iter().map(|e| e.iter().copied().combinations(t).collect()).collect();
    let best = options
        .iter()
        .multi_cartesian_product()
        .map(|pick| pick.into_iter().collect::<BTreeSet<_>>().len())
        .min();
    Some(best.unwrap_or(0))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut cases, mut bad) = (0, Vec::new());
    while cases < 200 {
        let h = random_small_hypergraph(&mut rng);
        let t = rng.gen_range(1..=3);
        let eps = rng.gen_range(1..=5) as f64 / 10.0;
        let Some(expected) = exhaustive_min(&h, eps, t) else { continue };
        cases += 1;
        let min = min_t_net_bruteforce(&h, eps, t).unwrap();
        let greedy = greedy_cover_t_net(&h, eps, t).unwrap();
        let mut ok = verify_t_net(&h, eps, &min).unwrap().is_valid()
            && min.len() == expected
            && verify_t_net(&h, eps, &greedy).unwrap().is_valid()
            && greedy.len() >= min.len();
        if eps * h.vertex_count as f64 >= 2.0 * t as f64 {
            let (pd, _) = pseudodisc_t_net(&h, eps, t, cases).unwrap();
            ok &= verify_t_net(&h, eps, &pd).unwrap().is_valid() && pd.len() >= min.len();
        }
        if !ok {
            bad.push(format!("case {cases}"));
        }
    }
    let mut ktt_mismatch = 0;
    for _ in 0..200 {
        let p = rng.gen_range(0.2..0.7);
        let edges: Vec<(usize, usize)> = (0..8).cartesian_product(0..8).filter(|_| rng.gen_bool(p)).collect();
        let g = BipartiteGraph::from_edges(8, 8, edges);
        for t in [2, 3] {
            let naive = (0..8).combinations(t).any(|sa| {
                (0..8).combinations(t).any(|sb| sa.iter().all(|&i| sb.iter().all(|&j| g.has_edge(i, j))))
            });
            if is_ktt_free(&g, t).unwrap().is_some() != naive {
                ktt_mismatch += 1;
            }
        }
    }
    outcome(
        bad.is_empty() && ktt_mismatch == 0,
        format!("{cases} hypergraphs, {} net mismatches; 400 biclique checks, {ktt_mismatch} mismatches", bad.len()),
    )
}

/// Pruned disc instances with log-uniform radii: a few large discs give
/// heavy vertices that survive pruning.
fn free_disc_instances(t: usize) -> Vec<(u64, BipartiteIntersectionGraph)> {
    let params = GenParams { radius: (0.005, 0.3), radius_dist: RadiusDist::LogUniform, ..GenParams::default() };
    (0..25).map(|s| (s, pruned(&disc_instance(200, &params, 400 + s + 100 * t as u64), t))).collect()
}

fn criterion_4() -> Outcome {
    let eps = 0.05;
    let (mut checks, mut fails, mut heavy_total, mut skipped) = (0, 0, 0, 0);
    for t in [2, 3] {
        for (s, inst) in free_disc_instances(t) {
            let g = &inst.graph;
            for (side, h) in [(Side::B, primal_hypergraph(g)), (Side::A, dual_hypergraph(g))] {
                if eps * (h.vertex_count as f64) < 2.0 * t as f64 {
                    skipped += 1;
                    continue;
                }
                let (net, _) = pseudodisc_t_net(&h, eps, t, s).unwrap();
                let r = heavy_count_check(g, t, &net, side).unwrap();
                checks += 1;
                heavy_total += r.heavy_count;
                if !r.pass {
                    fails += 1;
                }
            }
        }
    }
    outcome(
        fails == 0 && checks > 0,
        format!("{checks} checks ({heavy_total} heavy vertices in total, {skipped} sides below eps n >= 2t), {fails} failures"),
    )
}

fn criterion_5() -> Outcome {
    let rules = [EpsRule::default(), EpsRule::Fixed { eps: 0.1, eps_prime: 0.1 }, EpsRule::Degree(4.0)];
    let (mut runs, mut violations, mut deepest) = (0, 0, 0);
    for n in [64, 128, 256] {
        for s in 0..5u64 {
            let discs = disc_instance(n, &disc_params(0.02, 0.15), 500 + s);
            let (a, b) = generate_pair(Kind::RandomRects, n, Kind::RandomRects, n, &GenParams::default(), 600 + s).unwrap();
            for inst in [pruned(&discs, 2), pruned(&graph_of(a, b), 2)] {
                assert!(is_ktt_free(&inst.graph, 2).unwrap().is_none());
                for rule in rules {
                    for net in [NetStrategy::Auto, NetStrategy::GreedyCover] {
                        let cfg = BoundConfig { t: 2, net, eps_rule: rule, seed: s };
                        let r = num_edges_bound(&inst.graph, &cfg).unwrap();
                        runs += 1;
                        deepest = deepest.max(r.depth());
                        if !r.is_sound() {
                            violations += 1;
                        }
                    }
                }
            }
        }
    }
    outcome(violations == 0, format!("{runs} bound computations (deepest recursion {deepest} levels), {violations} below |E|"))
}

fn criterion_6() -> Outcome {
    let mut medians = Vec::new();
    for n in [128usize, 256, 512, 1024] {
        let scale = (n as f64).sqrt();
        let params = disc_params(0.25 / scale, 0.75 / scale);
        let ratios: Vec<f64> = (0..10u64)
            .map(|s| {
                let inst = pruned(&disc_instance(n, &params, 700 + s), 2);
                inst.graph.edge_count() as f64 / n as f64
            })
            .collect();
        medians.push((n, median(ratios)));
    }
    let base = medians[0].1;
    let pass = medians.iter().all(|&(_, r)| r <= 2.0 * base);
    let shown = medians.iter().map(|(n, r)| format!("n={n}: {r:.3}")).join(", ");
    outcome(pass, format!("median |E|/n {shown} (limit {:.3})", 2.0 * base))
}

fn criterion_7() -> Outcome {
    let mut bad = 0;
    let mut pairs = 0;
    for s in 0..100u64 {
        let n = 40 + (s as usize % 4) * 20;
        let (a, b) = generate_pair(Kind::RandomRects, n, Kind::RandomRects, n, &GenParams::default(), 800 + s).unwrap();
        let (a, b) = (as_rects(&a), as_rects(&b));
        let c = intersection_type_census(&a, &b).unwrap();
        let exact = a.iter().cartesian_product(&b).filter(|(x, y)| x.intersects(y)).count();
        pairs += exact;
        if c.classified() != exact || c.intersecting != exact {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("100 instances, {pairs} intersecting pairs, {bad} partition mismatches"))
}

fn criterion_8() -> Outcome {
    let t = 2;
    let mut medians = Vec::new();
    let (mut checked, mut violations) = (0, 0);
    for n in [100usize, 200, 400, 800] {
        let mut ratios = Vec::new();
        for s in 0..10u64 {
            let hs = random_hsegments(n, &GenParams::default(), 1000 + s + n as u64).unwrap();
            ratios.push(canonical_segment_tuples(&hs, 2 * t - 1).len() as f64 / n as f64);
            let del = segment_delaunay(&hs);
            let r = hereditary_planarity_check(&del.graph, 1000, s);
            checked += r.checked;
            violations += r.violations;
        }
        medians.push((n, median(ratios)));
    }
    let base = medians[0].1;
    let within = medians.iter().all(|&(_, r)| r <= 2.0 * base && r >= base / 2.0);
    let shown = medians.iter().map(|(n, r)| format!("n={n}: {r:.3}")).join(", ");
    outcome(
        within && violations == 0,
        format!("median |F|/n {shown}; {checked} induced subgraphs, {violations} over 3v-6"),
    )
}

fn criterion_9() -> Outcome {
    let (mut rect_runs, mut pd_runs, mut failures) = (0, 0, Vec::new());
    for t in [2, 3] {
        for n in [50usize, 100, 200, 400] {
            for s in 0..3u64 {
                let (a, b) = generate_pair(Kind::RandomRects, n, Kind::RandomRects, n, &GenParams::default(), 1100 + s).unwrap();
                let inst = pruned(&graph_of(a, b), t);
                rect_runs += 1;
                if let Err(e) = rectangle_bound_report(&as_rects(&inst.side_a), &as_rects(&inst.side_b), t) {
                    failures.push(format!("rects n={n} seed={s} t={t}: {e}"));
                }
            }
        }
        for s in 0..10u64 {
            let params = disc_params(0.05, 0.25);
            let (a, b) = generate_pair(Kind::RandomPoints, 100, Kind::RandomDiscs, 60, &params, 1200 + s).unwrap();
            let inst = pruned(&graph_of(a, b), t);
            pd_runs += 1;
            match counting_inequality_check(&as_points(&inst.side_a), &as_discs(&inst.side_b), t) {
                Ok(r) if r.max_multiplicity < t => {}
                Ok(r) => failures.push(format!("points seed={s} t={t}: tuple in {} discs", r.max_multiplicity)),
                Err(e) => failures.push(format!("points seed={s} t={t}: {e}")),
            }
        }
    }
    let first = failures.first().cloned().unwrap_or_default();
    outcome(
        failures.is_empty(),
        format!("{rect_runs} rectangle and {pd_runs} point-disc instances, {} violations {first}", failures.len()),
    )
}

fn criterion_10() -> Outcome {
    let mut worst = 0;
    for s in 0..100u64 {
        let params = disc_params(0.05, 0.35);
        let a = generate(Kind::RandomDiscs, 10, &params, 1300 + s).unwrap();
        let b = generate(Kind::RandomDiscs, 300, &params, 2300 + s).unwrap();
        let h = primal_hypergraph(&graph_of(a, b).graph);
        worst = worst.max(vc_dimension(&h, 6).vc_dim);
    }
    outcome(worst <= 4, format!("largest VC-dimension over 100 instances: {worst}"))
}

fn bisect_exit(d: &Disc, anchor: Point, p: Point) -> f64 {
    let gap = |s: f64| {
        let e = shrunk_disc(d, anchor, s);
        e.center.dist(p) - e.radius
    };
    let steps = 4096;
    let Some(first) = (0..=steps).map(|i| i as f64 / steps as f64).find(|&s| gap(s) >= 0.0) else { return 1.0 };
    if first == 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (first - 1.0 / steps as f64, first);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) >= 0.0 { hi = mid } else { lo = mid }
    }
    0.5 * (lo + hi)
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let d = Disc::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.05..2.0));
        let mut inside = || {
            let (ang, r) = (rng.gen_range(0.0..std::f64::consts::TAU), d.radius * rng.gen::<f64>().sqrt());
            Point::new(d.center.x + r * ang.cos(), d.center.y + r * ang.sin())
        };
        let (anchor, p) = (inside(), inside());
        let fast = exit_parameter(&d, anchor, p);
        let slow = bisect_exit(&d, anchor, p);
        worst = worst.max((fast - slow).abs() / slow.abs().max(f64::MIN_POSITIVE));
    }
    let (mut discs_checked, mut uncovered) = (0, 0);
    for s in 0..20u64 {
        let params = disc_params(0.05, 0.25);
        let (a, b) = generate_pair(Kind::RandomPoints, 80, Kind::RandomDiscs, 40, &params, 1400 + s).unwrap();
        let (pts, discs) = (as_points(&a), as_discs(&b));
        for t in [2, 3] {
            let fam = shrink_canonical_tuples(&pts, &discs, t);
            for d in &discs {
                let held: Vec<usize> = (0..pts.len()).filter(|&i| d.contains(pts[i])).collect();
                if held.len() < t {
                    continue;
                }
                discs_checked += 1;
                let inside: Vec<&Vec<usize>> =
                    fam.tuples.keys().filter(|tp| tp.iter().all(|v| held.contains(v))).collect();
                uncovered += held.iter().filter(|v| !inside.iter().any(|tp| tp.contains(v))).count();
            }
        }
    }
    outcome(
        worst <= 1e-9 && uncovered == 0,
        format!("1000 exit parameters, worst relative error {worst:.2e}; {discs_checked} discs, {uncovered} points outside every canonical tuple"),
    )
}

fn criterion_12() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_ztnet"))
            .args(["suite", "--seed", "7", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        (status.success(), std::fs::read(out.join("suite.csv")).unwrap(), std::fs::read(out.join("suite.json")).unwrap())
    };
    let (ok1, csv1, json1) = run("first");
    let (ok2, csv2, json2) = run("second");
    let same = csv1 == csv2 && json1 == json2;
    outcome(ok1 && ok2 && same, format!("two runs: exit ok {ok1}/{ok2}, csv {} bytes, json {} bytes, identical {same}", csv1.len(), json1.len()))
}

fn main() {
    let started = Instant::now();
    let shared = soundness_instances();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("net soundness", Box::new(|| criterion_1(&shared))),
        ("cover depth", Box::new(|| criterion_2(&shared))),
        ("oracle equivalence", Box::new(criterion_3)),
        ("heavy-count inequality", Box::new(criterion_4)),
        ("recursive bound soundness", Box::new(criterion_5)),
        ("linear edge growth", Box::new(criterion_6)),
        ("rectangle census partition", Box::new(criterion_7)),
        ("canonical tuples and planarity", Box::new(criterion_8)),
        ("counting chains", Box::new(criterion_9)),
        ("VC-dimension cap", Box::new(criterion_10)),
        ("shrink correctness", Box::new(criterion_11)),
        ("reproducibility", Box::new(criterion_12)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {:>2} {name}: {} ({:.1}s)", i + 1, o.detail, t0.elapsed().as_secs_f64());
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
