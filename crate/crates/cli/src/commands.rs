use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use ztnet::generators::{generate_pair, prune_to_ktt_free_with_budget, random_hsegments, GenParams, Kind, RadiusDist};
use ztnet::hypergraph::{dual_hypergraph, primal_hypergraph};
use ztnet::nets::{greedy_cover_t_net, pseudodisc_t_net, verify_t_net};
use ztnet::pseudodiscs::{counting_inequality_check, shrink_canonical_tuples};
use ztnet::rectangles::{
    canonical_segment_tuples, corner_claim_check, crossing_graph, hereditary_planarity_check, intersection_type_census,
    rectangle_bound_report, segment_delaunay,
};
use ztnet::zarankiewicz::{
    heavy_count_check, is_ktt_free_with_budget, num_edges_bound, BoundConfig, EpsRule, NetStrategy, Side,
    DEFAULT_BUDGET,
};
use ztnet::{BipartiteIntersectionGraph, GeomObject, Segment, TNet, Verdict};

use crate::error::CliError;
use crate::instance::{discs, parse_instance, points, rects, write_instance, Instance};
use crate::report::{bound_csv, csv_with_meta, json_with_meta, Meta};
use crate::suite::{run_suite, suite_csv, suite_json};

#[derive(Debug, Parser)]
#[command(name = "ztnet", version, about = "Epsilon-t-nets and edge bounds for K_{t,t}-free geometric intersection graphs")]
pub struct Cli {
    /// Largest number of t-subsets a biclique search may enumerate.
    #[arg(long, global = true, env = "ZTNET_BUDGET", default_value_t = DEFAULT_BUDGET as u64)]
    pub budget: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded random instance as JSON.
    Generate(GenerateArgs),
    /// Report whether the intersection graph contains K_{t,t}.
    CheckFree(CheckFreeArgs),
    /// Build an epsilon-t-net of one side's neighborhoods and verify it.
    Net(NetArgs),
    /// Recursive edge-count bound, one row per level.
    Bound(BoundArgs),
    /// Four-type census of rectangle-rectangle intersections.
    Census(ReportArgs),
    /// Canonical tuples: stab sets of A's horizontal edges, or shrink sets for points and discs.
    Canon(CanonArgs),
    /// Counting chain for points against discs.
    Shrink(CanonArgs),
    /// Delaunay graph of horizontal segments, as SVG or JSON.
    Delaunay(DelaunayArgs),
    /// Deterministic batch of generated instances and checks.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Auto,
    Pseudodisc,
    Greedy,
}

impl From<Strategy> for NetStrategy {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::Auto => NetStrategy::Auto,
            Strategy::Pseudodisc => NetStrategy::PseudoDisc,
            Strategy::Greedy => NetStrategy::GreedyCover,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    A,
    B,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value = "random_discs")]
    pub kind: Kind,
    /// Kind of the B side (defaults to --kind).
    #[arg(long)]
    pub kind_b: Option<Kind>,
    /// Objects on the A side.
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Objects on the B side (defaults to --n).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Draw radii log-uniformly.
    #[arg(long)]
    pub log_radius: bool,
    /// Delete vertices until the intersection graph is K_{t,t}-free.
    #[arg(long)]
    pub prune_t: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckFreeArgs {
    pub instance: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
}

#[derive(Debug, Args)]
pub struct NetArgs {
    pub instance: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    #[arg(long)]
    pub eps: f64,
    /// B: hyperedges are neighborhoods of B vertices over A; A: the reverse.
    #[arg(long, value_enum, default_value = "b")]
    pub side: SideArg,
    #[arg(long, value_enum, default_value = "pseudodisc")]
    pub strategy: Strategy,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    pub instance: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    /// Fixed eps at every level (otherwise a degree cutoff 2 c t^6 is used).
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub eps_prime: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub c_hat: f64,
    #[arg(long, value_enum, default_value = "auto")]
    pub strategy: Strategy,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    pub instance: PathBuf,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct CanonArgs {
    pub instance: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct DelaunayArgs {
    /// Rectangle instance whose A-side horizontal edges are used; random
    /// segments when absent.
    pub instance: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random induced subgraphs checked against the Euler bound.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Directory for suite.csv and suite.json; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

fn build_graph(inst: &Instance) -> BipartiteIntersectionGraph {
    BipartiteIntersectionGraph::build(inst.a.clone(), inst.b.clone())
}

fn render<T: Serialize>(meta: &Meta, report: &T, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(json_with_meta(meta, report)),
        Format::Csv => csv_with_meta(meta, std::slice::from_ref(report)),
        Format::Svg => Err(CliError::Usage("svg output is only available for `delaunay`".into())),
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let budget = cli.budget as u128;
    match &cli.command {
        Command::Generate(args) => generate_cmd(args, budget),
        Command::CheckFree(args) => {
            let inst = parse_instance(&args.instance)?;
            match is_ktt_free_with_budget(&build_graph(&inst).graph, args.t, budget)? {
                None => {
                    println!("free");
                    Ok(())
                }
                Some(w) => {
                    println!("contains K_{{{0},{0}}}: a={1:?} b={2:?}", args.t, w.a, w.b);
                    Err(CliError::Verification(format!("instance contains K_{{{0},{0}}}", args.t)))
                }
            }
        }
        Command::Net(args) => net_cmd(args),
        Command::Bound(args) => bound_cmd(args, budget),
        Command::Census(args) => census_cmd(args),
        Command::Canon(args) => canon_cmd(args),
        Command::Shrink(args) => shrink_cmd(args),
        Command::Delaunay(args) => delaunay_cmd(args),
        Command::Suite(args) => suite_cmd(args, budget),
    }
}

fn generate_cmd(args: &GenerateArgs, budget: u128) -> Result<(), CliError> {
    let mut params = GenParams::default();
    if let Some(lo) = args.r_min {
        params.radius.0 = lo;
    }
    if let Some(hi) = args.r_max {
        params.radius.1 = hi;
    }
    if args.log_radius {
        params.radius_dist = RadiusDist::LogUniform;
    }
    let kind_b = args.kind_b.unwrap_or(args.kind);
    let (a, b) = generate_pair(args.kind, args.n, kind_b, args.m.unwrap_or(args.n), &params, args.seed)?;
    let mut inst = Instance { a, b };
    if let Some(t) = args.prune_t {
        let g = build_graph(&inst);
        let pruned = prune_to_ktt_free_with_budget(&g.graph, t, budget)?;
        eprintln!("pruned {} vertices ({} from a, {} from b)", pruned.removed_count(), pruned.removed_a.len(), pruned.removed_b.len());
        let kept = g.restrict(&pruned.kept_a, &pruned.kept_b);
        inst = Instance { a: kept.side_a, b: kept.side_b };
    }
    match &args.out {
        Some(path) => write_instance(path, &inst),
        None => emit(None, &crate::instance::instance_to_json(&inst)),
    }
}

#[derive(Serialize)]
struct NetOutput {
    t: usize,
    eps: f64,
    size: usize,
    valid: bool,
    tuples: Vec<Vec<usize>>,
}

fn net_cmd(args: &NetArgs) -> Result<(), CliError> {
    let inst = parse_instance(&args.instance)?;
    let g = build_graph(&inst).graph;
    let h = match args.side {
        SideArg::B => primal_hypergraph(&g),
        SideArg::A => dual_hypergraph(&g),
    };
    let net: TNet = match args.strategy {
        Strategy::Greedy => greedy_cover_t_net(&h, args.eps, args.t)?,
        Strategy::Pseudodisc => pseudodisc_t_net(&h, args.eps, args.t, args.seed)?.0,
        Strategy::Auto => match pseudodisc_t_net(&h, args.eps, args.t, args.seed) {
            Ok((net, _)) if verify_t_net(&h, args.eps, &net)?.is_valid() => net,
            Ok(_) | Err(ztnet::Error::PreconditionViolated(_)) => greedy_cover_t_net(&h, args.eps, args.t)?,
            Err(e) => return Err(e.into()),
        },
    };
    let verdict = verify_t_net(&h, args.eps, &net)?;
    let out = NetOutput {
        t: args.t,
        eps: args.eps,
        size: net.len(),
        valid: verdict.is_valid(),
        tuples: net.tuples.iter().cloned().collect(),
    };
    let meta = Meta::new("net", args.seed)
        .with("t", args.t)
        .with("eps", args.eps)
        .with("side", format!("{:?}", args.side))
        .with("strategy", format!("{:?}", args.strategy));
    let text = match args.output.format {
        Some(Format::Json) => json_with_meta(&meta, &out),
        Some(Format::Csv) => {
            let rows: Vec<String> = out.tuples.iter().map(|t| t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")).collect();
            let rows: Vec<(usize, String)> = rows.into_iter().enumerate().collect();
            csv_with_meta(&meta, &rows)?
        }
        Some(Format::Svg) => return Err(CliError::Usage("svg output is only available for `delaunay`".into())),
        None => format!("tuples: {}\nvalid: {}\n", out.size, out.valid),
    };
    emit(args.output.out.as_deref(), &text)?;
    match verdict {
        Verdict::Valid => {
            if args.side == SideArg::B && g.m() > 0 {
                let side = Side::B;
                let check = heavy_count_check(&g, args.t, &net, side)?;
                eprintln!("heavy neighborhoods: {} (bound (t-1)|N| = {})", check.heavy_count, check.bound);
            }
            Ok(())
        }
        Verdict::Missed(e) => Err(CliError::Verification(format!("hyperedge {e:?} contains no net tuple"))),
    }
}

fn bound_cmd(args: &BoundArgs, budget: u128) -> Result<(), CliError> {
    let inst = parse_instance(&args.instance)?;
    let g = build_graph(&inst).graph;
    let eps_rule = match (args.eps, args.eps_prime) {
        (None, None) => EpsRule::HeavyDegree { c_hat: args.c_hat },
        (Some(e), p) => EpsRule::Fixed { eps: e, eps_prime: p.unwrap_or(e) },
        (None, Some(p)) => EpsRule::Fixed { eps: p, eps_prime: p },
    };
    let cfg = BoundConfig { t: args.t, net: args.strategy.into(), eps_rule, seed: args.seed };
    let free = is_ktt_free_with_budget(&g, args.t, budget)?.is_none();
    if !free {
        eprintln!("warning: the graph contains K_{{{0},{0}}}; heavy-count checks need not hold", args.t);
    }
    let report = num_edges_bound(&g, &cfg)?;
    let meta = Meta::new("bound", args.seed)
        .with("t", args.t)
        .with("eps_rule", format!("{eps_rule:?}"))
        .with("strategy", format!("{:?}", args.strategy))
        .with("instance", args.instance.display());
    let text = match args.output.format.unwrap_or(Format::Csv) {
        Format::Csv => bound_csv(&meta, &report)?,
        Format::Json => json_with_meta(&meta, &report),
        Format::Svg => return Err(CliError::Usage("svg output is only available for `delaunay`".into())),
    };
    emit(args.output.out.as_deref(), &text)?;
    eprintln!("bound {} >= edges {}", report.bound, report.actual_edges);
    if !report.is_sound() {
        return Err(CliError::Verification(format!("bound {} below edge count {}", report.bound, report.actual_edges)));
    }
    if free && !report.heavy_checks_pass() {
        return Err(CliError::Verification("a level violates |heavy| <= (t-1)|net|".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct CensusOutput {
    type1: usize,
    type2: usize,
    type3: usize,
    type4: usize,
    intersecting: usize,
    crossing_edges: usize,
}

fn census_cmd(args: &ReportArgs) -> Result<(), CliError> {
    let inst = parse_instance(&args.instance)?;
    let (a, b) = (rects("a", &inst.a)?, rects("b", &inst.b)?);
    let c = intersection_type_census(&a, &b)?;
    let out = CensusOutput {
        type1: c.type1,
        type2: c.type2,
        type3: c.type3,
        type4: c.type4,
        intersecting: c.intersecting,
        crossing_edges: crossing_graph(&a, &b).graph.edge_count(),
    };
    let meta = Meta::new("census", 0).with("instance", args.instance.display());
    emit(args.output.out.as_deref(), &render(&meta, &out, args.output.format.unwrap_or(Format::Json))?)?;
    if c.classified() != c.intersecting {
        return Err(CliError::Verification("type counts do not sum to the intersecting pairs".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct TupleRow {
    tuple: String,
    witness: String,
}

fn canon_cmd(args: &CanonArgs) -> Result<(), CliError> {
    let inst = parse_instance(&args.instance)?;
    let meta = Meta::new("canon", 0).with("t", args.t).with("instance", args.instance.display());
    let join = |t: &[usize]| t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
    let rows: Vec<TupleRow> = match inst.a.first() {
        Some(GeomObject::Point(_)) | None if inst.b.iter().all(|o| matches!(o, GeomObject::Disc(_))) => {
            let fam = shrink_canonical_tuples(&points("a", &inst.a)?, &discs("b", &inst.b)?, args.t);
            fam.tuples.iter().map(|(t, w)| TupleRow { tuple: join(t), witness: format!("disc {} anchor {}", w.disc, w.anchor) }).collect()
        }
        _ => {
            let (a, b) = (rects("a", &inst.a)?, rects("b", &inst.b)?);
            let horizontals: Vec<Segment> = a.iter().flat_map(|r| r.horizontal_edges()).collect();
            let fam = canonical_segment_tuples(&horizontals, 2 * args.t - 1);
            let report = rectangle_bound_report(&a, &b, args.t)?;
            let claim = corner_claim_check(&a, &b, args.t)?;
            eprintln!(
                "|F| = {}, sum d = {}, sum x = {} <= (2t-2)|F| = {}; corner claim {}",
                report.canonical_tuples,
                report.sum_d,
                report.sum_x,
                report.upper,
                if claim.holds() { "holds" } else { "FAILS" }
            );
            if !claim.holds() {
                return Err(CliError::Verification("corner graph contains K_{4t-3,4t-3}".into()));
            }
            fam.tuples
                .iter()
                .map(|(t, w)| TupleRow { tuple: join(t), witness: format!("x={} y=[{}, {}]", w.fixed, w.lo, w.hi) })
                .collect()
        }
    };
    emit(args.output.out.as_deref(), &match args.output.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_with_meta(&meta, &rows)?,
        Format::Json => json_with_meta(&meta, &rows),
        Format::Svg => return Err(CliError::Usage("svg output is only available for `delaunay`".into())),
    })
}

fn shrink_cmd(args: &CanonArgs) -> Result<(), CliError> {
    let inst = parse_instance(&args.instance)?;
    let report = counting_inequality_check(&points("a", &inst.a)?, &discs("b", &inst.b)?, args.t)?;
    let meta = Meta::new("shrink", 0).with("t", args.t).with("instance", args.instance.display());
    emit(args.output.out.as_deref(), &render(&meta, &report, args.output.format.unwrap_or(Format::Json))?)?;
    if !report.coverage {
        return Err(CliError::Verification("a point of a heavy disc lies in no canonical tuple".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct DelaunayOutput {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    checked: usize,
    violations: usize,
    worst_ratio: f64,
}

fn delaunay_cmd(args: &DelaunayArgs) -> Result<(), CliError> {
    let hsegs: Vec<Segment> = match &args.instance {
        Some(path) => rects("a", &parse_instance(path)?.a)?.iter().flat_map(|r| r.horizontal_edges()).collect(),
        None => random_hsegments(args.n, &GenParams::default(), args.seed)?,
    };
    let del = segment_delaunay(&hsegs);
    let planar = hereditary_planarity_check(&del.graph, args.samples, args.seed);
    let text = match args.output.format.unwrap_or(Format::Svg) {
        Format::Svg => del.to_svg(&hsegs),
        format => {
            let out = DelaunayOutput {
                vertices: hsegs.len(),
                edges: del.graph.edges.iter().copied().collect(),
                checked: planar.checked,
                violations: planar.violations,
                worst_ratio: planar.worst_ratio,
            };
            let meta = Meta::new("delaunay", args.seed).with("n", hsegs.len()).with("samples", args.samples);
            match format {
                Format::Json => json_with_meta(&meta, &out),
                _ => csv_with_meta(&meta, &del.graph.edges.iter().copied().collect::<Vec<_>>())?,
            }
        }
    };
    emit(args.output.out.as_deref(), &text)?;
    eprintln!(
        "{} segments, {} edges; {} induced subgraphs checked, {} over 3v-6",
        hsegs.len(),
        del.graph.edge_count(),
        planar.checked,
        planar.violations
    );
    if !planar.pass() {
        return Err(CliError::Verification("Delaunay graph breaks the Euler bound".into()));
    }
    Ok(())
}

fn suite_cmd(args: &SuiteArgs, budget: u128) -> Result<(), CliError> {
    let rows = run_suite(args.seed, budget)?;
    let csv = suite_csv(args.seed, &rows)?;
    let json = suite_json(args.seed, &rows);
    match &args.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
            emit(Some(&dir.join("suite.csv")), &csv)?;
            emit(Some(&dir.join("suite.json")), &json)?;
        }
        None => emit(None, if args.format == Some(Format::Json) { &json } else { &csv })?,
    }
    let failed: Vec<String> = rows.iter().filter(|r| !r.pass).map(|r| format!("{} n={} seed={}", r.family, r.n, r.seed)).collect();
    if failed.is_empty() {
        eprintln!("suite: {} instances passed", rows.len());
        Ok(())
    } else {
        Err(CliError::Verification(format!("suite failures: {}", failed.join("; "))))
    }
}
