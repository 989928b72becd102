use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use twotree::atlas::{quotient_chain, CircuitAtlas};
use twotree::diagnostics::{find_obstacles, refute, DoubleTree};
use twotree::generators;
use twotree::hardness::{self, BetweennessInstance, CoverInstance};
use twotree::io::{DigraphDoc, GraphDoc, OrderingDoc};
use twotree::sparsity::{is_2t, TwoTreeVerdict};
use twotree::synthesis::{
    circuit_good_ordering, double_tree_good_ordering, matching_good_ordering, spanning_circuit_good_ordering,
    DoubleTreeOutcome, GoodOrderingResult, ResultDoc, RootSpec,
};
use twotree::verify::{self, check_ordering, verify_pair, OrderingVerdict};
use twotree::{orient_by_ordering, BranchKind, Error, MultiGraph};

const NEGATIVE: u8 = 3;
const INVALID: u8 = 2;
const PRECONDITION: u8 = 4;

#[derive(Parser)]
#[command(name = "twotree", version, about = "Good orderings of 2T-graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// 2T verdict, circuit atlas or refutation of a graph
    Analyze {
        /// Graph document, or "-" for stdin
        input: String,
        #[arg(long, conflicts_with = "refute")]
        atlas: bool,
        #[arg(long)]
        refute: bool,
    },
    /// Build a certified good ordering
    Synthesize {
        input: String,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        edge: Option<usize>,
        #[arg(long, value_enum, default_value = "out")]
        side: Side,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: Strategy,
        /// Write the oriented graph in DOT format here
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check an ordering (and branchings, when given) against a graph
    Verify {
        input: String,
        #[arg(long)]
        ordering: String,
    },
    /// Generate an instance
    Gen {
        #[arg(value_enum)]
        kind: Kind,
        /// Size parameter of the kind (vertices, circuits or pieces)
        size: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of links of a conflict gadget
        #[arg(long)]
        p: Option<usize>,
        /// Allow K4 circuits in random double trees
        #[arg(long)]
        k4: bool,
    },
    /// Build a hardness gadget from an instance
    Reduce {
        #[arg(value_enum)]
        kind: Reduction,
        input: String,
        /// Add the arc t -> s to a betweenness gadget
        #[arg(long)]
        strong: bool,
    },
    /// Exhaustive solvers for small instances
    Oracle {
        #[arg(value_enum)]
        kind: OracleKind,
        input: String,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Out,
    In,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Circuit,
    Matching,
    Doubletree,
    Spanning,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Digon,
    K4,
    Wheel,
    Henneberg,
    TwoSum,
    DigonPath,
    DoubleTree,
    ObstacleStar,
    Conflict,
    Matching,
    MatchingChain,
    Octahedron,
    SquaredCycle,
    TwoTree,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reduction {
    X3c,
    X4c,
    Betweenness,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Good,
    St,
    Cover,
    Betweenness,
    Partition,
}

/// Outcome of a command: a JSON document and an exit code.
struct Reply {
    doc: Value,
    code: u8,
}

impl Reply {
    fn ok(doc: impl Serialize) -> anyhow::Result<Reply> {
        Ok(Reply { doc: serde_json::to_value(doc)?, code: 0 })
    }

    fn negative(doc: impl Serialize) -> anyhow::Result<Reply> {
        Ok(Reply { doc: serde_json::to_value(doc)?, code: NEGATIVE })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(reply) => {
            let text = serde_json::to_string_pretty(&reply.doc).expect("values serialize");
            // a closed pipe downstream is not our failure
            let _ = writeln!(io::stdout(), "{text}");
            ExitCode::from(reply.code)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Precondition(_) | Error::NotApplicable(_) | Error::WrongShape(_) | Error::BoundExceeded { .. }) => {
            PRECONDITION
        }
        Some(Error::InvariantViolation(_)) => 1,
        _ => INVALID,
    }
}

fn read_input(input: &str) -> anyhow::Result<String> {
    if input == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).context("reading stdin")?;
        Ok(text)
    } else {
        fs::read_to_string(input).with_context(|| format!("reading {input}"))
    }
}

fn load<T: DeserializeOwned>(input: &str) -> anyhow::Result<T> {
    let text = read_input(input)?;
    serde_json::from_str(&text).with_context(|| format!("parsing {input}"))
}

fn load_graph(input: &str) -> anyhow::Result<MultiGraph> {
    Ok(load::<GraphDoc>(input)?.to_graph()?)
}

fn run(cmd: Command) -> anyhow::Result<Reply> {
    match cmd {
        Command::Analyze { input, atlas, refute } => {
            let g = load_graph(&input)?;
            if atlas {
                analyze_atlas(&g)
            } else if refute {
                analyze_refute(&g)
            } else {
                analyze(&g)
            }
        }
        Command::Synthesize { input, s, t, edge, side, strategy, dot } => {
            let g = load_graph(&input)?;
            let side = match side {
                Side::Out => BranchKind::Out,
                Side::In => BranchKind::In,
            };
            let reply = synthesize(&g, s, t, edge, side, strategy)?;
            if let (Some(path), Ok(doc)) = (dot, serde_json::from_value::<ResultDoc>(reply.doc.clone())) {
                if reply.code == 0 {
                    write_dot(&g, &GoodOrderingResult::from_doc(&doc, g.vertex_count())?, &path)?;
                }
            }
            Ok(reply)
        }
        Command::Verify { input, ordering } => {
            let g = load_graph(&input)?;
            verify_command(&g, &ordering)
        }
        Command::Gen { kind, size, seed, p, k4 } => Reply::ok(GraphDoc::canonical(&generate(kind, size, seed, p, k4)?)),
        Command::Reduce { kind, input, strong } => reduce(kind, &input, strong),
        Command::Oracle { kind, input, s, t } => oracle(kind, &input, s, t),
    }
}

fn analyze(g: &MultiGraph) -> anyhow::Result<Reply> {
    let verdict = is_2t(g)?;
    let doc = match &verdict {
        TwoTreeVerdict::Certificate(c) => json!({ "is_2T": true, "certificate": c, "violator": null }),
        other => json!({ "is_2T": false, "certificate": null, "violator": other }),
    };
    if verdict.is_2t() { Reply::ok(doc) } else { Reply::negative(doc) }
}

fn analyze_atlas(g: &MultiGraph) -> anyhow::Result<Reply> {
    let atlas = match CircuitAtlas::build(g) {
        Ok(a) => a,
        Err(Error::NotTwoTree(r)) => return Reply::negative(json!({ "refutation": r })),
        Err(e) => return Err(e.into()),
    };
    let chain: Vec<GraphDoc> = quotient_chain(g)?.iter().map(GraphDoc::from_graph).collect();
    Reply::ok(json!({
        "circuits": atlas.circuits,
        "components": atlas.components,
        "component_of": atlas.component_of,
        "quotient": GraphDoc::from_graph(&atlas.quotient),
        "decomposition": chain,
    }))
}

fn analyze_refute(g: &MultiGraph) -> anyhow::Result<Reply> {
    let refutation = refute(g)?;
    let mut obstacles = Vec::new();
    if let Ok(atlas) = CircuitAtlas::build(g) {
        if DoubleTree::of(&atlas).is_some() {
            obstacles = find_obstacles(g, &atlas)?;
        }
    }
    let doc = json!({ "refutation": refutation, "obstacles": obstacles });
    if refutation.is_some() { Reply::negative(doc) } else { Reply::ok(doc) }
}

fn synthesize(
    g: &MultiGraph,
    s: Option<usize>,
    t: Option<usize>,
    edge: Option<usize>,
    side: BranchKind,
    strategy: Strategy,
) -> anyhow::Result<Reply> {
    let rooted = s.is_some() || t.is_some() || edge.is_some();
    if strategy == Strategy::Circuit || (strategy == Strategy::Auto && rooted) {
        let spec = root_spec(g, s, t, edge, side)?;
        return Reply::ok(circuit_good_ordering(g, spec)?.to_doc());
    }
    if rooted {
        return Err(anyhow!("--s, --t and --edge apply to the circuit strategy only"));
    }
    match strategy {
        Strategy::Matching => Reply::ok(matching_good_ordering(g)?.to_doc()),
        Strategy::Spanning => Reply::ok(spanning_circuit_good_ordering(g)?.to_doc()),
        Strategy::Doubletree => match double_tree_good_ordering(g)? {
            DoubleTreeOutcome::Good(r) => Reply::ok(r.to_doc()),
            DoubleTreeOutcome::Refuted(r) => Reply::negative(json!({ "refutation": r })),
        },
        _ => auto(g),
    }
}

fn root_spec(g: &MultiGraph, s: Option<usize>, t: Option<usize>, edge: Option<usize>, side: BranchKind) -> anyhow::Result<RootSpec> {
    let e = match edge {
        Some(id) => g.edge(id).ok_or(Error::UnknownEdge(id))?.clone(),
        None => g
            .edges()
            .iter()
            .find(|e| s.is_none_or(|s| e.touches(s)) || t.is_some_and(|t| e.touches(t)))
            .cloned()
            .ok_or_else(|| anyhow!("no edge meets the given roots"))?,
    };
    let (s, t) = match (s, t) {
        (Some(s), Some(t)) => (s, t),
        (Some(s), None) if e.touches(s) => (s, e.other(s)),
        (None, Some(t)) if e.touches(t) => (e.other(t), t),
        (None, None) => (e.u, e.v),
        _ => return Err(anyhow!("give both --s and --t when the edge does not determine the other root")),
    };
    let spec = RootSpec { s, t, e: e.id, side };
    spec.check(g)?;
    Ok(spec)
}

/// Tries the constructions in turn, then a refutation, then exhaustive
/// search on small graphs.
fn auto(g: &MultiGraph) -> anyhow::Result<Reply> {
    let attempts: [&dyn Fn() -> twotree::Result<Option<GoodOrderingResult>>; 4] = [
        &|| {
            let e = &g.edges()[0];
            let spec = RootSpec { s: e.u, t: e.v, e: e.id, side: BranchKind::Out };
            circuit_good_ordering(g, spec).map(Some)
        },
        &|| matching_good_ordering(g).map(Some),
        &|| double_tree_good_ordering(g).map(|o| o.result().cloned()),
        &|| spanning_circuit_good_ordering(g).map(Some),
    ];
    for attempt in attempts {
        match attempt() {
            Ok(Some(r)) => return Reply::ok(r.to_doc()),
            Ok(None) => {}
            Err(Error::Precondition(_) | Error::NotApplicable(_) | Error::WrongShape(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    if let Some(r) = refute(g)? {
        return Reply::negative(json!({ "refutation": r }));
    }
    if g.vertex_count() <= verify::DEFAULT_GOOD_BOUND {
        return match verify::brute_force_good_ordering(g, verify::DEFAULT_GOOD_BOUND)? {
            Some((ordering, pair)) => Reply::ok(GoodOrderingResult { ordering, pair }.to_doc()),
            None => Reply::negative(json!({ "refutation": { "kind": "brute-force", "vertices": g.vertex_count() } })),
        };
    }
    Err(Error::NotApplicable("no construction applies to this graph".into()).into())
}

fn write_dot(g: &MultiGraph, res: &GoodOrderingResult, path: &Path) -> anyhow::Result<()> {
    let d = orient_by_ordering(g, &res.ordering)?;
    let mut out = String::from("digraph G {\n");
    for (i, v) in res.ordering.as_slice().iter().enumerate() {
        out.push_str(&format!("  {v} [label=\"{v} ({i})\"];\n"));
    }
    for a in d.arcs() {
        let style = if res.pair.out.arcs.contains(&a.id) {
            "dashed"
        } else if res.pair.inn.arcs.contains(&a.id) {
            "solid"
        } else {
            "dotted"
        };
        out.push_str(&format!("  {} -> {} [style={style}];\n", a.tail, a.head));
    }
    out.push_str("}\n");
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

fn verify_command(g: &MultiGraph, ordering: &str) -> anyhow::Result<Reply> {
    let text = read_input(ordering)?;
    let doc: OrderingDoc = serde_json::from_str(&text).with_context(|| format!("parsing {ordering}"))?;
    let ord = doc.to_ordering(g.vertex_count())?;
    // a full result document carries branchings to check as well
    if let Ok(full) = serde_json::from_str::<ResultDoc>(&text) {
        let res = GoodOrderingResult::from_doc(&full, g.vertex_count())?;
        return match verify_pair(g, &ord, &res.pair) {
            Ok(()) => Reply::ok(json!({ "verdict": "good", "certificate": full })),
            Err(why) => Reply::negative(json!({ "verdict": "bad", "reason": why })),
        };
    }
    match check_ordering(g, &ord)? {
        OrderingVerdict::Good(pair) => Reply::ok(json!({
            "verdict": "good",
            "certificate": GoodOrderingResult { ordering: ord, pair }.to_doc(),
        })),
        bad => Reply::negative(bad),
    }
}

fn generate(kind: Kind, size: Option<usize>, seed: u64, p: Option<usize>, k4: bool) -> anyhow::Result<MultiGraph> {
    let need = |what: &str| size.ok_or_else(|| anyhow!("{what} needs a size argument"));
    Ok(match kind {
        Kind::Digon => generators::digon(),
        Kind::K4 => generators::k4(),
        Kind::Octahedron => generators::octahedron(),
        Kind::ObstacleStar => generators::obstacle_star()?,
        Kind::Wheel => generators::wheel(need("wheel")?)?,
        Kind::Henneberg => generators::henneberg_circuit(need("henneberg")?, seed)?,
        Kind::TwoSum => generators::two_sum_chain(need("two-sum")?, seed)?,
        Kind::DigonPath => generators::digon_path(need("digon-path")?)?,
        Kind::DoubleTree => generators::random_double_tree(need("double-tree")?, k4, seed)?,
        Kind::Conflict => generators::conflict_gadget(p.or(size).ok_or_else(|| anyhow!("conflict needs --p"))?)?,
        Kind::Matching => generators::matching_composition(need("matching")?, seed)?,
        Kind::MatchingChain => generators::matching_chain(need("matching-chain")?)?,
        Kind::SquaredCycle => generators::squared_cycle(need("squared-cycle")?)?,
        Kind::TwoTree => generators::random_two_tree(need("two-tree")?, seed)?,
    })
}

fn reduce(kind: Reduction, input: &str, strong: bool) -> anyhow::Result<Reply> {
    match kind {
        Reduction::X3c => Reply::ok(hardness::x3c_to_x4c(&load::<CoverInstance>(input)?)?),
        Reduction::X4c => Reply::ok(GraphDoc::from_graph(&hardness::x4c_to_circuit_partition_graph(&load(input)?)?)),
        Reduction::Betweenness => {
            let (mut d, s, t) = hardness::betweenness_to_st_digraph(&load::<BetweennessInstance>(input)?)?;
            if strong {
                d = hardness::strongify(&d, s, t)?;
            }
            Reply::ok(DigraphDoc::from_digraph(&d, Some(s), Some(t)))
        }
    }
}

fn oracle(kind: OracleKind, input: &str, s: Option<usize>, t: Option<usize>) -> anyhow::Result<Reply> {
    match kind {
        OracleKind::Good => {
            let g = load_graph(input)?;
            match verify::brute_force_good_ordering(&g, verify::DEFAULT_GOOD_BOUND)? {
                Some((ordering, pair)) => Reply::ok(GoodOrderingResult { ordering, pair }.to_doc()),
                None => Reply::negative(json!({ "good_ordering": null })),
            }
        }
        OracleKind::St => {
            let doc: DigraphDoc = load(input)?;
            let d = doc.to_digraph()?;
            let s = s.or(doc.s).ok_or_else(|| anyhow!("no source: pass --s or set \"s\""))?;
            let t = t.or(doc.t).ok_or_else(|| anyhow!("no sink: pass --t or set \"t\""))?;
            match verify::brute_force_st_ordering(&d, s, t, verify::DEFAULT_ST_BOUND)? {
                Some(ord) => Reply::ok(OrderingDoc::from_ordering(&ord)),
                None => Reply::negative(json!({ "order": null })),
            }
        }
        OracleKind::Cover => {
            let inst: CoverInstance = load(input)?;
            let yes = hardness::brute_force_cover(&inst)?;
            let doc = json!({ "cover": yes });
            if yes { Reply::ok(doc) } else { Reply::negative(doc) }
        }
        OracleKind::Betweenness => match hardness::brute_force_betweenness(&load(input)?)? {
            Some(order) => Reply::ok(json!({ "order": order })),
            None => Reply::negative(json!({ "order": null })),
        },
        OracleKind::Partition => {
            let g = load_graph(input)?;
            match hardness::brute_force_circuit_partition(&g, hardness::PARTITION_BOUND)? {
                Some(parts) => Reply::ok(json!({ "partition": parts })),
                None => Reply::negative(json!({ "partition": null })),
            }
        }
    }
}
