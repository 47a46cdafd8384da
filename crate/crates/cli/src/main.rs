use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use spread_lab::algebra::FieldConfig;
use spread_lab::graph::{
    closedness_violation, complete, cycle, generate_family, parse_graph, Family, Graph, GraphError,
    GraphFormat,
};
use spread_lab::newton::{closed_spread_via_newton, NewtonError, NewtonSpread};
use spread_lab::scalar::DEFAULT_PRIME;
use spread_lab::spread::{analytic_spread, handle_experiment, HandleRow, Policy, SpreadError, SpreadResult};
use spread_lab::suites::{run_suite, Corpus, Suite, SuiteRow};

const SCHEMA: &str = "spread-lab/1";

#[derive(Parser, Debug)]
#[command(name = "spread-lab", version, about = "Analytic spread of binomial edge ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Prime modulus for randomized evaluation.
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, global = true, default_value_t = 4)]
    trials: u32,
    /// Seeds the evaluation points, random families and verification corpora.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Evaluate at rational points and confirm symbolically where feasible.
    #[arg(long, global = true)]
    exact: bool,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the analytic spread of a graph.
    Spread {
        #[command(flatten)]
        graph: GraphSource,
        /// Recompute formula answers with the Jacobian engine and require agreement.
        #[arg(long, conflicts_with = "force_jacobian")]
        cross_check: bool,
        /// Skip the formulas and use the Jacobian engine for every component.
        #[arg(long)]
        force_jacobian: bool,
    },
    /// Run a verification suite over a seeded corpus.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Record how the spread changes when handles are attached.
    ExploreHandle {
        #[command(flatten)]
        graph: GraphSource,
        /// Handle endpoints as `i,j`; may be repeated.
        #[arg(long = "pairs", value_parser = parse_pair, num_args = 1.., required_unless_present = "all_pairs")]
        pairs: Vec<(usize, usize)>,
        /// Try every pair `i < j`.
        #[arg(long, conflicts_with = "pairs")]
        all_pairs: bool,
    },
    /// Newton polyhedron report for a closed graph.
    Newton {
        #[command(flatten)]
        graph: GraphSource,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Bounds,
    Additivity,
    Leaf,
    Monotonicity,
    Closed,
    Newton,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Bounds => vec![Suite::Bounds],
            SuiteArg::Additivity => vec![Suite::Additivity],
            SuiteArg::Leaf => vec![Suite::Leaf],
            SuiteArg::Monotonicity => vec![Suite::Monotonicity],
            SuiteArg::Closed => vec![Suite::Closed],
            SuiteArg::Newton => vec![Suite::Newton],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct GraphSource {
    /// Graph file in edge-list or JSON format; `-` reads standard input.
    input: Option<PathBuf>,
    #[arg(long = "path", value_name = "N")]
    path_n: Option<usize>,
    #[arg(long = "cycle", value_name = "N")]
    cycle_n: Option<usize>,
    #[arg(long = "complete", value_name = "N")]
    complete_n: Option<usize>,
    /// Random tree on N vertices drawn from `--seed`.
    #[arg(long = "tree", value_name = "N")]
    tree_n: Option<usize>,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `i,j`, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("not a vertex label: {t:?}"));
    Ok((num(a)?, num(b)?))
}

/// Failure with its exit code: 1 verification, 2 parse, 3 precondition.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }

    fn precondition(message: impl Into<String>) -> Failure {
        Failure { code: 3, message: message.into() }
    }
}

impl From<SpreadError> for Failure {
    fn from(e: SpreadError) -> Failure {
        let code = match e {
            SpreadError::CrossCheck { .. } => 1,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<NewtonError> for Failure {
    fn from(e: NewtonError) -> Failure {
        let code = if matches!(e, NewtonError::RouteDisagreement { .. }) { 1 } else { 3 };
        Failure { code, message: e.to_string() }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Failure {
        Failure::precondition(e.to_string())
    }
}

struct LoadedGraph {
    graph: Graph,
    /// SHA-256 of the input document, or of the canonical edge list for built-in families.
    digest: String,
}

fn load_graph(src: &GraphSource, seed: u64) -> Result<LoadedGraph, Failure> {
    let family = |g: Result<Graph, GraphError>| g.map_err(|e| Failure::parse(e.to_string()));
    let (graph, text) = if let Some(p) = &src.input {
        let text = if p.as_os_str() == "-" {
            std::io::read_to_string(std::io::stdin())
        } else {
            std::fs::read_to_string(p)
        }
        .map_err(|e| Failure::parse(format!("{}: {e}", p.display())))?;
        let g = parse_graph(&text, GraphFormat::sniff(&text))
            .map_err(|e| Failure::parse(format!("{}: {e}", p.display())))?;
        (g, text)
    } else {
        let g = if let Some(n) = src.path_n {
            family(generate_family(Family::Path(n)))?
        } else if let Some(n) = src.cycle_n {
            family(cycle(n))?
        } else if let Some(n) = src.complete_n {
            family(generate_family(Family::Complete(n)))?
        } else if let Some(n) = src.tree_n {
            family(generate_family(Family::RandomTree { n, seed }))?
        } else {
            unreachable!("clap requires one graph source")
        };
        let text = g.to_edge_list();
        (g, text)
    };
    Ok(LoadedGraph { graph, digest: hex::encode(Sha256::digest(text.as_bytes())) })
}

#[derive(Serialize)]
struct RunReport<T: Serialize> {
    schema: &'static str,
    command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    input_digest: Option<String>,
    seed: u64,
    engine: FieldConfig,
    result: T,
    timing_ms: u128,
}

struct Ctx {
    cfg: FieldConfig,
    seed: u64,
    format: OutputFormat,
    started: Instant,
}

impl Ctx {
    fn emit<T: Serialize>(&self, digest: Option<String>, result: T, text: impl FnOnce(&T) -> String) {
        match self.format {
            OutputFormat::Text => print!("{}", text(&result)),
            OutputFormat::Json => {
                let report = RunReport {
                    schema: SCHEMA,
                    command: std::env::args().skip(1).collect(),
                    input_digest: digest,
                    seed: self.seed,
                    engine: self.cfg,
                    result,
                    timing_ms: self.started.elapsed().as_millis(),
                };
                println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
            }
        }
    }
}

fn edges_text(edges: &[(usize, usize)]) -> String {
    edges.iter().map(|(i, j)| format!("{i}-{j}")).collect::<Vec<_>>().join(" ")
}

fn spread_text(r: &SpreadResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "l(J_G) = {}  (method: {})", r.value, method_name(&r.method));
    let _ = writeln!(out, "components:");
    for c in &r.components {
        let engine = c.engine_value.map(|v| format!(", engine {v}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "  #{} vertices {:?}, {} edges: {} via {}{engine}",
            c.index,
            c.vertices,
            c.edges,
            c.value,
            method_name(&c.method)
        );
    }
    let verdict = if r.bounds.all_satisfied { "all satisfied" } else { "VIOLATED" };
    let _ = writeln!(out, "bounds: {verdict}");
    for b in &r.bounds.components {
        let conn = b.lower_connectivity.map(|v| format!(" n+t-2={v}")).unwrap_or_default();
        let mindeg = b.upper_min_degree.map(|v| format!(" |E|-3={v}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "  #{}: lower n-1={}{conn}; upper 2n-3={} |E|={}{mindeg}; value {}",
            b.index, b.lower_general, b.upper_general, b.upper_mu, b.value
        );
        for v in &b.violations {
            let _ = writeln!(out, "    violation: {v}");
        }
    }
    if let Some(base) = &r.base_edges {
        let _ = writeln!(out, "transcendence base: {}", edges_text(base));
    }
    out
}

fn method_name<T: Serialize>(m: &T) -> String {
    serde_json::to_value(m).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

fn cmd_spread(ctx: &Ctx, src: &GraphSource, policy: Policy) -> Result<(), Failure> {
    let g = load_graph(src, ctx.seed)?;
    let r = analytic_spread(&g.graph, &ctx.cfg, policy)?;
    let ok = r.bounds.all_satisfied;
    ctx.emit(Some(g.digest), r, spread_text);
    if ok {
        Ok(())
    } else {
        Err(Failure { code: 1, message: "bound report has violations".into() })
    }
}

#[derive(Serialize)]
struct VerifyResult {
    corpus: Corpus,
    rows: Vec<SuiteRow>,
    passed: usize,
    failed: usize,
}

fn cmd_verify(ctx: &Ctx, suite: SuiteArg, n_max: usize, count: usize) -> Result<(), Failure> {
    let corpus = Corpus { n_max, count, seed: ctx.seed };
    let rows: Vec<SuiteRow> = suite.suites().into_iter().flat_map(|s| run_suite(s, &corpus, &ctx.cfg)).collect();
    let failed = rows.iter().filter(|r| !r.passed).count();
    let result = VerifyResult { corpus, passed: rows.len() - failed, failed, rows };
    ctx.emit(None, result, |r| {
        let mut out = String::new();
        for row in &r.rows {
            let verdict = if row.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{verdict} {} #{} {} {}",
                method_name(&row.suite),
                row.instance,
                row.graph,
                row.detail
            );
        }
        let _ = writeln!(out, "{} passed, {} failed", r.passed, r.failed);
        out
    });
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure { code: 1, message: format!("{failed} instance(s) failed") })
    }
}

#[derive(Serialize)]
struct HandleResult {
    graph: Graph,
    rows: Vec<HandleRow>,
    deltas_equal_to_two: usize,
}

fn cmd_explore_handle(ctx: &Ctx, src: &GraphSource, pairs: &[(usize, usize)], all: bool) -> Result<(), Failure> {
    let g = load_graph(src, ctx.seed)?;
    let pairs: Vec<(usize, usize)> = if all { complete(g.graph.n()).edge_vec() } else { pairs.to_vec() };
    let rows = handle_experiment(&g.graph, &pairs, &ctx.cfg)?;
    let twos = rows.iter().filter(|r| r.delta == 2).count();
    let result = HandleResult { graph: g.graph, rows, deltas_equal_to_two: twos };
    ctx.emit(Some(g.digest), result, |r| {
        let mut out = String::from("pair      before  after  delta  planar(before/after)\n");
        let planar = |p: Option<bool>| p.map_or("?".to_string(), |b| b.to_string());
        for row in &r.rows {
            let _ = writeln!(
                out,
                "{:<9} {:>6} {:>6} {:>+6}  {}/{}",
                format!("({},{})", row.pair.0, row.pair.1),
                row.before,
                row.after,
                row.delta,
                planar(row.planar_before),
                planar(row.planar_after)
            );
        }
        let _ = writeln!(out, "{} of {} deltas equal 2", r.deltas_equal_to_two, r.rows.len());
        out
    });
    Ok(())
}

#[derive(Serialize)]
struct NewtonResult {
    #[serde(flatten)]
    newton: NewtonSpread,
    analytic_spread: usize,
}

fn cmd_newton(ctx: &Ctx, src: &GraphSource) -> Result<(), Failure> {
    let g = load_graph(src, ctx.seed)?;
    if let Some((i, j, k)) = closedness_violation(&g.graph) {
        return Err(Failure::precondition(format!(
            "graph is not closed under its labeling: violating triple ({i}, {j}, {k})"
        )));
    }
    let newton = closed_spread_via_newton(&g.graph)?;
    let spread = analytic_spread(&g.graph, &ctx.cfg, Policy::ForceJacobian)?.value;
    let agree = newton.spread == spread;
    let result = NewtonResult { newton, analytic_spread: spread };
    ctx.emit(Some(g.digest), result, |r| {
        let n = r.newton.ideal.ambient_dim / 2;
        let mut out = String::from("generators (exponents of x_1..x_n, y_1..y_n):\n");
        for e in &r.newton.ideal.generators {
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(v, _)| if v < n { format!("x{}", v + 1) } else { format!("y{}", v - n + 1) })
                .collect();
            let _ = writeln!(out, "  {:?}  {}", e, vars.join("*"));
        }
        let rep = &r.newton.report;
        let _ = writeln!(out, "mcd (rank route) = {}", rep.rank_route_value.map_or("-".into(), |v| v.to_string()));
        let _ = writeln!(out, "mcd (LP route)   = {}", rep.mcd);
        let _ = writeln!(out, "witness face: generators {:?}", rep.witness_subset);
        let normal: Vec<String> = rep.witness_normal.iter().map(|q| q.to_string()).collect();
        let _ = writeln!(out, "witness normal: ({})", normal.join(", "));
        let _ = writeln!(out, "mcd + 1 = {}; Jacobian spread = {}", r.newton.spread, r.analytic_spread);
        out
    });
    if agree {
        Ok(())
    } else {
        Err(Failure { code: 1, message: format!("mcd + 1 differs from the Jacobian spread {spread}") })
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let base = if cli.exact { FieldConfig::exact() } else { FieldConfig::prime(cli.prime) };
    let cfg = base.with_seed(cli.seed).with_trials(cli.trials);
    cfg.validate().map_err(|e| Failure::precondition(e.to_string()))?;
    let ctx = Ctx { cfg, seed: cli.seed, format: cli.format, started: Instant::now() };
    match &cli.command {
        Command::Spread { graph, cross_check, force_jacobian } => {
            let policy = match (cross_check, force_jacobian) {
                (true, _) => Policy::CrossCheck,
                (_, true) => Policy::ForceJacobian,
                _ => Policy::PreferFormula,
            };
            cmd_spread(&ctx, graph, policy)
        }
        Command::Verify { suite, n_max, count } => cmd_verify(&ctx, *suite, *n_max, *count),
        Command::ExploreHandle { graph, pairs, all_pairs } => cmd_explore_handle(&ctx, graph, pairs, *all_pairs),
        Command::Newton { graph } => cmd_newton(&ctx, graph),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
