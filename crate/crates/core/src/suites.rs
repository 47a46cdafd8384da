//! Seeded verification sweeps over graph corpora.
//!
//! Each suite maps an instance index to one graph (or pair of graphs) and a
//! pass/fail verdict. Instances are evaluated in parallel and collected in
//! index order, so a report depends only on the corpus parameters and the
//! engine configuration.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::FieldConfig;
use crate::graph::{
    complete, connected_graphs, generate_family, has_induced_k4, is_closed_labeling, Family, Graph,
};
use crate::newton::closed_spread_via_newton;
use crate::spread::{
    analytic_spread, engine_spread, handle_experiment, verify_additivity, verify_leaf, verify_monotonicity,
    HandleRow, Policy, SpreadError,
};

/// Vertex count up to which the bounds suite sweeps every labeled connected graph.
pub const EXHAUSTIVE_BOUNDS_MAX: usize = 5;
/// Largest vertex count of the exhaustive closed-graph corpus.
pub const CLOSED_CORPUS_MAX: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Bounds,
    Additivity,
    Leaf,
    Monotonicity,
    Closed,
    Newton,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Bounds, Suite::Additivity, Suite::Leaf, Suite::Monotonicity, Suite::Closed, Suite::Newton];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Corpus {
    /// Largest vertex count drawn or enumerated.
    pub n_max: usize,
    /// Number of random instances (per vertex count above the exhaustive range, for bounds).
    pub count: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteRow {
    pub suite: Suite,
    pub instance: usize,
    pub graph: String,
    pub passed: bool,
    pub detail: String,
}

fn row(suite: Suite, instance: usize, graph: &Graph, outcome: Result<(bool, String), SpreadError>) -> SuiteRow {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    SuiteRow { suite, instance, graph: graph.to_string(), passed, detail }
}

fn instance_rng(seed: u64, instance: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(instance as u64);
    rng
}

/// Random connected graph on `n` vertices with a uniformly drawn edge count.
fn random_connected(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let m = rng.gen_range(n.saturating_sub(1)..=n * n.saturating_sub(1) / 2);
    generate_family(Family::RandomConnected { n, m, seed: rng.gen() }).expect("parameters are in range")
}

/// Random graph, possibly disconnected, with edge probability drawn per graph.
fn random_graph(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let p = rng.gen_range(0.1..0.9);
    let edges: Vec<(usize, usize)> = complete(n).edges().filter(|_| rng.gen_bool(p)).collect();
    Graph::new(n, edges).expect("edges come from K_n")
}

/// Connected graphs on `2..=n_max` vertices that are closed under their labeling.
pub fn closed_corpus(n_max: usize) -> Vec<Graph> {
    (2..=n_max.min(CLOSED_CORPUS_MAX))
        .flat_map(|n| connected_graphs(n).expect("within enumeration limit").filter(is_closed_labeling))
        .collect()
}

/// Every labeled connected graph with `2..=min(n_max, 5)` vertices, then
/// `count` seeded random connected graphs for each larger vertex count.
pub fn bounds_corpus(corpus: &Corpus) -> Vec<Graph> {
    let mut graphs: Vec<Graph> = (2..=corpus.n_max.min(EXHAUSTIVE_BOUNDS_MAX))
        .flat_map(|n| connected_graphs(n).expect("within enumeration limit"))
        .collect();
    for n in EXHAUSTIVE_BOUNDS_MAX + 1..=corpus.n_max {
        let mut rng = instance_rng(corpus.seed, n);
        graphs.extend((0..corpus.count).map(|_| random_connected(n, &mut rng)));
    }
    graphs
}

pub fn run_suite(suite: Suite, corpus: &Corpus, cfg: &FieldConfig) -> Vec<SuiteRow> {
    let n_max = corpus.n_max.max(2);
    match suite {
        Suite::Bounds => {
            let graphs = bounds_corpus(corpus);
            graphs
                .par_iter()
                .enumerate()
                .map(|(k, g)| {
                    let outcome = analytic_spread(g, cfg, Policy::CrossCheck).map(|r| {
                        let violations: Vec<String> =
                            r.bounds.components.iter().flat_map(|b| b.violations.clone()).collect();
                        (r.bounds.all_satisfied, format!("l={} {}", r.value, violations.join("; ")).trim_end().to_string())
                    });
                    row(suite, k, g, outcome)
                })
                .collect()
        }
        Suite::Additivity => (0..corpus.count)
            .into_par_iter()
            .map(|k| {
                let mut rng = instance_rng(corpus.seed, k);
                let parts = rng.gen_range(2..=3);
                let mut g = Graph::empty(0);
                for _ in 0..parts {
                    let n = rng.gen_range(1..=n_max.min(5));
                    g = g.disjoint_union(&random_connected(n, &mut rng));
                }
                let outcome = verify_additivity(&g, cfg).and_then(|a| {
                    let formula = analytic_spread(&g, cfg, Policy::PreferFormula)?.value;
                    let holds = a.holds && formula == a.whole;
                    Ok((holds, format!("whole={} parts={:?} dispatcher={formula}", a.whole, a.parts)))
                });
                row(suite, k, &g, outcome)
            })
            .collect(),
        Suite::Leaf => (0..corpus.count)
            .into_par_iter()
            .map(|k| {
                let mut rng = instance_rng(corpus.seed, k);
                let n = rng.gen_range(1..n_max);
                let g = random_graph(n, &mut rng);
                let attach = rng.gen_range(1..=n);
                let outcome = verify_leaf(&g, attach, cfg)
                    .map(|d| (d.holds, format!("attach={attach} {} -> {}", d.before, d.after)));
                row(suite, k, &g, outcome)
            })
            .collect(),
        Suite::Monotonicity => (0..corpus.count)
            .into_par_iter()
            .map(|k| {
                let mut rng = instance_rng(corpus.seed, k);
                let n = rng.gen_range(2..=n_max);
                let g = random_graph(n, &mut rng);
                let p = rng.gen_range(0.1..0.9);
                let mut bigger = g.clone();
                for (i, j) in complete(n).edges() {
                    if !g.has_edge(i, j) && rng.gen_bool(p) {
                        bigger = bigger.with_edge(i, j).expect("edge is new");
                    }
                }
                let outcome = verify_monotonicity(&g, &bigger, cfg)
                    .map(|d| (d.holds, format!("{} <= {} (supergraph {bigger})", d.before, d.after)));
                row(suite, k, &g, outcome)
            })
            .collect(),
        Suite::Closed => closed_corpus(n_max)
            .par_iter()
            .enumerate()
            .map(|(k, g)| {
                let outcome = engine_spread(g, cfg).map(|l| {
                    let m = g.edge_count();
                    let k4 = has_induced_k4(g);
                    ((l == m) == !k4, format!("l={l} |E|={m} induced_k4={k4}"))
                });
                row(suite, k, g, outcome)
            })
            .collect(),
        Suite::Newton => closed_corpus(n_max)
            .par_iter()
            .enumerate()
            .map(|(k, g)| {
                let outcome = closed_spread_via_newton(g).map_err(SpreadError::from).and_then(|ns| {
                    let l = engine_spread(g, cfg)?;
                    let routes = ns.report.rank_route_value == Some(ns.report.mcd);
                    let recheck = ns.report.recheck(&ns.ideal);
                    Ok((
                        routes && recheck && ns.spread == l,
                        format!("mcd={} rank_route={:?} mcd+1={} l={l}", ns.report.mcd, ns.report.rank_route_value, ns.spread),
                    ))
                });
                row(suite, k, g, outcome)
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HandleCase {
    pub instance: usize,
    pub graph: String,
    #[serde(flatten)]
    pub row: HandleRow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HandleEvidence {
    pub cases: Vec<HandleCase>,
    /// Observed delta mapped to its number of occurrences.
    pub histogram: BTreeMap<i64, usize>,
    pub errors: Vec<String>,
}

/// The five-vertex graph obtained from the hexagon with chords 13, 14, 15 by deleting vertex 6.
pub fn hexagon_minus_vertex() -> Graph {
    Graph::new(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 3), (1, 4), (1, 5)]).expect("fixed graph")
}

/// Handle deltas over `count` cases. Case 0 is the pentagon-fan graph with
/// the handle at (5, 1); the rest are seeded random connected graphs.
pub fn handle_evidence(count: usize, seed: u64, cfg: &FieldConfig) -> HandleEvidence {
    let results: Vec<(usize, Graph, Result<Vec<HandleRow>, SpreadError>)> = (0..count)
        .into_par_iter()
        .map(|k| {
            let (g, pair) = if k == 0 {
                (hexagon_minus_vertex(), (5, 1))
            } else {
                let mut rng = instance_rng(seed, k);
                let n = rng.gen_range(2..=7);
                let g = random_connected(n, &mut rng);
                let i = rng.gen_range(1..=n);
                let j = (i + rng.gen_range(1..n) - 1) % n + 1;
                (g, (i, j))
            };
            let rows = handle_experiment(&g, &[pair], cfg);
            (k, g, rows)
        })
        .collect();
    let mut evidence = HandleEvidence { cases: vec![], histogram: BTreeMap::new(), errors: vec![] };
    for (instance, g, rows) in results {
        match rows {
            Ok(rows) => {
                for r in rows {
                    *evidence.histogram.entry(r.delta).or_default() += 1;
                    evidence.cases.push(HandleCase { instance, graph: g.to_string(), row: r });
                }
            }
            Err(e) => evidence.errors.push(format!("case {instance}: {e}")),
        }
    }
    evidence
}
