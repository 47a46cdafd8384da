//! Analytic spread of binomial edge ideals.
//!
//! [`analytic_spread`] splits the graph into connected components, answers
//! each one by a closed formula when its class has one, and falls back to
//! the Jacobian engine otherwise. The `verify_*` functions check the
//! structural identities and bounds the value must satisfy.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    build_system, generic_rank, greedy_transcendence_base, EngineError, FieldConfig, RankCertificate,
};
use crate::graph::{
    add_handle, add_leaf, closedness_violation, connected_components, has_induced_k4, is_closed_labeling, is_connected,
    is_planar_small, vertex_connectivity, Graph, GraphError,
};
use crate::newton::{independent_generators, initial_ideal_closed, mcd_via_rank, NewtonError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpreadError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(
        "cross-check failed on component {component}: {method:?} gives {formula_value}, Jacobian engine gives {engine_value}"
    )]
    CrossCheck {
        component: usize,
        method: Method,
        formula_value: usize,
        engine_value: usize,
        certificate: Box<RankCertificate>,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Policy {
    #[default]
    PreferFormula,
    ForceJacobian,
    /// Formula components are recomputed by the engine and must agree.
    CrossCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FormulaTree,
    FormulaUnicyclic,
    FormulaPseudoForest,
    FormulaComplete,
    FormulaClosedK4free,
    Jacobian,
    NewtonMcd,
    /// Components were answered by different methods; see the per-component entries.
    Mixed,
}

impl Method {
    pub fn is_formula(self) -> bool {
        !matches!(self, Method::Jacobian | Method::Mixed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentSpread {
    pub index: usize,
    /// Original labels of the component's vertices.
    pub vertices: Vec<usize>,
    pub edges: usize,
    pub value: usize,
    pub method: Method,
    /// Transcendence base, in original labels.
    pub base_edges: Vec<(usize, usize)>,
    /// Engine value when the engine ran (Jacobian method or cross-check).
    pub engine_value: Option<usize>,
    pub certificate: Option<RankCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentBounds {
    pub index: usize,
    pub n: usize,
    pub value: usize,
    pub lower_general: usize,
    /// `n + t - 2` with `t` the vertex connectivity; absent when `t` is not computed.
    pub lower_connectivity: Option<usize>,
    pub upper_general: usize,
    pub upper_mu: usize,
    /// `|E| - 3`, present only when the minimum degree is at least 4.
    pub upper_min_degree: Option<usize>,
    pub vertex_connectivity: Option<usize>,
    pub min_degree: usize,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub components: Vec<ComponentBounds>,
    pub all_satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpreadResult {
    pub value: usize,
    pub method: Method,
    pub components: Vec<ComponentSpread>,
    pub bounds: BoundReport,
    /// Union of the component bases; its size equals `value`.
    #[serde(rename = "certificate")]
    pub base_edges: Option<Vec<(usize, usize)>>,
}

struct Answer {
    value: usize,
    method: Method,
    base: Vec<(usize, usize)>,
    engine_value: Option<usize>,
    certificate: Option<RankCertificate>,
}

/// Path edges `{i, i+1}` together with the star edges `{1, j}`.
fn path_star_edges(g: &Graph) -> Vec<(usize, usize)> {
    g.edges().filter(|&(i, j)| j == i + 1 || i == 1).collect()
}

fn engine_answer(g: &Graph, cfg: &FieldConfig) -> Result<Answer, SpreadError> {
    let sys = build_system(g);
    let order: Vec<usize> = (0..sys.len()).collect();
    let cert = generic_rank(&sys, cfg)?;
    let base = greedy_transcendence_base(&sys, &order, cfg)?;
    Ok(Answer {
        value: cert.rank,
        method: Method::Jacobian,
        base: base.edges(&sys),
        engine_value: Some(cert.rank),
        certificate: Some(cert),
    })
}

/// Formula answer for a connected graph, if its class has one.
fn formula_answer(g: &Graph) -> Result<Option<Answer>, SpreadError> {
    let (n, m) = (g.n(), g.edge_count());
    let all_edges = || g.edge_vec();
    let answer = |value, method, base| Answer { value, method, base, engine_value: None, certificate: None };
    if n <= 1 {
        return Ok(Some(answer(0, Method::FormulaTree, vec![])));
    }
    if m == n * (n - 1) / 2 {
        return Ok(Some(answer(2 * n - 3, Method::FormulaComplete, path_star_edges(g))));
    }
    if m + 1 == n {
        return Ok(Some(answer(m, Method::FormulaTree, all_edges())));
    }
    if m == n {
        return Ok(Some(answer(m, Method::FormulaUnicyclic, all_edges())));
    }
    if is_closed_labeling(g) {
        if !has_induced_k4(g) {
            return Ok(Some(answer(m, Method::FormulaClosedK4free, all_edges())));
        }
        let ideal = initial_ideal_closed(g)?;
        let mcd = mcd_via_rank(&ideal)?;
        let edges = g.edge_vec();
        let base = independent_generators(&ideal).into_iter().map(|k| edges[k]).collect();
        return Ok(Some(answer(mcd + 1, Method::NewtonMcd, base)));
    }
    Ok(None)
}

fn component_answer(g: &Graph, cfg: &FieldConfig, policy: Policy, index: usize) -> Result<Answer, SpreadError> {
    if policy == Policy::ForceJacobian && g.n() > 1 {
        return engine_answer(g, cfg);
    }
    let Some(mut answer) = formula_answer(g)? else {
        return engine_answer(g, cfg);
    };
    if policy == Policy::CrossCheck && g.n() > 1 {
        let cert = generic_rank(&build_system(g), cfg)?;
        if cert.rank != answer.value {
            return Err(SpreadError::CrossCheck {
                component: index,
                method: answer.method,
                formula_value: answer.value,
                engine_value: cert.rank,
                certificate: Box::new(cert),
            });
        }
        answer.engine_value = Some(cert.rank);
        answer.certificate = Some(cert);
    }
    Ok(answer)
}

fn overall_method(components: &[ComponentSpread]) -> Method {
    let mut methods: Vec<Method> = components
        .iter()
        .filter(|c| c.vertices.len() > 1)
        .map(|c| c.method)
        .collect();
    methods.sort_by_key(|m| *m as u8);
    methods.dedup();
    match methods.as_slice() {
        [] => Method::FormulaTree,
        [only] => *only,
        ms if ms.iter().all(|m| matches!(m, Method::FormulaTree | Method::FormulaUnicyclic)) => {
            Method::FormulaPseudoForest
        }
        _ => Method::Mixed,
    }
}

/// `l(J_G)` as the sum over connected components.
pub fn analytic_spread(g: &Graph, cfg: &FieldConfig, policy: Policy) -> Result<SpreadResult, SpreadError> {
    cfg.validate()?;
    let decomposition = connected_components(g);
    let mut components = Vec::with_capacity(decomposition.components.len());
    for (index, comp) in decomposition.components.iter().enumerate() {
        let a = component_answer(&comp.graph, cfg, policy, index)?;
        let base_edges = a
            .base
            .iter()
            .map(|&(i, j)| (comp.original_label(i), comp.original_label(j)))
            .collect();
        components.push(ComponentSpread {
            index,
            vertices: comp.vertices.clone(),
            edges: comp.graph.edge_count(),
            value: a.value,
            method: a.method,
            base_edges,
            engine_value: a.engine_value,
            certificate: a.certificate,
        });
    }
    let value = components.iter().map(|c| c.value).sum();
    let mut base: Vec<(usize, usize)> = components.iter().flat_map(|c| c.base_edges.iter().copied()).collect();
    base.sort_unstable();
    let method = overall_method(&components);
    let mut result = SpreadResult {
        value,
        method,
        components,
        bounds: BoundReport { components: vec![], all_satisfied: true },
        base_edges: Some(base),
    };
    result.bounds = verify_bounds(g, &result);
    Ok(result)
}

/// Evaluates every applicable inequality for each component with at least two vertices.
pub fn verify_bounds(g: &Graph, result: &SpreadResult) -> BoundReport {
    let decomposition = connected_components(g);
    let mut reports = Vec::new();
    for (comp, spread) in decomposition.components.iter().zip(&result.components) {
        let (n, m) = (comp.graph.n(), comp.graph.edge_count());
        if n < 2 {
            continue;
        }
        let value = spread.value;
        let t = vertex_connectivity(&comp.graph).ok();
        let min_degree = comp.graph.min_degree();
        let b = ComponentBounds {
            index: spread.index,
            n,
            value,
            lower_general: n - 1,
            lower_connectivity: t.map(|t| n + t - 2),
            upper_general: 2 * n - 3,
            upper_mu: m,
            upper_min_degree: (min_degree >= 4).then(|| m - 3),
            vertex_connectivity: t,
            min_degree,
            violations: vec![],
        };
        let mut violations = Vec::new();
        if value < b.lower_general {
            violations.push(format!("{value} < n - 1 = {}", b.lower_general));
        }
        if let Some(lc) = b.lower_connectivity {
            if value < lc {
                violations.push(format!("{value} < n + t - 2 = {lc}"));
            }
        }
        if value > b.upper_general {
            violations.push(format!("{value} > 2n - 3 = {}", b.upper_general));
        }
        if value > b.upper_mu {
            violations.push(format!("{value} > |E| = {}", b.upper_mu));
        }
        if let Some(u) = b.upper_min_degree {
            if value > u {
                violations.push(format!("{value} > |E| - 3 = {u}"));
            }
        }
        reports.push(ComponentBounds { violations, ..b });
    }
    let all_satisfied = reports.iter().all(|b| b.violations.is_empty());
    BoundReport { components: reports, all_satisfied }
}

/// Generic Jacobian rank of the whole graph's system, without decomposition.
pub fn engine_spread(g: &Graph, cfg: &FieldConfig) -> Result<usize, SpreadError> {
    Ok(generic_rank(&build_system(g), cfg)?.rank)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdditivityCheck {
    pub whole: usize,
    pub parts: Vec<usize>,
    pub holds: bool,
}

/// Whole-graph engine value against the sum of per-component engine values.
pub fn verify_additivity(g: &Graph, cfg: &FieldConfig) -> Result<AdditivityCheck, SpreadError> {
    let whole = engine_spread(g, cfg)?;
    let parts = connected_components(g)
        .components
        .iter()
        .map(|c| engine_spread(&c.graph, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let holds = whole == parts.iter().sum::<usize>();
    Ok(AdditivityCheck { whole, parts, holds })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaCheck {
    pub before: usize,
    pub after: usize,
    pub holds: bool,
}

/// Adding a leaf raises the spread by exactly one.
pub fn verify_leaf(g: &Graph, attach: usize, cfg: &FieldConfig) -> Result<DeltaCheck, SpreadError> {
    let bigger = add_leaf(g, attach)?;
    let before = engine_spread(g, cfg)?;
    let after = engine_spread(&bigger, cfg)?;
    Ok(DeltaCheck { before, after, holds: after == before + 1 })
}

/// `l(J_G) <= l(J_G')` for `G` a spanning subgraph of `G'`.
pub fn verify_monotonicity(g: &Graph, g_prime: &Graph, cfg: &FieldConfig) -> Result<DeltaCheck, SpreadError> {
    if !g.is_subgraph_of(g_prime) {
        return Err(SpreadError::Precondition(
            "first graph must be a subgraph of the second on the same vertex set".into(),
        ));
    }
    let before = engine_spread(g, cfg)?;
    let after = engine_spread(g_prime, cfg)?;
    Ok(DeltaCheck { before, after, holds: before <= after })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HandleRow {
    pub pair: (usize, usize),
    pub before: usize,
    pub after: usize,
    pub delta: i64,
    pub planar_before: Option<bool>,
    pub planar_after: Option<bool>,
}

/// Records how the spread changes when a handle is attached at each pair.
/// Gathers evidence only; no delta is asserted.
pub fn handle_experiment(g: &Graph, pairs: &[(usize, usize)], cfg: &FieldConfig) -> Result<Vec<HandleRow>, SpreadError> {
    let before = engine_spread(g, cfg)?;
    let planar_before = is_planar_small(g);
    pairs
        .iter()
        .map(|&(i, j)| {
            let h = add_handle(g, i, j)?;
            let after = engine_spread(&h, cfg)?;
            Ok(HandleRow {
                pair: (i, j),
                before,
                after,
                delta: after as i64 - before as i64,
                planar_before,
                planar_after: is_planar_small(&h),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathStarReport {
    pub subset: Vec<(usize, usize)>,
    /// Path edges `{i, i+1}` absent from the graph.
    pub missing_path_edges: Vec<(usize, usize)>,
    pub rank: usize,
    pub spread: usize,
    pub holds: bool,
}

/// Generic rank of the path-and-star binomials `f_{i,i+1}`, `f_{1,j}` against
/// the spread of a connected closed graph.
pub fn path_star_base_check(g: &Graph, cfg: &FieldConfig) -> Result<PathStarReport, SpreadError> {
    if !is_connected(g) {
        return Err(SpreadError::Precondition("graph must be connected".into()));
    }
    if let Some((i, j, k)) = closedness_violation(g) {
        return Err(SpreadError::Precondition(format!("labeling not closed at triple ({i}, {j}, {k})")));
    }
    let subset = path_star_edges(g);
    let missing_path_edges = (1..g.n()).map(|i| (i, i + 1)).filter(|&(i, j)| !g.has_edge(i, j)).collect();
    let sys = build_system(g);
    let indices: Vec<usize> = sys
        .gens
        .iter()
        .enumerate()
        .filter(|(_, f)| subset.contains(&f.edge()))
        .map(|(k, _)| k)
        .collect();
    let rank = generic_rank(&sys.subsystem(&indices), cfg)?.rank;
    let spread = generic_rank(&sys, cfg)?.rank;
    Ok(PathStarReport { subset, missing_path_edges, rank, spread, holds: rank == spread })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, generate_family, parse_graph, path, Family, GraphFormat};

    fn hexagon() -> Graph {
        parse_graph("6 9\n1 2\n2 3\n3 4\n4 5\n5 6\n1 6\n1 3\n1 4\n1 5", GraphFormat::EdgeList).unwrap()
    }

    fn cfg() -> FieldConfig {
        FieldConfig::default().with_seed(2024)
    }

    #[test]
    fn spread_examples() {
        let r = analytic_spread(&complete(5), &cfg(), Policy::CrossCheck).unwrap();
        assert_eq!((r.value, r.method), (7, Method::FormulaComplete));
        assert_eq!(r.base_edges.as_ref().unwrap().len(), 7);

        let g = hexagon();
        let r = analytic_spread(&g, &cfg(), Policy::CrossCheck).unwrap();
        assert_eq!((r.value, r.method), (9, Method::Jacobian));
        let gp = g.induced(&[1, 2, 3, 4, 5]);
        assert_eq!(analytic_spread(&gp, &cfg(), Policy::CrossCheck).unwrap().value, 7);

        let union = path(3).disjoint_union(&complete(3));
        let r = analytic_spread(&union, &cfg(), Policy::CrossCheck).unwrap();
        assert_eq!(r.value, 5);
        assert_eq!(r.components.iter().map(|c| c.value).collect::<Vec<_>>(), vec![2, 3]);
        // the triangle is complete, so methods differ
        assert_eq!(r.method, Method::Mixed);

        let r = analytic_spread(&Graph::empty(5), &cfg(), Policy::PreferFormula).unwrap();
        assert_eq!(r.value, 0);
        assert_eq!(r.components.len(), 5);
        assert!(r.bounds.all_satisfied);
    }

    #[test]
    fn pseudo_forest_method_label() {
        let g = path(3).disjoint_union(&cycle(4).unwrap());
        let r = analytic_spread(&g, &cfg(), Policy::CrossCheck).unwrap();
        assert_eq!((r.value, r.method), (6, Method::FormulaPseudoForest));
    }

    #[test]
    fn base_certificate_size_matches_value() {
        for g in [hexagon(), complete(6), cycle(5).unwrap(), path(4).disjoint_union(&complete(4))] {
            for policy in [Policy::PreferFormula, Policy::ForceJacobian] {
                let r = analytic_spread(&g, &cfg(), policy).unwrap();
                assert_eq!(r.base_edges.as_ref().unwrap().len(), r.value, "{g} {policy:?}");
                assert_eq!(r.value, r.components.iter().map(|c| c.value).sum::<usize>());
            }
        }
    }

    #[test]
    fn newton_mcd_route_in_dispatcher() {
        // K_4 with a pendant path 4-5-6 is closed and contains a K_4
        let g = Graph::new(6, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (4, 5), (5, 6)]).unwrap();
        let r = analytic_spread(&g, &cfg(), Policy::CrossCheck).unwrap();
        assert_eq!(r.method, Method::NewtonMcd);
        assert_eq!(r.value, 7);
    }

    #[test]
    fn cross_check_alarm_fires_on_wrong_formula() {
        // a bogus engine config can't be forced, so check the error shape directly
        let err = SpreadError::CrossCheck {
            component: 0,
            method: Method::FormulaTree,
            formula_value: 3,
            engine_value: 2,
            certificate: Box::new(
                generic_rank(&build_system(&path(3)), &cfg()).unwrap(),
            ),
        };
        assert!(err.to_string().contains("cross-check failed"));
    }

    #[test]
    fn bounds_examples() {
        let r = analytic_spread(&complete(5), &cfg(), Policy::PreferFormula).unwrap();
        let b = &r.bounds.components[0];
        assert_eq!(b.upper_min_degree, Some(7));
        assert_eq!(b.value, 7);
        assert!(r.bounds.all_satisfied);

        let tree = generate_family(Family::RandomTree { n: 6, seed: 9 }).unwrap();
        let r = analytic_spread(&tree, &cfg(), Policy::ForceJacobian).unwrap();
        assert_eq!((r.value, r.bounds.components[0].lower_general), (5, 5));

        let r = analytic_spread(&cycle(6).unwrap(), &cfg(), Policy::ForceJacobian).unwrap();
        assert_eq!(r.bounds.components[0].lower_connectivity, Some(6));
        assert_eq!(r.value, 6);
    }

    #[test]
    fn violated_bounds_are_reported() {
        let g = complete(5);
        let mut r = analytic_spread(&g, &cfg(), Policy::PreferFormula).unwrap();
        r.components[0].value = 9;
        let b = verify_bounds(&g, &r);
        assert!(!b.all_satisfied);
        assert_eq!(b.components[0].violations.len(), 2);
    }

    #[test]
    fn additivity_examples() {
        let two = Graph::new(4, [(1, 2), (3, 4)]).unwrap();
        let a = verify_additivity(&two, &cfg()).unwrap();
        assert_eq!((a.whole, a.holds), (2, true));
        let a = verify_additivity(&path(3).disjoint_union(&complete(3)), &cfg()).unwrap();
        assert_eq!((a.whole, a.holds), (5, true));
        assert!(verify_additivity(&hexagon(), &cfg()).unwrap().holds);
    }

    #[test]
    fn leaf_examples() {
        let d = verify_leaf(&path(2), 2, &cfg()).unwrap();
        assert_eq!((d.before, d.after, d.holds), (1, 2, true));
        let d = verify_leaf(&complete(4), 1, &cfg()).unwrap();
        assert_eq!((d.before, d.after, d.holds), (5, 6, true));
        let d = verify_leaf(&cycle(5).unwrap(), 3, &cfg()).unwrap();
        assert_eq!((d.before, d.after, d.holds), (5, 6, true));
        assert!(verify_leaf(&path(2), 5, &cfg()).is_err());
    }

    #[test]
    fn monotonicity_examples() {
        let d = verify_monotonicity(&cycle(6).unwrap(), &hexagon(), &cfg()).unwrap();
        assert_eq!((d.before, d.after, d.holds), (6, 9, true));
        let d = verify_monotonicity(&hexagon(), &hexagon(), &cfg()).unwrap();
        assert_eq!(d.before, d.after);
        let star = Graph::new(5, [(1, 2), (1, 3), (1, 4), (1, 5)]).unwrap();
        let d = verify_monotonicity(&star, &complete(5), &cfg()).unwrap();
        assert_eq!((d.before, d.after), (4, 7));
        assert!(matches!(
            verify_monotonicity(&complete(5), &star, &cfg()),
            Err(SpreadError::Precondition(_))
        ));
    }

    #[test]
    fn handle_examples() {
        let gp = hexagon().induced(&[1, 2, 3, 4, 5]);
        let rows = handle_experiment(&gp, &[(5, 1)], &cfg()).unwrap();
        assert_eq!((rows[0].before, rows[0].after, rows[0].delta), (7, 9, 2));
        assert_eq!(rows[0].planar_after, Some(true));
        let rows = handle_experiment(&path(2), &[(1, 2)], &cfg()).unwrap();
        assert_eq!((rows[0].before, rows[0].after, rows[0].delta), (1, 3, 2));
        let rows = handle_experiment(&path(3), &[(1, 3)], &cfg()).unwrap();
        assert_eq!((rows[0].before, rows[0].after, rows[0].delta), (2, 4, 2));
        assert!(handle_experiment(&path(3), &[(2, 2)], &cfg()).is_err());
    }

    #[test]
    fn path_star_examples() {
        let r = path_star_base_check(&complete(4), &cfg()).unwrap();
        assert_eq!(r.subset, vec![(1, 2), (1, 3), (1, 4), (2, 3), (3, 4)]);
        assert_eq!((r.rank, r.spread, r.holds), (5, 5, true));
        let r = path_star_base_check(&path(3), &cfg()).unwrap();
        assert_eq!((r.rank, r.holds), (2, true));
        let r = path_star_base_check(&complete(5), &cfg()).unwrap();
        assert_eq!((r.rank, r.spread, r.holds), (7, 7, true));
        assert!(path_star_base_check(&cycle(4).unwrap(), &cfg()).is_err());
        assert!(path_star_base_check(&Graph::new(3, [(1, 2)]).unwrap(), &cfg()).is_err());
    }

    #[test]
    fn path_star_subset_falls_short_without_enough_k4s() {
        // two triangles glued at vertex 3: closed, K_4-free, spread 6, but
        // {1,2},{2,3},{3,4},{4,5},{1,3} omits {3,5} and has rank 5
        let g = Graph::new(5, [(1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5)]).unwrap();
        let r = path_star_base_check(&g, &cfg()).unwrap();
        assert_eq!((r.rank, r.spread, r.holds), (5, 6, false));
        assert!(r.missing_path_edges.is_empty());
    }
}
