//! Finite simple graphs on the vertex labels `1..=n`.
//!
//! Labels are significant: closedness is a property of a labeled graph, so
//! nothing in this module renumbers vertices unless asked to
//! ([`Graph::relabel`], [`connected_components`]).

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest vertex count accepted by the brute-force vertex connectivity search.
pub const CONNECTIVITY_BRUTE_FORCE_MAX: usize = 12;
/// Largest vertex count for the relabeling search and the planarity test.
pub const SMALL_SEARCH_MAX: usize = 8;
/// Largest vertex count for exhaustive enumeration of labeled graphs.
pub const ENUMERATION_MAX: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: malformed input: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: vertex label {label} outside 1..={n}")]
    LabelOutOfRange { line: usize, label: i64, n: usize },
    #[error("line {line}: loop edge at vertex {label}")]
    Loop { line: usize, label: usize },
    #[error("line {line}: duplicate edge {{{i},{j}}}")]
    DuplicateEdge { line: usize, i: usize, j: usize },
    #[error("invalid JSON graph: {0}")]
    Json(String),
    #[error("vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("handle endpoints must differ (got {0} twice)")]
    DegenerateHandle(usize),
    #[error("infeasible family parameters: {0}")]
    InfeasibleFamily(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("operation needs at least {needed} vertices, graph has {n}")]
    TooSmall { needed: usize, n: usize },
    #[error("operation limited to at most {limit} vertices, graph has {n}")]
    TooLarge { limit: usize, n: usize },
}

/// Input document formats understood by [`parse_graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Json,
}

impl GraphFormat {
    /// Picks JSON when the first non-blank character opens an object.
    pub fn sniff(text: &str) -> GraphFormat {
        if text.trim_start().starts_with('{') {
            GraphFormat::Json
        } else {
            GraphFormat::EdgeList
        }
    }
}

/// A finite simple graph with vertices `1..=n` and edges stored as `(i, j)`, `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        Graph { n, edges: BTreeSet::new() }
    }

    /// Builds a graph, rejecting loops, duplicates (in either orientation) and bad labels.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(n);
        for (idx, (u, v)) in edges.into_iter().enumerate() {
            g.insert_checked(idx + 1, u as i64, v as i64)?;
        }
        Ok(g)
    }

    fn insert_checked(&mut self, line: usize, u: i64, v: i64) -> Result<(), GraphError> {
        for label in [u, v] {
            if label < 1 || label as usize > self.n {
                return Err(GraphError::LabelOutOfRange { line, label, n: self.n });
            }
        }
        let (u, v) = (u as usize, v as usize);
        if u == v {
            return Err(GraphError::Loop { line, label: u });
        }
        let e = (u.min(v), u.max(v));
        if !self.edges.insert(e) {
            return Err(GraphError::DuplicateEdge { line, i: e.0, j: e.1 });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_vec(&self) -> Vec<(usize, usize)> {
        self.edges.iter().copied().collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.edges.contains(&(i.min(j), i.max(j)))
    }

    /// Adjacency matrix indexed by labels; row and column 0 are unused.
    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let mut adj = vec![vec![false; self.n + 1]; self.n + 1];
        for &(i, j) in &self.edges {
            adj[i][j] = true;
            adj[j][i] = true;
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(i, j)| i == v || j == v).count()
    }

    pub fn min_degree(&self) -> usize {
        let mut deg = vec![0usize; self.n + 1];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg.into_iter().skip(1).min().unwrap_or(0)
    }

    /// Returns the graph with vertex `v` renamed to `perm[v - 1]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "relabeling must cover every vertex");
        let edges = self.edges.iter().map(|&(i, j)| {
            let (a, b) = (perm[i - 1], perm[j - 1]);
            (a.min(b), a.max(b))
        });
        Graph { n: self.n, edges: edges.collect() }
    }

    /// Subgraph induced on `vertices`, relabeled in increasing order to `1..=k`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut sorted: Vec<usize> = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let pos = |v: usize| sorted.binary_search(&v).ok().map(|p| p + 1);
        let edges = self
            .edges
            .iter()
            .filter_map(|&(i, j)| Some((pos(i)?, pos(j)?)));
        Graph { n: sorted.len(), edges: edges.collect() }
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(i, j)| (i + shift, j + shift)));
        Graph { n: self.n + other.n, edges }
    }

    pub fn with_edge(&self, i: usize, j: usize) -> Result<Graph, GraphError> {
        let mut g = self.clone();
        g.insert_checked(0, i as i64, j as i64)?;
        Ok(g)
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges.is_subset(&other.edges)
    }

    /// `"n m"` header followed by one `"u v"` line per edge, edges sorted.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(i, j) in &self.edges {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphDoc::from(self)).expect("graph documents always serialize")
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} E={{", self.n)?;
        for (k, (i, j)) in self.edges.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}-{j}")?;
        }
        write!(f, "}}")
    }
}

/// Wire form of the JSON graph format.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<[i64; 2]>,
}

impl From<&Graph> for GraphDoc {
    fn from(g: &Graph) -> Self {
        GraphDoc { n: g.n, edges: g.edges.iter().map(|&(i, j)| [i as i64, j as i64]).collect() }
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphDoc::from(self).serialize(s)
    }
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph, GraphError> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::Json => parse_json(text),
    }
}

fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| GraphError::Malformed { line: 1, reason: "missing \"n m\" header".into() })?;
    let header = parse_pair(hline, header)?;
    let (n, m) = match header {
        (n, m) if n >= 1 && m >= 0 => (n as usize, m as usize),
        _ => {
            return Err(GraphError::Malformed {
                line: hline,
                reason: "header needs n >= 1 and m >= 0".into(),
            })
        }
    };
    let mut g = Graph::empty(n);
    let mut seen = 0usize;
    for (line, content) in lines {
        if seen == m {
            return Err(GraphError::Malformed {
                line,
                reason: format!("more edge lines than the declared {m}"),
            });
        }
        let (u, v) = parse_pair(line, content)?;
        g.insert_checked(line, u, v)?;
        seen += 1;
    }
    if seen != m {
        return Err(GraphError::Malformed {
            line: text.lines().count().max(1),
            reason: format!("header declares {m} edges but {seen} were given"),
        });
    }
    Ok(g)
}

fn parse_pair(line: usize, content: &str) -> Result<(i64, i64), GraphError> {
    let fields: Vec<&str> = content.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(GraphError::Malformed {
            line,
            reason: format!("expected two integers, found {} fields", fields.len()),
        });
    }
    let num = |s: &str| {
        s.parse::<i64>()
            .map_err(|_| GraphError::Malformed { line, reason: format!("not an integer: {s:?}") })
    };
    Ok((num(fields[0])?, num(fields[1])?))
}

fn parse_json(text: &str) -> Result<Graph, GraphError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
    if doc.n == 0 {
        return Err(GraphError::Json("n must be at least 1".into()));
    }
    let mut g = Graph::empty(doc.n);
    for (k, [u, v]) in doc.edges.into_iter().enumerate() {
        g.insert_checked(k + 1, u, v)?;
    }
    Ok(g)
}

/// One connected component together with its relabeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub graph: Graph,
    /// `vertices[k]` is the original label of the component's vertex `k + 1`.
    pub vertices: Vec<usize>,
}

impl Component {
    pub fn original_label(&self, v: usize) -> usize {
        self.vertices[v - 1]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecomposition {
    pub components: Vec<Component>,
}

/// Splits `g` into connected components ordered by smallest original label.
pub fn connected_components(g: &Graph) -> ComponentDecomposition {
    let adj = g.adjacency();
    let mut seen = vec![false; g.n + 1];
    let mut components = Vec::new();
    for start in 1..=g.n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        let mut verts = Vec::new();
        seen[start] = true;
        while let Some(v) = stack.pop() {
            verts.push(v);
            for w in 1..=g.n {
                if adj[v][w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        verts.sort_unstable();
        components.push(Component { graph: g.induced(&verts), vertices: verts });
    }
    ComponentDecomposition { components }
}

pub fn is_connected(g: &Graph) -> bool {
    connected_components(g).components.len() <= 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphClass {
    pub is_connected: bool,
    pub is_tree: bool,
    pub is_unicyclic: bool,
    pub is_pseudo_forest: bool,
    pub is_complete: bool,
    pub is_closed_under_labeling: bool,
    pub is_k4_free: bool,
    pub min_degree: usize,
    /// `None` when the graph is disconnected, has fewer than two vertices,
    /// or is too large for the brute-force search.
    pub vertex_connectivity: Option<usize>,
}

pub fn classify(g: &Graph) -> GraphClass {
    let comps = connected_components(g);
    let is_connected = comps.components.len() <= 1;
    let m = g.edge_count();
    // a component has at most one cycle iff |E_c| <= |V_c|
    let is_pseudo_forest = comps
        .components
        .iter()
        .all(|c| c.graph.edge_count() <= c.graph.n());
    GraphClass {
        is_connected,
        is_tree: is_connected && m + 1 == g.n,
        is_unicyclic: is_connected && m == g.n,
        is_pseudo_forest,
        is_complete: m == g.n * g.n.saturating_sub(1) / 2,
        is_closed_under_labeling: is_closed_labeling(g),
        is_k4_free: !has_induced_k4(g),
        min_degree: g.min_degree(),
        vertex_connectivity: vertex_connectivity(g).ok(),
    }
}

/// First triple `i < j < k` breaking the closed-labeling condition, if any.
pub fn closedness_violation(g: &Graph) -> Option<(usize, usize, usize)> {
    let adj = g.adjacency();
    for i in 1..=g.n {
        for j in i + 1..=g.n {
            for k in j + 1..=g.n {
                if (adj[i][j] && adj[i][k] && !adj[j][k]) || (adj[i][k] && adj[j][k] && !adj[i][j]) {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

/// Whether the given labeling is closed: for `i < j < k`, edges `{i,j},{i,k}`
/// force `{j,k}` and edges `{i,k},{j,k}` force `{i,j}`.
pub fn is_closed_labeling(g: &Graph) -> bool {
    closedness_violation(g).is_none()
}

/// Searches all `n!` relabelings for a closed one; returns the permutation.
pub fn find_closed_labeling(g: &Graph) -> Result<Option<Vec<usize>>, GraphError> {
    if g.n > SMALL_SEARCH_MAX {
        return Err(GraphError::TooLarge { limit: SMALL_SEARCH_MAX, n: g.n });
    }
    let mut perm: Vec<usize> = (1..=g.n).collect();
    loop {
        if is_closed_labeling(&g.relabel(&perm)) {
            return Ok(Some(perm));
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Every 4-subset whose six edges are all present.
#[allow(clippy::needless_range_loop)]
pub fn induced_k4s(g: &Graph) -> Vec<[usize; 4]> {
    let adj = g.adjacency();
    let mut out = Vec::new();
    for a in 1..=g.n {
        for b in a + 1..=g.n {
            if !adj[a][b] {
                continue;
            }
            for c in b + 1..=g.n {
                if !(adj[a][c] && adj[b][c]) {
                    continue;
                }
                for d in c + 1..=g.n {
                    if adj[a][d] && adj[b][d] && adj[c][d] {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

pub fn has_induced_k4(g: &Graph) -> bool {
    !induced_k4s(g).is_empty()
}

fn connected_without(adj: &[Vec<bool>], n: usize, removed: &[bool]) -> bool {
    let Some(start) = (1..=n).find(|&v| !removed[v]) else {
        return true;
    };
    let mut seen = removed.to_vec();
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for w in 1..=n {
            if adj[v][w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter().skip(1).all(|&s| s)
}

/// Largest `t` such that deleting any fewer than `t` vertices leaves the graph
/// connected; complete graphs get `n - 1`.
pub fn vertex_connectivity(g: &Graph) -> Result<usize, GraphError> {
    if g.n < 2 {
        return Err(GraphError::TooSmall { needed: 2, n: g.n });
    }
    if g.n > CONNECTIVITY_BRUTE_FORCE_MAX {
        return Err(GraphError::TooLarge { limit: CONNECTIVITY_BRUTE_FORCE_MAX, n: g.n });
    }
    let adj = g.adjacency();
    let none = vec![false; g.n + 1];
    if !connected_without(&adj, g.n, &none) {
        return Err(GraphError::Disconnected);
    }
    // a separating set leaves at least two vertices, so sizes run up to n - 2
    for size in 1..=g.n.saturating_sub(2) {
        let mut found = false;
        for_each_subset(g.n, size, &mut |subset| {
            let mut removed = vec![false; g.n + 1];
            for &v in subset {
                removed[v] = true;
            }
            if !connected_without(&adj, g.n, &removed) {
                found = true;
            }
            found
        });
        if found {
            return Ok(size);
        }
    }
    Ok(g.n - 1)
}

/// Visits `size`-subsets of `1..=n` in lexicographic order until `visit` returns true.
fn for_each_subset(n: usize, size: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
    let mut idx: Vec<usize> = (1..=size).collect();
    if size > n {
        return;
    }
    loop {
        if visit(&idx) {
            return;
        }
        let mut k = size;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if idx[k] < n - (size - 1 - k) {
                idx[k] += 1;
                for l in k + 1..size {
                    idx[l] = idx[l - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Adds vertex `n + 1` joined to `attach`.
pub fn add_leaf(g: &Graph, attach: usize) -> Result<Graph, GraphError> {
    if attach < 1 || attach > g.n {
        return Err(GraphError::VertexOutOfRange { vertex: attach, n: g.n });
    }
    let mut out = g.clone();
    out.n += 1;
    out.edges.insert((attach, out.n));
    Ok(out)
}

/// Adds vertex `n + 1` joined to both `i` and `j`.
pub fn add_handle(g: &Graph, i: usize, j: usize) -> Result<Graph, GraphError> {
    for v in [i, j] {
        if v < 1 || v > g.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: g.n });
        }
    }
    if i == j {
        return Err(GraphError::DegenerateHandle(i));
    }
    let mut out = g.clone();
    out.n += 1;
    out.edges.insert((i, out.n));
    out.edges.insert((j, out.n));
    Ok(out)
}

pub fn path(n: usize) -> Graph {
    Graph { n, edges: (1..n).map(|i| (i, i + 1)).collect() }
}

pub fn complete(n: usize) -> Graph {
    Graph { n, edges: (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect() }
}

pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InfeasibleFamily(format!("cycle needs n >= 3, got {n}")));
    }
    let mut g = path(n);
    g.edges.insert((1, n));
    Ok(g)
}

/// Named graph families, including seeded random classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    RandomTree { n: usize, seed: u64 },
    RandomConnected { n: usize, m: usize, seed: u64 },
    RandomUnicyclic { n: usize, seed: u64 },
    RandomPseudoForest { n: usize, seed: u64 },
    RandomMinDegree { n: usize, d: usize, seed: u64 },
}

const REJECTION_ATTEMPTS: usize = 10_000;

/// Builds a member of `family`; random families are deterministic in the seed
/// and membership is re-checked with [`classify`] before returning.
pub fn generate_family(family: Family) -> Result<Graph, GraphError> {
    let infeasible = |msg: String| Err(GraphError::InfeasibleFamily(msg));
    let g = match family {
        Family::Path(n) if n >= 1 => path(n),
        Family::Complete(n) if n >= 1 => complete(n),
        Family::Path(_) | Family::Complete(_) => return infeasible("need n >= 1".into()),
        Family::Cycle(n) => cycle(n)?,
        Family::RandomTree { n, seed } => {
            if n < 1 {
                return infeasible("tree needs n >= 1".into());
            }
            random_tree(n, &mut ChaCha8Rng::seed_from_u64(seed))
        }
        Family::RandomConnected { n, m, seed } => {
            let max = n * n.saturating_sub(1) / 2;
            if n < 1 || m + 1 < n || m > max {
                return infeasible(format!("random_connected needs n-1 <= m <= {max}, got n={n} m={m}"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = random_tree(n, &mut rng);
            add_random_edges(&mut g, m, &mut rng);
            g
        }
        Family::RandomUnicyclic { n, seed } => {
            if n < 3 {
                return infeasible(format!("unicyclic graphs need n >= 3, got {n}"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = random_tree(n, &mut rng);
            add_random_edges(&mut g, n, &mut rng);
            g
        }
        Family::RandomPseudoForest { n, seed } => {
            if n < 1 {
                return infeasible("pseudo-forest needs n >= 1".into());
            }
            random_pseudo_forest(n, &mut ChaCha8Rng::seed_from_u64(seed))
        }
        Family::RandomMinDegree { n, d, seed } => {
            if d >= n {
                return infeasible(format!("min degree {d} impossible on {n} vertices"));
            }
            random_min_degree(n, d, &mut ChaCha8Rng::seed_from_u64(seed))?
        }
    };
    let class = classify(&g);
    let ok = match family {
        Family::Path(_) | Family::RandomTree { .. } => class.is_tree,
        Family::Cycle(_) | Family::RandomUnicyclic { .. } => class.is_unicyclic,
        Family::Complete(_) => class.is_complete,
        Family::RandomConnected { m, .. } => class.is_connected && g.edge_count() == m,
        Family::RandomPseudoForest { .. } => class.is_pseudo_forest,
        Family::RandomMinDegree { d, .. } => class.min_degree >= d,
    };
    assert!(ok, "generator produced a graph outside {family:?}: {g}");
    Ok(g)
}

fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut labels: Vec<usize> = (1..=n).collect();
    labels.shuffle(rng);
    let mut g = Graph::empty(n);
    for k in 1..n {
        let parent = labels[rng.gen_range(0..k)];
        let child = labels[k];
        g.edges.insert((parent.min(child), parent.max(child)));
    }
    g
}

fn add_random_edges(g: &mut Graph, target: usize, rng: &mut ChaCha8Rng) {
    let mut missing: Vec<(usize, usize)> = (1..=g.n)
        .flat_map(|i| (i + 1..=g.n).map(move |j| (i, j)))
        .filter(|e| !g.edges.contains(e))
        .collect();
    missing.shuffle(rng);
    for e in missing {
        if g.edges.len() >= target {
            break;
        }
        g.edges.insert(e);
    }
}

fn random_pseudo_forest(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut labels: Vec<usize> = (1..=n).collect();
    labels.shuffle(rng);
    let mut g = Graph::empty(n);
    let mut rest = &labels[..];
    while !rest.is_empty() {
        let size = rng.gen_range(1..=rest.len());
        let (block, tail) = rest.split_at(size);
        rest = tail;
        let tree = random_tree(size, rng);
        let mut piece = tree.clone();
        if size >= 3 && rng.gen_bool(0.5) {
            add_random_edges(&mut piece, size, rng);
        }
        for (i, j) in piece.edges() {
            let (a, b) = (block[i - 1], block[j - 1]);
            g.edges.insert((a.min(b), a.max(b)));
        }
    }
    g
}

fn random_min_degree(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Graph, GraphError> {
    for _ in 0..REJECTION_ATTEMPTS {
        let mut g = Graph::empty(n);
        let p = rng.gen_range(0.2..0.9);
        for i in 1..=n {
            for j in i + 1..=n {
                if rng.gen_bool(p) {
                    g.edges.insert((i, j));
                }
            }
        }
        // top up deficient vertices with random partners
        for v in 1..=n {
            let mut others: Vec<usize> = (1..=n).filter(|&w| w != v).collect();
            others.shuffle(rng);
            for w in others {
                if g.degree(v) >= d {
                    break;
                }
                g.edges.insert((v.min(w), v.max(w)));
            }
        }
        if g.min_degree() >= d {
            return Ok(g);
        }
    }
    Err(GraphError::InfeasibleFamily(format!("no graph with min degree {d} on {n} vertices found")))
}

/// Every labeled simple graph on `n` vertices, in edge-bitmask order.
pub fn all_graphs(n: usize) -> Result<impl Iterator<Item = Graph>, GraphError> {
    if n > ENUMERATION_MAX {
        return Err(GraphError::TooLarge { limit: ENUMERATION_MAX, n });
    }
    let slots: Vec<(usize, usize)> = complete(n.max(1)).edge_vec();
    let total = 1u64 << slots.len();
    Ok((0..total).map(move |mask| Graph {
        n: n.max(1),
        edges: slots
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect(),
    }))
}

pub fn connected_graphs(n: usize) -> Result<impl Iterator<Item = Graph>, GraphError> {
    Ok(all_graphs(n)?.filter(is_connected))
}

/// Planarity by forbidden-minor search (no `K_5` or `K_{3,3}` minor).
/// Only available for at most [`SMALL_SEARCH_MAX`] vertices.
pub fn is_planar_small(g: &Graph) -> Option<bool> {
    let (n, m) = (g.n, g.edge_count());
    if n <= 4 || m <= 8 {
        return Some(true);
    }
    if m > 3 * n - 6 {
        return Some(false);
    }
    if n > SMALL_SEARCH_MAX {
        return None;
    }
    let adj = g.adjacency();
    Some(!has_minor(&adj, n, 5, &is_k5_pattern) && !has_minor(&adj, n, 6, &is_k33_pattern))
}

fn is_k5_pattern(touch: &[Vec<bool>]) -> bool {
    (0..5).all(|a| (a + 1..5).all(|b| touch[a][b]))
}

fn is_k33_pattern(touch: &[Vec<bool>]) -> bool {
    // choose the side containing block 0
    for b in 1..6 {
        for c in b + 1..6 {
            let left = [0, b, c];
            let right: Vec<usize> = (0..6).filter(|x| !left.contains(x)).collect();
            if left.iter().all(|&l| right.iter().all(|&r| touch[l][r])) {
                return true;
            }
        }
    }
    false
}

/// Tries every assignment of vertices to `k` branch sets (or to none), in
/// restricted-growth form so each set partition is visited once.
fn has_minor(adj: &[Vec<bool>], n: usize, k: usize, pattern: &dyn Fn(&[Vec<bool>]) -> bool) -> bool {
    fn rec(
        v: usize,
        used: usize,
        assign: &mut Vec<usize>,
        adj: &[Vec<bool>],
        n: usize,
        k: usize,
        pattern: &dyn Fn(&[Vec<bool>]) -> bool,
    ) -> bool {
        if k - used > n + 1 - v {
            return false;
        }
        if v > n {
            return used == k && check_branch_sets(assign, adj, n, k, pattern);
        }
        for label in 0..=(used + 1).min(k) {
            assign[v] = label;
            let next_used = if label == used + 1 { used + 1 } else { used };
            if rec(v + 1, next_used, assign, adj, n, k, pattern) {
                return true;
            }
        }
        false
    }
    let mut assign = vec![0usize; n + 1];
    rec(1, 0, &mut assign, adj, n, k, pattern)
}

fn check_branch_sets(
    assign: &[usize],
    adj: &[Vec<bool>],
    n: usize,
    k: usize,
    pattern: &dyn Fn(&[Vec<bool>]) -> bool,
) -> bool {
    for b in 1..=k {
        let members: Vec<usize> = (1..=n).filter(|&v| assign[v] == b).collect();
        let mut seen = vec![false; n + 1];
        seen[members[0]] = true;
        let mut stack = vec![members[0]];
        while let Some(v) = stack.pop() {
            for &w in &members {
                if adj[v][w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if members.iter().any(|&v| !seen[v]) {
            return false;
        }
    }
    let mut touch = vec![vec![false; k]; k];
    for v in 1..=n {
        for w in 1..=n {
            let (a, b) = (assign[v], assign[w]);
            if adj[v][w] && a > 0 && b > 0 && a != b {
                touch[a - 1][b - 1] = true;
            }
        }
    }
    pattern(&touch)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_edge_list_examples() {
        let g = parse_graph("3 2\n1 2\n2 3", GraphFormat::EdgeList).unwrap();
        assert_eq!(g, path(3));
        let g = parse_graph("2 1\n1 2", GraphFormat::EdgeList).unwrap();
        assert_eq!(g.edge_vec(), vec![(1, 2)]);
        let hex = parse_graph(
            "6 9\n1 2\n2 3\n3 4\n4 5\n5 6\n1 6\n1 3\n1 4\n1 5",
            GraphFormat::EdgeList,
        )
        .unwrap();
        assert_eq!(hex.n(), 6);
        assert_eq!(hex.edge_count(), 9);
        assert!(hex.has_edge(6, 1) && hex.has_edge(1, 4));
    }

    #[test]
    fn parse_errors_are_distinct() {
        let el = GraphFormat::EdgeList;
        assert!(matches!(parse_graph("3 1\n1 x", el), Err(GraphError::Malformed { line: 2, .. })));
        assert!(matches!(parse_graph("3 1\n1 4", el), Err(GraphError::LabelOutOfRange { label: 4, .. })));
        assert!(matches!(parse_graph("3 1\n0 2", el), Err(GraphError::LabelOutOfRange { label: 0, .. })));
        assert!(matches!(parse_graph("3 1\n2 2", el), Err(GraphError::Loop { label: 2, .. })));
        assert!(matches!(
            parse_graph("3 2\n1 2\n2 1", el),
            Err(GraphError::DuplicateEdge { line: 3, i: 1, j: 2 })
        ));
        assert!(matches!(parse_graph("3 2\n1 2", el), Err(GraphError::Malformed { .. })));
        assert!(matches!(parse_graph("3 0\n1 2", el), Err(GraphError::Malformed { line: 2, .. })));
        assert!(matches!(parse_graph("", el), Err(GraphError::Malformed { .. })));
        let js = GraphFormat::Json;
        assert!(matches!(parse_graph("{\"n\":2}", js), Err(GraphError::Json(_))));
        assert!(matches!(parse_graph("{\"n\":2,\"edges\":[[1,1]]}", js), Err(GraphError::Loop { .. })));
        assert!(matches!(
            parse_graph("{\"n\":2,\"edges\":[[1,3]]}", js),
            Err(GraphError::LabelOutOfRange { .. })
        ));
    }

    #[test]
    fn json_roundtrip_and_sniffing() {
        let g = complete(4);
        let text = g.to_json();
        assert_eq!(text, "{\"n\":4,\"edges\":[[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]]}");
        assert_eq!(GraphFormat::sniff(&text), GraphFormat::Json);
        assert_eq!(parse_graph(&text, GraphFormat::Json).unwrap(), g);
        assert_eq!(GraphFormat::sniff("4 0\n"), GraphFormat::EdgeList);
    }

    #[test]
    fn components_examples() {
        let g = Graph::new(4, [(1, 2), (3, 4)]).unwrap();
        let d = connected_components(&g);
        assert_eq!(d.components.len(), 2);
        assert!(d.components.iter().all(|c| c.graph == path(2)));
        assert_eq!(d.components[1].vertices, vec![3, 4]);

        let d = connected_components(&complete(4));
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.components[0].graph, complete(4));

        let d = connected_components(&Graph::new(3, [(1, 2)]).unwrap());
        assert_eq!(d.components.len(), 2);
        assert_eq!(d.components[1].graph, Graph::empty(1));
        assert_eq!(d.components[1].original_label(1), 3);
    }

    #[test]
    fn classify_examples() {
        let c4 = cycle(4).unwrap();
        let k = classify(&c4);
        assert!(k.is_unicyclic && k.is_pseudo_forest && !k.is_tree);
        let k = classify(&complete(4));
        assert!(k.is_complete && !k.is_k4_free);
        assert_eq!(k.vertex_connectivity, Some(3));
        let k = classify(&path(4));
        assert!(k.is_tree && k.is_closed_under_labeling);
    }

    #[test]
    fn closedness_examples() {
        for n in 1..=7 {
            assert!(is_closed_labeling(&complete(n)));
        }
        let c4 = cycle(4).unwrap();
        assert!(!is_closed_labeling(&c4));
        assert_eq!(closedness_violation(&c4), Some((1, 2, 4)));
        for n in 4..=8 {
            assert!(!is_closed_labeling(&cycle(n).unwrap()));
        }
        assert!(is_closed_labeling(&path(3)));
        // 1-3-2 is a path but 1,3 and 2,3 adjacent while 1,2 are not
        let bent = Graph::new(3, [(1, 3), (2, 3)]).unwrap();
        assert_eq!(closedness_violation(&bent), Some((1, 2, 3)));
        let perm = find_closed_labeling(&bent).unwrap().unwrap();
        assert!(is_closed_labeling(&bent.relabel(&perm)));
        assert_eq!(find_closed_labeling(&cycle(4).unwrap()).unwrap(), None);
    }

    #[test]
    fn k4_examples() {
        assert!(has_induced_k4(&complete(4)));
        assert!(!has_induced_k4(&path(6)));
        let mut k5_minus = complete(5);
        k5_minus.edges.remove(&(1, 2));
        assert!(has_induced_k4(&k5_minus));
        assert_eq!(induced_k4s(&k5_minus), vec![[1, 3, 4, 5], [2, 3, 4, 5]]);
    }

    #[test]
    fn connectivity_examples() {
        for n in 3..=9 {
            assert_eq!(vertex_connectivity(&cycle(n).unwrap()), Ok(2));
        }
        for seed in 0..5 {
            let t = generate_family(Family::RandomTree { n: 7, seed }).unwrap();
            assert_eq!(vertex_connectivity(&t), Ok(1));
        }
        assert_eq!(vertex_connectivity(&complete(5)), Ok(4));
        assert_eq!(vertex_connectivity(&complete(2)), Ok(1));
        assert_eq!(vertex_connectivity(&Graph::new(3, [(1, 2)]).unwrap()), Err(GraphError::Disconnected));
        assert!(matches!(vertex_connectivity(&Graph::empty(1)), Err(GraphError::TooSmall { .. })));
        // wheel W_5 (hub 1) is 3-connected
        let wheel = Graph::new(6, [(2, 3), (3, 4), (4, 5), (5, 6), (2, 6), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6)])
            .unwrap();
        assert_eq!(vertex_connectivity(&wheel), Ok(3));
    }

    #[test]
    fn leaf_and_handle_examples() {
        assert_eq!(add_leaf(&path(2), 2).unwrap(), path(3));
        let g = add_leaf(&complete(3), 1).unwrap();
        assert_eq!((g.n(), g.edge_count()), (4, 4));
        assert!(g.has_edge(1, 4));
        assert_eq!(add_leaf(&Graph::empty(1), 1).unwrap(), path(2));
        assert!(add_leaf(&path(2), 3).is_err());

        assert_eq!(add_handle(&path(2), 1, 2).unwrap(), complete(3));
        let g = add_handle(&complete(3), 1, 2).unwrap();
        assert_eq!((g.n(), g.edge_count()), (4, 5));
        assert_eq!(add_handle(&path(3), 2, 2), Err(GraphError::DegenerateHandle(2)));
        assert!(add_handle(&path(3), 1, 4).is_err());

        let hexagon = parse_graph("6 9\n1 2\n2 3\n3 4\n4 5\n5 6\n1 6\n1 3\n1 4\n1 5", GraphFormat::EdgeList)
            .unwrap();
        let g_prime = hexagon.induced(&[1, 2, 3, 4, 5]);
        assert_eq!(add_handle(&g_prime, 5, 1).unwrap(), hexagon);
    }

    #[test]
    fn families() {
        assert_eq!(generate_family(Family::Complete(4)).unwrap().edge_count(), 6);
        let t = generate_family(Family::RandomTree { n: 7, seed: 1 }).unwrap();
        assert_eq!(t.edge_count(), 6);
        assert_eq!(t, generate_family(Family::RandomTree { n: 7, seed: 1 }).unwrap());
        let u = generate_family(Family::RandomUnicyclic { n: 6, seed: 2 }).unwrap();
        assert!(is_connected(&u) && u.edge_count() == 6);
        assert!(generate_family(Family::Cycle(2)).is_err());
        assert!(generate_family(Family::RandomConnected { n: 4, m: 2, seed: 0 }).is_err());
        assert!(generate_family(Family::RandomConnected { n: 4, m: 7, seed: 0 }).is_err());
        assert!(generate_family(Family::RandomMinDegree { n: 4, d: 4, seed: 0 }).is_err());
        let g = generate_family(Family::RandomMinDegree { n: 8, d: 4, seed: 5 }).unwrap();
        assert!(g.min_degree() >= 4);
    }

    #[test]
    fn enumeration_counts() {
        // connected labeled graphs: 1, 1, 4, 38, 728 (OEIS A001187)
        let counts: Vec<usize> = (1..=5).map(|n| connected_graphs(n).unwrap().count()).collect();
        assert_eq!(counts, vec![1, 1, 4, 38, 728]);
        assert!(all_graphs(8).is_err());
    }

    #[test]
    fn planarity_small() {
        assert_eq!(is_planar_small(&complete(4)), Some(true));
        assert_eq!(is_planar_small(&complete(5)), Some(false));
        let k33 = Graph::new(6, (1..=3).flat_map(|i| (4..=6).map(move |j| (i, j)))).unwrap();
        assert_eq!(is_planar_small(&k33), Some(false));
        // subdivided K_{3,3}: only detectable through the minor search
        let sub = Graph::new(
            7,
            [(1, 4), (1, 5), (1, 6), (2, 4), (2, 5), (2, 6), (3, 4), (3, 5), (3, 7), (7, 6)],
        )
        .unwrap();
        assert_eq!(is_planar_small(&sub), Some(false));
        let mut k5_minus = complete(5);
        k5_minus.edges.remove(&(1, 2));
        assert_eq!(is_planar_small(&k5_minus), Some(true));
        assert_eq!(is_planar_small(&cycle(8).unwrap()), Some(true));
    }
}
