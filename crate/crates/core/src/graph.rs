//! Immutable undirected simple graphs, vertex sets, induced subgraph views,
//! BFS utilities and the edge-list file format.
//!
//! Vertex ids are dense integers `0..n`. Every derived structure (views,
//! separations, schedules) refers back to these ids, so results computed on
//! a subgraph can always be lifted to the host graph.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

/// Distance value used by [`bfs_distances`] for unreachable vertices.
pub const UNREACHED: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} is out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {to} is unreachable from {from}")]
    Unreachable { from: Vertex, to: Vertex },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: vertex {vertex} out of range (n = {n})")]
    OutOfRange {
        line: usize,
        vertex: Vertex,
        n: usize,
    },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: Vertex },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: Vertex, v: Vertex },
    #[error("expected {expected} edge lines, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("line {line}: invalid rotation for vertex {vertex}: {reason}")]
    Rotation {
        line: usize,
        vertex: Vertex,
        reason: String,
    },
}

/// A finite set of vertex ids, stored sorted and deduplicated.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn range(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn singleton(v: Vertex) -> Self {
        Self(vec![v])
    }

    /// Builds a set from a vector that is already strictly increasing.
    pub(crate) fn from_sorted(members: Vec<Vertex>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self(members)
    }

    /// Collects a set from a membership mask.
    pub fn from_mask(mask: &[bool]) -> Self {
        Self(
            mask.iter()
                .enumerate()
                .filter_map(|(v, &m)| m.then_some(v))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn min(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<Vertex> {
        self.0.last().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        VertexSet(out)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(
            self.0
                .iter()
                .copied()
                .filter(|&v| !other.contains(v))
                .collect(),
        )
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(
            self.0
                .iter()
                .copied()
                .filter(|&v| other.contains(v))
                .collect(),
        )
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| !other.contains(v))
    }

    /// Checks every member against a host graph of `n` vertices.
    pub fn check_range(&self, n: usize) -> Result<(), GraphError> {
        match self.max() {
            Some(v) if v >= n => Err(GraphError::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }

    /// Union of many sets.
    pub fn union_all<'a>(sets: impl IntoIterator<Item = &'a VertexSet>) -> VertexSet {
        let mut all: Vec<Vertex> = sets.into_iter().flat_map(|s| s.iter()).collect();
        all.sort_unstable();
        all.dedup();
        VertexSet(all)
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut v: Vec<Vertex> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a Vertex;
    type IntoIter = std::slice::Iter<'a, Vertex>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Undirected simple graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl Graph {
    /// Graph with `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph, rejecting out-of-range ids, self-loops and duplicate edges.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Self {
            adj,
            edge_count: edges.len(),
        })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n()
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::range(self.n())
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || connected_components(self).len() == 1
    }

    /// Connected and acyclic.
    pub fn is_tree(&self) -> bool {
        self.n() >= 1 && self.m() + 1 == self.n() && self.is_connected()
    }
}

/// The subgraph induced by a vertex subset of a host graph, with local ids
/// `0..kept.len()` assigned in increasing global order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphView {
    graph: Graph,
    global: Vec<Vertex>,
    host_n: usize,
}

impl SubgraphView {
    /// Local graph of the view.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.global.len()
    }

    pub fn is_empty(&self) -> bool {
        self.global.is_empty()
    }

    pub fn host_n(&self) -> usize {
        self.host_n
    }

    /// Global id of a local vertex.
    pub fn to_global(&self, local: Vertex) -> Vertex {
        self.global[local]
    }

    /// Local id of a global vertex, if kept.
    pub fn to_local(&self, global: Vertex) -> Option<Vertex> {
        self.global.binary_search(&global).ok()
    }

    /// Kept vertices, as global ids.
    pub fn kept(&self) -> VertexSet {
        VertexSet::from_sorted(self.global.clone())
    }

    /// Maps a set of local ids to global ids.
    pub fn lift(&self, local: &VertexSet) -> VertexSet {
        VertexSet::from_sorted(local.iter().map(|v| self.global[v]).collect())
    }

    /// Maps a set of global ids to local ids, dropping vertices outside the view.
    pub fn lower(&self, global: &VertexSet) -> VertexSet {
        VertexSet::from_sorted(global.iter().filter_map(|v| self.to_local(v)).collect())
    }

    /// Sub-view induced by a set of local ids; the result still maps to host ids.
    pub fn restrict(&self, local: &VertexSet) -> Result<SubgraphView, GraphError> {
        let inner = induced_subgraph(&self.graph, local)?;
        Ok(SubgraphView {
            global: inner.global.iter().map(|&v| self.global[v]).collect(),
            graph: inner.graph,
            host_n: self.host_n,
        })
    }
}

/// Induced subgraph `G[S]`.
pub fn induced_subgraph(g: &Graph, s: &VertexSet) -> Result<SubgraphView, GraphError> {
    s.check_range(g.n())?;
    let global = s.as_slice().to_vec();
    let mut adj = Vec::with_capacity(global.len());
    let mut twice_m = 0;
    for &u in &global {
        let list: Vec<Vertex> = g
            .neighbors(u)
            .iter()
            .filter_map(|w| global.binary_search(w).ok())
            .collect();
        twice_m += list.len();
        adj.push(list);
    }
    Ok(SubgraphView {
        graph: Graph {
            adj,
            edge_count: twice_m / 2,
        },
        global,
        host_n: g.n(),
    })
}

/// `S` together with every vertex adjacent to some member of `S`.
pub fn closed_neighborhood(g: &Graph, s: &VertexSet) -> Result<VertexSet, GraphError> {
    s.check_range(g.n())?;
    let mut mask = vec![false; g.n()];
    for v in s.iter() {
        mask[v] = true;
        for &w in g.neighbors(v) {
            mask[w] = true;
        }
    }
    Ok(VertexSet::from_mask(&mask))
}

/// Connected components ordered by their minimum vertex.
pub fn connected_components(g: &Graph) -> Vec<VertexSet> {
    let mut label = vec![usize::MAX; g.n()];
    let mut comps = Vec::new();
    let mut queue = VecDeque::new();
    for start in g.vertices() {
        if label[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        label[start] = id;
        queue.push_back(start);
        let mut members = Vec::new();
        while let Some(u) = queue.pop_front() {
            members.push(u);
            for &w in g.neighbors(u) {
                if label[w] == usize::MAX {
                    label[w] = id;
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        comps.push(VertexSet::from_sorted(members));
    }
    comps
}

/// Components of `G - removed`, ordered by minimum vertex. `removed` is a mask over `V(G)`.
pub fn components_avoiding(g: &Graph, removed: &[bool]) -> Vec<VertexSet> {
    let mut seen = removed.to_vec();
    let mut comps = Vec::new();
    let mut queue = VecDeque::new();
    for start in g.vertices() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut members = Vec::new();
        while let Some(u) = queue.pop_front() {
            members.push(u);
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        comps.push(VertexSet::from_sorted(members));
    }
    comps
}

/// Single-source BFS distances; unreachable vertices get [`UNREACHED`].
pub fn bfs_distances(g: &Graph, source: Vertex) -> Vec<usize> {
    let mut dist = vec![UNREACHED; g.n()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w] == UNREACHED {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// BFS layers from `root`: `layers[i]` holds the vertices at distance `i`.
pub fn bfs_layers(g: &Graph, root: Vertex) -> Vec<Vec<Vertex>> {
    let dist = bfs_distances(g, root);
    let mut layers: Vec<Vec<Vertex>> = Vec::new();
    for v in g.vertices() {
        let d = dist[v];
        if d == UNREACHED {
            continue;
        }
        if layers.len() <= d {
            layers.resize_with(d + 1, Vec::new);
        }
        layers[d].push(v);
    }
    layers
}

/// Exact diameter by BFS from every vertex. The empty graph has diameter 0.
pub fn diameter(g: &Graph) -> Result<usize, GraphError> {
    let mut best = 0;
    for v in g.vertices() {
        let dist = bfs_distances(g, v);
        for &d in &dist {
            if d == UNREACHED {
                return Err(GraphError::Disconnected);
            }
            best = best.max(d);
        }
    }
    Ok(best)
}

/// The lexicographically smallest shortest `u`-`v` path: at every step the
/// smallest neighbor id that stays on a shortest path is taken.
pub fn shortest_path(g: &Graph, u: Vertex, v: Vertex) -> Result<Vec<Vertex>, GraphError> {
    for w in [u, v] {
        if w >= g.n() {
            return Err(GraphError::VertexOutOfRange {
                vertex: w,
                n: g.n(),
            });
        }
    }
    let dist = bfs_distances(g, v);
    path_along(g, &dist, u).ok_or(GraphError::Unreachable { from: u, to: v })
}

/// Walks from `from` down a distance field towards its zero, preferring small ids.
pub(crate) fn path_along(g: &Graph, dist_to_target: &[usize], from: Vertex) -> Option<Vec<Vertex>> {
    if dist_to_target[from] == UNREACHED {
        return None;
    }
    let mut path = vec![from];
    let mut cur = from;
    while dist_to_target[cur] > 0 {
        let want = dist_to_target[cur] - 1;
        cur = *g
            .neighbors(cur)
            .iter()
            .find(|&&w| dist_to_target[w] == want)?;
        path.push(cur);
    }
    Some(path)
}

/// Clockwise neighbor order at every vertex of an embedded graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Rotation(pub Vec<Vec<Vertex>>);

impl Rotation {
    pub fn order(&self, v: Vertex) -> &[Vertex] {
        &self.0[v]
    }

    /// Checks that each vertex lists exactly its neighbors, once each.
    pub fn matches(&self, g: &Graph) -> bool {
        self.0.len() == g.n()
            && g.vertices().all(|v| {
                let mut sorted = self.0[v].clone();
                sorted.sort_unstable();
                sorted == g.neighbors(v)
            })
    }

    /// Rotation of a host graph restricted to a view, in local ids.
    pub fn restrict(&self, view: &SubgraphView) -> Rotation {
        Rotation(
            (0..view.len())
                .map(|local| {
                    self.0[view.to_global(local)]
                        .iter()
                        .filter_map(|&w| view.to_local(w))
                        .collect()
                })
                .collect(),
        )
    }
}

/// A parsed graph file: the graph plus an optional rotation system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Graph,
    pub rotation: Option<Rotation>,
}

/// Parses an edge-list document into a graph, ignoring any rotation section.
pub fn load_graph(text: &str) -> Result<Graph, ParseError> {
    parse_graph_file(text).map(|f| f.graph)
}

/// Parses the edge-list format:
///
/// ```text
/// n m
/// u v          (m lines)
/// rotation     (optional section)
/// v w1 w2 ...  (n lines, clockwise neighbor order of v)
/// ```
///
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_graph_file(text: &str) -> Result<GraphFile, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = lines.next().ok_or(ParseError::Malformed {
        line: 1,
        reason: "missing header line \"n m\"".into(),
    })?;
    let header = parse_numbers(line_no, header)?;
    let [n, m] = header[..] else {
        return Err(ParseError::Malformed {
            line: line_no,
            reason: format!(
                "header must contain exactly two numbers, found {}",
                header.len()
            ),
        });
    };

    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut found = 0;
    let mut rotation_header = None;
    for (line_no, line) in lines.by_ref() {
        if found == m {
            rotation_header = Some((line_no, line));
            break;
        }
        let nums = parse_numbers(line_no, line)?;
        let [u, v] = nums[..] else {
            return Err(ParseError::Malformed {
                line: line_no,
                reason: format!("edge line must contain two ids, found {}", nums.len()),
            });
        };
        for w in [u, v] {
            if w >= n {
                return Err(ParseError::OutOfRange {
                    line: line_no,
                    vertex: w,
                    n,
                });
            }
        }
        if u == v {
            return Err(ParseError::SelfLoop {
                line: line_no,
                vertex: u,
            });
        }
        if adj[u].contains(&v) {
            return Err(ParseError::DuplicateEdge {
                line: line_no,
                u,
                v,
            });
        }
        adj[u].push(v);
        adj[v].push(u);
        found += 1;
    }
    if found < m {
        return Err(ParseError::EdgeCount { expected: m, found });
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let graph = Graph { adj, edge_count: m };

    let rotation = match rotation_header {
        None => None,
        Some((line_no, "rotation")) => Some(parse_rotation(&graph, line_no, lines)?),
        Some((line_no, _)) => {
            return Err(ParseError::Malformed {
                line: line_no,
                reason: format!(
                    "expected {m} edge lines followed by an optional \"rotation\" section"
                ),
            })
        }
    };
    Ok(GraphFile { graph, rotation })
}

fn parse_rotation<'a>(
    g: &Graph,
    header_line: usize,
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<Rotation, ParseError> {
    let n = g.n();
    let mut orders: Vec<Option<Vec<Vertex>>> = vec![None; n];
    let mut last_line = header_line;
    for (line_no, line) in lines {
        last_line = line_no;
        let nums = parse_numbers(line_no, line)?;
        let Some((&v, order)) = nums.split_first() else {
            continue;
        };
        if v >= n {
            return Err(ParseError::OutOfRange {
                line: line_no,
                vertex: v,
                n,
            });
        }
        if orders[v].is_some() {
            return Err(ParseError::Rotation {
                line: line_no,
                vertex: v,
                reason: "listed twice".into(),
            });
        }
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != g.neighbors(v) {
            return Err(ParseError::Rotation {
                line: line_no,
                vertex: v,
                reason: "order is not a permutation of the neighbors".into(),
            });
        }
        orders[v] = Some(order.to_vec());
    }
    let mut out = Vec::with_capacity(n);
    for (v, order) in orders.into_iter().enumerate() {
        match order {
            Some(o) => out.push(o),
            None if g.degree(v) == 0 => out.push(Vec::new()),
            None => {
                return Err(ParseError::Rotation {
                    line: last_line,
                    vertex: v,
                    reason: "missing".into(),
                })
            }
        }
    }
    Ok(Rotation(out))
}

fn parse_numbers(line: usize, text: &str) -> Result<Vec<usize>, ParseError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| ParseError::Malformed {
                line,
                reason: format!("not a vertex id: {tok:?}"),
            })
        })
        .collect()
}

/// Writes the edge-list format accepted by [`parse_graph_file`].
pub fn write_graph_file(g: &Graph, rotation: Option<&Rotation>) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    if let Some(rot) = rotation {
        out.push_str("rotation\n");
        for (v, order) in rot.0.iter().enumerate() {
            write!(out, "{v}").unwrap();
            for w in order {
                write!(out, " {w}").unwrap();
            }
            out.push('\n');
        }
    }
    out
}
