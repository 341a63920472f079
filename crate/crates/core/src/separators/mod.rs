//! Balanced vertex separators.
//!
//! A separation of a vertex set `V` is a triple `(A, B, S)` partitioning `V`
//! such that no edge joins `A` and `B`, `|S|` is within a size budget and
//! both `A` and `B` hold at most an `alpha` fraction of `V`.
//!
//! Every concrete algorithm here works on a connected graph with local ids.
//! [`Strategy`] wraps them for arbitrary induced subgraphs: it separates the
//! largest component and regroups the remaining pieces, so that the separator
//! it returns is never empty for a nonempty input.

mod bfs_level;
mod centroid;
mod exact;
mod hyperbolic;
mod planar;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    connected_components, Graph, GraphError, Rotation, SubgraphView, Vertex, VertexSet,
};

pub use bfs_level::bfs_level_separator;
pub use centroid::tree_centroid_separator;
pub use exact::exact_min_balanced_separator;
pub use hyperbolic::{
    hyperbolic_sector_separator, parse_coordinates, write_coordinates, PolarPoint,
};
pub use planar::{check_embedding, planar_cycle_separator};

/// Default cap on the vertex count handed to the exhaustive search.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeparatorError {
    #[error("exhaustive search capped at {cap} vertices, input has {n}")]
    CapExceeded { n: usize, cap: usize },
    #[error("no valid separation exists")]
    NoSeparation,
    #[error("input is not a tree")]
    NotATree,
    #[error("input is disconnected")]
    Disconnected,
    #[error("no balanced BFS level cut on {n} vertices and exhaustive fallback unavailable")]
    NoBalancedLevel { n: usize },
    #[error("rotation system does not match the graph's adjacency")]
    InconsistentRotation,
    #[error(
        "rotation system is not planar (Euler characteristic {characteristic} on a component)"
    )]
    NonPlanar { characteristic: i64 },
    #[error("no balanced fundamental cycle found")]
    RefinementFailed,
    #[error("expected coordinates for {expected} vertices, found {found}")]
    MissingCoordinates { expected: usize, found: usize },
    #[error("strategy {0} needs a rotation system or coordinates it was not given")]
    MissingInput(StrategyKind),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Rational balance parameter: each side may hold at most `num/den` of the vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Balance {
    pub num: usize,
    pub den: usize,
}

impl Balance {
    pub const TWO_THIRDS: Balance = Balance { num: 2, den: 3 };

    /// `size <= (num/den) * total`, in exact integer arithmetic.
    pub fn admits(&self, size: usize, total: usize) -> bool {
        size * self.den <= self.num * total
    }
}

impl Default for Balance {
    fn default() -> Self {
        Self::TWO_THIRDS
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationResult {
    pub a: VertexSet,
    pub b: VertexSet,
    pub s: VertexSet,
    pub alpha: Balance,
}

impl SeparationResult {
    pub fn new(a: VertexSet, b: VertexSet, s: VertexSet) -> Self {
        Self {
            a,
            b,
            s,
            alpha: Balance::TWO_THIRDS,
        }
    }

    fn lift(&self, view: &SubgraphView) -> SeparationResult {
        SeparationResult {
            a: view.lift(&self.a),
            b: view.lift(&self.b),
            s: view.lift(&self.s),
            alpha: self.alpha,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    OutOfRange(Vertex),
    Overlap(Vertex),
    Missing(Vertex),
    SeparatorTooLarge {
        size: usize,
        bound: usize,
    },
    Unbalanced {
        side: Side,
        size: usize,
        total: usize,
    },
    CrossingEdge(Vertex, Vertex),
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `r` as an `(s_bound, r.alpha)`-separation of the whole of `g`.
/// Violations are reported, never raised.
pub fn validate_separation(g: &Graph, r: &SeparationResult, s_bound: usize) -> ValidationReport {
    let n = g.n();
    let mut violations = Vec::new();
    // 0 = unassigned, 1 = A, 2 = B, 3 = S
    let mut owner = vec![0u8; n];
    for (tag, set) in [(1u8, &r.a), (2, &r.b), (3, &r.s)] {
        for v in set.iter() {
            if v >= n {
                violations.push(Violation::OutOfRange(v));
            } else if owner[v] != 0 {
                violations.push(Violation::Overlap(v));
            } else {
                owner[v] = tag;
            }
        }
    }
    violations.extend(
        owner
            .iter()
            .enumerate()
            .filter(|(_, &o)| o == 0)
            .map(|(v, _)| Violation::Missing(v)),
    );
    if r.s.len() > s_bound {
        violations.push(Violation::SeparatorTooLarge {
            size: r.s.len(),
            bound: s_bound,
        });
    }
    for (side, set) in [(Side::A, &r.a), (Side::B, &r.b)] {
        if !r.alpha.admits(set.len(), n) {
            violations.push(Violation::Unbalanced {
                side,
                size: set.len(),
                total: n,
            });
        }
    }
    for a in r.a.iter().filter(|&a| a < n) {
        for &w in g.neighbors(a) {
            if owner[w] == 2 && r.b.contains(w) {
                violations.push(Violation::CrossingEdge(a, w));
            }
        }
    }
    ValidationReport { violations }
}

/// Validates a separation given in host ids against the subgraph a view induces.
pub fn validate_on_view(
    view: &SubgraphView,
    r: &SeparationResult,
    s_bound: usize,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    for set in [&r.a, &r.b, &r.s] {
        for v in set.iter() {
            if view.to_local(v).is_none() {
                report.violations.push(Violation::OutOfRange(v));
            }
        }
    }
    let local = SeparationResult {
        a: view.lower(&r.a),
        b: view.lower(&r.b),
        s: view.lower(&r.s),
        alpha: r.alpha,
    };
    let inner = validate_separation(view.graph(), &local, s_bound);
    report
        .violations
        .extend(inner.violations.into_iter().map(|v| match v {
            Violation::OutOfRange(x) => Violation::OutOfRange(view.to_global(x)),
            Violation::Overlap(x) => Violation::Overlap(view.to_global(x)),
            Violation::Missing(x) => Violation::Missing(view.to_global(x)),
            Violation::CrossingEdge(x, y) => {
                Violation::CrossingEdge(view.to_global(x), view.to_global(y))
            }
            other => other,
        }));
    report
}

/// Largest-first greedy grouping of mutually non-adjacent pieces into two
/// sides; each piece goes to the currently smaller side (ties to `A`).
/// Pieces of equal size are taken in order of their minimum vertex.
pub fn group_pieces(mut pieces: Vec<VertexSet>) -> (VertexSet, VertexSet) {
    pieces.retain(|p| !p.is_empty());
    pieces.sort_by(|x, y| y.len().cmp(&x.len()).then(x.min().cmp(&y.min())));
    let (mut a, mut b): (Vec<&VertexSet>, Vec<&VertexSet>) = (Vec::new(), Vec::new());
    let (mut size_a, mut size_b) = (0, 0);
    for p in &pieces {
        if size_a <= size_b {
            size_a += p.len();
            a.push(p);
        } else {
            size_b += p.len();
            b.push(p);
        }
    }
    (VertexSet::union_all(a), VertexSet::union_all(b))
}

/// Builds a separation from a separator by grouping the components of `G - S`.
/// Returns `None` when some component is too large for either side.
pub(crate) fn separation_from_separator(
    g: &Graph,
    s: VertexSet,
    alpha: Balance,
) -> Option<SeparationResult> {
    let mut removed = vec![false; g.n()];
    for v in s.iter() {
        removed[v] = true;
    }
    let pieces = crate::graph::components_avoiding(g, &removed);
    if pieces.iter().any(|p| !alpha.admits(p.len(), g.n())) {
        return None;
    }
    let (a, b) = group_pieces(pieces);
    Some(SeparationResult { a, b, s, alpha })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    Exact,
    TreeCentroid,
    BfsLevel,
    PlanarCycle,
    HyperbolicSector,
}

impl std::fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StrategyKind::Exact => "exact",
            StrategyKind::TreeCentroid => "tree-centroid",
            StrategyKind::BfsLevel => "bfs-level",
            StrategyKind::PlanarCycle => "planar-cycle",
            StrategyKind::HyperbolicSector => "hyperbolic-sector",
        })
    }
}

impl std::str::FromStr for StrategyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "exact" => StrategyKind::Exact,
            "tree-centroid" => StrategyKind::TreeCentroid,
            "bfs-level" => StrategyKind::BfsLevel,
            "planar-cycle" => StrategyKind::PlanarCycle,
            "hyperbolic-sector" => StrategyKind::HyperbolicSector,
            other => return Err(format!("unknown separator strategy {other:?}")),
        })
    }
}

/// A separation algorithm together with the per-graph data it needs.
/// Rotation systems and coordinates are indexed by host vertex id.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    Exact { cap: usize },
    TreeCentroid,
    BfsLevel { cap: usize },
    PlanarCycle { rotation: Rotation },
    HyperbolicSector { coords: Vec<PolarPoint>, cap: usize },
}

impl Strategy {
    pub fn kind(&self) -> StrategyKind {
        match self {
            Strategy::Exact { .. } => StrategyKind::Exact,
            Strategy::TreeCentroid => StrategyKind::TreeCentroid,
            Strategy::BfsLevel { .. } => StrategyKind::BfsLevel,
            Strategy::PlanarCycle { .. } => StrategyKind::PlanarCycle,
            Strategy::HyperbolicSector { .. } => StrategyKind::HyperbolicSector,
        }
    }

    /// Assembles a strategy of the given kind, checking that kinds needing
    /// geometric side data receive it.
    pub fn from_kind(
        kind: StrategyKind,
        rotation: Option<Rotation>,
        coords: Option<Vec<PolarPoint>>,
    ) -> Result<Strategy, SeparatorError> {
        let cap = DEFAULT_EXHAUSTIVE_CAP;
        Ok(match kind {
            StrategyKind::Exact => Strategy::Exact { cap },
            StrategyKind::TreeCentroid => Strategy::TreeCentroid,
            StrategyKind::BfsLevel => Strategy::BfsLevel { cap },
            StrategyKind::PlanarCycle => Strategy::PlanarCycle {
                rotation: rotation.ok_or(SeparatorError::MissingInput(kind))?,
            },
            StrategyKind::HyperbolicSector => Strategy::HyperbolicSector {
                coords: coords.ok_or(SeparatorError::MissingInput(kind))?,
                cap,
            },
        })
    }

    /// Separates a whole graph.
    pub fn separate(&self, g: &Graph) -> Result<SeparationResult, SeparatorError> {
        let view = crate::graph::induced_subgraph(g, &g.vertex_set())?;
        self.separate_view(&view)
    }

    /// Separates the subgraph induced by a view; the result is in host ids.
    pub fn separate_view(&self, view: &SubgraphView) -> Result<SeparationResult, SeparatorError> {
        let g = view.graph();
        if g.n() == 0 {
            return Ok(SeparationResult::new(
                VertexSet::new(),
                VertexSet::new(),
                VertexSet::new(),
            ));
        }
        let comps = connected_components(g);
        if comps.len() == 1 {
            return Ok(self.separate_connected(view)?.lift(view));
        }
        let largest = comps
            .iter()
            .enumerate()
            .max_by(|(i, x), (j, y)| x.len().cmp(&y.len()).then(j.cmp(i)))
            .map(|(i, _)| i)
            .expect("nonempty graph has a component");
        let mut pieces: Vec<VertexSet> = Vec::with_capacity(comps.len() + 1);
        let s = if comps[largest].len() == 1 {
            comps[largest].clone()
        } else {
            let sub = view.restrict(&comps[largest])?;
            let inner = self.separate_connected(&sub)?;
            // back to the outer view's local ids
            let to_outer = |set: &VertexSet| -> VertexSet {
                set.iter()
                    .map(|v| {
                        view.to_local(sub.to_global(v))
                            .expect("sub-view is inside view")
                    })
                    .collect()
            };
            pieces.push(to_outer(&inner.a));
            pieces.push(to_outer(&inner.b));
            to_outer(&inner.s)
        };
        pieces.extend(
            comps
                .into_iter()
                .enumerate()
                .filter(|(i, _)| *i != largest)
                .map(|(_, c)| c),
        );
        let (a, b) = group_pieces(pieces);
        Ok(SeparationResult::new(a, b, s).lift(view))
    }

    /// Runs the kind-specific algorithm on a connected view; result in the view's local ids.
    fn separate_connected(&self, view: &SubgraphView) -> Result<SeparationResult, SeparatorError> {
        let g = view.graph();
        match self {
            Strategy::Exact { cap } => exact_min_balanced_separator(g, Balance::TWO_THIRDS, *cap),
            Strategy::TreeCentroid => tree_centroid_separator(g),
            Strategy::BfsLevel { cap } => bfs_level_separator(g, *cap),
            Strategy::PlanarCycle { rotation } => {
                planar_cycle_separator(g, &rotation.restrict(view))
            }
            Strategy::HyperbolicSector { coords, cap } => {
                if coords.len() != view.host_n() {
                    return Err(SeparatorError::MissingCoordinates {
                        expected: view.host_n(),
                        found: coords.len(),
                    });
                }
                let local: Vec<PolarPoint> =
                    (0..view.len()).map(|v| coords[view.to_global(v)]).collect();
                hyperbolic_sector_separator(g, &local, *cap)
            }
        }
    }
}

#[cfg(test)]
pub(crate) mod test_graphs {
    use crate::graph::{Graph, Rotation};

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|l| (0, l)).collect();
        Graph::from_edges(leaves + 1, &edges).unwrap()
    }

    pub fn grid_with_rotation(k: usize) -> (Graph, Rotation) {
        let g = crate::generators::gen_grid(k);
        let rot = crate::generators::grid_rotation(k);
        (g, rot)
    }
}
