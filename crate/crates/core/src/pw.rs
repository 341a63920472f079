//! Path decompositions and the bag-sweep cop strategy built on them.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{bfs_layers, Graph, ParseError, Vertex, VertexSet};
use crate::schedule::{
    realize_edge_phases, Algorithm, Event, Model, Phase, Round, Schedule, ScheduleStats,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PwError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not a tree")]
    NotATree,
    #[error("graph is empty")]
    EmptyGraph,
    #[error("invalid path decomposition: {0:?}")]
    Invalid(Vec<DecompositionViolation>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PathDecomposition {
    pub bags: Vec<VertexSet>,
}

impl PathDecomposition {
    pub fn new(bags: Vec<VertexSet>) -> Self {
        Self { bags }
    }

    /// `max |B_i| - 1`; 0 for no bags.
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(VertexSet::len)
            .max()
            .unwrap_or(1)
            .saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// One bag per line, ids separated by spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for bag in &self.bags {
            let ids: Vec<String> = bag.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", ids.join(" ")).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut bags = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bag: Result<VertexSet, _> =
                line.split_whitespace().map(str::parse::<Vertex>).collect();
            bags.push(bag.map_err(|e| ParseError::Malformed {
                line: i + 1,
                reason: e.to_string(),
            })?);
        }
        Ok(Self { bags })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecompositionViolation {
    VertexOutOfRange(Vertex),
    UncoveredVertex(Vertex),
    UncoveredEdge(Vertex, Vertex),
    /// The vertex leaves the bags and comes back.
    NotContiguous(Vertex),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub violations: Vec<DecompositionViolation>,
    pub width: usize,
}

impl DecompositionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_path_decomposition(g: &Graph, d: &PathDecomposition) -> DecompositionReport {
    let n = g.n();
    let mut violations = Vec::new();
    let mut first = vec![usize::MAX; n];
    let mut last = vec![0; n];
    let mut count = vec![0; n];
    for (i, bag) in d.bags.iter().enumerate() {
        for v in bag.iter() {
            if v >= n {
                violations.push(DecompositionViolation::VertexOutOfRange(v));
                continue;
            }
            first[v] = first[v].min(i);
            last[v] = i;
            count[v] += 1;
        }
    }
    for v in g.vertices() {
        if count[v] == 0 {
            violations.push(DecompositionViolation::UncoveredVertex(v));
        } else if last[v] - first[v] + 1 != count[v] {
            violations.push(DecompositionViolation::NotContiguous(v));
        }
    }
    for (u, v) in g.edges() {
        if !d.bags.iter().any(|b| b.contains(u) && b.contains(v)) {
            violations.push(DecompositionViolation::UncoveredEdge(u, v));
        }
    }
    DecompositionReport {
        violations,
        width: d.width(),
    }
}

/// Merges consecutive bags where one contains the other, keeping the larger.
/// Afterwards consecutive bags differ both ways and still intersect, unless
/// a single bag remains.
pub fn normalize_decomposition(
    g: &Graph,
    d: &PathDecomposition,
) -> Result<PathDecomposition, PwError> {
    let report = validate_path_decomposition(g, d);
    if !report.is_valid() {
        return Err(PwError::Invalid(report.violations));
    }
    let mut out: Vec<VertexSet> = Vec::with_capacity(d.bags.len());
    for bag in &d.bags {
        if out.last().is_some_and(|top| bag.is_subset(top)) {
            continue;
        }
        while out.last().is_some_and(|top| top.is_subset(bag)) {
            out.pop();
        }
        out.push(bag.clone());
    }
    if out.windows(2).any(|w| w[0].is_disjoint(&w[1])) {
        return Err(PwError::Disconnected);
    }
    Ok(PathDecomposition { bags: out })
}

/// Sliding windows of `k + 1` consecutive row-major vertices of the `k x k` grid.
pub fn grid_path_decomposition(k: usize) -> PathDecomposition {
    let n = k * k;
    if k <= 1 {
        return PathDecomposition::new(vec![VertexSet::range(n)]);
    }
    let bags = (0..n - k).map(|t| (t..=t + k).collect()).collect();
    PathDecomposition::new(bags)
}

/// Vertex-separation decomposition of an ordering: bag `i` holds the `i`-th
/// vertex and every earlier vertex with a neighbour at position `i` or later.
pub fn ordering_decomposition(g: &Graph, order: &[Vertex]) -> PathDecomposition {
    let n = g.n();
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let reach: Vec<usize> = (0..n)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .map(|&w| position[w])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut active: Vec<Vertex> = Vec::new();
    let mut bags = Vec::with_capacity(n);
    for (i, &v) in order.iter().enumerate() {
        active.retain(|&u| reach[u] >= i);
        active.push(v);
        bags.push(active.iter().copied().collect());
    }
    PathDecomposition::new(bags)
}

/// Decomposition of a tree from a DFS preorder rooted at vertex 0 that
/// enters smaller subtrees first, normalised.
pub fn tree_path_decomposition(t: &Graph) -> Result<PathDecomposition, PwError> {
    if t.n() == 0 {
        return Err(PwError::EmptyGraph);
    }
    if !t.is_tree() {
        return Err(PwError::NotATree);
    }
    let n = t.n();
    let mut parent = vec![usize::MAX; n];
    let mut bfs = Vec::with_capacity(n);
    bfs.push(0);
    parent[0] = 0;
    let mut i = 0;
    while i < bfs.len() {
        let v = bfs[i];
        for &w in t.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                bfs.push(w);
            }
        }
        i += 1;
    }
    let mut size = vec![1usize; n];
    for &v in bfs.iter().skip(1).rev() {
        size[parent[v]] += size[v];
    }
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        order.push(v);
        let mut children: Vec<Vertex> = t
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| w != 0 && parent[w] == v)
            .collect();
        // popped in increasing size
        children.sort_by_key(|&w| (std::cmp::Reverse(size[w]), std::cmp::Reverse(w)));
        stack.extend(children);
    }
    normalize_decomposition(t, &ordering_decomposition(t, &order))
}

/// Vertex-separation decomposition of the BFS order from vertex 0, normalised.
pub fn bfs_path_decomposition(g: &Graph) -> Result<PathDecomposition, PwError> {
    if g.n() == 0 {
        return Err(PwError::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(PwError::Disconnected);
    }
    let order: Vec<Vertex> = bfs_layers(g, 0).into_iter().flatten().collect();
    normalize_decomposition(g, &ordering_decomposition(g, &order))
}

/// The bag sweep with `width + 1` cops: configuration `i` occupies bag `i`.
/// The decomposition is validated and normalised first.
pub fn pw_schedule(g: &Graph, d: &PathDecomposition, model: Model) -> Result<Schedule, PwError> {
    if g.n() == 0 {
        return Err(PwError::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(PwError::Disconnected);
    }
    let d = normalize_decomposition(g, d)?;
    let cops = d.width() + 1;
    let rounds: Vec<Round> = match model {
        Model::Teleport => d
            .bags
            .iter()
            .enumerate()
            .map(|(i, bag)| {
                let mut r = Round::new(i + 1, bag.clone(), Event::Bag(i + 1));
                r.iteration = Some(i + 1);
                r
            })
            .collect(),
        Model::Edge => {
            let phases: Vec<Phase> = d
                .bags
                .iter()
                .enumerate()
                .map(|(i, bag)| Phase {
                    targets: bag.clone(),
                    event: Event::Bag(i + 1),
                    iteration: Some(i + 1),
                })
                .collect();
            realize_edge_phases(g, cops, &phases)
        }
    };
    Ok(Schedule {
        stats: ScheduleStats {
            algorithm: Algorithm::Pw,
            model,
            n: g.n(),
            cops,
            rounds: rounds.len(),
            iterations: d.len(),
            peak_stack_mass: None,
            tree_nodes: None,
            width: Some(d.width()),
        },
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_grid, gen_path, gen_random_tree};
    use crate::oracle::verify_schedule;
    use crate::separators::test_graphs::{cycle, star};
    use proptest::prelude::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn pd(bags: &[&[usize]]) -> PathDecomposition {
        PathDecomposition::new(bags.iter().map(|b| set(b)).collect())
    }

    #[test]
    fn validator_examples() {
        let p3 = gen_path(3);
        let r = validate_path_decomposition(&p3, &pd(&[&[0, 1], &[1, 2]]));
        assert!(r.is_valid());
        assert_eq!(r.width, 1);
        let r = validate_path_decomposition(&p3, &pd(&[&[0, 1], &[2]]));
        assert_eq!(
            r.violations,
            vec![DecompositionViolation::UncoveredEdge(1, 2)]
        );
        let r = validate_path_decomposition(&cycle(4), &pd(&[&[0, 1, 3], &[1, 2, 3]]));
        assert!(r.is_valid());
        assert_eq!(r.width, 2);
        let r = validate_path_decomposition(&p3, &pd(&[&[0, 1], &[1, 2], &[0]]));
        assert_eq!(r.violations, vec![DecompositionViolation::NotContiguous(0)]);
    }

    #[test]
    fn normalize_examples() {
        let p3 = gen_path(3);
        assert_eq!(
            normalize_decomposition(&p3, &pd(&[&[0, 1], &[0, 1], &[1, 2]])).unwrap(),
            pd(&[&[0, 1], &[1, 2]])
        );
        let p2 = gen_path(2);
        assert_eq!(
            normalize_decomposition(&p2, &pd(&[&[0], &[0, 1]])).unwrap(),
            pd(&[&[0, 1]])
        );
        let normal = pd(&[&[0, 1], &[1, 2]]);
        assert_eq!(normalize_decomposition(&p3, &normal).unwrap(), normal);
        let split = Graph::from_edges(2, &[]).unwrap();
        assert_eq!(
            normalize_decomposition(&split, &pd(&[&[0], &[1]])),
            Err(PwError::Disconnected)
        );
    }

    #[test]
    fn grid_windows() {
        let d = grid_path_decomposition(2);
        assert_eq!(d, pd(&[&[0, 1, 2], &[1, 2, 3]]));
        assert_eq!(grid_path_decomposition(1), pd(&[&[0]]));
        let d = grid_path_decomposition(4);
        assert_eq!(d.len(), 12);
        assert_eq!(d.width(), 4);
        assert!(validate_path_decomposition(&gen_grid(4), &d).is_valid());
    }

    #[test]
    fn tree_decompositions() {
        assert_eq!(tree_path_decomposition(&gen_path(5)).unwrap().width(), 1);
        let s = tree_path_decomposition(&star(4)).unwrap();
        assert_eq!(s, pd(&[&[0, 1], &[0, 2], &[0, 3], &[0, 4]]));
        assert_eq!(tree_path_decomposition(&gen_path(1)).unwrap(), pd(&[&[0]]));
        assert_eq!(tree_path_decomposition(&cycle(4)), Err(PwError::NotATree));
        for seed in 0..20 {
            let t = gen_random_tree(100, seed);
            let d = tree_path_decomposition(&t).unwrap();
            assert!(validate_path_decomposition(&t, &d).is_valid());
            // smaller subtrees first keeps at most log2(n) + 1 vertices pending
            assert!(d.width() <= 7, "width {}", d.width());
        }
    }

    #[test]
    fn file_round_trip() {
        let d = grid_path_decomposition(3);
        assert_eq!(PathDecomposition::parse(&d.to_text()).unwrap(), d);
        assert!(PathDecomposition::parse("0 x\n").is_err());
    }

    #[test]
    fn sweep_schedules() {
        let p3 = gen_path(3);
        let s = pw_schedule(&p3, &pd(&[&[0, 1], &[1, 2]]), Model::Teleport).unwrap();
        assert_eq!(s.stats.cops, 2);
        let report = verify_schedule(&p3, &s).unwrap();
        assert_eq!(report.capture_round, Some(2));
        assert!(report.monotone);

        let g = gen_grid(4);
        let s = pw_schedule(&g, &grid_path_decomposition(4), Model::Teleport).unwrap();
        assert_eq!(s.stats.cops, 5);
        assert_eq!(s.rounds.len(), 12);
        assert!(verify_schedule(&g, &s).unwrap().captured);
        let e = pw_schedule(&g, &grid_path_decomposition(4), Model::Edge).unwrap();
        assert!(verify_schedule(&g, &e).unwrap().captured);

        let one = gen_path(1);
        let s = pw_schedule(&one, &pd(&[&[0]]), Model::Teleport).unwrap();
        assert_eq!(crate::oracle::capture_time(&one, &s), Ok(1));
    }

    /// Contiguity by brute force: every triple i < j < k.
    fn contiguous_brute(d: &PathDecomposition, n: usize) -> bool {
        (0..n).all(|v| {
            let b = &d.bags;
            (0..b.len()).all(|i| {
                (i..b.len()).all(|j| {
                    (j..b.len())
                        .all(|k| !(b[i].contains(v) && b[k].contains(v)) || b[j].contains(v))
                })
            })
        })
    }

    proptest! {
        #[test]
        fn validator_matches_brute_force(
            n in 1usize..=6,
            edges in proptest::collection::vec((0usize..6, 0usize..6), 0..10),
            bags in proptest::collection::vec(proptest::collection::vec(0usize..6, 0..4), 1..6),
        ) {
            let mut list: Vec<(usize, usize)> = edges.into_iter()
                .filter(|&(u, v)| u < n && v < n && u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect();
            list.sort_unstable();
            list.dedup();
            let g = Graph::from_edges(n, &list).unwrap();
            let d = PathDecomposition::new(bags.into_iter().map(|b| b.into_iter().filter(|&v| v < n).collect()).collect());
            let covered = (0..n).all(|v| d.bags.iter().any(|b| b.contains(v)));
            let edges_ok = list.iter().all(|&(u, v)| d.bags.iter().any(|b| b.contains(u) && b.contains(v)));
            let expected = covered && edges_ok && contiguous_brute(&d, n);
            prop_assert_eq!(validate_path_decomposition(&g, &d).is_valid(), expected);
        }

        #[test]
        fn bfs_decomposition_sweeps_capture(n in 2usize..40, seed in any::<u64>()) {
            let g = gen_random_tree(n, seed);
            let d = bfs_path_decomposition(&g).unwrap();
            prop_assert!(validate_path_decomposition(&g, &d).is_valid());
            let report = verify_schedule(&g, &pw_schedule(&g, &d, Model::Teleport).unwrap()).unwrap();
            prop_assert!(report.captured);
            prop_assert!(report.monotone);
        }
    }
}
