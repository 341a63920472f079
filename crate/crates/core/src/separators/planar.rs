//! Planar separator following the Lipton-Tarjan construction, for unit vertex
//! costs: BFS layering, a middle-level cut bounded by two sparse levels, and,
//! when the band between those levels is still too heavy, a fundamental
//! cycle of a triangulation of the graph above the lower level.
//!
//! The output satisfies `|S| <= 2*sqrt(2)*sqrt(n)` and both sides hold at
//! most `2n/3` vertices.

use super::{group_pieces, Balance, SeparationResult, SeparatorError};
use crate::graph::{
    bfs_distances, components_avoiding, induced_subgraph, Graph, Rotation, Vertex, VertexSet,
};

/// Darts of an embedded graph with the face successor permutation.
struct Embedding {
    tail: Vec<Vertex>,
    next: Vec<usize>,
}

impl Embedding {
    fn new(g: &Graph, rotation: &Rotation) -> Self {
        let mut offset = Vec::with_capacity(g.n() + 1);
        offset.push(0);
        for v in g.vertices() {
            offset.push(offset[v] + g.degree(v));
        }
        let dart = |u: Vertex, v: Vertex| -> usize {
            offset[u]
                + g.neighbors(u)
                    .binary_search(&v)
                    .expect("dart along an edge")
        };
        let darts = offset[g.n()];
        let mut tail = vec![0; darts];
        let mut next = vec![0; darts];
        for u in g.vertices() {
            for &v in g.neighbors(u) {
                let d = dart(u, v);
                tail[d] = u;
                let order = rotation.order(v);
                let p = order
                    .iter()
                    .position(|&w| w == u)
                    .expect("rotation lists every neighbor");
                let w = order[(p + 1) % order.len()];
                next[d] = dart(v, w);
            }
        }
        Self { tail, next }
    }

    /// Faces as closed walks of vertices.
    fn faces(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.next.len()];
        let mut faces = Vec::new();
        for start in 0..self.next.len() {
            if seen[start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                walk.push(self.tail[d]);
                d = self.next[d];
            }
            faces.push(walk);
        }
        faces
    }
}

/// Checks that a rotation system lists every vertex's neighbors and that the
/// induced embedding has Euler characteristic 2 on every component.
pub fn check_embedding(g: &Graph, rotation: &Rotation) -> Result<(), SeparatorError> {
    if !rotation.matches(g) {
        return Err(SeparatorError::InconsistentRotation);
    }
    let emb = Embedding::new(g, rotation);
    let comps = crate::graph::connected_components(g);
    let mut comp_of = vec![0; g.n()];
    for (i, c) in comps.iter().enumerate() {
        for v in c.iter() {
            comp_of[v] = i;
        }
    }
    let mut faces = vec![0i64; comps.len()];
    for walk in emb.faces() {
        faces[comp_of[walk[0]]] += 1;
    }
    for (i, c) in comps.iter().enumerate() {
        let edges: usize = c.iter().map(|v| g.degree(v)).sum::<usize>() / 2;
        let f = if edges == 0 { 1 } else { faces[i] };
        let characteristic = c.len() as i64 - edges as i64 + f;
        if characteristic != 2 {
            return Err(SeparatorError::NonPlanar { characteristic });
        }
    }
    Ok(())
}

/// Triangulates every face of an embedding by cutting ears off its boundary
/// walk. Returned chords may parallel existing edges.
fn triangulation_chords(emb: &Embedding) -> Vec<(Vertex, Vertex)> {
    let mut chords = Vec::new();
    for mut walk in emb.faces() {
        let mut i = 0;
        let mut stalled = 0;
        while walk.len() > 3 && stalled < walk.len() {
            let len = walk.len();
            let (a, c) = (walk[i % len], walk[(i + 2) % len]);
            if a != c {
                chords.push((a.min(c), a.max(c)));
                let removed = (i + 1) % len;
                walk.remove(removed);
                if removed < i % len {
                    i -= 1;
                }
                i %= walk.len();
                stalled = 0;
            } else {
                i = (i + 1) % len;
                stalled += 1;
            }
        }
    }
    chords
}

/// Lipton-Tarjan separator of a connected planar graph given by a rotation system.
pub fn planar_cycle_separator(
    g: &Graph,
    rotation: &Rotation,
) -> Result<SeparationResult, SeparatorError> {
    check_embedding(g, rotation)?;
    let n = g.n();
    if n == 0 {
        return Ok(SeparationResult::new(
            VertexSet::new(),
            VertexSet::new(),
            VertexSet::new(),
        ));
    }
    let level = bfs_distances(g, 0);
    if level.contains(&crate::graph::UNREACHED) {
        return Err(SeparatorError::Disconnected);
    }
    let depth = level.iter().copied().max().unwrap_or(0);
    let mut sizes = vec![0usize; depth + 2];
    for &d in &level {
        sizes[d] += 1;
    }
    let size_at = |l: isize| -> usize {
        if l < 0 {
            0
        } else {
            sizes.get(l as usize).copied().unwrap_or(0)
        }
    };

    // l1: the level holding the median vertex
    let mut cum = 0;
    let mut l1 = 0;
    for (l, &s) in sizes.iter().enumerate() {
        cum += s;
        if 2 * cum >= n {
            l1 = l;
            break;
        }
    }
    let k = cum;
    let l1 = l1 as isize;
    // |L(l0)| + 2(l1 - l0) <= 2 sqrt(k), compared as squares
    let within = |cost: usize, budget: usize| cost * cost <= 4 * budget;
    let l0 = (-1..=l1)
        .rev()
        .find(|&l| within(size_at(l) + 2 * (l1 - l) as usize, k))
        .unwrap_or_else(|| {
            (-1..=l1)
                .min_by_key(|&l| size_at(l) + 2 * (l1 - l) as usize)
                .unwrap()
        });
    let top = depth as isize + 1;
    let l2 = (l1 + 1..=top)
        .find(|&l| within(size_at(l) + 2 * (l - l1 - 1) as usize, n - k))
        .unwrap_or_else(|| {
            (l1 + 1..=top)
                .min_by_key(|&l| size_at(l) + 2 * (l - l1 - 1) as usize)
                .unwrap()
        });

    let alpha = Balance::TWO_THIRDS;
    let lvl = |v: Vertex| level[v] as isize;
    let in_middle = |v: Vertex| lvl(v) > l0 && lvl(v) < l2;
    let mut separator: Vec<Vertex> = g
        .vertices()
        .filter(|&v| lvl(v) == l0 || lvl(v) == l2)
        .collect();

    let not_middle: Vec<bool> = g.vertices().map(|v| !in_middle(v)).collect();
    let heavy = components_avoiding(g, &not_middle)
        .iter()
        .any(|c| !alpha.admits(c.len(), n));
    if heavy {
        separator.extend(fundamental_cycle(g, rotation, &level, l0, l2)?);
    }

    let s: VertexSet = separator.into_iter().collect();
    let mut removed = vec![false; n];
    for v in s.iter() {
        removed[v] = true;
    }
    let pieces = components_avoiding(g, &removed);
    if pieces.iter().any(|p| !alpha.admits(p.len(), n)) {
        return Err(SeparatorError::RefinementFailed);
    }
    let (a, b) = group_pieces(pieces);
    Ok(shrink(g, SeparationResult::new(a, b, s)))
}

/// Middle-band vertices of a balanced fundamental cycle of a triangulation
/// of `G[levels < l2]`, w.r.t. the BFS tree (parent = smallest-id neighbor
/// one level up). Among balanced cycles the one with the fewest middle
/// vertices is returned.
fn fundamental_cycle(
    g: &Graph,
    rotation: &Rotation,
    level: &[usize],
    l0: isize,
    l2: isize,
) -> Result<Vec<Vertex>, SeparatorError> {
    let n = g.n();
    let upper: VertexSet = g.vertices().filter(|&v| (level[v] as isize) < l2).collect();
    let view = induced_subgraph(g, &upper)?;
    let h = view.graph();
    let emb = Embedding::new(h, &rotation.restrict(&view));

    // BFS tree in local ids; local 0 is the root (global 0 has level 0)
    let local_level: Vec<usize> = (0..h.n()).map(|v| level[view.to_global(v)]).collect();
    let parent: Vec<Vertex> = (0..h.n())
        .map(|v| {
            if local_level[v] == 0 {
                v
            } else {
                *h.neighbors(v)
                    .iter()
                    .find(|&&w| local_level[w] + 1 == local_level[v])
                    .expect("BFS level above is adjacent")
            }
        })
        .collect();
    let is_tree_edge = |u: Vertex, v: Vertex| parent[u] == v || parent[v] == u;

    let mut candidates: Vec<(Vertex, Vertex)> =
        h.edges().filter(|&(u, v)| !is_tree_edge(u, v)).collect();
    candidates.extend(
        triangulation_chords(&emb)
            .into_iter()
            .filter(|&(u, v)| !is_tree_edge(u, v)),
    );

    let middle_local = |v: Vertex| local_level[v] as isize > l0;
    let cycle_middle = |u: Vertex, v: Vertex| -> Vec<Vertex> {
        let (mut x, mut y) = (u, v);
        let mut out = Vec::new();
        while x != y {
            if local_level[x] >= local_level[y] {
                out.push(x);
                x = parent[x];
            } else {
                out.push(y);
                y = parent[y];
            }
        }
        out.push(x);
        out.retain(|&w| middle_local(w));
        out
    };

    let mut scored: Vec<(usize, usize)> = candidates
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| (cycle_middle(u, v).len(), i))
        .collect();
    scored.sort_unstable();

    let alpha = Balance::TWO_THIRDS;
    let base_removed: Vec<bool> = g
        .vertices()
        .map(|v| {
            let l = level[v] as isize;
            l <= l0 || l >= l2
        })
        .collect();
    for (_, i) in scored {
        let (u, v) = candidates[i];
        let cycle: Vec<Vertex> = cycle_middle(u, v)
            .into_iter()
            .map(|w| view.to_global(w))
            .collect();
        let mut removed = base_removed.clone();
        for &w in &cycle {
            removed[w] = true;
        }
        if components_avoiding(g, &removed)
            .iter()
            .all(|c| alpha.admits(c.len(), n))
        {
            return Ok(cycle);
        }
    }
    Err(SeparatorError::RefinementFailed)
}

/// Moves separator vertices whose neighbors outside `S` all lie on one side
/// into that side, while balance allows.
fn shrink(g: &Graph, r: SeparationResult) -> SeparationResult {
    #[derive(Clone, Copy, PartialEq)]
    enum Part {
        A,
        B,
        S,
    }
    let n = g.n();
    let mut part = vec![Part::S; n];
    for v in r.a.iter() {
        part[v] = Part::A;
    }
    for v in r.b.iter() {
        part[v] = Part::B;
    }
    let (mut size_a, mut size_b) = (r.a.len(), r.b.len());
    for v in r.s.iter() {
        let touches_a = g.neighbors(v).iter().any(|&w| part[w] == Part::A);
        let touches_b = g.neighbors(v).iter().any(|&w| part[w] == Part::B);
        let fits = |size: usize| r.alpha.admits(size + 1, n);
        let target = match (touches_a, touches_b) {
            (true, true) => None,
            (true, false) => fits(size_a).then_some(Part::A),
            (false, true) => fits(size_b).then_some(Part::B),
            (false, false) if size_a <= size_b => fits(size_a).then_some(Part::A),
            (false, false) => fits(size_b).then_some(Part::B),
        };
        match target {
            Some(Part::A) => {
                part[v] = Part::A;
                size_a += 1;
            }
            Some(Part::B) => {
                part[v] = Part::B;
                size_b += 1;
            }
            _ => {}
        }
    }
    let collect = |p: Part| -> VertexSet { g.vertices().filter(|&v| part[v] == p).collect() };
    SeparationResult {
        a: collect(Part::A),
        b: collect(Part::B),
        s: collect(Part::S),
        alpha: r.alpha,
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_graphs::*;
    use super::super::{exact_min_balanced_separator, validate_separation};
    use super::*;

    fn lt_bound(n: usize) -> f64 {
        2.0 * 2f64.sqrt() * (n as f64).sqrt()
    }

    fn ring_rotation(g: &Graph) -> Rotation {
        // any order works for a cycle or a tree
        Rotation(g.vertices().map(|v| g.neighbors(v).to_vec()).collect())
    }

    #[test]
    fn grid_5x5_within_bound() {
        let (g, rot) = grid_with_rotation(5);
        let r = planar_cycle_separator(&g, &rot).unwrap();
        assert!((r.s.len() as f64) <= lt_bound(25));
        assert!(validate_separation(&g, &r, r.s.len()).is_valid());
    }

    #[test]
    fn triangle() {
        let g = complete(3);
        let rot = Rotation(vec![vec![1, 2], vec![2, 0], vec![0, 1]]);
        let r = planar_cycle_separator(&g, &rot).unwrap();
        assert_eq!(r.s.len(), 1);
        assert!(validate_separation(&g, &r, 1).is_valid());
    }

    #[test]
    fn path_p9_against_oracle() {
        let g = path(9);
        let r = planar_cycle_separator(&g, &ring_rotation(&g)).unwrap();
        let exact = exact_min_balanced_separator(&g, Balance::TWO_THIRDS, 16).unwrap();
        assert!(r.s.len() <= 8 && r.s.len() >= exact.s.len());
        assert!(validate_separation(&g, &r, 8).is_valid());
    }

    #[test]
    fn grids_3_to_12() {
        for k in 3..=12 {
            let (g, rot) = grid_with_rotation(k);
            let r = planar_cycle_separator(&g, &rot).unwrap();
            assert!(
                (r.s.len() as f64) <= 2.0 * 2f64.sqrt() * k as f64,
                "k={k} |S|={}",
                r.s.len()
            );
            assert!(validate_separation(&g, &r, r.s.len()).is_valid());
        }
    }

    #[test]
    fn wheel_needs_cycle_refinement() {
        // hub 0 adjacent to a rim of 30 vertices: BFS from the hub puts the
        // whole rim on level 1, so the band check alone cannot balance it
        let rim = 30;
        let mut edges: Vec<_> = (1..=rim).map(|i| (0, i)).collect();
        edges.extend((1..=rim).map(|i| (i, i % rim + 1)));
        let g = Graph::from_edges(rim + 1, &edges).unwrap();
        let mut rot = vec![(1..=rim).collect::<Vec<_>>()];
        for i in 1..=rim {
            let prev = if i == 1 { rim } else { i - 1 };
            rot.push(vec![0, prev, i % rim + 1]);
        }
        let rot = Rotation(rot);
        check_embedding(&g, &rot).unwrap();
        let r = planar_cycle_separator(&g, &rot).unwrap();
        assert!(validate_separation(&g, &r, r.s.len()).is_valid());
        assert!((r.s.len() as f64) <= lt_bound(rim + 1));
    }

    #[test]
    fn rejects_bad_rotations() {
        let g = complete(3);
        let wrong = Rotation(vec![vec![1], vec![2, 0], vec![0, 1]]);
        assert_eq!(
            planar_cycle_separator(&g, &wrong),
            Err(SeparatorError::InconsistentRotation)
        );

        // K4 drawn with a rotation of genus 1
        let k4 = complete(4);
        let torus = Rotation(vec![
            vec![1, 2, 3],
            vec![0, 2, 3],
            vec![0, 1, 3],
            vec![0, 1, 2],
        ]);
        assert!(matches!(
            check_embedding(&k4, &torus),
            Err(SeparatorError::NonPlanar { .. })
        ));
        let planar = Rotation(vec![
            vec![1, 2, 3],
            vec![0, 3, 2],
            vec![0, 1, 3],
            vec![0, 2, 1],
        ]);
        check_embedding(&k4, &planar).unwrap();
    }

    #[test]
    fn grid_subgraphs_stay_valid() {
        use rand::{Rng, SeedableRng};
        let (g, rot) = grid_with_rotation(14);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let keep: VertexSet = g.vertices().filter(|_| rng.gen_bool(0.8)).collect();
            let view = induced_subgraph(&g, &keep).unwrap();
            let comps = crate::graph::connected_components(view.graph());
            let big = comps.iter().max_by_key(|c| c.len()).unwrap();
            let sub = view.restrict(big).unwrap();
            let r = planar_cycle_separator(sub.graph(), &rot.restrict(&sub)).unwrap();
            assert!(validate_separation(sub.graph(), &r, r.s.len()).is_valid());
            assert!(
                (r.s.len() as f64) <= lt_bound(sub.len()),
                "|S|={} n={}",
                r.s.len(),
                sub.len()
            );
        }
    }
}
