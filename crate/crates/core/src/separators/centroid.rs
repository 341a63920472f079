use super::{group_pieces, SeparationResult, SeparatorError};
use crate::graph::{Graph, Vertex, VertexSet};

/// Single-vertex separator of a tree: a centroid (the vertex minimising the
/// largest component left after its removal, smallest id on ties), with the
/// components grouped largest-first.
pub fn tree_centroid_separator(t: &Graph) -> Result<SeparationResult, SeparatorError> {
    if !t.is_tree() {
        return Err(SeparatorError::NotATree);
    }
    let n = t.n();

    // iterative DFS from 0: parent pointers and preorder
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(u) = stack.pop() {
        order.push(u);
        for &w in t.neighbors(u) {
            if parent[w] == usize::MAX {
                parent[w] = u;
                stack.push(w);
            }
        }
    }
    let mut size = vec![1usize; n];
    for &u in order.iter().rev().filter(|&&u| u != 0) {
        size[parent[u]] += size[u];
    }

    let heaviest = |v: Vertex| -> usize {
        t.neighbors(v)
            .iter()
            .map(|&w| {
                if w != 0 && parent[w] == v {
                    size[w]
                } else {
                    n - size[v]
                }
            })
            .max()
            .unwrap_or(0)
    };
    let centroid = (0..n)
        .min_by_key(|&v| (heaviest(v), v))
        .expect("trees are nonempty");

    // components of T - centroid, one per neighbor
    let mut pieces = Vec::with_capacity(t.degree(centroid));
    let mut seen = vec![false; n];
    seen[centroid] = true;
    for &start in t.neighbors(centroid) {
        let mut members = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < members.len() {
            let u = members[i];
            i += 1;
            for &w in t.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    members.push(w);
                }
            }
        }
        pieces.push(members.into_iter().collect::<VertexSet>());
    }
    let (a, b) = group_pieces(pieces);
    Ok(SeparationResult::new(a, b, VertexSet::singleton(centroid)))
}

#[cfg(test)]
mod tests {
    use super::super::test_graphs::*;
    use super::super::validate_separation;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn path_p7_splits_at_midpoint() {
        let r = tree_centroid_separator(&path(7)).unwrap();
        assert_eq!(r.s, VertexSet::singleton(3));
        assert_eq!((r.a.len(), r.b.len()), (3, 3));
    }

    #[test]
    fn star_leaves_split_evenly() {
        let r = tree_centroid_separator(&star(6)).unwrap();
        assert_eq!(r.s, VertexSet::singleton(0));
        assert_eq!(r.a, [1, 3, 5].into_iter().collect());
        assert_eq!(r.b, [2, 4, 6].into_iter().collect());
    }

    #[test]
    fn single_edge() {
        let r = tree_centroid_separator(&path(2)).unwrap();
        assert_eq!(r.s, VertexSet::singleton(0));
        assert_eq!(r.a, VertexSet::singleton(1));
        assert!(r.b.is_empty());
        assert!(validate_separation(&path(2), &r, 1).is_valid());
    }

    #[test]
    fn rejects_non_trees() {
        assert_eq!(
            tree_centroid_separator(&cycle(4)),
            Err(SeparatorError::NotATree)
        );
        let forest = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            tree_centroid_separator(&forest),
            Err(SeparatorError::NotATree)
        );
    }

    proptest! {
        #[test]
        fn centroid_is_one_vertex_and_balanced(n in 1usize..120, seed in any::<u64>()) {
            let t = crate::generators::gen_random_tree(n, seed);
            let r = tree_centroid_separator(&t).unwrap();
            prop_assert_eq!(r.s.len(), 1);
            prop_assert!(r.a.len() <= 2 * n / 3 && r.b.len() <= 2 * n / 3);
            prop_assert!(validate_separation(&t, &r, 1).is_valid());
        }
    }
}
