use super::{exact_min_balanced_separator, Balance, SeparationResult, SeparatorError};
use crate::graph::{bfs_layers, Graph, VertexSet};

/// BFS level cut from vertex 0.
///
/// Only interior levels are candidates, so both sides of the cut are
/// nonempty. Among the balanced ones the smallest level wins, then the one
/// with the lighter heavier side, then the shallower one. Without a balanced interior level the exhaustive search
/// takes over when the graph is small enough.
pub fn bfs_level_separator(g: &Graph, cap: usize) -> Result<SeparationResult, SeparatorError> {
    let n = g.n();
    if n == 0 {
        return Ok(SeparationResult::new(
            VertexSet::new(),
            VertexSet::new(),
            VertexSet::new(),
        ));
    }
    if n == 1 {
        return Ok(SeparationResult::new(
            VertexSet::new(),
            VertexSet::new(),
            VertexSet::singleton(0),
        ));
    }
    let layers = bfs_layers(g, 0);
    if layers.iter().map(Vec::len).sum::<usize>() != n {
        return Err(SeparatorError::Disconnected);
    }
    let alpha = Balance::TWO_THIRDS;
    let mut before = 0;
    let mut best: Option<(usize, usize, usize)> = None;
    for (level, layer) in layers.iter().enumerate() {
        let after = n - before - layer.len();
        let interior = level > 0 && level + 1 < layers.len();
        if interior && alpha.admits(before, n) && alpha.admits(after, n) {
            let key = (layer.len(), before.max(after), level);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        before += layer.len();
    }
    match best {
        Some((_, _, level)) => {
            let a = layers[..level].iter().flatten().copied().collect();
            let b = layers[level + 1..].iter().flatten().copied().collect();
            let s = layers[level].iter().copied().collect();
            Ok(SeparationResult::new(a, b, s))
        }
        None if n <= cap => exact_min_balanced_separator(g, alpha, cap),
        None => Err(SeparatorError::NoBalancedLevel { n }),
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_graphs::*;
    use super::super::validate_separation;
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn path_p5_cuts_middle_level() {
        let r = bfs_level_separator(&path(5), 16).unwrap();
        assert_eq!(r.a, set(&[0, 1]));
        assert_eq!(r.s, set(&[2]));
        assert_eq!(r.b, set(&[3, 4]));
    }

    #[test]
    fn k4_falls_back_to_exact() {
        let g = complete(4);
        let r = bfs_level_separator(&g, 16).unwrap();
        assert_eq!(r.s.len(), 2);
        assert!(validate_separation(&g, &r, 2).is_valid());
        assert!(matches!(
            bfs_level_separator(&g, 3),
            Err(SeparatorError::NoBalancedLevel { n: 4 })
        ));
    }

    #[test]
    fn star_falls_back_to_center() {
        let g = star(4);
        let r = bfs_level_separator(&g, 16).unwrap();
        assert_eq!(r.s, set(&[0]));
        assert_eq!((r.a.len(), r.b.len()), (2, 2));
    }

    #[test]
    fn grid_level_is_antidiagonal() {
        let (g, _) = grid_with_rotation(5);
        let r = bfs_level_separator(&g, 16).unwrap();
        assert!(validate_separation(&g, &r, 5).is_valid());
        assert_eq!(r.s.len(), 4);
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            bfs_level_separator(&g, 16),
            Err(SeparatorError::Disconnected)
        );
    }
}
