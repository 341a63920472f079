//! Deterministic benchmark graph families.
//!
//! Randomness comes from ChaCha8 seeded with the caller's seed. The
//! hyperbolic generator draws each vertex from its own ChaCha stream, so the
//! coordinates of vertex `v` do not depend on `n`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{connected_components, induced_subgraph, Graph, Rotation, Vertex};
use crate::separators::PolarPoint;

pub fn gen_path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).expect("path edges are simple")
}

/// `k x k` grid, row-major ids.
pub fn gen_grid(k: usize) -> Graph {
    let mut edges = Vec::with_capacity(2 * k * k.saturating_sub(1));
    for r in 0..k {
        for c in 0..k {
            let v = r * k + c;
            if c + 1 < k {
                edges.push((v, v + 1));
            }
            if r + 1 < k {
                edges.push((v, v + k));
            }
        }
    }
    Graph::from_edges(k * k, &edges).expect("grid edges are simple")
}

/// Planar rotation system of [`gen_grid`]: up, right, down, left.
pub fn grid_rotation(k: usize) -> Rotation {
    let mut rot = Vec::with_capacity(k * k);
    for r in 0..k {
        for c in 0..k {
            let v = r * k + c;
            let mut order = Vec::with_capacity(4);
            if r > 0 {
                order.push(v - k);
            }
            if c + 1 < k {
                order.push(v + 1);
            }
            if r + 1 < k {
                order.push(v + k);
            }
            if c > 0 {
                order.push(v - 1);
            }
            rot.push(order);
        }
    }
    Rotation(rot)
}

/// Rotation system of a tree (any order is planar).
pub fn tree_rotation(t: &Graph) -> Rotation {
    Rotation(t.vertices().map(|v| t.neighbors(v).to_vec()).collect())
}

/// Uniform random labelled tree on `n` vertices, decoded from a random Prüfer sequence.
pub fn gen_random_tree(n: usize, seed: u64) -> Graph {
    if n <= 1 {
        return Graph::empty(n);
    }
    if n == 2 {
        return gen_path(2);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let code: Vec<Vertex> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &v in &code {
        degree[v] += 1;
    }
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<Vertex>> = (0..n)
        .filter(|&v| degree[v] == 1)
        .map(std::cmp::Reverse)
        .collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &v in &code {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("Prüfer decoding keeps a leaf");
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 {
            leaves.push(std::cmp::Reverse(v));
        }
    }
    let std::cmp::Reverse(u) = leaves.pop().unwrap();
    let std::cmp::Reverse(w) = leaves.pop().unwrap();
    edges.push((u, w));
    Graph::from_edges(n, &edges).expect("Prüfer decoding yields a simple tree")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicParams {
    pub n: usize,
    /// Power-law parameter, at least 1/2.
    pub alpha: f64,
    /// Average-degree constant `C` in `R = 2 ln n + C`.
    pub c_avg: f64,
    pub seed: u64,
}

impl HyperbolicParams {
    pub fn new(n: usize, alpha: f64, c_avg: f64, seed: u64) -> Self {
        Self {
            n,
            alpha,
            c_avg,
            seed,
        }
    }

    /// Disc radius `2 ln n + C`.
    pub fn radius(&self) -> f64 {
        2.0 * (self.n as f64).ln() + self.c_avg
    }

    pub fn is_valid(&self) -> bool {
        self.alpha >= 0.5 && self.radius() > 0.0
    }
}

/// A graph together with polar coordinates for every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricGraph {
    pub graph: Graph,
    pub coords: Vec<PolarPoint>,
}

/// CDF of the radial density `alpha sinh(alpha r) / (cosh(alpha R) - 1)` on `[0, R]`.
pub fn radial_cdf(r: f64, alpha: f64, radius: f64) -> f64 {
    let r = r.clamp(0.0, radius);
    ((alpha * r).cosh() - 1.0) / ((alpha * radius).cosh() - 1.0)
}

/// Inverse of [`radial_cdf`].
pub fn radial_quantile(u: f64, alpha: f64, radius: f64) -> f64 {
    (1.0 + u * ((alpha * radius).cosh() - 1.0)).acosh() / alpha
}

/// Hyperbolic distance between two points in polar coordinates.
pub fn hyperbolic_distance(p: PolarPoint, q: PolarPoint) -> f64 {
    let cosh_d = p.r.cosh() * q.r.cosh() - p.r.sinh() * q.r.sinh() * (p.theta - q.theta).cos();
    cosh_d.max(1.0).acosh()
}

/// Threshold hyperbolic random graph: `n` points with uniform angle and
/// radius drawn by inverse CDF, joined when their hyperbolic distance is at
/// most `R`.
pub fn gen_hyperbolic(params: &HyperbolicParams) -> GeometricGraph {
    let radius = params.radius();
    let coords: Vec<PolarPoint> = (0..params.n)
        .map(|v| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(v as u64);
            let u: f64 = rng.gen();
            let t: f64 = rng.gen();
            PolarPoint {
                r: radial_quantile(u, params.alpha, radius),
                theta: TAU * t,
            }
        })
        .collect();

    struct Pre {
        ch: f64,
        sh: f64,
        c: f64,
        s: f64,
    }
    let pre: Vec<Pre> = coords
        .iter()
        .map(|p| Pre {
            ch: p.r.cosh(),
            sh: p.r.sinh(),
            c: p.theta.cos(),
            s: p.theta.sin(),
        })
        .collect();
    let threshold = radius.cosh();
    let mut edges = Vec::new();
    for u in 0..params.n {
        for v in u + 1..params.n {
            let (p, q) = (&pre[u], &pre[v]);
            let cos_dtheta = p.c * q.c + p.s * q.s;
            let cosh_d = (p.ch * q.ch - p.sh * q.sh * cos_dtheta).max(1.0);
            if cosh_d <= threshold {
                edges.push((u, v));
            }
        }
    }
    GeometricGraph {
        graph: Graph::from_edges(params.n, &edges).expect("threshold graph is simple"),
        coords,
    }
}

/// The largest connected component (smallest minimum vertex on ties), relabelled
/// to `0..size` in increasing original id order, with its coordinates.
pub fn largest_component(gg: &GeometricGraph) -> GeometricGraph {
    let comps = connected_components(&gg.graph);
    let Some(best) = comps
        .iter()
        .enumerate()
        .max_by(|(i, x), (j, y)| x.len().cmp(&y.len()).then(j.cmp(i)))
        .map(|(_, c)| c)
    else {
        return gg.clone();
    };
    let view = induced_subgraph(&gg.graph, best).expect("component is in range");
    GeometricGraph {
        coords: best.iter().map(|v| gg.coords[v]).collect(),
        graph: view.graph().clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::diameter;

    #[test]
    fn small_families() {
        let p = gen_path(4);
        assert_eq!((p.n(), p.m(), diameter(&p).unwrap()), (4, 3, 3));
        let g = gen_grid(3);
        assert_eq!((g.n(), g.m()), (9, 12));
        let t = gen_random_tree(50, 7);
        assert_eq!(t.m(), 49);
        assert!(t.is_tree());
        assert_eq!(gen_random_tree(50, 7), t);
        assert_eq!(gen_random_tree(1, 0).n(), 1);
        assert!(gen_random_tree(2, 0).is_tree());
    }

    #[test]
    fn grid_rotation_is_planar() {
        for k in 1..6 {
            crate::separators::check_embedding(&gen_grid(k), &grid_rotation(k)).unwrap();
        }
    }

    #[test]
    fn radius_formula() {
        let p = HyperbolicParams::new(100, 0.75, 1.0, 0);
        assert!((p.radius() - 10.2103).abs() < 1e-3);
        assert!(p.is_valid());
        assert!(!HyperbolicParams::new(100, 0.4, 1.0, 0).is_valid());
    }

    #[test]
    fn cdf_normalised_and_inverse() {
        let (alpha, radius) = (0.75, 10.0);
        assert!((radial_cdf(radius, alpha, radius) - 1.0).abs() < 1e-12);
        assert_eq!(radial_cdf(0.0, alpha, radius), 0.0);
        for u in [0.0, 0.1, 0.5, 0.9, 1.0] {
            let r = radial_quantile(u, alpha, radius);
            assert!((radial_cdf(r, alpha, radius) - u).abs() < 1e-9);
        }
    }

    #[test]
    fn radial_density_integrates_to_one() {
        // midpoint rule on the stated density
        let (alpha, radius) = (0.6, 9.0);
        let steps = 200_000;
        let h = radius / steps as f64;
        let total: f64 = (0..steps)
            .map(|i| {
                let r = (i as f64 + 0.5) * h;
                alpha * (alpha * r).sinh() / ((alpha * radius).cosh() - 1.0) * h
            })
            .sum();
        assert!((total - 1.0).abs() < 1e-6);
    }

    #[test]
    fn ks_distance_of_sampler() {
        let (alpha, radius) = (0.75, 2.0 * 1000f64.ln() + 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut samples: Vec<f64> = (0..100_000)
            .map(|_| radial_quantile(rng.gen(), alpha, radius))
            .collect();
        samples.sort_by(f64::total_cmp);
        let n = samples.len() as f64;
        let ks = samples
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let f = radial_cdf(r, alpha, radius);
                (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.01, "KS distance {ks}");
    }

    #[test]
    fn same_angle_close_points_are_adjacent() {
        let p = PolarPoint { r: 3.0, theta: 1.0 };
        let q = PolarPoint { r: 4.0, theta: 1.0 };
        assert!((hyperbolic_distance(p, q) - 1.0).abs() < 1e-9);
        assert!(hyperbolic_distance(p, q) <= p.r + q.r);
    }

    #[test]
    fn hyperbolic_is_symmetric_and_deterministic() {
        let params = HyperbolicParams::new(300, 0.75, 1.0, 42);
        let a = gen_hyperbolic(&params);
        let b = gen_hyperbolic(&params);
        assert_eq!(a, b);
        for u in a.graph.vertices() {
            assert!(!a.graph.has_edge(u, u));
            for &w in a.graph.neighbors(u) {
                assert!(a.graph.has_edge(w, u));
                assert!(hyperbolic_distance(a.coords[u], a.coords[w]) <= params.radius() + 1e-9);
            }
        }
        // per-vertex streams: a larger sample keeps the angles of a smaller one
        let bigger = gen_hyperbolic(&HyperbolicParams::new(400, 0.75, 1.0, 42));
        for (p, q) in bigger.coords.iter().zip(&a.coords) {
            assert_eq!(p.theta, q.theta);
        }
    }

    #[test]
    fn largest_component_picks_biggest() {
        let g = Graph::from_edges(5, &[(0, 1), (2, 3), (3, 4)]).unwrap();
        let coords = (0..5)
            .map(|i| PolarPoint {
                r: 1.0,
                theta: i as f64,
            })
            .collect();
        let gg = GeometricGraph { graph: g, coords };
        let big = largest_component(&gg);
        assert_eq!(big.graph.n(), 3);
        assert_eq!(big.coords[0].theta, 2.0);

        let connected = GeometricGraph {
            graph: gen_path(3),
            coords: vec![PolarPoint { r: 0.0, theta: 0.0 }; 3],
        };
        assert_eq!(largest_component(&connected), connected);

        let sampled =
            largest_component(&gen_hyperbolic(&HyperbolicParams::new(1000, 0.75, 1.0, 1)));
        assert!(sampled.graph.n() > 0);
        assert!(sampled.graph.is_connected());
    }
}
