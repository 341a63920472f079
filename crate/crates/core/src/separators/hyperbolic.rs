use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{bfs_level_separator, validate_separation, SeparationResult, SeparatorError};
use crate::graph::{Graph, ParseError, Vertex, VertexSet};

/// Polar coordinates of a point in the hyperbolic disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
}

/// Number of rotations of the dividing ray pair tried per call.
const CANDIDATE_ROTATIONS: usize = 8;

/// Angular separator for graphs with a geometric representation.
///
/// The vertices are ordered by angle and cut into two arcs of `floor(m/2)`
/// and `ceil(m/2)` vertices by a pair of rays. Every edge between the arcs is
/// charged to the ray on its shorter angular side; per ray, the endpoints on
/// the side with fewer of them go into `S`. One candidate places a ray in the
/// widest angular gap, the others are spread evenly; the smallest `S` wins.
/// An invalid result falls back to the BFS level cut.
pub fn hyperbolic_sector_separator(
    g: &Graph,
    coords: &[PolarPoint],
    cap: usize,
) -> Result<SeparationResult, SeparatorError> {
    let m = g.n();
    if coords.len() != m {
        return Err(SeparatorError::MissingCoordinates {
            expected: m,
            found: coords.len(),
        });
    }
    if m == 0 {
        return Ok(SeparationResult::new(
            VertexSet::new(),
            VertexSet::new(),
            VertexSet::new(),
        ));
    }
    let angle: Vec<f64> = coords.iter().map(|p| p.theta.rem_euclid(TAU)).collect();
    let mut order: Vec<Vertex> = (0..m).collect();
    order.sort_by(|&x, &y| angle[x].total_cmp(&angle[y]).then(x.cmp(&y)));
    let mut position = vec![0; m];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }

    // start of the arc following the widest gap
    let widest = (0..m)
        .max_by(|&i, &j| {
            let gap = |i: usize| (angle[order[i]] - angle[order[(i + m - 1) % m]]).rem_euclid(TAU);
            gap(i).total_cmp(&gap(j)).then(j.cmp(&i))
        })
        .unwrap_or(0);
    let mut starts: Vec<usize> = (0..CANDIDATE_ROTATIONS)
        .map(|j| (widest + j * m / CANDIDATE_ROTATIONS) % m)
        .collect();
    starts.dedup();

    let half = m / 2;
    let mut best: Option<SeparationResult> = None;
    for start in starts {
        let in_first = |v: Vertex| (position[v] + m - start) % m < half;
        let r = split_at(g, &angle, &in_first);
        if best.as_ref().is_none_or(|b| r.s.len() < b.s.len()) {
            best = Some(r);
        }
    }
    let r = best.expect("at least one candidate rotation");
    if validate_separation(g, &r, m).is_valid() {
        Ok(r)
    } else {
        bfs_level_separator(g, cap)
    }
}

fn split_at(g: &Graph, angle: &[f64], in_first: &dyn Fn(Vertex) -> bool) -> SeparationResult {
    // per ray: endpoints of charged edges on the first and second arc
    let mut endpoints = [[Vec::new(), Vec::new()], [Vec::new(), Vec::new()]];
    for (u, v) in g.edges() {
        let (x, y) = match (in_first(u), in_first(v)) {
            (true, false) => (u, v),
            (false, true) => (v, u),
            _ => continue,
        };
        // counter-clockwise from x leaves the first arc through its closing ray
        let ccw = (angle[y] - angle[x]).rem_euclid(TAU);
        let ray = usize::from(ccw <= PI);
        endpoints[ray][0].push(x);
        endpoints[ray][1].push(y);
    }
    let mut s = Vec::new();
    for [first, second] in endpoints {
        let first: VertexSet = first.into_iter().collect();
        let second: VertexSet = second.into_iter().collect();
        s.extend(
            if first.len() <= second.len() {
                first
            } else {
                second
            }
            .into_vec(),
        );
    }
    let s: VertexSet = s.into_iter().collect();
    let a = g
        .vertices()
        .filter(|&v| in_first(v) && !s.contains(v))
        .collect();
    let b = g
        .vertices()
        .filter(|&v| !in_first(v) && !s.contains(v))
        .collect();
    SeparationResult::new(a, b, s)
}

/// Parses a coordinates file: one `r theta` line per vertex, radians.
pub fn parse_coordinates(text: &str) -> Result<Vec<PolarPoint>, ParseError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            let nums: Result<Vec<f64>, _> = l.split_whitespace().map(str::parse::<f64>).collect();
            match nums.as_deref() {
                Ok([r, theta]) if r.is_finite() && theta.is_finite() => Ok(PolarPoint {
                    r: *r,
                    theta: *theta,
                }),
                _ => Err(ParseError::Malformed {
                    line: i + 1,
                    reason: "expected \"r theta\" with two finite decimals".into(),
                }),
            }
        })
        .collect()
}

pub fn write_coordinates(coords: &[PolarPoint]) -> String {
    let mut out = String::new();
    for p in coords {
        writeln!(out, "{} {}", p.r, p.theta).unwrap();
    }
    out
}
