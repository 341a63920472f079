//! Territory oracle for the invisible robber.
//!
//! The territory is the set of vertices an uncaught robber could occupy. It
//! starts as `V \ C_1` and evolves as `N+(R \ C) \ C` each time the cops
//! take configuration `C`; an empty territory certifies capture against
//! every robber.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::schedule::{Model, Schedule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("round {round}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange {
        round: usize,
        vertex: Vertex,
        n: usize,
    },
    #[error("round {round}: occupied set disagrees with cop positions")]
    PositionsMismatch { round: usize },
    #[error("round {round}: expected {expected} cops, found {found}")]
    CopCount {
        round: usize,
        expected: usize,
        found: usize,
    },
    #[error("round {round}: cop {cop} jumps from {from} to {to}")]
    IllegalMove {
        round: usize,
        cop: usize,
        from: Vertex,
        to: Vertex,
    },
    #[error("edge-model round {round} lacks cop positions")]
    MissingPositions { round: usize },
    #[error("robber not captured")]
    NotCaptured,
}

/// `N+(R \ C) \ C`, applied `speed` times.
pub fn evolve_territory(
    g: &Graph,
    territory: &VertexSet,
    cops: &VertexSet,
    speed: usize,
) -> VertexSet {
    let n = g.n();
    let mut blocked = vec![false; n];
    for v in cops.iter() {
        blocked[v] = true;
    }
    let mut current: Vec<bool> = vec![false; n];
    for v in territory.iter().filter(|&v| !blocked[v]) {
        current[v] = true;
    }
    for _ in 0..speed {
        let mut next = vec![false; n];
        for v in (0..n).filter(|&v| current[v]) {
            next[v] = true;
            for &w in g.neighbors(v) {
                next[w] = true;
            }
        }
        for v in 0..n {
            next[v] &= !blocked[v];
        }
        current = next;
    }
    VertexSet::from_mask(&current)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub captured: bool,
    pub capture_round: Option<usize>,
    /// `|R_i|` for every round `i`.
    pub territory_trace: Vec<usize>,
    /// `R_{i+1} ⊆ R_i` throughout.
    pub monotone: bool,
    /// Territory equals the union of the Stack-B snapshot at every round that
    /// carries one; `None` when no round does.
    pub invariant_i: Option<bool>,
    /// Territory shrinks strictly between consecutive snapshot rounds while nonempty.
    pub strictly_decreasing: Option<bool>,
    /// Rounds where the Stack-B check failed.
    pub invariant_violations: Vec<usize>,
}

/// Replays a schedule against the territory oracle.
pub fn verify_schedule(g: &Graph, schedule: &Schedule) -> Result<VerificationReport, OracleError> {
    check_moves(g, schedule)?;
    let mut territory = g.vertex_set();
    let mut trace = Vec::with_capacity(schedule.rounds.len());
    let mut monotone = true;
    let mut capture_round = None;
    let mut snapshot_seen = false;
    let mut violations = Vec::new();
    let mut strictly = true;
    let mut last_boundary: Option<usize> = None;
    for (i, r) in schedule.rounds.iter().enumerate() {
        let next = if i == 0 {
            territory.difference(&r.occupied)
        } else {
            evolve_territory(g, &territory, &r.occupied, 1)
        };
        if !next.is_subset(&territory) {
            monotone = false;
        }
        territory = next;
        trace.push(territory.len());
        if territory.is_empty() && capture_round.is_none() {
            capture_round = Some(r.round);
        }
        if let Some(stack_b) = &r.stack_b {
            snapshot_seen = true;
            let union = VertexSet::union_all(stack_b.iter().map(|e| &e.set));
            if union != territory {
                violations.push(r.round);
            }
            if let Some(prev) = last_boundary {
                if prev > 0 && territory.len() >= prev {
                    strictly = false;
                }
            }
            last_boundary = Some(territory.len());
        }
    }
    Ok(VerificationReport {
        captured: territory.is_empty(),
        capture_round,
        territory_trace: trace,
        monotone,
        invariant_i: snapshot_seen.then_some(violations.is_empty()),
        strictly_decreasing: snapshot_seen.then_some(strictly),
        invariant_violations: violations,
    })
}

/// First round with an empty territory.
pub fn capture_time(g: &Graph, schedule: &Schedule) -> Result<usize, OracleError> {
    verify_schedule(g, schedule)?
        .capture_round
        .ok_or(OracleError::NotCaptured)
}

fn check_moves(g: &Graph, schedule: &Schedule) -> Result<(), OracleError> {
    let n = g.n();
    let mut previous: Option<&Vec<Vertex>> = None;
    for r in &schedule.rounds {
        if let Some(v) = r.occupied.iter().find(|&v| v >= n) {
            return Err(OracleError::VertexOutOfRange {
                round: r.round,
                vertex: v,
                n,
            });
        }
        let Some(positions) = &r.positions else {
            if schedule.stats.model == Model::Edge {
                return Err(OracleError::MissingPositions { round: r.round });
            }
            continue;
        };
        if positions.len() != schedule.stats.cops {
            return Err(OracleError::CopCount {
                round: r.round,
                expected: schedule.stats.cops,
                found: positions.len(),
            });
        }
        if let Some(&v) = positions.iter().find(|&&v| v >= n) {
            return Err(OracleError::VertexOutOfRange {
                round: r.round,
                vertex: v,
                n,
            });
        }
        if positions.iter().copied().collect::<VertexSet>() != r.occupied {
            return Err(OracleError::PositionsMismatch { round: r.round });
        }
        if let Some(prev) = previous {
            for (cop, (&from, &to)) in prev.iter().zip(positions).enumerate() {
                if from != to && !g.has_edge(from, to) {
                    return Err(OracleError::IllegalMove {
                        round: r.round,
                        cop,
                        from,
                        to,
                    });
                }
            }
        }
        previous = Some(positions);
    }
    Ok(())
}
