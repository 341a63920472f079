//! Cop schedules: the round-by-round record shared by both engines, its
//! JSON-lines form, and the realisation of teleport moves as edge travel.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{bfs_distances, path_along, Graph, Vertex, VertexSet};
use crate::septree::IndexString;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Teleport,
    Edge,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Teleport => "teleport",
            Model::Edge => "edge",
        })
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "teleport" => Ok(Model::Teleport),
            "edge" => Ok(Model::Edge),
            other => Err(format!("unknown model {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Stt,
    Pw,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Stt => "stt",
            Algorithm::Pw => "pw",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "stt" => Ok(Algorithm::Stt),
            "pw" => Ok(Algorithm::Pw),
            other => Err(format!("unknown algorithm {other:?}")),
        }
    }
}

/// What a configuration realises. Serialised as `initial`, `separate:<bits>`,
/// `clear:<bits>` or `bag:<i>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Event {
    Initial,
    Separate(IndexString),
    Clear(IndexString),
    Bag(usize),
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Initial => f.write_str("initial"),
            Event::Separate(w) => write!(f, "separate:{}", w.as_str()),
            Event::Clear(w) => write!(f, "clear:{}", w.as_str()),
            Event::Bag(i) => write!(f, "bag:{i}"),
        }
    }
}

impl FromStr for Event {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits =
            |b: &str| IndexString::parse(b).ok_or_else(|| format!("bad index in event {s:?}"));
        match s.split_once(':') {
            None if s == "initial" => Ok(Event::Initial),
            Some(("separate", b)) => Ok(Event::Separate(bits(b)?)),
            Some(("clear", b)) => Ok(Event::Clear(bits(b)?)),
            Some(("bag", i)) => i
                .parse()
                .map(Event::Bag)
                .map_err(|_| format!("bad bag number in {s:?}")),
            _ => Err(format!("unknown event {s:?}")),
        }
    }
}

impl Serialize for Event {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Event {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackEntry {
    pub index: IndexString,
    pub set: VertexSet,
}

/// One game round: where the cops stand once they have moved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub round: usize,
    pub occupied: VertexSet,
    pub event: Event,
    /// Scheduler iteration (or bag number) the round belongs to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iteration: Option<usize>,
    /// Edge model: true on the round that completes the event.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub complete: bool,
    /// Edge model: position of every cop.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stack_b: Option<Vec<StackEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stack_c: Option<Vec<StackEntry>>,
}

impl Round {
    pub fn new(round: usize, occupied: VertexSet, event: Event) -> Self {
        Self {
            round,
            occupied,
            event,
            iteration: None,
            complete: false,
            positions: None,
            stack_b: None,
            stack_c: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleStats {
    pub algorithm: Algorithm,
    pub model: Model,
    pub n: usize,
    pub cops: usize,
    pub rounds: usize,
    /// Scheduler iterations (STT) or bags (PW).
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peak_stack_mass: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub rounds: Vec<Round>,
    pub stats: ScheduleStats,
}

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("missing stats record")]
    MissingStats,
    #[error("line {line}: record after the stats record")]
    TrailingRecord { line: usize },
    #[error("round {round}: expected round number {expected}")]
    RoundNumber { round: usize, expected: usize },
}

#[derive(Serialize, Deserialize)]
struct StatsRecord {
    stats: ScheduleStats,
}

impl Schedule {
    pub fn max_concurrent_cops(&self) -> usize {
        match self.stats.model {
            Model::Teleport => self
                .rounds
                .iter()
                .map(|r| r.occupied.len())
                .max()
                .unwrap_or(0),
            Model::Edge => self.stats.cops,
        }
    }

    /// One record per round followed by `{"stats": ...}`.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.rounds {
            out.push_str(&serde_json::to_string(r).expect("rounds serialize"));
            out.push('\n');
        }
        out.push_str(
            &serde_json::to_string(&StatsRecord {
                stats: self.stats.clone(),
            })
            .expect("stats serialize"),
        );
        out.push('\n');
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Schedule, ScheduleError> {
        let mut rounds = Vec::new();
        let mut stats = None;
        for (i, line) in text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
        {
            let line_no = i + 1;
            if stats.is_some() {
                return Err(ScheduleError::TrailingRecord { line: line_no });
            }
            let value: serde_json::Value =
                serde_json::from_str(line).map_err(|source| ScheduleError::Json {
                    line: line_no,
                    source,
                })?;
            if value.get("stats").is_some() {
                let rec: StatsRecord =
                    serde_json::from_value(value).map_err(|source| ScheduleError::Json {
                        line: line_no,
                        source,
                    })?;
                stats = Some(rec.stats);
            } else {
                let r: Round =
                    serde_json::from_value(value).map_err(|source| ScheduleError::Json {
                        line: line_no,
                        source,
                    })?;
                if r.round != rounds.len() + 1 {
                    return Err(ScheduleError::RoundNumber {
                        round: r.round,
                        expected: rounds.len() + 1,
                    });
                }
                rounds.push(r);
            }
        }
        Ok(Schedule {
            rounds,
            stats: stats.ok_or(ScheduleError::MissingStats)?,
        })
    }
}

/// A target configuration of the teleport model, to be reached by travel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phase {
    pub targets: VertexSet,
    pub event: Event,
    pub iteration: Option<usize>,
}

/// Realises a sequence of teleport configurations with `cops` cops that
/// move along at most one edge per round.
///
/// Round 1 puts every cop on vertex 0. For each phase, cops already standing
/// on a target stay put (one per vertex); the remaining targets get the other
/// cops greedily, nearest pair first (ties by target id, then cop number).
/// Assigned cops walk lexicographically smallest shortest paths, all in
/// lockstep; the phase lasts until every target is occupied, and at least one
/// round. Unassigned cops wait where they are.
///
/// Panics if a phase has more targets than cops or the graph is disconnected.
pub fn realize_edge_phases(g: &Graph, cops: usize, phases: &[Phase]) -> Vec<Round> {
    assert!(g.n() > 0, "edge travel needs a vertex to start from");
    let mut positions = vec![0; cops];
    let mut first = Round::new(1, occupied_by(&positions), Event::Initial);
    first.positions = Some(positions.clone());
    let mut rounds = vec![first];
    for phase in phases {
        assert!(
            phase.targets.len() <= cops,
            "phase needs more cops than available"
        );
        let mut held = vec![false; cops];
        let mut covered = vec![false; g.n()];
        for (c, &p) in positions.iter().enumerate() {
            if !covered[p] && phase.targets.contains(p) {
                held[c] = true;
                covered[p] = true;
            }
        }
        let open: Vec<Vertex> = phase.targets.iter().filter(|&t| !covered[t]).collect();
        let fields: Vec<Vec<usize>> = open.iter().map(|&t| bfs_distances(g, t)).collect();
        let mut pairs: Vec<(usize, Vertex, usize, usize)> = Vec::new();
        for (ti, &t) in open.iter().enumerate() {
            for c in (0..cops).filter(|&c| !held[c]) {
                pairs.push((fields[ti][positions[c]], t, c, ti));
            }
        }
        pairs.sort_unstable();
        let mut target_of: Vec<Option<usize>> = vec![None; cops];
        let mut taken = vec![false; open.len()];
        for (_, _, c, ti) in pairs {
            if target_of[c].is_none() && !taken[ti] {
                target_of[c] = Some(ti);
                taken[ti] = true;
            }
        }
        let routes: Vec<Vec<Vertex>> = (0..cops)
            .map(|c| match target_of[c] {
                Some(ti) => path_along(g, &fields[ti], positions[c]).expect("graph is connected"),
                None => vec![positions[c]],
            })
            .collect();
        let steps = routes.iter().map(|r| r.len() - 1).max().unwrap_or(0).max(1);
        for step in 1..=steps {
            for (c, route) in routes.iter().enumerate() {
                positions[c] = route[step.min(route.len() - 1)];
            }
            let mut r = Round::new(
                rounds.len() + 1,
                occupied_by(&positions),
                phase.event.clone(),
            );
            r.iteration = phase.iteration;
            r.positions = Some(positions.clone());
            r.complete = step == steps;
            rounds.push(r);
        }
        debug_assert!(phase
            .targets
            .is_subset(&rounds.last().expect("nonempty").occupied));
    }
    rounds
}

fn occupied_by(positions: &[Vertex]) -> VertexSet {
    positions.iter().copied().collect()
}
