//! Separation tree traversal: the scheduler with its two stacks, emitted as
//! cop schedules in the teleport and edge-travel models.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{induced_subgraph, Graph, VertexSet};
use crate::schedule::{
    realize_edge_phases, Algorithm, Event, Model, Phase, Round, Schedule, ScheduleStats, StackEntry,
};
use crate::separators::{validate_separation, SeparationResult, SeparatorError, Strategy};
use crate::septree::SizeBudget;

pub use crate::septree::IndexString;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SttError {
    #[error("graph is empty")]
    EmptyGraph,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("node {index}: {source}")]
    Separator {
        index: IndexString,
        #[source]
        source: SeparatorError,
    },
    #[error("node {index}: separator of size {size} exceeds the budget f({node_size}) = {budget}")]
    OverBudget {
        index: IndexString,
        size: usize,
        node_size: usize,
        budget: u64,
    },
    #[error("node {index}: invalid separation")]
    InvalidSeparation { index: IndexString },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SttStats {
    pub iterations: usize,
    pub max_concurrent_cops: usize,
    /// Largest total size of all Stack-B and Stack-C sets after an iteration.
    pub peak_stack_mass: usize,
    /// Separations performed, i.e. internal nodes of the traversed tree.
    pub separations: usize,
    /// Stack-C entries popped before termination.
    pub released_separators: usize,
}

impl SttStats {
    /// Nodes of the traversed separation tree.
    pub fn tree_nodes(&self) -> usize {
        self.iterations
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SttRun {
    pub schedule: Schedule,
    pub stats: SttStats,
}

/// Runs the scheduler in the teleport model: one configuration per
/// iteration, holding the guards on Stack-C plus the new separator or the
/// cleared set. Every round carries the stacks as they stand after it.
pub fn stt_schedule_teleport(
    g: &Graph,
    strategy: &Strategy,
    f: &SizeBudget,
) -> Result<SttRun, SttError> {
    let n = g.n();
    if n == 0 {
        return Err(SttError::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(SttError::Disconnected);
    }
    let threshold = f.eval(n as u64) as usize;
    let mut stack_b: Vec<StackEntry> = vec![StackEntry {
        index: IndexString::root(),
        set: g.vertex_set(),
    }];
    let mut stack_c: Vec<StackEntry> = Vec::new();
    let mut rounds = Vec::new();
    let mut stats = SttStats::default();
    while let Some(StackEntry { set: u, index }) = stack_b.pop() {
        let pre = index.del_last();
        while stack_c
            .last()
            .is_some_and(|top| Some(&top.index) != pre.as_ref())
        {
            stack_c.pop();
            stats.released_separators += 1;
        }
        let (placed, event) = if u.len() <= threshold {
            (u, Event::Clear(index))
        } else {
            let r = separate_node(g, strategy, f, &u, &index)?;
            stats.separations += 1;
            stack_c.push(StackEntry {
                index: index.clone(),
                set: r.s.clone(),
            });
            if !r.b.is_empty() {
                stack_b.push(StackEntry {
                    index: index.child(0),
                    set: r.b,
                });
            }
            if !r.a.is_empty() {
                stack_b.push(StackEntry {
                    index: index.child(1),
                    set: r.a,
                });
            }
            (r.s, Event::Separate(index))
        };
        // the fresh separator is already on Stack-C
        let occupied = VertexSet::union_all(stack_c.iter().map(|e| &e.set)).union(&placed);
        stats.iterations += 1;
        stats.max_concurrent_cops = stats.max_concurrent_cops.max(occupied.len());
        let mass: usize = stack_b.iter().chain(&stack_c).map(|e| e.set.len()).sum();
        stats.peak_stack_mass = stats.peak_stack_mass.max(mass);
        let mut round = Round::new(rounds.len() + 1, occupied, event);
        round.iteration = Some(stats.iterations);
        round.stack_b = Some(stack_b.clone());
        round.stack_c = Some(stack_c.clone());
        rounds.push(round);
    }
    let schedule = Schedule {
        stats: ScheduleStats {
            algorithm: Algorithm::Stt,
            model: Model::Teleport,
            n,
            cops: stats.max_concurrent_cops,
            rounds: rounds.len(),
            iterations: stats.iterations,
            peak_stack_mass: Some(stats.peak_stack_mass),
            tree_nodes: Some(stats.tree_nodes()),
            width: None,
        },
        rounds,
    };
    Ok(SttRun { schedule, stats })
}

/// Runs the scheduler and realises each configuration by edge travel with as
/// many cops as the teleport run needed at once.
pub fn stt_schedule_edge(
    g: &Graph,
    strategy: &Strategy,
    f: &SizeBudget,
) -> Result<SttRun, SttError> {
    let teleport = stt_schedule_teleport(g, strategy, f)?;
    Ok(edge_from_teleport(g, teleport))
}

/// Converts a teleport run into its edge-travel realisation.
pub fn edge_from_teleport(g: &Graph, teleport: SttRun) -> SttRun {
    let cops = teleport.stats.max_concurrent_cops;
    let phases: Vec<Phase> = teleport
        .schedule
        .rounds
        .iter()
        .map(|r| Phase {
            targets: r.occupied.clone(),
            event: r.event.clone(),
            iteration: r.iteration,
        })
        .collect();
    let rounds = realize_edge_phases(g, cops, &phases);
    let mut stats = teleport.schedule.stats;
    stats.model = Model::Edge;
    stats.rounds = rounds.len();
    SttRun {
        schedule: Schedule { rounds, stats },
        stats: teleport.stats,
    }
}

fn separate_node(
    g: &Graph,
    strategy: &Strategy,
    f: &SizeBudget,
    u: &VertexSet,
    index: &IndexString,
) -> Result<SeparationResult, SttError> {
    let view = induced_subgraph(g, u).expect("stack sets are vertex sets of g");
    let r = strategy
        .separate_view(&view)
        .map_err(|source| SttError::Separator {
            index: index.clone(),
            source,
        })?;
    let budget = f.eval(u.len() as u64);
    if r.s.len() as u64 > budget {
        return Err(SttError::OverBudget {
            index: index.clone(),
            size: r.s.len(),
            node_size: u.len(),
            budget,
        });
    }
    let local = SeparationResult::new(view.lower(&r.a), view.lower(&r.b), view.lower(&r.s));
    if r.s.is_empty() || !validate_separation(view.graph(), &local, u.len()).is_valid() {
        return Err(SttError::InvalidSeparation {
            index: index.clone(),
        });
    }
    Ok(r)
}
