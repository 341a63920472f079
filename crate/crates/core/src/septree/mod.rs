//! Binary separation trees and the bounds that govern them.

mod bounds;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{induced_subgraph, Graph, VertexSet};
use crate::separators::{validate_separation, SeparatorError, Strategy};

pub use bounds::{
    capture_time_bound, ceil_sqrt, cop_bound, ell, node_bound, phi, phi_bound, shrink_floor,
    BoundError, BoundProfile, PhiTable, SizeBudget,
};

/// Binary-string index of a node; the empty string is the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexString(String);

impl IndexString {
    pub fn root() -> Self {
        Self(String::new())
    }

    pub fn parse(bits: &str) -> Option<Self> {
        bits.bytes()
            .all(|b| b == b'0' || b == b'1')
            .then(|| Self(bits.to_string()))
    }

    pub fn child(&self, bit: u8) -> Self {
        debug_assert!(bit <= 1);
        let mut s = self.0.clone();
        s.push(if bit == 0 { '0' } else { '1' });
        Self(s)
    }

    /// Drops the final bit; `None` stands for the sentinel returned on the root.
    pub fn del_last(&self) -> Option<Self> {
        let mut s = self.0.clone();
        s.pop().map(|_| Self(s))
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for IndexString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("ε")
        } else {
            f.write_str(&self.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeError {
    #[error("separation of node {index} failed: {source}")]
    Separator {
        index: IndexString,
        #[source]
        source: SeparatorError,
    },
    #[error("node {index}: strategy returned an invalid separation")]
    InvalidSeparation { index: IndexString },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    pub vertices: VertexSet,
    /// `Sep(ω)` for internal nodes.
    pub separator: Option<VertexSet>,
    pub children: Vec<IndexString>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationTree {
    pub threshold: usize,
    pub nodes: BTreeMap<IndexString, TreeNode>,
    /// Construction order: depth first, "1" child before "0" child.
    pub order: Vec<IndexString>,
}

impl SeparationTree {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of levels; a lone root has height 1.
    pub fn height(&self) -> usize {
        self.nodes
            .keys()
            .map(IndexString::depth)
            .max()
            .map_or(0, |d| d + 1)
    }

    pub fn root(&self) -> Option<&TreeNode> {
        self.nodes.get(&IndexString::root())
    }

    pub fn leaves(&self) -> impl Iterator<Item = (&IndexString, &TreeNode)> {
        self.nodes
            .iter()
            .filter(|(_, node)| node.separator.is_none())
    }

    /// Largest separator relative to its node: `max |Sep(ω)|` together with `|ω|`.
    pub fn separators(&self) -> impl Iterator<Item = (&IndexString, &VertexSet, usize)> {
        self.nodes
            .iter()
            .filter_map(|(i, node)| node.separator.as_ref().map(|s| (i, s, node.vertices.len())))
    }

    /// `{index -> {vertices, separator, children}}`, root keyed by the empty string.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.nodes).expect("tree nodes serialize")
    }

    /// Checks the structural invariants against `g`, returning one message per violation.
    pub fn check(&self, g: &Graph) -> Vec<String> {
        let mut problems = Vec::new();
        for (index, node) in &self.nodes {
            let leaf = node.vertices.len() <= self.threshold;
            match (&node.separator, leaf) {
                (None, false) => problems.push(format!("{index}: oversized leaf")),
                (Some(_), true) => problems.push(format!("{index}: small internal node")),
                _ => {}
            }
            if let Some(s) = &node.separator {
                let side = |bit| {
                    let c = index.child(bit);
                    self.nodes
                        .get(&c)
                        .map(|n| n.vertices.clone())
                        .unwrap_or_default()
                };
                let (a, b) = (side(1), side(0));
                let parts = a.union(&b).union(s);
                if parts != node.vertices || parts.len() != a.len() + b.len() + s.len() {
                    problems.push(format!(
                        "{index}: children and separator do not partition the node"
                    ));
                }
                let limit = 2 * node.vertices.len();
                if 3 * a.len() > limit || 3 * b.len() > limit {
                    problems.push(format!("{index}: child above two thirds"));
                }
                if a.iter()
                    .any(|u| g.neighbors(u).iter().any(|&v| b.contains(v)))
                {
                    problems.push(format!("{index}: edge between children"));
                }
            }
        }
        problems
    }
}

/// Builds `T_sep` by repeatedly separating node sets larger than `threshold`.
///
/// Empty children are not materialised, so a node may have one child.
pub fn build_separation_tree(
    g: &Graph,
    strategy: &Strategy,
    threshold: usize,
) -> Result<SeparationTree, TreeError> {
    let mut nodes = BTreeMap::new();
    let mut order = Vec::new();
    let mut stack = vec![(g.vertex_set(), IndexString::root())];
    while let Some((set, index)) = stack.pop() {
        order.push(index.clone());
        if set.len() <= threshold {
            nodes.insert(
                index,
                TreeNode {
                    vertices: set,
                    separator: None,
                    children: Vec::new(),
                },
            );
            continue;
        }
        let view = induced_subgraph(g, &set).expect("node sets are vertex sets of g");
        let r = strategy
            .separate_view(&view)
            .map_err(|source| TreeError::Separator {
                index: index.clone(),
                source,
            })?;
        let local = crate::separators::SeparationResult::new(
            view.lower(&r.a),
            view.lower(&r.b),
            view.lower(&r.s),
        );
        if !validate_separation(view.graph(), &local, set.len()).is_valid() || r.s.is_empty() {
            return Err(TreeError::InvalidSeparation { index });
        }
        let mut children = Vec::new();
        if !r.b.is_empty() {
            children.push(index.child(0));
            stack.push((r.b, index.child(0)));
        }
        if !r.a.is_empty() {
            children.push(index.child(1));
            stack.push((r.a, index.child(1)));
        }
        nodes.insert(
            index,
            TreeNode {
                vertices: set,
                separator: Some(r.s),
                children,
            },
        );
    }
    Ok(SeparationTree {
        threshold,
        nodes,
        order,
    })
}
