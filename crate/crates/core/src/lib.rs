//! Capturing an invisible robber with separation tree traversal.
//!
//! The crate builds binary separation trees from balanced vertex separators,
//! turns them into cop schedules, compares them with path-decomposition
//! sweeps, and certifies every schedule with a territory oracle.

pub mod experiment;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod pw;
pub mod schedule;
pub mod separators;
pub mod septree;
pub mod stt;
