use super::{separation_from_separator, Balance, SeparationResult, SeparatorError};
use crate::graph::{Graph, VertexSet};

/// Minimum-size balanced separation by exhaustive search.
///
/// Candidate separators are enumerated by increasing size. A candidate is
/// admissible when every component of `G - S` fits on one side. Among the
/// admissible separators of the smallest size, the one with the smaller
/// larger side wins, then the one with the smaller bitmask.
pub fn exact_min_balanced_separator(
    g: &Graph,
    alpha: Balance,
    cap: usize,
) -> Result<SeparationResult, SeparatorError> {
    let n = g.n();
    if n > cap || n >= 64 {
        return Err(SeparatorError::CapExceeded { n, cap });
    }
    for size in 0..=n {
        let mut best: Option<SeparationResult> = None;
        let mut mask: u64 = if size == 0 { 0 } else { (1u64 << size) - 1 };
        let limit = 1u64 << n;
        while mask < limit {
            let s: VertexSet = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if let Some(r) = separation_from_separator(g, s, alpha) {
                let heavier = |r: &SeparationResult| r.a.len().max(r.b.len());
                if best.as_ref().is_none_or(|b| heavier(&r) < heavier(b)) {
                    best = Some(r);
                }
            }
            if mask == 0 {
                break;
            }
            // next mask with the same popcount (Gosper's hack)
            let low = mask & mask.wrapping_neg();
            let ripple = mask + low;
            mask = (((ripple ^ mask) >> 2) / low) | ripple;
        }
        if let Some(r) = best {
            return Ok(r);
        }
    }
    Err(SeparatorError::NoSeparation)
}
