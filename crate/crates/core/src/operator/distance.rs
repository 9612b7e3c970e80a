//! Exact sup-distance between two diagonal operators:
//! ‖A − B‖ = sup_s |a_s − b_s|.
//!
//! Explicit entries are compared directly. The two tail rules are both
//! periodic in the slot index, so their pointwise difference repeats with
//! the joint period; taking the max over one full period beyond the last
//! explicit slot covers every remaining slot exactly. Joint periods past
//! the cap are refused rather than sampled.

use crate::error::Result;

use super::rep::DiagonalOp;

pub fn diagonal_distance(a: &DiagonalOp, b: &DiagonalOp) -> Result<f64> {
    let mut sup: f64 = 0.0;

    // Slots where at least one side stores an explicit entry.
    let mut explicit: Vec<u64> = a
        .explicit_entries()
        .keys()
        .chain(b.explicit_entries().keys())
        .copied()
        .collect();
    explicit.sort_unstable();
    explicit.dedup();
    for &s in &explicit {
        sup = sup.max((a.entry(s).to_c64() - b.entry(s).to_c64()).norm());
    }

    // Pure tail region: one joint period starting past every explicit slot.
    let period = a.tail().joint_period(b.tail())? as u64;
    let start = explicit.last().map(|&s| s + 1).unwrap_or(0);
    for s in start..start + period {
        if explicit.binary_search(&s).is_ok() {
            continue;
        }
        sup = sup.max((a.tail().entry(s).to_c64() - b.tail().entry(s).to_c64()).norm());
    }
    // Residues of the joint period shadowed by explicit entries in the
    // window above still occur at later slots; pick them up one period on.
    for &s in &explicit {
        if s >= start {
            let later = s + period;
            sup = sup.max(
                (a.tail().entry(later).to_c64() - b.tail().entry(later).to_c64()).norm(),
            );
        }
    }
    Ok(sup)
}
