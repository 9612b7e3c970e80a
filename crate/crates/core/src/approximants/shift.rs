//! Periodic approximation of the right shift.
//!
//! The approximant to the multiplicity-d shift is the cyclic permutation of
//! the first n slots on each branch (identity beyond).  It is unitary and
//! satisfies Tⁿ = I exactly, and it converges to the shift strongly: for a
//! vector with coordinates x₀, x₁, … on one branch (0-based slots),
//!
//!   ‖T x − R x‖² = |x_{n−1}|² + Σ_{k ≥ n} |x_k − x_{k−1}|²,
//!
//! which vanishes once the support sits inside the first n − 1 slots.  The
//! convergence is strong only — in operator norm every cyclic permutation
//! stays at distance ≥ 1 from the shift — so the report carries per-probe
//! errors rather than a uniform bound.

use crate::error::{Error, Result};
use crate::operator::OperatorRep;
use crate::space::SparseVector;

use super::report::{ApproxReport, Certificate, ProbeError};

/// The closed-form squared error ‖T_n x − R x‖² between the n-cycle and the
/// shift, summed over every branch the vector touches.
pub fn shift_error_sq(n: u64, x: &SparseVector) -> f64 {
    let Some(max_branch) = x.max_branch() else { return 0.0 };
    let mut total = 0.0;
    for b in 0..=max_branch {
        let coord = |slot: u64| x.get(crate::space::CompositeIndex { branch: b, slot });
        total += coord(n - 1).norm_sqr();
        if let Some(max_slot) = x.max_slot_on_branch(b) {
            // Beyond max_slot + 1 every difference is zero.
            for k in n..=max_slot + 1 {
                total += (coord(k) - coord(k - 1)).norm_sqr();
            }
        }
    }
    total
}

/// Returns the n-cycle on d branches together with per-probe forward
/// errors against the multiplicity-d right shift.  Adjoint errors are
/// deliberately absent: the approximation converges in the strong topology
/// of isometries, and the adjoints do not converge (R* is not an isometry).
pub fn periodic_approx_shift(
    n: u64,
    d: u32,
    probes: &[SparseVector],
) -> Result<(OperatorRep, ApproxReport)> {
    if n < 1 {
        return Err(Error::domain("cycle length n must be at least 1"));
    }
    if d < 1 {
        return Err(Error::domain("shift multiplicity d must be at least 1"));
    }
    let op = OperatorRep::CyclicMix { period: n, branches: d };
    let mut report = ApproxReport {
        certificate: Some(Certificate::Periodic { period: n as u128 }),
        ..ApproxReport::default()
    };
    let mut worst = 0.0f64;
    for x in probes {
        if let Some(b) = x.max_branch() {
            if b >= d {
                return Err(Error::BranchOutOfRange { branch: b, arity: d });
            }
        }
        let err = shift_error_sq(n, x).sqrt();
        worst = worst.max(err);
        report.probe_errors.push(ProbeError { forward: err, adjoint: None });
    }
    if !probes.is_empty() {
        report.achieved = Some(worst);
    }
    report.note(format!(
        "n-cycle on {d} branch(es); strong convergence only, no uniform bound"
    ));
    Ok((op, report))
}
