//! Approximation of isometries, periodic or almost weakly stable.
//!
//! The input is Wold-decomposed first; each unitary leaf then goes through
//! the unitary pipeline while each shift leaf becomes a cyclic window wide
//! enough to act exactly on the supplied probes.  In `Aws` mode the
//! periodic intermediate is handed to the eigenspace-inflation procedure,
//! which replaces every branch by an atom-free multiplication operator.
//!
//! Proximity is measured strongly (forward action on the probes): adjoints
//! are not tracked because shift approximants never converge in the
//! adjoint direction.

use crate::error::{Error, Result};
use crate::operator::{apply_sparse, OperatorRep, CLASSIFY_TOL};
use crate::space::SparseVector;
use crate::spectral::{wold_decompose, WOLD_HORIZON};

use super::aws_periodic::aws_approx_periodic;
use super::periodic::periodic_approx_unitary;
use super::report::{ApproxReport, Certificate, ProbeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsometryTarget {
    /// Approximate by a periodic isometry with period > N.
    Periodic,
    /// Approximate by an almost weakly stable operator (no unimodular
    /// eigenvalues).
    Aws,
}

pub fn approx_isometry(
    v: &OperatorRep,
    mode: IsometryTarget,
    n_floor: u64,
    eps: f64,
    probes: &[SparseVector],
) -> Result<(OperatorRep, ApproxReport)> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::domain("tolerance must be a positive finite number"));
    }
    if n_floor < 1 {
        return Err(Error::domain("period floor N must be at least 1"));
    }
    // Certifies the isometry class (and fails with ClassMismatch otherwise).
    let wold = wold_decompose(v, WOLD_HORIZON)?;

    // Stage 1: a periodic replacement, leaf by leaf.
    let leaves = v.leaves();
    let mut replaced = Vec::with_capacity(leaves.len());
    let mut period: u128 = 1;
    let mut uniform: f64 = 0.0;
    let mut notes = Vec::new();
    for (offset, leaf) in &leaves {
        match leaf {
            OperatorRep::Diagonal(d) => {
                if !d.is_unimodular(CLASSIFY_TOL) {
                    return Err(Error::ClassMismatch(
                        "an isometric diagonal must be unitary; found an entry off the circle"
                            .into(),
                    ));
                }
                let budget = if mode == IsometryTarget::Aws { eps / 2.0 } else { eps };
                let (p, rep) = periodic_approx_unitary(leaf, n_floor, budget)?;
                if let Some(Certificate::Periodic { period: q }) = rep.certificate {
                    period = crate::operator::lcm_u128(period, q)
                        .ok_or_else(|| Error::Capacity("joint period overflows u128".into()))?;
                }
                uniform = uniform.max(rep.achieved.unwrap_or(budget));
                replaced.push(p);
            }
            OperatorRep::SpectralUnitary(_) => {
                if mode == IsometryTarget::Aws {
                    return Err(Error::unsupported(
                        "aws replacement of spectral branches is not available: probes are \
                         sparse vectors and cannot address an L² branch",
                    ));
                }
                let (p, rep) = periodic_approx_unitary(leaf, n_floor, eps)?;
                if let Some(Certificate::Periodic { period: q }) = rep.certificate {
                    period = crate::operator::lcm_u128(period, q)
                        .ok_or_else(|| Error::Capacity("joint period overflows u128".into()))?;
                }
                uniform = uniform.max(rep.achieved.unwrap_or(eps));
                replaced.push(p);
            }
            OperatorRep::RightShift { branches } => {
                // A window wide enough that every probe sits strictly inside
                // it acts exactly like the shift on those probes.
                let mut max_slot = 0u64;
                for x in probes {
                    for b in *offset..offset + branches {
                        if let Some(s) = x.max_slot_on_branch(b) {
                            max_slot = max_slot.max(s);
                        }
                    }
                }
                let n_cyc = (n_floor + 1).max(max_slot + 2);
                period = crate::operator::lcm_u128(period, n_cyc as u128)
                    .ok_or_else(|| Error::Capacity("joint period overflows u128".into()))?;
                notes.push(format!(
                    "shift branches {}..{} replaced by a {n_cyc}-cycle (exact on the probes)",
                    offset,
                    offset + branches
                ));
                replaced.push(OperatorRep::CyclicMix { period: n_cyc, branches: *branches });
            }
            OperatorRep::CyclicMix { period: p, branches } => {
                if (*p as u128) <= n_floor as u128 {
                    return Err(Error::unsupported(format!(
                        "cyclic leaf of period {p} at or below the floor {n_floor}: re-snapping \
                         a cyclic window needs a dense block, which has no exact period"
                    )));
                }
                period = crate::operator::lcm_u128(period, *p as u128)
                    .ok_or_else(|| Error::Capacity("joint period overflows u128".into()))?;
                replaced.push(OperatorRep::CyclicMix { period: *p, branches: *branches });
            }
            OperatorRep::Dense(_) => {
                return Err(Error::unsupported(
                    "dense isometry leaves have no exact period certificate; \
                     approximate them through the polar factor instead",
                ));
            }
            OperatorRep::DirectSum(_) => unreachable!("leaves() flattens sums"),
        }
    }
    let periodic = if replaced.len() == 1 {
        replaced.pop().expect("one leaf")
    } else {
        OperatorRep::DirectSum(replaced)
    };

    // Forward probe errors against the original, computed by application.
    let mut stage1 = Vec::with_capacity(probes.len());
    for x in probes {
        let err = apply_sparse(v, x)?.sub(&apply_sparse(&periodic, x)?).norm();
        stage1.push(err);
    }

    match mode {
        IsometryTarget::Periodic => {
            let mut report = ApproxReport {
                requested_eps: Some(eps),
                achieved: stage1.iter().cloned().fold(None, |acc: Option<f64>, e| {
                    Some(acc.map_or(e, |a| a.max(e)))
                }),
                bound: Some(uniform),
                certificate: Some(Certificate::Periodic { period }),
                probe_errors: stage1
                    .iter()
                    .map(|&e| ProbeError { forward: e, adjoint: None })
                    .collect(),
                ..ApproxReport::default()
            };
            report.note(format!(
                "Wold split: {} unitary / {} shift branch(es), shift multiplicity {}",
                wold.unitary_branches.len(),
                wold.shift_branches.len(),
                wold.multiplicity
            ));
            for n in notes {
                report.note(n);
            }
            Ok((periodic, report))
        }
        IsometryTarget::Aws => {
            let (t, inner) = aws_approx_periodic(&periodic, probes, eps / 2.0)?;
            let mut report = inner;
            // Triangle inequality: distance to the original is the stage-1
            // defect plus the inflation defect.
            for (pe, s1) in report.probe_errors.iter_mut().zip(&stage1) {
                pe.forward += s1;
                pe.adjoint = None;
            }
            report.requested_eps = Some(eps);
            report.achieved = report
                .probe_errors
                .iter()
                .map(|pe| pe.forward)
                .fold(None, |acc: Option<f64>, e| Some(acc.map_or(e, |a| a.max(e))));
            if let Some(a) = report.achieved {
                if a >= eps {
                    return Err(Error::CertificateFailure(format!(
                        "combined probe error {a:.3e} reached the requested {eps:.3e}"
                    )));
                }
            }
            report.note(format!(
                "two stages: periodic replacement (uniform defect {uniform:.3e} on unitary \
                 leaves, exact on shift probes), then eigenspace inflation"
            ));
            Ok((t, report))
        }
    }
}
