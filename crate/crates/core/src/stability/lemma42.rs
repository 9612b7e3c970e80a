//! The weak-to-strong upgrade for contractive approximation: when
//! ‖T_m x‖ ≤ ‖Sx‖, the expansion
//! ‖T_m x − Sx‖² = ‖Sx‖² + ‖T_m x‖² − 2ℜ⟨T_m x, Sx⟩ ≤ 2ℜ⟨(S − T_m)x, Sx⟩
//! bounds the strong error by a weak-topology quantity, so weak
//! convergence of T_m to S forces strong convergence.

use crate::error::{Error, Result};
use crate::operator::{apply_extended, OperatorRep};
use crate::space::SparseVector;

/// Slack allowed on the norm hypothesis ‖T_m x‖ ≤ ‖Sx‖.
pub const HYPOTHESIS_TOL: f64 = 1e-12;
/// Slack allowed on the inequality chain ‖T_m x − Sx‖² ≤ 2ℜ⟨(S − T_m)x, Sx⟩.
pub const CHAIN_TOL: f64 = 1e-10;

/// One (operator, probe) evaluation of the hypothesis and the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRow {
    pub operator_index: usize,
    pub probe_index: usize,
    /// ‖T_m x‖ ≤ ‖Sx‖ + tolerance; a violation flags the row but does not
    /// abort the report.
    pub hypothesis_ok: bool,
    /// ‖T_m x − Sx‖², the strong-error square.
    pub lhs: f64,
    /// 2ℜ⟨(S − T_m)x, Sx⟩, the weak-side bound.
    pub rhs: f64,
    /// lhs ≤ rhs + tolerance.
    pub chain_ok: bool,
    pub t_norm: f64,
    pub s_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakToStrongReport {
    pub rows: Vec<ProbeRow>,
    pub all_hypotheses_hold: bool,
    pub all_chains_hold: bool,
    /// Worst strong-error square per operator, in input order.
    pub strong_error_sq: Vec<f64>,
}

/// Evaluate Lemma-4.2-style domination of strong errors by weak-side
/// bounds for each approximant against the limit candidate.
pub fn weak_to_strong_check(
    ts: &[OperatorRep],
    s: &OperatorRep,
    probes: &[SparseVector],
) -> Result<WeakToStrongReport> {
    if ts.is_empty() {
        return Err(Error::domain("need at least one approximant"));
    }
    if probes.is_empty() {
        return Err(Error::domain("need at least one probe"));
    }
    s.validate()?;
    for t in ts {
        t.validate()?;
    }

    let mut rows = Vec::with_capacity(ts.len() * probes.len());
    let mut strong_error_sq = vec![0.0f64; ts.len()];
    for (pi, x) in probes.iter().enumerate() {
        let sx = apply_extended(s, x)?;
        let s_norm = sx.norm();
        for (oi, t) in ts.iter().enumerate() {
            let tx = apply_extended(t, x)?;
            let t_norm = tx.norm();
            let lhs = tx.sub(&sx).norm_sqr();
            let rhs = 2.0 * sx.sub(&tx).inner(&sx).re;
            let row = ProbeRow {
                operator_index: oi,
                probe_index: pi,
                hypothesis_ok: t_norm <= s_norm + HYPOTHESIS_TOL,
                lhs,
                rhs,
                chain_ok: lhs <= rhs + CHAIN_TOL,
                t_norm,
                s_norm,
            };
            strong_error_sq[oi] = strong_error_sq[oi].max(lhs);
            rows.push(row);
        }
    }

    Ok(WeakToStrongReport {
        all_hypotheses_hold: rows.iter().all(|r| r.hypothesis_ok),
        all_chains_hold: rows.iter().all(|r| r.chain_ok),
        rows,
        strong_error_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{CMatrix, DiagonalOp, Scalar};
    use crate::space::CompositeIndex;
    use num_complex::Complex64;

    fn e(slot: u64) -> SparseVector {
        SparseVector::basis(CompositeIndex::new(0, slot))
    }

    fn probes_with_small_support() -> Vec<SparseVector> {
        vec![
            e(0),
            e(0)
                .scale(Complex64::new(0.5, 0.0))
                .add(&e(2).scale(Complex64::new(0.0, -0.5)))
                .add(&e(6).scale(Complex64::new(0.25, 0.25))),
            e(5).scale(Complex64::new(-1.0, 2.0)),
        ]
    }

    #[test]
    fn cyclic_mixes_converge_strongly_to_the_shift() {
        let s = OperatorRep::RightShift { branches: 1 };
        let periods = [2u64, 4, 8, 16];
        let ts: Vec<_> = periods
            .iter()
            .map(|&period| OperatorRep::CyclicMix { period, branches: 1 })
            .collect();
        let probes = probes_with_small_support();
        let report = weak_to_strong_check(&ts, &s, &probes).unwrap();

        assert!(report.all_hypotheses_hold);
        assert!(report.all_chains_hold);
        // isometries both: the hypothesis holds with equality
        for row in &report.rows {
            assert!((row.t_norm - row.s_norm).abs() < 1e-12);
        }
        // once the period clears the probe support the mix acts exactly
        // like the shift on every probe
        assert!(report.strong_error_sq[0] > 0.1);
        assert_eq!(report.strong_error_sq[3], 0.0);
    }

    #[test]
    fn approximant_equal_to_the_limit_zeroes_both_sides() {
        let s = OperatorRep::RightShift { branches: 1 };
        let report =
            weak_to_strong_check(std::slice::from_ref(&s), &s, &probes_with_small_support())
                .unwrap();
        for row in &report.rows {
            assert_eq!(row.lhs, 0.0);
            assert_eq!(row.rhs, 0.0);
            assert!(row.hypothesis_ok && row.chain_ok);
        }
    }

    #[test]
    fn negated_limit_saturates_the_chain() {
        // T = −S: both sides collapse to 4‖Sx‖², so the chain holds with
        // equality.
        let s = OperatorRep::identity();
        let t = OperatorRep::Diagonal(DiagonalOp::constant(Scalar::root(1, 2).unwrap()).unwrap());
        let probes = probes_with_small_support();
        let report = weak_to_strong_check(std::slice::from_ref(&t), &s, &probes).unwrap();
        for (row, x) in report.rows.iter().zip(&probes) {
            let expect = 4.0 * x.norm_sqr();
            assert!((row.lhs - expect).abs() < 1e-12);
            assert!((row.rhs - expect).abs() < 1e-12);
            assert!(row.chain_ok);
        }
    }

    #[test]
    fn expansion_identity_holds_across_representations() {
        let reps = [
            OperatorRep::RightShift { branches: 1 },
            OperatorRep::CyclicMix { period: 3, branches: 1 },
            OperatorRep::Diagonal(DiagonalOp::constant(Scalar::root(1, 5).unwrap()).unwrap()),
            OperatorRep::Dense(
                CMatrix::from_rows(vec![
                    vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)],
                    vec![Complex64::new(0.0, 0.8), Complex64::new(0.6, 0.0)],
                ])
                .unwrap(),
            ),
        ];
        // supports stay inside the 2×2 dense block
        let probes = [
            e(0),
            e(0)
                .scale(Complex64::new(0.5, 0.0))
                .add(&e(1).scale(Complex64::new(0.0, -0.5))),
            e(1).scale(Complex64::new(-1.0, 2.0)),
        ];
        for t in &reps {
            for s in &reps {
                for x in &probes {
                    let tx = apply_extended(t, x).unwrap();
                    let sx = apply_extended(s, x).unwrap();
                    let lhs = tx.sub(&sx).norm_sqr();
                    let expanded = sx.norm_sqr() + tx.norm_sqr() - 2.0 * tx.inner(&sx).re;
                    assert!((lhs - expanded).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn hypothesis_violation_is_flagged_not_fatal() {
        let t = OperatorRep::Dense(
            CMatrix::from_rows(vec![vec![Complex64::new(2.0, 0.0)]]).unwrap(),
        );
        let s = OperatorRep::identity();
        let report = weak_to_strong_check(std::slice::from_ref(&t), &s, &[e(0)]).unwrap();
        let row = &report.rows[0];
        assert!(!row.hypothesis_ok);
        assert!(!row.chain_ok, "‖2x − x‖² = 1 > −2 = weak side");
        assert!(!report.all_hypotheses_hold);
        assert!(!report.all_chains_hold);
    }

    #[test]
    fn empty_inputs_are_domain_errors() {
        let s = OperatorRep::identity();
        assert!(weak_to_strong_check(&[], &s, &[e(0)]).is_err());
        assert!(weak_to_strong_check(std::slice::from_ref(&s), &s, &[]).is_err());
    }
}
