//! Membership in the category-theorem sets: the closed sets M_k and their
//! intersections N_n, and the small-correlation sets W_{jkn} with their
//! for-all-n complements.
//!
//! M_k and W_{jkn} are single exact correlation values. N_n and W_{jk}ᶜ
//! quantify over infinitely many exponents, so in/out verdicts are only
//! issued with a certificate: a finite exceedance witness (exact), one
//! full period of a periodic unitary (the correlation sequence then
//! repeats, so a window covers every exponent), or an eigenvector
//! alignment whose lower bound |⟨Tⁿx_j, x_j⟩| ≥ 1 − d² − 2d holds for all
//! n at once. Anything else is reported undecided at the horizon.

use crate::approximants::detect_period;
use crate::error::{Error, Result};
use crate::operator::{
    apply_power_sparse, is_at_least, OperatorClass, OperatorRep, CLASSIFY_TOL,
};
use crate::space::{test_vector_in, SparseVector, Vector};
use crate::spectral::{unimodular_point_spectrum, EigenWitness, UNIMODULAR_TOL};

use super::correlation_sequence;

/// Longest period window the certifier will scan in full.
pub const PERIOD_WINDOW_CAP: u64 = 1 << 20;

/// The sets from the category arguments, with their parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum CategorySet {
    /// M_k = {T : |⟨T^k x, x⟩| ≤ 1/2} for a fixed unit vector x.
    MK { x: SparseVector, k: u64 },
    /// N_n = ∩_{k≥n} M_k.
    NN { x: SparseVector, n: u64 },
    /// W_{jkn} = {T : |⟨Tⁿ x_j, x_j⟩| < 1/k} over the canonical family.
    WJKN { j: u64, k: u64, n: u64 },
    /// {T : |⟨Tⁿ x_j, x_j⟩| ≥ 1/k for every n ≥ 1}, the complement of
    /// ∪_n W_{jkn}.
    WJKComplement { j: u64, k: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    UndecidedAtHorizon,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub membership: Membership,
    /// The exponent that decided, when a single correlation value did.
    pub witness_exponent: Option<u64>,
    /// |⟨Tⁿx, x⟩| at the witness exponent, or the certified lower bound
    /// when an eigenvector alignment decided.
    pub witness_value: Option<f64>,
    /// Largest exponent examined.
    pub checked: u64,
    pub notes: Vec<String>,
}

/// Decide membership of the operator in the set, scanning at most
/// `horizon` exponents when no certificate shortens the work.
pub fn set_membership(
    op: &OperatorRep,
    set: &CategorySet,
    horizon: u64,
) -> Result<MembershipReport> {
    op.validate()?;
    if !is_at_least(op, OperatorClass::Contraction, CLASSIFY_TOL)? {
        return Err(Error::ClassMismatch(
            "category sets are defined over contractions".into(),
        ));
    }
    if horizon == 0 {
        return Err(Error::domain("horizon must be at least 1"));
    }
    match set {
        CategorySet::MK { x, k } => {
            require_unit(x)?;
            require_positive(*k, "exponent k")?;
            let val = single_correlation(op, x, *k)?;
            Ok(MembershipReport {
                membership: if val <= 0.5 { Membership::In } else { Membership::Out },
                witness_exponent: Some(*k),
                witness_value: Some(val),
                checked: *k,
                notes: vec![],
            })
        }
        CategorySet::NN { x, n } => {
            require_unit(x)?;
            require_positive(*n, "starting exponent n")?;
            decide_for_all(op, x, *n, horizon, 0.5, ForAll::AtMost)
        }
        CategorySet::WJKN { j, k, n } => {
            require_positive(*k, "reciprocal index k")?;
            require_positive(*n, "exponent n")?;
            let x = test_vector_in(op.arity(), *j)?;
            let val = single_correlation(op, &x, *n)?;
            let threshold = 1.0 / *k as f64;
            Ok(MembershipReport {
                membership: if val < threshold { Membership::In } else { Membership::Out },
                witness_exponent: Some(*n),
                witness_value: Some(val),
                checked: *n,
                notes: vec![],
            })
        }
        CategorySet::WJKComplement { j, k } => {
            require_positive(*k, "reciprocal index k")?;
            let x = test_vector_in(op.arity(), *j)?;
            let threshold = 1.0 / *k as f64;
            decide_for_all(op, &x, 1, horizon, threshold, ForAll::AtLeast)
        }
    }
}

/// Which way the for-all condition points: N_n wants every |c_k| ≤ bound,
/// the W complement wants every |c_n| ≥ bound.
#[derive(Clone, Copy, PartialEq)]
enum ForAll {
    AtMost,
    AtLeast,
}

fn decide_for_all(
    op: &OperatorRep,
    x: &SparseVector,
    start: u64,
    horizon: u64,
    threshold: f64,
    dir: ForAll,
) -> Result<MembershipReport> {
    let violates = |v: f64| match dir {
        ForAll::AtMost => v > threshold,
        ForAll::AtLeast => v < threshold,
    };
    let mut notes = Vec::new();

    let period = usable_period(op, &mut notes);
    let scan_end = match period {
        Some(p) => start
            .checked_add(p - 1)
            .ok_or_else(|| Error::Capacity("period window overflows".into()))?,
        None => horizon.max(start),
    };

    let series = correlation_sequence(op, &Vector::Sparse(x.clone()), &Vector::Sparse(x.clone()), scan_end)?;
    for m in start..=scan_end {
        let v = series.value(m).expect("series covers the scan").norm();
        if violates(v) {
            // One finite violation refutes the for-all condition exactly.
            return Ok(MembershipReport {
                membership: Membership::Out,
                witness_exponent: Some(m),
                witness_value: Some(v),
                checked: m,
                notes,
            });
        }
    }

    if let Some(p) = period {
        notes.push(format!(
            "operator period {p}: the window [{start}, {scan_end}] covers every \
             exponent ≥ {start}"
        ));
        return Ok(MembershipReport {
            membership: Membership::In,
            witness_exponent: None,
            witness_value: None,
            checked: scan_end,
            notes,
        });
    }

    // The scan was inconclusive; an eigenvector aligned with x bounds every
    // correlation from below at once.
    if let Some((bound, value)) = best_alignment_bound(op, x)? {
        let certifies = match dir {
            // all |c| ≥ bound > threshold refutes "all ≤ threshold"
            ForAll::AtMost if bound > threshold => Some(Membership::Out),
            // all |c| ≥ bound ≥ threshold certifies "all ≥ threshold"
            ForAll::AtLeast if bound >= threshold => Some(Membership::In),
            _ => None,
        };
        if let Some(membership) = certifies {
            notes.push(format!(
                "eigenvector alignment at eigenvalue {value}: |⟨Tⁿx, x⟩| ≥ \
                 1 − d² − 2d = {bound:.6} for every n"
            ));
            return Ok(MembershipReport {
                membership,
                witness_exponent: None,
                witness_value: Some(bound),
                checked: scan_end,
                notes,
            });
        }
    }

    Ok(MembershipReport {
        membership: Membership::UndecidedAtHorizon,
        witness_exponent: None,
        witness_value: None,
        checked: scan_end,
        notes,
    })
}

/// |⟨Tⁿx, x⟩| via the exact power action.
fn single_correlation(op: &OperatorRep, x: &SparseVector, n: u64) -> Result<f64> {
    Ok(apply_power_sparse(op, n, x)?.inner(x).norm())
}

/// The operator's finite period, when one exists and its window is small
/// enough to scan.
fn usable_period(op: &OperatorRep, notes: &mut Vec<String>) -> Option<u64> {
    let p = detect_period(op).ok()?;
    match u64::try_from(p) {
        Ok(p) if p <= PERIOD_WINDOW_CAP => Some(p),
        _ => {
            notes.push(format!(
                "operator period {p} exceeds the scan window cap {PERIOD_WINDOW_CAP}; \
                 falling back to the horizon"
            ));
            None
        }
    }
}

/// Best Thm-2.5-style lower bound over the operator's eigenvector
/// witnesses: for a unit eigenvector v and d = min_φ ‖x − e^{iφ}v‖,
/// |⟨Tⁿx, x⟩| ≥ 1 − d² − 2d for every n. Returns (bound, eigenvalue).
fn best_alignment_bound(
    op: &OperatorRep,
    x: &SparseVector,
) -> Result<Option<(f64, num_complex::Complex64)>> {
    let spectrum = unimodular_point_spectrum(op, UNIMODULAR_TOL)?;
    let mut best: Option<(f64, num_complex::Complex64)> = None;
    for eigen in &spectrum.eigens {
        let EigenWitness::Vector(v) = &eigen.witness else {
            // atom witnesses live in L²(μ) and cannot align with a sparse x
            continue;
        };
        let d = alignment_distance(x, v);
        let bound = 1.0 - d * d - 2.0 * d;
        if bound > best.map_or(f64::NEG_INFINITY, |(b, _)| b) {
            best = Some((bound, eigen.value));
        }
    }
    Ok(best)
}

/// min over unit phases φ of ‖x − e^{iφ} v/‖v‖‖, the distance from x to
/// the circle through the normalized witness.
pub fn alignment_distance(x: &SparseVector, eigenvector: &SparseVector) -> f64 {
    let norm = eigenvector.norm();
    let overlap = x.inner(eigenvector).norm() / norm;
    (x.norm_sqr() + 1.0 - 2.0 * overlap).max(0.0).sqrt()
}

fn require_unit(x: &SparseVector) -> Result<()> {
    if (x.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::domain(format!(
            "M_k and N_n need a unit vector; ‖x‖ = {}",
            x.norm()
        )));
    }
    Ok(())
}

fn require_positive(v: u64, what: &str) -> Result<()> {
    if v == 0 {
        return Err(Error::domain(format!("{what} must be at least 1")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{DiagonalOp, Scalar, Tail};
    use crate::space::CompositeIndex;
    use num_complex::Complex64;
    use std::collections::BTreeMap;

    fn e(slot: u64) -> SparseVector {
        SparseVector::basis(CompositeIndex::new(0, slot))
    }

    fn rotation(p: u64, q: u64) -> OperatorRep {
        OperatorRep::Diagonal(DiagonalOp::constant(Scalar::root(p, q).unwrap()).unwrap())
    }

    #[test]
    fn shift_is_in_every_mk() {
        let op = OperatorRep::RightShift { branches: 1 };
        for k in [1u64, 2, 7, 100, 10_000_000] {
            let r = set_membership(&op, &CategorySet::MK { x: e(0), k }, 10).unwrap();
            assert_eq!(r.membership, Membership::In, "k = {k}");
            assert_eq!(r.witness_value, Some(0.0));
        }
    }

    #[test]
    fn identity_is_out_of_every_mk() {
        let op = OperatorRep::identity();
        let r = set_membership(&op, &CategorySet::MK { x: e(3), k: 5 }, 10).unwrap();
        assert_eq!(r.membership, Membership::Out);
        assert_eq!(r.witness_value, Some(1.0));
    }

    #[test]
    fn mk_requires_a_unit_vector() {
        let op = OperatorRep::identity();
        let x = e(0).scale(Complex64::new(2.0, 0.0));
        assert!(matches!(
            set_membership(&op, &CategorySet::MK { x, k: 1 }, 10),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn periodic_correlations_decide_nn_exactly() {
        // ⟨U^k e_0, e_0⟩ for U = rotation by 1/7 cycles through the 7th
        // roots of unity; |c_k| = 1 > 1/2 always, so U ∉ N_n.
        let op = rotation(1, 7);
        let r = set_membership(&op, &CategorySet::NN { x: e(0), n: 2 }, 10_000).unwrap();
        assert_eq!(r.membership, Membership::Out);
        assert_eq!(r.witness_exponent, Some(2));

        // A probe balanced across two eigenlines of −I: c_k alternates
        // between 0 and 1; the exceedance at the first even k ≥ n decides.
        let mut entries = BTreeMap::new();
        entries.insert(0u64, Scalar::root(1, 2).unwrap());
        let op = OperatorRep::Diagonal(DiagonalOp::new(entries, Tail::Identity).unwrap());
        let x = e(0)
            .scale(Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0))
            .add(&e(1).scale(Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)));
        let r = set_membership(&op, &CategorySet::NN { x, n: 3 }, 10_000).unwrap();
        assert_eq!(r.membership, Membership::Out);
        assert_eq!(r.witness_exponent, Some(4), "first even exponent ≥ 3");

        // A basis probe on the 2-cycle permutation alternates: ⟨P^k e_0,
        // e_0⟩ is 0 for odd k and 1 for even k; the first even k decides.
        let op = OperatorRep::CyclicMix { period: 2, branches: 1 };
        let r = set_membership(&op, &CategorySet::NN { x: e(0), n: 1 }, 10_000).unwrap();
        assert_eq!(r.membership, Membership::Out);
        assert_eq!(r.witness_exponent, Some(2));
    }

    #[test]
    fn periodic_unitaries_always_escape_nn_at_the_period_multiple() {
        // ⟨U^P x, x⟩ = ‖x‖² = 1 for any P-periodic unitary, so N_n never
        // contains one — the mechanism behind its nowhere-density. The
        // window scan finds the multiple without touching the horizon.
        let op = OperatorRep::CyclicMix { period: 5, branches: 1 };
        let lopsided = e(0)
            .scale(Complex64::new(0.9, 0.0))
            .add(&e(1).scale(Complex64::new((1.0f64 - 0.81).sqrt(), 0.0)));
        let r = set_membership(&op, &CategorySet::NN { x: lopsided, n: 3 }, 10_000).unwrap();
        assert_eq!(r.membership, Membership::Out);
        assert_eq!(r.witness_exponent, Some(5), "the period multiple betrays it");
        assert_eq!(r.witness_value, Some(1.0));
        assert!(r.checked <= 7, "period window, not the whole horizon");
    }

    #[test]
    fn aperiodic_decay_without_a_certificate_stays_undecided() {
        // A nilpotent dense block has c_k = 0 for every k ≥ 1, but it is
        // aperiodic and eigen-free: no certificate reaches "in", and the
        // report says exactly how far it looked.
        let op = OperatorRep::Dense(
            crate::operator::CMatrix::from_rows(vec![
                vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
                vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            ])
            .unwrap(),
        );
        let r = set_membership(&op, &CategorySet::NN { x: e(0), n: 1 }, 200).unwrap();
        assert_eq!(r.membership, Membership::UndecidedAtHorizon);
        assert_eq!(r.checked, 200);
    }

    #[test]
    fn period_window_certifies_the_w_complement() {
        // x_1 = e_0 is an eigenvector of the 1/7 rotation, so |c_n| = 1
        // for every n; one period of clean values certifies all of them.
        let op = rotation(1, 7);
        let r = set_membership(&op, &CategorySet::WJKComplement { j: 1, k: 3 }, 50).unwrap();
        assert_eq!(r.membership, Membership::In);
        assert!(r.checked <= 7, "one period suffices");
        assert!(r.notes.iter().any(|n| n.contains("period")));
    }

    #[test]
    fn eigen_alignment_certifies_the_w_complement_when_aperiodic() {
        // An irrational-angle eigenline has no period to lean on: the scan
        // runs out of horizon and the alignment bound (d = 0 ⇒ bound 1)
        // settles the remaining exponents.
        let mut entries = BTreeMap::new();
        entries.insert(0u64, Scalar::complex((0.3f64).cos(), (0.3f64).sin()));
        let op = OperatorRep::Diagonal(DiagonalOp::new(entries, Tail::Identity).unwrap());
        let r = set_membership(&op, &CategorySet::WJKComplement { j: 1, k: 3 }, 50).unwrap();
        assert_eq!(r.membership, Membership::In);
        assert!(r.witness_value.unwrap() >= 1.0 - 1e-12);
        assert!(r.notes.iter().any(|n| n.contains("alignment")));
    }

    #[test]
    fn w_complement_rejects_on_a_single_dip() {
        let op = OperatorRep::RightShift { branches: 1 };
        // x_1 = e_0: ⟨Rⁿe_0, e_0⟩ = 0 < 1/3 at n = 1 → Out.
        let r = set_membership(&op, &CategorySet::WJKComplement { j: 1, k: 3 }, 50).unwrap();
        assert_eq!(r.membership, Membership::Out);
        assert_eq!(r.witness_exponent, Some(1));
        assert_eq!(r.witness_value, Some(0.0));
    }

    #[test]
    fn wjkn_is_a_single_exact_value() {
        let op = OperatorRep::RightShift { branches: 1 };
        // In: shifted basis vectors are orthogonal.
        let r = set_membership(&op, &CategorySet::WJKN { j: 1, k: 5, n: 3 }, 10).unwrap();
        assert_eq!(r.membership, Membership::In);
        // Out: identity keeps ⟨x_1, x_1⟩ = 1 ≥ 1/5.
        let r = set_membership(
            &OperatorRep::identity(),
            &CategorySet::WJKN { j: 1, k: 5, n: 3 },
            10,
        )
        .unwrap();
        assert_eq!(r.membership, Membership::Out);
        assert_eq!(r.witness_value, Some(1.0));
    }

    #[test]
    fn quarter_perturbation_bound_exceeds_one_third() {
        // Perturbing the eigenvector e_0 by exactly 1/4 in a fresh
        // direction gives the bound 1 − 1/16 − 1/2 = 7/16 > 1/3, and the
        // correlations of the perturbed probe respect it.
        let op = rotation(2, 7);
        let x = e(0).add(&e(5).scale(Complex64::new(0.25, 0.0)));
        assert_eq!(alignment_distance(&x, &e(0)), 0.25);
        let bound = 1.0 - 0.25 * 0.25 - 2.0 * 0.25;
        assert_eq!(bound, 0.4375);
        assert!(bound > 1.0 / 3.0);
        let series = correlation_sequence(
            &op,
            &Vector::Sparse(x.clone()),
            &Vector::Sparse(x),
            7,
        )
        .unwrap();
        for n in 1..=7 {
            assert!(series.value(n).unwrap().norm() >= bound - 1e-12, "n = {n}");
        }
    }

    #[test]
    fn class_gate_rejects_expansions() {
        let op = OperatorRep::Dense(
            crate::operator::CMatrix::from_rows(vec![vec![Complex64::new(2.0, 0.0)]]).unwrap(),
        );
        assert!(matches!(
            set_membership(&op, &CategorySet::MK { x: e(0), k: 1 }, 10),
            Err(Error::ClassMismatch(_))
        ));
    }

    #[test]
    fn zero_parameters_are_domain_errors() {
        let id = OperatorRep::identity();
        assert!(set_membership(&id, &CategorySet::MK { x: e(0), k: 0 }, 10).is_err());
        assert!(set_membership(&id, &CategorySet::NN { x: e(0), n: 0 }, 10).is_err());
        assert!(set_membership(&id, &CategorySet::WJKN { j: 1, k: 0, n: 1 }, 10).is_err());
        assert!(set_membership(&id, &CategorySet::WJKN { j: 0, k: 1, n: 1 }, 10).is_err());
        assert!(set_membership(&id, &CategorySet::MK { x: e(0), k: 1 }, 0).is_err());
    }

    #[test]
    fn aligned_probe_exits_nn_at_the_first_scanned_exponent() {
        // On an eigenline every |c_k| = 1, so the scan refutes N_n at the
        // very first exponent; the eigen certificate never needs to fire.
        let mut entries = BTreeMap::new();
        entries.insert(0u64, Scalar::complex((0.3f64).cos(), (0.3f64).sin()));
        let op = OperatorRep::Diagonal(DiagonalOp::new(entries, Tail::Identity).unwrap());
        let r = set_membership(&op, &CategorySet::NN { x: e(0), n: 1 }, 100).unwrap();
        assert_eq!(r.membership, Membership::Out);
        assert_eq!(r.witness_exponent, Some(1));
        assert!((r.witness_value.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn alignment_distance_is_phase_optimal() {
        // x = i·e_0: distance to the circle through e_0 is 0, not √2.
        let x = e(0).scale(Complex64::new(0.0, 1.0));
        assert!(alignment_distance(&x, &e(0)) < 1e-12);
        // scaling the witness does not matter
        let v = e(0).scale(Complex64::new(3.0, -4.0));
        assert!(alignment_distance(&x, &v) < 1e-12);
        // orthogonal unit vectors sit at distance √2 … √(1+1−0)
        assert!((alignment_distance(&e(1), &e(0)) - 2.0f64.sqrt()).abs() < 1e-12);
    }
}
