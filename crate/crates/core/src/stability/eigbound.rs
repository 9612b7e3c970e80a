//! The eigenvector proximity bound: when x is a unit eigenvector with a
//! unimodular eigenvalue and d = ‖x − x_j‖, every correlation obeys
//! |⟨Uⁿx_j, x_j⟩| ≥ 1 − d² − 2d. Probes within 1/4 of an eigenline
//! therefore never dip below 7/16 > 1/3, at any exponent.

use crate::error::{Error, Result};
use crate::operator::{apply_extended, OperatorRep};
use crate::space::{SparseVector, Vector};

use super::correlation_sequence;

/// Residual allowed on the eigen-equation Ux = γx and on |γ| = 1.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenBoundReport {
    /// γ = ⟨Ux, x⟩, the verified eigenvalue.
    pub eigenvalue: num_complex::Complex64,
    /// d = ‖x − x_j‖.
    pub distance: f64,
    /// 1 − d² − 2d.
    pub bound: f64,
    /// min over 1 ≤ n ≤ N of |⟨Uⁿx_j, x_j⟩|.
    pub min_correlation: f64,
    /// The exponent attaining the minimum.
    pub min_at: u64,
    /// min_correlation ≥ bound − 1e-10.
    pub holds: bool,
    pub checked: u64,
}

/// Verify that x is a unit eigenvector of U with unimodular eigenvalue,
/// then check the proximity bound against every correlation of x_j up to
/// the horizon.
pub fn eigenvector_bound_check(
    u: &OperatorRep,
    x: &SparseVector,
    x_j: &SparseVector,
    n_max: u64,
) -> Result<EigenBoundReport> {
    u.validate()?;
    if n_max == 0 {
        return Err(Error::domain("horizon must be at least 1"));
    }
    if (x.norm() - 1.0).abs() > EIGEN_RESIDUAL_TOL {
        return Err(Error::domain(format!(
            "eigenvector must be unit; ‖x‖ = {}",
            x.norm()
        )));
    }
    let ux = apply_extended(u, x)?;
    let gamma = ux.inner(x);
    let residual = ux.sub(&x.scale(gamma)).norm();
    if residual > EIGEN_RESIDUAL_TOL {
        return Err(Error::CertificateFailure(format!(
            "x is not an eigenvector: ‖Ux − γx‖ = {residual:.3e} with γ = ⟨Ux, x⟩"
        )));
    }
    if (gamma.norm() - 1.0).abs() > EIGEN_RESIDUAL_TOL {
        return Err(Error::CertificateFailure(format!(
            "eigenvalue is not unimodular: |γ| = {}",
            gamma.norm()
        )));
    }

    let d = x.sub(x_j).norm();
    let bound = 1.0 - d * d - 2.0 * d;
    let series = correlation_sequence(
        u,
        &Vector::Sparse(x_j.clone()),
        &Vector::Sparse(x_j.clone()),
        n_max,
    )?;
    let mut min_correlation = f64::INFINITY;
    let mut min_at = 1;
    for n in 1..=n_max {
        let v = series.value(n).expect("series covers the horizon").norm();
        if v < min_correlation {
            min_correlation = v;
            min_at = n;
        }
    }

    Ok(EigenBoundReport {
        eigenvalue: gamma,
        distance: d,
        bound,
        min_correlation,
        min_at,
        holds: min_correlation >= bound - EIGEN_RESIDUAL_TOL,
        checked: n_max,
    })
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

    /// Distinct rotation angles on the first two slots, identity beyond.
    fn two_angle_diagonal() -> OperatorRep {
        let mut entries = BTreeMap::new();
        entries.insert(0u64, Scalar::root(1, 7).unwrap());
        entries.insert(1u64, Scalar::root(1, 3).unwrap());
        OperatorRep::Diagonal(DiagonalOp::new(entries, Tail::Identity).unwrap())
    }

    #[test]
    fn quarter_distance_keeps_correlations_above_seven_sixteenths() {
        let mut entries = BTreeMap::new();
        entries.insert(0u64, Scalar::root(1, 7).unwrap());
        entries.insert(3u64, Scalar::root(2, 5).unwrap());
        let u = OperatorRep::Diagonal(DiagonalOp::new(entries, Tail::Identity).unwrap());
        let x_j = e(0).add(&e(3).scale(Complex64::new(0.25, 0.0)));
        let r = eigenvector_bound_check(&u, &e(0), &x_j, 500).unwrap();
        assert_eq!(r.distance, 0.25);
        assert_eq!(r.bound, 0.4375);
        assert!(r.bound > 1.0 / 3.0);
        assert!(r.holds);
        // the perturbation can cancel at most 1/16 of the leading term
        assert!(r.min_correlation >= 15.0 / 16.0 - 1e-12);
    }

    #[test]
    fn probe_on_the_eigenline_never_decays() {
        let u = two_angle_diagonal();
        let r = eigenvector_bound_check(&u, &e(0), &e(0), 200).unwrap();
        assert_eq!(r.distance, 0.0);
        assert_eq!(r.bound, 1.0);
        assert!((r.min_correlation - 1.0).abs() < 1e-12);
        assert!(r.holds);
    }

    #[test]
    fn tenth_distance_verified_over_a_long_horizon() {
        let u = two_angle_diagonal();
        let x_j = e(0).add(&e(1).scale(Complex64::new(0.1, 0.0)));
        let r = eigenvector_bound_check(&u, &e(0), &x_j, 1_000).unwrap();
        assert!((r.distance - 0.1).abs() < 1e-15);
        assert!((r.bound - 0.79).abs() < 1e-12);
        assert!(r.holds);
        assert_eq!(r.checked, 1_000);
    }

    #[test]
    fn non_eigenvector_is_a_certificate_failure() {
        let u = two_angle_diagonal();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let x = e(0)
            .scale(Complex64::new(h, 0.0))
            .add(&e(1).scale(Complex64::new(h, 0.0)));
        assert!(matches!(
            eigenvector_bound_check(&u, &x, &e(0), 10),
            Err(Error::CertificateFailure(_))
        ));
    }

    #[test]
    fn shift_rejects_every_sparse_eigen_claim() {
        let u = OperatorRep::RightShift { branches: 1 };
        assert!(matches!(
            eigenvector_bound_check(&u, &e(0), &e(0), 10),
            Err(Error::CertificateFailure(_))
        ));
    }

    #[test]
    fn gates_on_unit_norm_and_horizon() {
        let u = two_angle_diagonal();
        let long = e(0).scale(Complex64::new(2.0, 0.0));
        assert!(matches!(
            eigenvector_bound_check(&u, &long, &e(0), 10),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            eigenvector_bound_check(&u, &e(0), &e(0), 0),
            Err(Error::Domain(_))
        ));
    }
}
