//! The three Polish metrics on operator balls, truncated to a finite test
//! family with a certified tail bound.
//!
//! Each metric weights the j-th test vector by 2^{−j}, so the discarded
//! tail beyond a truncation depth J is controlled by the class gate alone:
//! unitaries move a vector by at most 2‖x‖, hence the strong* tail is
//! 4·2^{−J}, the strong tail 2·2^{−J}, and the weak tail
//! 2(2·2^{−J} − 2^{−2J}). The reported `partial` is a lower bound for the
//! full metric and `partial + tail` an upper bound.
//!
//! The test family is the canonical dense family of the operands' joint
//! ambient ⊕_{b<A} ℓ²(ℕ), A = max of the two arities; an operand of
//! smaller arity is extended by the identity on the missing branches.
//! Spectral branches are rejected: the test family is sparse and has no
//! canonical image in L²(μ).

use crate::error::{Error, Result};
use crate::operator::{
    apply_adjoint_extended, apply_extended, is_at_least, OperatorClass, OperatorRep,
    CLASSIFY_TOL,
};
use crate::space::test_vector_family_in;

/// Deepest allowed truncation; 2^{−512} keeps every weight normal.
pub const TRUNCATION_CAP: u32 = 512;

/// A truncated metric evaluation: the computed partial sum and a bound on
/// everything discarded, so partial ≤ d ≤ partial + tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricValue {
    pub partial: f64,
    pub tail: f64,
}

impl MetricValue {
    pub fn upper(&self) -> f64 {
        self.partial + self.tail
    }
}

/// d*(U, V) = Σ_j (‖Ux_j − Vx_j‖ + ‖U*x_j − V*x_j‖) / (2^j ‖x_j‖),
/// truncated at j = j_max. Defined on unitary operators.
pub fn metric_strong_star(u: &OperatorRep, v: &OperatorRep, j_max: u32) -> Result<MetricValue> {
    check_depth(j_max)?;
    gate(u, OperatorClass::Unitary, "strong*")?;
    gate(v, OperatorClass::Unitary, "strong*")?;
    let fam = test_vector_family_in(u.arity().max(v.arity()), j_max as u64)?;
    let mut partial = 0.0;
    for j in 1..=j_max as u64 {
        let x = fam.vector(j)?;
        let fwd = apply_extended(u, x)?.dist(&apply_extended(v, x)?);
        let adj = apply_adjoint_extended(u, x)?.dist(&apply_adjoint_extended(v, x)?);
        partial += (fwd + adj) / (pow2(j as u32) * fam.norm(j)?);
    }
    Ok(MetricValue { partial, tail: 4.0 * pow2_neg(j_max) })
}

/// d_s(T, S) = Σ_j ‖Tx_j − Sx_j‖ / (2^j ‖x_j‖), truncated at j = j_max.
/// Defined on isometries.
pub fn metric_strong(t: &OperatorRep, s: &OperatorRep, j_max: u32) -> Result<MetricValue> {
    check_depth(j_max)?;
    gate(t, OperatorClass::Isometry, "strong")?;
    gate(s, OperatorClass::Isometry, "strong")?;
    let fam = test_vector_family_in(t.arity().max(s.arity()), j_max as u64)?;
    let mut partial = 0.0;
    for j in 1..=j_max as u64 {
        let x = fam.vector(j)?;
        let fwd = apply_extended(t, x)?.dist(&apply_extended(s, x)?);
        partial += fwd / (pow2(j as u32) * fam.norm(j)?);
    }
    Ok(MetricValue { partial, tail: 2.0 * pow2_neg(j_max) })
}

/// d_w(T, S) = Σ_{i,j} |⟨Tx_i, x_j⟩ − ⟨Sx_i, x_j⟩| / (2^{i+j} ‖x_i‖ ‖x_j‖),
/// truncated to i, j ≤ j_max. Defined on contractions.
pub fn metric_weak(t: &OperatorRep, s: &OperatorRep, j_max: u32) -> Result<MetricValue> {
    check_depth(j_max)?;
    gate(t, OperatorClass::Contraction, "weak")?;
    gate(s, OperatorClass::Contraction, "weak")?;
    let fam = test_vector_family_in(t.arity().max(s.arity()), j_max as u64)?;
    let mut partial = 0.0;
    for i in 1..=j_max as u64 {
        let x = fam.vector(i)?;
        let diff = apply_extended(t, x)?.sub(&apply_extended(s, x)?);
        let wi = pow2(i as u32) * fam.norm(i)?;
        for j in 1..=j_max as u64 {
            let num = diff.inner(fam.vector(j)?).norm();
            partial += num / (wi * pow2(j as u32) * fam.norm(j)?);
        }
    }
    let q = pow2_neg(j_max);
    Ok(MetricValue { partial, tail: 2.0 * (2.0 * q - q * q) })
}

fn check_depth(j_max: u32) -> Result<()> {
    if j_max == 0 {
        return Err(Error::domain("truncation depth must be at least 1"));
    }
    if j_max > TRUNCATION_CAP {
        return Err(Error::Capacity(format!(
            "truncation depth {j_max} exceeds the cap {TRUNCATION_CAP}"
        )));
    }
    Ok(())
}

fn gate(op: &OperatorRep, want: OperatorClass, metric: &str) -> Result<()> {
    op.validate()?;
    if op.contains_spectral() {
        return Err(Error::unsupported(format!(
            "the {metric} metric probes the sparse test family, which spectral \
             branches cannot act on"
        )));
    }
    if !is_at_least(op, want, CLASSIFY_TOL)? {
        return Err(Error::ClassMismatch(format!(
            "the {metric} metric is defined on operators of class {want:?} or \
             stronger"
        )));
    }
    Ok(())
}

fn pow2(j: u32) -> f64 {
    2.0f64.powi(j as i32)
}

fn pow2_neg(j: u32) -> f64 {
    0.5f64.powi(j as i32)
}
