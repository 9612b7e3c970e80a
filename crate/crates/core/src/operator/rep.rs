//! Structured operator representations.
//!
//! An operator acts on a contiguous range of branches of the composite
//! space; `arity` is the number of branches it occupies. Direct sums
//! allocate branch ranges to their children in order, so a leaf's global
//! branch ids are its offset plus 0..arity.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::matrix::{CMatrix, DENSE_DIM_CAP};
use super::measure::SpectralMeasure;
use super::scalar::Scalar;
use super::tail::Tail;

/// Tolerance of the |entry| ≤ 1 construction gate for diagonals.
pub const CONTRACTION_GATE_TOL: f64 = 1e-12;

/// A diagonal operator on one branch: finitely many explicit entries plus
/// a tail rule for every other slot. All entries pass the contraction
/// gate |λ| ≤ 1 at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOp {
    entries: BTreeMap<u64, Scalar>,
    tail: Tail,
}

impl DiagonalOp {
    pub fn new(entries: BTreeMap<u64, Scalar>, tail: Tail) -> Result<Self> {
        tail.validate()?;
        if tail.sup_abs() > 1.0 + CONTRACTION_GATE_TOL {
            return Err(Error::validation(format!(
                "tail entries exceed the unit disk (|λ| = {})",
                tail.sup_abs()
            )));
        }
        for (slot, s) in &entries {
            if s.abs() > 1.0 + CONTRACTION_GATE_TOL {
                return Err(Error::validation(format!(
                    "diagonal entry at slot {slot} exceeds the unit disk (|λ| = {})",
                    s.abs()
                )));
            }
        }
        Ok(DiagonalOp { entries, tail })
    }

    pub fn identity() -> Self {
        DiagonalOp {
            entries: BTreeMap::new(),
            tail: Tail::Identity,
        }
    }

    pub fn constant(s: Scalar) -> Result<Self> {
        DiagonalOp::new(BTreeMap::new(), Tail::Constant(s))
    }

    /// The entry at a slot: explicit if present, tail rule otherwise.
    pub fn entry(&self, slot: u64) -> Scalar {
        self.entries
            .get(&slot)
            .copied()
            .unwrap_or_else(|| self.tail.entry(slot))
    }

    pub fn explicit_entries(&self) -> &BTreeMap<u64, Scalar> {
        &self.entries
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn max_explicit_slot(&self) -> Option<u64> {
        self.entries.keys().next_back().copied()
    }

    pub fn is_unimodular(&self, tol: f64) -> bool {
        self.tail.is_unimodular(tol)
            && self.entries.values().all(|s| s.is_unimodular(tol))
    }

    pub fn conj(&self) -> DiagonalOp {
        DiagonalOp {
            entries: self
                .entries
                .iter()
                .map(|(&k, s)| (k, s.conj()))
                .collect(),
            tail: self.tail.conj(),
        }
    }

    /// Entrywise n-th power (the diagonal of T^n).
    pub fn pow(&self, n: u64) -> DiagonalOp {
        DiagonalOp {
            entries: self
                .entries
                .iter()
                .map(|(&k, s)| (k, s.powu(n)))
                .collect(),
            tail: self.tail.pow(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorRep {
    /// Multiplication by a slot-indexed scalar sequence on one branch.
    Diagonal(DiagonalOp),
    /// The unilateral right shift e_s ↦ e_{s+1} on each of `branches`
    /// branches.
    RightShift { branches: u32 },
    /// On each branch: a cyclic permutation e_s ↦ e_{(s+1) mod period} of
    /// the first `period` slots, identity beyond them.
    CyclicMix { period: u64, branches: u32 },
    /// A dense block acting on the first `dim` slots of one branch,
    /// identity beyond them.
    Dense(CMatrix),
    /// Multiplication by e^{2πiθ} on L²(μ) for the given measure μ; the
    /// branch's vectors are step functions rather than sparse vectors.
    SpectralUnitary(SpectralMeasure),
    /// Children act on consecutive branch ranges.
    DirectSum(Vec<OperatorRep>),
}

impl OperatorRep {
    pub fn identity() -> Self {
        OperatorRep::Diagonal(DiagonalOp::identity())
    }

    /// Number of branches this operator occupies.
    pub fn arity(&self) -> u32 {
        match self {
            OperatorRep::Diagonal(_) | OperatorRep::Dense(_) | OperatorRep::SpectralUnitary(_) => 1,
            OperatorRep::RightShift { branches } => *branches,
            OperatorRep::CyclicMix { branches, .. } => *branches,
            OperatorRep::DirectSum(children) => {
                children.iter().map(|c| c.arity()).sum()
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            OperatorRep::Diagonal(_) => Ok(()), // gated at construction
            OperatorRep::RightShift { branches } | OperatorRep::CyclicMix { branches, .. }
                if *branches == 0 =>
            {
                Err(Error::validation("shift/cyclic operators need at least one branch"))
            }
            OperatorRep::RightShift { .. } => Ok(()),
            OperatorRep::CyclicMix { period, .. } => {
                if *period == 0 {
                    Err(Error::validation("cyclic period must be at least 1"))
                } else {
                    Ok(())
                }
            }
            OperatorRep::Dense(m) => {
                if !m.is_square() {
                    return Err(Error::validation("dense blocks must be square"));
                }
                if m.nrows() == 0 {
                    return Err(Error::validation("dense blocks need dimension at least 1"));
                }
                if m.nrows() > DENSE_DIM_CAP {
                    return Err(Error::Capacity(format!(
                        "dense dimension {} exceeds the cap {DENSE_DIM_CAP}",
                        m.nrows()
                    )));
                }
                Ok(())
            }
            OperatorRep::SpectralUnitary(mu) => {
                mu.validate()?;
                if mu.is_zero() || mu.total_mass() <= 0.0 {
                    return Err(Error::validation(
                        "spectral branches need a measure with positive mass",
                    ));
                }
                Ok(())
            }
            OperatorRep::DirectSum(children) => {
                if children.is_empty() {
                    return Err(Error::validation("direct sum needs at least one summand"));
                }
                let mut total: u64 = 0;
                for c in children {
                    c.validate()?;
                    total += c.arity() as u64;
                    if total > u32::MAX as u64 {
                        return Err(Error::Capacity("direct sum arity overflows".into()));
                    }
                }
                Ok(())
            }
        }
    }

    /// Leaves of the direct-sum tree with their global branch offsets, in
    /// branch order.
    pub fn leaves(&self) -> Vec<(u32, &OperatorRep)> {
        let mut out = Vec::new();
        fn walk<'a>(op: &'a OperatorRep, offset: u32, out: &mut Vec<(u32, &'a OperatorRep)>) {
            match op {
                OperatorRep::DirectSum(children) => {
                    let mut at = offset;
                    for c in children {
                        walk(c, at, out);
                        at += c.arity();
                    }
                }
                leaf => out.push((offset, leaf)),
            }
        }
        walk(self, 0, &mut out);
        out
    }

    /// True if any leaf is a spectral (L²) branch.
    pub fn contains_spectral(&self) -> bool {
        self.leaves()
            .iter()
            .any(|(_, l)| matches!(l, OperatorRep::SpectralUnitary(_)))
    }

    pub fn as_diagonal(&self) -> Option<&DiagonalOp> {
        match self {
            OperatorRep::Diagonal(d) => Some(d),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn contraction_gate_rejects_large_entries() {
        let mut entries = BTreeMap::new();
        entries.insert(0u64, Scalar::complex(1.5, 0.0));
        assert!(DiagonalOp::new(entries, Tail::Identity).is_err());
        assert!(DiagonalOp::constant(Scalar::complex(0.0, 1.0 + 1e-6)).is_err());
    }

    #[test]
    fn entry_prefers_explicit_over_tail() {
        let mut entries = BTreeMap::new();
        entries.insert(2u64, Scalar::complex(0.5, 0.0));
        let d = DiagonalOp::new(entries, Tail::Identity).unwrap();
        assert_eq!(d.entry(0).to_c64(), Complex64::new(1.0, 0.0));
        assert_eq!(d.entry(2).to_c64(), Complex64::new(0.5, 0.0));
        assert_eq!(d.entry(3).to_c64(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn arity_of_direct_sum_adds_up() {
        let op = OperatorRep::DirectSum(vec![
            OperatorRep::identity(),
            OperatorRep::RightShift { branches: 2 },
            OperatorRep::DirectSum(vec![
                OperatorRep::CyclicMix { period: 3, branches: 1 },
                OperatorRep::identity(),
            ]),
        ]);
        assert_eq!(op.arity(), 5);
        op.validate().unwrap();
    }

    #[test]
    fn leaves_report_offsets_in_branch_order() {
        let op = OperatorRep::DirectSum(vec![
            OperatorRep::RightShift { branches: 2 },
            OperatorRep::DirectSum(vec![OperatorRep::identity()]),
            OperatorRep::CyclicMix { period: 4, branches: 3 },
        ]);
        let offsets: Vec<u32> = op.leaves().iter().map(|(o, _)| *o).collect();
        assert_eq!(offsets, vec![0, 2, 3]);
    }

    #[test]
    fn validation_catches_empty_sum_and_zero_period() {
        assert!(OperatorRep::DirectSum(vec![]).validate().is_err());
        assert!(OperatorRep::CyclicMix { period: 0, branches: 1 }.validate().is_err());
        assert!(OperatorRep::RightShift { branches: 0 }.validate().is_err());
    }

    #[test]
    fn dense_cap_is_enforced() {
        let m = CMatrix::zeros(DENSE_DIM_CAP + 1, DENSE_DIM_CAP + 1);
        assert!(matches!(
            OperatorRep::Dense(m).validate(),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn zero_mass_spectral_branch_rejected() {
        let op = OperatorRep::SpectralUnitary(SpectralMeasure::default());
        assert!(op.validate().is_err());
    }

    #[test]
    fn diagonal_pow_is_entrywise() {
        let mut entries = BTreeMap::new();
        entries.insert(0u64, Scalar::root(1, 3).unwrap());
        let d = DiagonalOp::new(entries, Tail::Constant(Scalar::complex(0.0, 1.0))).unwrap();
        let d3 = d.pow(3);
        assert_eq!(d3.entry(0).to_c64(), Complex64::new(1.0, 0.0));
        // i³ = −i
        assert!((d3.entry(5).to_c64() - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }
}
