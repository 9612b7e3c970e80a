//! Action of structured operators on vectors: T x, T* x, and Tⁿ x.
//!
//! Sparse vectors are mapped exactly. Step functions on spectral branches
//! have no exact image in the step-function class (multiplication by
//! e^{2πiθ} bends each cell), so `apply` refuses them; correlation and
//! approximation routines integrate against the measure in closed form
//! instead.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::space::{SparseVector, Vector};

use super::rep::OperatorRep;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Dir {
    Fwd,
    Adj,
}

/// T x for a vector of either kind (step functions are refused, see the
/// module docs).
pub fn apply(op: &OperatorRep, x: &Vector) -> Result<Vector> {
    match x {
        Vector::Sparse(v) => Ok(Vector::Sparse(apply_sparse(op, v)?)),
        Vector::Step { branch, .. } => match resolve_leaf(op, *branch)? {
            OperatorRep::SpectralUnitary(_) => Err(Error::unsupported(
                "multiplication by e^{2πiθ} does not preserve step functions; \
                 use correlation_sequence or the measure-side closed forms",
            )),
            _ => Err(Error::kind_mismatch(format!(
                "step function on branch {branch}, but that branch is not spectral"
            ))),
        },
    }
}

/// T x for a sparse vector. Every supported branch must lie inside the
/// operator's branch range.
pub fn apply_sparse(op: &OperatorRep, x: &SparseVector) -> Result<SparseVector> {
    apply_with(op, x, Dir::Fwd, 1)
}

/// T* x for a sparse vector.
pub fn apply_adjoint_sparse(op: &OperatorRep, x: &SparseVector) -> Result<SparseVector> {
    apply_with(op, x, Dir::Adj, 1)
}

/// Tⁿ x without forming intermediate vectors: diagonals power entrywise,
/// shifts jump n slots, cyclic blocks rotate by n mod period, dense blocks
/// use a repeated-squaring matrix power.
pub fn apply_power_sparse(op: &OperatorRep, n: u64, x: &SparseVector) -> Result<SparseVector> {
    apply_with(op, x, Dir::Fwd, n)
}

/// (T*)ⁿ x.
pub fn apply_adjoint_power_sparse(
    op: &OperatorRep,
    n: u64,
    x: &SparseVector,
) -> Result<SparseVector> {
    apply_with(op, x, Dir::Adj, n)
}

/// T x with identity extension: support on branches beyond the operator's
/// range passes through unchanged. The operator metrics compare operators
/// of different arity this way.
pub fn apply_extended(op: &OperatorRep, x: &SparseVector) -> Result<SparseVector> {
    apply_extended_with(op, x, Dir::Fwd)
}

/// T* x with identity extension.
pub fn apply_adjoint_extended(op: &OperatorRep, x: &SparseVector) -> Result<SparseVector> {
    apply_extended_with(op, x, Dir::Adj)
}

fn apply_extended_with(op: &OperatorRep, x: &SparseVector, dir: Dir) -> Result<SparseVector> {
    let arity = op.arity();
    let mut out = SparseVector::zero();
    let inside =
        SparseVector::from_entries(x.branches_range(0, arity).map(|(&i, &a)| (i, a)));
    walk(op, 0, &inside, dir, 1, &mut out)?;
    for (&idx, &amp) in x.iter() {
        if idx.branch >= arity {
            out.add_at(idx, amp);
        }
    }
    Ok(out)
}

fn apply_with(op: &OperatorRep, x: &SparseVector, dir: Dir, n: u64) -> Result<SparseVector> {
    let arity = op.arity();
    if let Some(b) = x.max_branch() {
        if b >= arity {
            return Err(Error::BranchOutOfRange { branch: b, arity });
        }
    }
    let mut out = SparseVector::zero();
    walk(op, 0, x, dir, n, &mut out)?;
    Ok(out)
}

fn walk(
    op: &OperatorRep,
    offset: u32,
    x: &SparseVector,
    dir: Dir,
    n: u64,
    out: &mut SparseVector,
) -> Result<()> {
    match op {
        OperatorRep::DirectSum(children) => {
            let mut at = offset;
            for c in children {
                walk(c, at, x, dir, n, out)?;
                at += c.arity();
            }
            Ok(())
        }
        leaf => apply_leaf(leaf, offset, x, dir, n, out),
    }
}

fn apply_leaf(
    leaf: &OperatorRep,
    offset: u32,
    x: &SparseVector,
    dir: Dir,
    n: u64,
    out: &mut SparseVector,
) -> Result<()> {
    let hi = offset + leaf.arity();
    match leaf {
        OperatorRep::Diagonal(d) => {
            for (&idx, &amp) in x.branches_range(offset, hi) {
                let mut lambda = d.entry(idx.slot).powu(n);
                if dir == Dir::Adj {
                    lambda = lambda.conj();
                }
                out.add_at(idx, amp * lambda.to_c64());
            }
        }
        OperatorRep::RightShift { .. } => {
            for (&idx, &amp) in x.branches_range(offset, hi) {
                match dir {
                    Dir::Fwd => {
                        let slot = idx.slot.checked_add(n).ok_or_else(|| {
                            Error::Capacity("shift power overflows the slot index".into())
                        })?;
                        out.add_at(crate::space::CompositeIndex::new(idx.branch, slot), amp);
                    }
                    Dir::Adj => {
                        if idx.slot >= n {
                            out.add_at(
                                crate::space::CompositeIndex::new(idx.branch, idx.slot - n),
                                amp,
                            );
                        }
                        // slots < n are annihilated by the adjoint power
                    }
                }
            }
        }
        OperatorRep::CyclicMix { period, .. } => {
            let p = *period;
            let r = n % p;
            for (&idx, &amp) in x.branches_range(offset, hi) {
                let slot = if idx.slot < p {
                    match dir {
                        Dir::Fwd => (idx.slot + r) % p,
                        Dir::Adj => (idx.slot + p - r) % p,
                    }
                } else {
                    idx.slot
                };
                out.add_at(crate::space::CompositeIndex::new(idx.branch, slot), amp);
            }
        }
        OperatorRep::Dense(m) => {
            let dim = m.nrows();
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            let mut touched = false;
            for (&idx, &amp) in x.branches_range(offset, hi) {
                if idx.slot >= dim as u64 {
                    return Err(Error::domain(format!(
                        "slot {} is outside the dense block of dimension {dim}",
                        idx.slot
                    )));
                }
                v[idx.slot as usize] = amp;
                touched = true;
            }
            if touched {
                let block = match (dir, n) {
                    (_, 0) => None, // T⁰ = identity
                    (Dir::Fwd, 1) => Some(m.clone()),
                    (Dir::Adj, 1) => Some(m.adjoint()),
                    (Dir::Fwd, _) => Some(m.pow(n)),
                    (Dir::Adj, _) => Some(m.adjoint().pow(n)),
                };
                let w = match &block {
                    Some(b) => b.apply(&v),
                    None => v,
                };
                for (slot, z) in w.into_iter().enumerate() {
                    out.add_at(
                        crate::space::CompositeIndex::new(offset, slot as u64),
                        z,
                    );
                }
            }
        }
        OperatorRep::SpectralUnitary(_) => {
            if x.branches_range(offset, hi).next().is_some() {
                return Err(Error::kind_mismatch(format!(
                    "branch {offset} is spectral: its vectors are step functions, \
                     not sparse coordinates"
                )));
            }
        }
        OperatorRep::DirectSum(_) => unreachable!("handled by walk"),
    }
    Ok(())
}

/// The leaf responsible for a global branch id.
pub fn resolve_leaf(op: &OperatorRep, branch: u32) -> Result<&OperatorRep> {
    if branch >= op.arity() {
        return Err(Error::BranchOutOfRange { branch, arity: op.arity() });
    }
    for (offset, leaf) in op.leaves() {
        if branch >= offset && branch < offset + leaf.arity() {
            return Ok(leaf);
        }
    }
    unreachable!("branch ranges tile the arity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{DiagonalOp, Scalar, Tail};
    use crate::operator::matrix::CMatrix;
    use crate::space::CompositeIndex;
    use std::collections::BTreeMap;

    fn ix(b: u32, s: u64) -> CompositeIndex {
        CompositeIndex::new(b, s)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shift_moves_slots_and_adjoint_kills_slot_zero() {
        let op = OperatorRep::RightShift { branches: 1 };
        let x = SparseVector::from_entries([(ix(0, 0), c(1.0, 0.0)), (ix(0, 3), c(0.0, 2.0))]);
        let fx = apply_sparse(&op, &x).unwrap();
        assert_eq!(fx.get(ix(0, 1)), c(1.0, 0.0));
        assert_eq!(fx.get(ix(0, 4)), c(0.0, 2.0));

        let ax = apply_adjoint_sparse(&op, &x).unwrap();
        assert_eq!(ax.get(ix(0, 2)), c(0.0, 2.0));
        assert_eq!(ax.support_len(), 1, "e_0 component must vanish under S*");
    }

    #[test]
    fn shift_is_isometric_on_samples() {
        let op = OperatorRep::RightShift { branches: 2 };
        let x = SparseVector::from_entries([
            (ix(0, 0), c(1.0, -1.0)),
            (ix(1, 5), c(0.5, 0.25)),
        ]);
        let fx = apply_sparse(&op, &x).unwrap();
        assert!((fx.norm() - x.norm()).abs() < 1e-15);
    }

    #[test]
    fn cyclic_mix_rotates_head_and_fixes_tail() {
        let op = OperatorRep::CyclicMix { period: 3, branches: 1 };
        let x = SparseVector::from_entries([
            (ix(0, 0), c(1.0, 0.0)),
            (ix(0, 2), c(2.0, 0.0)),
            (ix(0, 7), c(3.0, 0.0)),
        ]);
        let fx = apply_sparse(&op, &x).unwrap();
        assert_eq!(fx.get(ix(0, 1)), c(1.0, 0.0)); // 0 → 1
        assert_eq!(fx.get(ix(0, 0)), c(2.0, 0.0)); // 2 → 0
        assert_eq!(fx.get(ix(0, 7)), c(3.0, 0.0)); // ≥ period untouched

        // period-many applications give the identity exactly
        let mut y = x.clone();
        for _ in 0..3 {
            y = apply_sparse(&op, &y).unwrap();
        }
        assert_eq!(y, x);
    }

    #[test]
    fn cyclic_power_matches_iteration() {
        let op = OperatorRep::CyclicMix { period: 5, branches: 1 };
        let x = SparseVector::from_entries([(ix(0, 1), c(1.0, 1.0)), (ix(0, 4), c(-1.0, 0.0))]);
        let mut it = x.clone();
        for n in 0..12u64 {
            let fast = apply_power_sparse(&op, n, &x).unwrap();
            assert_eq!(fast, it, "n = {n}");
            it = apply_sparse(&op, &it).unwrap();
        }
    }

    #[test]
    fn diagonal_powers_are_entrywise() {
        let mut e = BTreeMap::new();
        e.insert(1u64, Scalar::root(1, 4).unwrap());
        let op = OperatorRep::Diagonal(DiagonalOp::new(e, Tail::Identity).unwrap());
        let x = SparseVector::from_entries([(ix(0, 1), c(1.0, 0.0)), (ix(0, 9), c(2.0, 0.0))]);
        let fx = apply_power_sparse(&op, 2, &x).unwrap();
        assert_eq!(fx.get(ix(0, 1)), c(-1.0, 0.0)); // i² = −1, exactly
        assert_eq!(fx.get(ix(0, 9)), c(2.0, 0.0));
    }

    #[test]
    fn adjoint_of_diagonal_conjugates() {
        let op = OperatorRep::Diagonal(
            DiagonalOp::constant(Scalar::complex(0.0, 1.0)).unwrap(),
        );
        let x = SparseVector::basis(ix(0, 0));
        let ax = apply_adjoint_sparse(&op, &x).unwrap();
        assert_eq!(ax.get(ix(0, 0)), c(0.0, -1.0));
    }

    #[test]
    fn dense_block_applies_and_rejects_outside_slots() {
        let m = CMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let op = OperatorRep::Dense(m);
        let x = SparseVector::from_entries([(ix(0, 0), c(1.0, 0.0)), (ix(0, 1), c(0.0, 1.0))]);
        let fx = apply_sparse(&op, &x).unwrap();
        assert_eq!(fx.get(ix(0, 0)), c(0.0, 1.0));
        assert_eq!(fx.get(ix(0, 1)), c(1.0, 0.0));

        let bad = SparseVector::basis(ix(0, 5));
        assert!(matches!(apply_sparse(&op, &bad), Err(Error::Domain(_))));
    }

    #[test]
    fn direct_sum_routes_branches() {
        let op = OperatorRep::DirectSum(vec![
            OperatorRep::Diagonal(DiagonalOp::constant(Scalar::complex(-1.0, 0.0)).unwrap()),
            OperatorRep::RightShift { branches: 1 },
        ]);
        let x = SparseVector::from_entries([(ix(0, 0), c(1.0, 0.0)), (ix(1, 0), c(1.0, 0.0))]);
        let fx = apply_sparse(&op, &x).unwrap();
        assert_eq!(fx.get(ix(0, 0)), c(-1.0, 0.0));
        assert_eq!(fx.get(ix(1, 1)), c(1.0, 0.0));
    }

    #[test]
    fn out_of_range_branch_is_an_error_but_extension_passes_it_through() {
        let op = OperatorRep::identity();
        let x = SparseVector::basis(ix(3, 0));
        assert!(matches!(
            apply_sparse(&op, &x),
            Err(Error::BranchOutOfRange { branch: 3, arity: 1 })
        ));
        let ext = apply_extended(&op, &x).unwrap();
        assert_eq!(ext, x);
    }

    #[test]
    fn sparse_vector_on_spectral_branch_is_kind_mismatch() {
        let op = OperatorRep::SpectralUnitary(
            crate::operator::SpectralMeasure::lebesgue(),
        );
        let x = SparseVector::basis(ix(0, 0));
        assert!(matches!(apply_sparse(&op, &x), Err(Error::KindMismatch(_))));
    }

    #[test]
    fn step_function_apply_is_refused_with_guidance() {
        let op = OperatorRep::SpectralUnitary(
            crate::operator::SpectralMeasure::lebesgue(),
        );
        let f = Vector::Step {
            branch: 0,
            f: crate::space::StepFunction::constant(c(1.0, 0.0)),
        };
        assert!(matches!(apply(&op, &f), Err(Error::Unsupported(_))));
    }

    #[test]
    fn power_zero_is_identity() {
        let op = OperatorRep::RightShift { branches: 1 };
        let x = SparseVector::from_entries([(ix(0, 2), c(1.0, 2.0))]);
        assert_eq!(apply_power_sparse(&op, 0, &x).unwrap(), x);
    }

    #[test]
    fn shift_adjoint_power_drops_low_slots() {
        let op = OperatorRep::RightShift { branches: 1 };
        let x = SparseVector::from_entries([(ix(0, 1), c(1.0, 0.0)), (ix(0, 6), c(2.0, 0.0))]);
        let y = apply_adjoint_power_sparse(&op, 3, &x).unwrap();
        assert_eq!(y.support_len(), 1);
        assert_eq!(y.get(ix(0, 3)), c(2.0, 0.0));
    }
}
