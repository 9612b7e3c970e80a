//! Wold decomposition of an isometry: H = H₀ ⊕ ⊕ₙ Vⁿ Y, where V acts
//! unitarily on H₀ = ∩ₙ Vⁿ(H) and Y = H ⊖ V(H) is the wandering subspace.
//!
//! The structured representations split branch by branch: diagonal,
//! cyclic, and spectral branches are already unitary; each shift branch
//! contributes its slot-0 basis vector to the wandering subspace. Dense
//! blocks are finite-dimensional, where an isometry is automatically
//! unitary — that is still verified numerically by intersecting the
//! ranges V(H) ⊇ V²(H) ⊇ … up to the horizon via repeated
//! orthonormalization.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{
    classify_operator, CMatrix, OperatorClass, OperatorRep, CLASSIFY_TOL,
};
use crate::space::{CompositeIndex, SparseVector};

/// Default horizon for the range-intersection verification.
pub const WOLD_HORIZON: u64 = 64;

#[derive(Debug, Clone)]
pub struct WoldSplit {
    /// Global branch ids whose leaf acts unitarily (H₀ is their span).
    pub unitary_branches: Vec<u32>,
    /// Global branch ids carrying shift parts.
    pub shift_branches: Vec<u32>,
    /// Orthonormal basis of the wandering subspace Y, in global coordinates.
    pub wandering_basis: Vec<SparseVector>,
    /// dim Y.
    pub multiplicity: u64,
    /// The restriction of V to H₀, repacked onto consecutive branches
    /// (empty H₀ gives None).
    pub unitary_part: Option<OperatorRep>,
    /// (source branch, branch in `unitary_part`) for every unitary branch.
    pub branch_map: Vec<(u32, u32)>,
    /// For dense leaves: (offset, verified rank of V^horizon).
    pub dense_rank_checks: Vec<(u32, usize)>,
}

pub fn wold_decompose(op: &OperatorRep, horizon: u64) -> Result<WoldSplit> {
    if horizon == 0 {
        return Err(Error::domain("Wold horizon must be at least 1"));
    }
    let class = classify_operator(op, CLASSIFY_TOL)?;
    if class.class < OperatorClass::Isometry {
        return Err(Error::ClassMismatch(format!(
            "Wold decomposition needs an isometry; classification found {:?}",
            class.class
        )));
    }

    let mut unitary_branches = Vec::new();
    let mut shift_branches = Vec::new();
    let mut wandering = Vec::new();
    let mut unitary_children: Vec<OperatorRep> = Vec::new();
    let mut branch_map = Vec::new();
    let mut dense_rank_checks = Vec::new();
    let mut next_packed: u32 = 0;

    for (offset, leaf) in op.leaves() {
        match leaf {
            OperatorRep::Diagonal(_)
            | OperatorRep::CyclicMix { .. }
            | OperatorRep::SpectralUnitary(_) => {
                // Classification already certified these leaves unitary.
                for b in offset..offset + leaf.arity() {
                    unitary_branches.push(b);
                }
                branch_map.push((offset, next_packed));
                next_packed += leaf.arity();
                unitary_children.push(leaf.clone());
            }
            OperatorRep::RightShift { branches } => {
                for i in 0..*branches {
                    shift_branches.push(offset + i);
                    wandering.push(SparseVector::basis(CompositeIndex::new(offset + i, 0)));
                }
            }
            OperatorRep::Dense(m) => {
                let rank = intersected_range_rank(m, horizon);
                dense_rank_checks.push((offset, rank));
                if rank < m.nrows() {
                    // Cannot happen for a true isometry in finite dimension;
                    // reaching here means the classification tolerance hid a
                    // rank deficiency.
                    return Err(Error::ClassMismatch(format!(
                        "dense block at branch {offset} loses rank under iteration \
                         ({rank} < {}): not an isometry",
                        m.nrows()
                    )));
                }
                unitary_branches.push(offset);
                branch_map.push((offset, next_packed));
                next_packed += 1;
                unitary_children.push(leaf.clone());
            }
            OperatorRep::DirectSum(_) => unreachable!("leaves() never yields a direct sum"),
        }
    }

    let unitary_part = match unitary_children.len() {
        0 => None,
        1 => Some(unitary_children.into_iter().next().unwrap()),
        _ => Some(OperatorRep::DirectSum(unitary_children)),
    };

    Ok(WoldSplit {
        unitary_branches,
        shift_branches,
        multiplicity: wandering.len() as u64,
        wandering_basis: wandering,
        unitary_part,
        branch_map,
        dense_rank_checks,
    })
}

/// Rank of V^horizon(ℂⁿ), computed as iterated orthonormalized images;
/// short-circuits once the rank is full (the chain of ranges can then
/// never shrink).
fn intersected_range_rank(m: &CMatrix, horizon: u64) -> usize {
    let n = m.nrows();
    let mut basis: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    for _ in 0..horizon {
        let images: Vec<Vec<Complex64>> = basis.iter().map(|v| m.apply(v)).collect();
        basis = orth_columns(images);
        if basis.len() == n {
            return n;
        }
        if basis.is_empty() {
            return 0;
        }
    }
    basis.len()
}

fn orth_columns(vs: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for mut v in vs {
        let orig = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if orig == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &basis {
                let c: Complex64 = v.iter().zip(q).map(|(a, b)| a * b.conj()).sum();
                for (a, b) in v.iter_mut().zip(q) {
                    *a -= c * b;
                }
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-10 * orig {
            for z in v.iter_mut() {
                *z /= n;
            }
            basis.push(v);
        }
    }
    basis
}
