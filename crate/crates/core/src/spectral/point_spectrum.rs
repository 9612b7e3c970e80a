//! Unimodular point spectrum and the splitting of the space into its
//! reversible part (closed span of unimodular eigenvectors) and the
//! stable remainder.
//!
//! For the structured representations the eigendata is exact: diagonal
//! slots, cyclic Fourier vectors, and measure atoms are read off the
//! representation. Dense blocks go through the QR eigensolver; a
//! non-converged solve is propagated as a flag, never silently.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{
    apply_adjoint_sparse, apply_sparse, Angle, DiagonalOp, OperatorRep, RationalAngle,
};
use crate::space::{CompositeIndex, SparseVector};

use super::eigen::dense_eigen;

/// Default tolerance for |λ| = 1 checks.
pub const UNIMODULAR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    fn merge(self, other: Multiplicity) -> Multiplicity {
        match (self, other) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a + b),
            _ => Multiplicity::Infinite,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EigenWitness {
    /// An explicit sparse eigenvector.
    Vector(SparseVector),
    /// The indicator of an atom in L²(μ) on a spectral branch.
    Atom { branch: u32, location: Angle, weight: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnimodularEigen {
    pub value: Complex64,
    /// Exact angle when the representation carries one.
    pub rational: Option<RationalAngle>,
    pub multiplicity: Multiplicity,
    pub branch: u32,
    pub witness: EigenWitness,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSpectrum {
    pub eigens: Vec<UnimodularEigen>,
    /// False when a dense sub-solve hit its iteration cap; the dense
    /// entries are then a flagged partial answer.
    pub dense_converged: bool,
}

impl PointSpectrum {
    pub fn is_empty(&self) -> bool {
        self.eigens.is_empty()
    }
}

/// All unimodular eigenvalues of the operator with witnesses, branch by
/// branch. `tol` bounds the |λ| = 1 test (and the eigensolver acceptance
/// for dense blocks).
pub fn unimodular_point_spectrum(op: &OperatorRep, tol: f64) -> Result<PointSpectrum> {
    if tol <= 0.0 {
        return Err(Error::domain("unimodularity tolerance must be positive"));
    }
    let mut eigens = Vec::new();
    let mut dense_converged = true;
    for (offset, leaf) in op.leaves() {
        match leaf {
            OperatorRep::Diagonal(d) => diagonal_eigens(d, offset, tol, &mut eigens),
            OperatorRep::RightShift { .. } => {
                // The unilateral shift has empty point spectrum.
            }
            OperatorRep::CyclicMix { period, branches } => {
                cyclic_eigens(*period, *branches, offset, &mut eigens)
            }
            OperatorRep::Dense(m) => {
                let r = dense_eigen(m)?;
                dense_converged &= r.converged;
                for p in &r.pairs {
                    if (p.value.norm() - 1.0).abs() <= tol {
                        let v = SparseVector::from_entries(
                            p.vector
                                .iter()
                                .enumerate()
                                .map(|(s, &a)| (CompositeIndex::new(offset, s as u64), a)),
                        );
                        eigens.push(UnimodularEigen {
                            value: p.value,
                            rational: None,
                            multiplicity: Multiplicity::Finite(1),
                            branch: offset,
                            witness: EigenWitness::Vector(v),
                        });
                    }
                }
            }
            OperatorRep::SpectralUnitary(mu) => {
                for atom in &mu.atoms {
                    eigens.push(UnimodularEigen {
                        value: atom.location.value(),
                        rational: atom.location.rational(),
                        multiplicity: Multiplicity::Finite(1),
                        branch: offset,
                        witness: EigenWitness::Atom {
                            branch: offset,
                            location: atom.location,
                            weight: atom.weight,
                        },
                    });
                }
            }
            OperatorRep::DirectSum(_) => unreachable!("leaves() never yields a direct sum"),
        }
    }
    eigens.sort_by(|a, b| {
        let ka = (a.value.arg().rem_euclid(std::f64::consts::TAU), a.branch);
        let kb = (b.value.arg().rem_euclid(std::f64::consts::TAU), b.branch);
        ka.0.total_cmp(&kb.0).then(ka.1.cmp(&kb.1))
    });
    Ok(PointSpectrum { eigens, dense_converged })
}

/// Eigendata of a diagonal branch: unimodular explicit entries plus the
/// unimodular residues of the tail rule, merged by eigenvalue.
fn diagonal_eigens(d: &DiagonalOp, offset: u32, tol: f64, out: &mut Vec<UnimodularEigen>) {
    struct Cand {
        value: Complex64,
        rational: Option<RationalAngle>,
        mult: Multiplicity,
        slot: u64,
    }
    let mut cands: Vec<Cand> = Vec::new();
    for (&slot, s) in d.explicit_entries() {
        if s.is_unimodular(tol) {
            cands.push(Cand {
                value: s.to_c64(),
                rational: match s {
                    crate::operator::Scalar::Root(r) => Some(*r),
                    _ => None,
                },
                mult: Multiplicity::Finite(1),
                slot,
            });
        }
    }
    let explicit: BTreeSet<u64> = d.explicit_entries().keys().copied().collect();
    let period = d.tail().sequence_period().min(u64::MAX as u128) as u64;
    for r in 0..period {
        let s = d.tail().entry(r);
        if !s.is_unimodular(tol) {
            continue;
        }
        // Smallest free slot congruent to r mod period.
        let mut slot = r;
        while explicit.contains(&slot) {
            slot += period;
        }
        cands.push(Cand {
            value: s.to_c64(),
            rational: match s {
                crate::operator::Scalar::Root(rr) => Some(rr),
                _ => None,
            },
            mult: Multiplicity::Infinite,
            slot,
        });
    }
    // Merge candidates sharing an eigenvalue.
    cands.sort_by(|a, b| {
        (a.value.re, a.value.im)
            .partial_cmp(&(b.value.re, b.value.im))
            .unwrap()
    });
    let mut merged: Vec<Cand> = Vec::new();
    for c in cands {
        match merged.last_mut() {
            Some(prev) if (prev.value - c.value).norm() <= 1e-12 => {
                prev.mult = prev.mult.merge(c.mult);
                prev.slot = prev.slot.min(c.slot);
                if prev.rational.is_none() {
                    prev.rational = c.rational;
                }
            }
            _ => merged.push(c),
        }
    }
    for c in merged {
        out.push(UnimodularEigen {
            value: c.value,
            rational: c.rational,
            multiplicity: c.mult,
            branch: offset,
            witness: EigenWitness::Vector(SparseVector::basis(CompositeIndex::new(
                offset, c.slot,
            ))),
        });
    }
}

/// Eigendata of a cyclic-mix branch set: every p-th root of unity with a
/// Fourier witness on the first branch; the root 1 also owns the identity
/// part beyond the cycle, hence infinite multiplicity.
fn cyclic_eigens(period: u64, branches: u32, offset: u32, out: &mut Vec<UnimodularEigen>) {
    let p = period;
    let scale = 1.0 / (p as f64).sqrt();
    for t in 0..p {
        let angle = RationalAngle::new(t, p).unwrap();
        let witness = if t == 0 {
            // Eigenvalue 1: the identity part contributes e_{period} directly.
            SparseVector::basis(CompositeIndex::new(offset, p))
        } else {
            // v_t = p^{-1/2} Σ_s e^{-2πi t s / p} e_s on the first branch.
            SparseVector::from_entries((0..p).map(|s| {
                let phase = angle.times(s).negate().value() * scale;
                (CompositeIndex::new(offset, s), phase)
            }))
        };
        out.push(UnimodularEigen {
            value: angle.value(),
            rational: Some(angle),
            multiplicity: if t == 0 {
                Multiplicity::Infinite
            } else {
                Multiplicity::Finite(branches as u64)
            },
            branch: offset,
            witness: EigenWitness::Vector(witness),
        });
    }
}

/// Dimension of a subspace that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Finite(u64),
    Infinite,
}

impl Dim {
    fn add(self, other: Dim) -> Dim {
        match (self, other) {
            (Dim::Finite(a), Dim::Finite(b)) => Dim::Finite(a + b),
            _ => Dim::Infinite,
        }
    }
}

/// Orthogonal projection onto the stable part, leaf by leaf.
#[derive(Debug, Clone)]
pub enum StableProjector {
    /// Keep coordinates whose diagonal entry is strictly inside the disk.
    DiagonalMask { op: DiagonalOp, tol: f64, offset: u32 },
    /// The whole branch range is stable (shift branches).
    Full { offset: u32, branches: u32 },
    /// The whole branch range is reversible (cyclic/unitary branches).
    Zero { offset: u32, branches: u32 },
    /// Subtract projections onto an orthonormal reversible basis.
    DenseBasis { offset: u32, dim: usize, basis: Vec<Vec<Complex64>> },
    /// Spectral branch: the stable part is the continuous component of μ;
    /// sparse vectors cannot live here.
    SpectralContinuous { offset: u32, atom_count: usize },
    Sum(Vec<StableProjector>),
}

impl StableProjector {
    /// Projects a sparse vector onto the stable part. The vector must lie
    /// within the operator's branch range and off spectral branches.
    pub fn project(&self, x: &SparseVector) -> Result<SparseVector> {
        let mut out = SparseVector::zero();
        self.project_into(x, &mut out)?;
        Ok(out)
    }

    fn project_into(&self, x: &SparseVector, out: &mut SparseVector) -> Result<()> {
        match self {
            StableProjector::DiagonalMask { op, tol, offset } => {
                for (&idx, &a) in x.branch_range(*offset) {
                    if !op.entry(idx.slot).is_unimodular(*tol) {
                        out.add_at(idx, a);
                    }
                }
            }
            StableProjector::Full { offset, branches } => {
                for (&idx, &a) in x.branches_range(*offset, offset + branches) {
                    out.add_at(idx, a);
                }
            }
            StableProjector::Zero { .. } => {}
            StableProjector::DenseBasis { offset, dim, basis } => {
                let mut v = vec![Complex64::new(0.0, 0.0); *dim];
                for (&idx, &a) in x.branch_range(*offset) {
                    if idx.slot >= *dim as u64 {
                        return Err(Error::domain(format!(
                            "slot {} is outside the dense block of dimension {dim}",
                            idx.slot
                        )));
                    }
                    v[idx.slot as usize] = a;
                }
                for q in basis {
                    let c: Complex64 = v.iter().zip(q).map(|(vi, qi)| vi * qi.conj()).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= c * qi;
                    }
                }
                for (s, z) in v.into_iter().enumerate() {
                    out.add_at(CompositeIndex::new(*offset, s as u64), z);
                }
            }
            StableProjector::SpectralContinuous { offset, .. } => {
                if x.branch_range(*offset).next().is_some() {
                    return Err(Error::kind_mismatch(format!(
                        "branch {offset} is spectral; its stable projection acts on \
                         step functions, not sparse coordinates"
                    )));
                }
            }
            StableProjector::Sum(parts) => {
                for p in parts {
                    p.project_into(x, out)?;
                }
            }
        }
        Ok(())
    }
}

/// The reversible/stable splitting of a contraction: unimodular point
/// spectrum with witnesses, the dimension of the reversible part, the
/// stable projector, and the reducing-property residuals of the witnesses.
#[derive(Debug, Clone)]
pub struct JgdlSplit {
    pub point: PointSpectrum,
    pub reversible_dim: Dim,
    pub projector: StableProjector,
    /// Per eigen entry: (‖T w − λ w‖, ‖T* w − λ̄ w‖) for vector witnesses;
    /// atoms are exact and report (0, 0).
    pub residuals: Vec<(f64, f64)>,
}

pub fn jgdl_split(op: &OperatorRep, tol: f64) -> Result<JgdlSplit> {
    let point = unimodular_point_spectrum(op, tol)?;
    let mut parts = Vec::new();
    let mut dim = Dim::Finite(0);
    for (offset, leaf) in op.leaves() {
        match leaf {
            OperatorRep::Diagonal(d) => {
                dim = dim.add(diagonal_reversible_dim(d, tol));
                parts.push(StableProjector::DiagonalMask {
                    op: d.clone(),
                    tol,
                    offset,
                });
            }
            OperatorRep::RightShift { branches } => {
                parts.push(StableProjector::Full { offset, branches: *branches });
            }
            OperatorRep::CyclicMix { branches, .. } => {
                dim = Dim::Infinite;
                parts.push(StableProjector::Zero { offset, branches: *branches });
            }
            OperatorRep::Dense(m) => {
                let mut basis: Vec<Vec<Complex64>> = Vec::new();
                for e in &point.eigens {
                    if e.branch == offset {
                        if let EigenWitness::Vector(w) = &e.witness {
                            let mut v = vec![Complex64::new(0.0, 0.0); m.nrows()];
                            for (idx, &a) in w.iter() {
                                v[idx.slot as usize] = a;
                            }
                            // Orthonormalize against what we have (repeated
                            // eigenvalues arrive already orthonormal).
                            for q in &basis {
                                let c: Complex64 =
                                    v.iter().zip(q).map(|(vi, qi)| vi * qi.conj()).sum();
                                for (vi, qi) in v.iter_mut().zip(q) {
                                    *vi -= c * qi;
                                }
                            }
                            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                            if n > 1e-10 {
                                for z in v.iter_mut() {
                                    *z /= n;
                                }
                                basis.push(v);
                            }
                        }
                    }
                }
                dim = dim.add(Dim::Finite(basis.len() as u64));
                parts.push(StableProjector::DenseBasis {
                    offset,
                    dim: m.nrows(),
                    basis,
                });
            }
            OperatorRep::SpectralUnitary(mu) => {
                dim = dim.add(Dim::Finite(mu.atoms.len() as u64));
                parts.push(StableProjector::SpectralContinuous {
                    offset,
                    atom_count: mu.atoms.len(),
                });
            }
            OperatorRep::DirectSum(_) => unreachable!(),
        }
    }
    // Reducing-property residuals for every vector witness.
    let mut residuals = Vec::with_capacity(point.eigens.len());
    for e in &point.eigens {
        match &e.witness {
            EigenWitness::Vector(w) => {
                let fw = apply_sparse(op, w)?.sub(&w.scale(e.value)).norm();
                let aw = apply_adjoint_sparse(op, w)?
                    .sub(&w.scale(e.value.conj()))
                    .norm();
                residuals.push((fw, aw));
            }
            EigenWitness::Atom { .. } => residuals.push((0.0, 0.0)),
        }
    }
    let projector = if parts.len() == 1 {
        parts.into_iter().next().unwrap()
    } else {
        StableProjector::Sum(parts)
    };
    Ok(JgdlSplit { point, reversible_dim: dim, projector, residuals })
}

fn diagonal_reversible_dim(d: &DiagonalOp, tol: f64) -> Dim {
    let period = d.tail().sequence_period().min(u64::MAX as u128) as u64;
    for r in 0..period {
        if d.tail().entry(r).is_unimodular(tol) {
            return Dim::Infinite;
        }
    }
    let count = d
        .explicit_entries()
        .values()
        .filter(|s| s.is_unimodular(tol))
        .count() as u64;
    Dim::Finite(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{CMatrix, Scalar, SpectralMeasure, Tail};
    use std::collections::BTreeMap;

    fn ix(b: u32, s: u64) -> CompositeIndex {
        CompositeIndex::new(b, s)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shift_has_empty_point_spectrum() {
        let ps =
            unimodular_point_spectrum(&OperatorRep::RightShift { branches: 3 }, UNIMODULAR_TOL)
                .unwrap();
        assert!(ps.is_empty());
    }

    #[test]
    fn diagonal_spectrum_merges_tail_and_explicit() {
        // diag: slot 0 ↦ i (explicit), slots ≥ 1 ↦ 1 (identity tail) —
        // plus slot 5 ↦ 0.5 which is not unimodular.
        let mut e = BTreeMap::new();
        e.insert(0u64, Scalar::root(1, 4).unwrap());
        e.insert(5u64, Scalar::complex(0.5, 0.0));
        let op = OperatorRep::Diagonal(DiagonalOp::new(e, Tail::Identity).unwrap());
        let ps = unimodular_point_spectrum(&op, UNIMODULAR_TOL).unwrap();
        assert_eq!(ps.eigens.len(), 2);
        let one = ps
            .eigens
            .iter()
            .find(|e| (e.value - c(1.0, 0.0)).norm() < 1e-12)
            .unwrap();
        assert_eq!(one.multiplicity, Multiplicity::Infinite);
        let i = ps
            .eigens
            .iter()
            .find(|e| (e.value - c(0.0, 1.0)).norm() < 1e-12)
            .unwrap();
        assert_eq!(i.multiplicity, Multiplicity::Finite(1));
        match &i.witness {
            EigenWitness::Vector(w) => assert_eq!(w.get(ix(0, 0)), c(1.0, 0.0)),
            _ => panic!(),
        }
    }

    #[test]
    fn rotation_tail_yields_all_roots() {
        let op = OperatorRep::Diagonal(
            DiagonalOp::new(
                BTreeMap::new(),
                Tail::Rotation(RationalAngle::new(1, 3).unwrap()),
            )
            .unwrap(),
        );
        let ps = unimodular_point_spectrum(&op, UNIMODULAR_TOL).unwrap();
        assert_eq!(ps.eigens.len(), 3);
        for e in &ps.eigens {
            assert_eq!(e.multiplicity, Multiplicity::Infinite);
            assert!(e.rational.is_some());
        }
    }

    #[test]
    fn cyclic_mix_fourier_witnesses_are_eigenvectors() {
        let op = OperatorRep::CyclicMix { period: 5, branches: 2 };
        let ps = unimodular_point_spectrum(&op, UNIMODULAR_TOL).unwrap();
        assert_eq!(ps.eigens.len(), 5);
        for e in &ps.eigens {
            if let EigenWitness::Vector(w) = &e.witness {
                let fw = apply_sparse(&op, w).unwrap();
                let err = fw.sub(&w.scale(e.value)).norm();
                assert!(err < 1e-14, "witness residual {err} for λ = {}", e.value);
            } else {
                panic!("cyclic witnesses are vectors");
            }
        }
        let one = ps
            .eigens
            .iter()
            .find(|e| (e.value - c(1.0, 0.0)).norm() < 1e-12)
            .unwrap();
        assert_eq!(one.multiplicity, Multiplicity::Infinite);
    }

    #[test]
    fn atoms_are_point_spectrum() {
        let mu = SpectralMeasure::point_mass(Angle::Rational(RationalAngle::new(1, 2).unwrap()), 1.0);
        let op = OperatorRep::SpectralUnitary(mu);
        let ps = unimodular_point_spectrum(&op, UNIMODULAR_TOL).unwrap();
        assert_eq!(ps.eigens.len(), 1);
        assert_eq!(ps.eigens[0].value, c(-1.0, 0.0));
        assert!(matches!(ps.eigens[0].witness, EigenWitness::Atom { .. }));
    }

    #[test]
    fn dense_unimodular_eigens_found() {
        // Unitary 2×2 with eigenvalues ±i and a contractive 1×... block in a sum.
        let rot = CMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let op = OperatorRep::DirectSum(vec![
            OperatorRep::Dense(rot),
            OperatorRep::Diagonal(DiagonalOp::constant(Scalar::complex(0.5, 0.0)).unwrap()),
        ]);
        let ps = unimodular_point_spectrum(&op, UNIMODULAR_TOL).unwrap();
        assert!(ps.dense_converged);
        assert_eq!(ps.eigens.len(), 2);
        for e in &ps.eigens {
            assert_eq!(e.branch, 0);
            assert!((e.value.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn jgdl_splits_diagonal_plus_shift() {
        // D = diag with slots 0,1 unimodular and slot 2 strictly inside,
        // identity tail; S = shift. H_r = span{e_0, e_1, tail slots}, so
        // reversible dimension is infinite; stable part contains slot 2
        // and the whole shift branch.
        let mut e = BTreeMap::new();
        e.insert(0u64, Scalar::root(1, 4).unwrap());
        e.insert(1u64, Scalar::root(1, 2).unwrap());
        e.insert(2u64, Scalar::complex(0.5, 0.5));
        let d = DiagonalOp::new(e, Tail::Identity).unwrap();
        let op = OperatorRep::DirectSum(vec![
            OperatorRep::Diagonal(d),
            OperatorRep::RightShift { branches: 1 },
        ]);
        let split = jgdl_split(&op, UNIMODULAR_TOL).unwrap();
        assert_eq!(split.reversible_dim, Dim::Infinite);
        // Projector keeps slot 2 on branch 0, kills slots 0, 1 and tail,
        // and keeps everything on branch 1.
        let x = SparseVector::from_entries([
            (ix(0, 0), c(1.0, 0.0)),
            (ix(0, 2), c(2.0, 0.0)),
            (ix(0, 9), c(3.0, 0.0)),
            (ix(1, 4), c(4.0, 0.0)),
        ]);
        let px = split.projector.project(&x).unwrap();
        assert_eq!(px.get(ix(0, 0)), c(0.0, 0.0));
        assert_eq!(px.get(ix(0, 2)), c(2.0, 0.0));
        assert_eq!(px.get(ix(0, 9)), c(0.0, 0.0));
        assert_eq!(px.get(ix(1, 4)), c(4.0, 0.0));
        // All witnesses satisfy the reducing property exactly here.
        for (f, a) in &split.residuals {
            assert!(*f < 1e-12 && *a < 1e-12);
        }
    }

    #[test]
    fn jgdl_projector_is_idempotent_and_invariant() {
        let mut e = BTreeMap::new();
        e.insert(0u64, Scalar::root(2, 3).unwrap());
        e.insert(4u64, Scalar::complex(0.0, 0.25));
        let d = DiagonalOp::new(e, Tail::Constant(Scalar::complex(0.3, 0.0))).unwrap();
        let op = OperatorRep::Diagonal(d);
        let split = jgdl_split(&op, UNIMODULAR_TOL).unwrap();
        assert_eq!(split.reversible_dim, Dim::Finite(1));
        let x = SparseVector::from_entries([
            (ix(0, 0), c(1.0, 1.0)),
            (ix(0, 4), c(0.5, 0.0)),
            (ix(0, 7), c(0.25, 0.0)),
        ]);
        let px = split.projector.project(&x).unwrap();
        let ppx = split.projector.project(&px).unwrap();
        assert_eq!(px, ppx);
        // T-invariance: T(H_s) ⊆ H_s, so (I − P) T P x = 0.
        let tpx = apply_sparse(&op, &px).unwrap();
        let ptpx = split.projector.project(&tpx).unwrap();
        assert!(tpx.sub(&ptpx).norm() < 1e-15);
    }

    #[test]
    fn dense_reversible_basis_projects_out_eigenvectors() {
        let rot = CMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let op = OperatorRep::Dense(rot);
        let split = jgdl_split(&op, UNIMODULAR_TOL).unwrap();
        assert_eq!(split.reversible_dim, Dim::Finite(2));
        // The whole ℂ² is reversible here, so every vector projects to 0.
        let x = SparseVector::from_entries([(ix(0, 0), c(1.0, 0.0)), (ix(0, 1), c(0.0, 2.0))]);
        let px = split.projector.project(&x).unwrap();
        assert!(px.norm() < 1e-10, "stable projection should vanish, got {}", px.norm());
    }

    #[test]
    fn spectral_branch_reversible_dim_counts_atoms() {
        let mut mu = SpectralMeasure::lebesgue();
        mu.atoms.push(crate::operator::Atom {
            location: Angle::Turns(0.25),
            weight: 0.5,
        });
        let op = OperatorRep::SpectralUnitary(mu);
        let split = jgdl_split(&op, UNIMODULAR_TOL).unwrap();
        assert_eq!(split.reversible_dim, Dim::Finite(1));
    }
}
