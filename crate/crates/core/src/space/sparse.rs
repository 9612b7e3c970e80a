//! Finitely supported vectors over the composite index space.
//!
//! Entries are stored in a `BTreeMap` keyed by `CompositeIndex`, so
//! iteration order is deterministic and branch ranges are contiguous.
//! Every arithmetic operation prunes exact zeros: an amplitude equal to
//! `0.0 + 0.0i` is never stored, so `support_len` is the honest support
//! size and equality of maps is equality of vectors.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::CompositeIndex;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    entries: BTreeMap<CompositeIndex, Complex64>,
}

fn is_exact_zero(z: Complex64) -> bool {
    z.re == 0.0 && z.im == 0.0
}

impl SparseVector {
    pub fn zero() -> Self {
        SparseVector::default()
    }

    /// The basis vector e_idx.
    pub fn basis(idx: CompositeIndex) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(idx, Complex64::new(1.0, 0.0));
        SparseVector { entries }
    }

    pub fn from_entries(it: impl IntoIterator<Item = (CompositeIndex, Complex64)>) -> Self {
        let mut v = SparseVector::zero();
        for (idx, amp) in it {
            v.add_at(idx, amp);
        }
        v
    }

    /// Adds `amp` to the coordinate at `idx`, pruning if the sum is zero.
    pub fn add_at(&mut self, idx: CompositeIndex, amp: Complex64) {
        if is_exact_zero(amp) {
            return;
        }
        let slot = self.entries.entry(idx).or_insert(Complex64::new(0.0, 0.0));
        *slot += amp;
        if is_exact_zero(*slot) {
            self.entries.remove(&idx);
        }
    }

    /// Overwrites the coordinate at `idx` (removing it when zero).
    pub fn set(&mut self, idx: CompositeIndex, amp: Complex64) {
        if is_exact_zero(amp) {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, amp);
        }
    }

    pub fn get(&self, idx: CompositeIndex) -> Complex64 {
        self.entries
            .get(&idx)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CompositeIndex, &Complex64)> {
        self.entries.iter()
    }

    /// Largest branch id in the support, if any.
    pub fn max_branch(&self) -> Option<u32> {
        self.entries.keys().next_back().map(|idx| idx.branch)
    }

    /// Largest slot on the given branch, if the branch is touched.
    pub fn max_slot_on_branch(&self, branch: u32) -> Option<u64> {
        self.branch_range(branch).map(|(idx, _)| idx.slot).max()
    }

    /// Entries whose branch equals `branch`, in slot order.
    pub fn branch_range(
        &self,
        branch: u32,
    ) -> impl Iterator<Item = (&CompositeIndex, &Complex64)> {
        let lo = CompositeIndex::new(branch, 0);
        let hi = CompositeIndex::new(branch, u64::MAX);
        self.entries.range(lo..=hi)
    }

    /// Entries with branch in [lo, hi), in order.
    pub fn branches_range(
        &self,
        lo: u32,
        hi: u32,
    ) -> impl Iterator<Item = (&CompositeIndex, &Complex64)> {
        let a = CompositeIndex::new(lo, 0);
        self.entries.range(a..).take_while(move |(idx, _)| idx.branch < hi)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if is_exact_zero(c) {
            return SparseVector::zero();
        }
        let entries = self
            .entries
            .iter()
            .filter_map(|(&idx, &a)| {
                let p = a * c;
                if is_exact_zero(p) { None } else { Some((idx, p)) }
            })
            .collect();
        SparseVector { entries }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&idx, &a) in other.entries.iter() {
            out.add_at(idx, a);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&idx, &a) in other.entries.iter() {
            out.add_at(idx, -a);
        }
        out
    }

    /// ⟨self, other⟩, linear in self, conjugate-linear in other.
    pub fn inner(&self, other: &Self) -> Complex64 {
        // Walk the smaller support.
        let (small, big) = if self.entries.len() <= other.entries.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (&idx, &a) in small.entries.iter() {
            let b = big.get(idx);
            if is_exact_zero(b) {
                continue;
            }
            if std::ptr::eq(small, self) {
                acc += a * b.conj();
            } else {
                acc += b * a.conj();
            }
        }
        acc
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.values().fold(0.0, |acc, a| acc + a.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Distance ‖self − other‖ without materializing the difference.
    pub fn dist(&self, other: &Self) -> f64 {
        self.sub(other).norm()
    }
}

impl FromIterator<(CompositeIndex, Complex64)> for SparseVector {
    fn from_iter<T: IntoIterator<Item = (CompositeIndex, Complex64)>>(it: T) -> Self {
        SparseVector::from_entries(it)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ix(b: u32, s: u64) -> CompositeIndex {
        CompositeIndex::new(b, s)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zeros_are_pruned_exactly() {
        let mut v = SparseVector::zero();
        v.add_at(ix(0, 3), c(1.0, -2.0));
        v.add_at(ix(0, 3), c(-1.0, 2.0));
        assert!(v.is_zero());
        assert_eq!(v.support_len(), 0);

        v.set(ix(1, 0), c(0.5, 0.0));
        v.set(ix(1, 0), c(0.0, 0.0));
        assert!(v.is_zero());
    }

    #[test]
    fn sub_of_equal_vectors_is_exactly_zero() {
        let v = SparseVector::from_entries([
            (ix(0, 0), c(0.3, 0.7)),
            (ix(2, 5), c(-1.5, 0.25)),
        ]);
        assert!(v.sub(&v).is_zero());
        assert_eq!(v.dist(&v), 0.0);
    }

    #[test]
    fn inner_is_conjugate_linear_in_second_argument() {
        let x = SparseVector::from_entries([(ix(0, 0), c(1.0, 2.0))]);
        let y = SparseVector::from_entries([(ix(0, 0), c(3.0, -1.0))]);
        // <x, y> = (1+2i) * conj(3-i) = (1+2i)(3+i) = 1 + 7i
        assert_eq!(x.inner(&y), c(1.0, 7.0));
        // <y, x> should be the conjugate.
        assert_eq!(y.inner(&x), c(1.0, -7.0));
    }

    #[test]
    fn inner_walks_smaller_support_correctly() {
        let big = SparseVector::from_entries((0..50).map(|s| (ix(0, s), c(1.0, 0.0))));
        let small = SparseVector::from_entries([(ix(0, 7), c(0.0, 2.0))]);
        assert_eq!(small.inner(&big), c(0.0, 2.0));
        assert_eq!(big.inner(&small), c(0.0, -2.0));
    }

    #[test]
    fn norm_and_pythagoras() {
        let v = SparseVector::from_entries([(ix(0, 0), c(3.0, 0.0)), (ix(1, 0), c(0.0, 4.0))]);
        assert_eq!(v.norm(), 5.0);
    }

    #[test]
    fn branch_range_slices_by_branch() {
        let v = SparseVector::from_entries([
            (ix(0, 1), c(1.0, 0.0)),
            (ix(1, 0), c(2.0, 0.0)),
            (ix(1, 9), c(3.0, 0.0)),
            (ix(2, 0), c(4.0, 0.0)),
        ]);
        let on1: Vec<u64> = v.branch_range(1).map(|(i, _)| i.slot).collect();
        assert_eq!(on1, vec![0, 9]);
        let mid: Vec<u32> = v.branches_range(1, 3).map(|(i, _)| i.branch).collect();
        assert_eq!(mid, vec![1, 1, 2]);
    }

    #[test]
    fn scale_by_zero_gives_zero() {
        let v = SparseVector::basis(ix(0, 0));
        assert!(v.scale(c(0.0, 0.0)).is_zero());
    }
}
