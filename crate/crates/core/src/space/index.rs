//! Composite index into H = ⊕_b ℓ²(ℕ): a branch id and a slot within it.

/// Index of one coordinate of the composite space. Ordering is
/// lexicographic (branch first, then slot), which the sparse vector relies
/// on to extract branch ranges cheaply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompositeIndex {
    pub branch: u32,
    pub slot: u64,
}

impl CompositeIndex {
    pub fn new(branch: u32, slot: u64) -> Self {
        CompositeIndex { branch, slot }
    }
}

impl std::fmt::Display for CompositeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.branch, self.slot)
    }
}

/// Inverse Cantor pairing: m ↦ (i, d − i), walking the d-th anti-diagonal.
/// Enumerates ℕ² starting (0,0), (0,1), (1,0), (0,2), (1,1), (2,0), …
pub fn cantor_unpair(m: u64) -> (u64, u64) {
    // Largest d with d(d+1)/2 <= m, found by inverting the triangle number.
    let mut d = (((8.0 * m as f64 + 1.0).sqrt() - 1.0) / 2.0).floor() as u64;
    while d * (d + 1) / 2 > m {
        d -= 1;
    }
    while (d + 1) * (d + 2) / 2 <= m {
        d += 1;
    }
    let i = m - d * (d + 1) / 2;
    (i, d - i)
}

/// The k-th vector (k ≥ 1) of the canonical basis enumeration of ⊕_b ℓ²(ℕ),
/// walking Cantor anti-diagonals so every branch is visited infinitely often:
/// e_1 = (0,0), e_2 = (0,1), e_3 = (1,0), e_4 = (0,2), e_5 = (1,1), …
pub fn basis_index(k: u64) -> CompositeIndex {
    assert!(k >= 1, "basis enumeration starts at 1");
    let (branch, slot) = cantor_unpair(k - 1);
    CompositeIndex::new(branch as u32, slot)
}

/// The k-th basis vector (k ≥ 1) of the finite ambient ⊕_{b<arity} ℓ²(ℕ),
/// interleaving branches round-robin: (0,0), (1,0), …, (arity−1,0), (0,1), …
/// For arity 1 this is the plain enumeration (0,0), (0,1), (0,2), …
pub fn interleaved_basis_index(arity: u32, k: u64) -> CompositeIndex {
    assert!(k >= 1, "basis enumeration starts at 1");
    assert!(arity >= 1, "ambient needs at least one branch");
    let m = k - 1;
    CompositeIndex::new((m % arity as u64) as u32, m / arity as u64)
}
