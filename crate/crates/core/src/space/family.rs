//! The canonical dense test family {x_j} used by the operator metrics and
//! the category-set predicates.
//!
//! The family interleaves two enumerations so that it both starts with
//! plain basis vectors and eventually hits every finite rational
//! combination:
//!
//! * odd j ≥ 3 walk an enumeration of finite Gaussian-rational coefficient
//!   lists (the list gives coefficients of e_1, e_2, … in the canonical
//!   basis enumeration, with the last coefficient forced nonzero);
//! * even j ≥ 4 walk the remaining basis vectors e_3, e_4, …
//!
//! j = 1 and j = 2 are pinned to e_1 and e_2. Every vector has nonzero
//! norm by construction, and the span of the family is dense: each finite
//! rational combination appears at some odd index.
//!
//! The family comes in one flavor per ambient space. `test_vector` walks
//! the unbounded ambient ⊕_b ℓ²(ℕ) along Cantor anti-diagonals;
//! `test_vector_in` takes the ambient arity and interleaves only those
//! branches, so a family for single-branch operators stays entirely on
//! branch 0. Metrics and category predicates use the ambient their
//! operands actually act on.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::index::{basis_index, cantor_unpair, interleaved_basis_index, CompositeIndex};
use super::SparseVector;

/// The j-th canonical test vector of the unbounded ambient, j ≥ 1.
pub fn test_vector(j: u64) -> Result<SparseVector> {
    vector_with(&basis_index, j)
}

/// The j-th canonical test vector of the ambient ⊕_{b<arity} ℓ²(ℕ), j ≥ 1.
pub fn test_vector_in(arity: u32, j: u64) -> Result<SparseVector> {
    if arity == 0 {
        return Err(Error::domain("ambient arity must be at least 1"));
    }
    vector_with(&move |k| interleaved_basis_index(arity, k), j)
}

fn vector_with(basis: &dyn Fn(u64) -> CompositeIndex, j: u64) -> Result<SparseVector> {
    if j == 0 {
        return Err(Error::domain("test vectors are indexed from 1"));
    }
    Ok(match j {
        1 => SparseVector::basis(basis(1)),
        2 => SparseVector::basis(basis(2)),
        _ if j % 2 == 0 => SparseVector::basis(basis(j / 2 + 1)),
        _ => combination((j - 1) / 2, basis),
    })
}

/// The family {x_1, …, x_J} with cached norms.
#[derive(Debug, Clone)]
pub struct TestVectorFamily {
    vectors: Vec<SparseVector>,
    norms: Vec<f64>,
}

/// The first j_max vectors of the unbounded-ambient family.
pub fn test_vector_family(j_max: u64) -> Result<TestVectorFamily> {
    collect_family(j_max, test_vector)
}

/// The first j_max vectors of the family for ⊕_{b<arity} ℓ²(ℕ).
pub fn test_vector_family_in(arity: u32, j_max: u64) -> Result<TestVectorFamily> {
    collect_family(j_max, |j| test_vector_in(arity, j))
}

fn collect_family(
    j_max: u64,
    gen: impl Fn(u64) -> Result<SparseVector>,
) -> Result<TestVectorFamily> {
    if j_max == 0 {
        return Err(Error::domain("family size must be at least 1"));
    }
    let mut vectors = Vec::with_capacity(j_max as usize);
    let mut norms = Vec::with_capacity(j_max as usize);
    for j in 1..=j_max {
        let v = gen(j)?;
        norms.push(v.norm());
        vectors.push(v);
    }
    Ok(TestVectorFamily { vectors, norms })
}

impl TestVectorFamily {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// 1-based accessor matching the family indexing.
    pub fn vector(&self, j: u64) -> Result<&SparseVector> {
        self.vectors
            .get((j as usize).wrapping_sub(1))
            .ok_or_else(|| Error::domain(format!("family has no vector j = {j}")))
    }

    pub fn norm(&self, j: u64) -> Result<f64> {
        self.norms
            .get((j as usize).wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::domain(format!("family has no vector j = {j}")))
    }

    pub fn iter(&self) -> impl Iterator<Item = &SparseVector> {
        self.vectors.iter()
    }
}

/// The c-th rational combination, c ≥ 1: decode c into a nonempty list of
/// naturals, map each through the Gaussian-rational enumeration, force the
/// last coefficient nonzero, and sum against the basis enumeration.
fn combination(c: u64, basis: &dyn Fn(u64) -> CompositeIndex) -> SparseVector {
    let codes = decode_list(c);
    let mut coeffs: Vec<Complex64> = codes.iter().map(|&t| gaussian_rational(t)).collect();
    let last = coeffs.last_mut().unwrap();
    if last.re == 0.0 && last.im == 0.0 {
        *last = Complex64::new(1.0, 0.0);
    }
    let mut v = SparseVector::zero();
    for (i, &g) in coeffs.iter().enumerate() {
        v.add_at(basis(i as u64 + 1), g);
    }
    v
}

/// Bijection ℕ → nonempty finite lists of ℕ, via iterated Cantor unpairing:
/// (head, rest) = unpair(m); rest = 0 ends the list, otherwise continue
/// with rest − 1.
fn decode_list(m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = m;
    loop {
        let (head, rest) = cantor_unpair(m);
        out.push(head);
        if rest == 0 {
            return out;
        }
        m = rest - 1;
    }
}

/// Enumeration of ℚ: 0, 1, −1, 1/2, −1/2, 2, −2, 1/3, …
fn rational(w: u64) -> f64 {
    if w == 0 {
        return 0.0;
    }
    let m = w - 1;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let (num, den) = cantor_unpair(m / 2);
    sign * (num as f64 + 1.0) / (den as f64 + 1.0)
}

/// Enumeration of ℚ + iℚ via one more unpairing.
fn gaussian_rational(t: u64) -> Complex64 {
    let (u, v) = cantor_unpair(t);
    Complex64::new(rational(u), rational(v))
}
