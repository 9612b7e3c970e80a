//! Gram–Schmidt with zero-vector reporting.

use super::SparseVector;

/// Which inputs survived and which were dropped as (numerically) dependent.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoReport {
    /// Indices (into the input slice) that were dropped.
    pub dropped: Vec<usize>,
}

/// Threshold below which a projected residual counts as zero, relative to
/// the vector's original norm.
const DEPENDENT_REL_TOL: f64 = 1e-10;

/// Modified Gram–Schmidt with one reorthogonalization pass. Inputs whose
/// residual after projection is below `DEPENDENT_REL_TOL` times their
/// original norm (or exactly zero) are dropped and reported.
pub fn orthonormalize(inputs: &[SparseVector]) -> (Vec<SparseVector>, OrthoReport) {
    let mut basis: Vec<SparseVector> = Vec::new();
    let mut dropped = Vec::new();
    for (i, x) in inputs.iter().enumerate() {
        let original = x.norm();
        if original == 0.0 {
            dropped.push(i);
            continue;
        }
        let mut v = x.clone();
        // Two MGS sweeps keep the basis orthogonal to working precision
        // even when inputs are nearly dependent.
        for _ in 0..2 {
            for q in &basis {
                let c = v.inner(q);
                if c.re != 0.0 || c.im != 0.0 {
                    v = v.sub(&q.scale(c));
                }
            }
        }
        let n = v.norm();
        if n <= DEPENDENT_REL_TOL * original {
            dropped.push(i);
            continue;
        }
        basis.push(v.scale(num_complex::Complex64::new(1.0 / n, 0.0)));
    }
    (basis, OrthoReport { dropped })
}
