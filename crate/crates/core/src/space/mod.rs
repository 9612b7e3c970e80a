//! The ambient space: composite indices, sparse vectors, step functions,
//! the canonical dense test family, and Gram–Schmidt.

mod index;
mod sparse;
mod step;
mod family;
mod ortho;

pub use index::CompositeIndex;
pub use sparse::SparseVector;
pub use step::StepFunction;
pub use family::{
    test_vector, test_vector_family, test_vector_family_in, test_vector_in, TestVectorFamily,
};
pub use ortho::{orthonormalize, OrthoReport};

use crate::error::{Error, Result};
use num_complex::Complex64;

/// A vector in one of the two concrete realizations the crate works with:
/// a sparse ℓ² vector over composite indices, or an interval step function
/// living on a single spectral branch.
#[derive(Debug, Clone, PartialEq)]
pub enum Vector {
    Sparse(SparseVector),
    Step { branch: u32, f: StepFunction },
}

impl Vector {
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        match self {
            Vector::Sparse(x) => x.norm_sqr(),
            Vector::Step { f, .. } => f.norm_sqr(),
        }
    }

    pub fn as_sparse(&self) -> Result<&SparseVector> {
        match self {
            Vector::Sparse(x) => Ok(x),
            Vector::Step { .. } => Err(Error::kind_mismatch(
                "expected a sparse vector, found a step function",
            )),
        }
    }
}

/// Inner product of two vectors of the same kind. Step functions must also
/// live on the same branch; anything else is a kind mismatch.
///
/// The convention is linear in the first argument and conjugate-linear in
/// the second.
pub fn inner(x: &Vector, y: &Vector) -> Result<Complex64> {
    match (x, y) {
        (Vector::Sparse(a), Vector::Sparse(b)) => Ok(a.inner(b)),
        (Vector::Step { branch: ba, f: fa }, Vector::Step { branch: bb, f: fb }) => {
            if ba != bb {
                return Err(Error::kind_mismatch(format!(
                    "step functions live on different branches ({ba} vs {bb})"
                )));
            }
            Ok(fa.inner(fb))
        }
        _ => Err(Error::kind_mismatch(
            "inner product needs both vectors of the same kind (sparse/sparse or step/step)",
        )),
    }
}
