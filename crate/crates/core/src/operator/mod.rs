//! Operator representations and their exact actions.

pub mod matrix;
mod scalar;
mod tail;
mod rep;
mod measure;
mod apply;
mod classify;
mod distance;

pub use apply::{
    apply, apply_adjoint_extended, apply_adjoint_power_sparse, apply_adjoint_sparse,
    apply_extended, apply_power_sparse, apply_sparse, resolve_leaf,
};
pub use classify::{classify_operator, is_at_least, ClassReport, OperatorClass, CLASSIFY_TOL};
pub use distance::diagonal_distance;
pub use matrix::{operator_norm_estimate, CMatrix, DENSE_DIM_CAP};
pub use measure::{Angle, Atom, SelfSimilarPart, SpectralMeasure};
pub use rep::{DiagonalOp, OperatorRep, CONTRACTION_GATE_TOL};
pub use scalar::{lcm_u128, RationalAngle, Scalar};
pub use tail::{Tail, TAIL_PERIOD_CAP};
