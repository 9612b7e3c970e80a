//! Spectral structure: eigensolver, unimodular point spectrum, splitting
//! into reversible and stable parts, Wold decomposition, measure splitting.

mod eigen;
mod point_spectrum;
mod wold;
mod measure_split;

pub use eigen::{dense_eigen, residual, EigenPair, EigenResult, CLUSTER_TOL, SWEEPS_PER_DIM};
pub use measure_split::measure_split;
pub use point_spectrum::{
    jgdl_split, unimodular_point_spectrum, Dim, EigenWitness, JgdlSplit, Multiplicity,
    PointSpectrum, StableProjector, UnimodularEigen, UNIMODULAR_TOL,
};
pub use wold::{wold_decompose, WoldSplit, WOLD_HORIZON};
