//! Common report type returned by the approximation procedures.

use num_complex::Complex64;

use crate::space::CompositeIndex;

/// Errors of one caller-supplied probe vector under the approximation:
/// ‖T x − A x‖ and, where the adjoint is tracked, ‖T* x − A* x‖.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeError {
    pub forward: f64,
    pub adjoint: Option<f64>,
}

/// What the construction certifies about its output.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// The output satisfies A^period = I exactly.
    Periodic { period: u128 },
    /// The output's spectral measures carry no atoms, hence no unimodular
    /// eigenvalues.
    AtomFree { branch_count: u32 },
}

/// Where one source eigenspace coordinate went inside an output branch.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenGroupEmbedding {
    pub eigenvalue: Complex64,
    /// Branch of the output operator carrying this eigenvalue group.
    pub branch: u32,
    /// (source basis index, dyadic level k): the coordinate is embedded as
    /// the normalized indicator of [1 − 2^{−k}, 1 − 2^{−k−1}).
    pub sources: Vec<(CompositeIndex, u32)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ApproxReport {
    /// The ε the caller asked for, if the construction takes one.
    pub requested_eps: Option<f64>,
    /// Certified distance actually achieved (exact where a closed form
    /// exists, conservative upper bound otherwise).
    pub achieved: Option<f64>,
    /// A-priori bound the construction used to pick its parameters.
    pub bound: Option<f64>,
    pub certificate: Option<Certificate>,
    pub probe_errors: Vec<ProbeError>,
    pub embeddings: Vec<EigenGroupEmbedding>,
    pub notes: Vec<String>,
}

impl ApproxReport {
    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}
