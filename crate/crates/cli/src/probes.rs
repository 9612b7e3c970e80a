//! Probe-vector arguments. Accepted forms:
//!
//! - `eK` — the K-th canonical basis vector (1-based, branch 0), so `e1`
//!   is the first basis vector
//! - `one` — the constant function 𝟙 on a spectral branch
//! - `random:K` — K reproducible sparse vectors drawn from the seed
//! - `@PATH` — a vector spec file in the tree syntax
//! - an inline `(vector …)` tree

use opstab_core::operator::OperatorRep;
use opstab_core::space::{CompositeIndex, SparseVector, StepFunction, Vector};
use opstab_core::textio::vector_from_str;
use opstab_core::{Complex64, Error, Result, SplitMix64};

pub fn parse_vector(arg: &str) -> Result<Vector> {
    if arg == "one" {
        return Ok(Vector::Step {
            branch: 0,
            f: StepFunction::constant(Complex64::new(1.0, 0.0)),
        });
    }
    if let Some(k) = arg.strip_prefix('e').and_then(|s| s.parse::<u64>().ok()) {
        if k == 0 {
            return Err(Error::domain("basis vectors are 1-based: e1, e2, …"));
        }
        return Ok(Vector::Sparse(SparseVector::basis(CompositeIndex::new(0, k - 1))));
    }
    if let Some(path) = arg.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::domain(format!("cannot read vector '{path}': {e}")))?;
        return vector_from_str(&text);
    }
    if arg.starts_with('(') {
        return vector_from_str(arg);
    }
    Err(Error::domain(format!(
        "cannot parse probe '{arg}'; expected eK, one, random:K, @file, or an inline (vector …) tree"
    )))
}

/// Expand a probe list, resolving `random:K` against the seed. An empty
/// list falls back to the operator's canonical probe: 𝟙 when the operator
/// is a spectral unitary, the first basis vector otherwise.
pub fn parse_probe_list(args: &[String], seed: u64, op: &OperatorRep) -> Result<Vec<Vector>> {
    if args.is_empty() {
        return Ok(vec![default_probe(op)]);
    }
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::new();
    for arg in args {
        if let Some(count) = arg.strip_prefix("random:") {
            let count: u64 = count
                .parse()
                .map_err(|_| Error::domain(format!("bad random probe count in '{arg}'")))?;
            for _ in 0..count {
                out.push(Vector::Sparse(random_sparse(&mut rng)));
            }
        } else {
            out.push(parse_vector(arg)?);
        }
    }
    Ok(out)
}

/// The same list restricted to sparse vectors, for constructions that work
/// coordinatewise.
pub fn sparse_probes(probes: &[Vector]) -> Result<Vec<SparseVector>> {
    probes
        .iter()
        .map(|v| match v {
            Vector::Sparse(x) => Ok(x.clone()),
            Vector::Step { .. } => Err(Error::kind_mismatch(
                "this command needs sparse probe vectors, not step functions",
            )),
        })
        .collect()
}

pub fn default_probe(op: &OperatorRep) -> Vector {
    if matches!(op, OperatorRep::SpectralUnitary(_)) {
        Vector::Step { branch: 0, f: StepFunction::constant(Complex64::new(1.0, 0.0)) }
    } else {
        Vector::Sparse(SparseVector::basis(CompositeIndex::new(0, 0)))
    }
}

fn random_sparse(rng: &mut SplitMix64) -> SparseVector {
    let mut x = SparseVector::zero();
    for slot in 0..4u64 {
        x.set(CompositeIndex::new(0, slot), rng.next_complex());
    }
    x
}
