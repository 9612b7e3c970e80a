//! Correlation sequences c_n = ⟨Tⁿx, y⟩ with exact per-representation fast
//! paths and cached tail/Cesàro statistics.
//!
//! Every structured leaf has a closed form: diagonals sum entrywise phase
//! powers (rational angles stay exact), shifts read a single offset off
//! the supports, cyclic blocks rotate indices, dense blocks iterate the
//! matrix on its block, and spectral branches integrate e^{2πinθ} against
//! the measure. Direct sums add leaf contributions, so one pass per n
//! costs O(joint support).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fnv1a64;
use crate::operator::{resolve_leaf, OperatorRep, Scalar, SpectralMeasure};
use crate::space::{CompositeIndex, SparseVector, StepFunction, Vector};
use crate::textio::{operator_to_string, vector_to_string};

use super::fourier::{fourier_coefficient, interval_transform};

/// Where a series came from: the canonical text of the operator (as a
/// content hash) and probes, plus the horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub op_hash: u64,
    pub x: String,
    pub y: String,
    pub n_max: u64,
}

/// The sequence c_0..c_N with its running statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSeries {
    values: Vec<Complex64>,
    provenance: Provenance,
    /// tail_sup[n] = max_{n ≤ m ≤ N} |c_m|.
    tail_sup: Vec<f64>,
    /// wiener[n] = (1/n) Σ_{m=1}^n |c_m|² for n ≥ 1; wiener[0] = 0.
    wiener: Vec<f64>,
}

impl CorrelationSeries {
    fn new(values: Vec<Complex64>, provenance: Provenance) -> Self {
        let mut tail_sup = vec![0.0; values.len()];
        let mut running = 0.0f64;
        for (n, v) in values.iter().enumerate().rev() {
            running = running.max(v.norm());
            tail_sup[n] = running;
        }
        let mut wiener = Vec::with_capacity(values.len());
        let mut acc = 0.0f64;
        for (n, v) in values.iter().enumerate() {
            if n == 0 {
                wiener.push(0.0);
            } else {
                acc += v.norm_sqr();
                wiener.push(acc / n as f64);
            }
        }
        CorrelationSeries { values, provenance, tail_sup, wiener }
    }

    /// c_0..c_N in order.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, n: u64) -> Option<Complex64> {
        self.values.get(n as usize).copied()
    }

    /// Largest stored exponent N.
    pub fn n_max(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// max_{m ≥ n} |c_m| over the stored range.
    pub fn tail_sup(&self, n: u64) -> Option<f64> {
        self.tail_sup.get(n as usize).copied()
    }

    /// Cesàro average A(n) = (1/n) Σ_{m=1}^n |c_m|².
    pub fn wiener(&self, n: u64) -> Option<f64> {
        self.wiener.get(n as usize).copied()
    }

    /// The whole Cesàro sequence A(1)..A(N).
    pub fn wiener_values(&self) -> &[f64] {
        &self.wiener[1..]
    }
}

/// The Cesàro averages A(N) = (1/N) Σ_{n=1}^N |c_n|² of a series. For a
/// diagonal with distinct unimodular entries and x = y these converge to
/// Σ_k |x_k|⁴; for a spectral unitary probed by 𝟙 they converge to the sum
/// of squared atom weights.
pub fn wiener_average(series: &CorrelationSeries) -> Vec<f64> {
    series.wiener_values().to_vec()
}

/// c_n = ⟨Tⁿx, y⟩ for n = 0..=n_max.
pub fn correlation_sequence(
    op: &OperatorRep,
    x: &Vector,
    y: &Vector,
    n_max: u64,
) -> Result<CorrelationSeries> {
    op.validate()?;
    let len = usize::try_from(n_max)
        .ok()
        .and_then(|n| n.checked_add(1))
        .ok_or_else(|| Error::Capacity("correlation horizon overflows".into()))?;
    let values = match (x, y) {
        (Vector::Sparse(a), Vector::Sparse(b)) => sparse_series(op, a, b, len)?,
        (Vector::Step { branch: bx, f }, Vector::Step { branch: by, f: g }) => {
            if bx != by {
                return Err(Error::kind_mismatch(format!(
                    "step probes live on different branches {bx} and {by}"
                )));
            }
            match resolve_leaf(op, *bx)? {
                OperatorRep::SpectralUnitary(mu) => spectral_series(mu, f, g, len)?,
                _ => {
                    return Err(Error::kind_mismatch(format!(
                        "branch {bx} is not spectral; step probes only pair with \
                         spectral branches"
                    )))
                }
            }
        }
        _ => {
            return Err(Error::kind_mismatch(
                "correlation probes must be of the same kind (two sparse vectors \
                 or two step functions)",
            ))
        }
    };
    let provenance = Provenance {
        op_hash: fnv1a64(operator_to_string(op).as_bytes()),
        x: vector_to_string(x),
        y: vector_to_string(y),
        n_max,
    };
    Ok(CorrelationSeries::new(values, provenance))
}

// ---------------------------------------------------------------------
// sparse path: one closed-form term stream per leaf

/// A leaf's contribution generator: feeds c_n for n = 0, 1, 2, … in order.
enum LeafStream<'a> {
    /// Pairs (x_s·conj(y_s), λ_s); rational angles advance exactly.
    Diagonal { terms: Vec<(Complex64, Scalar)>, n: u64 },
    /// All (offset, product) pairs: c_n = Σ over pairs with offset − n = 0…
    /// stored as contribution_by_gap[g] = Σ x_s conj(y_{s+g}).
    Shift { by_gap: std::collections::BTreeMap<u64, Complex64>, n: u64 },
    Cyclic {
        /// head_by_residue[r] = Σ_{s < p} x_s conj(y_{(s+r) mod p})
        head_by_residue: Vec<Complex64>,
        /// Σ_{s ≥ p} x_s conj(y_s), contributed at every n.
        fixed: Complex64,
        n: u64,
    },
    Dense {
        matrix: &'a crate::operator::CMatrix,
        state: Vec<Complex64>,
        against: Vec<Complex64>,
        fresh: bool,
    },
    Zero,
}

impl LeafStream<'_> {
    fn next(&mut self) -> Complex64 {
        match self {
            LeafStream::Zero => Complex64::new(0.0, 0.0),
            LeafStream::Diagonal { terms, n } => {
                let mut c = Complex64::new(0.0, 0.0);
                for (p, lambda) in terms.iter() {
                    c += p * lambda.powu(*n).to_c64();
                }
                *n += 1;
                c
            }
            LeafStream::Shift { by_gap, n } => {
                let c = by_gap.get(n).copied().unwrap_or_default();
                *n += 1;
                c
            }
            LeafStream::Cyclic { head_by_residue, fixed, n } => {
                let p = head_by_residue.len() as u64;
                let c = head_by_residue[(*n % p) as usize] + *fixed;
                *n += 1;
                c
            }
            LeafStream::Dense { matrix, state, against, fresh } => {
                if *fresh {
                    *fresh = false;
                } else {
                    *state = matrix.apply(state);
                }
                let mut c = Complex64::new(0.0, 0.0);
                for (s, a) in state.iter().zip(against.iter()) {
                    c += s * a.conj();
                }
                c
            }
        }
    }
}

fn sparse_series(
    op: &OperatorRep,
    x: &SparseVector,
    y: &SparseVector,
    len: usize,
) -> Result<Vec<Complex64>> {
    let arity = op.arity();
    for v in [x, y] {
        if let Some(b) = v.max_branch() {
            if b >= arity {
                return Err(Error::BranchOutOfRange { branch: b, arity });
            }
        }
    }
    let mut streams = Vec::new();
    for (offset, leaf) in op.leaves() {
        streams.push(leaf_stream(leaf, offset, x, y)?);
    }
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let mut c = Complex64::new(0.0, 0.0);
        for s in &mut streams {
            c += s.next();
        }
        out.push(c);
    }
    Ok(out)
}

fn leaf_stream<'a>(
    leaf: &'a OperatorRep,
    offset: u32,
    x: &SparseVector,
    y: &SparseVector,
) -> Result<LeafStream<'a>> {
    let hi = offset + leaf.arity();
    let x_here = || x.branches_range(offset, hi);
    let y_here = || y.branches_range(offset, hi);
    match leaf {
        OperatorRep::Diagonal(d) => {
            let mut terms = Vec::new();
            for (&idx, &a) in x_here() {
                let b = y.get(idx);
                if b == Complex64::new(0.0, 0.0) {
                    continue;
                }
                terms.push((a * b.conj(), d.entry(idx.slot)));
            }
            Ok(if terms.is_empty() {
                LeafStream::Zero
            } else {
                LeafStream::Diagonal { terms, n: 0 }
            })
        }
        OperatorRep::RightShift { .. } => {
            // ⟨Sⁿx, y⟩ = Σ_s x_s · conj(y_{s+n}) branchwise: bucket every
            // support pair by its slot gap; exactly zero beyond the widest.
            let mut by_gap = std::collections::BTreeMap::new();
            for (&ix, &a) in x_here() {
                for (&iy, &b) in y.branch_range(ix.branch) {
                    if iy.slot >= ix.slot {
                        *by_gap
                            .entry(iy.slot - ix.slot)
                            .or_insert(Complex64::new(0.0, 0.0)) += a * b.conj();
                    }
                }
            }
            by_gap.retain(|_, v| *v != Complex64::new(0.0, 0.0));
            Ok(if by_gap.is_empty() {
                LeafStream::Zero
            } else {
                LeafStream::Shift { by_gap, n: 0 }
            })
        }
        OperatorRep::CyclicMix { period, .. } => {
            let p = *period;
            let mut head_by_residue = vec![Complex64::new(0.0, 0.0); p as usize];
            let mut fixed = Complex64::new(0.0, 0.0);
            for (&ix, &a) in x_here() {
                if ix.slot < p {
                    for r in 0..p {
                        let target = CompositeIndex::new(ix.branch, (ix.slot + r) % p);
                        let b = y.get(target);
                        if b != Complex64::new(0.0, 0.0) {
                            head_by_residue[r as usize] += a * b.conj();
                        }
                    }
                } else {
                    fixed += a * y.get(ix).conj();
                }
            }
            let all_zero = fixed == Complex64::new(0.0, 0.0)
                && head_by_residue.iter().all(|c| *c == Complex64::new(0.0, 0.0));
            Ok(if all_zero {
                LeafStream::Zero
            } else {
                LeafStream::Cyclic { head_by_residue, fixed, n: 0 }
            })
        }
        OperatorRep::Dense(m) => {
            let dim = m.nrows();
            let mut state = vec![Complex64::new(0.0, 0.0); dim];
            let mut against = vec![Complex64::new(0.0, 0.0); dim];
            let mut touched = false;
            for (&idx, &a) in x_here() {
                if idx.slot >= dim as u64 {
                    return Err(Error::domain(format!(
                        "slot {} is outside the dense block of dimension {dim}",
                        idx.slot
                    )));
                }
                state[idx.slot as usize] = a;
                touched = true;
            }
            for (&idx, &b) in y_here() {
                if idx.slot >= dim as u64 {
                    return Err(Error::domain(format!(
                        "slot {} is outside the dense block of dimension {dim}",
                        idx.slot
                    )));
                }
                against[idx.slot as usize] = b;
            }
            Ok(if touched {
                LeafStream::Dense { matrix: m, state, against, fresh: true }
            } else {
                LeafStream::Zero
            })
        }
        OperatorRep::SpectralUnitary(_) => {
            if x_here().next().is_some() || y_here().next().is_some() {
                Err(Error::kind_mismatch(format!(
                    "branch {offset} is spectral: probe it with step functions, \
                     not sparse coordinates"
                )))
            } else {
                Ok(LeafStream::Zero)
            }
        }
        OperatorRep::DirectSum(_) => unreachable!("leaves() flattens sums"),
    }
}

// ---------------------------------------------------------------------
// spectral path: closed-form integration against the measure

fn spectral_series(
    mu: &SpectralMeasure,
    f: &StepFunction,
    g: &StepFunction,
    len: usize,
) -> Result<Vec<Complex64>> {
    // ⟨Uⁿf, g⟩ = ∫ e^{2πinθ} f(θ) conj(g(θ)) dμ(θ)
    let weight = f.product_conj(g);
    let constant_weight = constant_value(&weight);

    if let Some(w) = constant_weight {
        // The pointwise weight is a constant, so the integral is w·μ̂(n)
        // for every part of the measure at once.
        return Ok((0..len)
            .map(|n| w * fourier_coefficient(mu, n as i64))
            .collect());
    }

    if mu.self_similar.is_some() {
        return Err(Error::unsupported(
            "self-similar spectral parts support constant probes only; \
             partial-interval transforms of singular measures have no closed form",
        ));
    }

    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for atom in &mu.atoms {
        let t = atom.location.turns();
        let w = atom.weight * weight.eval(t);
        if w == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (n, slot) in out.iter_mut().enumerate() {
            *slot += w * super::fourier::unit_phase(&atom.location, n as i64);
        }
    }
    if let Some(d) = &mu.density {
        let grid = d.refined_grid(&weight);
        for cell in grid.windows(2) {
            let (a, b) = (cell[0], cell[1]);
            let mid = 0.5 * (a + b);
            let v = d.eval(mid) * weight.eval(mid);
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (n, slot) in out.iter_mut().enumerate() {
                *slot += v * interval_transform(a, b, n as i64);
            }
        }
    }
    Ok(out)
}

/// The single value a step function takes everywhere, if it is constant.
fn constant_value(f: &StepFunction) -> Option<Complex64> {
    let first = *f.values().first()?;
    f.values().iter().all(|v| *v == first).then_some(first)
}
