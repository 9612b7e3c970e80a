//! Stability classification at a horizon: structural point-spectrum
//! search, tail decay of correlations on the probe pairs, and density
//! profiles combine into an evidence verdict. A unimodular eigenvalue
//! refutes almost weak stability outright; everything else is evidence at
//! the horizon, never proof.

use crate::error::{Error, Result};
use crate::operator::{is_at_least, OperatorClass, OperatorRep, CLASSIFY_TOL};
use crate::space::Vector;
use crate::spectral::{unimodular_point_spectrum, UnimodularEigen, UNIMODULAR_TOL};

use super::{correlation_sequence, density_profile};

pub const DEFAULT_HORIZON: u64 = 10_000;
pub const DEFAULT_EPS: f64 = 1e-2;
/// Metric truncation depth used by default in reports.
pub const DEFAULT_TRUNCATION_J: u32 = 20;
/// Density level the almost-weak-stability evidence rule demands.
pub const DENSITY_EVIDENCE_LEVEL: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Empty point spectrum and every probe tail beyond N/2 below ε.
    WeaklyStableEvidence,
    /// Empty point spectrum, decay along density > 0.9 on every probe,
    /// yet some tail exceedance survives in the window.
    AwsNotWsEvidence,
    /// A unimodular eigen-witness exists; almost weak stability fails.
    NotAws,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::WeaklyStableEvidence => "weakly-stable-evidence",
            Verdict::AwsNotWsEvidence => "aws-not-ws-evidence",
            Verdict::NotAws => "not-aws",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub verdict: Verdict,
    pub point_spectrum_found: bool,
    /// The unimodular eigen-witnesses; nonempty exactly when the verdict
    /// is `NotAws`.
    pub witnesses: Vec<UnimodularEigen>,
    /// sup of |c_n| over the tail window (N/2, N], across all probe pairs.
    pub weak_decay_evidence: f64,
    /// D(N) at the horizon, one entry per probe pair.
    pub density_evidence: Vec<f64>,
    /// Exceedance counts in the tail window, one entry per probe pair.
    pub tail_exceedances: Vec<u64>,
    pub horizon: u64,
    pub eps: f64,
    pub notes: Vec<String>,
}

/// Classify the operator's stability at the horizon from its point
/// spectrum and the correlation behavior of the probe pairs.
pub fn classify_stability(
    op: &OperatorRep,
    probes: &[(Vector, Vector)],
    n_max: u64,
    eps: f64,
) -> Result<StabilityVerdict> {
    op.validate()?;
    if !is_at_least(op, OperatorClass::Contraction, CLASSIFY_TOL)? {
        return Err(Error::ClassMismatch(
            "stability classification expects a contraction".into(),
        ));
    }
    if probes.is_empty() {
        return Err(Error::domain("need at least one probe pair"));
    }
    if n_max == 0 {
        return Err(Error::domain("horizon must be at least 1"));
    }
    if !(eps > 0.0) {
        return Err(Error::domain(format!(
            "decay threshold must be positive, got {eps}"
        )));
    }

    let mut notes = Vec::new();
    let spectrum = unimodular_point_spectrum(op, UNIMODULAR_TOL)?;
    if !spectrum.dense_converged {
        notes.push(
            "dense eigensolve hit its iteration cap; point-spectrum emptiness unverified"
                .into(),
        );
    }
    let point_spectrum_found = !spectrum.eigens.is_empty();

    let window_lo = n_max / 2;
    let mut weak_decay_evidence = 0.0f64;
    let mut density_evidence = Vec::with_capacity(probes.len());
    let mut tail_exceedances = Vec::with_capacity(probes.len());
    for (x, y) in probes {
        let series = correlation_sequence(op, x, y, n_max)?;
        let sup = series.tail_sup(window_lo + 1).unwrap_or(0.0);
        weak_decay_evidence = weak_decay_evidence.max(sup);
        let profile = density_profile(&series, eps)?;
        density_evidence.push(profile.density(n_max).expect("horizon ≥ 1"));
        tail_exceedances.push(profile.exceedances(window_lo, n_max).expect("window in range"));
    }

    let all_tails_decay = weak_decay_evidence < eps;
    let some_exceedance = tail_exceedances.iter().any(|&c| c > 0);
    let densities_high = density_evidence.iter().all(|&d| d > DENSITY_EVIDENCE_LEVEL);

    let verdict = if point_spectrum_found {
        Verdict::NotAws
    } else if !spectrum.dense_converged {
        Verdict::Inconclusive
    } else if all_tails_decay {
        Verdict::WeaklyStableEvidence
    } else if some_exceedance && densities_high {
        Verdict::AwsNotWsEvidence
    } else {
        Verdict::Inconclusive
    };

    Ok(StabilityVerdict {
        verdict,
        point_spectrum_found,
        witnesses: spectrum.eigens,
        weak_decay_evidence,
        density_evidence,
        tail_exceedances,
        horizon: n_max,
        eps,
        notes,
    })
}
