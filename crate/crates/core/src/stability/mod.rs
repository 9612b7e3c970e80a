//! Stability laboratory: correlation sequences, Fourier coefficients,
//! density profiles, Cesàro averages, operator metrics, category sets,
//! verdicts.

mod correlation;
mod density;
mod eigbound;
mod fourier;
mod lemma42;
mod metrics;
mod sets;
mod verdict;

pub use correlation::{correlation_sequence, wiener_average, CorrelationSeries, Provenance};
pub use eigbound::{eigenvector_bound_check, EigenBoundReport, EIGEN_RESIDUAL_TOL};
pub use lemma42::{
    weak_to_strong_check, ProbeRow, WeakToStrongReport, CHAIN_TOL, HYPOTHESIS_TOL,
};
pub use density::{density_profile, DensityProfile};
pub use fourier::{fourier_coefficient, interval_transform, self_similar_transform, unit_phase};
pub use metrics::{metric_strong, metric_strong_star, metric_weak, MetricValue, TRUNCATION_CAP};
pub use sets::{
    alignment_distance, set_membership, CategorySet, Membership, MembershipReport,
    PERIOD_WINDOW_CAP,
};
pub use verdict::{
    classify_stability, StabilityVerdict, Verdict, DEFAULT_EPS, DEFAULT_HORIZON,
    DEFAULT_TRUNCATION_J, DENSITY_EVIDENCE_LEVEL,
};
