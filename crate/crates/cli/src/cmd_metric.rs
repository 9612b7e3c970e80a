//! `opstab metric`: truncated Polish-metric distance between two
//! operators, reported as the bracketing interval [partial, partial+tail].

use std::path::Path;

use opstab_core::stability::{metric_strong, metric_strong_star, metric_weak, MetricValue};
use opstab_core::Result;

use crate::output::{emit_report, float_leaf, key, leaf};
use crate::sources::resolve_operator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MetricMode {
    /// d*(U, V): forward and adjoint increments; unitaries only.
    StrongStar,
    /// d_s(T, S): forward increments; isometries.
    Strong,
    /// d_w(T, S): test-functional increments; contractions.
    Weak,
}

impl MetricMode {
    fn name(self) -> &'static str {
        match self {
            MetricMode::StrongStar => "strong-star",
            MetricMode::Strong => "strong",
            MetricMode::Weak => "weak",
        }
    }
}

pub fn run(
    left: &str,
    right: &str,
    mode: MetricMode,
    truncation_j: u32,
    out: Option<&Path>,
) -> Result<()> {
    let t = resolve_operator(left)?;
    let s = resolve_operator(right)?;
    let value: MetricValue = match mode {
        MetricMode::StrongStar => metric_strong_star(&t, &s, truncation_j)?,
        MetricMode::Strong => metric_strong(&t, &s, truncation_j)?,
        MetricMode::Weak => metric_weak(&t, &s, truncation_j)?,
    };
    let report = key(
        "metric-report",
        [
            leaf("mode", mode.name()),
            leaf("left", left),
            leaf("right", right),
            leaf("truncation-j", truncation_j),
            float_leaf("partial", value.partial),
            float_leaf("tail", value.tail),
            float_leaf("upper", value.upper()),
        ],
    );
    emit_report(out, &report)
}
