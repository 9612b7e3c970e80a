//! `opstab classify`: stability verdict at a horizon from the point
//! spectrum and the correlation behavior of probe pairs.

use std::path::Path;

use opstab_core::stability::classify_stability;
use opstab_core::textio::Node;
use opstab_core::Result;

use crate::cmd_decompose::eigen_item;
use crate::output::{bool_leaf, emit_report, float_atom, float_leaf, key, leaf};
use crate::probes::parse_probe_list;
use crate::sources::resolve_operator;

pub fn run(
    spec: &str,
    probe_args: &[String],
    horizon: u64,
    eps: f64,
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    let op = resolve_operator(spec)?;
    let probes = parse_probe_list(probe_args, seed, &op)?;
    let pairs: Vec<_> = probes.iter().map(|v| (v.clone(), v.clone())).collect();
    let verdict = classify_stability(&op, &pairs, horizon, eps)?;

    let mut items = vec![
        leaf("source", spec),
        leaf("verdict", verdict.verdict),
        leaf("horizon", verdict.horizon),
        float_leaf("eps", verdict.eps),
        bool_leaf("point-spectrum-found", verdict.point_spectrum_found),
        float_leaf("weak-decay-evidence", verdict.weak_decay_evidence),
        key("density-evidence", verdict.density_evidence.iter().map(|d| float_atom(*d))),
        key(
            "tail-exceedances",
            verdict.tail_exceedances.iter().map(|c| Node::atom(c.to_string())),
        ),
    ];
    if !verdict.witnesses.is_empty() {
        items.push(key("witnesses", verdict.witnesses.iter().map(eigen_item)));
    }
    if !verdict.notes.is_empty() {
        items.push(key("notes", verdict.notes.iter().map(Node::atom)));
    }
    emit_report(out, &key("stability-report", items))
}
