//! `opstab decompose`: structural splits — Wold (isometries), the
//! reversible/stable splitting (contractions), or the atomic/continuous
//! split of a spectral measure.

use std::path::Path;

use opstab_core::operator::OperatorRep;
use opstab_core::spectral::{
    jgdl_split, measure_split, wold_decompose, Dim, EigenWitness, Multiplicity, PointSpectrum,
    UNIMODULAR_TOL,
};
use opstab_core::textio::{measure_to_node, operator_to_node, vector_to_node, Node};
use opstab_core::{Error, Result};

use crate::output::{bool_leaf, emit_report, float_atom, key, leaf};
use crate::sources::resolve_operator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DecomposeMode {
    /// Unitary part ⊕ unilateral shift of some multiplicity.
    Wold,
    /// Reversible (unimodular eigenvector span) vs stable complement.
    Jgdl,
    /// Atomic vs continuous part of a spectral measure.
    Measure,
}

pub fn run(spec: &str, mode: DecomposeMode, horizon: u64, out: Option<&Path>) -> Result<()> {
    let op = resolve_operator(spec)?;
    let report = match mode {
        DecomposeMode::Wold => wold_report(spec, &op, horizon)?,
        DecomposeMode::Jgdl => jgdl_report(spec, &op)?,
        DecomposeMode::Measure => measure_report(spec, &op)?,
    };
    emit_report(out, &report)
}

fn wold_report(spec: &str, op: &OperatorRep, horizon: u64) -> Result<Node> {
    let split = wold_decompose(op, horizon)?;
    let mut items = vec![
        leaf("source", spec),
        leaf("horizon", horizon),
        key("unitary-branches", split.unitary_branches.iter().map(|b| Node::atom(b.to_string()))),
        key("shift-branches", split.shift_branches.iter().map(|b| Node::atom(b.to_string()))),
        leaf("multiplicity", split.multiplicity),
        key("wandering-basis", split.wandering_basis.iter().map(|y| {
            vector_to_node(&opstab_core::space::Vector::Sparse(y.clone()))
        })),
    ];
    if let Some(u) = &split.unitary_part {
        items.push(key("unitary-part", [operator_to_node(u)]));
        items.push(key(
            "branch-map",
            split.branch_map.iter().map(|(src, dst)| {
                Node::list([Node::atom(src.to_string()), Node::atom(dst.to_string())])
            }),
        ));
    }
    Ok(key("wold-report", items))
}

fn jgdl_report(spec: &str, op: &OperatorRep) -> Result<Node> {
    let split = jgdl_split(op, UNIMODULAR_TOL)?;
    let items = vec![
        leaf("source", spec),
        leaf("reversible-dim", dim_name(split.reversible_dim)),
        key("point-spectrum", point_spectrum_items(&split.point)),
        key(
            "residuals",
            split.residuals.iter().map(|(f, a)| Node::list([float_atom(*f), float_atom(*a)])),
        ),
    ];
    Ok(key("jgdl-report", items))
}

fn measure_report(spec: &str, op: &OperatorRep) -> Result<Node> {
    let mu = match op {
        OperatorRep::SpectralUnitary(mu) => mu,
        other => {
            return Err(Error::kind_mismatch(format!(
                "measure split needs a spectral unitary, got {other:?}"
            )))
        }
    };
    let (atomic, continuous) = measure_split(mu)?;
    Ok(key(
        "measure-report",
        [
            leaf("source", spec),
            leaf("atom-count", atomic.atoms.len()),
            key("atomic", [measure_to_node(&atomic)]),
            key("continuous", [measure_to_node(&continuous)]),
        ],
    ))
}

pub fn point_spectrum_items(point: &PointSpectrum) -> Vec<Node> {
    let mut items: Vec<Node> = point.eigens.iter().map(eigen_item).collect();
    items.push(bool_leaf("dense-converged", point.dense_converged));
    items
}

pub fn eigen_item(e: &opstab_core::spectral::UnimodularEigen) -> Node {
    let mut entry = vec![
        key("value", [float_atom(e.value.re), float_atom(e.value.im)]),
        leaf("branch", e.branch),
        leaf("multiplicity", multiplicity_name(e.multiplicity)),
    ];
    if let Some(r) = e.rational {
        entry.push(leaf("angle", format!("{}/{}", r.p(), r.q())));
    }
    entry.push(leaf(
        "witness",
        match &e.witness {
            EigenWitness::Vector(_) => "vector",
            EigenWitness::Atom { .. } => "atom",
        },
    ));
    key("eigen", entry)
}

fn multiplicity_name(m: Multiplicity) -> String {
    match m {
        Multiplicity::Finite(k) => k.to_string(),
        Multiplicity::Infinite => "infinite".into(),
    }
}

fn dim_name(d: Dim) -> String {
    match d {
        Dim::Finite(k) => k.to_string(),
        Dim::Infinite => "infinite".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_preset_splits_with_multiplicity_one() {
        let op = resolve_operator("preset:mixed").unwrap();
        let split = wold_decompose(&op, 64).unwrap();
        assert_eq!(split.multiplicity, 1);
        assert_eq!(split.unitary_branches, vec![0]);
        assert_eq!(split.shift_branches, vec![1]);
    }

    #[test]
    fn measure_split_rejects_non_spectral_operators() {
        let e = run("preset:shift", DecomposeMode::Measure, 64, None).unwrap_err();
        assert!(matches!(e, Error::KindMismatch(_)));
    }
}
