//! `opstab build`: parse and validate an operator spec, classify it, and
//! optionally write back the canonical serialization.

use std::path::Path;

use opstab_core::operator::{classify_operator, OperatorClass, CLASSIFY_TOL};
use opstab_core::textio::{operator_from_str, operator_to_string, Node};
use opstab_core::{Error, Result};

use crate::output::{emit_report, float_atom, key, leaf, write_atomic};
use crate::sources::resolve_operator;

pub fn class_name(class: OperatorClass) -> &'static str {
    match class {
        OperatorClass::Unitary => "unitary",
        OperatorClass::Isometry => "isometry",
        OperatorClass::Contraction => "contraction",
        OperatorClass::Unclassified => "unclassified",
    }
}

pub fn run(spec: &str, out: Option<&Path>) -> Result<()> {
    let op = resolve_operator(spec)?;
    let canonical = operator_to_string(&op);
    let reparsed = operator_from_str(&canonical)?;
    if operator_to_string(&reparsed) != canonical {
        return Err(Error::CertificateFailure(format!(
            "serialization of '{spec}' does not round-trip"
        )));
    }

    let class = classify_operator(&op, CLASSIFY_TOL)?;
    let mut items = vec![
        leaf("source", spec),
        leaf("class", class_name(class.class)),
        leaf("round-trip", "ok"),
        key("evidence", class.evidence.iter().map(Node::atom)),
    ];
    if !class.dense_residuals.is_empty() {
        items.push(key(
            "dense-residuals",
            class.dense_residuals.iter().map(|(a, b)| {
                Node::list([float_atom(*a), float_atom(*b)])
            }),
        ));
    }
    if let Some(path) = out {
        write_atomic(path, canonical.as_bytes())?;
        items.push(leaf("out", path.display()));
    }
    emit_report(None, &key("build-report", items))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_names_are_kebab_case() {
        assert_eq!(class_name(OperatorClass::Unitary), "unitary");
        assert_eq!(class_name(OperatorClass::Unclassified), "unclassified");
    }

    #[test]
    fn build_writes_the_canonical_spec() {
        let dir = std::env::temp_dir().join(format!("opstab-build-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let out = dir.join("shift.op");
        run("preset:shift", Some(&out)).unwrap();
        let text = std::fs::read_to_string(&out).unwrap();
        let op = operator_from_str(&text).unwrap();
        assert_eq!(operator_to_string(&op), text);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
