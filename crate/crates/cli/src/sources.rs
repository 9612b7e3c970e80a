//! Resolution of `--spec` values: a path to a spec file in the tree
//! syntax, or `preset:NAME` for a built-in construction.

use opstab_core::operator::OperatorRep;
use opstab_core::textio::operator_from_str;
use opstab_core::{Error, Result};

use crate::presets::preset;

pub fn resolve_operator(source: &str) -> Result<OperatorRep> {
    if let Some(name) = source.strip_prefix("preset:") {
        return preset(name);
    }
    let text = std::fs::read_to_string(source)
        .map_err(|e| Error::domain(format!("cannot read spec '{source}': {e}")))?;
    operator_from_str(&text)
}
