//! Report assembly and file output. Reports are trees in the same syntax
//! as the spec files; files are written atomically (temp file + rename)
//! and stdout is used when no path is given.

use std::path::Path;

use opstab_core::textio::{write_document, Node};
use opstab_core::{Error, Result};

pub fn key(name: &str, items: impl IntoIterator<Item = Node>) -> Node {
    let mut v = vec![Node::atom(name)];
    v.extend(items);
    Node::List(v)
}

pub fn leaf(name: &str, value: impl std::fmt::Display) -> Node {
    key(name, [Node::atom(value.to_string())])
}

pub fn float_atom(x: f64) -> Node {
    Node::atom(format!("{x:?}"))
}

pub fn float_leaf(name: &str, x: f64) -> Node {
    key(name, [float_atom(x)])
}

pub fn bool_leaf(name: &str, b: bool) -> Node {
    leaf(name, b)
}

pub fn complex_leaf(name: &str, z: num_complex::Complex64) -> Node {
    key(name, [float_atom(z.re), float_atom(z.im)])
}

/// Write the report tree to the file, or print it when no path is given.
pub fn emit_report(out: Option<&Path>, report: &Node) -> Result<()> {
    let text = write_document(std::slice::from_ref(report));
    emit_text(out, &text)
}

pub fn emit_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Write via a sibling temp file and rename, so a crash never leaves a
/// half-written artifact behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |e: std::io::Error| Error::domain(format!("cannot write '{}': {e}", path.display()));
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(io)?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, bytes).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)?;
    Ok(())
}
