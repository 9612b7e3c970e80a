//! Typed views of the tree syntax: operators, measures, and vectors parse
//! from and serialize to `Node` trees with a `kind` tag per node.
//!
//! Parsing is strict — unknown keys, duplicate keys, and malformed scalars
//! are rejected — so a round trip through text cannot silently drop
//! information. Serialize → parse → serialize is byte-identical because
//! the writers are pure functions of the value.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{
    Angle, Atom, CMatrix, DiagonalOp, OperatorRep, RationalAngle, Scalar, SelfSimilarPart,
    SpectralMeasure, Tail,
};
use crate::space::{SparseVector, StepFunction, Vector};

use super::sexpr::{parse_node, write_node, Node};

/// Canonical text for an operator, with trailing newline.
pub fn operator_to_string(op: &OperatorRep) -> String {
    let mut s = write_node(&operator_to_node(op));
    s.push('\n');
    s
}

pub fn operator_from_str(text: &str) -> Result<OperatorRep> {
    let op = operator_from_node(&parse_node(text)?)?;
    op.validate()?;
    Ok(op)
}

/// Canonical text for a vector, with trailing newline.
pub fn vector_to_string(v: &Vector) -> String {
    let mut s = write_node(&vector_to_node(v));
    s.push('\n');
    s
}

pub fn vector_from_str(text: &str) -> Result<Vector> {
    vector_from_node(&parse_node(text)?)
}

// ---------------------------------------------------------------------
// node constructors

fn key(name: &str, items: impl IntoIterator<Item = Node>) -> Node {
    let mut v = vec![Node::atom(name)];
    v.extend(items);
    Node::List(v)
}

fn int(n: impl std::fmt::Display) -> Node {
    Node::atom(n.to_string())
}

fn float(x: f64) -> Node {
    Node::atom(format!("{x:?}"))
}

pub fn scalar_to_node(s: &Scalar) -> Node {
    match s {
        Scalar::Complex(z) => key("complex", [float(z.re), float(z.im)]),
        Scalar::Root(r) => key("root", [int(r.p()), int(r.q())]),
    }
}

pub fn angle_to_node(a: &Angle) -> Node {
    match a {
        Angle::Turns(t) => key("turns", [float(*t)]),
        Angle::Rational(r) => key("root", [int(r.p()), int(r.q())]),
    }
}

fn tail_to_node(t: &Tail) -> Node {
    match t {
        Tail::Identity => key("identity", []),
        Tail::Constant(s) => key("constant", [scalar_to_node(s)]),
        Tail::Rotation(r) => key("rotation", [int(r.p()), int(r.q())]),
        Tail::Cycle(v) => key("cycle", v.iter().map(scalar_to_node)),
    }
}

pub fn measure_to_node(mu: &SpectralMeasure) -> Node {
    let mut items = vec![Node::atom("measure")];
    for a in &mu.atoms {
        items.push(key("atom", [angle_to_node(&a.location), float(a.weight)]));
    }
    if let Some(d) = &mu.density {
        items.push(key(
            "density",
            [
                key("breaks", d.breaks().iter().map(|&b| float(b))),
                key(
                    "values",
                    d.values().iter().flat_map(|z| [float(z.re), float(z.im)]),
                ),
            ],
        ));
    }
    if let Some(ss) = &mu.self_similar {
        items.push(key(
            "self_similar",
            [
                key("ratio", [float(ss.ratio)]),
                key("digits", ss.digits.iter().map(|&d| float(d))),
                key("weight", [float(ss.weight)]),
            ],
        ));
    }
    Node::List(items)
}

pub fn operator_to_node(op: &OperatorRep) -> Node {
    let mut items = vec![Node::atom("operator")];
    match op {
        OperatorRep::Diagonal(d) => {
            items.push(key("kind", [Node::atom("diagonal")]));
            for (&slot, s) in d.explicit_entries() {
                items.push(key("entry", [int(slot), scalar_to_node(s)]));
            }
            items.push(key("tail", [tail_to_node(d.tail())]));
        }
        OperatorRep::RightShift { branches } => {
            items.push(key("kind", [Node::atom("shift")]));
            items.push(key("branches", [int(*branches)]));
        }
        OperatorRep::CyclicMix { period, branches } => {
            items.push(key("kind", [Node::atom("cyclic")]));
            items.push(key("period", [int(*period)]));
            items.push(key("branches", [int(*branches)]));
        }
        OperatorRep::Dense(m) => {
            items.push(key("kind", [Node::atom("dense")]));
            items.push(key("dim", [int(m.nrows())]));
            for i in 0..m.nrows() {
                items.push(key(
                    "row",
                    (0..m.ncols()).flat_map(|j| {
                        let z = m[(i, j)];
                        [float(z.re), float(z.im)]
                    }),
                ));
            }
        }
        OperatorRep::SpectralUnitary(mu) => {
            items.push(key("kind", [Node::atom("spectral")]));
            items.push(measure_to_node(mu));
        }
        OperatorRep::DirectSum(children) => {
            items.push(key("kind", [Node::atom("direct_sum")]));
            items.extend(children.iter().map(operator_to_node));
        }
    }
    Node::List(items)
}

pub fn vector_to_node(v: &Vector) -> Node {
    match v {
        Vector::Sparse(x) => {
            let mut items = vec![
                Node::atom("vector"),
                key("kind", [Node::atom("sparse")]),
            ];
            for (&idx, &a) in x.iter() {
                items.push(key(
                    "entry",
                    [int(idx.branch), int(idx.slot), float(a.re), float(a.im)],
                ));
            }
            Node::List(items)
        }
        Vector::Step { branch, f } => Node::List(vec![
            Node::atom("vector"),
            key("kind", [Node::atom("step")]),
            key("branch", [int(*branch)]),
            key("breaks", f.breaks().iter().map(|&b| float(b))),
            key(
                "values",
                f.values().iter().flat_map(|z| [float(z.re), float(z.im)]),
            ),
        ]),
    }
}

// ---------------------------------------------------------------------
// node readers

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse { line: 0, col: 0, msg: msg.into() }
}

/// A tagged record `(tag item*)`. Checks the tag and hands back the items.
fn record<'a>(node: &'a Node, tag: &str) -> Result<&'a [Node]> {
    let items = node
        .as_list()
        .ok_or_else(|| bad(format!("expected a ({tag} ...) record, found an atom")))?;
    match items.first().and_then(Node::as_atom) {
        Some(t) if t == tag => Ok(&items[1..]),
        Some(t) => Err(bad(format!("expected a ({tag} ...) record, found ({t} ...)"))),
        None => Err(bad(format!("expected a ({tag} ...) record"))),
    }
}

/// Every item must be a keyed list whose head atom appears in `allowed`.
fn check_keys(items: &[Node], allowed: &[&str]) -> Result<()> {
    for item in items {
        match item.tag() {
            Some(t) if allowed.contains(&t) => {}
            Some(t) => {
                return Err(bad(format!(
                    "unknown key ({t} ...); expected one of {}",
                    allowed.join(", ")
                )))
            }
            None => return Err(bad("expected a (key ...) list")),
        }
    }
    Ok(())
}

/// The single occurrence of `(key ...)` among the items.
fn field<'a>(items: &'a [Node], name: &str) -> Result<&'a [Node]> {
    let mut found = None;
    for item in items {
        if item.tag() == Some(name) {
            if found.is_some() {
                return Err(bad(format!("duplicate key ({name} ...)")));
            }
            found = Some(&item.as_list().unwrap()[1..]);
        }
    }
    found.ok_or_else(|| bad(format!("missing key ({name} ...)")))
}

fn opt_field<'a>(items: &'a [Node], name: &str) -> Result<Option<&'a [Node]>> {
    match field(items, name) {
        Ok(f) => Ok(Some(f)),
        Err(Error::Parse { msg, .. }) if msg.starts_with("missing") => Ok(None),
        Err(e) => Err(e),
    }
}

/// All occurrences of `(key ...)`, in order.
fn repeated<'a>(items: &'a [Node], name: &str) -> Vec<&'a [Node]> {
    items
        .iter()
        .filter(|item| item.tag() == Some(name))
        .map(|item| &item.as_list().unwrap()[1..])
        .collect()
}

fn atom_of<'a>(node: &'a Node, what: &str) -> Result<&'a str> {
    node.as_atom()
        .ok_or_else(|| bad(format!("expected {what}, found a list")))
}

fn parse_u64(node: &Node, what: &str) -> Result<u64> {
    atom_of(node, what)?
        .parse()
        .map_err(|_| bad(format!("{what} must be a nonnegative integer")))
}

fn parse_u32(node: &Node, what: &str) -> Result<u32> {
    atom_of(node, what)?
        .parse()
        .map_err(|_| bad(format!("{what} must be a nonnegative integer")))
}

fn parse_f64(node: &Node, what: &str) -> Result<f64> {
    atom_of(node, what)?
        .parse()
        .map_err(|_| bad(format!("{what} must be a number")))
}

fn one<'a>(items: &'a [Node], what: &str) -> Result<&'a Node> {
    match items {
        [n] => Ok(n),
        _ => Err(bad(format!("{what} takes exactly one value, got {}", items.len()))),
    }
}

pub fn scalar_from_node(node: &Node) -> Result<Scalar> {
    let items = node
        .as_list()
        .ok_or_else(|| bad("expected a (complex ..) or (root ..) scalar"))?;
    match (node.tag(), &items[1..]) {
        (Some("complex"), [re, im]) => Ok(Scalar::complex(
            parse_f64(re, "re")?,
            parse_f64(im, "im")?,
        )),
        (Some("root"), [p, q]) => {
            Scalar::root(parse_u64(p, "root numerator")?, parse_u64(q, "root denominator")?)
        }
        _ => Err(bad("scalars are (complex RE IM) or (root P Q)")),
    }
}

pub fn angle_from_node(node: &Node) -> Result<Angle> {
    let items = node
        .as_list()
        .ok_or_else(|| bad("expected a (turns ..) or (root ..) angle"))?;
    match (node.tag(), &items[1..]) {
        (Some("turns"), [t]) => Ok(Angle::Turns(parse_f64(t, "turns")?)),
        (Some("root"), [p, q]) => Ok(Angle::Rational(RationalAngle::new(
            parse_u64(p, "root numerator")?,
            parse_u64(q, "root denominator")?,
        )?)),
        _ => Err(bad("angles are (turns T) or (root P Q)")),
    }
}

fn tail_from_node(node: &Node) -> Result<Tail> {
    let items = node.as_list().ok_or_else(|| bad("expected a tail record"))?;
    match (node.tag(), &items[1..]) {
        (Some("identity"), []) => Ok(Tail::Identity),
        (Some("constant"), [s]) => Ok(Tail::Constant(scalar_from_node(s)?)),
        (Some("rotation"), [p, q]) => Ok(Tail::Rotation(RationalAngle::new(
            parse_u64(p, "rotation numerator")?,
            parse_u64(q, "rotation denominator")?,
        )?)),
        (Some("cycle"), entries) if !entries.is_empty() => Ok(Tail::Cycle(
            entries.iter().map(scalar_from_node).collect::<Result<_>>()?,
        )),
        _ => Err(bad(
            "tails are (identity), (constant SCALAR), (rotation P Q), or (cycle SCALAR+)",
        )),
    }
}

fn complex_pairs(nodes: &[Node], what: &str) -> Result<Vec<Complex64>> {
    if nodes.len() % 2 != 0 {
        return Err(bad(format!("{what} must hold re/im pairs")));
    }
    nodes
        .chunks(2)
        .map(|c| Ok(Complex64::new(parse_f64(&c[0], what)?, parse_f64(&c[1], what)?)))
        .collect()
}

pub fn measure_from_node(node: &Node) -> Result<SpectralMeasure> {
    let items = record(node, "measure")?;
    check_keys(items, &["atom", "density", "self_similar"])?;
    let mut atoms = Vec::new();
    for a in repeated(items, "atom") {
        match a {
            [loc, w] => atoms.push(Atom {
                location: angle_from_node(loc)?,
                weight: parse_f64(w, "atom weight")?,
            }),
            _ => return Err(bad("atoms are (atom ANGLE WEIGHT)")),
        }
    }
    let density = match opt_field(items, "density")? {
        None => None,
        Some(d) => {
            check_keys(d, &["breaks", "values"])?;
            let breaks = field(d, "breaks")?
                .iter()
                .map(|b| parse_f64(b, "break"))
                .collect::<Result<Vec<_>>>()?;
            let values = complex_pairs(field(d, "values")?, "density values")?;
            Some(StepFunction::new(breaks, values)?)
        }
    };
    let self_similar = match opt_field(items, "self_similar")? {
        None => None,
        Some(ss) => {
            check_keys(ss, &["ratio", "digits", "weight"])?;
            Some(SelfSimilarPart {
                ratio: parse_f64(one(field(ss, "ratio")?, "ratio")?, "ratio")?,
                digits: field(ss, "digits")?
                    .iter()
                    .map(|d| parse_f64(d, "digit"))
                    .collect::<Result<Vec<_>>>()?,
                weight: parse_f64(one(field(ss, "weight")?, "weight")?, "weight")?,
            })
        }
    };
    let mu = SpectralMeasure { atoms, density, self_similar };
    mu.validate()?;
    Ok(mu)
}

pub fn operator_from_node(node: &Node) -> Result<OperatorRep> {
    let items = record(node, "operator")?;
    let kind_field = field(items, "kind")?;
    let kind = atom_of(one(kind_field, "kind")?, "kind")?;
    match kind {
        "diagonal" => {
            check_keys(items, &["kind", "entry", "tail"])?;
            let mut entries = BTreeMap::new();
            for e in repeated(items, "entry") {
                match e {
                    [slot, s] => {
                        let slot = parse_u64(slot, "entry slot")?;
                        if entries.insert(slot, scalar_from_node(s)?).is_some() {
                            return Err(bad(format!("duplicate entry for slot {slot}")));
                        }
                    }
                    _ => return Err(bad("entries are (entry SLOT SCALAR)")),
                }
            }
            let tail = tail_from_node(one(field(items, "tail")?, "tail")?)?;
            Ok(OperatorRep::Diagonal(DiagonalOp::new(entries, tail)?))
        }
        "shift" => {
            check_keys(items, &["kind", "branches"])?;
            Ok(OperatorRep::RightShift {
                branches: parse_u32(one(field(items, "branches")?, "branches")?, "branches")?,
            })
        }
        "cyclic" => {
            check_keys(items, &["kind", "period", "branches"])?;
            Ok(OperatorRep::CyclicMix {
                period: parse_u64(one(field(items, "period")?, "period")?, "period")?,
                branches: parse_u32(one(field(items, "branches")?, "branches")?, "branches")?,
            })
        }
        "dense" => {
            check_keys(items, &["kind", "dim", "row"])?;
            let dim = parse_u64(one(field(items, "dim")?, "dim")?, "dim")? as usize;
            let rows = repeated(items, "row");
            if rows.len() != dim {
                return Err(bad(format!("dense dim {dim} needs {dim} rows, got {}", rows.len())));
            }
            let mut data = Vec::with_capacity(dim);
            for r in rows {
                let row = complex_pairs(r, "dense row")?;
                if row.len() != dim {
                    return Err(bad(format!(
                        "dense row holds {} entries, expected {dim}",
                        row.len()
                    )));
                }
                data.push(row);
            }
            Ok(OperatorRep::Dense(CMatrix::from_rows(data)?))
        }
        "spectral" => {
            check_keys(items, &["kind", "measure"])?;
            let mu_node = items
                .iter()
                .find(|i| i.tag() == Some("measure"))
                .ok_or_else(|| bad("missing (measure ...) in spectral operator"))?;
            Ok(OperatorRep::SpectralUnitary(measure_from_node(mu_node)?))
        }
        "direct_sum" => {
            check_keys(items, &["kind", "operator"])?;
            let children = items
                .iter()
                .filter(|i| i.tag() == Some("operator"))
                .map(operator_from_node)
                .collect::<Result<Vec<_>>>()?;
            if children.is_empty() {
                return Err(bad("direct_sum needs at least one child operator"));
            }
            Ok(OperatorRep::DirectSum(children))
        }
        other => Err(bad(format!(
            "unknown operator kind {other}; expected diagonal, shift, cyclic, dense, \
             spectral, or direct_sum"
        ))),
    }
}

pub fn vector_from_node(node: &Node) -> Result<Vector> {
    let items = record(node, "vector")?;
    let kind = atom_of(one(field(items, "kind")?, "kind")?, "kind")?;
    match kind {
        "sparse" => {
            check_keys(items, &["kind", "entry"])?;
            let mut v = SparseVector::zero();
            for e in repeated(items, "entry") {
                match e {
                    [b, s, re, im] => {
                        let idx = crate::space::CompositeIndex::new(
                            parse_u32(b, "entry branch")?,
                            parse_u64(s, "entry slot")?,
                        );
                        v.add_at(
                            idx,
                            Complex64::new(parse_f64(re, "re")?, parse_f64(im, "im")?),
                        );
                    }
                    _ => return Err(bad("entries are (entry BRANCH SLOT RE IM)")),
                }
            }
            Ok(Vector::Sparse(v))
        }
        "step" => {
            check_keys(items, &["kind", "branch", "breaks", "values"])?;
            let branch = parse_u32(one(field(items, "branch")?, "branch")?, "branch")?;
            let breaks = field(items, "breaks")?
                .iter()
                .map(|b| parse_f64(b, "break"))
                .collect::<Result<Vec<_>>>()?;
            let values = complex_pairs(field(items, "values")?, "step values")?;
            Ok(Vector::Step { branch, f: StepFunction::new(breaks, values)? })
        }
        other => Err(bad(format!("unknown vector kind {other}; expected sparse or step"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::CompositeIndex;

    fn sample_operators() -> Vec<OperatorRep> {
        let mut entries = BTreeMap::new();
        entries.insert(0u64, Scalar::root(2, 7).unwrap());
        entries.insert(9u64, Scalar::complex(0.25, -0.5));
        vec![
            OperatorRep::identity(),
            OperatorRep::Diagonal(
                DiagonalOp::new(entries, Tail::Rotation(RationalAngle::new(1, 6).unwrap()))
                    .unwrap(),
            ),
            OperatorRep::Diagonal(
                DiagonalOp::new(
                    BTreeMap::new(),
                    Tail::Cycle(vec![
                        Scalar::root(1, 4).unwrap(),
                        Scalar::complex(0.0, -1.0),
                    ]),
                )
                .unwrap(),
            ),
            OperatorRep::RightShift { branches: 3 },
            OperatorRep::CyclicMix { period: 8, branches: 2 },
            OperatorRep::Dense(
                CMatrix::from_rows(vec![
                    vec![Complex64::new(0.0, 0.0), Complex64::new(0.1, -0.2)],
                    vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.3)],
                ])
                .unwrap(),
            ),
            OperatorRep::SpectralUnitary(SpectralMeasure {
                atoms: vec![Atom {
                    location: Angle::Rational(RationalAngle::new(2, 7).unwrap()),
                    weight: 0.25,
                }],
                density: Some(StepFunction::new(
                    vec![0.0, 0.5, 1.0],
                    vec![Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0)],
                ).unwrap()),
                self_similar: Some(SelfSimilarPart {
                    ratio: 1.0 / 3.0,
                    digits: vec![0.0, 2.0 / 3.0],
                    weight: 0.5,
                }),
            }),
            OperatorRep::DirectSum(vec![
                OperatorRep::RightShift { branches: 1 },
                OperatorRep::DirectSum(vec![
                    OperatorRep::identity(),
                    OperatorRep::CyclicMix { period: 3, branches: 1 },
                ]),
            ]),
        ]
    }

    #[test]
    fn operators_round_trip_byte_identically() {
        for op in sample_operators() {
            let text = operator_to_string(&op);
            let back = operator_from_str(&text).unwrap();
            assert_eq!(back, op);
            assert_eq!(operator_to_string(&back), text, "second pass drifted");
        }
    }

    #[test]
    fn vectors_round_trip() {
        let mut x = SparseVector::zero();
        x.set(CompositeIndex::new(0, 3), Complex64::new(0.1, -2.0));
        x.set(CompositeIndex::new(2, 0), Complex64::new(-0.25, 1e-12));
        let sparse = Vector::Sparse(x);
        let step = Vector::Step {
            branch: 1,
            f: StepFunction::new(
                vec![0.0, 0.25, 1.0],
                vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)],
            )
            .unwrap(),
        };
        for v in [sparse, step] {
            let text = vector_to_string(&v);
            let back = vector_from_str(&text).unwrap();
            assert_eq!(back, v);
            assert_eq!(vector_to_string(&back), text);
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad_op = "(operator (kind shift) (branches 1) (color blue))";
        assert!(matches!(operator_from_str(bad_op), Err(Error::Parse { .. })));
        let bad_measure = "(operator (kind spectral) (measure (atom (turns 0.5) 1.0) (mood gloomy)))";
        assert!(matches!(operator_from_str(bad_measure), Err(Error::Parse { .. })));
    }

    #[test]
    fn duplicate_and_missing_keys_are_rejected() {
        let dup = "(operator (kind shift) (branches 1) (branches 2))";
        assert!(matches!(operator_from_str(dup), Err(Error::Parse { .. })));
        let missing = "(operator (kind cyclic) (period 3))";
        assert!(matches!(operator_from_str(missing), Err(Error::Parse { .. })));
        let dup_slot = "(operator (kind diagonal) (entry 0 (root 1 2)) (entry 0 (root 1 3)) (tail (identity)))";
        assert!(matches!(operator_from_str(dup_slot), Err(Error::Parse { .. })));
    }

    #[test]
    fn validation_runs_after_parse() {
        // Parses structurally but the entry breaks the contraction gate.
        let too_big = "(operator (kind diagonal) (entry 0 (complex 1.5 0.0)) (tail (identity)))";
        assert!(matches!(operator_from_str(too_big), Err(Error::Validation(_))));
    }

    #[test]
    fn dense_shape_is_checked() {
        let ragged = "(operator (kind dense) (dim 2) (row 1.0 0.0 0.0 0.0) (row 1.0 0.0))";
        assert!(matches!(operator_from_str(ragged), Err(Error::Parse { .. })));
        let short = "(operator (kind dense) (dim 2) (row 1.0 0.0 0.0 0.0))";
        assert!(matches!(operator_from_str(short), Err(Error::Parse { .. })));
    }

    #[test]
    fn comments_are_usable_in_spec_files() {
        let text = "; a one-branch right shift\n(operator (kind shift) (branches 1)) ; done\n";
        let op = operator_from_str(text).unwrap();
        assert_eq!(op, OperatorRep::RightShift { branches: 1 });
    }
}
