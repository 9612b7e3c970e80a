//! The plain-text tree syntax shared by every serialization in the crate:
//! parenthesized nodes, bare or quoted atoms, `;` line comments.
//!
//! The writer is a pure function of the tree (short lists stay on one
//! line, long ones break one element per line), so serialize → parse →
//! serialize is byte-identical for any tree.

use crate::error::{Error, Result};

/// One node of the tree: an atom (uninterpreted string) or a list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Atom(String),
    List(Vec<Node>),
}

impl Node {
    pub fn atom(s: impl Into<String>) -> Node {
        Node::Atom(s.into())
    }

    pub fn list(items: impl IntoIterator<Item = Node>) -> Node {
        Node::List(items.into_iter().collect())
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Node::Atom(s) => Some(s),
            Node::List(_) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Node]> {
        match self {
            Node::Atom(_) => None,
            Node::List(items) => Some(items),
        }
    }

    /// Head atom of a list node, if it has one.
    pub fn tag(&self) -> Option<&str> {
        self.as_list()?.first()?.as_atom()
    }
}

/// Longest line the writer keeps flat before breaking a list open.
const FLAT_WIDTH: usize = 72;

/// Canonical text for a tree, ending without a trailing newline.
pub fn write_node(node: &Node) -> String {
    let mut out = String::new();
    emit(node, 0, &mut out);
    out
}

/// Canonical text for a sequence of top-level trees, one per paragraph,
/// with a trailing newline (the on-disk file format).
pub fn write_document(nodes: &[Node]) -> String {
    let mut out = String::new();
    for (i, n) in nodes.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        emit(n, 0, &mut out);
        out.push('\n');
    }
    out
}

fn emit(node: &Node, indent: usize, out: &mut String) {
    match node {
        Node::Atom(_) => out.push_str(&atom_text(node)),
        Node::List(items) => {
            if flat_len(node) <= FLAT_WIDTH {
                out.push_str(&flat_text(node));
                return;
            }
            out.push('(');
            let mut rest = &items[..];
            if let Some(head @ Node::Atom(_)) = items.first() {
                out.push_str(&atom_text(head));
                rest = &items[1..];
            }
            for item in rest {
                out.push('\n');
                for _ in 0..indent + 2 {
                    out.push(' ');
                }
                emit(item, indent + 2, out);
            }
            out.push(')');
        }
    }
}

fn flat_text(node: &Node) -> String {
    match node {
        Node::Atom(_) => atom_text(node),
        Node::List(items) => {
            let inner: Vec<String> = items.iter().map(flat_text).collect();
            format!("({})", inner.join(" "))
        }
    }
}

fn flat_len(node: &Node) -> usize {
    match node {
        Node::Atom(_) => atom_text(node).len(),
        Node::List(items) => {
            // parens + separating spaces + items
            2 + items.len().saturating_sub(1)
                + items.iter().map(flat_len).sum::<usize>()
        }
    }
}

fn atom_text(node: &Node) -> String {
    let s = match node {
        Node::Atom(s) => s,
        Node::List(_) => unreachable!("atom_text is only called on atoms"),
    };
    if needs_quoting(s) {
        let mut q = String::with_capacity(s.len() + 2);
        q.push('"');
        for ch in s.chars() {
            match ch {
                '"' => q.push_str("\\\""),
                '\\' => q.push_str("\\\\"),
                '\n' => q.push_str("\\n"),
                '\t' => q.push_str("\\t"),
                c => q.push(c),
            }
        }
        q.push('"');
        q
    } else {
        s.clone()
    }
}

fn needs_quoting(s: &str) -> bool {
    s.is_empty()
        || s.chars().any(|c| {
            c.is_whitespace() || c.is_control() || matches!(c, '(' | ')' | '"' | ';')
        })
}

/// Parses a document containing exactly one top-level node.
pub fn parse_node(text: &str) -> Result<Node> {
    let nodes = parse_document(text)?;
    match nodes.len() {
        1 => Ok(nodes.into_iter().next().unwrap()),
        0 => Err(Error::Parse {
            line: 1,
            col: 1,
            msg: "expected a node, found nothing".into(),
        }),
        n => Err(Error::Parse {
            line: 1,
            col: 1,
            msg: format!("expected one top-level node, found {n}"),
        }),
    }
}

/// Parses every top-level node in the text.
pub fn parse_document(text: &str) -> Result<Vec<Node>> {
    let mut lex = Lexer::new(text);
    let mut out = Vec::new();
    loop {
        match lex.next_token()? {
            Token::Eof => return Ok(out),
            tok => out.push(parse_from(&mut lex, tok)?),
        }
    }
}

fn parse_from(lex: &mut Lexer, tok: Token) -> Result<Node> {
    match tok {
        Token::Atom(s) => Ok(Node::Atom(s)),
        Token::Open => {
            let mut items = Vec::new();
            loop {
                match lex.next_token()? {
                    Token::Close => return Ok(Node::List(items)),
                    Token::Eof => {
                        return Err(lex.error("unclosed parenthesis at end of input"))
                    }
                    t => items.push(parse_from(lex, t)?),
                }
            }
        }
        Token::Close => Err(lex.error("unmatched closing parenthesis")),
        Token::Eof => Err(lex.error("expected a node, found end of input")),
    }
}

enum Token {
    Open,
    Close,
    Atom(String),
    Eof,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, col: self.col, msg: msg.into() }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn next_token(&mut self) -> Result<Token> {
        loop {
            match self.chars.peek() {
                None => return Ok(Token::Eof),
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some(';') => {
                    while let Some(&c) = self.chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                Some('(') => {
                    self.bump();
                    return Ok(Token::Open);
                }
                Some(')') => {
                    self.bump();
                    return Ok(Token::Close);
                }
                Some('"') => return self.quoted_atom(),
                Some(_) => return self.bare_atom(),
            }
        }
    }

    fn bare_atom(&mut self) -> Result<Token> {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';') {
                break;
            }
            s.push(c);
            self.bump();
        }
        Ok(Token::Atom(s))
    }

    fn quoted_atom(&mut self) -> Result<Token> {
        let (start_line, start_col) = (self.line, self.col);
        self.bump(); // opening quote
        let mut s = String::new();
        loop {
            match self.bump() {
                None => {
                    return Err(Error::Parse {
                        line: start_line,
                        col: start_col,
                        msg: "unterminated string".into(),
                    })
                }
                Some('"') => return Ok(Token::Atom(s)),
                Some('\\') => match self.bump() {
                    Some('"') => s.push('"'),
                    Some('\\') => s.push('\\'),
                    Some('n') => s.push('\n'),
                    Some('t') => s.push('\t'),
                    Some(c) => {
                        return Err(self.error(format!("unknown escape \\{c}")));
                    }
                    None => {
                        return Err(self.error("dangling escape at end of input"));
                    }
                },
                Some(c) => s.push(c),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_lists_and_atoms() {
        let n = parse_node("(a (b 1 2) c)").unwrap();
        assert_eq!(
            n,
            Node::list([
                Node::atom("a"),
                Node::list([Node::atom("b"), Node::atom("1"), Node::atom("2")]),
                Node::atom("c"),
            ])
        );
    }

    #[test]
    fn comments_and_whitespace_are_skipped() {
        let n = parse_node("; header\n( x ; trailing\n  y )\n; footer\n").unwrap();
        assert_eq!(n, Node::list([Node::atom("x"), Node::atom("y")]));
    }

    #[test]
    fn quoted_atoms_round_trip_escapes() {
        let original = Node::list([
            Node::atom("note"),
            Node::atom("line one\nline \"two\" \\ tab\t;"),
            Node::atom(""),
        ]);
        let text = write_node(&original);
        assert_eq!(parse_node(&text).unwrap(), original);
    }

    #[test]
    fn write_parse_write_is_byte_identical() {
        let deep = Node::list([
            Node::atom("operator"),
            Node::list([Node::atom("kind"), Node::atom("direct_sum")]),
            Node::list((0..12).map(|i| {
                Node::list([
                    Node::atom("entry"),
                    Node::atom(format!("{i}")),
                    Node::atom(format!("{:?}", 0.1 * i as f64)),
                ])
            })),
        ]);
        let once = write_document(&[deep]);
        let reparsed = parse_document(&once).unwrap();
        assert_eq!(write_document(&reparsed), once);
    }

    #[test]
    fn long_lists_break_one_element_per_line() {
        let wide = Node::list([
            Node::atom("record"),
            Node::list([Node::atom("alpha"), Node::atom("0.123456789012345")]),
            Node::list([Node::atom("beta"), Node::atom("0.987654321098765")]),
            Node::list([Node::atom("gamma"), Node::atom("0.555555555555555")]),
        ]);
        let text = write_node(&wide);
        assert!(text.contains("(record\n  (alpha"), "got:\n{text}");
        assert!(text.ends_with("))"), "closing parens attach to the last line");
    }

    #[test]
    fn parse_errors_carry_line_and_column() {
        let err = parse_node("(a\n   b))").unwrap_err();
        match err {
            Error::Parse { line, col, .. } => {
                assert_eq!(line, 2);
                assert!(col >= 5, "column {col} should point at the extra paren");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
        assert!(matches!(parse_node("(a b"), Err(Error::Parse { .. })));
        assert!(matches!(parse_node("\"open"), Err(Error::Parse { .. })));
        assert!(matches!(parse_node(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_node("a b"), Err(Error::Parse { .. })));
    }

    #[test]
    fn float_atoms_survive_the_round_trip_exactly() {
        for x in [0.1, -0.0, 1.0, 1e-12, 2.0f64.powi(-53), std::f64::consts::PI] {
            let text = write_node(&Node::atom(format!("{x:?}")));
            let back: f64 = parse_node(&text)
                .unwrap()
                .as_atom()
                .unwrap()
                .parse()
                .unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x:?} drifted");
        }
    }
}
