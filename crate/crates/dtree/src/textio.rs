//! The line-oriented `.dtree` text format and DOT export.
//!
//! ```text
//! # comment
//! vertex u
//! arrow a1 f=1
//! edge u a1 qA=2        # decoration 2 near u, 1 near a1
//! bundle u n=3          # three arrows decorated by 1, all decorations 1
//! root u                # optional, at most once
//! ```
//!
//! Omitted decorations default to 1.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::invariants::multiplicities;
use crate::rooted::RootedTree;
use crate::treecore::{is_valid_id, DecoratedTree, NodeId, TreeBuilder};

/// A parsed document: a tree, with or without a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    /// No `root` line.
    Plain(DecoratedTree),
    /// A `root` line naming a pseudo-root.
    Rooted(RootedTree),
}

impl Parsed {
    /// The tree, forgetting the root.
    pub fn tree(&self) -> &DecoratedTree {
        match self {
            Parsed::Plain(t) => t,
            Parsed::Rooted(r) => r.tree(),
        }
    }

    /// The rooted tree, if a root was declared.
    pub fn rooted(&self) -> Option<&RootedTree> {
        match self {
            Parsed::Plain(_) => None,
            Parsed::Rooted(r) => Some(r),
        }
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn id_arg(line: usize, tok: Option<&str>, what: &str) -> Result<NodeId> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    if !is_valid_id(tok) || tok.contains('=') {
        return Err(perr(line, format!("invalid id `{tok}`")));
    }
    Ok(tok.to_string())
}

fn int_arg(line: usize, tok: &str, key: &str) -> Result<BigInt> {
    let val = tok
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| perr(line, format!("expected `{key}=<int>`, found `{tok}`")))?;
    val.parse::<BigInt>()
        .map_err(|_| perr(line, format!("`{val}` is not an integer")))
}

/// Parses a `.dtree` document and validates the result.
pub fn parse(text: &str) -> Result<Parsed> {
    let mut b = TreeBuilder::new();
    let mut declared: BTreeSet<NodeId> = BTreeSet::new();
    let mut bundles: Vec<(usize, NodeId, usize)> = Vec::new();
    let mut root: Option<(usize, NodeId)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let kw = toks.next().expect("nonempty");
        let mut declare = |id: &NodeId| -> Result<()> {
            if !declared.insert(id.clone()) {
                return Err(perr(line, format!("duplicate id `{id}`")));
            }
            Ok(())
        };
        match kw {
            "vertex" => {
                let id = id_arg(line, toks.next(), "vertex id")?;
                declare(&id)?;
                b.vertex(id);
            }
            "arrow" => {
                let id = id_arg(line, toks.next(), "arrow id")?;
                let f = int_arg(
                    line,
                    toks.next().ok_or_else(|| perr(line, "missing `f=<int>`"))?,
                    "f",
                )?;
                declare(&id)?;
                b.arrow(id, f);
            }
            "edge" => {
                let a = id_arg(line, toks.next(), "first endpoint")?;
                let c = id_arg(line, toks.next(), "second endpoint")?;
                let (mut qa, mut qb) = (None, None);
                for tok in toks.by_ref() {
                    if tok.starts_with("qA=") {
                        if qa.is_some() {
                            return Err(perr(line, "qA given twice"));
                        }
                        qa = Some(int_arg(line, tok, "qA")?);
                    } else if tok.starts_with("qB=") {
                        if qb.is_some() {
                            return Err(perr(line, "qB given twice"));
                        }
                        qb = Some(int_arg(line, tok, "qB")?);
                    } else {
                        return Err(perr(line, format!("unexpected `{tok}`")));
                    }
                }
                b.edge(
                    a,
                    c,
                    qa.unwrap_or_else(BigInt::one),
                    qb.unwrap_or_else(BigInt::one),
                );
            }
            "bundle" => {
                let v = id_arg(line, toks.next(), "vertex id")?;
                let n = int_arg(
                    line,
                    toks.next().ok_or_else(|| perr(line, "missing `n=<int>`"))?,
                    "n",
                )?;
                let n: usize = (&n)
                    .try_into()
                    .map_err(|_| perr(line, format!("bad bundle size {n}")))?;
                bundles.push((line, v, n));
            }
            "root" => {
                let id = id_arg(line, toks.next(), "root id")?;
                if let Some((first, _)) = &root {
                    return Err(perr(line, format!("second root (first on line {first})")));
                }
                root = Some((line, id));
            }
            other => return Err(perr(line, format!("unknown keyword `{other}`"))),
        }
        if let Some(tok) = toks.next() {
            return Err(perr(line, format!("unexpected `{tok}`")));
        }
    }
    let mut k = 0usize;
    for (line, v, n) in bundles {
        if !declared.contains(&v) {
            return Err(perr(line, format!("bundle at undeclared node `{v}`")));
        }
        for _ in 0..n {
            let id = loop {
                k += 1;
                let c = format!("{v}.n{k}");
                if !declared.contains(&c) {
                    break c;
                }
            };
            declared.insert(id.clone());
            b.arrow(id.clone(), 1).edge(v.clone(), id, 1, 1);
        }
    }
    let tree = b.build()?;
    match root {
        None => Ok(Parsed::Plain(tree)),
        Some((line, r)) => {
            if !tree.contains(&r) {
                return Err(perr(line, format!("root `{r}` is not declared")));
            }
            Ok(Parsed::Rooted(RootedTree::new(tree, &r)?))
        }
    }
}

/// Canonical text: vertices, then arrows, then edges, each sorted by id, with
/// decorations equal to 1 omitted.
pub fn serialize(tree: &DecoratedTree) -> String {
    let mut s = String::new();
    for v in tree.vertices() {
        writeln!(s, "vertex {v}").expect("string");
    }
    for (a, f) in tree.arrows() {
        writeln!(s, "arrow {a} f={f}").expect("string");
    }
    for e in tree.edges() {
        let (a, b) = e.endpoints();
        write!(s, "edge {a} {b}").expect("string");
        let (qa, qb) = (tree.q_near(a, b), tree.q_near(b, a));
        if !qa.is_one() {
            write!(s, " qA={qa}").expect("string");
        }
        if !qb.is_one() {
            write!(s, " qB={qb}").expect("string");
        }
        s.push('\n');
    }
    s
}

/// Like [`serialize`] with a final `root` line.
pub fn serialize_rooted(rooted: &RootedTree) -> String {
    let mut s = serialize(rooted.tree());
    writeln!(s, "root {}", rooted.root()).expect("string");
    s
}

/// Serializes whichever variant was parsed.
pub fn serialize_parsed(p: &Parsed) -> String {
    match p {
        Parsed::Plain(t) => serialize(t),
        Parsed::Rooted(r) => serialize_rooted(r),
    }
}

/// Options for [`to_dot`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DotOptions {
    /// Fill the vertices with `N_v = 0`.
    pub fill_zero_multiplicity: bool,
    /// Print node ids next to the nodes.
    pub show_ids: bool,
}

impl Default for DotOptions {
    fn default() -> Self {
        DotOptions {
            fill_zero_multiplicity: true,
            show_ids: true,
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT rendering: vertices are circles, arrows are arrowheads pointing at a
/// label `(f)`, and every edge carries its decoration near each endpoint.
pub fn to_dot(tree: &DecoratedTree, opts: DotOptions) -> String {
    let n = multiplicities(tree);
    let mut s = String::from("digraph dtree {\n  node [shape=circle, label=\"\", width=0.15];\n");
    for v in tree.vertices() {
        let mut attrs = Vec::new();
        if opts.show_ids {
            attrs.push(format!("xlabel={}", quote(v)));
        }
        if opts.fill_zero_multiplicity && n[v].is_zero() {
            attrs.push("style=filled, fillcolor=black".to_string());
        }
        writeln!(s, "  {} [{}];", quote(v), attrs.join(", ")).expect("string");
    }
    for (a, f) in tree.arrows() {
        let label = if opts.show_ids {
            format!("{a} ({f})")
        } else {
            format!("({f})")
        };
        writeln!(
            s,
            "  {} [shape=plaintext, label={}];",
            quote(a),
            quote(&label)
        )
        .expect("string");
    }
    for e in tree.edges() {
        let (a, b) = e.endpoints();
        let (tail, head) = if tree.is_arrow(a) && !tree.is_arrow(b) {
            (b, a)
        } else {
            (a, b)
        };
        let dir = if tree.is_arrow(head) {
            "forward"
        } else {
            "none"
        };
        let (qt, qh) = (tree.q_near(tail, head), tree.q_near(head, tail));
        writeln!(
            s,
            "  {} -> {} [dir={dir}, taillabel={}, headlabel={}];",
            quote(tail),
            quote(head),
            quote(&qt.to_string()),
            quote(&qh.to_string())
        )
        .expect("string");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const PICTURE1: &str = "vertex u\nvertex v\narrow a1 f=1\narrow a2 f=0\nedge u v qA=-2 qB=3\nedge a1 v\nedge a2 v qB=2\n";

    #[test]
    fn picture1_round_trip() {
        let p = parse(PICTURE1).unwrap();
        let text = serialize_parsed(&p);
        assert_eq!(parse(&text).unwrap(), p);
        assert_eq!(serialize(&parse(&text).unwrap().tree().clone()), text);
    }

    #[test]
    fn empty_document_is_empty_tree() {
        let p = parse("# nothing\n").unwrap();
        assert!(p.tree().is_empty());
        assert_eq!(serialize(p.tree()), "");
    }

    #[test]
    fn gcd_violation_is_reported() {
        let text = "vertex a\narrow b f=1\narrow c f=1\nedge a b qA=2\nedge a c qA=4\n";
        assert!(matches!(parse(text), Err(Error::Invalid(_))));
    }

    #[test]
    fn non_pseudo_root_is_classified() {
        let text = format!("{PICTURE1}root v\n");
        assert_eq!(parse(&text).unwrap_err(), Error::NotPseudoRoot("v".into()));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse("vertex u\nedge u\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse("vertex u\nroot u\nroot u\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse("vertex u\nvertex u\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn bundle_expands() {
        let p = parse("vertex r\nbundle r n=3\nroot r\n").unwrap();
        assert_eq!(p.tree().node_count(), 4);
        assert!(p.rooted().unwrap().is_root());
    }

    #[test]
    fn rooted_output_ends_with_root() {
        let p = parse("vertex r\narrow a f=1\nedge r a\nroot r\n").unwrap();
        assert!(serialize_parsed(&p).ends_with("root r\n"));
    }

    #[test]
    fn dot_fills_nothing_on_picture1() {
        let p = parse(PICTURE1).unwrap();
        let dot = to_dot(p.tree(), DotOptions::default());
        assert!(!dot.contains("filled"));
        assert_eq!(dot, to_dot(p.tree(), DotOptions::default()));
    }
}
