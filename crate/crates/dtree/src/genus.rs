//! Reversal at a central element, decomposition at the root, and the genus
//! formula for rooted trees whose arrows are decorated by 0 or 1.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::invariants::{det_edge, multiplicities, summary, BranchSums};
use crate::rooted::{degree, is_central, RootedTree};
use crate::treecore::{DecoratedTree, Edge, NodeId};

/// `φ(x,y)`: product of the decorations near `x_1, …, x_n` on the edges off the
/// path `(x = x_0, …, x_n = y)`.
pub fn phi(tree: &DecoratedTree, x: &str, y: &str) -> Result<BigInt> {
    if x == y {
        return Err(Error::pre("phi", "the endpoints coincide"));
    }
    let path = tree.path(x, y)?;
    let nodes = path.nodes();
    let mut p = BigInt::one();
    for i in 1..nodes.len() {
        let mut skip = vec![nodes[i - 1].as_str()];
        if i + 1 < nodes.len() {
            skip.push(&nodes[i + 1]);
        }
        p *= tree.prod_near_except(&nodes[i], &skip);
    }
    Ok(p)
}

/// `Y(x,e)`: the vertices and zero arrows whose path from `x` uses `e`.
pub fn y_set(tree: &DecoratedTree, x: &str, e: &Edge) -> Result<BTreeSet<NodeId>> {
    tree.q(e, x)?;
    let w = e.other(x).expect("checked");
    Ok(tree
        .side(w, x)
        .into_iter()
        .filter(|y| tree.is_vertex_or_zero_arrow(y))
        .collect())
}

/// Whether `(x, e)` is an out-pair, that is `x < x'` where `e = {x, x'}`.
pub fn is_out_pair(rooted: &RootedTree, x: &str, e: &Edge) -> Result<bool> {
    let tree = rooted.tree();
    tree.q(e, x)?;
    let w = e.other(x).expect("checked");
    let path = tree.path(rooted.root(), w)?;
    let n = path.nodes();
    Ok(n.len() >= 2 && n[n.len() - 2] == x)
}

fn formula_rhs(tree: &DecoratedTree, x: &str, e: &Edge) -> Result<BigInt> {
    let mut s = BigInt::one();
    for y in y_set(tree, x, e)? {
        s += phi(tree, x, &y)? * BigInt::from(tree.deg(&y) as i64 - 2);
    }
    Ok(s)
}

fn require_01(tree: &DecoratedTree, op: &'static str) -> Result<()> {
    for (a, f) in tree.arrows() {
        if !(f.is_zero() || f.is_one()) {
            return Err(Error::pre(
                op,
                format!("arrow `{a}` is decorated by {f}, not 0 or 1"),
            ));
        }
    }
    Ok(())
}

/// Both sides of `p(x,e) = 1 + Σ_{y ∈ Y(x,e)} φ(x,y)(δ_y - 2)` for an out-pair of a
/// rooted tree whose arrows are decorated by 0 or 1.
pub fn branch_sum_formula_check(
    rooted: &RootedTree,
    x: &str,
    e: &Edge,
) -> Result<(BigInt, BigInt)> {
    const OP: &str = "branch_sum_formula";
    rooted.require_root(OP)?;
    let tree = rooted.tree();
    require_01(tree, OP)?;
    if !is_out_pair(rooted, x, e)? {
        return Err(Error::pre(OP, format!("({x},{e}) is an in-pair")));
    }
    let w = e.other(x).expect("checked");
    let lhs = BranchSums::compute(tree).at(x, w).clone();
    Ok((lhs, formula_rhs(tree, x, e)?))
}

/// Both sides of the branch-sum formula for every out-pair, with no hypothesis on `f`.
pub fn out_pair_table(rooted: &RootedTree) -> Result<Vec<(NodeId, NodeId, BigInt, BigInt)>> {
    let tree = rooted.tree();
    let p = BranchSums::compute(tree);
    let parent = tree.parents_from(rooted.root());
    let mut out = Vec::new();
    for (child, up) in &parent {
        let Some(x) = up else { continue };
        let e = Edge::new(x.as_str(), *child);
        out.push((
            x.clone(),
            child.to_string(),
            p.at(x, child).clone(),
            formula_rhs(tree, x, &e)?,
        ));
    }
    Ok(out)
}

/// Per-vertex data of the reversal recurrence.
struct Local {
    parent: NodeId,
    x: BigInt,
    big_q: BigInt,
    y: BigInt,
}

fn locals(tree: &DecoratedTree, eta: &str) -> BTreeMap<NodeId, Local> {
    let parent = tree.parents_from(eta);
    tree.vertices()
        .filter(|v| v.as_str() != eta)
        .map(|v| {
            let up = parent[v.as_str()].clone().expect("connected");
            let l = Local {
                x: tree.q_near(v, &up).clone(),
                big_q: tree.prod_near_except(v, &[&up]),
                y: tree.q_near(&up, v).clone(),
                parent: up,
            };
            (v.clone(), l)
        })
        .collect()
}

fn exact_div(a: &BigInt, b: &BigInt, what: &str) -> Result<BigInt> {
    let (q, r) = a.div_rem(b);
    if !r.is_zero() || b.is_zero() {
        return Err(Error::Internal(format!("{what}: {b} does not divide {a}")));
    }
    Ok(q)
}

/// `s_v = q(e_v,v) + q*(e_v,v)` for `v`, computed from its ancestors and memoized.
fn s_value(
    v: &str,
    eta: &str,
    loc: &BTreeMap<NodeId, Local>,
    memo: &mut BTreeMap<NodeId, BigInt>,
) -> Result<BigInt> {
    if let Some(s) = memo.get(v) {
        return Ok(s.clone());
    }
    let l = &loc[v];
    let s = if l.parent == eta {
        l.big_q.clone()
    } else {
        let s_up = s_value(&l.parent, eta, loc, memo)?;
        let up = &loc[&l.parent];
        let ratio = exact_div(&up.big_q, &l.y, "reversal")?;
        let scaled = exact_div(&s_up, &up.big_q, "reversal")?;
        &l.big_q * &ratio * &ratio * scaled
    };
    if !s.is_multiple_of(&l.big_q) {
        return Err(Error::Internal(format!(
            "reversal: Q = {} does not divide q + q* = {s} at `{v}`",
            l.big_q
        )));
    }
    memo.insert(v.to_string(), s.clone());
    Ok(s)
}

/// The reversal `T^(η)` at the central element `eta`, visiting vertices in `order`.
///
/// The result does not depend on `order`; this entry point exists so that the
/// independence can be tested.
pub fn reverse_with_order(
    tree: &DecoratedTree,
    eta: &str,
    order: &[NodeId],
) -> Result<DecoratedTree> {
    if !is_central(tree, eta)? {
        return Err(Error::NotCentral(eta.to_string()));
    }
    let loc = locals(tree, eta);
    let mut memo = BTreeMap::new();
    let mut out = tree.clone();
    for v in order.iter().chain(loc.keys()) {
        if !loc.contains_key(v) || memo.contains_key(v) {
            continue;
        }
        s_value(v, eta, &loc, &mut memo)?;
    }
    for (v, l) in &loc {
        out.raw_set_q(v, &l.parent, &memo[v] - &l.x);
    }
    out.checked("reverse")
}

/// The reversal `T^(η)` at the central element `eta`.
pub fn reverse(tree: &DecoratedTree, eta: &str) -> Result<DecoratedTree> {
    reverse_with_order(tree, eta, &[])
}

/// Lists every way in which `rev` fails the defining properties of the
/// reversal of `tree` at `eta` (including the divisibility property).
pub fn check_reversal(tree: &DecoratedTree, eta: &str, rev: &DecoratedTree) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    if tree.vertices().ne(rev.vertices())
        || tree.edges() != rev.edges()
        || tree.arrows().ne(rev.arrows())
    {
        bad.push("(i) nodes, edges or arrow decorations differ".to_string());
        return Ok(bad);
    }
    let parent = tree.parents_from(eta);
    for x in tree.nodes() {
        for (y, q) in tree.nbrs(x) {
            let qs = rev.q_near(x, y);
            let toward_eta = parent[x.as_str()].as_deref() == Some(y.as_str());
            if x == eta || !tree.is_vertex(x) || !toward_eta {
                if q != qs {
                    bad.push(format!(
                        "(ii)/(iii) decoration near `{x}` on {{{x},{y}}} changed"
                    ));
                }
                continue;
            }
            let big_q = tree.prod_near_except(x, &[y]);
            if y == eta && *qs != &big_q - q {
                bad.push(format!(
                    "(iv) q* near `{x}` is {qs}, expected {}",
                    &big_q - q
                ));
            }
            if !(q + qs).is_multiple_of(&big_q) {
                bad.push(format!("(vi) Q = {big_q} does not divide q + q* at `{x}`"));
            }
        }
    }
    for e in tree.edges() {
        let (a, b) = e.endpoints();
        if a == eta || b == eta || !tree.is_vertex(a) || !tree.is_vertex(b) {
            continue;
        }
        let (d, ds) = (det_edge(tree, &e)?, det_edge(rev, &e)?);
        if ds != -d.clone() {
            bad.push(format!("(v) det* of {e} is {ds}, expected {}", -d));
        }
    }
    Ok(bad)
}

/// One piece of the decomposition at the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootPiece {
    /// The neighbour `v_i` of the root.
    pub v: NodeId,
    /// The added zero arrow `α_i`.
    pub alpha: NodeId,
    /// The tree `T_i`.
    pub tree: DecoratedTree,
}

/// Cuts the root edges, attaches a zero arrow `<v0>.a<i>` to each neighbour
/// `v_i` with decoration `q(e_i,v_i)` near `v_i`, and reverses at that arrow.
pub fn root_decompose(rooted: &RootedTree) -> Result<Vec<RootPiece>> {
    const OP: &str = "root_decompose";
    rooted.require_root(OP)?;
    let tree = rooted.tree();
    let v0 = rooted.root();
    if tree.deg(v0) == 0 {
        return Err(Error::pre(OP, "the root has no edge"));
    }
    let mut out = Vec::new();
    for (i, vi) in tree.nbrs(v0).keys().enumerate() {
        let mut c = tree.induced(&tree.side(vi, v0));
        let base = format!("{v0}.a{}", i + 1);
        let alpha = std::iter::once(base.clone())
            .chain((2..).map(|k| format!("{base}~{k}")))
            .find(|id| !tree.contains(id))
            .expect("unbounded");
        c.raw_add_arrow(&alpha, BigInt::zero());
        c.raw_add_edge(vi, &alpha, tree.q_near(vi, v0).clone(), BigInt::one());
        let c = c.checked(OP)?;
        let t = reverse(&c, &alpha)?;
        out.push(RootPiece {
            v: vi.clone(),
            alpha,
            tree: t,
        });
    }
    Ok(out)
}

/// Both sides of `N_x + N_x^(i) = φ(v0,x) deg(T)` for every vertex other than the
/// root and every zero arrow, as `(x, lhs, rhs)`.
pub fn phi_degree_table(rooted: &RootedTree) -> Result<Vec<(NodeId, BigInt, BigInt)>> {
    let tree = rooted.tree();
    let v0 = rooted.root();
    let pieces = root_decompose(rooted)?;
    let n = multiplicities(tree);
    let d = degree(rooted);
    let mut out = Vec::new();
    for piece in &pieces {
        let ni = multiplicities(&piece.tree);
        for x in tree.side(&piece.v, v0) {
            if !tree.is_vertex_or_zero_arrow(&x) {
                continue;
            }
            let lhs = &n[&x] + &ni[&x];
            let rhs = phi(tree, v0, &x)? * &d;
            out.push((x, lhs, rhs));
        }
    }
    Ok(out)
}

/// Both sides of `g(T) = (d-1)(d-2)/2 - Σ δ(T_i)` for a rooted tree whose arrows
/// are decorated by 0 or 1.
pub fn genus_formula_check(rooted: &RootedTree) -> Result<(BigInt, BigInt)> {
    const OP: &str = "genus_formula";
    rooted.require_root(OP)?;
    require_01(rooted.tree(), OP)?;
    let pieces = root_decompose(rooted)?;
    let g = summary(rooted.tree())?.g;
    let d = degree(rooted);
    let mut rhs = (&d - 1) * (&d - 2) / 2;
    for p in &pieces {
        rhs -= summary(&p.tree)?.delta;
    }
    Ok((g, rhs))
}
