//! A deliberately naive evaluator of the basic invariants, written straight
//! from the definitions and sharing no code with [`crate::invariants`].
//!
//! Every quantity is recomputed from explicit paths, so it is only suitable
//! for small trees.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::treecore::{DecoratedTree, Edge, NodeId};

fn near(tree: &DecoratedTree, x: &str, y: &str) -> BigInt {
    tree.neighbors(x).expect("node")[y].clone()
}

/// `Q(e,x)`: the product of the decorations near `x` on the edges at `x` other than `e`.
pub fn big_q(tree: &DecoratedTree, x: &str, other: &str) -> BigInt {
    let mut p = BigInt::one();
    for (y, q) in tree.neighbors(x).expect("node") {
        if y != other {
            p *= q;
        }
    }
    p
}

/// The product, over the edges not on the path from `v` to `alpha` but touching
/// one of its nodes, of the decoration near that node. With `hat`, edges
/// touching `v` are left out.
fn path_weight(tree: &DecoratedTree, v: &str, alpha: &str, hat: bool) -> BigInt {
    let path = tree.path(v, alpha).expect("connected");
    let on_path: BTreeSet<Edge> = path.edges().into_iter().collect();
    let nodes: BTreeSet<&str> = path.nodes().iter().map(String::as_str).collect();
    let mut p = BigInt::one();
    for e in tree.edges() {
        if on_path.contains(&e) {
            continue;
        }
        let (a, b) = e.endpoints();
        for u in [a, b] {
            if nodes.contains(u) && !(hat && u == v) {
                p *= near(tree, u, e.other(u).expect("endpoint"));
            }
        }
    }
    p * tree.f(alpha).expect("arrow")
}

/// `x(v,α)`.
pub fn x_value(tree: &DecoratedTree, v: &str, alpha: &str) -> BigInt {
    path_weight(tree, v, alpha, false)
}

/// `x̂(v,α)`.
pub fn x_hat(tree: &DecoratedTree, v: &str, alpha: &str) -> BigInt {
    path_weight(tree, v, alpha, true)
}

/// `N_v` for a vertex or zero arrow.
pub fn multiplicity_node(tree: &DecoratedTree, v: &str) -> BigInt {
    tree.nonzero_arrows()
        .filter(|a| a.as_str() != v)
        .map(|a| x_value(tree, v, a))
        .sum()
}

/// `M(T)`.
pub fn multiplicity(tree: &DecoratedTree) -> BigInt {
    let nodes: Vec<NodeId> = tree.vertices_and_zero_arrows().cloned().collect();
    -nodes
        .iter()
        .map(|v| {
            let deg = tree.neighbors(v).expect("node").len() as i64;
            multiplicity_node(tree, v) * BigInt::from(deg - 2)
        })
        .sum::<BigInt>()
}

/// `p(u,e)` for the edge `e = {u,w}`.
pub fn branch_sum(tree: &DecoratedTree, u: &str, w: &str) -> BigInt {
    let e = Edge::new(u, w);
    tree.nonzero_arrows()
        .filter(|a| a.as_str() != u)
        .filter(|a| tree.path(u, a).expect("connected").contains_edge(&e))
        .map(|a| x_hat(tree, u, a))
        .sum()
}

/// `F(α)`.
pub fn f_arrow(tree: &DecoratedTree, alpha: &str) -> BigInt {
    let w = tree
        .neighbors(alpha)
        .expect("node")
        .keys()
        .next()
        .expect("arrow has a neighbour")
        .clone();
    tree.f(alpha)
        .expect("arrow")
        .gcd(&branch_sum(tree, alpha, &w))
}

/// `F(T)`.
pub fn f_total(tree: &DecoratedTree) -> BigInt {
    let arrows: Vec<NodeId> = tree.nonzero_arrows().cloned().collect();
    arrows.iter().map(|a| f_arrow(tree, a)).sum()
}

/// `det(e)` for the edge `{x,y}`.
pub fn det_edge(tree: &DecoratedTree, x: &str, y: &str) -> BigInt {
    near(tree, x, y) * near(tree, y, x) - big_q(tree, x, y) * big_q(tree, y, x)
}
