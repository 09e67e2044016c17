//! The four reductions that preserve `M` and `F`, and a normalization that
//! applies them until none is possible.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::invariants::{big_q, det_edge};
use crate::treecore::{DecoratedTree, Edge, NodeId};

/// A place where one of the four reductions can be applied.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Site {
    /// Dead end `{v, alpha}` with decoration 1 near the vertex `v`.
    DeadEnd {
        /// The vertex end.
        v: NodeId,
        /// The zero arrow.
        alpha: NodeId,
    },
    /// Pending vertex `t` attached to the vertex `v` with decoration 1 near `v`.
    Pending {
        /// The vertex that stays.
        v: NodeId,
        /// The vertex of valency one that is removed.
        t: NodeId,
    },
    /// Vertex of valency two.
    Smooth {
        /// The vertex that is removed.
        v: NodeId,
    },
    /// Vertex-vertex edge satisfying the contraction condition.
    Contract {
        /// Smaller endpoint.
        v1: NodeId,
        /// Larger endpoint.
        v2: NodeId,
    },
}

fn require_vertex(tree: &DecoratedTree, v: &str, op: &'static str) -> Result<()> {
    if !tree.contains(v) {
        return Err(Error::UnknownNode(v.to_string()));
    }
    if !tree.is_vertex(v) {
        return Err(Error::pre(op, format!("`{v}` is not a vertex")));
    }
    Ok(())
}

/// Deletes the dead end `{v, alpha}`, which must have decoration 1 near `v`.
pub fn delete_dead_end_1(tree: &DecoratedTree, v: &str, alpha: &str) -> Result<DecoratedTree> {
    const OP: &str = "delete_dead_end_1";
    require_vertex(tree, v, OP)?;
    tree.check_edge(&Edge::new(v, alpha))?;
    if !tree.is_zero_arrow(alpha) {
        return Err(Error::pre(
            OP,
            format!("`{alpha}` is not an arrow decorated by 0"),
        ));
    }
    if !tree.q_near(v, alpha).is_one() {
        return Err(Error::pre(
            OP,
            format!("decoration near `{v}` is {}, not 1", tree.q_near(v, alpha)),
        ));
    }
    let mut out = tree.clone();
    out.raw_remove_node(alpha);
    out.checked(OP)
}

/// Deletes the valency-one vertex `t` hanging from the vertex `v` with decoration 1 near `v`.
pub fn delete_pending_vertex_1(tree: &DecoratedTree, v: &str, t: &str) -> Result<DecoratedTree> {
    const OP: &str = "delete_pending_vertex_1";
    require_vertex(tree, v, OP)?;
    require_vertex(tree, t, OP)?;
    tree.check_edge(&Edge::new(v, t))?;
    if tree.deg(t) != 1 {
        return Err(Error::pre(
            OP,
            format!("`{t}` has valency {}, not 1", tree.deg(t)),
        ));
    }
    if !tree.q_near(v, t).is_one() {
        return Err(Error::pre(
            OP,
            format!("decoration near `{v}` is {}, not 1", tree.q_near(v, t)),
        ));
    }
    let mut out = tree.clone();
    out.raw_remove_node(t);
    out.checked(OP)
}

/// Removes the valency-two vertex `v`, joining its neighbours by an edge that
/// keeps their near decorations.
pub fn smooth_valency2(tree: &DecoratedTree, v: &str) -> Result<DecoratedTree> {
    const OP: &str = "smooth_valency2";
    require_vertex(tree, v, OP)?;
    if tree.deg(v) != 2 {
        return Err(Error::pre(
            OP,
            format!("`{v}` has valency {}, not 2", tree.deg(v)),
        ));
    }
    let mut it = tree.nbrs(v).keys();
    let u1 = it.next().expect("two").clone();
    let u2 = it.next().expect("two").clone();
    let q1 = tree.q_near(&u1, v).clone();
    let q2 = tree.q_near(&u2, v).clone();
    let mut out = tree.clone();
    out.raw_remove_node(v);
    out.raw_add_edge(&u1, &u2, q1, q2);
    out.checked(OP)
}

/// Contracts the vertex-vertex edge `{v1, v2}`, which must satisfy
/// `q(e,v1) = Q(e,v2)` and `q(e,v2) = Q(e,v1)`. The merged vertex takes the
/// smaller of the two ids.
pub fn contract_det_zero(tree: &DecoratedTree, v1: &str, v2: &str) -> Result<DecoratedTree> {
    const OP: &str = "contract_det_zero";
    require_vertex(tree, v1, OP)?;
    require_vertex(tree, v2, OP)?;
    let e = Edge::new(v1, v2);
    tree.check_edge(&e)?;
    let det = det_edge(tree, &e)?;
    if !det.is_zero() {
        return Err(Error::NonzeroDeterminant {
            edge: e.to_string(),
            det: det.to_string(),
        });
    }
    let (q1, q2) = (tree.q_near(v1, v2), tree.q_near(v2, v1));
    let (cq1, cq2) = (big_q(tree, &e, v1)?, big_q(tree, &e, v2)?);
    if *q1 != cq2 || *q2 != cq1 {
        return Err(Error::WrongOrientation {
            edge: e.to_string(),
        });
    }
    let (keep, gone) = e.endpoints();
    let moved: Vec<(NodeId, _, _)> = tree
        .nbrs(gone)
        .iter()
        .filter(|(x, _)| x.as_str() != keep)
        .map(|(x, q)| (x.clone(), q.clone(), tree.q_near(x, gone).clone()))
        .collect();
    let mut out = tree.clone();
    out.raw_remove_node(gone);
    for (x, near_v, near_x) in moved {
        out.raw_add_edge(keep, &x, near_v, near_x);
    }
    out.checked(OP)
}

/// Every applicable site, grouped by rule in the order dead end, pending
/// vertex, valency two, contraction, and by id within each rule.
pub fn find_sites(tree: &DecoratedTree) -> Vec<Site> {
    let mut out = Vec::new();
    for v in tree.vertices() {
        for (a, q) in tree.nbrs(v) {
            if tree.is_zero_arrow(a) && q.is_one() {
                out.push(Site::DeadEnd {
                    v: v.clone(),
                    alpha: a.clone(),
                });
            }
        }
    }
    for v in tree.vertices() {
        for (t, q) in tree.nbrs(v) {
            if tree.is_vertex(t) && tree.deg(t) == 1 && q.is_one() {
                out.push(Site::Pending {
                    v: v.clone(),
                    t: t.clone(),
                });
            }
        }
    }
    for v in tree.vertices() {
        if tree.deg(v) == 2 {
            out.push(Site::Smooth { v: v.clone() });
        }
    }
    for e in tree.edges() {
        let (a, b) = e.endpoints();
        if tree.is_vertex(a)
            && tree.is_vertex(b)
            && *tree.q_near(a, b) == tree.prod_near_except(b, &[a])
            && *tree.q_near(b, a) == tree.prod_near_except(a, &[b])
        {
            out.push(Site::Contract {
                v1: a.to_string(),
                v2: b.to_string(),
            });
        }
    }
    out
}

/// Applies the reduction described by `site`.
pub fn apply(tree: &DecoratedTree, site: &Site) -> Result<DecoratedTree> {
    match site {
        Site::DeadEnd { v, alpha } => delete_dead_end_1(tree, v, alpha),
        Site::Pending { v, t } => delete_pending_vertex_1(tree, v, t),
        Site::Smooth { v } => smooth_valency2(tree, v),
        Site::Contract { v1, v2 } => contract_det_zero(tree, v1, v2),
    }
}

/// Applies the first available reduction until none remains.
pub fn normalize(tree: &DecoratedTree) -> DecoratedTree {
    let mut cur = tree.clone();
    while let Some(site) = find_sites(&cur).into_iter().next() {
        cur = apply(&cur, &site).expect("site was found applicable");
    }
    cur
}
