//! Creating an edge of determinant zero at a vertex, good pairs, splitting and
//! EN-splitting at an edge or at a vertex.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::invariants::{multiplicities, BranchSums};
use crate::treecore::{gcd, DecoratedTree, Edge, NodeId};

/// A 2-prepartition of the edges at a vertex. Edges are named by their far endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoPrepartition {
    /// Neighbours whose edges go to the first new vertex.
    pub first: BTreeSet<NodeId>,
    /// Neighbours whose edges go to the second new vertex.
    pub second: BTreeSet<NodeId>,
}

impl TwoPrepartition {
    /// Builds the prepartition of the edges at `v` whose first part is given by `first`.
    pub fn with_first<I, S>(tree: &DecoratedTree, v: &str, first: I) -> Result<TwoPrepartition>
    where
        I: IntoIterator<Item = S>,
        S: Into<NodeId>,
    {
        let nb = tree.neighbors(v)?;
        let first: BTreeSet<NodeId> = first.into_iter().map(Into::into).collect();
        for x in &first {
            if !nb.contains_key(x) {
                return Err(Error::UnknownEdge(v.to_string(), x.clone()));
            }
        }
        let second = nb.keys().filter(|x| !first.contains(*x)).cloned().collect();
        Ok(TwoPrepartition { first, second })
    }

    /// Checks that the two parts are disjoint and cover the edges at `v`.
    pub fn check(&self, tree: &DecoratedTree, v: &str) -> Result<()> {
        let nb: BTreeSet<NodeId> = tree.neighbors(v)?.keys().cloned().collect();
        if !self.first.is_disjoint(&self.second) {
            return Err(Error::pre("prepartition", "the two parts overlap"));
        }
        let union: BTreeSet<NodeId> = self.first.union(&self.second).cloned().collect();
        if union != nb {
            return Err(Error::pre(
                "prepartition",
                format!("the parts do not cover exactly the edges at `{v}`"),
            ));
        }
        Ok(())
    }
}

/// Output of [`edz`]: the new tree and the two vertices replacing `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdzOutcome {
    /// The tree with `v` replaced by the edge `v1 v2`.
    pub tree: DecoratedTree,
    /// Vertex carrying the edges of the first part.
    pub v1: NodeId,
    /// Vertex carrying the edges of the second part.
    pub v2: NodeId,
}

impl EdzOutcome {
    /// The new edge `{v1, v2}`.
    pub fn edge(&self) -> Edge {
        Edge::new(self.v1.as_str(), self.v2.as_str())
    }
}

/// Replaces the vertex `v` by an edge `{v1, v2}` of determinant zero, with
/// `q(e,v1) = a2` and `q(e,v2) = a1` where `a_i` is the product of the
/// decorations near `v` on the edges of part `i`. New ids are `<v>.1` and `<v>.2`.
pub fn edz(tree: &DecoratedTree, v: &str, parts: &TwoPrepartition) -> Result<EdzOutcome> {
    const OP: &str = "edz";
    if !tree.contains(v) {
        return Err(Error::UnknownNode(v.to_string()));
    }
    if !tree.is_vertex(v) {
        return Err(Error::pre(OP, format!("`{v}` is not a vertex")));
    }
    parts.check(tree, v)?;
    let prod = |part: &BTreeSet<NodeId>| -> BigInt {
        part.iter().map(|x| tree.q_near(v, x).clone()).product()
    };
    let (a1, a2) = (prod(&parts.first), prod(&parts.second));
    let v1 = tree.fresh_id(&format!("{v}.1"));
    let v2 = tree.fresh_id(&format!("{v}.2"));
    let mut out = tree.clone();
    out.raw_remove_node(v);
    out.raw_add_vertex(&v1);
    out.raw_add_vertex(&v2);
    out.raw_add_edge(&v1, &v2, a2, a1);
    for (part, vi) in [(&parts.first, &v1), (&parts.second, &v2)] {
        for x in part {
            out.raw_add_edge(vi, x, tree.q_near(v, x).clone(), tree.q_near(x, v).clone());
        }
    }
    Ok(EdzOutcome {
        tree: out.checked(OP)?,
        v1,
        v2,
    })
}

/// Which clauses of the good-pair definition hold, with the reasons for failures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodPairReport {
    /// True iff every clause holds.
    pub good: bool,
    /// The zero arrow singled out by clause (ii), when there is exactly one.
    pub alpha0: Option<NodeId>,
    /// One message per failed clause.
    pub failures: Vec<String>,
}

/// Tests whether `(z, v)` is a good pair. When it is, `N_z = N_{α0} = 0` is checked.
pub fn is_good_pair(tree: &DecoratedTree, z: &str, v: &str) -> Result<GoodPairReport> {
    tree.check_edge(&Edge::new(z, v))?;
    let mut failures = Vec::new();
    if !tree.is_vertex(z) {
        failures.push(format!("(i) `{z}` is not a vertex"));
    }
    let zeros: Vec<&NodeId> = tree
        .nbrs(z)
        .keys()
        .filter(|x| x.as_str() != v && tree.is_zero_arrow(x))
        .collect();
    let alpha0 = if zeros.len() == 1 {
        Some(zeros[0].clone())
    } else {
        failures.push(format!(
            "(ii) {} zero arrows other than `{v}` are adjacent to `{z}`",
            zeros.len()
        ));
        None
    };
    for (x, q) in tree.nbrs(z) {
        if x == v || Some(x) == alpha0.as_ref() {
            continue;
        }
        let ok = tree.is_arrow(x) && tree.f(x).map(|f| f.is_one()).unwrap_or(false) && q.is_one();
        if !ok {
            failures.push(format!(
                "(iii) neighbour `{x}` is not an arrow decorated by 1 with decoration 1 near `{z}`"
            ));
        }
    }
    let p = BranchSums::compute(tree);
    let d = BigInt::from(tree.deg(z) as i64 - 2);
    let lhs = tree.q_near(z, v) * &d + p.at(z, v);
    if !lhs.is_zero() {
        failures.push(format!("(iv) q(e,z)(δ_z - 2) + p(z,e) = {lhs}"));
    }
    let good = failures.is_empty();
    if good {
        let n = multiplicities(tree);
        let a0 = alpha0.as_ref().expect("clause (ii) holds");
        if !n[z].is_zero() || !n[a0].is_zero() {
            return Err(Error::Internal(format!(
                "good pair ({z},{v}) with N_z = {} and N_alpha0 = {}",
                n[z], n[a0]
            )));
        }
    }
    Ok(GoodPairReport {
        good,
        alpha0,
        failures,
    })
}

/// Where a splitting was performed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitSite {
    /// At an edge.
    Edge(Edge),
    /// At a vertex, with a 2-prepartition of its edges.
    Vertex(NodeId, TwoPrepartition),
}

/// The two trees produced by a splitting or an EN-splitting, with bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitOutcome {
    /// The tree containing `v1`.
    pub t1: DecoratedTree,
    /// The tree containing `v2`.
    pub t2: DecoratedTree,
    /// The degree `d`.
    pub degree: BigInt,
    /// The type, for EN-splittings only.
    pub kind: Option<i8>,
    /// Where the splitting took place.
    pub site: SplitSite,
    /// Endpoint of the split edge kept in `t1` (a new vertex for vertex splits).
    pub v1: NodeId,
    /// Endpoint of the split edge kept in `t2`.
    pub v2: NodeId,
    /// The node attached to `v1` in `t1`: the vertex `z1` or the arrow `α1`.
    pub w1: NodeId,
    /// The node attached to `v2` in `t2`.
    pub w2: NodeId,
}

/// The degree `gcd(p(v1,e), p(v2,e))` of the splitting at `e`, without building it.
pub fn split_degree(tree: &DecoratedTree, e: &Edge) -> Result<BigInt> {
    tree.check_edge(e)?;
    let (a, b) = e.endpoints();
    let p = BranchSums::compute(tree);
    Ok(gcd(p.at(a, b), p.at(b, a)))
}

struct Halves {
    c1: DecoratedTree,
    c2: DecoratedTree,
    p1: BigInt,
    p2: BigInt,
}

fn halves(tree: &DecoratedTree, v1: &str, v2: &str) -> Halves {
    let p = BranchSums::compute(tree);
    Halves {
        c1: tree.induced(&tree.side(v1, v2)),
        c2: tree.induced(&tree.side(v2, v1)),
        p1: p.at(v1, v2).clone(),
        p2: p.at(v2, v1).clone(),
    }
}

fn fresh_in(tree: &DecoratedTree, extra: &DecoratedTree, base: &str) -> NodeId {
    std::iter::once(base.to_string())
        .chain((2..).map(|k| format!("{base}~{k}")))
        .find(|c| !tree.contains(c) && !extra.contains(c))
        .expect("unbounded")
}

/// Splits at the edge `e = {v1, v2}` where `v1` is the smaller id.
///
/// New ids: `<v_i>.z<i>` for `z_i` and `<v_i>.a<i>.<j>` for the arrows at `z_i`.
pub fn split_at_edge(tree: &DecoratedTree, e: &Edge) -> Result<SplitOutcome> {
    tree.check_edge(e)?;
    let (v1, v2) = e.endpoints();
    let mut out = split_edge_inner(tree, v1, v2)?;
    out.site = SplitSite::Edge(e.clone());
    Ok(out)
}

fn split_edge_inner(tree: &DecoratedTree, v1: &str, v2: &str) -> Result<SplitOutcome> {
    const OP: &str = "split";
    let h = halves(tree, v1, v2);
    let d = gcd(&h.p1, &h.p2);
    let (x1, a1, x2, a2) = if d.is_zero() {
        (BigInt::zero(), BigInt::one(), BigInt::zero(), BigInt::one())
    } else {
        let a1 = &h.p1 / &d;
        let a2 = &h.p2 / &d;
        (-a2.clone(), a1, -(&h.p1 / &d), a2)
    };
    let count: usize = (&d)
        .try_into()
        .map_err(|_| Error::pre(OP, format!("degree {d} is too large to materialize")))?;
    let mut built = Vec::new();
    for (i, vi, mut c, x, a) in [(1, v1, h.c1, x1, a1), (2, v2, h.c2, x2, a2)] {
        let z = fresh_in(tree, &c, &format!("{vi}.z{i}"));
        c.raw_add_vertex(&z);
        let other = if i == 1 { v2 } else { v1 };
        c.raw_add_edge(vi, &z, tree.q_near(vi, other).clone(), x);
        for j in 0..=count {
            let id = fresh_in(tree, &c, &format!("{vi}.a{i}.{j}"));
            if j == 0 {
                c.raw_add_arrow(&id, BigInt::zero());
                c.raw_add_edge(&z, &id, a.clone(), BigInt::one());
            } else {
                c.raw_add_arrow(&id, BigInt::one());
                c.raw_add_edge(&z, &id, BigInt::one(), BigInt::one());
            }
        }
        built.push((c.checked(OP)?, z));
    }
    let (t2, w2) = built.pop().expect("two");
    let (t1, w1) = built.pop().expect("two");
    Ok(SplitOutcome {
        t1,
        t2,
        degree: d,
        kind: None,
        site: SplitSite::Edge(Edge::new(v1, v2)),
        v1: v1.to_string(),
        v2: v2.to_string(),
        w1,
        w2,
    })
}

/// Splits at the vertex `v` with the given prepartition: first [`edz`], then
/// the split at the new edge, oriented so that `t1` holds the first part.
pub fn split_at_vertex(
    tree: &DecoratedTree,
    v: &str,
    parts: &TwoPrepartition,
) -> Result<SplitOutcome> {
    let z = edz(tree, v, parts)?;
    let mut out = split_edge_inner(&z.tree, &z.v1, &z.v2)?;
    out.site = SplitSite::Vertex(v.to_string(), parts.clone());
    Ok(out)
}

/// The type `t` of an EN-splitting with branch sums `p1`, `p2`.
pub fn en_type(p1: &BigInt, p2: &BigInt) -> i8 {
    let zeros = [p1, p2].iter().filter(|p| p.is_zero()).count();
    if zeros % 2 == 0 {
        0
    } else if (p1 + p2).is_negative() {
        -1
    } else {
        1
    }
}

/// EN-splits at the edge `e = {v1, v2}` where `v1` is the smaller id.
///
/// The new arrow at `v_i` is `<v_i>.p<i>`, decorated by `p(v_i, e)`.
pub fn ensplit_at_edge(tree: &DecoratedTree, e: &Edge) -> Result<SplitOutcome> {
    tree.check_edge(e)?;
    let (v1, v2) = e.endpoints();
    let mut out = ensplit_edge_inner(tree, v1, v2)?;
    out.site = SplitSite::Edge(e.clone());
    Ok(out)
}

fn ensplit_edge_inner(tree: &DecoratedTree, v1: &str, v2: &str) -> Result<SplitOutcome> {
    const OP: &str = "ensplit";
    let h = halves(tree, v1, v2);
    let d = gcd(&h.p1, &h.p2);
    let t = en_type(&h.p1, &h.p2);
    let mut built = Vec::new();
    for (i, vi, mut c, p) in [(1, v1, h.c1, h.p1.clone()), (2, v2, h.c2, h.p2.clone())] {
        let alpha = fresh_in(tree, &c, &format!("{vi}.p{i}"));
        let other = if i == 1 { v2 } else { v1 };
        c.raw_add_arrow(&alpha, p);
        c.raw_add_edge(vi, &alpha, tree.q_near(vi, other).clone(), BigInt::one());
        built.push((c.checked(OP)?, alpha));
    }
    let (t2, w2) = built.pop().expect("two");
    let (t1, w1) = built.pop().expect("two");
    Ok(SplitOutcome {
        t1,
        t2,
        degree: d,
        kind: Some(t),
        site: SplitSite::Edge(Edge::new(v1, v2)),
        v1: v1.to_string(),
        v2: v2.to_string(),
        w1,
        w2,
    })
}

/// EN-splits at the vertex `v` with the given prepartition, through [`edz`].
pub fn ensplit_at_vertex(
    tree: &DecoratedTree,
    v: &str,
    parts: &TwoPrepartition,
) -> Result<SplitOutcome> {
    let z = edz(tree, v, parts)?;
    let mut out = ensplit_edge_inner(&z.tree, &z.v1, &z.v2)?;
    out.site = SplitSite::Vertex(v.to_string(), parts.clone());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{det_edge, f_total, multiplicity};
    use crate::simplify::contract_det_zero;
    use crate::treecore::{isomorphic, TreeBuilder};

    fn picture1() -> DecoratedTree {
        TreeBuilder::new()
            .vertex("u")
            .vertex("v")
            .arrow("a1", 1)
            .arrow("a2", 0)
            .edge("u", "v", -2, 3)
            .edge("v", "a1", 1, 1)
            .edge("v", "a2", 2, 1)
            .build()
            .unwrap()
    }

    #[test]
    fn edz_with_empty_part_and_round_trip() {
        let t = picture1();
        let parts = TwoPrepartition::with_first(&t, "v", Vec::<String>::new()).unwrap();
        let z = edz(&t, "v", &parts).unwrap();
        assert!(z.tree.q_near(&z.v2, &z.v1).is_one());
        assert!(det_edge(&z.tree, &z.edge()).unwrap().is_zero());
        let back = contract_det_zero(&z.tree, &z.v1, &z.v2).unwrap();
        assert!(isomorphic(&back, &t));
        assert_eq!(multiplicity(&z.tree), multiplicity(&t));
    }

    #[test]
    fn bad_prepartition_is_rejected() {
        let t = picture1();
        let parts = TwoPrepartition {
            first: BTreeSet::from(["u".to_string()]),
            second: BTreeSet::from(["u".to_string(), "a1".to_string(), "a2".to_string()]),
        };
        assert!(edz(&t, "v", &parts).is_err());
    }

    #[test]
    fn split_outputs_contain_good_pairs() {
        let t = picture1();
        let s = split_at_edge(&t, &Edge::new("u", "v")).unwrap();
        assert!(is_good_pair(&s.t1, &s.w1, &s.v1).unwrap().good);
        assert!(is_good_pair(&s.t2, &s.w2, &s.v2).unwrap().good);
        assert_eq!(multiplicity(&s.t1) + multiplicity(&s.t2), multiplicity(&t));
        assert_eq!(
            f_total(&s.t1) + f_total(&s.t2),
            f_total(&t) + BigInt::from(2) * &s.degree
        );
    }

    #[test]
    fn picture1_is_not_a_good_pair() {
        assert!(!is_good_pair(&picture1(), "v", "u").unwrap().good);
    }

    #[test]
    fn degree_zero_good_pair_allowed() {
        let t = TreeBuilder::new()
            .vertex("v")
            .vertex("z")
            .arrow("b", 0)
            .arrow("o", 0)
            .edge("v", "z", 1, 0)
            .edge("v", "b", 1, 1)
            .edge("z", "o", 1, 1)
            .build()
            .unwrap();
        assert!(is_good_pair(&t, "z", "v").unwrap().good);
    }

    #[test]
    fn type_cases() {
        let b = BigInt::from;
        assert_eq!(en_type(&b(0), &b(-3)), -1);
        assert_eq!(en_type(&b(0), &b(3)), 1);
        assert_eq!(en_type(&b(0), &b(0)), 0);
        assert_eq!(en_type(&b(2), &b(5)), 0);
    }
}
