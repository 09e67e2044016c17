//! Roots, pseudo-roots, central elements, the subtree `T_X` and the
//! decomposition ledger for partitions of the nonzero arrows.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::invariants::{
    correction_d, correction_g, correction_m, det_edge, multiplicity_node, nonzero_arrow_set,
    pairing_i, summary, ArrowSubset,
};
use crate::treecore::{DecoratedTree, NodeId};

/// How strongly a vertex qualifies as a root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strength {
    /// Satisfies clauses (i), (ii) and (iii).
    Root,
    /// Satisfies clauses (i) and (ii) only.
    PseudoRoot,
}

/// Result of [`classify_vertex`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    /// A root.
    Root,
    /// A pseudo-root that is not a root.
    PseudoRootOnly,
    /// Neither.
    Neither,
}

/// A decorated tree with a distinguished pseudo-root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    tree: DecoratedTree,
    root: NodeId,
    strength: Strength,
}

impl RootedTree {
    /// Wraps `tree` with `root` as its pseudo-root; fails if `root` is not one.
    pub fn new(tree: DecoratedTree, root: &str) -> Result<RootedTree> {
        let strength = match classify_vertex(&tree, root)? {
            Classification::Root => Strength::Root,
            Classification::PseudoRootOnly => Strength::PseudoRoot,
            Classification::Neither => return Err(Error::NotPseudoRoot(root.to_string())),
        };
        Ok(RootedTree {
            tree,
            root: root.to_string(),
            strength,
        })
    }

    /// Like [`RootedTree::new`] but requires `root` to be a root.
    pub fn new_root(tree: DecoratedTree, root: &str) -> Result<RootedTree> {
        let r = RootedTree::new(tree, root)?;
        if r.strength != Strength::Root {
            return Err(Error::NotRoot(root.to_string()));
        }
        Ok(r)
    }

    /// The underlying tree.
    pub fn tree(&self) -> &DecoratedTree {
        &self.tree
    }

    /// The distinguished vertex.
    pub fn root(&self) -> &str {
        &self.root
    }

    /// Whether the distinguished vertex is a root or only a pseudo-root.
    pub fn strength(&self) -> Strength {
        self.strength
    }

    /// Whether the distinguished vertex is a root.
    pub fn is_root(&self) -> bool {
        self.strength == Strength::Root
    }

    /// Drops the root.
    pub fn into_tree(self) -> DecoratedTree {
        self.tree
    }

    pub(crate) fn require_root(&self, op: &'static str) -> Result<()> {
        if self.is_root() {
            Ok(())
        } else {
            Err(Error::pre(
                op,
                format!("`{}` is only a pseudo-root", self.root),
            ))
        }
    }
}

/// Classifies `v` against the root and pseudo-root clauses.
pub fn classify_vertex(tree: &DecoratedTree, v: &str) -> Result<Classification> {
    if !tree.contains(v) {
        return Err(Error::UnknownNode(v.to_string()));
    }
    if !tree.is_vertex(v) {
        return Err(Error::pre("classify_vertex", format!("`{v}` is an arrow")));
    }
    if tree.nbrs(v).values().any(|q| !q.is_one()) {
        return Ok(Classification::Neither);
    }
    let parent = tree.parents_from(v);
    let mut root = true;
    for w in tree.vertices() {
        let Some(up) = parent[w.as_str()].as_deref() else {
            continue;
        };
        let mut special = 0;
        for (c, q) in tree.nbrs(w) {
            if c == up {
                continue;
            }
            if !q.is_one() {
                special += 1;
            }
            if *q < BigInt::one() {
                root = false;
            }
        }
        if special > 1 {
            return Ok(Classification::Neither);
        }
    }
    Ok(if root {
        Classification::Root
    } else {
        Classification::PseudoRootOnly
    })
}

/// All roots and all pseudo-roots (the second set contains the first).
pub fn find_roots(tree: &DecoratedTree) -> (BTreeSet<NodeId>, BTreeSet<NodeId>) {
    let mut roots = BTreeSet::new();
    let mut pseudo = BTreeSet::new();
    for v in tree.vertices() {
        match classify_vertex(tree, v).expect("vertex") {
            Classification::Root => {
                roots.insert(v.clone());
                pseudo.insert(v.clone());
            }
            Classification::PseudoRootOnly => {
                pseudo.insert(v.clone());
            }
            Classification::Neither => {}
        }
    }
    (roots, pseudo)
}

/// Whether the path ending with the edge `{prev, w}` satisfies condition `(+)` at `w`.
fn plus_at(tree: &DecoratedTree, prev: &str, w: &str) -> bool {
    let mut big = 0;
    for (c, q) in tree.nbrs(w) {
        if c == prev {
            continue;
        }
        if *q < BigInt::one() {
            return false;
        }
        if !q.is_one() {
            big += 1;
        }
    }
    big <= 1
}

/// Whether `x` is central: every path from `x` to another vertex satisfies `(+)`.
pub fn is_central(tree: &DecoratedTree, x: &str) -> Result<bool> {
    if !tree.contains(x) {
        return Err(Error::UnknownNode(x.to_string()));
    }
    let parent = tree.parents_from(x);
    Ok(tree
        .vertices()
        .all(|v| match parent[v.as_str()].as_deref() {
            None => true,
            Some(prev) => plus_at(tree, prev, v),
        }))
}

/// The set of central vertices and arrows. Its connectedness is checked.
pub fn central_set(tree: &DecoratedTree) -> Result<BTreeSet<NodeId>> {
    let mut out = BTreeSet::new();
    for x in tree.nodes() {
        if is_central(tree, x)? {
            out.insert(x.clone());
        }
    }
    if !is_connected_set(tree, &out) {
        return Err(Error::Internal("the central set is not connected".into()));
    }
    Ok(out)
}

/// Whether every path with both endpoints in `set` stays inside `set`.
pub fn is_connected_set(tree: &DecoratedTree, set: &BTreeSet<NodeId>) -> bool {
    let Some(start) = set.iter().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start.clone()]);
    let mut stack = vec![start.clone()];
    while let Some(x) = stack.pop() {
        for y in tree.nbrs(&x).keys() {
            if set.contains(y) && seen.insert(y.clone()) {
                stack.push(y.clone());
            }
        }
    }
    seen.len() == set.len()
}

/// `x <= y` in the order where `x < y` iff `x` lies on the path from the root to `y`.
pub fn le(rooted: &RootedTree, x: &str, y: &str) -> Result<bool> {
    let tree = rooted.tree();
    if !tree.contains(x) {
        return Err(Error::UnknownNode(x.to_string()));
    }
    Ok(tree.path(rooted.root(), y)?.nodes().iter().any(|n| n == x))
}

/// The subtree `T_X` spanned by the paths from the root to the arrows of `X`,
/// with each pruned branch product `b_v != 1` recorded by a new zero arrow `<v>.b0`.
pub fn subtree_tx(rooted: &RootedTree, x: &ArrowSubset) -> Result<RootedTree> {
    let tree = rooted.tree();
    if x.is_empty() {
        return Err(Error::pre("subtree_tx", "the arrow set is empty"));
    }
    let mut keep: BTreeSet<NodeId> = BTreeSet::new();
    for a in x {
        if !tree.contains(a) {
            return Err(Error::UnknownNode(a.clone()));
        }
        if !tree.is_nonzero_arrow(a) {
            return Err(Error::pre(
                "subtree_tx",
                format!("`{a}` is not an arrow with nonzero decoration"),
            ));
        }
        keep.extend(tree.path(rooted.root(), a)?.nodes().iter().cloned());
    }
    let mut out = tree.induced(&keep);
    let kept_vertices: Vec<NodeId> = keep.iter().filter(|v| tree.is_vertex(v)).cloned().collect();
    for v in kept_vertices {
        let mut b = BigInt::one();
        for (c, q) in tree.nbrs(&v) {
            if !keep.contains(c) {
                b *= q;
            }
        }
        if !b.is_one() {
            let base = format!("{v}.b0");
            let mut id = tree.fresh_id(&base);
            if out.contains(&id) {
                id = out.fresh_id(&id);
            }
            out.raw_add_arrow(&id, BigInt::zero());
            out.raw_add_edge(&v, &id, b, BigInt::one());
        }
    }
    let out = out.checked("subtree_tx")?;
    RootedTree::new(out, rooted.root())
}

/// Sign pattern of the determinants of the vertex-vertex edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DetSign {
    /// There is no edge joining two vertices.
    Vacuous,
    /// Every such determinant is negative.
    Negative,
    /// Every such determinant is positive.
    Positive,
    /// No such determinant is zero, but both signs occur.
    Nonzero,
    /// Some such determinant is zero.
    Mixed,
}

impl DetSign {
    /// Whether the tree has negative determinants (vacuously included).
    pub fn is_negative(self) -> bool {
        matches!(self, DetSign::Vacuous | DetSign::Negative)
    }

    /// Whether the tree has positive determinants (vacuously included).
    pub fn is_positive(self) -> bool {
        matches!(self, DetSign::Vacuous | DetSign::Positive)
    }

    /// Whether the tree has nonzero determinants (vacuously included).
    pub fn is_nonzero(self) -> bool {
        !matches!(self, DetSign::Mixed)
    }
}

/// Classifies the determinants of all vertex-vertex edges.
pub fn determinant_sign(tree: &DecoratedTree) -> DetSign {
    let (mut neg, mut pos, mut zero) = (false, false, false);
    for e in tree.edges() {
        let (a, b) = e.endpoints();
        if !(tree.is_vertex(a) && tree.is_vertex(b)) {
            continue;
        }
        let d = det_edge(tree, &e).expect("edge of the tree");
        if d.is_zero() {
            zero = true;
        } else if d.is_negative() {
            neg = true;
        } else {
            pos = true;
        }
    }
    match (neg, pos, zero) {
        (_, _, true) => DetSign::Mixed,
        (false, false, false) => DetSign::Vacuous,
        (true, false, false) => DetSign::Negative,
        (false, true, false) => DetSign::Positive,
        (true, true, false) => DetSign::Nonzero,
    }
}

/// `deg(T)`, taken to be the multiplicity `N_{v0}` of the root.
pub fn degree(rooted: &RootedTree) -> BigInt {
    multiplicity_node(rooted.tree(), rooted.root()).expect("root is a vertex")
}

/// Invariants of one block `X` of a partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// The arrows of the block.
    pub arrows: ArrowSubset,
    /// `M(T_X)`.
    pub m: BigInt,
    /// `F(T_X)`.
    pub f: BigInt,
    /// `g(T_X)`.
    pub g: BigInt,
    /// `δ(T_X)`.
    pub delta: BigInt,
    /// `𝔐(T,X)`.
    pub corr_m: BigInt,
    /// `𝔇(T,X)`.
    pub corr_d: BigInt,
    /// `𝔊(T,X)`.
    pub corr_g: BigInt,
}

/// Everything needed to check the decomposition formulas for one partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// `M(T)`.
    pub m: BigInt,
    /// `F(T)`.
    pub f: BigInt,
    /// `g(T)`.
    pub g: BigInt,
    /// `δ(T)`.
    pub delta: BigInt,
    /// One entry per block, in the given order.
    pub blocks: Vec<Block>,
    /// `I(X_i, X_j)`, symmetric, zero on the diagonal.
    pub pairings: Vec<Vec<BigInt>>,
}

/// A `(left, right)` pair of sides of an identity.
pub type Balance = (BigInt, BigInt);

impl Decomposition {
    /// Computes every term for the partition `blocks` of the nonzero arrows.
    pub fn compute(rooted: &RootedTree, blocks: &[ArrowSubset]) -> Result<Decomposition> {
        let tree = rooted.tree();
        let all = nonzero_arrow_set(tree);
        let mut seen = ArrowSubset::new();
        for b in blocks {
            if b.is_empty() {
                return Err(Error::pre("decomposition", "a block is empty"));
            }
            for a in b {
                if !seen.insert(a.clone()) {
                    return Err(Error::pre(
                        "decomposition",
                        format!("`{a}` is in two blocks"),
                    ));
                }
            }
        }
        if seen != all {
            return Err(Error::pre(
                "decomposition",
                "the blocks do not cover the nonzero arrows exactly",
            ));
        }
        let whole = summary(tree)?;
        let mut out_blocks = Vec::with_capacity(blocks.len());
        for b in blocks {
            let tx = subtree_tx(rooted, b)?;
            let s = summary(tx.tree())?;
            out_blocks.push(Block {
                arrows: b.clone(),
                m: s.m,
                f: s.f,
                g: s.g,
                delta: s.delta,
                corr_m: correction_m(tree, b)?,
                corr_d: correction_d(rooted, b)?,
                corr_g: correction_g(rooted, b)?,
            });
        }
        let k = blocks.len();
        let mut pairings = vec![vec![BigInt::zero(); k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let v = pairing_i(tree, &blocks[i], &blocks[j])?;
                pairings[i][j] = v.clone();
                pairings[j][i] = v;
            }
        }
        Ok(Decomposition {
            m: whole.m,
            f: whole.f,
            g: whole.g,
            delta: whole.delta,
            blocks: out_blocks,
            pairings,
        })
    }

    /// `Σ_{i<j} I(X_i, X_j)`.
    pub fn pairing_sum(&self) -> BigInt {
        let k = self.blocks.len();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .map(|(i, j)| self.pairings[i][j].clone())
            .sum()
    }

    /// `M(T)` against `Σ M(T_X) + Σ 𝔐(T,X) - Σ_{X != Y} I(X,Y)`.
    pub fn m_balance(&self) -> Balance {
        let rhs = self.blocks.iter().map(|b| &b.m + &b.corr_m).sum::<BigInt>()
            - BigInt::from(2) * self.pairing_sum();
        (self.m.clone(), rhs)
    }

    /// `δ(T)` against `Σ δ(T_X) - Σ 𝔇(T,X) + Σ_{i<j} I(X_i,X_j)`.
    pub fn delta_balance(&self) -> Balance {
        let rhs = self
            .blocks
            .iter()
            .map(|b| &b.delta - &b.corr_d)
            .sum::<BigInt>()
            + self.pairing_sum();
        (self.delta.clone(), rhs)
    }

    /// `g(T) - 1` against `Σ (g(T_X) - 1) - Σ 𝔊(T,X) + Σ_{i<j} I(X_i,X_j)`.
    pub fn genus_balance(&self) -> Balance {
        let rhs = self
            .blocks
            .iter()
            .map(|b| &b.g - 1 - &b.corr_g)
            .sum::<BigInt>()
            + self.pairing_sum();
        (&self.g - 1, rhs)
    }
}

/// Maps each node to its neighbour one step closer to the root.
pub fn parent_map(rooted: &RootedTree) -> BTreeMap<NodeId, Option<NodeId>> {
    rooted
        .tree()
        .parents_from(rooted.root())
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treecore::TreeBuilder;

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

    fn set(xs: &[&str]) -> BTreeSet<NodeId> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn picture1_central_set() {
        assert_eq!(central_set(&picture1()).unwrap(), set(&["a2", "u", "v"]));
    }

    #[test]
    fn picture1_has_negative_determinants() {
        assert_eq!(determinant_sign(&picture1()), DetSign::Negative);
    }

    #[test]
    fn classification_cases() {
        let t = TreeBuilder::new()
            .vertex("r")
            .arrow("a", 1)
            .arrow("b", 1)
            .edge("r", "a", 1, 1)
            .edge("r", "b", 1, 1)
            .build()
            .unwrap();
        assert_eq!(classify_vertex(&t, "r").unwrap(), Classification::Root);
        let rt = RootedTree::new(t, "r").unwrap();
        assert_eq!(degree(&rt), BigInt::from(2));
        assert_eq!(
            classify_vertex(&picture1(), "v").unwrap(),
            Classification::Neither
        );
        let pseudo = TreeBuilder::new()
            .vertex("r")
            .vertex("w")
            .arrow("a", 1)
            .arrow("z", 0)
            .edge("r", "w", 1, 1)
            .edge("w", "a", 1, 1)
            .edge("w", "z", -3, 1)
            .build()
            .unwrap();
        assert_eq!(
            classify_vertex(&pseudo, "r").unwrap(),
            Classification::PseudoRootOnly
        );
        assert_eq!(
            RootedTree::new_root(pseudo, "r").unwrap_err(),
            Error::NotRoot("r".into())
        );
    }

    #[test]
    fn order_and_connectedness() {
        let t = TreeBuilder::new()
            .vertex("r")
            .arrow("a", 1)
            .arrow("b", 1)
            .edge("r", "a", 1, 1)
            .edge("r", "b", 1, 1)
            .build()
            .unwrap();
        let rt = RootedTree::new(t.clone(), "r").unwrap();
        assert!(le(&rt, "r", "a").unwrap());
        assert!(le(&rt, "a", "a").unwrap());
        assert!(!le(&rt, "a", "b").unwrap() && !le(&rt, "b", "a").unwrap());
        assert!(is_connected_set(&t, &set(&["a", "r"])));
        assert!(!is_connected_set(&t, &set(&["a", "b"])));
    }

    #[test]
    fn subtree_rejects_empty_and_zero_arrows() {
        let t = TreeBuilder::new()
            .vertex("r")
            .arrow("a", 1)
            .arrow("z", 0)
            .edge("r", "a", 1, 1)
            .edge("r", "z", 1, 1)
            .build()
            .unwrap();
        let rt = RootedTree::new(t, "r").unwrap();
        assert!(subtree_tx(&rt, &ArrowSubset::new()).is_err());
        assert!(subtree_tx(&rt, &set(&["z"])).is_err());
    }
}
