//! Numeric invariants of decorated trees.
//!
//! Notation used in the docs below: `Q(e,x)` is the product of the decorations
//! near `x` on the edges at `x` other than `e`; `x(v,α)` is `f(α)` times the
//! product of the decorations near the path from `v` to `α` on edges incident to
//! but not on that path; `N_v` is the sum of `x(v,α)` over arrows `α` with
//! `f(α) != 0`; `p(u,e)` is the analogous sum of `x̂(u,α)` (edges at `u`
//! excluded) over the nonzero arrows beyond `e`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rooted::{subtree_tx, RootedTree};
use crate::treecore::{gcd, DecoratedTree, Edge, NodeId, Path};

/// A set of arrows, all with nonzero decoration.
pub type ArrowSubset = BTreeSet<NodeId>;

/// `Q(e,x)`: product of the decorations near `x` on the other edges at `x`.
pub fn big_q(tree: &DecoratedTree, e: &Edge, x: &str) -> Result<BigInt> {
    tree.q(e, x)?;
    let y = e.other(x).expect("checked");
    Ok(tree.prod_near_except(x, &[y]))
}

/// Determinant `q(e,x)q(e,y) - Q(e,x)Q(e,y)` of the edge `e = {x,y}`.
pub fn det_edge(tree: &DecoratedTree, e: &Edge) -> Result<BigInt> {
    tree.check_edge(e)?;
    let (x, y) = e.endpoints();
    Ok(tree.q_near(x, y) * tree.q_near(y, x)
        - tree.prod_near_except(x, &[y]) * tree.prod_near_except(y, &[x]))
}

/// All branch sums `p(u,e)` of a tree, computed together.
///
/// The value for the directed pair `(u, w)` is `p(u, {u,w})`.
#[derive(Clone, Debug)]
pub struct BranchSums {
    values: BTreeMap<(NodeId, NodeId), BigInt>,
}

impl BranchSums {
    /// Computes `p(u,e)` for every edge and both orientations.
    pub fn compute(tree: &DecoratedTree) -> BranchSums {
        let mut values = BTreeMap::new();
        let Some(root) = tree.nodes().next() else {
            return BranchSums { values };
        };
        let parent = tree.parents_from(root);
        let n = tree.node_count();
        let mut order: Vec<&str> = Vec::with_capacity(n);
        let mut stack = vec![root.as_str()];
        while let Some(x) = stack.pop() {
            order.push(x);
            for y in tree.nbrs(x).keys() {
                if parent[y.as_str()].as_deref() == Some(x) {
                    stack.push(y);
                }
            }
        }
        let mut size: BTreeMap<&str, usize> = BTreeMap::new();
        for x in order.iter().rev() {
            let s = 1 + tree
                .nbrs(x)
                .keys()
                .filter(|y| parent[y.as_str()].as_deref() == Some(*x))
                .map(|y| size[y.as_str()])
                .sum::<usize>();
            size.insert(x, s);
        }
        // Directed pairs (u, w) sorted by the size of the side containing w.
        let mut pairs: Vec<(usize, &str, &str)> = Vec::new();
        for x in &order {
            if let Some(p) = parent[x].as_deref() {
                pairs.push((size[x], p, x));
                pairs.push((n - size[x], x, p));
            }
        }
        pairs.sort();
        for (_, u, w) in pairs {
            let val = if tree.is_arrow(w) {
                tree.f(w).expect("arrow").clone()
            } else {
                let nb = tree.nbrs(w);
                let mut s = BigInt::zero();
                for c in nb.keys() {
                    if c == u {
                        continue;
                    }
                    let down = &values[&(w.to_string(), c.clone())];
                    if down.is_zero() {
                        continue;
                    }
                    s += tree.prod_near_except(w, &[u, c]) * down;
                }
                s
            };
            values.insert((u.to_string(), w.to_string()), val);
        }
        BranchSums { values }
    }

    /// `p(u, {u,w})`.
    pub fn get(&self, u: &str, w: &str) -> Option<&BigInt> {
        self.values.get(&(u.to_string(), w.to_string()))
    }

    pub(crate) fn at(&self, u: &str, w: &str) -> &BigInt {
        &self.values[&(u.to_string(), w.to_string())]
    }
}

/// `p(u,e)`: sum of `x̂(u,α)` over nonzero arrows `α` whose path from `u` uses `e`.
pub fn branch_sum(tree: &DecoratedTree, u: &str, e: &Edge) -> Result<BigInt> {
    tree.q(e, u)?;
    let w = e.other(u).expect("checked");
    Ok(BranchSums::compute(tree).at(u, w).clone())
}

/// `p*(u,e) = p(w,e)` where `w` is the other endpoint of `e`.
pub fn p_star(tree: &DecoratedTree, u: &str, e: &Edge) -> Result<BigInt> {
    tree.q(e, u)?;
    let w = e.other(u).expect("checked");
    branch_sum(tree, w, e)
}

/// The set of nonzero arrows whose path from `u` passes through `e`.
pub fn arrows_beyond(tree: &DecoratedTree, u: &str, e: &Edge) -> Result<BTreeSet<NodeId>> {
    tree.q(e, u)?;
    let w = e.other(u).expect("checked");
    Ok(tree
        .side(w, u)
        .into_iter()
        .filter(|x| tree.is_nonzero_arrow(x))
        .collect())
}

fn require_nonzero_arrow(tree: &DecoratedTree, a: &str, op: &'static str) -> Result<()> {
    if !tree.contains(a) {
        return Err(Error::UnknownNode(a.to_string()));
    }
    if !tree.is_nonzero_arrow(a) {
        return Err(Error::pre(
            op,
            format!("`{a}` is not an arrow with nonzero decoration"),
        ));
    }
    Ok(())
}

fn require_vertex_or_zero_arrow(tree: &DecoratedTree, v: &str, op: &'static str) -> Result<()> {
    if !tree.contains(v) {
        return Err(Error::UnknownNode(v.to_string()));
    }
    if !tree.is_vertex_or_zero_arrow(v) {
        return Err(Error::pre(
            op,
            format!("`{v}` is an arrow with nonzero decoration"),
        ));
    }
    Ok(())
}

/// `Q(γ,u)`: product of decorations near `u` on edges at `u` that are not in `γ`.
pub fn path_big_q(tree: &DecoratedTree, path: &Path, u: &str) -> Result<BigInt> {
    let nodes = path.nodes();
    let i = nodes
        .iter()
        .position(|x| x == u)
        .ok_or_else(|| Error::pre("Q(path,u)", format!("`{u}` is not on the path")))?;
    let mut skip: Vec<&str> = Vec::new();
    if i > 0 {
        skip.push(&nodes[i - 1]);
    }
    if i + 1 < nodes.len() {
        skip.push(&nodes[i + 1]);
    }
    Ok(tree.prod_near_except(u, &skip))
}

/// `q(γ,x)` for an endpoint `x` of a path with at least one edge.
pub fn path_q_end(tree: &DecoratedTree, path: &Path, x: &str) -> Result<BigInt> {
    check_path(tree, path, "q(path,x)")?;
    let nodes = path.nodes();
    if nodes[0] == x {
        Ok(tree.q_near(x, &nodes[1]).clone())
    } else if nodes[nodes.len() - 1] == x {
        Ok(tree.q_near(x, &nodes[nodes.len() - 2]).clone())
    } else {
        Err(Error::pre("q(path,x)", format!("`{x}` is not an endpoint")))
    }
}

/// `Q*(γ)`: product of `Q(γ,x_i)` over the interior nodes of `γ`.
pub fn q_star(tree: &DecoratedTree, path: &Path) -> Result<BigInt> {
    check_path(tree, path, "Q*(path)")?;
    let nodes = path.nodes();
    let mut p = BigInt::one();
    for i in 1..nodes.len() - 1 {
        p *= tree.prod_near_except(&nodes[i], &[&nodes[i - 1], &nodes[i + 1]]);
    }
    Ok(p)
}

fn check_path(tree: &DecoratedTree, path: &Path, op: &'static str) -> Result<()> {
    if path.is_empty() {
        return Err(Error::pre(op, "path has no edge"));
    }
    for e in path.edges() {
        tree.check_edge(&e)?;
    }
    Ok(())
}

/// Determinant `q(γ,x0)q(γ,xn) - Q*(γ)² Q(γ,x0) Q(γ,xn)` of a path with at least one edge.
pub fn det_path(tree: &DecoratedTree, path: &Path) -> Result<BigInt> {
    check_path(tree, path, "det(path)")?;
    let (x0, xn) = (path.first(), path.last());
    let qs = q_star(tree, path)?;
    Ok(path_q_end(tree, path, x0)? * path_q_end(tree, path, xn)?
        - &qs * &qs * path_big_q(tree, path, x0)? * path_big_q(tree, path, xn)?)
}

/// Whether every interior node of the path has valency two.
pub fn is_linear(tree: &DecoratedTree, path: &Path) -> bool {
    let nodes = path.nodes();
    nodes.len() >= 2 && nodes[1..nodes.len() - 1].iter().all(|x| tree.deg(x) == 2)
}

/// `x(v,α)` for `v` a vertex or zero arrow and `α` a nonzero arrow.
pub fn x_value(tree: &DecoratedTree, v: &str, alpha: &str) -> Result<BigInt> {
    require_vertex_or_zero_arrow(tree, v, "x(v,alpha)")?;
    require_nonzero_arrow(tree, alpha, "x(v,alpha)")?;
    let path = tree.path(v, alpha)?;
    let nodes = path.nodes();
    let mut p = tree.f(alpha)?.clone();
    p *= tree.prod_near_except(v, &[&nodes[1]]);
    p *= q_star(tree, &path)?;
    Ok(p)
}

/// `x̂(v,α)`: like [`x_value`] but without the edges at `v`.
pub fn x_hat(tree: &DecoratedTree, v: &str, alpha: &str) -> Result<BigInt> {
    require_vertex_or_zero_arrow(tree, v, "x_hat(v,alpha)")?;
    require_nonzero_arrow(tree, alpha, "x_hat(v,alpha)")?;
    let path = tree.path(v, alpha)?;
    Ok(tree.f(alpha)? * q_star(tree, &path)?)
}

/// `x(v,α)` for every vertex or zero arrow `v`, for one nonzero arrow `α`.
pub fn x_values_for_arrow(tree: &DecoratedTree, alpha: &str) -> Result<BTreeMap<NodeId, BigInt>> {
    require_nonzero_arrow(tree, alpha, "x(.,alpha)")?;
    let f = tree.f(alpha)?.clone();
    let mut out = BTreeMap::new();
    for (y, acc) in qstar_products(tree, alpha) {
        if tree.is_vertex_or_zero_arrow(&y.0) {
            let next = y.1.as_deref().expect("y differs from alpha");
            out.insert(
                y.0.clone(),
                &f * &acc * tree.prod_near_except(&y.0, &[next]),
            );
        }
    }
    Ok(out)
}

/// For every node `y != start`: `Q*(γ_{start,y})` together with the neighbour of
/// `y` on the path back to `start`.
fn qstar_products(tree: &DecoratedTree, start: &str) -> Vec<((NodeId, Option<NodeId>), BigInt)> {
    let mut out = Vec::new();
    let mut stack: Vec<(NodeId, NodeId, BigInt)> = tree
        .nbrs(start)
        .keys()
        .map(|y| (y.clone(), start.to_string(), BigInt::one()))
        .collect();
    while let Some((y, prev, acc)) = stack.pop() {
        for c in tree.nbrs(&y).keys() {
            if *c == prev {
                continue;
            }
            let next = &acc * tree.prod_near_except(&y, &[&prev, c]);
            stack.push((c.clone(), y.clone(), next));
        }
        out.push(((y, Some(prev)), acc));
    }
    out
}

/// `Q*(γ_{start,y})` for every node `y != start`.
pub fn qstar_from(tree: &DecoratedTree, start: &str) -> Result<BTreeMap<NodeId, BigInt>> {
    if !tree.contains(start) {
        return Err(Error::UnknownNode(start.to_string()));
    }
    Ok(qstar_products(tree, start)
        .into_iter()
        .map(|((y, _), acc)| (y, acc))
        .collect())
}

/// `N_v` for every vertex and zero arrow.
pub fn multiplicities(tree: &DecoratedTree) -> BTreeMap<NodeId, BigInt> {
    let p = BranchSums::compute(tree);
    multiplicities_with(tree, &p)
}

pub(crate) fn multiplicities_with(
    tree: &DecoratedTree,
    p: &BranchSums,
) -> BTreeMap<NodeId, BigInt> {
    tree.vertices_and_zero_arrows()
        .map(|v| {
            let mut n = BigInt::zero();
            for w in tree.nbrs(v).keys() {
                let pv = p.at(v, w);
                if !pv.is_zero() {
                    n += tree.prod_near_except(v, &[w]) * pv;
                }
            }
            (v.clone(), n)
        })
        .collect()
}

/// `N_v` for a vertex or zero arrow `v`.
pub fn multiplicity_node(tree: &DecoratedTree, v: &str) -> Result<BigInt> {
    require_vertex_or_zero_arrow(tree, v, "N_v")?;
    Ok(multiplicities(tree).remove(v).expect("present"))
}

/// `M = -Σ N_v (δ_v - 2)` over vertices and zero arrows.
pub fn multiplicity(tree: &DecoratedTree) -> BigInt {
    let n = multiplicities(tree);
    -n.iter()
        .map(|(v, nv)| nv * BigInt::from(tree.deg(v) as i64 - 2))
        .sum::<BigInt>()
}

/// `F(α) = gcd(f(α), p(α, e_α))` for a nonzero arrow `α`.
pub fn f_arrow(tree: &DecoratedTree, alpha: &str) -> Result<BigInt> {
    require_nonzero_arrow(tree, alpha, "F(alpha)")?;
    let p = BranchSums::compute(tree);
    Ok(f_arrow_with(tree, &p, alpha))
}

fn f_arrow_with(tree: &DecoratedTree, p: &BranchSums, alpha: &str) -> BigInt {
    let w = tree
        .nbrs(alpha)
        .keys()
        .next()
        .expect("arrow has a neighbour");
    gcd(tree.f(alpha).expect("arrow"), p.at(alpha, w))
}

/// `F(T)`: sum of `F(α)` over nonzero arrows.
pub fn f_total(tree: &DecoratedTree) -> BigInt {
    let p = BranchSums::compute(tree);
    tree.nonzero_arrows()
        .map(|a| f_arrow_with(tree, &p, a))
        .sum()
}

/// `M`, `F`, genus and δ of one tree, plus every `N_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    /// `M(T)`.
    pub m: BigInt,
    /// `F(T)`.
    pub f: BigInt,
    /// `g(T) = (2 - M - F)/2`.
    pub g: BigInt,
    /// `δ(T) = (F - M)/2`.
    pub delta: BigInt,
    /// `N_v` for every vertex and zero arrow.
    pub n: BTreeMap<NodeId, BigInt>,
}

/// Computes every whole-tree invariant with a single pass over the branch sums.
pub fn summary(tree: &DecoratedTree) -> Result<Summary> {
    let p = BranchSums::compute(tree);
    let n = multiplicities_with(tree, &p);
    let m = -n
        .iter()
        .map(|(v, nv)| nv * BigInt::from(tree.deg(v) as i64 - 2))
        .sum::<BigInt>();
    let f: BigInt = tree
        .nonzero_arrows()
        .map(|a| f_arrow_with(tree, &p, a))
        .sum();
    let (g, delta) = genus_delta_from(&m, &f)?;
    Ok(Summary { m, f, g, delta, n })
}

/// Genus and δ from `M` and `F`; fails if `M + F` is odd.
pub fn genus_delta_from(m: &BigInt, f: &BigInt) -> Result<(BigInt, BigInt)> {
    let two = BigInt::from(2);
    let s = m + f;
    if s.is_odd() {
        return Err(Error::Internal(format!("M + F = {s} is odd")));
    }
    Ok(((&two - &s) / &two, (f - m) / &two))
}

/// `(g, δ)` of a tree.
pub fn genus_delta(tree: &DecoratedTree) -> Result<(BigInt, BigInt)> {
    genus_delta_from(&multiplicity(tree), &f_total(tree))
}

fn check_subset(tree: &DecoratedTree, x: &ArrowSubset, op: &'static str) -> Result<()> {
    for a in x {
        require_nonzero_arrow(tree, a, op)?;
    }
    Ok(())
}

/// `I(X,Y) = Σ Q*(γ_{α,β}) f(α) f(β)` over `(α,β) ∈ X×Y`, `α != β`.
pub fn pairing_i(tree: &DecoratedTree, x: &ArrowSubset, y: &ArrowSubset) -> Result<BigInt> {
    check_subset(tree, x, "I(X,Y)")?;
    check_subset(tree, y, "I(X,Y)")?;
    let mut total = BigInt::zero();
    for a in x {
        let qs = qstar_from(tree, a)?;
        let fa = tree.f(a)?;
        for b in y {
            if a != b {
                total += &qs[b] * fa * tree.f(b)?;
            }
        }
    }
    Ok(total)
}

/// The nonzero arrows of the tree as a set.
pub fn nonzero_arrow_set(tree: &DecoratedTree) -> ArrowSubset {
    tree.nonzero_arrows().cloned().collect()
}

/// `I(α) = I({α}, (A∖A₀)∖{α})`.
pub fn i_arrow(tree: &DecoratedTree, alpha: &str) -> Result<BigInt> {
    require_nonzero_arrow(tree, alpha, "I(alpha)")?;
    let mut rest = nonzero_arrow_set(tree);
    rest.remove(alpha);
    pairing_i(tree, &ArrowSubset::from([alpha.to_string()]), &rest)
}

/// `M_α = -Σ x(v,α)(δ_v - 2)` over vertices and zero arrows.
pub fn m_alpha(tree: &DecoratedTree, alpha: &str) -> Result<BigInt> {
    let xs = x_values_for_arrow(tree, alpha)?;
    Ok(-xs
        .iter()
        .map(|(v, x)| x * BigInt::from(tree.deg(v) as i64 - 2))
        .sum::<BigInt>())
}

/// Correction term `𝔐(T,X) = Σ_{α∈X} (I - I/f(α))` with `I = I({α}, X^c)`.
pub fn correction_m(tree: &DecoratedTree, x: &ArrowSubset) -> Result<BigInt> {
    check_subset(tree, x, "correction_M")?;
    let complement: ArrowSubset = nonzero_arrow_set(tree).difference(x).cloned().collect();
    let mut total = BigInt::zero();
    for a in x {
        let i = pairing_i(tree, &ArrowSubset::from([a.clone()]), &complement)?;
        let fa = tree.f(a)?;
        let (q, r) = i.div_rem(fa);
        if !r.is_zero() {
            return Err(Error::Internal(format!(
                "f({a}) = {fa} does not divide I = {i}"
            )));
        }
        total += &i - q;
    }
    Ok(total)
}

/// `Σ_{α∈X} (F(α) - F_X(α))` where `F_X` is computed in `T_X`.
fn f_defect(rooted: &RootedTree, x: &ArrowSubset) -> Result<BigInt> {
    let tree = rooted.tree();
    let tx = subtree_tx(rooted, x)?;
    let mut s = BigInt::zero();
    for a in x {
        s += f_arrow(tree, a)? - f_arrow(tx.tree(), a)?;
    }
    Ok(s)
}

fn halve(v: BigInt, what: &str) -> Result<BigInt> {
    if v.is_odd() {
        return Err(Error::Internal(format!("{what}: {v} is odd")));
    }
    Ok(v / 2)
}

/// Correction term `𝔇(T,X) = (𝔐(T,X) - Σ (F(α) - F_X(α)))/2`.
pub fn correction_d(rooted: &RootedTree, x: &ArrowSubset) -> Result<BigInt> {
    let m = correction_m(rooted.tree(), x)?;
    halve(m - f_defect(rooted, x)?, "correction_D")
}

/// Correction term `𝔊(T,X) = (𝔐(T,X) + Σ (F(α) - F_X(α)))/2`.
pub fn correction_g(rooted: &RootedTree, x: &ArrowSubset) -> Result<BigInt> {
    let m = correction_m(rooted.tree(), x)?;
    halve(m + f_defect(rooted, x)?, "correction_G")
}

fn singleton_parts(tree: &DecoratedTree, alpha: &str) -> Result<(BigInt, BigInt, BigInt)> {
    require_nonzero_arrow(tree, alpha, "singleton correction")?;
    let w = tree
        .nbrs(alpha)
        .keys()
        .next()
        .expect("arrow has a neighbour");
    let p = branch_sum(tree, alpha, &Edge::new(alpha, w.as_str()))?;
    let f = tree.f(alpha)?.clone();
    let big_f = f_arrow(tree, alpha)?;
    Ok((f, p, big_f))
}

/// `𝔐(T,{α}) = (f(α) - 1) p(α, e_α)`.
pub fn correction_m_singleton(tree: &DecoratedTree, alpha: &str) -> Result<BigInt> {
    let (f, p, _) = singleton_parts(tree, alpha)?;
    Ok((f - 1) * p)
}

/// `𝔇(T,{α}) = ((f - 1)p - F(α) + |f|)/2`.
pub fn correction_d_singleton(tree: &DecoratedTree, alpha: &str) -> Result<BigInt> {
    let (f, p, big_f) = singleton_parts(tree, alpha)?;
    halve((&f - 1) * p - big_f + f.abs(), "correction_D singleton")
}

/// `𝔊(T,{α}) = ((f - 1)p + F(α) - |f|)/2`.
pub fn correction_g_singleton(tree: &DecoratedTree, alpha: &str) -> Result<BigInt> {
    let (f, p, big_f) = singleton_parts(tree, alpha)?;
    halve((&f - 1) * p + big_f - f.abs(), "correction_G singleton")
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

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn picture1_q_products() {
        let t = picture1();
        assert_eq!(big_q(&t, &Edge::new("u", "v"), "v").unwrap(), b(2));
        assert_eq!(big_q(&t, &Edge::new("u", "v"), "u").unwrap(), b(1));
        assert_eq!(big_q(&t, &Edge::new("v", "a1"), "v").unwrap(), b(6));
    }

    #[test]
    fn picture1_multiplicities_and_determinant() {
        let t = picture1();
        let n = multiplicities(&t);
        assert_eq!(n["u"], b(2));
        assert_eq!(n["v"], b(6));
        assert_eq!(n["a2"], b(3));
        assert_eq!(multiplicity(&t), b(-1));
        assert_eq!(det_edge(&t, &Edge::new("u", "v")).unwrap(), b(-8));
        assert_eq!(m_alpha(&t, "a1").unwrap(), b(-1));
        assert_eq!(branch_sum(&t, "a1", &Edge::new("a1", "v")).unwrap(), b(0));
    }

    #[test]
    fn nonzero_arrow_rejected_for_multiplicity() {
        let t = picture1();
        assert!(multiplicity_node(&t, "a1").is_err());
        assert!(f_arrow(&t, "a2").is_err());
    }

    #[test]
    fn two_arrow_tree() {
        let t = TreeBuilder::new()
            .arrow("a", 6)
            .arrow("b", -4)
            .edge("a", "b", 1, 1)
            .build()
            .unwrap();
        assert_eq!(f_total(&t), b(4));
        assert_eq!(multiplicity(&t), b(0));
    }

    #[test]
    fn empty_tree_invariants_vanish() {
        let t = DecoratedTree::empty();
        assert_eq!(multiplicity(&t), b(0));
        assert_eq!(f_total(&t), b(0));
        assert_eq!(genus_delta(&t).unwrap(), (b(1), b(0)));
    }

    #[test]
    fn vertex_arrow_pair_has_genus_zero() {
        let t = TreeBuilder::new()
            .vertex("v")
            .arrow("a", 1)
            .edge("v", "a", 1, 1)
            .build()
            .unwrap();
        assert_eq!(multiplicity(&t), b(1));
        assert_eq!(f_total(&t), b(1));
        assert_eq!(genus_delta(&t).unwrap(), (b(0), b(0)));
    }

    #[test]
    fn path_determinant_on_chain() {
        let t = TreeBuilder::new()
            .vertex("x")
            .vertex("y")
            .vertex("z")
            .arrow("a", 0)
            .arrow("c", 1)
            .edge("x", "y", 2, 3)
            .edge("y", "z", 5, 7)
            .edge("x", "a", 3, 1)
            .edge("z", "c", 2, 1)
            .build()
            .unwrap();
        let g = t.path("x", "z").unwrap();
        assert!(is_linear(&t, &g));
        let linear = b(2) * b(7) - b(3) * b(2);
        assert_eq!(det_path(&t, &g).unwrap(), linear);
        let single = t.path("x", "y").unwrap();
        assert_eq!(
            det_path(&t, &single).unwrap(),
            det_edge(&t, &Edge::new("x", "y")).unwrap()
        );
        assert!(det_path(&t, &t.path("x", "x").unwrap()).is_err());
    }

    #[test]
    fn star_pairing() {
        let t = TreeBuilder::new()
            .vertex("v")
            .arrow("a", 1)
            .arrow("c", 1)
            .edge("v", "a", 1, 1)
            .edge("v", "c", 1, 1)
            .build()
            .unwrap();
        let x = ArrowSubset::from(["a".to_string()]);
        let y = ArrowSubset::from(["c".to_string()]);
        assert_eq!(pairing_i(&t, &x, &y).unwrap(), b(1));
    }
}
