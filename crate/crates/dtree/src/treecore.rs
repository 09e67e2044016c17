//! Decorated trees: the data model, node identities, structural queries and
//! validation against the defining clauses (i)-(vi).
//!
//! A decorated tree is a finite tree whose nodes are *vertices* or *arrows*.
//! Every arrow has valency one and carries an integer decoration `f`. Every
//! edge carries one integer decoration near each endpoint; the decoration near
//! an arrow is always 1, and the decorations near a vertex on distinct edges
//! are pairwise coprime.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Caller-supplied identifier of a vertex or arrow.
pub type NodeId = String;

/// Whether a node is a vertex or an arrow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    /// An element of the vertex set.
    Vertex,
    /// An element of the arrow set.
    Arrow,
}

/// An unordered pair of endpoints. The smaller id is stored first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    a: NodeId,
    b: NodeId,
}

impl Edge {
    /// The edge joining `x` and `y`, in either order.
    pub fn new(x: impl Into<NodeId>, y: impl Into<NodeId>) -> Edge {
        let (x, y) = (x.into(), y.into());
        if x <= y {
            Edge { a: x, b: y }
        } else {
            Edge { a: y, b: x }
        }
    }

    /// Both endpoints, smaller id first.
    pub fn endpoints(&self) -> (&str, &str) {
        (&self.a, &self.b)
    }

    /// Whether `x` is an endpoint.
    pub fn contains(&self, x: &str) -> bool {
        self.a == x || self.b == x
    }

    /// The endpoint opposite to `x`, if `x` is an endpoint.
    pub fn other(&self, x: &str) -> Option<&str> {
        if self.a == x {
            Some(&self.b)
        } else if self.b == x {
            Some(&self.a)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.a, self.b)
    }
}

/// The clause of the definition that a candidate tree fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Clause {
    /// Node ids must be nonempty tokens without whitespace or reserved characters.
    Identity,
    /// Disjoint node sets forming a tree (connected, acyclic, no loops or multi-edges).
    I,
    /// Every arrow has valency one.
    II,
    /// `f` is defined on every arrow.
    III,
    /// `q` is defined on every (edge, endpoint) pair.
    IV,
    /// The decoration near an arrow is 1.
    V,
    /// Decorations near a vertex on distinct edges are coprime.
    VI,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Clause::Identity => "id",
            Clause::I => "(i)",
            Clause::II => "(ii)",
            Clause::III => "(iii)",
            Clause::IV => "(iv)",
            Clause::V => "(v)",
            Clause::VI => "(vi)",
        };
        f.write_str(s)
    }
}

/// One failed clause, naming the offending node or edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Which clause fails.
    pub clause: Clause,
    /// The offending node id or edge.
    pub subject: String,
    /// Human-readable explanation.
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "clause {} at {}: {}",
            self.clause, self.subject, self.detail
        )
    }
}

/// A candidate structure that may or may not be a decorated tree.
///
/// Nothing is checked while adding parts; [`validate`] or [`TreeBuilder::build`]
/// performs the full check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeBuilder {
    vertices: Vec<NodeId>,
    arrows: Vec<(NodeId, BigInt)>,
    edges: Vec<(NodeId, NodeId, BigInt, BigInt)>,
}

impl TreeBuilder {
    /// An empty candidate.
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a vertex.
    pub fn vertex(&mut self, id: impl Into<NodeId>) -> &mut Self {
        self.vertices.push(id.into());
        self
    }

    /// Adds an arrow with decoration `f`.
    pub fn arrow(&mut self, id: impl Into<NodeId>, f: impl Into<BigInt>) -> &mut Self {
        self.arrows.push((id.into(), f.into()));
        self
    }

    /// Adds the edge `{a,b}` with decoration `qa` near `a` and `qb` near `b`.
    pub fn edge(
        &mut self,
        a: impl Into<NodeId>,
        b: impl Into<NodeId>,
        qa: impl Into<BigInt>,
        qb: impl Into<BigInt>,
    ) -> &mut Self {
        self.edges.push((a.into(), b.into(), qa.into(), qb.into()));
        self
    }

    /// Validates the candidate and returns the tree.
    pub fn build(&self) -> Result<DecoratedTree> {
        validate(self).map_err(Error::Invalid)?;
        let mut t = DecoratedTree::default();
        for v in &self.vertices {
            t.kinds.insert(v.clone(), NodeKind::Vertex);
            t.adj.insert(v.clone(), BTreeMap::new());
        }
        for (a, f) in &self.arrows {
            t.kinds.insert(a.clone(), NodeKind::Arrow);
            t.f.insert(a.clone(), f.clone());
            t.adj.insert(a.clone(), BTreeMap::new());
        }
        for (a, b, qa, qb) in &self.edges {
            t.adj
                .get_mut(a)
                .expect("validated")
                .insert(b.clone(), qa.clone());
            t.adj
                .get_mut(b)
                .expect("validated")
                .insert(a.clone(), qb.clone());
        }
        Ok(t)
    }
}

/// Whether `id` is usable as a node id in every format the crate reads and writes.
pub fn is_valid_id(id: &str) -> bool {
    !id.is_empty()
        && id
            .chars()
            .all(|c| !c.is_whitespace() && !matches!(c, '#' | '=' | ',' | ';' | '"'))
}

/// Checks a candidate against every clause; returns all violations found.
pub fn validate(c: &TreeBuilder) -> std::result::Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let mut push = |clause, subject: &str, detail: String| {
        out.push(Violation {
            clause,
            subject: subject.to_string(),
            detail,
        })
    };

    let mut kinds: BTreeMap<&str, NodeKind> = BTreeMap::new();
    let ids = c
        .vertices
        .iter()
        .map(|v| (v.as_str(), NodeKind::Vertex))
        .chain(c.arrows.iter().map(|(a, _)| (a.as_str(), NodeKind::Arrow)));
    for (id, kind) in ids {
        if !is_valid_id(id) {
            push(Clause::Identity, id, "malformed node id".into());
        }
        if kinds.insert(id, kind).is_some() {
            push(Clause::I, id, "duplicate node id".into());
        }
    }

    let mut adj: BTreeMap<&str, BTreeMap<&str, &BigInt>> =
        kinds.keys().map(|k| (*k, BTreeMap::new())).collect();
    let mut edge_count = 0usize;
    for (a, b, qa, qb) in &c.edges {
        let label = Edge::new(a.clone(), b.clone()).to_string();
        if !kinds.contains_key(a.as_str()) || !kinds.contains_key(b.as_str()) {
            push(Clause::IV, &label, "edge endpoint is not a node".into());
            continue;
        }
        if a == b {
            push(Clause::I, &label, "loop".into());
            continue;
        }
        if adj[a.as_str()].contains_key(b.as_str()) {
            push(
                Clause::I,
                &label,
                "multiple edges between the same nodes".into(),
            );
            continue;
        }
        adj.get_mut(a.as_str()).expect("node").insert(b, qa);
        adj.get_mut(b.as_str()).expect("node").insert(a, qb);
        edge_count += 1;
    }

    let n = kinds.len();
    if n > 0 {
        let start = *kinds.keys().next().expect("nonempty");
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for y in adj[x].keys() {
                if seen.insert(*y) {
                    queue.push_back(*y);
                }
            }
        }
        if seen.len() != n {
            let stray = kinds.keys().find(|k| !seen.contains(*k)).expect("some");
            push(Clause::I, stray, "graph is not connected".into());
        } else if edge_count != n - 1 {
            push(Clause::I, start, "graph contains a cycle".into());
        }
    }

    for (id, kind) in &kinds {
        if *kind != NodeKind::Arrow {
            continue;
        }
        let deg = adj[id].len();
        if deg != 1 {
            push(
                Clause::II,
                id,
                format!("arrow has valency {deg}, expected 1"),
            );
        }
        for (other, near) in adj[id].iter() {
            if !near.is_one() {
                push(
                    Clause::V,
                    &Edge::new(*id, *other).to_string(),
                    format!("decoration near arrow `{id}` is {near}, expected 1"),
                );
            }
        }
    }

    for (id, kind) in &kinds {
        if *kind != NodeKind::Vertex {
            continue;
        }
        let decs: Vec<(&str, &BigInt)> = adj[id].iter().map(|(k, v)| (*k, *v)).collect();
        for i in 0..decs.len() {
            for j in (i + 1)..decs.len() {
                let g = decs[i].1.gcd(decs[j].1);
                if !g.is_one() {
                    push(
                        Clause::VI,
                        id,
                        format!(
                            "gcd of decorations {} (edge to `{}`) and {} (edge to `{}`) is {}",
                            decs[i].1, decs[i].0, decs[j].1, decs[j].0, g
                        ),
                    );
                }
            }
        }
    }

    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// A validated decorated tree. Immutable once built.
///
/// Equality compares ids and decorations exactly; use [`isomorphic`] to
/// compare up to renaming of nodes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecoratedTree {
    kinds: BTreeMap<NodeId, NodeKind>,
    f: BTreeMap<NodeId, BigInt>,
    adj: BTreeMap<NodeId, BTreeMap<NodeId, BigInt>>,
}

/// The unique simple path between two nodes, as a node sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    nodes: Vec<NodeId>,
}

impl Path {
    /// Builds a path from a node sequence. Adjacency is not checked here.
    pub fn from_nodes(nodes: Vec<NodeId>) -> Path {
        Path { nodes }
    }

    /// The nodes in order.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    /// Whether the path has no edge.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// First node.
    pub fn first(&self) -> &str {
        &self.nodes[0]
    }

    /// Last node.
    pub fn last(&self) -> &str {
        &self.nodes[self.nodes.len() - 1]
    }

    /// The consecutive edges.
    pub fn edges(&self) -> Vec<Edge> {
        self.nodes
            .windows(2)
            .map(|w| Edge::new(w[0].clone(), w[1].clone()))
            .collect()
    }

    /// Whether `e` is one of the edges.
    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.nodes
            .windows(2)
            .any(|w| e.contains(&w[0]) && e.contains(&w[1]))
    }

    /// The same path traversed backwards.
    pub fn reversed(&self) -> Path {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        Path { nodes }
    }
}

impl DecoratedTree {
    /// The empty tree.
    pub fn empty() -> DecoratedTree {
        DecoratedTree::default()
    }

    /// A candidate holding exactly this tree, with parts in canonical id order.
    pub fn to_builder(&self) -> TreeBuilder {
        let mut b = TreeBuilder::new();
        for v in self.vertices() {
            b.vertex(v.clone());
        }
        for (a, f) in self.arrows() {
            b.arrow(a.clone(), f.clone());
        }
        for e in self.edges() {
            let (x, y) = e.endpoints();
            b.edge(x, y, self.q_near(x, y).clone(), self.q_near(y, x).clone());
        }
        b
    }

    /// Whether there are no nodes.
    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    /// Number of vertices plus arrows.
    pub fn node_count(&self) -> usize {
        self.kinds.len()
    }

    /// Whether `x` is a node.
    pub fn contains(&self, x: &str) -> bool {
        self.kinds.contains_key(x)
    }

    /// Kind of `x`.
    pub fn kind(&self, x: &str) -> Result<NodeKind> {
        self.kinds
            .get(x)
            .copied()
            .ok_or_else(|| Error::UnknownNode(x.to_string()))
    }

    /// Whether `x` is a vertex (false for unknown ids).
    pub fn is_vertex(&self, x: &str) -> bool {
        self.kinds.get(x) == Some(&NodeKind::Vertex)
    }

    /// Whether `x` is an arrow (false for unknown ids).
    pub fn is_arrow(&self, x: &str) -> bool {
        self.kinds.get(x) == Some(&NodeKind::Arrow)
    }

    /// Whether `x` is an arrow decorated by 0.
    pub fn is_zero_arrow(&self, x: &str) -> bool {
        self.f.get(x).is_some_and(|f| f.is_zero())
    }

    /// Whether `x` is an arrow with nonzero decoration.
    pub fn is_nonzero_arrow(&self, x: &str) -> bool {
        self.f.get(x).is_some_and(|f| !f.is_zero())
    }

    /// Whether `x` is a vertex or a zero-decorated arrow.
    pub fn is_vertex_or_zero_arrow(&self, x: &str) -> bool {
        self.is_vertex(x) || self.is_zero_arrow(x)
    }

    /// Decoration `f` of arrow `x`.
    pub fn f(&self, x: &str) -> Result<&BigInt> {
        match self.kinds.get(x) {
            None => Err(Error::UnknownNode(x.to_string())),
            Some(NodeKind::Vertex) => Err(Error::pre("f", format!("`{x}` is a vertex"))),
            Some(NodeKind::Arrow) => Ok(&self.f[x]),
        }
    }

    /// All node ids in canonical order.
    pub fn nodes(&self) -> impl Iterator<Item = &NodeId> {
        self.kinds.keys()
    }

    /// All vertex ids in canonical order.
    pub fn vertices(&self) -> impl Iterator<Item = &NodeId> {
        self.kinds
            .iter()
            .filter(|(_, k)| **k == NodeKind::Vertex)
            .map(|(id, _)| id)
    }

    /// All arrows with their decorations, in canonical order.
    pub fn arrows(&self) -> impl Iterator<Item = (&NodeId, &BigInt)> {
        self.f.iter()
    }

    /// Arrows with nonzero decoration.
    pub fn nonzero_arrows(&self) -> impl Iterator<Item = &NodeId> {
        self.f
            .iter()
            .filter(|(_, f)| !f.is_zero())
            .map(|(id, _)| id)
    }

    /// Arrows decorated by 0.
    pub fn zero_arrows(&self) -> impl Iterator<Item = &NodeId> {
        self.f.iter().filter(|(_, f)| f.is_zero()).map(|(id, _)| id)
    }

    /// Vertices together with zero-decorated arrows.
    pub fn vertices_and_zero_arrows(&self) -> impl Iterator<Item = &NodeId> {
        self.kinds
            .keys()
            .filter(|id| self.is_vertex_or_zero_arrow(id))
    }

    /// Neighbours of `x` mapped to the decoration near `x` of the joining edge.
    pub fn neighbors(&self, x: &str) -> Result<&BTreeMap<NodeId, BigInt>> {
        self.adj
            .get(x)
            .ok_or_else(|| Error::UnknownNode(x.to_string()))
    }

    pub(crate) fn nbrs(&self, x: &str) -> &BTreeMap<NodeId, BigInt> {
        &self.adj[x]
    }

    /// Valency of `x`.
    pub fn valency(&self, x: &str) -> Result<usize> {
        Ok(self.neighbors(x)?.len())
    }

    pub(crate) fn deg(&self, x: &str) -> usize {
        self.adj[x].len()
    }

    /// Whether `x` and `y` are joined by an edge.
    pub fn has_edge(&self, x: &str, y: &str) -> bool {
        self.adj.get(x).is_some_and(|n| n.contains_key(y))
    }

    /// All edges in canonical order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for (x, nb) in &self.adj {
            for y in nb.keys() {
                if x < y {
                    out.push(Edge::new(x.clone(), y.clone()));
                }
            }
        }
        out
    }

    /// Checks that `e` is an edge of the tree.
    pub fn check_edge(&self, e: &Edge) -> Result<()> {
        let (x, y) = e.endpoints();
        if !self.contains(x) {
            return Err(Error::UnknownNode(x.to_string()));
        }
        if !self.contains(y) {
            return Err(Error::UnknownNode(y.to_string()));
        }
        if !self.has_edge(x, y) {
            return Err(Error::UnknownEdge(x.to_string(), y.to_string()));
        }
        Ok(())
    }

    /// Decoration of `e` near its endpoint `x`.
    pub fn q(&self, e: &Edge, x: &str) -> Result<&BigInt> {
        self.check_edge(e)?;
        let y = e
            .other(x)
            .ok_or_else(|| Error::pre("q", format!("`{x}` is not an endpoint of {e}")))?;
        Ok(&self.adj[x][y])
    }

    /// Decoration near `x` of the edge `{x,y}`. Panics if there is no such edge.
    pub(crate) fn q_near(&self, x: &str, y: &str) -> &BigInt {
        &self.adj[x][y]
    }

    /// Product of the decorations near `x` on the edges to neighbours not in `skip`.
    pub(crate) fn prod_near_except(&self, x: &str, skip: &[&str]) -> BigInt {
        let mut p = BigInt::one();
        for (y, q) in &self.adj[x] {
            if !skip.contains(&y.as_str()) {
                p *= q;
            }
        }
        p
    }

    /// The unique simple path from `x` to `y`. For `x == y` this is the path `(x)`.
    pub fn path(&self, x: &str, y: &str) -> Result<Path> {
        if !self.contains(x) {
            return Err(Error::UnknownNode(x.to_string()));
        }
        if !self.contains(y) {
            return Err(Error::UnknownNode(y.to_string()));
        }
        let parent = self.parents_from(y);
        let mut nodes = vec![x.to_string()];
        let mut cur = x;
        while cur != y {
            cur = parent[cur].as_deref().expect("tree is connected");
            nodes.push(cur.to_string());
        }
        Ok(Path { nodes })
    }

    /// For every node, its neighbour one step closer to `root` (`None` for the root).
    pub(crate) fn parents_from(&self, root: &str) -> BTreeMap<&str, Option<String>> {
        let mut parent: BTreeMap<&str, Option<String>> = BTreeMap::new();
        parent.insert(self.kinds.get_key_value(root).expect("node").0, None);
        let mut queue = VecDeque::from([root.to_string()]);
        while let Some(x) = queue.pop_front() {
            for y in self.adj[&x].keys() {
                if !parent.contains_key(y.as_str()) {
                    parent.insert(y.as_str(), Some(x.clone()));
                    queue.push_back(y.clone());
                }
            }
        }
        parent
    }

    /// Nodes reachable from `x` without crossing the edge `{x,y}`.
    pub fn side_of(&self, x: &str, y: &str) -> Result<BTreeSet<NodeId>> {
        self.check_edge(&Edge::new(x, y))?;
        Ok(self.side(x, y))
    }

    pub(crate) fn side(&self, x: &str, y: &str) -> BTreeSet<NodeId> {
        let mut seen = BTreeSet::from([x.to_string()]);
        let mut stack = vec![x.to_string()];
        while let Some(u) = stack.pop() {
            for w in self.adj[&u].keys() {
                if (u == x && w == y) || seen.contains(w) {
                    continue;
                }
                seen.insert(w.clone());
                stack.push(w.clone());
            }
        }
        seen
    }

    /// A node id not present in the tree: `base` itself, or `base~k` for the least `k >= 2`.
    pub fn fresh_id(&self, base: &str) -> NodeId {
        if !self.contains(base) {
            return base.to_string();
        }
        (2..)
            .map(|k| format!("{base}~{k}"))
            .find(|c| !self.contains(c))
            .expect("unbounded")
    }

    /// The subtree induced on `keep`, which must be connected.
    pub(crate) fn induced(&self, keep: &BTreeSet<NodeId>) -> DecoratedTree {
        let mut t = DecoratedTree::default();
        for id in keep {
            t.kinds.insert(id.clone(), self.kinds[id]);
            if let Some(f) = self.f.get(id) {
                t.f.insert(id.clone(), f.clone());
            }
            let nb = self.adj[id]
                .iter()
                .filter(|(y, _)| keep.contains(*y))
                .map(|(y, q)| (y.clone(), q.clone()))
                .collect();
            t.adj.insert(id.clone(), nb);
        }
        t
    }

    pub(crate) fn raw_add_vertex(&mut self, id: &str) {
        self.kinds.insert(id.to_string(), NodeKind::Vertex);
        self.adj.entry(id.to_string()).or_default();
    }

    pub(crate) fn raw_add_arrow(&mut self, id: &str, f: BigInt) {
        self.kinds.insert(id.to_string(), NodeKind::Arrow);
        self.f.insert(id.to_string(), f);
        self.adj.entry(id.to_string()).or_default();
    }

    pub(crate) fn raw_add_edge(&mut self, x: &str, y: &str, qx: BigInt, qy: BigInt) {
        self.adj.get_mut(x).expect("node").insert(y.to_string(), qx);
        self.adj.get_mut(y).expect("node").insert(x.to_string(), qy);
    }

    pub(crate) fn raw_set_q(&mut self, x: &str, y: &str, q: BigInt) {
        *self.adj.get_mut(x).expect("node").get_mut(y).expect("edge") = q;
    }

    pub(crate) fn raw_remove_edge(&mut self, x: &str, y: &str) {
        self.adj.get_mut(x).expect("node").remove(y);
        self.adj.get_mut(y).expect("node").remove(x);
    }

    pub(crate) fn raw_remove_node(&mut self, x: &str) {
        let nb: Vec<NodeId> = self.adj[x].keys().cloned().collect();
        for y in nb {
            self.adj.get_mut(&y).expect("node").remove(x);
        }
        self.adj.remove(x);
        self.kinds.remove(x);
        self.f.remove(x);
    }

    /// Re-runs validation on a tree assembled through the raw mutators.
    pub(crate) fn checked(self, op: &'static str) -> Result<DecoratedTree> {
        match validate(&self.to_builder()) {
            Ok(()) => Ok(self),
            Err(v) => Err(Error::Internal(format!(
                "{op} produced an invalid tree: {}",
                Error::Invalid(v)
            ))),
        }
    }
}

/// Nonnegative gcd with `gcd(a, 0) = |a|`.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// Canonical text key of the tree up to renaming of nodes.
///
/// With `root` given, the key describes the tree rooted there and two rooted
/// trees have equal keys iff an isomorphism maps root to root.
pub fn canonical_form(tree: &DecoratedTree, root: Option<&str>) -> String {
    fn key(t: &DecoratedTree, u: &str, parent: Option<&str>) -> String {
        let label = match t.kinds[u] {
            NodeKind::Vertex => "v".to_string(),
            NodeKind::Arrow => format!("a{}", t.f[u]),
        };
        let mut kids: Vec<String> = t.adj[u]
            .iter()
            .filter(|(c, _)| Some(c.as_str()) != parent)
            .map(|(c, q)| format!("<{},{}>{}", q, t.adj[c][u], key(t, c, Some(u))))
            .collect();
        kids.sort();
        format!("{label}[{}]", kids.concat())
    }
    match root {
        Some(r) if tree.contains(r) => format!("R{}", key(tree, r, None)),
        Some(_) => String::from("R?"),
        None => tree
            .nodes()
            .map(|r| key(tree, r, None))
            .min()
            .unwrap_or_default(),
    }
}

/// Whether two trees agree up to renaming of nodes (decorations included).
pub fn isomorphic(a: &DecoratedTree, b: &DecoratedTree) -> bool {
    a.node_count() == b.node_count() && canonical_form(a, None) == canonical_form(b, None)
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn picture1_is_valid_with_expected_valencies() {
        let t = picture1();
        assert_eq!(t.valency("v").unwrap(), 3);
        assert_eq!(t.valency("u").unwrap(), 1);
        assert_eq!(t.valency("a1").unwrap(), 1);
    }

    #[test]
    fn gcd_failure_is_reported_as_clause_vi() {
        let mut b = picture1().to_builder();
        b.edges.retain(|e| e.0 != "a2" && e.1 != "a2");
        b.edge("v", "a2", 3, 1);
        let errs = validate(&b).unwrap_err();
        assert!(errs
            .iter()
            .any(|v| v.clause == Clause::VI && v.subject == "v"));
    }

    #[test]
    fn lone_arrow_violates_clause_ii() {
        let errs = validate(TreeBuilder::new().arrow("a", 1)).unwrap_err();
        assert_eq!(errs[0].clause, Clause::II);
    }

    #[test]
    fn empty_and_single_vertex_are_valid() {
        assert!(TreeBuilder::new().build().unwrap().is_empty());
        let t = TreeBuilder::new().vertex("x").build().unwrap();
        assert_eq!(t.valency("x").unwrap(), 0);
    }

    #[test]
    fn cycle_and_disconnection_are_rejected() {
        let mut b = TreeBuilder::new();
        b.vertex("a").vertex("b").vertex("c");
        b.edge("a", "b", 1, 1).edge("b", "c", 1, 1);
        let mut cyc = b.clone();
        cyc.edge("c", "a", 1, 1);
        assert!(validate(&cyc).is_err());
        let mut dis = b.clone();
        dis.vertex("d");
        assert!(validate(&dis).is_err());
    }

    #[test]
    fn decoration_near_arrow_must_be_one() {
        let mut b = TreeBuilder::new();
        b.vertex("v").arrow("a", 1).edge("v", "a", 1, 2);
        assert_eq!(validate(&b).unwrap_err()[0].clause, Clause::V);
    }

    #[test]
    fn paths_are_unique_and_reversible() {
        let t = picture1();
        assert_eq!(t.path("u", "a1").unwrap().nodes(), ["u", "v", "a1"]);
        assert_eq!(t.path("a2", "a1").unwrap().nodes(), ["a2", "v", "a1"]);
        assert_eq!(t.path("u", "u").unwrap().nodes(), ["u"]);
        assert_eq!(
            t.path("a1", "u").unwrap(),
            t.path("u", "a1").unwrap().reversed()
        );
        assert!(matches!(t.path("u", "zz"), Err(Error::UnknownNode(_))));
    }

    #[test]
    fn canonical_form_ignores_ids() {
        let t = picture1();
        let r = TreeBuilder::new()
            .vertex("X")
            .vertex("Y")
            .arrow("p", 0)
            .arrow("q", 1)
            .edge("Y", "X", 3, -2)
            .edge("Y", "p", 2, 1)
            .edge("q", "Y", 1, 1)
            .build()
            .unwrap();
        assert!(isomorphic(&t, &r));
        let mut s = r.clone();
        s.raw_set_q("Y", "X", BigInt::from(5));
        assert!(!isomorphic(&t, &s));
    }
}
