//! Random generation of decorated trees and executable property suites.
//!
//! [`random_tree`] draws a valid tree (optionally rooted, with negative
//! determinants, or with restricted arrow decorations) from a seed.
//! [`run_suite`] checks one family of identities on many generated trees and
//! reports the first counterexample, shrunk and serialized as `.dtree` text.

pub mod reference;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::RangeInclusive;
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::genus::{
    branch_sum_formula_check, check_reversal, genus_formula_check, out_pair_table,
    phi_degree_table, reverse, reverse_with_order,
};
use crate::invariants::{
    correction_d, correction_d_singleton, correction_g, correction_g_singleton, correction_m,
    correction_m_singleton, det_edge, det_path, f_arrow, f_total, genus_delta, i_arrow, m_alpha,
    multiplicities, multiplicity, nonzero_arrow_set, pairing_i, path_big_q, path_q_end,
    ArrowSubset, BranchSums,
};
use crate::rooted::{
    central_set, degree, determinant_sign, is_connected_set, le, subtree_tx, Decomposition,
    RootedTree,
};
use crate::simplify::{apply, contract_det_zero, find_sites, normalize, Site};
use crate::split::{
    edz, en_type, ensplit_at_edge, ensplit_at_vertex, is_good_pair, split_at_edge, split_at_vertex,
    split_degree, SplitOutcome, TwoPrepartition,
};
use crate::textio::{parse, serialize, serialize_parsed, Parsed};
use crate::treecore::{
    canonical_form, gcd, isomorphic, validate, DecoratedTree, Edge, NodeId, TreeBuilder,
};

/// Constraints for [`random_tree`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    /// Seed of the ChaCha stream; equal parameters give equal trees.
    pub seed: u64,
    /// Upper bound on the number of nodes (at least 2).
    pub max_nodes: usize,
    /// Range of the decorations near vertices, before coprimality repair.
    pub decoration_range: RangeInclusive<i64>,
    /// Arrow decorations are drawn uniformly from this list; when `None` they
    /// are drawn from `decoration_range`.
    pub arrow_decoration_set: Option<Vec<i64>>,
    /// Plant a root `v0` and enforce the root clauses by construction.
    pub require_rooted: bool,
    /// With `require_rooted`, only enforce the pseudo-root clauses, so that
    /// decorations off the root paths may be zero or negative.
    pub allow_pseudo_root: bool,
    /// Adjust decorations until every edge joining two vertices has negative determinant.
    pub require_negative_determinants: bool,
    /// Clamp arrow decorations drawn from `decoration_range` to be nonnegative.
    pub force_f_nonnegative: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            max_nodes: 12,
            decoration_range: -5..=5,
            arrow_decoration_set: None,
            require_rooted: false,
            allow_pseudo_root: false,
            require_negative_determinants: false,
            force_f_nonnegative: false,
        }
    }
}

const GEN_ATTEMPTS: usize = 100;

/// The nearest integer to `x` of the same sign that is coprime to every
/// element of `others` (`0` is replaced by a positive integer).
fn nearest_coprime(x: i128, others: &[i128]) -> i128 {
    let ok = |c: i128| others.iter().all(|o| c.gcd(o) == 1);
    if ok(x) {
        return x;
    }
    let sign = if x < 0 { -1 } else { 1 };
    let mag = x.abs();
    for k in 1.. {
        for m in [mag - k, mag + k] {
            if m >= 1 && ok(sign * m) {
                return sign * m;
            }
        }
    }
    unreachable!("1 is coprime to everything")
}

/// Structure of a tree under construction. Nodes `0..nv` are vertices and
/// `nv..` are arrows; node 0 is the root of the traversal.
struct Draft {
    nv: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    f: Vec<i64>,
    /// Decoration near the node on the edge to its parent.
    up: Vec<i128>,
    /// Decoration near the parent on the edge to the node.
    down: Vec<i128>,
}

impl Draft {
    fn id(&self, i: usize) -> String {
        if i < self.nv {
            format!("v{i}")
        } else {
            format!("a{}", i - self.nv)
        }
    }

    /// Decorations near the vertex `w`, other than the one on the edge to `skip`.
    fn near_except(&self, w: usize, skip: Option<usize>) -> Vec<i128> {
        let mut out = Vec::new();
        if let Some(p) = self.parent[w] {
            if Some(p) != skip {
                out.push(self.up[w]);
            }
        }
        for &c in &self.children[w] {
            if Some(c) != skip {
                out.push(self.down[c]);
            }
        }
        out
    }

    fn product(xs: &[i128]) -> Option<i128> {
        xs.iter().try_fold(1i128, |acc, x| acc.checked_mul(*x))
    }
}

fn draw_f(rng: &mut ChaCha8Rng, p: &GenParams) -> i64 {
    match &p.arrow_decoration_set {
        Some(set) if !set.is_empty() => *set.choose(rng).expect("nonempty"),
        _ => {
            let (lo, hi) = (*p.decoration_range.start(), *p.decoration_range.end());
            let lo = if p.force_f_nonnegative { lo.max(0) } else { lo };
            rng.gen_range(lo..=hi.max(lo))
        }
    }
}

fn draw_decoration(rng: &mut ChaCha8Rng, p: &GenParams) -> i128 {
    let (lo, hi) = (*p.decoration_range.start(), *p.decoration_range.end());
    rng.gen_range(lo..=hi.max(lo)) as i128
}

fn attempt(rng: &mut ChaCha8Rng, p: &GenParams) -> Option<Draft> {
    let max = p.max_nodes.max(2);
    let n = rng.gen_range(2..=max);
    let nv = rng.gen_range(1..=n.div_ceil(2));
    let mut d = Draft {
        nv,
        parent: vec![None; n],
        children: vec![Vec::new(); n],
        f: vec![0; n],
        up: vec![1; n],
        down: vec![1; n],
    };
    for i in 1..n {
        let par = if i < nv {
            rng.gen_range(0..i)
        } else {
            rng.gen_range(0..nv)
        };
        d.parent[i] = Some(par);
        d.children[par].push(i);
    }
    for i in nv..n {
        d.f[i] = draw_f(rng, p);
    }
    if p.require_rooted {
        let (_, hi) = (*p.decoration_range.start(), *p.decoration_range.end());
        for w in 1..nv {
            d.up[w] = draw_decoration(rng, p);
        }
        for w in 0..nv {
            if w == 0 || d.children[w].is_empty() || rng.gen_bool(0.5) {
                continue;
            }
            let c = *d.children[w].choose(rng).expect("nonempty");
            let s = if p.allow_pseudo_root {
                draw_decoration(rng, p)
            } else {
                rng.gen_range(2..=hi.max(2)) as i128
            };
            d.down[c] = s;
        }
        for w in 1..nv {
            let others: Vec<i128> = d.children[w].iter().map(|&c| d.down[c]).collect();
            d.up[w] = nearest_coprime(d.up[w], &others);
        }
    } else {
        for i in 1..n {
            d.down[i] = draw_decoration(rng, p);
            if i < nv {
                d.up[i] = draw_decoration(rng, p);
            }
        }
        for w in 0..nv {
            let mut slots: Vec<Option<usize>> = d.children[w].iter().map(|&c| Some(c)).collect();
            if w != 0 {
                slots.push(None);
            }
            slots.shuffle(rng);
            let mut seen: Vec<i128> = Vec::new();
            for s in slots {
                let cur = match s {
                    Some(c) => &mut d.down[c],
                    None => &mut d.up[w],
                };
                *cur = nearest_coprime(*cur, &seen);
                seen.push(*cur);
            }
        }
    }
    if p.require_negative_determinants && !make_negative(rng, &mut d) {
        return None;
    }
    Some(d)
}

/// Adjusts, from the root outwards, the decoration near each vertex on the
/// edge to its parent until the determinant of that edge is negative.
fn make_negative(rng: &mut ChaCha8Rng, d: &mut Draft) -> bool {
    for w in 1..d.nv {
        let u = d.parent[w].expect("not the root");
        let c = d.down[w];
        let (Some(a), Some(b)) = (
            Draft::product(&d.near_except(u, Some(w))),
            Draft::product(&d.near_except(w, Some(u))),
        ) else {
            return false;
        };
        let Some(ab) = a.checked_mul(b) else {
            return false;
        };
        let others: Vec<i128> = d.children[w].iter().map(|&k| d.down[k]).collect();
        let holds = |x: i128| c.checked_mul(x).is_some_and(|cx| cx < ab);
        if holds(d.up[w]) {
            continue;
        }
        let slack = rng.gen_range(0..=2);
        let (mut x, step) = match c.signum() {
            0 => return false,
            1 => (Integer::div_floor(&(ab - 1), &c) - slack, -1),
            _ => (Integer::div_floor(&ab, &c) + 1 + slack, 1),
        };
        let mut tries = 0;
        while !(holds(x) && others.iter().all(|o| x.gcd(o) == 1)) {
            x += step;
            tries += 1;
            if tries > 10_000 {
                return false;
            }
        }
        d.up[w] = x;
    }
    true
}

fn build(d: &Draft, p: &GenParams) -> Result<Parsed> {
    let mut b = TreeBuilder::new();
    for i in 0..d.parent.len() {
        if i < d.nv {
            b.vertex(d.id(i));
        } else {
            b.arrow(d.id(i), d.f[i]);
        }
    }
    for (i, par) in d.parent.iter().enumerate() {
        if let Some(par) = par {
            b.edge(d.id(*par), d.id(i), d.down[i], d.up[i]);
        }
    }
    let tree = b.build()?;
    if !p.require_rooted {
        return Ok(Parsed::Plain(tree));
    }
    let rooted = if p.allow_pseudo_root {
        RootedTree::new(tree, "v0")?
    } else {
        RootedTree::new_root(tree, "v0")?
    };
    Ok(Parsed::Rooted(rooted))
}

/// Draws a random tree satisfying `params`, deterministically in the seed.
///
/// Decorations near each vertex are made pairwise coprime by replacing an
/// offending decoration with the nearest coprime integer of the same sign.
pub fn random_tree(params: &GenParams) -> Result<Parsed> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..GEN_ATTEMPTS {
        if let Some(d) = attempt(&mut rng, params) {
            return build(&d, params);
        }
    }
    Err(Error::pre(
        "random_tree",
        format!("constraints not met after {GEN_ATTEMPTS} attempts"),
    ))
}

/// Result of checking one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The identities hold.
    Pass,
    /// The instance does not satisfy the hypotheses of the suite.
    Skip,
    /// Some identity fails.
    Fail(String),
}

type Check = fn(&Parsed, &mut ChaCha8Rng) -> Result<Outcome>;

struct SuiteDef {
    name: &'static str,
    about: &'static str,
    params: fn() -> GenParams,
    check: Check,
}

macro_rules! expect {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Ok(Outcome::Fail(format!($($arg)+)));
        }
    };
}

fn general() -> GenParams {
    GenParams::default()
}

fn small() -> GenParams {
    GenParams {
        max_nodes: 8,
        ..GenParams::default()
    }
}

fn pseudo_rooted() -> GenParams {
    GenParams {
        require_rooted: true,
        allow_pseudo_root: true,
        ..GenParams::default()
    }
}

fn pseudo_rooted_unit() -> GenParams {
    GenParams {
        arrow_decoration_set: Some(vec![0, 1, 1]),
        ..pseudo_rooted()
    }
}

fn rooted() -> GenParams {
    GenParams {
        require_rooted: true,
        decoration_range: -6..=6,
        ..GenParams::default()
    }
}

fn rooted_unit() -> GenParams {
    GenParams {
        arrow_decoration_set: Some(vec![0, 1, 1]),
        ..rooted()
    }
}

fn rooted_mixed() -> GenParams {
    GenParams {
        arrow_decoration_set: Some(vec![-1, 0, 1, 1, 1, 2]),
        ..rooted()
    }
}

fn rooted_negative() -> GenParams {
    GenParams {
        require_negative_determinants: true,
        force_f_nonnegative: true,
        decoration_range: 0..=5,
        ..rooted()
    }
}

/// Largest splitting degree for which the split trees are built.
pub const SPLIT_DEGREE_CAP: u32 = 64;

const SUITES: &[SuiteDef] = &[
    SuiteDef {
        name: "parity",
        about: "M + F is even, so g and δ are integers",
        params: general,
        check: check_parity,
    },
    SuiteDef {
        name: "simplify-dead-end",
        about: "deleting a dead end with decoration 1 keeps M and F",
        params: general,
        check: check_simplify_dead_end,
    },
    SuiteDef {
        name: "simplify-pending",
        about: "deleting a pending vertex with decoration 1 keeps M and F",
        params: general,
        check: check_simplify_pending,
    },
    SuiteDef {
        name: "simplify-smooth",
        about: "removing a vertex of valency two keeps M and F",
        params: general,
        check: check_simplify_smooth,
    },
    SuiteDef {
        name: "simplify-contract",
        about: "contracting an edge of determinant zero keeps M and F",
        params: general,
        check: check_simplify_contract,
    },
    SuiteDef {
        name: "simplify-normalize",
        about: "normalization keeps M and F and is idempotent",
        params: general,
        check: check_normalize,
    },
    SuiteDef {
        name: "edz",
        about: "edz creates a determinant-zero edge, keeps every N and contracts back",
        params: general,
        check: check_edz,
    },
    SuiteDef {
        name: "split-edge",
        about: "splitting at a random edge: validity, M and F sums, determinants at z, good pairs, dead ends",
        params: general,
        check: check_split_edge,
    },
    SuiteDef {
        name: "split-vertex",
        about: "splitting at a vertex: validity, M and F sums, determinants at z, good pairs",
        params: general,
        check: check_split_vertex,
    },
    SuiteDef {
        name: "ensplit-edge",
        about: "EN-splitting at each edge: M and F sums with degree and type, parity",
        params: general,
        check: check_ensplit_edge,
    },
    SuiteDef {
        name: "ensplit-vertex",
        about: "EN-splitting at a vertex: M and F sums with degree and type, parity",
        params: general,
        check: check_ensplit_vertex,
    },
    SuiteDef {
        name: "edge-identity",
        about: "N_x = Q(e,x)p(x,e) + q(e,x)p(y,e) on every edge",
        params: general,
        check: check_edge_identity,
    },
    SuiteDef {
        name: "dead-end",
        about: "N_v = q N_α on dead ends; N_v = 0 forces q(e,v) | f(α)",
        params: general,
        check: check_dead_end,
    },
    SuiteDef {
        name: "linear-path",
        about: "the 2x2 determinant along a linear path equals det(γ)p(v,e)",
        params: general,
        check: check_linear_path,
    },
    SuiteDef {
        name: "arrow-sum",
        about: "the contributions M_α add up to M",
        params: general,
        check: check_arrow_sum,
    },
    SuiteDef {
        name: "pairing",
        about: "I is symmetric and additive over partitions",
        params: general,
        check: check_pairing,
    },
    SuiteDef {
        name: "subtree",
        about: "M(T) = M(T_X) for X all nonzero arrows; (T_X)_α = T_α",
        params: pseudo_rooted,
        check: check_subtree,
    },
    SuiteDef {
        name: "per-arrow",
        about: "M(T_α) - M_α(T) = I(α) when every nonzero arrow is decorated by 1",
        params: pseudo_rooted_unit,
        check: check_per_arrow,
    },
    SuiteDef {
        name: "decomposition-unit",
        about: "M, δ and g decompositions with no corrections when every nonzero arrow is decorated by 1",
        params: pseudo_rooted_unit,
        check: check_decomposition_unit,
    },
    SuiteDef {
        name: "decomposition",
        about: "M, δ and g decompositions with corrections over random partitions",
        params: pseudo_rooted,
        check: check_decomposition,
    },
    SuiteDef {
        name: "central",
        about: "the set of central elements is connected and contains a root",
        params: pseudo_rooted,
        check: check_central,
    },
    SuiteDef {
        name: "path-sign",
        about: "negative determinants: comparable vertices give negative path determinants and the 2x2 inequality",
        params: rooted_negative,
        check: check_path_sign,
    },
    SuiteDef {
        name: "nonnegative-connected",
        about: "negative determinants: N is monotone along the order and its sign sets are connected",
        params: rooted_negative,
        check: check_nonnegative_connected,
    },
    SuiteDef {
        name: "branch-formula",
        about: "p(x,e) = 1 + Σ φ(x,y)(δ_y - 2) on out-pairs when f takes values in {0,1}",
        params: rooted_unit,
        check: check_branch_formula,
    },
    SuiteDef {
        name: "branch-formula-converse",
        about: "if the out-pair formula holds everywhere then f takes values in {0,1}",
        params: rooted_mixed,
        check: check_branch_formula_converse,
    },
    SuiteDef {
        name: "reversal",
        about: "reversal keeps the untouched decorations, negates determinants, divides, and ignores visiting order",
        params: pseudo_rooted,
        check: check_reversal_suite,
    },
    SuiteDef {
        name: "root-decomposition",
        about: "N_x + N_x^(i) = φ(v0,x) deg(T) at every node",
        params: rooted,
        check: check_root_decomposition,
    },
    SuiteDef {
        name: "genus-formula",
        about: "g = (d-1)(d-2)/2 - Σ δ(T_i) when f takes values in {0,1}",
        params: rooted_unit,
        check: check_genus_formula,
    },
    SuiteDef {
        name: "oracle",
        about: "N, M, F, p and det agree with the naive reference evaluator",
        params: small,
        check: check_oracle,
    },
    SuiteDef {
        name: "round-trip",
        about: "parse and serialize are inverse to each other",
        params: general,
        check: check_round_trip,
    },
];

/// Names of all suites, in a fixed order.
pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// One-line description of a suite.
pub fn suite_description(name: &str) -> Option<&'static str> {
    find(name).map(|s| s.about)
}

/// The generator parameters a suite uses by default, with the given seed.
pub fn default_params(name: &str, seed: u64) -> Option<GenParams> {
    find(name).map(|s| GenParams {
        seed,
        ..(s.params)()
    })
}

fn find(name: &str) -> Option<&'static SuiteDef> {
    SUITES.iter().find(|s| s.name == name)
}

/// What a suite run found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    /// Suite name.
    pub suite: String,
    /// Base seed.
    pub seed: u64,
    /// Requested number of checked instances.
    pub count: usize,
    /// Trees drawn.
    pub generated: usize,
    /// Trees on which the identities were evaluated.
    pub checked: usize,
    /// Trees outside the hypotheses of the suite.
    pub skipped: usize,
    /// Seeds for which the generator gave up.
    pub rejected: usize,
    /// Checked trees on which some identity failed.
    pub failures: usize,
    /// The first failing tree after shrinking, as `.dtree` text.
    pub first_counterexample: Option<String>,
    /// What failed on that tree.
    pub first_failure: Option<String>,
}

impl Report {
    /// Whether the requested number of instances was checked with no failure.
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checked >= self.count
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite: {}", self.suite)?;
        writeln!(f, "seed: {}", self.seed)?;
        writeln!(f, "count: {}", self.count)?;
        writeln!(f, "generated: {}", self.generated)?;
        writeln!(f, "checked: {}", self.checked)?;
        writeln!(f, "skipped: {}", self.skipped)?;
        writeln!(f, "rejected: {}", self.rejected)?;
        writeln!(f, "failures: {}", self.failures)?;
        match &self.first_failure {
            Some(m) => writeln!(f, "first_failure: {m}")?,
            None => writeln!(f, "first_failure: none")?,
        }
        match &self.first_counterexample {
            Some(t) => {
                writeln!(f, "first_counterexample: |")?;
                for line in t.lines() {
                    writeln!(f, "  {line}")?;
                }
            }
            None => writeln!(f, "first_counterexample: none")?,
        }
        Ok(())
    }
}

/// Seed of the `i`-th instance of a run with base seed `seed`.
fn instance_seed(seed: u64, i: usize) -> u64 {
    let mut z = seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn run_check(def: &SuiteDef, p: &Parsed, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match catch_unwind(AssertUnwindSafe(|| (def.check)(p, &mut rng))) {
        Ok(Ok(o)) => o,
        Ok(Err(e)) => Outcome::Fail(format!("unexpected error: {e}")),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome::Fail(format!("panic: {msg}"))
        }
    }
}

enum Slot {
    Rejected,
    Done(Outcome),
}

fn run_one(def: &SuiteDef, params: &GenParams, i: usize) -> (Slot, Option<Parsed>) {
    let seed = instance_seed(params.seed, i);
    let gp = GenParams {
        seed,
        ..params.clone()
    };
    match random_tree(&gp) {
        Err(_) => (Slot::Rejected, None),
        Ok(p) => {
            let o = run_check(def, &p, seed);
            let keep = matches!(o, Outcome::Fail(_)).then_some(p);
            (Slot::Done(o), keep)
        }
    }
}

const BLOCK: usize = 512;
const MAX_DRAWS_PER_CHECK: usize = 50;

/// Checks the identities of suite `name` on `count` generated trees that satisfy
/// its hypotheses, drawing at most `50 * count` trees.
pub fn run_suite(name: &str, params: &GenParams, count: usize) -> Result<Report> {
    let def =
        find(name).ok_or_else(|| Error::pre("run_suite", format!("unknown suite `{name}`")))?;
    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .clamp(1, 16);
    let mut report = Report {
        suite: name.to_string(),
        seed: params.seed,
        count,
        generated: 0,
        checked: 0,
        skipped: 0,
        rejected: 0,
        failures: 0,
        first_counterexample: None,
        first_failure: None,
    };
    let mut first: Option<(usize, Parsed, String)> = None;
    let limit = count.saturating_mul(MAX_DRAWS_PER_CHECK);
    let mut start = 0;
    'blocks: while report.checked < count && start < limit {
        let end = (start + BLOCK).min(limit);
        let idx: Vec<usize> = (start..end).collect();
        let chunk = idx.len().div_ceil(threads);
        let mut results: Vec<(usize, Slot, Option<Parsed>)> = std::thread::scope(|s| {
            let handles: Vec<_> = idx
                .chunks(chunk.max(1))
                .map(|c| {
                    s.spawn(move || {
                        c.iter()
                            .map(|&i| {
                                let (slot, p) = run_one(def, params, i);
                                (i, slot, p)
                            })
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("worker"))
                .collect()
        });
        results.sort_by_key(|r| r.0);
        for (i, slot, p) in results {
            report.generated += 1;
            match slot {
                Slot::Rejected => report.rejected += 1,
                Slot::Done(Outcome::Skip) => report.skipped += 1,
                Slot::Done(Outcome::Pass) => report.checked += 1,
                Slot::Done(Outcome::Fail(msg)) => {
                    report.checked += 1;
                    report.failures += 1;
                    if first.is_none() {
                        first = Some((i, p.expect("kept on failure"), msg));
                    }
                }
            }
            if report.checked >= count {
                break 'blocks;
            }
        }
        start = end;
    }
    if let Some((i, p, msg)) = first {
        let seed = instance_seed(params.seed, i);
        let small = shrink(def, p, seed);
        let msg = match run_check(def, &small, seed) {
            Outcome::Fail(m) => m,
            _ => msg,
        };
        report.first_counterexample = Some(serialize_parsed(&small));
        report.first_failure = Some(msg);
    }
    Ok(report)
}

/// Runs a suite with its default parameters.
pub fn run_default(name: &str, seed: u64, count: usize) -> Result<Report> {
    let params = default_params(name, seed)
        .ok_or_else(|| Error::pre("run_suite", format!("unknown suite `{name}`")))?;
    run_suite(name, &params, count)
}

fn rewrap(p: &Parsed, tree: DecoratedTree) -> Option<Parsed> {
    match p.rooted() {
        None => Some(Parsed::Plain(tree)),
        Some(r) => {
            if !tree.contains(r.root()) || !tree.is_vertex(r.root()) {
                return None;
            }
            let out = if r.is_root() {
                RootedTree::new_root(tree, r.root())
            } else {
                RootedTree::new(tree, r.root())
            };
            out.ok().map(Parsed::Rooted)
        }
    }
}

fn shrink_candidates(p: &Parsed) -> Vec<Parsed> {
    let tree = p.tree();
    let root = p.rooted().map(|r| r.root().to_string());
    let mut out = Vec::new();
    for e in tree.edges() {
        let (a, b) = e.endpoints();
        for (keep, cut) in [(a, b), (b, a)] {
            let side = tree.side(keep, cut);
            if root.as_ref().is_some_and(|r| !side.contains(r)) {
                continue;
            }
            if let Ok(t) = tree.induced(&side).checked("shrink") {
                out.extend(rewrap(p, t));
            }
        }
    }
    for site in find_sites(tree) {
        if let Ok(t) = apply(tree, &site) {
            out.extend(rewrap(p, t));
        }
    }
    out.sort_by_key(|c| c.tree().node_count());
    out
}

/// Repeatedly replaces the failing tree by a smaller one that still fails.
fn shrink(def: &SuiteDef, p: Parsed, seed: u64) -> Parsed {
    let mut cur = p;
    'outer: for _ in 0..200 {
        for cand in shrink_candidates(&cur) {
            if matches!(run_check(def, &cand, seed), Outcome::Fail(_)) {
                cur = cand;
                continue 'outer;
            }
        }
        break;
    }
    cur
}

fn random_prepartition(
    tree: &DecoratedTree,
    v: &str,
    rng: &mut ChaCha8Rng,
) -> Result<TwoPrepartition> {
    let first: Vec<NodeId> = tree
        .neighbors(v)?
        .keys()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect();
    TwoPrepartition::with_first(tree, v, first)
}

fn random_vertex(tree: &DecoratedTree, rng: &mut ChaCha8Rng) -> Option<NodeId> {
    let vs: Vec<&NodeId> = tree.vertices().collect();
    vs.choose(rng).map(|v| (*v).clone())
}

/// Stirling numbers of the second kind `S(i,k)` for `i <= n`, `k <= 4`.
fn stirling_table(n: usize) -> Vec<[u128; 5]> {
    let mut s = vec![[0u128; 5]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for k in 1..=4 {
            s[i][k] = s[i - 1][k - 1] + k as u128 * s[i - 1][k];
        }
    }
    s
}

/// A uniformly random set partition of `set` into at most four nonempty blocks.
fn random_partition(set: &ArrowSubset, rng: &mut ChaCha8Rng) -> Vec<ArrowSubset> {
    let items: Vec<&NodeId> = set.iter().collect();
    let n = items.len();
    if n == 0 {
        return Vec::new();
    }
    let s = stirling_table(n);
    let total: u128 = (1..=4).map(|k| s[n][k]).sum();
    let mut pick = rng.gen_range(0..total);
    let mut k = 1;
    while pick >= s[n][k] {
        pick -= s[n][k];
        k += 1;
    }
    // Element i either opens a new block or joins one of the k blocks of a
    // partition of the first i elements, weighted by the number of completions.
    let mut label = vec![0usize; n];
    for i in (0..n).rev() {
        let alone = if k >= 1 { s[i][k - 1] } else { 0 };
        let joined = k as u128 * s[i][k];
        if rng.gen_range(0..alone + joined) < alone {
            k -= 1;
            label[i] = usize::MAX - k;
        } else {
            label[i] = rng.gen_range(0..k);
        }
    }
    // Blocks opened by a singleton step are numbered by the remaining count k
    // at that moment, which is the block index for elements below them.
    let mut blocks: BTreeMap<usize, ArrowSubset> = BTreeMap::new();
    for (i, a) in items.iter().enumerate() {
        let b = if label[i] > usize::MAX / 2 {
            usize::MAX - label[i]
        } else {
            label[i]
        };
        blocks.entry(b).or_default().insert((*a).clone());
    }
    blocks.into_values().collect()
}

fn check_parity(p: &Parsed, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let (m, f) = (multiplicity(t), f_total(t));
    expect!((&m + &f).is_even(), "M + F = {m} + {f} is odd");
    genus_delta(t)?;
    Ok(Outcome::Pass)
}

fn mf(t: &DecoratedTree) -> (BigInt, BigInt) {
    (multiplicity(t), f_total(t))
}

fn sites_preserve(aug: &DecoratedTree, pick: fn(&Site) -> bool) -> Result<Outcome> {
    let before = mf(aug);
    let sites: Vec<Site> = find_sites(aug).into_iter().filter(pick).collect();
    expect!(!sites.is_empty(), "no site of the rule after augmentation");
    for s in sites {
        let after = apply(aug, &s)?;
        let now = mf(&after);
        expect!(
            now == before,
            "{s:?}: (M, F) changed from {before:?} to {now:?}"
        );
    }
    Ok(Outcome::Pass)
}

fn check_simplify_dead_end(p: &Parsed, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let Some(v) = random_vertex(t, rng) else {
        return Ok(Outcome::Skip);
    };
    let mut aug = t.clone();
    let z = t.fresh_id("z");
    aug.raw_add_arrow(&z, BigInt::zero());
    aug.raw_add_edge(&v, &z, BigInt::one(), BigInt::one());
    let aug = aug.checked("augment")?;
    sites_preserve(&aug, |s| matches!(s, Site::DeadEnd { .. }))
}

fn check_simplify_pending(p: &Parsed, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let Some(v) = random_vertex(t, rng) else {
        return Ok(Outcome::Skip);
    };
    let mut aug = t.clone();
    let s = t.fresh_id("t");
    aug.raw_add_vertex(&s);
    let far = BigInt::from(rng.gen_range(-6..=6));
    aug.raw_add_edge(&v, &s, BigInt::one(), far);
    let aug = aug.checked("augment")?;
    sites_preserve(&aug, |s| matches!(s, Site::Pending { .. }))
}

fn check_simplify_smooth(p: &Parsed, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let edges = t.edges();
    let Some(e) = edges.choose(rng) else {
        return Ok(Outcome::Skip);
    };
    let (a, b) = e.endpoints();
    let mut aug = t.clone();
    let s = t.fresh_id("s");
    let x: i64 = rng.gen_range(-6..=6);
    let y = nearest_coprime(rng.gen_range(-6..=6), &[x as i128]);
    aug.raw_remove_edge(a, b);
    aug.raw_add_vertex(&s);
    aug.raw_add_edge(a, &s, t.q_near(a, b).clone(), BigInt::from(x));
    aug.raw_add_edge(b, &s, t.q_near(b, a).clone(), BigInt::from(y));
    let aug = aug.checked("augment")?;
    sites_preserve(&aug, |s| matches!(s, Site::Smooth { .. }))
}

fn check_simplify_contract(p: &Parsed, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let Some(v) = random_vertex(t, rng) else {
        return Ok(Outcome::Skip);
    };
    let parts = random_prepartition(t, &v, rng)?;
    let aug = edz(t, &v, &parts)?.tree;
    sites_preserve(&aug, |s| matches!(s, Site::Contract { .. }))
}

fn check_normalize(p: &Parsed, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let n = normalize(t);
    expect!(mf(&n) == mf(t), "normalize changed (M, F)");
    expect!(find_sites(&n).is_empty(), "normal form still has a site");
    expect!(normalize(&n) == n, "normalize is not idempotent");
    Ok(Outcome::Pass)
}

fn check_edz(p: &Parsed, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let Some(v) = random_vertex(t, rng) else {
        return Ok(Outcome::Skip);
    };
    let parts = random_prepartition(t, &v, rng)?;
    let z = edz(t, &v, &parts)?;
    expect!(
        det_edge(&z.tree, &z.edge())?.is_zero(),
        "new edge has nonzero determinant"
    );
    let (n0, n1) = (multiplicities(t), multiplicities(&z.tree));
    for (x, nx) in &n0 {
        if x == &v {
            expect!(
                n1[&z.v1] == *nx && n1[&z.v2] == *nx,
                "N at the new vertices differs from N_{v} = {nx}"
            );
        } else {
            expect!(n1[x] == *nx, "N_{x} changed from {nx} to {}", n1[x]);
        }
    }
    expect!(mf(&z.tree) == mf(t), "edz changed (M, F)");
    let back = contract_det_zero(&z.tree, &z.v1, &z.v2)?;
    expect!(
        isomorphic(&back, t),
        "contraction does not give back the tree"
    );
    Ok(Outcome::Pass)
}

fn exact_quotient(a: &BigInt, b: &BigInt) -> Option<BigInt> {
    let (q, r) = a.div_rem(b);
    (r.is_zero() && !b.is_zero()).then_some(q)
}

fn split_sums(t: &DecoratedTree, s: &SplitOutcome) -> Result<Outcome> {
    for part in [&s.t1, &s.t2] {
        expect!(
            validate(&part.to_builder()).is_ok(),
            "a split tree is invalid"
        );
    }
    let (m, f) = mf(t);
    let (m1, f1) = mf(&s.t1);
    let (m2, f2) = mf(&s.t2);
    let d = &s.degree;
    match s.kind {
        None => {
            expect!(&m1 + &m2 == m, "M1 + M2 = {} but M = {m}", &m1 + &m2);
            expect!(
                &f1 + &f2 == &f + 2 * d,
                "F1 + F2 = {} but F + 2d = {}",
                &f1 + &f2,
                &f + 2 * d
            );
            for (tree, v, w) in [(&s.t1, &s.v1, &s.w1), (&s.t2, &s.v2, &s.w2)] {
                let r = is_good_pair(tree, w, v)?;
                expect!(r.good, "({w},{v}) is not a good pair: {:?}", r.failures);
            }
        }
        Some(kind) => {
            let t8 = BigInt::from(kind);
            let abs = BigInt::from(kind.abs());
            expect!(
                &m1 + &m2 == &m + &t8 * d,
                "M1 + M2 = {} but M + td = {}",
                &m1 + &m2,
                &m + &t8 * d
            );
            expect!(
                &f1 + &f2 == &f + (2 - &abs) * d,
                "F1 + F2 = {} but F + (2-|t|)d = {}",
                &f1 + &f2,
                &f + (2 - &abs) * d
            );
            expect!(
                (&m + &f - &m1 - &f1 - &m2 - &f2).is_even(),
                "parity of M + F is not additive"
            );
            let (p1, p2) = (s.t1.f(&s.w1)?, s.t2.f(&s.w2)?);
            expect!(
                en_type(p1, p2) == kind,
                "type {kind} does not match the new arrows"
            );
            expect!(gcd(p1, p2) == *d, "degree {d} is not gcd({p1}, {p2})");
        }
    }
    Ok(Outcome::Pass)
}

fn check_split_edge(p: &Parsed, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let n = multiplicities(t);
    let edges = t.edges();
    let Some(e) = edges.choose(rng).cloned() else {
        return Ok(Outcome::Skip);
    };
    let d = split_degree(t, &e)?;
    if d > BigInt::from(SPLIT_DEGREE_CAP) {
        return Ok(Outcome::Skip);
    }
    let s = split_at_edge(t, &e)?;
    if let o @ Outcome::Fail(_) = split_sums(t, &s)? {
        return Ok(o);
    }
    let (a, b) = e.endpoints();
    if !d.is_zero() && t.is_vertex(a) && t.is_vertex(b) {
        for (tree, v, z) in [(&s.t1, &s.v1, &s.w1), (&s.t2, &s.v2, &s.w2)] {
            let det = det_edge(tree, &Edge::new(v.as_str(), z.as_str()))?;
            let want = exact_quotient(&-n[v].clone(), &d);
            expect!(
                Some(&det) == want.as_ref(),
                "det{{{v},{z}}} = {det}, N_{v} = {}, d = {d}",
                n[v]
            );
        }
    }
    for (v, alpha) in [(a, b), (b, a)] {
        if !(t.is_vertex(v) && t.is_zero_arrow(alpha)) {
            continue;
        }
        let q = t.q_near(v, alpha);
        if q.is_zero() || n[v].is_zero() {
            continue;
        }
        let Some(ratio) = exact_quotient(&n[v], q) else {
            return Ok(Outcome::Fail(format!(
                "q(e,{v}) = {q} does not divide N_{v} = {}",
                n[v]
            )));
        };
        let side = if s.t1.contains(alpha) { &s.t1 } else { &s.t2 };
        expect!(
            multiplicity(side) == ratio,
            "dead-end split: M = {} but N_v/a = {ratio}",
            multiplicity(side)
        );
        expect!(
            f_total(side) == ratio.abs(),
            "dead-end split: F = {} but |N_v/a| = {}",
            f_total(side),
            ratio.abs()
        );
        expect!(
            d == ratio.abs(),
            "dead-end split: d = {d} but |N_v/a| = {}",
            ratio.abs()
        );
    }
    Ok(Outcome::Pass)
}

fn check_split_vertex(p: &Parsed, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let Some(v) = random_vertex(t, rng) else {
        return Ok(Outcome::Skip);
    };
    let parts = random_prepartition(t, &v, rng)?;
    let z = edz(t, &v, &parts)?;
    let d = split_degree(&z.tree, &z.edge())?;
    if d > BigInt::from(SPLIT_DEGREE_CAP) {
        return Ok(Outcome::Skip);
    }
    let s = split_at_vertex(t, &v, &parts)?;
    if let o @ Outcome::Fail(_) = split_sums(t, &s)? {
        return Ok(o);
    }
    if !d.is_zero() {
        let nv = multiplicities(t)[&v].clone();
        let want = exact_quotient(&-nv.clone(), &d);
        for (tree, vi, zi) in [(&s.t1, &s.v1, &s.w1), (&s.t2, &s.v2, &s.w2)] {
            let det = det_edge(tree, &Edge::new(vi.as_str(), zi.as_str()))?;
            expect!(
                Some(&det) == want.as_ref(),
                "det{{{vi},{zi}}} = {det}, N_{v} = {nv}, d = {d}"
            );
        }
    }
    Ok(Outcome::Pass)
}

fn check_ensplit_edge(p: &Parsed, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    for e in t.edges() {
        let s = ensplit_at_edge(t, &e)?;
        if let o @ Outcome::Fail(_) = split_sums(t, &s)? {
            return Ok(o);
        }
    }
    Ok(Outcome::Pass)
}

fn check_ensplit_vertex(p: &Parsed, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let Some(v) = random_vertex(t, rng) else {
        return Ok(Outcome::Skip);
    };
    let parts = random_prepartition(t, &v, rng)?;
    let s = ensplit_at_vertex(t, &v, &parts)?;
    split_sums(t, &s)
}

fn check_edge_identity(p: &Parsed, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let n = multiplicities(t);
    let ps = BranchSums::compute(t);
    for e in t.edges() {
        let (a, b) = e.endpoints();
        for (x, y) in [(a, b), (b, a)] {
            if !t.is_vertex_or_zero_arrow(x) {
                continue;
            }
            let rhs = t.prod_near_except(x, &[y]) * ps.at(x, y) + t.q_near(x, y) * ps.at(y, x);
            expect!(
                n[x] == rhs,
                "N_{x} = {} but Q p + q p* = {rhs} on {e}",
                n[x]
            );
        }
    }
    Ok(Outcome::Pass)
}

fn check_dead_end(p: &Parsed, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let n = multiplicities(t);
    for e in t.edges() {
        let (a, b) = e.endpoints();
        for (v, alpha) in [(a, b), (b, a)] {
            if !t.is_vertex(v) {
                continue;
            }
            let q = t.q_near(v, alpha);
            if t.is_zero_arrow(alpha) {
                expect!(
                    n[v] == q * &n[alpha],
                    "N_{v} = {} but q N_alpha = {}",
                    n[v],
                    q * &n[alpha]
                );
            } else if t.is_nonzero_arrow(alpha) && n[v].is_zero() {
                let f = t.f(alpha)?;
                expect!(
                    !q.is_zero() && f.is_multiple_of(q),
                    "N_{v} = 0 but q = {q} does not divide f = {f}"
                );
            }
        }
    }
    Ok(Outcome::Pass)
}

fn linear_pairs(t: &DecoratedTree) -> Vec<(NodeId, NodeId)> {
    let nodes: Vec<&NodeId> = t.vertices_and_zero_arrows().collect();
    let mut out = Vec::new();
    for v in &nodes {
        for w in &nodes {
            if v != w && crate::invariants::is_linear(t, &t.path(v, w).expect("connected")) {
                out.push(((*v).clone(), (*w).clone()));
            }
        }
    }
    out
}

fn two_by_two(
    t: &DecoratedTree,
    n: &BTreeMap<NodeId, BigInt>,
    v: &str,
    w: &str,
) -> Result<(BigInt, BigInt, BigInt)> {
    let path = t.path(v, w)?;
    let q = path_q_end(t, &path, v)?;
    let big_q = path_big_q(t, &path, w)?;
    Ok((&q * &n[w] - &big_q * &n[v], q, big_q))
}

fn check_linear_path(p: &Parsed, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let n = multiplicities(t);
    let ps = BranchSums::compute(t);
    for (v, w) in linear_pairs(t) {
        let path = t.path(&v, &w)?;
        let (lhs, _, _) = two_by_two(t, &n, &v, &w)?;
        let rhs = det_path(t, &path)? * ps.at(&v, &path.nodes()[1]);
        expect!(
            lhs == rhs,
            "path {v}..{w}: determinant {lhs} but det(γ)p = {rhs}"
        );
    }
    Ok(Outcome::Pass)
}

fn check_arrow_sum(p: &Parsed, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let mut s = BigInt::zero();
    for a in t.nonzero_arrows() {
        s += m_alpha(t, a)?;
    }
    expect!(
        s == multiplicity(t),
        "Σ M_α = {s} but M = {}",
        multiplicity(t)
    );
    Ok(Outcome::Pass)
}

fn check_pairing(p: &Parsed, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let all = nonzero_arrow_set(t);
    if all.is_empty() {
        return Ok(Outcome::Skip);
    }
    let blocks = random_partition(&all, rng);
    let mut sum = BigInt::zero();
    for x in &blocks {
        for y in &blocks {
            let ixy = pairing_i(t, x, y)?;
            expect!(ixy == pairing_i(t, y, x)?, "I is not symmetric");
            sum += ixy;
        }
    }
    expect!(
        sum == pairing_i(t, &all, &all)?,
        "I is not additive over the partition"
    );
    if blocks.len() >= 2 {
        let (x, y) = (&blocks[0], &blocks[1]);
        let u: ArrowSubset = x.union(y).cloned().collect();
        let lhs = pairing_i(t, &u, &u)?;
        let rhs = pairing_i(t, x, x)? + 2 * pairing_i(t, x, y)? + pairing_i(t, y, y)?;
        expect!(lhs == rhs, "I(X∪Y, X∪Y) = {lhs} but expansion gives {rhs}");
    }
    Ok(Outcome::Pass)
}

fn rooted_or_skip(p: &Parsed) -> Option<&RootedTree> {
    p.rooted()
}

fn check_subtree(p: &Parsed, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let Some(r) = rooted_or_skip(p) else {
        return Ok(Outcome::Skip);
    };
    let t = r.tree();
    let all = nonzero_arrow_set(t);
    if all.is_empty() {
        return Ok(Outcome::Skip);
    }
    let whole = subtree_tx(r, &all)?;
    expect!(
        multiplicity(whole.tree()) == multiplicity(t),
        "M(T_X) differs from M(T) for X = all nonzero arrows"
    );
    let x = random_partition(&all, rng).swap_remove(0);
    let tx = subtree_tx(r, &x)?;
    for a in &x {
        let one = ArrowSubset::from([a.clone()]);
        let nested = subtree_tx(&tx, &one)?;
        let direct = subtree_tx(r, &one)?;
        expect!(
            canonical_form(nested.tree(), Some(nested.root()))
                == canonical_form(direct.tree(), Some(direct.root())),
            "(T_X)_{a} differs from T_{a}"
        );
    }
    Ok(Outcome::Pass)
}

fn check_per_arrow(p: &Parsed, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let Some(r) = rooted_or_skip(p) else {
        return Ok(Outcome::Skip);
    };
    let t = r.tree();
    if t.nonzero_arrows()
        .any(|a| !t.f(a).map(One::is_one).unwrap_or(false))
    {
        return Ok(Outcome::Skip);
    }
    for a in t.nonzero_arrows() {
        let ta = subtree_tx(r, &ArrowSubset::from([a.clone()]))?;
        let lhs = multiplicity(ta.tree()) - m_alpha(t, a)?;
        let rhs = i_arrow(t, a)?;
        expect!(
            lhs == rhs,
            "M(T_α) - M_α = {lhs} but I(α) = {rhs} for α = {a}"
        );
    }
    Ok(Outcome::Pass)
}

fn balances(dec: &Decomposition) -> Option<String> {
    let (m, mr) = dec.m_balance();
    if m != mr {
        return Some(format!("M = {m} but the decomposition gives {mr}"));
    }
    let (d, dr) = dec.delta_balance();
    if d != dr {
        return Some(format!("δ = {d} but the decomposition gives {dr}"));
    }
    let (g, gr) = dec.genus_balance();
    if g != gr {
        return Some(format!("g - 1 = {g} but the decomposition gives {gr}"));
    }
    None
}

fn check_decomposition_unit(p: &Parsed, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let Some(r) = rooted_or_skip(p) else {
        return Ok(Outcome::Skip);
    };
    let t = r.tree();
    let all = nonzero_arrow_set(t);
    if all.is_empty()
        || all
            .iter()
            .any(|a| !t.f(a).map(One::is_one).unwrap_or(false))
    {
        return Ok(Outcome::Skip);
    }
    let dec = Decomposition::compute(r, &random_partition(&all, rng))?;
    for b in &dec.blocks {
        expect!(
            b.corr_m.is_zero() && b.corr_d.is_zero() && b.corr_g.is_zero(),
            "nonzero correction for a block of arrows decorated by 1"
        );
    }
    if let Some(msg) = balances(&dec) {
        return Ok(Outcome::Fail(msg));
    }
    Ok(Outcome::Pass)
}

fn check_decomposition(p: &Parsed, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let Some(r) = rooted_or_skip(p) else {
        return Ok(Outcome::Skip);
    };
    let t = r.tree();
    let all = nonzero_arrow_set(t);
    if all.is_empty() {
        return Ok(Outcome::Skip);
    }
    let dec = Decomposition::compute(r, &random_partition(&all, rng))?;
    for b in &dec.blocks {
        expect!(&b.corr_d + &b.corr_g == b.corr_m, "𝔇 + 𝔊 differs from 𝔐");
    }
    if let Some(msg) = balances(&dec) {
        return Ok(Outcome::Fail(msg));
    }
    for a in &all {
        let one = ArrowSubset::from([a.clone()]);
        expect!(
            correction_m_singleton(t, a)? == correction_m(t, &one)?,
            "singleton 𝔐 differs at {a}"
        );
        expect!(
            correction_d_singleton(t, a)? == correction_d(r, &one)?,
            "singleton 𝔇 differs at {a}"
        );
        expect!(
            correction_g_singleton(t, a)? == correction_g(r, &one)?,
            "singleton 𝔊 differs at {a}"
        );
    }
    Ok(Outcome::Pass)
}

fn check_central(p: &Parsed, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let cent = central_set(t)?;
    expect!(
        is_connected_set(t, &cent),
        "the central set is not connected"
    );
    if let Some(r) = p.rooted() {
        if r.is_root() {
            expect!(cent.contains(r.root()), "the root is not central");
        }
    }
    Ok(Outcome::Pass)
}

fn negative_hypotheses(p: &Parsed) -> Option<&RootedTree> {
    let r = p.rooted()?;
    let t = r.tree();
    let ok = r.is_root()
        && determinant_sign(t).is_negative()
        && t.arrows().all(|(_, f)| !f.is_negative());
    ok.then_some(r)
}

fn comparable_pairs(r: &RootedTree) -> Result<Vec<(NodeId, NodeId)>> {
    let t = r.tree();
    let mut out = Vec::new();
    for v in t.vertices() {
        for w in t.vertices() {
            if v != w && le(r, v, w)? {
                out.push((v.clone(), w.clone()));
            }
        }
    }
    Ok(out)
}

fn check_path_sign(p: &Parsed, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let Some(r) = negative_hypotheses(p) else {
        return Ok(Outcome::Skip);
    };
    let t = r.tree();
    let n = multiplicities(t);
    for (v, w) in comparable_pairs(r)? {
        let path = t.path(&v, &w)?;
        let det = det_path(t, &path)?;
        expect!(det.is_negative(), "det of the path {v}..{w} is {det}");
        if !crate::invariants::is_linear(t, &path) {
            continue;
        }
        let (m, q, big_q) = two_by_two(t, &n, &v, &w)?;
        expect!(
            q.is_positive() && big_q.is_positive(),
            "q = {q}, Q = {big_q} on the path {v}..{w}"
        );
        expect!(
            !m.is_positive(),
            "2x2 determinant {m} > 0 on the path {v}..{w}"
        );
        let above = t.nonzero_arrows().any(|a| le(r, &w, a).unwrap_or(false));
        expect!(
            !above || m.is_negative(),
            "2x2 determinant {m} is not negative on {v}..{w}"
        );
    }
    Ok(Outcome::Pass)
}

fn check_nonnegative_connected(p: &Parsed, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let Some(r) = negative_hypotheses(p) else {
        return Ok(Outcome::Skip);
    };
    let t = r.tree();
    let n = multiplicities(t);
    for (v, w) in comparable_pairs(r)? {
        let (nv, nw) = (&n[&v], &n[&w]);
        expect!(
            !nv.is_negative() || nw.is_negative(),
            "N_{v} < 0 but N_{w} = {nw}"
        );
        expect!(
            nv.is_positive() || !nw.is_positive(),
            "N_{v} <= 0 but N_{w} = {nw}"
        );
        let above = t.nonzero_arrows().any(|a| le(r, &w, a).unwrap_or(false));
        expect!(
            nv.is_positive() || !above || nw.is_negative(),
            "N_{v} <= 0 with a nonzero arrow above {w} but N_{w} = {nw}"
        );
    }
    let nonneg: BTreeSet<NodeId> = t
        .vertices()
        .filter(|v| !n[*v].is_negative())
        .cloned()
        .collect();
    let pos: BTreeSet<NodeId> = t
        .vertices()
        .filter(|v| n[*v].is_positive())
        .cloned()
        .collect();
    expect!(
        is_connected_set(t, &nonneg),
        "{{N_v >= 0}} is not connected"
    );
    expect!(is_connected_set(t, &pos), "{{N_v > 0}} is not connected");
    Ok(Outcome::Pass)
}

fn check_branch_formula(p: &Parsed, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let Some(r) = p.rooted().filter(|r| r.is_root()) else {
        return Ok(Outcome::Skip);
    };
    let t = r.tree();
    if t.arrows().any(|(_, f)| !(f.is_zero() || f.is_one())) {
        return Ok(Outcome::Skip);
    }
    let rows = out_pair_table(r)?;
    for (x, y, lhs, rhs) in &rows {
        expect!(
            lhs == rhs,
            "out-pair ({x}, {{{x},{y}}}): p = {lhs} but the formula gives {rhs}"
        );
    }
    if let Some((x, y, lhs, _)) = rows.choose(rng) {
        let (l, rr) = branch_sum_formula_check(r, x, &Edge::new(x.as_str(), y.as_str()))?;
        expect!(
            &l == lhs && l == rr,
            "single out-pair check disagrees with the table"
        );
    }
    Ok(Outcome::Pass)
}

fn check_branch_formula_converse(p: &Parsed, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let Some(r) = p.rooted().filter(|r| r.is_root()) else {
        return Ok(Outcome::Skip);
    };
    let t = r.tree();
    let all_hold = out_pair_table(r)?.iter().all(|(_, _, l, rr)| l == rr);
    let unit = t.arrows().all(|(_, f)| f.is_zero() || f.is_one());
    expect!(
        !all_hold || unit,
        "the formula holds on every out-pair but some f is outside {{0,1}}"
    );
    expect!(
        !unit || all_hold,
        "every f is in {{0,1}} but the formula fails"
    );
    Ok(Outcome::Pass)
}

fn check_reversal_suite(p: &Parsed, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let cent: Vec<NodeId> = central_set(t)?.into_iter().collect();
    let Some(eta) = cent.choose(rng) else {
        return Ok(Outcome::Skip);
    };
    let rev = reverse(t, eta)?;
    let bad = check_reversal(t, eta, &rev)?;
    expect!(bad.is_empty(), "reversal at {eta}: {bad:?}");
    let mut order: Vec<NodeId> = t.vertices().cloned().collect();
    order.shuffle(rng);
    expect!(
        reverse_with_order(t, eta, &order)? == rev,
        "reversal depends on the visiting order"
    );
    Ok(Outcome::Pass)
}

fn check_root_decomposition(p: &Parsed, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let Some(r) = p.rooted().filter(|r| r.is_root()) else {
        return Ok(Outcome::Skip);
    };
    if r.tree().valency(r.root())? == 0 {
        return Ok(Outcome::Skip);
    }
    for (x, lhs, rhs) in phi_degree_table(r)? {
        expect!(lhs == rhs, "at {x}: N + N^(i) = {lhs} but φ deg = {rhs}");
    }
    Ok(Outcome::Pass)
}

fn check_genus_formula(p: &Parsed, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let Some(r) = p.rooted().filter(|r| r.is_root()) else {
        return Ok(Outcome::Skip);
    };
    let t = r.tree();
    if t.valency(r.root())? == 0 || t.arrows().any(|(_, f)| !(f.is_zero() || f.is_one())) {
        return Ok(Outcome::Skip);
    }
    let (g, rhs) = genus_formula_check(r)?;
    expect!(
        g == rhs,
        "g = {g} but the formula gives {rhs} (deg {})",
        degree(r)
    );
    Ok(Outcome::Pass)
}

fn check_oracle(p: &Parsed, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let n = multiplicities(t);
    for (v, nv) in &n {
        let r = reference::multiplicity_node(t, v);
        expect!(*nv == r, "N_{v} = {nv} but the reference gives {r}");
    }
    let ps = BranchSums::compute(t);
    for e in t.edges() {
        let (a, b) = e.endpoints();
        let (d, rd) = (det_edge(t, &e)?, reference::det_edge(t, a, b));
        expect!(d == rd, "det {e} = {d} but the reference gives {rd}");
        for (x, y) in [(a, b), (b, a)] {
            let (pv, rp) = (ps.at(x, y), reference::branch_sum(t, x, y));
            expect!(*pv == rp, "p({x},{e}) = {pv} but the reference gives {rp}");
        }
    }
    for a in t.nonzero_arrows() {
        let (f, rf) = (f_arrow(t, a)?, reference::f_arrow(t, a));
        expect!(f == rf, "F({a}) = {f} but the reference gives {rf}");
    }
    let (m, rm) = (multiplicity(t), reference::multiplicity(t));
    expect!(m == rm, "M = {m} but the reference gives {rm}");
    let (f, rf) = (f_total(t), reference::f_total(t));
    expect!(f == rf, "F = {f} but the reference gives {rf}");
    Ok(Outcome::Pass)
}

fn check_round_trip(p: &Parsed, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = p.tree();
    let variants = [Parsed::Plain(t.clone()), p.clone()];
    let q = variants.choose(rng).expect("nonempty");
    let text = serialize_parsed(q);
    let back = parse(&text)?;
    expect!(back == *q, "parse(serialize(t)) differs from t");
    expect!(
        serialize_parsed(&back) == text,
        "serialize is not canonical"
    );
    expect!(serialize(back.tree()) == serialize(t), "tree text changed");
    Ok(Outcome::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_coprime_keeps_sign() {
        assert_eq!(nearest_coprime(4, &[2]), 3);
        assert_eq!(nearest_coprime(-6, &[3, 2]), -5);
        assert_eq!(nearest_coprime(0, &[5]), 1);
        assert_eq!(nearest_coprime(7, &[]), 7);
    }

    #[test]
    fn same_seed_same_tree() {
        let p = GenParams {
            seed: 42,
            ..GenParams::default()
        };
        assert_eq!(random_tree(&p).unwrap(), random_tree(&p).unwrap());
    }

    #[test]
    fn rooted_generation_gives_roots() {
        for seed in 0..200 {
            let p = GenParams {
                seed,
                ..rooted_unit()
            };
            let r = random_tree(&p).unwrap();
            assert!(r.rooted().unwrap().is_root());
            assert!(r.tree().arrows().all(|(_, f)| f.is_zero() || f.is_one()));
        }
    }

    #[test]
    fn negative_generation_has_negative_determinants() {
        for seed in 0..200 {
            let p = GenParams {
                seed,
                ..rooted_negative()
            };
            let r = random_tree(&p).unwrap();
            assert!(determinant_sign(r.tree()).is_negative());
        }
    }

    #[test]
    fn partitions_of_four_arrows_are_all_reached_evenly() {
        let set: ArrowSubset = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut counts: BTreeMap<Vec<ArrowSubset>, usize> = BTreeMap::new();
        for _ in 0..15_000 {
            let mut p = random_partition(&set, &mut rng);
            p.sort();
            assert!(p.iter().all(|b| !b.is_empty()));
            assert_eq!(p.iter().map(|b| b.len()).sum::<usize>(), 4);
            *counts.entry(p).or_default() += 1;
        }
        assert_eq!(counts.len(), 15);
        assert!(
            counts.values().all(|&c| (800..1200).contains(&c)),
            "{counts:?}"
        );
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(run_default("no-such-suite", 0, 1).is_err());
    }

    #[test]
    fn shrinking_reaches_a_small_tree() {
        fn always_fails(_: &Parsed, _: &mut ChaCha8Rng) -> Result<Outcome> {
            Ok(Outcome::Fail("always".into()))
        }
        let def = SuiteDef {
            name: "fails",
            about: "",
            params: general,
            check: always_fails,
        };
        let p = random_tree(&GenParams {
            seed: 3,
            ..GenParams::default()
        })
        .unwrap();
        assert!(shrink(&def, p, 0).tree().node_count() <= 2);
    }
}
