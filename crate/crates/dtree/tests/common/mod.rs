//! Fixtures and worked-example checks shared by the integration tests and the
//! acceptance report.

#![allow(dead_code)]

use std::path::PathBuf;

use dtree::genus::root_decompose;
use dtree::harness::{default_params, run_suite, suite_names, Report};
use dtree::invariants::{det_edge, multiplicities, pairing_i};
use dtree::rooted::{central_set, subtree_tx, Decomposition};
use dtree::simplify::contract_det_zero;
use dtree::split::{edz, ensplit_at_edge, split_at_edge};
use dtree::textio::{serialize_parsed, to_dot, DotOptions};
use dtree::treecore::{canonical_form, isomorphic};
use dtree::{parse, summary, ArrowSubset, BigInt, DecoratedTree, Edge, Parsed, TwoPrepartition};

/// Outcome of one named check: `Err` carries the reason.
pub type Check = (String, Result<(), String>);

type ExampleFn = fn() -> Result<(), String>;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("data")
}

pub fn fixture_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(data_dir())
        .expect("data directory")
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".dtree"))
        .collect();
    names.sort();
    names
}

pub fn load(name: &str) -> Parsed {
    let text = std::fs::read_to_string(data_dir().join(name)).expect("fixture");
    parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn set(ids: &[&str]) -> ArrowSubset {
    ids.iter().map(|s| s.to_string()).collect()
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

fn mf(t: &DecoratedTree) -> Result<(BigInt, BigInt), String> {
    let s = summary(t).map_err(|e| e.to_string())?;
    Ok((s.m, s.f))
}

fn pair(m: i64, f: i64) -> (BigInt, BigInt) {
    (big(m), big(f))
}

fn e2s<T>(r: dtree::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub fn picture1() -> Result<(), String> {
    let p = load("picture1.dtree");
    let t = p.tree();
    let det = e2s(det_edge(t, &Edge::new("u", "v")))?;
    ensure!(det == big(-8), "det{{u,v}} = {det}, expected -8");
    let cent = e2s(central_set(t))?;
    let want: std::collections::BTreeSet<String> =
        ["u", "v", "a2"].iter().map(|s| s.to_string()).collect();
    ensure!(cent == want, "central set {cent:?}, expected {{u, v, a2}}");
    Ok(())
}

pub fn split_example() -> Result<(), String> {
    let p = load("split_example.dtree");
    let t = p.tree();
    ensure!(
        mf(t)? == pair(-9, 5),
        "(M, F) = {:?}, expected (-9, 5)",
        mf(t)?
    );
    let n = multiplicities(t);
    let zero: Vec<&String> = t.vertices().filter(|v| n[*v] == big(0)).collect();
    ensure!(
        zero == ["A", "D", "E"],
        "vertices with N = 0: {zero:?}, expected A, D, E"
    );
    let dot = to_dot(t, DotOptions::default());
    let filled: Vec<&str> = dot
        .lines()
        .filter(|l| l.contains("fillcolor"))
        .filter_map(|l| l.trim().split('"').nth(1))
        .collect();
    ensure!(
        filled == ["A", "D", "E"],
        "DOT fills {filled:?}, expected A, D, E"
    );
    let s = e2s(split_at_edge(t, &Edge::new("B", "C")))?;
    ensure!(s.degree == big(3), "degree {}, expected 3", s.degree);
    let mut got = vec![mf(&s.t1)?, mf(&s.t2)?];
    got.sort();
    let mut want = vec![pair(0, 6), pair(-9, 5)];
    want.sort();
    ensure!(got == want, "pieces {got:?}, expected (0, 6) and (-9, 5)");
    Ok(())
}

pub fn ensplit_example() -> Result<(), String> {
    let p = load("ensplit_example.dtree");
    let t = p.tree();
    ensure!(
        mf(t)? == pair(-273, 5),
        "(M, F) = {:?}, expected (-273, 5)",
        mf(t)?
    );
    let s = e2s(ensplit_at_edge(t, &Edge::new("Q", "R")))?;
    ensure!(s.degree == big(2), "degree {}, expected 2", s.degree);
    ensure!(s.kind == Some(0), "type {:?}, expected 0", s.kind);
    let mut got = vec![mf(&s.t1)?, mf(&s.t2)?];
    got.sort();
    let mut want = vec![pair(-29, 3), pair(-244, 6)];
    want.sort();
    ensure!(
        got == want,
        "pieces {got:?}, expected (-29, 3) and (-244, 6)"
    );
    Ok(())
}

fn decomposition(name: &str, blocks: &[&[&str]]) -> Result<(Parsed, Decomposition), String> {
    let p = load(name);
    let r = p.rooted().ok_or("fixture has no root")?;
    let blocks: Vec<ArrowSubset> = blocks.iter().map(|b| set(b)).collect();
    let d = e2s(Decomposition::compute(r, &blocks))?;
    Ok((p, d))
}

pub fn decomposition_unit_example() -> Result<(), String> {
    let (_, d) = decomposition(
        "decomposition_unit_example.dtree",
        &[&["a2", "a3", "a4", "a5"], &["a1", "a6"]],
    )?;
    ensure!(
        (d.m.clone(), d.f.clone()) == pair(-4, 6),
        "(M, F) = ({}, {})",
        d.m,
        d.f
    );
    let blocks: Vec<_> = d
        .blocks
        .iter()
        .map(|b| (b.m.clone(), b.f.clone()))
        .collect();
    ensure!(blocks == [pair(-2, 4), pair(-2, 2)], "blocks {blocks:?}");
    ensure!(
        d.pairings[0][1] == big(0),
        "I(X1, X2) = {}",
        d.pairings[0][1]
    );
    let g: Vec<_> = std::iter::once(d.g.clone())
        .chain(d.blocks.iter().map(|b| b.g.clone()))
        .collect();
    ensure!(
        g == [big(0), big(0), big(1)],
        "genera {g:?}, expected 0, 0, 1"
    );
    ensure!(
        d.blocks.iter().all(|b| b.corr_g == big(0)),
        "nonzero genus correction"
    );
    let (l, r) = d.genus_balance();
    ensure!(l == r, "genus balance {l} != {r}");
    Ok(())
}

pub fn decomposition_example() -> Result<(), String> {
    let (_, d) = decomposition(
        "decomposition_example.dtree",
        &[&["a2", "a3", "a4", "a5"], &["a1", "a6"]],
    )?;
    ensure!(
        (d.m.clone(), d.f.clone()) == pair(-6, 8),
        "(M, F) = ({}, {})",
        d.m,
        d.f
    );
    let blocks: Vec<_> = d
        .blocks
        .iter()
        .map(|b| (b.m.clone(), b.f.clone()))
        .collect();
    ensure!(blocks == [pair(-2, 4), pair(-4, 4)], "blocks {blocks:?}");
    ensure!(
        d.pairings[0][1] == big(0),
        "I(X1, X2) = {}",
        d.pairings[0][1]
    );
    let corr: Vec<_> = d.blocks.iter().map(|b| b.corr_g.clone()).collect();
    ensure!(
        corr == [big(0), big(0)],
        "genus corrections {corr:?}, expected 0, 0"
    );
    let g: Vec<_> = std::iter::once(d.g.clone())
        .chain(d.blocks.iter().map(|b| b.g.clone()))
        .collect();
    ensure!(
        g == [big(0), big(0), big(1)],
        "genera {g:?}, expected 0, 0, 1"
    );
    let (l, r) = d.genus_balance();
    ensure!(l == r, "genus balance {l} != {r}");
    Ok(())
}

pub fn delta_decomposition_example() -> Result<(), String> {
    let (p, d) = decomposition(
        "delta_decomposition_example.dtree",
        &[&["r1", "s1"], &["u1", "p1"]],
    )?;
    ensure!(
        (d.m.clone(), d.f.clone()) == pair(-273, 5),
        "(M, F) = ({}, {})",
        d.m,
        d.f
    );
    let blocks: Vec<_> = d
        .blocks
        .iter()
        .map(|b| (b.m.clone(), b.f.clone()))
        .collect();
    ensure!(blocks == [pair(-69, 3), pair(-52, 2)], "blocks {blocks:?}");
    let deltas: Vec<_> = std::iter::once(d.delta.clone())
        .chain(d.blocks.iter().map(|b| b.delta.clone()))
        .collect();
    ensure!(
        deltas == [big(139), big(36), big(27)],
        "δ values {deltas:?}, expected 139, 36, 27"
    );
    let i = e2s(pairing_i(
        p.tree(),
        &set(&["r1", "s1"]),
        &set(&["u1", "p1"]),
    ))?;
    ensure!(
        i == big(120) && d.pairings[0][1] == i,
        "I(X1, X2) = {i}, expected 120"
    );
    let corr: Vec<_> = d.blocks.iter().map(|b| b.corr_d.clone()).collect();
    ensure!(
        corr == [big(24), big(20)],
        "δ corrections {corr:?}, expected 24, 20"
    );
    let (l, r) = d.delta_balance();
    ensure!(l == r, "δ balance {l} != {r}");
    Ok(())
}

pub fn subtree_example() -> Result<(), String> {
    let p = load("subtree_example.dtree");
    let r = p.rooted().ok_or("fixture has no root")?;
    for (x, file) in [
        (set(&["alpha"]), "subtree_example_alpha.dtree"),
        (set(&["alpha", "beta"]), "subtree_example_alpha_beta.dtree"),
        (
            set(&["alpha", "beta", "r1", "s1", "s2"]),
            "subtree_example_all.dtree",
        ),
    ] {
        let got = e2s(subtree_tx(r, &x))?;
        let want = load(file);
        let want = want.rooted().ok_or("expected fixture has no root")?;
        ensure!(
            canonical_form(got.tree(), Some(got.root()))
                == canonical_form(want.tree(), Some(want.root())),
            "subtree for {x:?} differs from {file}"
        );
    }
    Ok(())
}

pub fn genus_formula_example() -> Result<(), String> {
    let p = load("decomposition_unit_example.dtree");
    let r = p.rooted().ok_or("fixture has no root")?;
    let pieces = e2s(root_decompose(r))?;
    ensure!(
        pieces.len() == 2,
        "{} pieces at the root, expected 2",
        pieces.len()
    );
    let (g, rhs) = e2s(dtree::genus::genus_formula_check(r))?;
    ensure!(g == rhs, "g = {g} but the formula gives {rhs}");
    Ok(())
}

/// Every worked example, by name.
pub fn example_checks() -> Vec<Check> {
    let all: [(&str, ExampleFn); 8] = [
        ("small tree: determinant and central set", picture1),
        ("edge splitting of degree 3", split_example),
        ("EN-splitting of degree 2 and type 0", ensplit_example),
        (
            "decomposition with unit arrows: M, F, I and genus ledger",
            decomposition_unit_example,
        ),
        (
            "decomposition with doubled arrows: genus corrections",
            decomposition_example,
        ),
        (
            "δ decomposition: I = 120 and corrections 24, 20",
            delta_decomposition_example,
        ),
        ("subtrees spanned by arrow sets", subtree_example),
        (
            "genus formula at the root of the unit example",
            genus_formula_example,
        ),
    ];
    all.iter().map(|(n, f)| (n.to_string(), f())).collect()
}

/// `parse` after `serialize` is the identity on every fixture, and
/// `serialize` after `parse` is the canonical text.
pub fn fixture_round_trips() -> Result<(), String> {
    for name in fixture_names() {
        let p = load(&name);
        let text = serialize_parsed(&p);
        let back = e2s(parse(&text))?;
        ensure!(back == p, "{name}: parse(serialize(T)) differs from T");
        ensure!(
            serialize_parsed(&back) == text,
            "{name}: serialization is not canonical"
        );
    }
    Ok(())
}

/// Contracting the edge created by edz gives back the tree, for every vertex of
/// every fixture and every way of sending its neighbours to the first side.
pub fn fixture_edz_round_trips() -> Result<(), String> {
    for name in fixture_names() {
        let p = load(&name);
        let t = p.tree();
        for v in t.vertices() {
            let nbrs: Vec<String> = e2s(t.neighbors(v))?.keys().cloned().collect();
            if nbrs.len() > 10 {
                continue;
            }
            for mask in 0u32..(1 << nbrs.len()) {
                let first = nbrs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, n)| n.clone());
                let parts = e2s(TwoPrepartition::with_first(t, v, first))?;
                let z = e2s(edz(t, v, &parts))?;
                let back = e2s(contract_det_zero(&z.tree, &z.v1, &z.v2))?;
                ensure!(
                    isomorphic(&back, t),
                    "{name}: edz at {v} does not contract back"
                );
            }
        }
    }
    Ok(())
}

pub fn run_default_suite(name: &str, count: usize) -> Report {
    let params = default_params(name, 0).expect("known suite");
    run_suite(name, &params, count).expect("suite runs")
}

pub fn all_suites() -> Vec<&'static str> {
    suite_names()
}
