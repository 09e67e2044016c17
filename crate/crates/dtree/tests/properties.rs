//! Structural properties checked with proptest on generated trees.

use dtree::harness::{random_tree, reference, GenParams};
use dtree::invariants::{
    det_edge, f_total, multiplicities, multiplicity, nonzero_arrow_set, BranchSums,
};
use dtree::rooted::{central_set, is_connected_set, Decomposition};
use dtree::simplify::{contract_det_zero, find_sites, normalize};
use dtree::split::{edz, split_at_edge, split_degree};
use dtree::textio::serialize_parsed;
use dtree::treecore::{canonical_form, isomorphic, validate};
use dtree::{parse, BigInt, DecoratedTree, Parsed, TreeBuilder, TwoPrepartition};
use proptest::prelude::*;

fn general(seed: u64) -> Parsed {
    random_tree(&GenParams {
        seed,
        ..GenParams::default()
    })
    .expect("generator")
}

fn small(seed: u64) -> Parsed {
    random_tree(&GenParams {
        seed,
        max_nodes: 8,
        ..GenParams::default()
    })
    .expect("generator")
}

fn pseudo_rooted(seed: u64) -> Parsed {
    random_tree(&GenParams {
        seed,
        require_rooted: true,
        allow_pseudo_root: true,
        ..GenParams::default()
    })
    .expect("generator")
}

fn unit_rooted(seed: u64) -> Parsed {
    random_tree(&GenParams {
        seed,
        require_rooted: true,
        arrow_decoration_set: Some(vec![0, 1]),
        ..GenParams::default()
    })
    .expect("generator")
}

fn mf(t: &DecoratedTree) -> (BigInt, BigInt) {
    (multiplicity(t), f_total(t))
}

/// The same tree with every id prefixed by `x`.
fn renamed(t: &DecoratedTree) -> DecoratedTree {
    let mut b = TreeBuilder::new();
    for v in t.vertices() {
        b.vertex(format!("x{v}"));
    }
    for (a, f) in t.arrows() {
        b.arrow(format!("x{a}"), f.clone());
    }
    for e in t.edges() {
        let (p, q) = e.endpoints();
        b.edge(
            format!("x{p}"),
            format!("x{q}"),
            t.q(&e, p).unwrap().clone(),
            t.q(&e, q).unwrap().clone(),
        );
    }
    b.build().expect("renaming keeps validity")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn generated_trees_are_valid(seed in any::<u64>()) {
        let p = general(seed);
        prop_assert!(validate(&p.tree().to_builder()).is_ok());
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>()) {
        prop_assert_eq!(general(seed), general(seed));
    }

    #[test]
    fn m_plus_f_is_even(seed in any::<u64>()) {
        let (m, f) = mf(general(seed).tree());
        prop_assert_eq!((m + f) % 2, BigInt::from(0));
    }

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let p = pseudo_rooted(seed);
        let text = serialize_parsed(&p);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(serialize_parsed(&back), text);
    }

    #[test]
    fn renaming_keeps_shape_and_invariants(seed in any::<u64>()) {
        let t = general(seed).tree().clone();
        let r = renamed(&t);
        prop_assert_eq!(canonical_form(&t, None), canonical_form(&r, None));
        prop_assert_eq!(mf(&t), mf(&r));
    }

    #[test]
    fn reference_evaluator_agrees(seed in any::<u64>()) {
        let p = small(seed);
        let t = p.tree();
        for (v, n) in multiplicities(t) {
            prop_assert_eq!(n, reference::multiplicity_node(t, &v));
        }
        let ps = BranchSums::compute(t);
        for e in t.edges() {
            let (a, b) = e.endpoints();
            prop_assert_eq!(det_edge(t, &e).unwrap(), reference::det_edge(t, a, b));
            prop_assert_eq!(ps.get(a, b).cloned(), Some(reference::branch_sum(t, a, b)));
        }
        prop_assert_eq!(mf(t), (reference::multiplicity(t), reference::f_total(t)));
    }

    #[test]
    fn normalization_keeps_m_and_f(seed in any::<u64>()) {
        let t = general(seed).tree().clone();
        let n = normalize(&t);
        prop_assert_eq!(mf(&n), mf(&t));
        prop_assert!(find_sites(&n).is_empty());
    }

    #[test]
    fn edz_contracts_back(seed in any::<u64>(), mask in any::<u32>()) {
        let t = general(seed).tree().clone();
        let v = t.vertices().next().unwrap().clone();
        let first = t.neighbors(&v).unwrap().keys().enumerate()
            .filter(|(i, _)| mask & (1 << (i % 32)) != 0)
            .map(|(_, n)| n.clone())
            .collect::<Vec<_>>();
        let parts = TwoPrepartition::with_first(&t, &v, first).unwrap();
        let z = edz(&t, &v, &parts).unwrap();
        prop_assert_eq!(mf(&z.tree), mf(&t));
        let back = contract_det_zero(&z.tree, &z.v1, &z.v2).unwrap();
        prop_assert!(isomorphic(&back, &t));
    }

    #[test]
    fn splitting_adds_m_and_shifts_f(seed in any::<u64>(), pick in any::<usize>()) {
        let t = general(seed).tree().clone();
        let edges = t.edges();
        prop_assume!(!edges.is_empty());
        let e = &edges[pick % edges.len()];
        let d = split_degree(&t, e).unwrap();
        prop_assume!(d <= BigInt::from(64));
        let s = split_at_edge(&t, e).unwrap();
        let (m, f) = mf(&t);
        let (m1, f1) = mf(&s.t1);
        let (m2, f2) = mf(&s.t2);
        prop_assert_eq!(m1 + m2, m);
        prop_assert_eq!(f1 + f2, f + 2 * d);
    }

    #[test]
    fn central_set_is_connected(seed in any::<u64>()) {
        let t = pseudo_rooted(seed).tree().clone();
        let cent = central_set(&t).unwrap();
        prop_assert!(is_connected_set(&t, &cent));
    }

    #[test]
    fn one_block_decomposition_balances(seed in any::<u64>()) {
        let p = pseudo_rooted(seed);
        let r = p.rooted().unwrap();
        let all = nonzero_arrow_set(r.tree());
        prop_assume!(!all.is_empty());
        let d = Decomposition::compute(r, &[all]).unwrap();
        let (a, b) = d.m_balance();
        prop_assert_eq!(a, b);
        let (a, b) = d.delta_balance();
        prop_assert_eq!(a, b);
        let (a, b) = d.genus_balance();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn genus_formula_holds(seed in any::<u64>()) {
        let p = unit_rooted(seed);
        let r = p.rooted().unwrap();
        let (g, rhs) = dtree::genus::genus_formula_check(r).unwrap();
        prop_assert_eq!(g, rhs);
    }
}
