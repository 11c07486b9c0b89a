mod common;

use std::collections::BTreeSet;

use common::*;
use procred_core::fixtures::{infix_example_nfa, keyword_union, random_nfa};
use procred_core::{
    classify_transitions, create_procedure, gain, validate_simgraph, Reg, SelfProduct, SimilarityGraph, Sra,
    SraBuilder, Transition, Violation,
};
use proptest::prelude::*;

fn named(a: &Sra, set: &BTreeSet<Transition>) -> BTreeSet<(String, String, String)> {
    set.iter()
        .map(|t| (a.state_name(t.src), a.alphabet()[t.sym.0 as usize].clone(), a.state_name(t.dst)))
        .collect()
}

fn triples(list: &[(&str, &str, &str)]) -> BTreeSet<(String, String, String)> {
    list.iter().map(|&(r, x, s)| (r.into(), x.into(), s.into())).collect()
}

fn infix() -> (Sra, SimilarityGraph) {
    let a = infix_example_nfa().lift();
    let q = |n: &str| a.state_by_name(n).unwrap();
    let g = SimilarityGraph::from_path(&a, vec![(q("q1"), q("q2")), (q("q3"), q("q4")), (q("q5"), q("q6"))]);
    (a, g)
}

#[test]
fn infix_self_product_contains_the_shared_path() {
    let (a, _) = infix();
    let p = SelfProduct::new(&a);
    let q = |n: &str| a.state_by_name(n).unwrap();
    assert!(p.has_edge((q("q1"), q("q2")), (q("q3"), q("q4"))));
    assert!(p.has_edge((q("q3"), q("q4")), (q("q5"), q("q6"))));
    assert!(!p.contains((q("q0"), q("q1"))));
}

#[test]
fn distinct_symbols_give_only_diagonal_edges() {
    let a = keyword_union(&["abcd", "efgh"]).lift();
    let edges = SelfProduct::new(&a).edges();
    assert!(!edges.is_empty());
    assert!(edges.iter().all(|&((r1, r2), (s1, s2))| r1 == r2 && s1 == s2));
    let inner = a.transitions().iter().filter(|t| !a.is_terminal(t.src) && !a.is_terminal(t.dst)).count();
    assert_eq!(edges.len(), inner);
    assert_eq!(inner, 4);
}

#[test]
fn infix_partition() {
    let (a, g) = infix();
    let part = classify_transitions(&a, &g).unwrap();
    assert_eq!(named(&a, &part.common), triples(&[("q1", "a", "q3"), ("q2", "a", "q4"), ("q3", "a", "q5"), ("q4", "a", "q6")]));
    assert_eq!(named(&a, &part.unique), triples(&[("q3", "c", "q3"), ("q4", "b", "q6")]));
    assert_eq!(named(&a, &part.entry), triples(&[("q0", "x", "q1"), ("q0", "y", "q2")]));
    assert_eq!(named(&a, &part.exit), triples(&[("q5", "x", "q7"), ("q6", "y", "q7")]));
    assert!(part.switch.is_empty() && part.untouched.is_empty());
    assert_eq!(gain(&a, &g).unwrap(), 2);
    assert_eq!(create_procedure(&a, &g).unwrap().transitions().len(), 8);
}

#[test]
fn single_vertex_graph_has_no_common_transitions() {
    let (a, _) = infix();
    let q = |n: &str| a.state_by_name(n).unwrap();
    let g = SimilarityGraph::from_path(&a, vec![(q("q3"), q("q4"))]);
    assert!(g.edges().is_empty());
    assert!(classify_transitions(&a, &g).unwrap().common.is_empty());
    assert!(gain(&a, &g).unwrap() <= 0);
}

#[test]
fn diagonal_vertex_is_rejected() {
    let (a, _) = infix();
    let q1 = a.state_by_name("q1").unwrap();
    let v = validate_simgraph(&a, &SimilarityGraph::from_path(&a, vec![(q1, q1)]));
    assert!(v.contains(&Violation::DisjointInvocations(q1)));
}

#[test]
fn overlapping_signatures_are_rejected() {
    let (bot, star) = (Reg::Bot, Reg::Star);
    let mut b = SraBuilder::new();
    b.initial("i")
        .transition("i", "x", bot, Reg::Sym(1), "p")
        .transition("i", "x", bot, Reg::Sym(1), "r")
        .transition("i", "y", bot, Reg::Sym(2), "r")
        .transition("p", "a", star, star, "f")
        .transition("r", "a", star, star, "f")
        .accepting("f");
    let a = b.build().unwrap();
    let sigs = brute_signatures(&a);
    let (p, r) = (a.state_by_name("p").unwrap(), a.state_by_name("r").unwrap());
    assert_eq!(sigs[&p], BTreeSet::from([1]));
    assert_eq!(sigs[&r], BTreeSet::from([1, 2]));
    let v = validate_simgraph(&a, &SimilarityGraph::from_path(&a, vec![(p, r)]));
    assert!(v.contains(&Violation::DisjointSignature(BTreeSet::from([1]))));
}

#[test]
fn exit_wildcard_loss() {
    let (bot, star) = (Reg::Bot, Reg::Star);
    let mut b = SraBuilder::new();
    b.initial("q0")
        .transition("q0", "x", bot, Reg::Sym(0), "q1")
        .transition("q0", "y", bot, Reg::Sym(1), "q1")
        .transition("q0", "z", bot, bot, "q2")
        .transition("q1", "a", star, star, "q3")
        .transition("q2", "a", bot, bot, "q4")
        .transition("q3", "b", star, star, "q5")
        .transition("q4", "e", bot, bot, "q5")
        .transition("q5", "x", bot, bot, "q7")
        .accepting("q7");
    let a = b.build().unwrap();
    let q = |n: &str| a.state_by_name(n).unwrap();
    let g = SimilarityGraph::from_path(&a, vec![(q("q1"), q("q2")), (q("q3"), q("q4"))]);
    let part = classify_transitions(&a, &g).unwrap();
    assert_eq!(named(&a, &part.exit), triples(&[("q3", "b", "q5"), ("q4", "e", "q5")]));
    // Common saves 1, expanding b over Sig(q3) = {0, 1} costs 1.
    assert_eq!(gain(&a, &g).unwrap(), 0);
    let merged = create_procedure(&a, &g).unwrap();
    assert_eq!(merged.transitions().len(), a.transitions().len());
}

/// Sum over pairs of equal-symbol neutral transitions, by a double loop over
/// the transition set.
fn brute_edges(a: &Sra) -> BTreeSet<((procred_core::StateId, procred_core::StateId), (procred_core::StateId, procred_core::StateId))> {
    let mut out = BTreeSet::new();
    for t in a.transitions() {
        for u in a.transitions() {
            let inner = [t.src, t.dst, u.src, u.dst].iter().all(|&q| !a.is_terminal(q));
            if inner && t.sym == u.sym && t.is_neutral() && u.is_neutral() {
                out.insert(((t.src, u.src), (t.dst, u.dst)));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn self_product_matches_double_loop(seed in any::<u64>()) {
        let a = random_sra(&mut rng(seed), 6, 2, 2, 14);
        prop_assert_eq!(SelfProduct::new(&a).edges(), brute_edges(&a));
    }

    #[test]
    fn partition_gain_and_merge_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        for a in sample_automata(seed) {
            let p = SelfProduct::new(&a);
            for _ in 0..4 {
                let Some(g) = random_valid_graph(&a, &p, &mut r, 6) else { continue };
                let part = classify_transitions(&a, &g).unwrap();
                let sets = [&part.entry, &part.exit, &part.common, &part.unique, &part.switch, &part.untouched];
                let union: BTreeSet<Transition> = sets.iter().flat_map(|s| s.iter().copied()).collect();
                prop_assert_eq!(sets.iter().map(|s| s.len()).sum::<usize>(), a.transitions().len());
                prop_assert_eq!(&union, a.transitions());
                for &(u, v) in g.edges() {
                    prop_assert!(brute_edges(&a).contains(&(u, v)));
                }
                let merged = create_procedure(&a, &g).unwrap();
                let realized = a.transitions().len() as i64 - merged.transitions().len() as i64;
                prop_assert_eq!(gain(&a, &g).unwrap(), realized);
            }
        }
    }

    #[test]
    fn gain_exact_on_arbitrary_automata(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_sra(&mut r, 8, 2, 2, 20);
        let p = SelfProduct::new(&a);
        for _ in 0..6 {
            let Some(g) = random_valid_graph(&a, &p, &mut r, 5) else { continue };
            let merged = create_procedure(&a, &g).unwrap();
            let realized = a.transitions().len() as i64 - merged.transitions().len() as i64;
            prop_assert_eq!(gain(&a, &g).unwrap(), realized);
        }
    }

    #[test]
    fn lifted_common_sets_are_even(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_nfa(&mut r, 8, 2, 0.3).lift();
        let p = SelfProduct::new(&a);
        for _ in 0..6 {
            if let Some(g) = random_valid_graph(&a, &p, &mut r, 5) {
                prop_assert_eq!(classify_transitions(&a, &g).unwrap().common.len() % 2, 0);
            }
        }
    }
}
