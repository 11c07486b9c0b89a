mod common;

use common::*;
use procred_core::fixtures::{infix_example_nfa, infix_example_sra, random_nfa};
use procred_core::{Config, NfaBuilder, Reg, SraBuilder};
use proptest::prelude::*;

#[test]
fn lifted_infix_keeps_all_transitions_neutral() {
    let a = infix_example_nfa().lift();
    assert_eq!(a.states().len(), 8);
    assert_eq!(a.transitions().len(), 10);
    assert!(a.transitions().iter().all(|t| t.test == Reg::Bot && t.set == Reg::Bot));
}

#[test]
fn epsilon_only_automaton() {
    let mut b = NfaBuilder::new();
    b.symbol("a");
    b.initial("q").accepting("q");
    let a = b.build().unwrap().lift();
    assert!(a.accepts(&[]).unwrap());
    assert_eq!(language(&a, 4).len(), 1);
}

#[test]
fn single_word_automaton() {
    let mut b = NfaBuilder::new();
    b.initial("0").transition("0", "a", "1").transition("1", "b", "2").accepting("2");
    let a = b.build().unwrap().lift();
    let ab = vec![a.symbol("a").unwrap(), a.symbol("b").unwrap()];
    assert_eq!(language(&a, 4), [ab].into_iter().collect());
}

#[test]
fn normalization_with_several_terminals() {
    let mut b = NfaBuilder::new();
    b.initial("0").initial("1").transition("0", "a", "2").transition("1", "b", "3").transition("2", "a", "4");
    b.accepting("2").accepting("3").accepting("4");
    let n = b.build().unwrap();
    let m = n.normalize_terminals();
    assert_eq!(m.initial().len(), 1);
    assert_eq!(m.finals().len(), 1);
    assert!(m.initial().is_disjoint(m.finals()));
    assert_eq!(nfa_language(&n, 5), nfa_language(&m, 5));
}

#[test]
fn normalization_keeps_epsilon() {
    let mut b = NfaBuilder::new();
    b.initial("0").accepting("0").initial("1").transition("0", "a", "1").accepting("1");
    let n = b.build().unwrap();
    let m = n.normalize_terminals();
    assert!(m.initial().is_subset(m.finals()));
    assert_eq!(m.initial().union(m.finals()).count(), 2);
    assert_eq!(nfa_language(&n, 5), nfa_language(&m, 5));
}

#[test]
fn infix_sra_signatures_and_reach() {
    let s = infix_example_sra();
    let q = |n: &str| s.state_by_name(n).unwrap();
    let reach = s.reach();
    assert!(reach.contains(&Config { state: q("q12"), reg: Some(1) }));
    assert!(reach.contains(&Config { state: q("q12"), reg: Some(2) }));
    assert!(!reach.contains(&Config { state: q("q12"), reg: None }));
    let sigs = s.signatures();
    for n in ["q12", "q34", "q56"] {
        assert_eq!(sigs.get(q(n)), &[1, 2].into_iter().collect());
    }
    assert!(sigs.get(q("q0")).is_empty() && sigs.get(q("q7")).is_empty());
}

#[test]
fn infix_sra_words() {
    let s = infix_example_sra();
    assert!(s.accepts_names(&["x", "a", "c", "c", "a", "x"]).unwrap());
    assert!(!s.accepts_names(&["x", "a", "b", "y"]).unwrap());
    assert!(s.accepts_names(&["z"]).is_err());
    assert!(same_language(&s, &infix_example_nfa().lift(), 6));
}

#[test]
fn induced_nfa_of_infix_sra_matches_original_size() {
    let n = infix_example_sra().induced_nfa();
    assert_eq!(n.states().len(), 8);
    assert_eq!(n.transitions().len(), 10);
}

#[test]
fn nested_procedure_signature() {
    // An outer procedure (ids 1, 2) whose inner part is itself shared with a
    // third caller writing 0.
    let (bot, star) = (Reg::Bot, Reg::Star);
    let mut b = SraBuilder::new();
    b.initial("q0")
        .transition("q0", "x", bot, Reg::Sym(1), "q12")
        .transition("q0", "y", bot, Reg::Sym(2), "q12")
        .transition("q0", "z", bot, Reg::Sym(0), "q34")
        .transition("q12", "a", star, star, "q34")
        .transition("q34", "a", star, star, "q56")
        .transition("q56", "z", Reg::Sym(0), bot, "q7")
        .transition("q56", "b", star, star, "q8")
        .transition("q8", "x", Reg::Sym(1), bot, "q7")
        .transition("q8", "y", Reg::Sym(2), bot, "q7")
        .accepting("q7");
    let a = b.build().unwrap();
    let sigs = a.signatures();
    let oracle = brute_signatures(&a);
    let q34 = a.state_by_name("q34").unwrap();
    assert!(sigs.get(q34).is_superset(&[0, 1, 2].into_iter().collect()));
    for q in a.states() {
        assert_eq!(sigs.get(*q), &oracle[q]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reach_matches_product_fixpoint(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_sra(&mut r, 5, 2, 2, 12);
        prop_assert_eq!(a.reach(), brute_reach(&a));
        let sigs = a.signatures();
        for (q, s) in brute_signatures(&a) {
            prop_assert_eq!(sigs.get(q), &s);
        }
    }

    #[test]
    fn reach_is_closed(seed in any::<u64>()) {
        let a = random_sra(&mut rng(seed), 6, 3, 2, 14);
        let reach = a.reach();
        for c in &reach {
            for t in a.transitions().iter().filter(|t| t.src == c.state) {
                if let Some(reg) = t.fire(c.reg) {
                    let next = Config { state: t.dst, reg };
                    prop_assert!(reach.contains(&next));
                }
            }
        }
    }

    #[test]
    fn accepts_matches_induced_nfa(seed in any::<u64>()) {
        let a = random_sra(&mut rng(seed), 8, 3, 2, 16);
        let induced = a.induced_nfa();
        let words = language(&a, 10);
        prop_assert_eq!(&nfa_language(&induced, 10), &words);
        for w in words.iter().take(50) {
            prop_assert!(a.accepts(w).unwrap());
        }
    }

    #[test]
    fn accepts_matches_direct_simulation(seed in any::<u64>(), word in proptest::collection::vec(0u32..2, 0..8)) {
        let a = random_sra(&mut rng(seed), 6, 2, 2, 14);
        let w: Vec<_> = word.into_iter().map(procred_core::Symbol).collect();
        prop_assert_eq!(a.accepts(&w).unwrap(), brute_accepts(&a, &w));
    }

    #[test]
    fn lifted_signatures_are_empty(seed in any::<u64>()) {
        let n = random_nfa(&mut rng(seed), 7, 2, 0.3);
        let sigs = n.lift().signatures();
        prop_assert!(sigs.iter().all(|(_, s)| s.is_empty()));
    }

    #[test]
    fn normalization_preserves_language(seed in any::<u64>()) {
        let n = random_nfa(&mut rng(seed), 10, 2, 0.2);
        let m = n.normalize_terminals();
        prop_assert!(m.initial().union(m.finals()).count() <= 2);
        prop_assert_eq!(nfa_language(&n, 12), nfa_language(&m, 12));
        let a = n.lift();
        let b = a.normalize_terminals();
        prop_assert!(b.terminal_count() <= 2);
        prop_assert!(same_language(&a, &b, 10));
        let (x, y) = procred_core::oracle::align_alphabets(&a, &b);
        let bound = 2 * a.states().len() + 2;
        prop_assert!(procred_core::equivalent_bounded(&x, &y, bound).unwrap().is_equal());
    }

    #[test]
    fn trim_preserves_language(seed in any::<u64>()) {
        let a = random_sra(&mut rng(seed), 7, 3, 2, 16);
        let t = a.trim();
        prop_assert!(t.transitions().len() <= a.transitions().len());
        prop_assert_eq!(language(&a, 8), language(&t, 8));
    }
}
