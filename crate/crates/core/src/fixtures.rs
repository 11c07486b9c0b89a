//! Automata used by tests, benchmarks and examples.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::automata::{Nfa, NfaBuilder, Reg, Sra, SraBuilder};
use crate::simgraph::{validate_simgraph as validate, SelfProduct, SimilarityGraph};

/// NFA for `(xac*ax)+(ya(a+b)y)`: 8 states, 10 transitions.
pub fn infix_example_nfa() -> Nfa {
    let mut b = NfaBuilder::new();
    for i in 0..8 {
        b.state(&format!("q{i}"));
    }
    b.initial("q0").accepting("q7");
    b.transition("q0", "x", "q1")
        .transition("q1", "a", "q3")
        .transition("q3", "c", "q3")
        .transition("q3", "a", "q5")
        .transition("q5", "x", "q7")
        .transition("q0", "y", "q2")
        .transition("q2", "a", "q4")
        .transition("q4", "a", "q6")
        .transition("q4", "b", "q6")
        .transition("q6", "y", "q7");
    b.build().expect("fixture is well formed")
}

/// The infix example after merging its two branches into one procedure:
/// 5 states, 8 transitions, register symbols {1, 2}.
pub fn infix_example_sra() -> Sra {
    let (bot, star) = (Reg::Bot, Reg::Star);
    let (one, two) = (Reg::Sym(1), Reg::Sym(2));
    let mut b = SraBuilder::new();
    b.initial("q0").accepting("q7");
    b.transition("q0", "x", bot, one, "q12")
        .transition("q0", "y", bot, two, "q12")
        .transition("q12", "a", star, star, "q34")
        .transition("q34", "c", one, one, "q34")
        .transition("q34", "a", star, star, "q56")
        .transition("q34", "b", two, two, "q56")
        .transition("q56", "x", one, bot, "q7")
        .transition("q56", "y", two, bot, "q7");
    b.build().expect("fixture is well formed")
}

/// Single-word automaton for `x a^n y` with `n + 3` states.
pub fn word_automaton(n: usize) -> Nfa {
    let mut b = NfaBuilder::new();
    let q = |i: usize| format!("q{i}");
    b.initial(&q(0)).transition(&q(0), "x", &q(1));
    for i in 1..=n {
        b.transition(&q(i), "a", &q(i + 1));
    }
    b.transition(&q(n + 1), "y", &q(n + 2)).accepting(&q(n + 2));
    b.build().expect("fixture is well formed")
}

/// Two branches `x w x` and `y w y` sharing the infix `w` of `k` distinct
/// letters; `2k + 4` transitions.
pub fn shared_infix(k: usize) -> Nfa {
    let mut b = NfaBuilder::new();
    b.initial("i").accepting("f");
    for (tag, delim) in [("u", "x"), ("v", "y")] {
        let st = |j: usize| format!("{tag}{j}");
        b.transition("i", delim, &st(0));
        for j in 0..k {
            b.transition(&st(j), &format!("c{j}"), &st(j + 1));
        }
        b.transition(&st(k), delim, "f");
    }
    b.build().expect("fixture is well formed")
}

/// Random NFA over `n` states and `k` symbols; each possible transition is
/// present with probability `density`. State 0 is initial; every state is
/// final with probability 1/4, and the last state is always final.
pub fn random_nfa<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, density: f64) -> Nfa {
    let mut b = NfaBuilder::new();
    for i in 0..n {
        b.state(&format!("s{i}"));
    }
    for a in 0..k {
        b.symbol(&sym_name(a));
    }
    b.initial("s0").accepting(&format!("s{}", n - 1));
    for i in 0..n {
        if rng.gen_bool(0.25) {
            b.accepting(&format!("s{i}"));
        }
        for a in 0..k {
            for j in 0..n {
                if rng.gen_bool(density) {
                    b.transition(&format!("s{i}"), &sym_name(a), &format!("s{j}"));
                }
            }
        }
    }
    b.build().expect("generated automaton is well formed")
}

fn sym_name(a: usize) -> String {
    char::from(b'a' + a as u8).to_string()
}

/// Union of literal keywords sharing no states, e.g. a pattern set before
/// any prefix merging.
pub fn keyword_union(words: &[&str]) -> Nfa {
    let mut b = NfaBuilder::new();
    b.initial("i").accepting("f");
    for (w, word) in words.iter().enumerate() {
        let chars: Vec<String> = word.chars().map(String::from).collect();
        let st = |j: usize| if j == 0 { "i".to_string() } else if j == chars.len() { "f".to_string() } else { format!("w{w}_{j}") };
        for (j, c) in chars.iter().enumerate() {
            b.transition(&st(j), c, &st(j + 1));
        }
    }
    b.build().expect("fixture is well formed")
}

/// A random valid linear similarity graph of at most `max_len` vertices,
/// grown by a random walk in the self-product; `None` if the walk's first
/// vertex is already invalid.
pub fn random_similarity_graph<R: Rng + ?Sized>(
    a: &Sra,
    p: &SelfProduct,
    rng: &mut R,
    max_len: usize,
) -> Option<SimilarityGraph> {
    let vertices: Vec<_> = p.vertices().filter(|v| v.0 != v.1).collect();
    let root = *vertices.choose(rng)?;
    let mut path = vec![root];
    if !validate(a, &SimilarityGraph::from_path_in(p, path.clone())).is_empty() {
        return None;
    }
    while path.len() < max_len {
        let tail = *path.last().expect("path is nonempty");
        let mut succ: Vec<_> = p.successors(tail).into_iter().collect();
        succ.shuffle(rng);
        let next = succ.into_iter().find(|&v| {
            let mut cand = path.clone();
            cand.push(v);
            validate(a, &SimilarityGraph::from_path_in(p, cand)).is_empty()
        });
        match next {
            Some(v) => path.push(v),
            None => break,
        }
    }
    Some(SimilarityGraph::from_path_in(p, path))
}
