//! Brute-force oracles and generators shared by the integration tests. Nothing
//! here calls into the library's own simulation code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use procred_core::{Config, Nfa, Reg, RegSym, SelfProduct, SimilarityGraph, Sra, StateId, Symbol, Transition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn step(a: &Sra, cur: &BTreeSet<Config>, x: Symbol) -> BTreeSet<Config> {
    let mut next = BTreeSet::new();
    for c in cur {
        for t in a.transitions() {
            if t.src != c.state || t.sym != x {
                continue;
            }
            let ok = match t.test {
                Reg::Bot => c.reg.is_none(),
                Reg::Sym(v) => c.reg == Some(v),
                Reg::Star => true,
            };
            if ok {
                let reg = match t.set {
                    Reg::Bot => None,
                    Reg::Sym(v) => Some(v),
                    Reg::Star => c.reg,
                };
                next.insert(Config { state: t.dst, reg });
            }
        }
    }
    next
}

fn start(a: &Sra) -> BTreeSet<Config> {
    a.initial().iter().map(|&state| Config { state, reg: None }).collect()
}

fn accepting(a: &Sra, cur: &BTreeSet<Config>) -> bool {
    cur.iter().any(|c| a.finals().contains(&c.state))
}

/// Direct run simulation over the transition list.
pub fn brute_accepts(a: &Sra, word: &[Symbol]) -> bool {
    let mut cur = start(a);
    for &x in word {
        cur = step(a, &cur, x);
    }
    accepting(a, &cur)
}

/// Accepted words of length at most `max_len`, enumerated by depth-first
/// search over prefixes.
pub fn language(a: &Sra, max_len: usize) -> BTreeSet<Vec<Symbol>> {
    fn go(a: &Sra, cur: BTreeSet<Config>, word: &mut Vec<Symbol>, left: usize, out: &mut BTreeSet<Vec<Symbol>>) {
        if accepting(a, &cur) {
            out.insert(word.clone());
        }
        if left == 0 || cur.is_empty() {
            return;
        }
        for x in 0..a.alphabet().len() as u32 {
            word.push(Symbol(x));
            go(a, step(a, &cur, Symbol(x)), word, left - 1, out);
            word.pop();
        }
    }
    let mut out = BTreeSet::new();
    go(a, start(a), &mut Vec::new(), max_len, &mut out);
    out
}

/// Languages compared by symbol names, so differing alphabet orders are fine.
pub fn same_language(x: &Sra, y: &Sra, max_len: usize) -> bool {
    let named = |a: &Sra| -> BTreeSet<Vec<String>> {
        language(a, max_len)
            .into_iter()
            .map(|w| w.iter().map(|s| a.alphabet()[s.0 as usize].clone()).collect())
            .collect()
    };
    named(x) == named(y)
}

pub fn nfa_language(n: &Nfa, max_len: usize) -> BTreeSet<Vec<Symbol>> {
    let mut out = BTreeSet::new();
    let mut frontier: Vec<(Vec<Symbol>, BTreeSet<StateId>)> = vec![(vec![], n.initial().clone())];
    for len in 0..=max_len {
        let mut next = Vec::new();
        for (w, cur) in frontier {
            if cur.iter().any(|q| n.finals().contains(q)) {
                out.insert(w.clone());
            }
            if len == max_len || cur.is_empty() {
                continue;
            }
            for x in 0..n.alphabet().len() as u32 {
                let succ: BTreeSet<StateId> = n
                    .transitions()
                    .iter()
                    .filter(|(r, s, _)| cur.contains(r) && s.0 == x)
                    .map(|&(_, _, d)| d)
                    .collect();
                let mut w2 = w.clone();
                w2.push(Symbol(x));
                next.push((w2, succ));
            }
        }
        frontier = next;
    }
    out
}

/// Fixpoint over the explicit product `Q × (Γ ∪ {⊥})`.
pub fn brute_reach(a: &Sra) -> BTreeSet<Config> {
    let mut seen = start(a);
    loop {
        let mut grew = false;
        for q in a.states() {
            for reg in std::iter::once(None).chain(a.registers().iter().map(|&v| Some(v))) {
                let c = Config { state: *q, reg };
                if !seen.contains(&c) {
                    continue;
                }
                for x in 0..a.alphabet().len() as u32 {
                    for n in step(a, &BTreeSet::from([c]), Symbol(x)) {
                        grew |= seen.insert(n);
                    }
                }
            }
        }
        if !grew {
            return seen;
        }
    }
}

pub fn brute_signatures(a: &Sra) -> BTreeMap<StateId, BTreeSet<RegSym>> {
    let mut out: BTreeMap<StateId, BTreeSet<RegSym>> = a.states().iter().map(|&q| (q, BTreeSet::new())).collect();
    for c in brute_reach(a) {
        if let Some(v) = c.reg {
            out.get_mut(&c.state).unwrap().insert(v);
        }
    }
    out
}

/// Random SRA: `n` states, registers `0..r`, `k` symbols, `m` transitions.
/// Wildcards always come in `*/*` pairs.
pub fn random_sra(rng: &mut impl Rng, n: usize, r: u32, k: usize, m: usize) -> Sra {
    let states: BTreeSet<StateId> = (0..n as u32).map(StateId).collect();
    let names = states.iter().map(|q| (*q, format!("s{}", q.0))).collect();
    let alphabet: Vec<String> = (0..k).map(|i| char::from(b'a' + i as u8).to_string()).collect();
    let reg = |rng: &mut dyn rand::RngCore| -> Reg {
        if r == 0 || rng.gen_bool(0.5) {
            Reg::Bot
        } else {
            Reg::Sym(rng.gen_range(0..r))
        }
    };
    let mut transitions = BTreeSet::new();
    for _ in 0..m {
        let src = StateId(rng.gen_range(0..n as u32));
        let dst = StateId(rng.gen_range(0..n as u32));
        let sym = Symbol(rng.gen_range(0..k as u32));
        let (test, set) = if r > 0 && rng.gen_bool(0.2) { (Reg::Star, Reg::Star) } else { (reg(rng), reg(rng)) };
        transitions.insert(Transition::new(src, sym, test, set, dst));
    }
    let initial = BTreeSet::from([StateId(0)]);
    let mut finals = BTreeSet::from([StateId(n as u32 - 1)]);
    if rng.gen_bool(0.3) {
        finals.insert(StateId(rng.gen_range(0..n as u32)));
    }
    Sra::new(alphabet, states, names, (0..r).collect(), transitions, initial, finals).unwrap()
}

pub fn random_valid_graph(a: &Sra, p: &SelfProduct, rng: &mut impl Rng, max_len: usize) -> Option<SimilarityGraph> {
    procred_core::fixtures::random_similarity_graph(a, p, rng, max_len)
}

/// Valid graphs sampled from lifted random NFAs and from the intermediate
/// automata of their reductions (which carry registers and procedures).
pub fn sample_automata(seed: u64) -> Vec<Sra> {
    let mut r = rng(seed);
    let n = r.gen_range(3..10);
    let k = r.gen_range(1..4);
    let density = r.gen_range(0.1..0.4);
    let a = procred_core::fixtures::random_nfa(&mut r, n, k, density).lift();
    let a = if a.terminal_count() > 2 { a.normalize_terminals() } else { a };
    let mut out = vec![a.trim()];
    let cfg = procred_core::SearchConfig { expansion_budget: 2000, enable_postprocess: false, ..Default::default() };
    procred_core::reduce_observed(&a, &cfg, |_, s| out.push(s.clone())).unwrap();
    out
}
