//! Language-equivalence checks and size metrics.
//!
//! Both checks run a breadth-first search over pairs of configuration sets,
//! expanding symbols in index order, so the first distinguishing pair found
//! yields the shortest counterexample, lexicographically smallest among
//! those. Configuration sets of an SRA are exactly the subset-construction
//! states of its induced NFA.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::automata::{Config, RegSym, Sra, Symbol, Transition};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equal,
    /// Accepted by exactly one of the two automata.
    Counterexample(Vec<Symbol>),
    /// Determinization exceeded the subset cap; no verdict.
    CapExceeded,
}

impl Equivalence {
    pub fn is_equal(&self) -> bool {
        matches!(self, Equivalence::Equal)
    }
}

type ConfigSet = BTreeSet<Config>;

fn check_alphabets(x: &Sra, y: &Sra) -> Result<()> {
    if x.alphabet() != y.alphabet() {
        return Err(Error::AlphabetMismatch(format!("{:?} vs {:?}", x.alphabet(), y.alphabet())));
    }
    Ok(())
}

/// Compares all words of length at most `max_len`.
pub fn equivalent_bounded(x: &Sra, y: &Sra, max_len: usize) -> Result<Equivalence> {
    check_alphabets(x, y)?;
    Ok(product_search(x, y, Some(max_len), None))
}

/// Exact comparison; gives up once either side has more than `config_cap`
/// distinct configuration sets.
pub fn equivalent_exact(x: &Sra, y: &Sra, config_cap: usize) -> Result<Equivalence> {
    check_alphabets(x, y)?;
    Ok(product_search(x, y, None, Some(config_cap)))
}

/// Twice the larger reachable-configuration count, plus two.
pub fn default_bound(x: &Sra, y: &Sra) -> usize {
    2 * x.reach().len().max(y.reach().len()) + 2
}

fn product_search(x: &Sra, y: &Sra, max_len: Option<usize>, cap: Option<usize>) -> Equivalence {
    let (ox, oy) = (x.out_index(), y.out_index());
    let start = (x.initial_set(), y.initial_set());
    let mut parent: HashMap<(ConfigSet, ConfigSet), Option<((ConfigSet, ConfigSet), Symbol)>> = HashMap::new();
    let mut seen_x: BTreeSet<ConfigSet> = BTreeSet::from([start.0.clone()]);
    let mut seen_y: BTreeSet<ConfigSet> = BTreeSet::from([start.1.clone()]);
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([(start, 0usize)]);
    let symbols: Vec<Symbol> = (0..x.alphabet().len() as u32).map(Symbol).collect();

    while let Some((node, depth)) = queue.pop_front() {
        if x.is_accepting_set(&node.0) != y.is_accepting_set(&node.1) {
            return Equivalence::Counterexample(word_to(&parent, &node));
        }
        if max_len.is_some_and(|m| depth >= m) {
            continue;
        }
        for &a in &symbols {
            let next = (x.step(&ox, &node.0, a), y.step(&oy, &node.1, a));
            if parent.contains_key(&next) {
                continue;
            }
            seen_x.insert(next.0.clone());
            seen_y.insert(next.1.clone());
            if cap.is_some_and(|c| seen_x.len() > c || seen_y.len() > c) {
                return Equivalence::CapExceeded;
            }
            parent.insert(next.clone(), Some((node.clone(), a)));
            queue.push_back((next, depth + 1));
        }
    }
    Equivalence::Equal
}

fn word_to(
    parent: &HashMap<(ConfigSet, ConfigSet), Option<((ConfigSet, ConfigSet), Symbol)>>,
    node: &(ConfigSet, ConfigSet),
) -> Vec<Symbol> {
    let mut word = Vec::new();
    let mut cur = node;
    while let Some(Some((prev, a))) = parent.get(cur) {
        word.push(*a);
        cur = prev;
    }
    word.reverse();
    word
}

/// Size figures of an automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub states: usize,
    pub transitions: usize,
    pub registers: usize,
    pub states_plus_registers: usize,
    /// Transitions other than `_/_` and `*/*`.
    pub register_transitions: usize,
    /// 72 bits per register-free transition, 80 per register-using one.
    pub bits: usize,
}

pub fn metrics(a: &Sra) -> Metrics {
    let register_transitions = a.transitions().iter().filter(|t| t.uses_register()).count();
    let transitions = a.transitions().len();
    Metrics {
        states: a.states().len(),
        transitions,
        registers: a.registers().len(),
        states_plus_registers: a.states().len() + a.registers().len(),
        register_transitions,
        bits: 72 * (transitions - register_transitions) + 80 * register_transitions,
    }
}

/// Two signature sets whose procedure state sets overlap without nesting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestingViolation {
    pub first: BTreeSet<RegSym>,
    pub second: BTreeSet<RegSym>,
}

/// For every distinct nonempty signature `I`, the procedure of `I` is the set
/// of states whose signature contains `I`. These sets must form a laminar
/// family.
pub fn nesting_violation(a: &Sra) -> Option<NestingViolation> {
    let sigs = a.signatures();
    let distinct: BTreeSet<&BTreeSet<RegSym>> = sigs.iter().map(|(_, s)| s).filter(|s| !s.is_empty()).collect();
    let members: BTreeMap<&BTreeSet<RegSym>, BTreeSet<_>> = distinct
        .iter()
        .map(|&i| (i, sigs.iter().filter(|(_, s)| i.is_subset(s)).map(|(&q, _)| q).collect()))
        .collect();
    let family: Vec<_> = members.into_iter().collect();
    for (k, (i, p)) in family.iter().enumerate() {
        for (j, q) in &family[k + 1..] {
            if !p.is_disjoint(q) && !p.is_subset(q) && !q.is_subset(p) {
                return Some(NestingViolation { first: (*i).clone(), second: (*j).clone() });
            }
        }
    }
    None
}

pub fn is_well_nested(a: &Sra) -> bool {
    nesting_violation(a).is_none()
}

/// Re-indexes `a` over `alphabet`, which must contain every symbol name of
/// `a`.
pub fn with_alphabet(a: &Sra, alphabet: &[String]) -> Result<Sra> {
    let index: BTreeMap<&str, Symbol> =
        alphabet.iter().enumerate().map(|(i, s)| (s.as_str(), Symbol(i as u32))).collect();
    let remap = a
        .alphabet()
        .iter()
        .map(|n| index.get(n.as_str()).copied().ok_or_else(|| Error::UnknownSymbolName(n.clone())))
        .collect::<Result<Vec<_>>>()?;
    let transitions = a
        .transitions()
        .iter()
        .map(|t| Transition { sym: remap[t.sym.0 as usize], ..*t })
        .collect();
    let mut out = a.with_transitions(transitions);
    out.alphabet = alphabet.to_vec();
    Ok(out)
}

/// Both automata over the union of their alphabets, `x`'s symbols first.
pub fn align_alphabets(x: &Sra, y: &Sra) -> (Sra, Sra) {
    let mut alphabet: Vec<String> = x.alphabet().to_vec();
    for s in y.alphabet() {
        if !alphabet.contains(s) {
            alphabet.push(s.clone());
        }
    }
    let x = with_alphabet(x, &alphabet).expect("union covers x");
    let y = with_alphabet(y, &alphabet).expect("union covers y");
    (x, y)
}
