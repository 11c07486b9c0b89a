//! Self-product, similarity graphs, transition classification and gain.
//!
//! A vertex `(r1, r2)` pairs a state of the first invocation with its
//! counterpart in the second one. The edge set of a [`SimilarityGraph`] built
//! with [`SimilarityGraph::from_path`] is the sub-graph of the self-product
//! induced on the path's vertices.

use std::collections::{BTreeMap, BTreeSet};

use crate::automata::{RegSym, SignatureMap, Sra, StateId, Symbol, Transition};
use crate::error::{Error, Result};
use crate::procedure::procedure_image_count;

pub type Pair = (StateId, StateId);

/// Pair graph whose edges are equal-symbol pairs of register-neutral
/// transitions between non-terminal states. Successors are computed on demand.
#[derive(Debug, Clone)]
pub struct SelfProduct {
    nonterminal: BTreeSet<StateId>,
    neutral_out: BTreeMap<StateId, BTreeMap<Symbol, BTreeSet<StateId>>>,
}

impl SelfProduct {
    pub fn new(a: &Sra) -> Self {
        let nonterminal: BTreeSet<StateId> =
            a.states().iter().copied().filter(|&q| !a.is_terminal(q)).collect();
        let mut neutral_out: BTreeMap<StateId, BTreeMap<Symbol, BTreeSet<StateId>>> = BTreeMap::new();
        for t in a.transitions().iter().filter(|t| t.is_neutral()) {
            if nonterminal.contains(&t.src) && nonterminal.contains(&t.dst) {
                neutral_out.entry(t.src).or_default().entry(t.sym).or_default().insert(t.dst);
            }
        }
        SelfProduct { nonterminal, neutral_out }
    }

    pub fn nonterminal(&self) -> &BTreeSet<StateId> {
        &self.nonterminal
    }

    pub fn contains(&self, v: Pair) -> bool {
        self.nonterminal.contains(&v.0) && self.nonterminal.contains(&v.1)
    }

    /// All ordered pairs of non-terminal states, diagonal included.
    pub fn vertices(&self) -> impl Iterator<Item = Pair> + '_ {
        self.nonterminal
            .iter()
            .flat_map(move |&r| self.nonterminal.iter().map(move |&s| (r, s)))
    }

    /// Successors in ascending order.
    pub fn successors(&self, v: Pair) -> BTreeSet<Pair> {
        let mut out = BTreeSet::new();
        let (Some(m1), Some(m2)) = (self.neutral_out.get(&v.0), self.neutral_out.get(&v.1)) else {
            return out;
        };
        for (a, dsts1) in m1 {
            if let Some(dsts2) = m2.get(a) {
                for &s1 in dsts1 {
                    out.extend(dsts2.iter().map(|&s2| (s1, s2)));
                }
            }
        }
        out
    }

    pub fn has_edge(&self, u: Pair, v: Pair) -> bool {
        let (Some(m1), Some(m2)) = (self.neutral_out.get(&u.0), self.neutral_out.get(&u.1)) else {
            return false;
        };
        m1.iter().any(|(a, d1)| d1.contains(&v.0) && m2.get(a).is_some_and(|d2| d2.contains(&v.1)))
    }

    /// Every edge; quadratic in the number of neutral transitions per symbol.
    pub fn edges(&self) -> BTreeSet<(Pair, Pair)> {
        let mut out = BTreeSet::new();
        for &r1 in self.neutral_out.keys() {
            for &r2 in self.neutral_out.keys() {
                for v in self.successors((r1, r2)) {
                    out.insert(((r1, r2), v));
                }
            }
        }
        out
    }
}

/// A linear similarity graph: `path[0]` is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityGraph {
    path: Vec<Pair>,
    edges: BTreeSet<(Pair, Pair)>,
}

impl SimilarityGraph {
    /// Path with the induced self-product edges.
    pub fn from_path(a: &Sra, path: Vec<Pair>) -> Self {
        Self::from_path_in(&SelfProduct::new(a), path)
    }

    pub fn from_path_in(p: &SelfProduct, path: Vec<Pair>) -> Self {
        let mut edges = BTreeSet::new();
        for &u in &path {
            for &v in &path {
                if p.has_edge(u, v) {
                    edges.insert((u, v));
                }
            }
        }
        SimilarityGraph { path, edges }
    }

    /// Explicit edge set; validation decides whether it is acceptable.
    pub fn with_edges(path: Vec<Pair>, edges: BTreeSet<(Pair, Pair)>) -> Self {
        SimilarityGraph { path, edges }
    }

    pub fn path(&self) -> &[Pair] {
        &self.path
    }

    pub fn root(&self) -> Option<Pair> {
        self.path.first().copied()
    }

    pub fn edges(&self) -> &BTreeSet<(Pair, Pair)> {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    pub fn first_side(&self) -> BTreeSet<StateId> {
        self.path.iter().map(|v| v.0).collect()
    }

    pub fn second_side(&self) -> BTreeSet<StateId> {
        self.path.iter().map(|v| v.1).collect()
    }

    /// Which invocation `q` belongs to (1 or 2), if any.
    pub fn side_of(&self, q: StateId) -> Option<u8> {
        if self.path.iter().any(|v| v.0 == q) {
            Some(1)
        } else if self.path.iter().any(|v| v.1 == q) {
            Some(2)
        } else {
            None
        }
    }
}

/// A reason a similarity graph is unusable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Empty,
    /// Vertex not reachable from the root.
    Rooted(Pair),
    /// A state appears in two vertices of the same invocation.
    Bijection(StateId),
    /// Signatures differ within one invocation.
    SameSignature(u8),
    /// The invocations' signatures share these symbols.
    DisjointSignature(BTreeSet<RegSym>),
    /// A state belongs to both invocations (diagonal vertices included).
    DisjointInvocations(StateId),
    /// The path repeats a vertex or skips a missing edge.
    Linear(usize),
    EdgeNotInSelfProduct(Pair, Pair),
    TerminalVertex(Pair),
}

/// Empty result means the graph is valid.
pub fn validate_simgraph(a: &Sra, g: &SimilarityGraph) -> Vec<Violation> {
    validate_with(a, &a.signatures(), g)
}

pub(crate) fn validate_with(a: &Sra, sigs: &SignatureMap, g: &SimilarityGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let Some(root) = g.root() else {
        return vec![Violation::Empty];
    };
    let vertices: BTreeSet<Pair> = g.path.iter().copied().collect();

    let mut seen = BTreeSet::from([root]);
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &(x, y) in g.edges.range((u, (StateId(0), StateId(0)))..) {
            if x != u {
                break;
            }
            if vertices.contains(&y) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    out.extend(vertices.iter().filter(|v| !seen.contains(v)).map(|&v| Violation::Rooted(v)));

    for (i, w) in g.path.windows(2).enumerate() {
        if !g.edges.contains(&(w[0], w[1])) {
            out.push(Violation::Linear(i + 1));
        }
    }
    if vertices.len() != g.path.len() {
        out.push(Violation::Linear(g.path.len()));
    }

    for proj in [|v: &Pair| v.0, |v: &Pair| v.1] {
        let mut seen_states = BTreeSet::new();
        for v in &vertices {
            if !seen_states.insert(proj(v)) {
                out.push(Violation::Bijection(proj(v)));
            }
        }
    }

    let first = g.first_side();
    let second = g.second_side();
    out.extend(first.intersection(&second).map(|&q| Violation::DisjointInvocations(q)));

    let sig1 = sigs.get(root.0);
    let sig2 = sigs.get(root.1);
    if first.iter().any(|&q| sigs.get(q) != sig1) {
        out.push(Violation::SameSignature(1));
    }
    if second.iter().any(|&q| sigs.get(q) != sig2) {
        out.push(Violation::SameSignature(2));
    }
    let shared: BTreeSet<RegSym> = sig1.intersection(sig2).copied().collect();
    if !shared.is_empty() {
        out.push(Violation::DisjointSignature(shared));
    }

    out.extend(
        vertices
            .iter()
            .filter(|v| a.is_terminal(v.0) || a.is_terminal(v.1))
            .map(|&v| Violation::TerminalVertex(v)),
    );

    let p = SelfProduct::new(a);
    out.extend(
        g.edges
            .iter()
            .filter(|(u, v)| !p.has_edge(*u, *v))
            .map(|&(u, v)| Violation::EdgeNotInSelfProduct(u, v)),
    );
    out
}

/// Transitions grouped by position relative to the two invocations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransitionPartition {
    pub entry: BTreeSet<Transition>,
    pub exit: BTreeSet<Transition>,
    pub common: BTreeSet<Transition>,
    pub unique: BTreeSet<Transition>,
    pub switch: BTreeSet<Transition>,
    pub untouched: BTreeSet<Transition>,
}

impl TransitionPartition {
    pub fn total(&self) -> usize {
        self.entry.len()
            + self.exit.len()
            + self.common.len()
            + self.unique.len()
            + self.switch.len()
            + self.untouched.len()
    }
}

/// Maps each invocation state to its counterpart and side.
pub(crate) struct Mates {
    mate: BTreeMap<StateId, (StateId, u8)>,
}

impl Mates {
    pub(crate) fn new(g: &SimilarityGraph) -> Self {
        let mut mate = BTreeMap::new();
        for &(r1, r2) in g.path() {
            mate.insert(r1, (r2, 1));
            mate.insert(r2, (r1, 2));
        }
        Mates { mate }
    }

    pub(crate) fn side(&self, q: StateId) -> Option<u8> {
        self.mate.get(&q).map(|m| m.1)
    }

    pub(crate) fn vertex(&self, q: StateId) -> Option<Pair> {
        self.mate.get(&q).map(|&(m, side)| if side == 1 { (q, m) } else { (m, q) })
    }

    fn mate(&self, q: StateId) -> Option<StateId> {
        self.mate.get(&q).map(|m| m.0)
    }
}

pub fn classify_transitions(a: &Sra, g: &SimilarityGraph) -> Result<TransitionPartition> {
    let violations = validate_simgraph(a, g);
    if !violations.is_empty() {
        return Err(Error::InvalidGraph(violations));
    }
    Ok(classify_unchecked(a, g))
}

pub(crate) fn classify_unchecked(a: &Sra, g: &SimilarityGraph) -> TransitionPartition {
    let mates = Mates::new(g);
    let mut part = TransitionPartition::default();
    for t in a.transitions() {
        let bucket = match (mates.side(t.src), mates.side(t.dst)) {
            (None, None) => &mut part.untouched,
            (None, Some(_)) => &mut part.entry,
            (Some(_), None) => &mut part.exit,
            (Some(x), Some(y)) if x != y => &mut part.switch,
            _ if is_common(a, g, &mates, t) => &mut part.common,
            _ => &mut part.unique,
        };
        bucket.insert(*t);
    }
    part
}

fn is_common(a: &Sra, g: &SimilarityGraph, mates: &Mates, t: &Transition) -> bool {
    if !t.is_neutral() {
        return false;
    }
    let (Some(r2), Some(s2)) = (mates.mate(t.src), mates.mate(t.dst)) else {
        return false;
    };
    let (Some(u), Some(v)) = (mates.vertex(t.src), mates.vertex(t.dst)) else {
        return false;
    };
    g.edges().contains(&(u, v))
        && a.transitions()
            .iter()
            .any(|o| o.src == r2 && o.dst == s2 && o.sym == t.sym && o.is_neutral())
}

/// Extra transitions produced by expanding a wildcard out of `r` into one
/// guard per invocation symbol. A state with an empty signature gets a single
/// fresh symbol, so it costs nothing.
pub(crate) fn expansion_loss(sigs: &SignatureMap, r: StateId) -> i64 {
    sigs.get(r).len().max(1) as i64 - 1
}

/// Predicted decrease of `|δ|` from merging the invocations of `g`:
/// common savings minus the guard expansions of wildcard unique and exit
/// transitions.
///
/// Common transitions collapse into one wildcard per (procedure source,
/// symbol, procedure target); the saving is their count minus the number of
/// distinct collapsed transitions, which is half of `|Common|` whenever they
/// pair up one-to-one.
///
/// Transitions that can never fire may map onto the same procedure
/// transition; each such coincidence adds one to the gain. On a trimmed
/// automaton there are none.
pub fn gain(a: &Sra, g: &SimilarityGraph) -> Result<i64> {
    let part = classify_transitions(a, g)?;
    let sigs = a.signatures();
    let predicted = gain_of_partition(&sigs, g, &part);
    let touched = (part.total() - part.untouched.len()) as i64;
    let exact = touched - procedure_image_count(a, &sigs, g)? as i64;
    if exact != predicted {
        log::debug!("{} dead transitions coincide after merging", exact - predicted);
    }
    Ok(exact)
}

pub(crate) fn gain_of_partition(sigs: &SignatureMap, g: &SimilarityGraph, part: &TransitionPartition) -> i64 {
    let mates = Mates::new(g);
    let collapsed: BTreeSet<(Pair, Symbol, Pair)> = part
        .common
        .iter()
        .map(|t| (mates.vertex(t.src).unwrap(), t.sym, mates.vertex(t.dst).unwrap()))
        .collect();
    let gain_com = part.common.len() as i64 - collapsed.len() as i64;
    let loss = |set: &BTreeSet<Transition>| -> i64 {
        set.iter().filter(|t| t.is_wildcard()).map(|t| expansion_loss(sigs, t.src)).sum()
    };
    gain_com - loss(&part.unique) - loss(&part.exit)
}
