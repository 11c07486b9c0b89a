//! Similarity-graph search over the self-product.
//!
//! States are re-indexed densely so that path bookkeeping is array-based.
//! Path gains are maintained incrementally: adding a vertex only changes the
//! classification of transitions incident to its two states, plus the number
//! of collapsed common groups that involve the new vertex.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::automata::{RegSym, Sra, StateId};
use crate::oracle::is_well_nested;
use crate::procedure::create_procedure;
use crate::simgraph::{expansion_loss, Pair, SimilarityGraph};

use super::SearchConfig;

type Dense = (u32, u32);

struct Tr {
    src: u32,
    dst: u32,
    sym: u32,
    neutral: bool,
    wildcard: bool,
    loss: i64,
    /// First neutral transition of its (src, sym, dst) triple.
    first_neutral: bool,
}

pub(crate) struct SearchContext<'a> {
    pub(crate) sra: &'a Sra,
    states: Vec<StateId>,
    index: HashMap<StateId, u32>,
    nonterminal: Vec<bool>,
    sig_class: Vec<u32>,
    sig_sets: Vec<BTreeSet<RegSym>>,
    trans: Vec<Tr>,
    incident: Vec<Vec<u32>>,
    /// Sorted (symbol, target) of neutral transitions between non-terminals.
    neutral_out: Vec<Vec<(u32, u32)>>,
    successors: HashMap<Dense, Rc<[Dense]>>,
    memo: HashMap<(Dense, usize), i64>,
    budget: usize,
    pub(crate) budget_hits: usize,
    scratch: Option<PathState>,
}

/// A partial linear similarity graph with its exact gain.
struct PathState {
    path: Vec<Dense>,
    /// 0 = outside, 1 or 2 = invocation.
    side: Vec<u8>,
    mate: Vec<u32>,
    gain: i64,
}

impl PathState {
    fn new(n: usize) -> Self {
        PathState { path: Vec::new(), side: vec![0; n], mate: vec![0; n], gain: 0 }
    }

    fn clear(&mut self) {
        for &(a, b) in &self.path {
            self.side[a as usize] = 0;
            self.side[b as usize] = 0;
        }
        self.path.clear();
        self.gain = 0;
    }
}

impl<'a> SearchContext<'a> {
    pub(crate) fn new(sra: &'a Sra, cfg: &SearchConfig) -> Self {
        let states: Vec<StateId> = sra.states().iter().copied().collect();
        let index: HashMap<StateId, u32> = states.iter().enumerate().map(|(i, &q)| (q, i as u32)).collect();
        let n = states.len();
        let nonterminal: Vec<bool> = states.iter().map(|&q| !sra.is_terminal(q)).collect();
        let sigs = sra.signatures();

        let mut sig_sets: Vec<BTreeSet<RegSym>> = Vec::new();
        let mut sig_ids: HashMap<BTreeSet<RegSym>, u32> = HashMap::new();
        let sig_class = states
            .iter()
            .map(|&q| {
                let s = sigs.get(q);
                *sig_ids.entry(s.clone()).or_insert_with(|| {
                    sig_sets.push(s.clone());
                    sig_sets.len() as u32 - 1
                })
            })
            .collect();

        let mut trans = Vec::with_capacity(sra.transitions().len());
        let mut incident = vec![Vec::new(); n];
        let mut neutral_out = vec![Vec::new(); n];
        let mut seen_triples = BTreeSet::new();
        for t in sra.transitions() {
            let (src, dst) = (index[&t.src], index[&t.dst]);
            let neutral = t.is_neutral();
            let first_neutral = neutral && seen_triples.insert((src, t.sym.0, dst));
            let i = trans.len() as u32;
            incident[src as usize].push(i);
            if dst != src {
                incident[dst as usize].push(i);
            }
            if neutral && nonterminal[src as usize] && nonterminal[dst as usize] {
                neutral_out[src as usize].push((t.sym.0, dst));
            }
            trans.push(Tr {
                src,
                dst,
                sym: t.sym.0,
                neutral,
                wildcard: t.is_wildcard(),
                loss: expansion_loss(&sigs, t.src),
                first_neutral,
            });
        }
        for v in &mut neutral_out {
            v.sort_unstable();
            v.dedup();
        }
        SearchContext {
            sra,
            states,
            index,
            nonterminal,
            sig_class,
            sig_sets,
            trans,
            incident,
            neutral_out,
            successors: HashMap::new(),
            memo: HashMap::new(),
            budget: cfg.expansion_budget,
            budget_hits: 0,
            scratch: None,
        }
    }

    fn dense(&self, v: Pair) -> Option<Dense> {
        Some((*self.index.get(&v.0)?, *self.index.get(&v.1)?))
    }

    fn external(&self, v: Dense) -> Pair {
        (self.states[v.0 as usize], self.states[v.1 as usize])
    }

    fn take_scratch(&mut self) -> PathState {
        self.scratch.take().unwrap_or_else(|| PathState::new(self.states.len()))
    }

    fn put_scratch(&mut self, mut st: PathState) {
        st.clear();
        self.scratch = Some(st);
    }

    /// Self-product successors, ascending.
    fn successors(&mut self, v: Dense) -> Rc<[Dense]> {
        if let Some(s) = self.successors.get(&v) {
            return Rc::clone(s);
        }
        let (o1, o2) = (&self.neutral_out[v.0 as usize], &self.neutral_out[v.1 as usize]);
        let mut out = Vec::new();
        for &(a, s1) in o1 {
            let lo = o2.partition_point(|&(b, _)| b < a);
            out.extend(o2[lo..].iter().take_while(|&&(b, _)| b == a).map(|&(_, s2)| (s1, s2)));
        }
        out.sort_unstable();
        out.dedup();
        let out: Rc<[Dense]> = out.into();
        self.successors.insert(v, Rc::clone(&out));
        out
    }

    fn has_neutral(&self, r: u32, a: u32, s: u32) -> bool {
        self.neutral_out[r as usize].binary_search(&(a, s)).is_ok()
    }

    fn sig(&self, q: u32) -> &BTreeSet<RegSym> {
        &self.sig_sets[self.sig_class[q as usize] as usize]
    }

    fn admissible(&self, st: &PathState, x: Dense) -> bool {
        let (a, b) = (x.0 as usize, x.1 as usize);
        if a == b || st.side[a] != 0 || st.side[b] != 0 || !self.nonterminal[a] || !self.nonterminal[b] {
            return false;
        }
        match st.path.first() {
            None => self.sig(x.0).is_disjoint(self.sig(x.1)),
            Some(&(r1, r2)) => {
                self.sig_class[a] == self.sig_class[r1 as usize] && self.sig_class[b] == self.sig_class[r2 as usize]
            }
        }
    }

    fn is_common(&self, st: &PathState, t: &Tr) -> bool {
        t.neutral && self.has_neutral(st.mate[t.src as usize], t.sym, st.mate[t.dst as usize])
    }

    /// +1 per common transition, minus the expansion loss of wildcard unique
    /// and exit transitions.
    fn contribution(&self, st: &PathState, t: &Tr) -> i64 {
        let rs = st.side[t.src as usize];
        if rs == 0 {
            return 0;
        }
        let ds = st.side[t.dst as usize];
        if ds == 0 {
            return if t.wildcard { -t.loss } else { 0 };
        }
        if ds != rs {
            return 0;
        }
        if self.is_common(st, t) {
            1
        } else if t.wildcard {
            -t.loss
        } else {
            0
        }
    }

    /// Contributions of the transitions incident to `x`, minus the common
    /// groups with a first-side transition incident to `x.0` (every group
    /// involving the vertex `x` has one).
    fn local_gain(&self, st: &PathState, x: Dense) -> i64 {
        let mut total = 0;
        for &i in &self.incident[x.0 as usize] {
            let t = &self.trans[i as usize];
            total += self.contribution(st, t);
            if t.first_neutral && st.side[t.src as usize] == 1 && st.side[t.dst as usize] == 1 && self.is_common(st, t)
            {
                total -= 1;
            }
        }
        for &i in &self.incident[x.1 as usize] {
            let t = &self.trans[i as usize];
            if t.src != x.0 && t.dst != x.0 {
                total += self.contribution(st, t);
            }
        }
        total
    }

    fn push(&self, st: &mut PathState, x: Dense) {
        let before = self.local_gain(st, x);
        st.side[x.0 as usize] = 1;
        st.side[x.1 as usize] = 2;
        st.mate[x.0 as usize] = x.1;
        st.mate[x.1 as usize] = x.0;
        st.path.push(x);
        st.gain += self.local_gain(st, x) - before;
    }

    fn pop(&self, st: &mut PathState) {
        let x = *st.path.last().expect("nonempty path");
        let after = self.local_gain(st, x);
        st.path.pop();
        st.side[x.0 as usize] = 0;
        st.side[x.1 as usize] = 0;
        st.gain -= after - self.local_gain(st, x);
    }

    /// Gain of `path` built incrementally; `None` if some vertex is not
    /// admissible.
    pub(crate) fn path_gain(&mut self, path: &[Pair]) -> Option<i64> {
        let mut st = self.take_scratch();
        let mut ok = true;
        for &v in path {
            match self.dense(v) {
                Some(x) if self.admissible(&st, x) => self.push(&mut st, x),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        let gain = st.gain;
        self.put_scratch(st);
        ok.then_some(gain)
    }

    /// Best gain over admissible simple paths of at most `d` edges from `n`;
    /// `i64::MIN` if `n` is not admissible.
    pub(crate) fn gain_d(&mut self, n: Pair, d: usize) -> i64 {
        match self.dense(n) {
            Some(x) => self.gain_d_dense(x, d),
            None => i64::MIN,
        }
    }

    fn gain_d_dense(&mut self, n: Dense, d: usize) -> i64 {
        let key = (if n.0 <= n.1 { n } else { (n.1, n.0) }, d);
        if let Some(&g) = self.memo.get(&key) {
            return g;
        }
        let mut st = self.take_scratch();
        if !self.admissible(&st, n) {
            self.put_scratch(st);
            return i64::MIN;
        }
        self.push(&mut st, n);
        let mut best = st.gain;
        let mut budget = self.budget;
        if self.explore(&mut st, d, &mut best, &mut budget) {
            self.budget_hits += 1;
            log::debug!("depth-limited search from {:?} hit the expansion budget", self.external(n));
        }
        self.put_scratch(st);
        self.memo.insert(key, best);
        best
    }

    /// Returns true when the budget ran out.
    fn explore(&mut self, st: &mut PathState, depth: usize, best: &mut i64, budget: &mut usize) -> bool {
        if depth == 0 {
            return false;
        }
        let tail = *st.path.last().unwrap();
        let succ = self.successors(tail);
        for &x in succ.iter() {
            if !self.admissible(st, x) {
                continue;
            }
            if *budget == 0 {
                return true;
            }
            *budget -= 1;
            self.push(st, x);
            *best = (*best).max(st.gain);
            let exhausted = self.explore(st, depth - 1, best, budget);
            self.pop(st);
            if exhausted {
                return true;
            }
        }
        false
    }

    /// Unordered root candidates: distinct states sharing an outgoing
    /// register-neutral symbol, with disjoint signatures.
    fn root_candidates(&self) -> BTreeSet<Dense> {
        let mut by_symbol: HashMap<u32, BTreeSet<u32>> = HashMap::new();
        for (r, outs) in self.neutral_out.iter().enumerate() {
            for &(a, _) in outs {
                by_symbol.entry(a).or_default().insert(r as u32);
            }
        }
        let mut out = BTreeSet::new();
        for srcs in by_symbol.values() {
            let srcs: Vec<u32> = srcs.iter().copied().collect();
            for (i, &r1) in srcs.iter().enumerate() {
                for &r2 in &srcs[i + 1..] {
                    if self.sig(r1).is_disjoint(self.sig(r2)) {
                        out.insert((r1, r2));
                    }
                }
            }
        }
        out
    }

    fn fresh_symbols(&self, v: Dense) -> usize {
        usize::from(self.sig(v.0).is_empty()) + usize::from(self.sig(v.1).is_empty())
    }

    /// Roots with positive depth-limited gain, best first: higher gain, then
    /// fewer fresh id symbols, then smaller pair.
    pub(crate) fn ranked_roots(&mut self, d: usize) -> Vec<(Pair, i64)> {
        let mut scored: Vec<(Dense, i64)> = Vec::new();
        for v in self.root_candidates() {
            let g = self.gain_d_dense(v, d);
            if g > 0 {
                scored.push((v, g));
            }
        }
        scored.sort_by(|(u, gu), (v, gv)| {
            gv.cmp(gu).then(self.fresh_symbols(*u).cmp(&self.fresh_symbols(*v))).then(u.cmp(v))
        });
        scored.into_iter().map(|(v, g)| (self.external(v), g)).collect()
    }

    /// Greedy forward extension from `root`: append the admissible successor
    /// of the tail with the highest depth-limited gain among those that
    /// strictly increase the path gain. Returns the path and its gain.
    pub(crate) fn extend(&mut self, root: Pair, d: usize) -> (Vec<Pair>, i64) {
        let mut st = PathState::new(self.states.len());
        let root = match self.dense(root) {
            Some(r) if self.admissible(&st, r) => r,
            _ => return (Vec::new(), i64::MIN),
        };
        self.push(&mut st, root);
        loop {
            let tail = *st.path.last().unwrap();
            let mut choice: Option<(i64, Dense)> = None;
            let succ = self.successors(tail);
            for &x in succ.iter() {
                if !self.admissible(&st, x) {
                    continue;
                }
                let current = st.gain;
                self.push(&mut st, x);
                let improved = st.gain > current;
                self.pop(&mut st);
                if !improved {
                    continue;
                }
                let score = self.gain_d_dense(x, d);
                if choice.is_none_or(|(best, _)| score > best) {
                    choice = Some((score, x));
                }
            }
            match choice {
                Some((_, x)) => self.push(&mut st, x),
                None => break,
            }
        }
        let path = st.path.iter().map(|&v| self.external(v)).collect();
        (path, st.gain)
    }
}

/// A similarity graph chosen by the search, with its predicted gain.
#[derive(Debug, Clone)]
pub struct Found {
    pub graph: SimilarityGraph,
    pub gain: i64,
    /// The automaton after merging the graph's invocations.
    pub merged: Sra,
}

/// Tries the best-ranked roots in order and returns the first greedy path
/// with positive gain whose merge keeps procedures well nested.
pub(crate) fn search(ctx: &mut SearchContext<'_>, cfg: &SearchConfig) -> Option<Found> {
    let d = cfg.depth_limit;
    let roots = ctx.ranked_roots(d);
    for &(root, _) in roots.iter().take(cfg.root_retries) {
        let (path, gain) = ctx.extend(root, d);
        if gain <= 0 {
            log::debug!("root {:?} stalled at gain {}", root, gain);
            continue;
        }
        let graph = SimilarityGraph::from_path(ctx.sra, path);
        let merged = match create_procedure(ctx.sra, &graph) {
            Ok(m) => m,
            Err(e) => {
                log::warn!("rejected candidate from {:?}: {e}", root);
                continue;
            }
        };
        if !is_well_nested(&merged) {
            log::debug!("root {:?} breaks procedure nesting", root);
            continue;
        }
        return Some(Found { graph, gain, merged });
    }
    None
}
