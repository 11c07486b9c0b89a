//! Register-alphabet compaction and vacuous-guard removal.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;

use crate::automata::{Reg, RegSym, SignatureMap, Sra, StateId, Symbol, Transition};

/// Classes of register symbols under the transitive closure of "occur
/// together in some signature".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolPartition {
    /// Sorted by smallest member.
    pub classes: Vec<BTreeSet<RegSym>>,
    /// Index of the target class: the largest, ties to the first.
    pub largest: usize,
    /// Renaming of every symbol into the target class; rank-preserving
    /// within each class.
    pub renaming: BTreeMap<RegSym, RegSym>,
}

impl SymbolPartition {
    pub fn new(registers: &BTreeSet<RegSym>, sigs: &SignatureMap) -> Self {
        let index: BTreeMap<RegSym, usize> = registers.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let symbols: Vec<RegSym> = registers.iter().copied().collect();
        let mut uf = UnionFind::<usize>::new(symbols.len());
        for (_, sig) in sigs.iter() {
            let mut members = sig.iter().filter_map(|v| index.get(v));
            if let Some(&first) = members.next() {
                for &other in members {
                    uf.union(first, other);
                }
            }
        }
        let mut by_root: BTreeMap<usize, BTreeSet<RegSym>> = BTreeMap::new();
        for (i, &v) in symbols.iter().enumerate() {
            by_root.entry(uf.find(i)).or_default().insert(v);
        }
        let mut classes: Vec<BTreeSet<RegSym>> = by_root.into_values().collect();
        classes.sort_by_key(|c| c.iter().next().copied());
        let largest = classes
            .iter()
            .enumerate()
            .max_by(|(i, x), (j, y)| x.len().cmp(&y.len()).then(j.cmp(i)))
            .map_or(0, |(i, _)| i);
        let mut renaming = BTreeMap::new();
        if let Some(target) = classes.get(largest) {
            for class in &classes {
                renaming.extend(class.iter().copied().zip(target.iter().copied()));
            }
        }
        SymbolPartition { classes, largest, renaming }
    }

    pub fn target(&self) -> BTreeSet<RegSym> {
        self.classes.get(self.largest).cloned().unwrap_or_default()
    }
}

/// Transitions whose concrete test symbol never occurs at their source.
/// They can never fire, but renaming could make them live.
fn prune_dead_tests(a: &Sra, sigs: &SignatureMap) -> BTreeSet<Transition> {
    a.transitions()
        .iter()
        .filter(|t| t.test.symbol().is_none_or(|v| sigs.get(t.src).contains(&v)))
        .copied()
        .collect()
}

/// Renames symbols that never meet onto the largest class of co-occurring
/// symbols. Transitions with unsatisfiable concrete tests are dropped first.
pub fn merge_register_symbols(a: &Sra) -> Sra {
    if a.registers().is_empty() {
        return a.clone();
    }
    let sigs = a.signatures();
    let part = SymbolPartition::new(a.registers(), &sigs);
    let rename = |r: Reg| match r {
        Reg::Sym(v) => Reg::Sym(part.renaming[&v]),
        other => other,
    };
    let transitions = prune_dead_tests(a, &sigs)
        .into_iter()
        .map(|t| Transition { test: rename(t.test), set: rename(t.set), ..t })
        .collect();
    let mut out = a.with_transitions(transitions);
    out.registers = part.target();
    out
}

/// One collapsed guard set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardCollapse {
    pub src: StateId,
    pub sym: Symbol,
    pub dst: StateId,
    /// Number of guards removed, `|Sig(src)|`.
    pub guards: usize,
    /// An equivalent wildcard was already present, so nothing was added.
    pub absorbed: bool,
}

/// Replaces every complete guard set `{r -a,v/v-> s | v ∈ Sig(r)}` by a single
/// wildcard `r -a,*/*-> s`.
pub fn remove_vacuous_guards(a: &Sra) -> Sra {
    remove_vacuous_guards_detailed(a).0
}

pub fn remove_vacuous_guards_detailed(a: &Sra) -> (Sra, Vec<GuardCollapse>) {
    let mut current = a.clone();
    let mut log = Vec::new();
    loop {
        let sigs = current.signatures();
        let mut guards: BTreeMap<(StateId, Symbol, StateId), BTreeSet<RegSym>> = BTreeMap::new();
        for t in current.transitions() {
            if let (Reg::Sym(x), Reg::Sym(y)) = (t.test, t.set) {
                if x == y {
                    guards.entry((t.src, t.sym, t.dst)).or_default().insert(x);
                }
            }
        }
        let mut transitions = current.transitions().clone();
        let mut changed = false;
        for ((src, sym, dst), present) in guards {
            let sig = sigs.get(src);
            if sig.is_empty() || !sig.is_subset(&present) {
                continue;
            }
            for &v in sig {
                transitions.remove(&Transition::new(src, sym, Reg::Sym(v), Reg::Sym(v), dst));
            }
            let absorbed = !transitions.insert(Transition::new(src, sym, Reg::Star, Reg::Star, dst));
            log.push(GuardCollapse { src, sym, dst, guards: sig.len(), absorbed });
            changed = true;
        }
        if !changed {
            return (current, log);
        }
        current = current.with_transitions(transitions);
    }
}

/// Outcome of the post-processing passes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostprocessReport {
    pub registers_before: usize,
    pub registers_after: usize,
    pub collapsed: Vec<GuardCollapse>,
}

/// Merge, collapse guards, merge again.
pub fn postprocess(a: &Sra) -> (Sra, PostprocessReport) {
    let merged = merge_register_symbols(a);
    let (collapsed, log) = remove_vacuous_guards_detailed(&merged);
    let out = merge_register_symbols(&collapsed);
    let report = PostprocessReport {
        registers_before: a.registers().len(),
        registers_after: out.registers().len(),
        collapsed: log,
    };
    (out, report)
}
