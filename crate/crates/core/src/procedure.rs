//! Merging two invocations into one procedure.
//!
//! Every vertex of the similarity graph becomes one fresh procedure state.
//! Entering the procedure writes an invocation id symbol into the register;
//! transitions that exist in only one invocation are guarded by that
//! invocation's id; leaving the procedure tests the id and restores the
//! default value.

use std::collections::{BTreeMap, BTreeSet};

use crate::automata::{Reg, RegSym, SignatureMap, Sra, StateId, Transition};
use crate::error::{Error, Result};
use crate::simgraph::{classify_unchecked, validate_with, SimilarityGraph};

/// Invocation state -> invocation id (nonempty set of register symbols).
pub type InvocationIds = BTreeMap<StateId, BTreeSet<RegSym>>;

/// Invocation state -> procedure state.
pub type ProcStateMap = BTreeMap<StateId, StateId>;

/// Smallest symbol of a nonempty set.
pub fn pick(symbols: &BTreeSet<RegSym>) -> Result<RegSym> {
    symbols.iter().next().copied().ok_or(Error::EmptyPick)
}

/// Smallest non-negative integer not yet used as a register symbol; it is
/// added to the register alphabet.
pub fn new_id_symbol(a: &mut Sra) -> RegSym {
    let fresh = (0..).find(|v| !a.registers.contains(v)).expect("u32 exhausted");
    a.registers.insert(fresh);
    fresh
}

/// Replaces the two invocations of `g` by a single procedure.
pub fn create_procedure(a: &Sra, g: &SimilarityGraph) -> Result<Sra> {
    let sigs = a.signatures();
    let violations = validate_with(a, &sigs, g);
    if !violations.is_empty() {
        return Err(Error::InvalidGraph(violations));
    }
    let root = g.root().expect("validated graphs are nonempty");
    let mut b = a.clone();
    let id_for = |q: StateId, b: &mut Sra| {
        let sig = sigs.get(q);
        if sig.is_empty() {
            BTreeSet::from([new_id_symbol(b)])
        } else {
            sig.clone()
        }
    };
    let id1 = id_for(root.0, &mut b);
    let id2 = id_for(root.1, &mut b);

    let mut ids = InvocationIds::new();
    let mut pmap = ProcStateMap::new();
    for &(q1, q2) in g.path() {
        let name = b.fresh_proc_name();
        let p = b.add_state(name);
        b.provenance.insert(p, (q1, q2));
        ids.insert(q1, id1.clone());
        ids.insert(q2, id2.clone());
        pmap.insert(q1, p);
        pmap.insert(q2, p);
    }

    let new = procedure_transitions(a, g, &ids, &pmap)?;
    b.transitions.extend(new);
    let gone: BTreeSet<StateId> = pmap.keys().copied().collect();
    b.remove_states(&gone);
    Ok(b)
}

/// Number of distinct transitions `create_procedure` would emit for the
/// invocations of a valid `g`, using placeholder procedure states and ids.
pub(crate) fn procedure_image_count(a: &Sra, sigs: &SignatureMap, g: &SimilarityGraph) -> Result<usize> {
    let root = g.root().ok_or(Error::InvalidGraph(vec![]))?;
    let mut fresh = a.registers().iter().next_back().map_or(0, |m| m + 1);
    let mut id_for = |q: StateId| {
        let sig = sigs.get(q);
        if sig.is_empty() {
            fresh += 1;
            BTreeSet::from([fresh - 1])
        } else {
            sig.clone()
        }
    };
    let (id1, id2) = (id_for(root.0), id_for(root.1));
    let mut ids = InvocationIds::new();
    let mut pmap = ProcStateMap::new();
    for (k, &(q1, q2)) in g.path().iter().enumerate() {
        let p = StateId(u32::MAX - k as u32);
        ids.insert(q1, id1.clone());
        ids.insert(q2, id2.clone());
        pmap.insert(q1, p);
        pmap.insert(q2, p);
    }
    Ok(procedure_transitions(a, g, &ids, &pmap)?.len())
}

/// Adds the procedure transitions derived from `g` to `a`. The procedure
/// states named by `pmap` must already exist in `a`; the invocation states
/// and their transitions are left in place.
pub fn create_procedure_transitions(
    a: &Sra,
    g: &SimilarityGraph,
    ids: &InvocationIds,
    pmap: &ProcStateMap,
) -> Result<Sra> {
    let violations = validate_with(a, &a.signatures(), g);
    if !violations.is_empty() {
        return Err(Error::InvalidGraph(violations));
    }
    if let Some(&p) = pmap.values().find(|p| !a.states().contains(p)) {
        return Err(Error::UnknownState(p));
    }
    let new = procedure_transitions(a, g, ids, pmap)?;
    let mut b = a.clone();
    for t in &new {
        for r in [t.test, t.set].into_iter().filter_map(Reg::symbol) {
            if !b.registers.contains(&r) {
                return Err(Error::UndeclaredRegister(r));
            }
        }
    }
    b.transitions.extend(new);
    Ok(b)
}

fn procedure_transitions(
    a: &Sra,
    g: &SimilarityGraph,
    ids: &InvocationIds,
    pmap: &ProcStateMap,
) -> Result<BTreeSet<Transition>> {
    let part = classify_unchecked(a, g);
    let proc_of = |q: StateId| pmap.get(&q).copied().ok_or(Error::MissingInvocation(q));
    let id_of = |q: StateId| ids.get(&q).ok_or(Error::MissingInvocation(q));
    let mut out = BTreeSet::new();

    for t in &part.entry {
        let s = proc_of(t.dst)?;
        let set = match t.set {
            Reg::Bot => Reg::Sym(pick(id_of(t.dst)?)?),
            other => other,
        };
        out.insert(Transition { set, dst: s, ..*t });
    }

    for t in &part.exit {
        let r = proc_of(t.src)?;
        match t.test {
            Reg::Bot => {
                let test = Reg::Sym(pick(id_of(t.src)?)?);
                out.insert(Transition { src: r, test, ..*t });
            }
            Reg::Star => {
                out.extend(guards(t, r, t.dst, id_of(t.src)?));
            }
            Reg::Sym(_) => {
                out.insert(Transition { src: r, ..*t });
            }
        }
    }

    for t in &part.common {
        out.insert(Transition::new(proc_of(t.src)?, t.sym, Reg::Star, Reg::Star, proc_of(t.dst)?));
    }

    for t in &part.unique {
        let (r, s) = (proc_of(t.src)?, proc_of(t.dst)?);
        match (t.test, t.set) {
            (Reg::Bot, Reg::Bot) => {
                let eta = Reg::Sym(pick(id_of(t.src)?)?);
                out.insert(Transition::new(r, t.sym, eta, eta, s));
            }
            (Reg::Star, Reg::Star) => out.extend(guards(t, r, s, id_of(t.src)?)),
            _ => {
                out.insert(Transition { src: r, dst: s, ..*t });
            }
        }
    }

    for t in &part.switch {
        let (r, s) = (proc_of(t.src)?, proc_of(t.dst)?);
        let test = match t.test {
            Reg::Bot => Reg::Sym(pick(id_of(t.src)?)?),
            other => other,
        };
        let set = match t.set {
            Reg::Bot => Reg::Sym(pick(id_of(t.dst)?)?),
            other => other,
        };
        out.insert(Transition::new(r, t.sym, test, set, s));
    }
    Ok(out)
}

/// Symbol expansion: one `η/η` guard per invocation symbol.
fn guards<'a>(
    t: &'a Transition,
    src: StateId,
    dst: StateId,
    id: &'a BTreeSet<RegSym>,
) -> impl Iterator<Item = Transition> + 'a {
    id.iter().map(move |&v| Transition::new(src, t.sym, Reg::Sym(v), Reg::Sym(v), dst))
}
