//! Plain NFAs and single-finite-register automata (SRAs).
//!
//! States and input symbols are dense integer ids; human-readable names live
//! in side tables and are only used for printing. An SRA transition carries a
//! test symbol and a set symbol, each of which is a register symbol, the
//! default value [`Reg::Bot`], or the wildcard [`Reg::Star`]. A wildcard test
//! always comes with a wildcard set: such a transition fires for any register
//! value and leaves it unchanged.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct StateId(pub u32);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Index into an automaton's alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Symbol(pub u32);

/// A register symbol (an element of the register alphabet).
pub type RegSym = u32;

/// Test or set label of an SRA transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Reg {
    /// The default register value.
    Bot,
    Sym(RegSym),
    /// Matches anything and keeps the register value; syntax only.
    Star,
}

impl Reg {
    /// `Bot` or `Star`: the labels allowed on register-neutral transitions.
    pub fn is_neutral(self) -> bool {
        matches!(self, Reg::Bot | Reg::Star)
    }

    pub fn symbol(self) -> Option<RegSym> {
        match self {
            Reg::Sym(s) => Some(s),
            _ => None,
        }
    }

    fn matches(self, value: Option<RegSym>) -> bool {
        match self {
            Reg::Bot => value.is_none(),
            Reg::Sym(s) => value == Some(s),
            Reg::Star => true,
        }
    }
}

impl fmt::Display for Reg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reg::Bot => f.write_str("_"),
            Reg::Star => f.write_str("*"),
            Reg::Sym(s) => write!(f, "{s}"),
        }
    }
}

/// `src --sym, test/set--> dst`
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub src: StateId,
    pub sym: Symbol,
    pub test: Reg,
    pub set: Reg,
    pub dst: StateId,
}

impl Transition {
    pub fn new(src: StateId, sym: Symbol, test: Reg, set: Reg, dst: StateId) -> Self {
        Transition { src, sym, test, set, dst }
    }

    pub fn plain(src: StateId, sym: Symbol, dst: StateId) -> Self {
        Self::new(src, sym, Reg::Bot, Reg::Bot, dst)
    }

    pub fn is_wildcard(&self) -> bool {
        self.test == Reg::Star && self.set == Reg::Star
    }

    /// `η/η` with `η ∈ {Bot, Star}`: does not touch the register.
    pub fn is_neutral(&self) -> bool {
        self.test == self.set && self.test.is_neutral()
    }

    /// Neither `Bot/Bot` nor `Star/Star`.
    pub fn uses_register(&self) -> bool {
        !self.is_neutral()
    }

    fn check_wildcard(&self) -> Result<()> {
        if (self.test == Reg::Star) != (self.set == Reg::Star) {
            return Err(Error::MixedWildcard(format!("{}/{}", self.test, self.set)));
        }
        Ok(())
    }

    /// Register value after firing from a configuration holding `value`, if
    /// the transition is enabled.
    pub fn fire(&self, value: Option<RegSym>) -> Option<Option<RegSym>> {
        if !self.test.matches(value) {
            return None;
        }
        Some(match self.set {
            Reg::Star => value,
            Reg::Bot => None,
            Reg::Sym(s) => Some(s),
        })
    }
}

/// A runtime configuration. `reg == None` is the default register value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Config {
    pub state: StateId,
    pub reg: Option<RegSym>,
}

/// Register symbols that may occupy the register at each state.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SignatureMap(BTreeMap<StateId, BTreeSet<RegSym>>);

static EMPTY_SIG: BTreeSet<RegSym> = BTreeSet::new();

impl SignatureMap {
    pub fn get(&self, q: StateId) -> &BTreeSet<RegSym> {
        self.0.get(&q).unwrap_or(&EMPTY_SIG)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StateId, &BTreeSet<RegSym>)> {
        self.0.iter()
    }
}

fn state_name(names: &BTreeMap<StateId, String>, q: StateId) -> String {
    names.get(&q).cloned().unwrap_or_else(|| format!("s{}", q.0))
}

fn check_endpoints(states: &BTreeSet<StateId>, ids: impl IntoIterator<Item = StateId>) -> Result<()> {
    for q in ids {
        if !states.contains(&q) {
            return Err(Error::UnknownState(q));
        }
    }
    Ok(())
}

fn fresh_name(names: &BTreeMap<StateId, String>, base: &str) -> String {
    let taken: BTreeSet<&str> = names.values().map(String::as_str).collect();
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}{k}"))
        .find(|n| !taken.contains(n.as_str()))
        .expect("unbounded search")
}

/// A nondeterministic finite automaton without epsilon transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Vec<String>,
    states: BTreeSet<StateId>,
    names: BTreeMap<StateId, String>,
    transitions: BTreeSet<(StateId, Symbol, StateId)>,
    initial: BTreeSet<StateId>,
    finals: BTreeSet<StateId>,
}

impl Nfa {
    pub fn new(
        alphabet: Vec<String>,
        states: BTreeSet<StateId>,
        names: BTreeMap<StateId, String>,
        transitions: BTreeSet<(StateId, Symbol, StateId)>,
        initial: BTreeSet<StateId>,
        finals: BTreeSet<StateId>,
    ) -> Result<Self> {
        if initial.is_empty() {
            return Err(Error::NoInitialState);
        }
        check_endpoints(&states, transitions.iter().flat_map(|&(r, _, s)| [r, s]))?;
        check_endpoints(&states, initial.iter().chain(&finals).copied())?;
        if let Some(&(_, a, _)) = transitions.iter().find(|t| t.1 .0 as usize >= alphabet.len()) {
            return Err(Error::UnknownSymbol(a.0));
        }
        Ok(Nfa { alphabet, states, names, transitions, initial, finals })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }
    pub fn states(&self) -> &BTreeSet<StateId> {
        &self.states
    }
    pub fn transitions(&self) -> &BTreeSet<(StateId, Symbol, StateId)> {
        &self.transitions
    }
    pub fn initial(&self) -> &BTreeSet<StateId> {
        &self.initial
    }
    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }
    pub fn names(&self) -> &BTreeMap<StateId, String> {
        &self.names
    }
    pub fn state_name(&self, q: StateId) -> String {
        state_name(&self.names, q)
    }
    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.alphabet.iter().position(|s| s == name).map(|i| Symbol(i as u32))
    }

    /// Direct subset simulation; used as an independent check against the
    /// register semantics.
    pub fn accepts(&self, word: &[Symbol]) -> Result<bool> {
        let mut current: BTreeSet<StateId> = self.initial.clone();
        for &a in word {
            if a.0 as usize >= self.alphabet.len() {
                return Err(Error::UnknownSymbol(a.0));
            }
            current = self
                .transitions
                .iter()
                .filter(|&&(r, b, _)| b == a && current.contains(&r))
                .map(|&(_, _, s)| s)
                .collect();
        }
        Ok(current.iter().any(|q| self.finals.contains(q)))
    }

    /// Equivalent NFA whose only initial/final states are a fresh initial
    /// state and a fresh final state. The fresh initial state is also final
    /// when the empty word is accepted.
    pub fn normalize_terminals(&self) -> Nfa {
        let mut out = self.clone();
        let (init, fin) = out.add_terminal_pair();
        let accepts_empty = !self.initial.is_disjoint(&self.finals);
        for &(r, a, s) in &self.transitions {
            let from_initial = self.initial.contains(&r);
            let into_final = self.finals.contains(&s);
            if from_initial {
                out.transitions.insert((init, a, s));
            }
            if into_final {
                out.transitions.insert((r, a, fin));
            }
            if from_initial && into_final {
                out.transitions.insert((init, a, fin));
            }
        }
        out.initial = BTreeSet::from([init]);
        out.finals = BTreeSet::from([fin]);
        if accepts_empty {
            out.finals.insert(init);
        }
        out
    }

    fn add_terminal_pair(&mut self) -> (StateId, StateId) {
        let next = self.states.iter().next_back().map_or(0, |q| q.0 + 1);
        let (init, fin) = (StateId(next), StateId(next + 1));
        let init_name = fresh_name(&self.names, "init");
        self.names.insert(init, init_name);
        let fin_name = fresh_name(&self.names, "fin");
        self.names.insert(fin, fin_name);
        self.states.extend([init, fin]);
        (init, fin)
    }

    /// The register-free SRA with the same states and transitions.
    pub fn lift(&self) -> Sra {
        lift_nfa(self)
    }
}

/// Builds automata from names, interning states and symbols in order of first
/// appearance.
#[derive(Debug, Default, Clone)]
pub struct NfaBuilder {
    inner: SraBuilder,
}

impl NfaBuilder {
    pub fn new() -> Self {
        Self::default()
    }
    pub fn state(&mut self, name: &str) -> StateId {
        self.inner.state(name)
    }
    pub fn symbol(&mut self, name: &str) -> Symbol {
        self.inner.symbol(name)
    }
    pub fn transition(&mut self, src: &str, sym: &str, dst: &str) -> &mut Self {
        self.inner.transition(src, sym, Reg::Bot, Reg::Bot, dst);
        self
    }
    pub fn initial(&mut self, name: &str) -> &mut Self {
        self.inner.initial(name);
        self
    }
    pub fn accepting(&mut self, name: &str) -> &mut Self {
        self.inner.accepting(name);
        self
    }
    pub fn build(&self) -> Result<Nfa> {
        let sra = self.inner.build()?;
        Nfa::new(
            sra.alphabet,
            sra.states,
            sra.names,
            sra.transitions.iter().map(|t| (t.src, t.sym, t.dst)).collect(),
            sra.initial,
            sra.finals,
        )
    }
}

#[derive(Debug, Default, Clone)]
pub struct SraBuilder {
    state_ids: HashMap<String, StateId>,
    names: BTreeMap<StateId, String>,
    alphabet: Vec<String>,
    transitions: BTreeSet<Transition>,
    initial: BTreeSet<StateId>,
    finals: BTreeSet<StateId>,
    registers: BTreeSet<RegSym>,
}

impl SraBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&q) = self.state_ids.get(name) {
            return q;
        }
        let q = StateId(self.names.len() as u32);
        self.state_ids.insert(name.to_string(), q);
        self.names.insert(q, name.to_string());
        q
    }

    pub fn symbol(&mut self, name: &str) -> Symbol {
        match self.alphabet.iter().position(|s| s == name) {
            Some(i) => Symbol(i as u32),
            None => {
                self.alphabet.push(name.to_string());
                Symbol(self.alphabet.len() as u32 - 1)
            }
        }
    }

    pub fn register(&mut self, r: RegSym) -> &mut Self {
        self.registers.insert(r);
        self
    }

    pub fn transition(&mut self, src: &str, sym: &str, test: Reg, set: Reg, dst: &str) -> &mut Self {
        let t = Transition::new(self.state(src), self.symbol(sym), test, set, self.state(dst));
        self.transitions.insert(t);
        self
    }

    pub fn initial(&mut self, name: &str) -> &mut Self {
        let q = self.state(name);
        self.initial.insert(q);
        self
    }

    pub fn accepting(&mut self, name: &str) -> &mut Self {
        let q = self.state(name);
        self.finals.insert(q);
        self
    }

    /// Registers not declared explicitly are taken from the transitions.
    pub fn build(&self) -> Result<Sra> {
        let mut registers = self.registers.clone();
        for t in &self.transitions {
            registers.extend(t.test.symbol());
            registers.extend(t.set.symbol());
        }
        Sra::new(
            self.alphabet.clone(),
            self.names.keys().copied().collect(),
            self.names.clone(),
            registers,
            self.transitions.clone(),
            self.initial.clone(),
            self.finals.clone(),
        )
    }
}

/// A single-finite-register automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sra {
    pub(crate) alphabet: Vec<String>,
    pub(crate) states: BTreeSet<StateId>,
    pub(crate) names: BTreeMap<StateId, String>,
    pub(crate) registers: BTreeSet<RegSym>,
    pub(crate) transitions: BTreeSet<Transition>,
    pub(crate) initial: BTreeSet<StateId>,
    pub(crate) finals: BTreeSet<StateId>,
    /// Counter for fresh procedure-state names.
    pub(crate) next_proc: u32,
    /// Next unused state id; ids of removed states are never reused.
    pub(crate) next_state: u32,
    /// Procedure state -> the pair of invocation states it replaced.
    pub(crate) provenance: BTreeMap<StateId, (StateId, StateId)>,
}

impl Sra {
    pub fn new(
        alphabet: Vec<String>,
        states: BTreeSet<StateId>,
        names: BTreeMap<StateId, String>,
        registers: BTreeSet<RegSym>,
        transitions: BTreeSet<Transition>,
        initial: BTreeSet<StateId>,
        finals: BTreeSet<StateId>,
    ) -> Result<Self> {
        if initial.is_empty() {
            return Err(Error::NoInitialState);
        }
        check_endpoints(&states, transitions.iter().flat_map(|t| [t.src, t.dst]))?;
        check_endpoints(&states, initial.iter().chain(&finals).copied())?;
        for t in &transitions {
            if t.sym.0 as usize >= alphabet.len() {
                return Err(Error::UnknownSymbol(t.sym.0));
            }
            t.check_wildcard()?;
            for r in [t.test, t.set].into_iter().filter_map(Reg::symbol) {
                if !registers.contains(&r) {
                    return Err(Error::UndeclaredRegister(r));
                }
            }
        }
        let next_state = states.iter().next_back().map_or(0, |q| q.0 + 1);
        Ok(Sra {
            alphabet,
            states,
            names,
            registers,
            transitions,
            initial,
            finals,
            next_proc: 0,
            next_state,
            provenance: BTreeMap::new(),
        })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }
    pub fn states(&self) -> &BTreeSet<StateId> {
        &self.states
    }
    pub fn registers(&self) -> &BTreeSet<RegSym> {
        &self.registers
    }
    pub fn transitions(&self) -> &BTreeSet<Transition> {
        &self.transitions
    }
    pub fn initial(&self) -> &BTreeSet<StateId> {
        &self.initial
    }
    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }
    pub fn names(&self) -> &BTreeMap<StateId, String> {
        &self.names
    }
    pub fn provenance(&self) -> &BTreeMap<StateId, (StateId, StateId)> {
        &self.provenance
    }
    pub fn state_name(&self, q: StateId) -> String {
        state_name(&self.names, q)
    }
    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.names.iter().find(|(_, n)| *n == name).map(|(&q, _)| q)
    }
    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.alphabet.iter().position(|s| s == name).map(|i| Symbol(i as u32))
    }

    pub fn is_terminal(&self, q: StateId) -> bool {
        self.initial.contains(&q) || self.finals.contains(&q)
    }

    pub fn terminal_count(&self) -> usize {
        self.initial.union(&self.finals).count()
    }

    /// Copy with a different transition set. Callers must keep the
    /// transitions consistent with the states and registers.
    pub(crate) fn with_transitions(&self, transitions: BTreeSet<Transition>) -> Sra {
        Sra { transitions, ..self.clone() }
    }

    /// Adds `extra` alphabet symbols (by name) that are not present yet.
    pub fn extend_alphabet<'a>(&self, extra: impl IntoIterator<Item = &'a str>) -> Sra {
        let mut out = self.clone();
        for name in extra {
            if out.symbol(name).is_none() {
                out.alphabet.push(name.to_string());
            }
        }
        out
    }

    pub(crate) fn add_state(&mut self, name: String) -> StateId {
        let q = StateId(self.next_state);
        self.next_state += 1;
        self.states.insert(q);
        self.names.insert(q, name);
        q
    }

    /// Removes states together with every incident transition.
    pub(crate) fn remove_states(&mut self, gone: &BTreeSet<StateId>) {
        self.transitions.retain(|t| !gone.contains(&t.src) && !gone.contains(&t.dst));
        self.states.retain(|q| !gone.contains(q));
        self.names.retain(|q, _| !gone.contains(q));
        self.initial.retain(|q| !gone.contains(q));
        self.finals.retain(|q| !gone.contains(q));
    }

    /// Drops transitions that no reachable configuration can fire and states
    /// with no reachable configuration. The language is unchanged.
    pub fn trim(&self) -> Sra {
        let reach = self.reach();
        let mut regs: HashMap<StateId, Vec<Option<RegSym>>> = HashMap::new();
        for c in &reach {
            regs.entry(c.state).or_default().push(c.reg);
        }
        let live = |t: &Transition| regs.get(&t.src).is_some_and(|vs| vs.iter().any(|&v| t.fire(v).is_some()));
        let mut out = self.with_transitions(self.transitions.iter().filter(|t| live(t)).copied().collect());
        let gone: BTreeSet<StateId> = self.states.iter().filter(|q| !regs.contains_key(q)).copied().collect();
        out.remove_states(&gone);
        out
    }

    pub(crate) fn fresh_proc_name(&mut self) -> String {
        loop {
            let name = format!("p{}", self.next_proc);
            self.next_proc += 1;
            if !self.names.values().any(|n| *n == name) {
                return name;
            }
        }
    }

    pub(crate) fn out_index(&self) -> HashMap<StateId, Vec<Transition>> {
        let mut idx: HashMap<StateId, Vec<Transition>> = HashMap::new();
        for t in &self.transitions {
            idx.entry(t.src).or_default().push(*t);
        }
        idx
    }

    fn initial_configs(&self) -> impl Iterator<Item = Config> + '_ {
        self.initial.iter().map(|&state| Config { state, reg: None })
    }

    /// All configurations reachable from the initial ones.
    pub fn reach(&self) -> BTreeSet<Config> {
        let out = self.out_index();
        let mut seen: BTreeSet<Config> = self.initial_configs().collect();
        let mut queue: VecDeque<Config> = seen.iter().copied().collect();
        while let Some(c) = queue.pop_front() {
            for t in out.get(&c.state).into_iter().flatten() {
                if let Some(reg) = t.fire(c.reg) {
                    let next = Config { state: t.dst, reg };
                    if seen.insert(next) {
                        queue.push_back(next);
                    }
                }
            }
        }
        seen
    }

    /// `Sig(q)`: the register symbols seen at `q` in reachable configurations.
    /// Every state has an entry (possibly empty).
    pub fn signatures(&self) -> SignatureMap {
        let mut map: BTreeMap<StateId, BTreeSet<RegSym>> =
            self.states.iter().map(|&q| (q, BTreeSet::new())).collect();
        for c in self.reach() {
            if let Some(v) = c.reg {
                map.entry(c.state).or_default().insert(v);
            }
        }
        SignatureMap(map)
    }

    /// The NFA over reachable configurations.
    pub fn induced_nfa(&self) -> Nfa {
        let out = self.out_index();
        let mut ids: BTreeMap<Config, StateId> = BTreeMap::new();
        let mut order: Vec<Config> = Vec::new();
        let mut queue: VecDeque<Config> = VecDeque::new();
        let mut intern = |c: Config, ids: &mut BTreeMap<Config, StateId>, queue: &mut VecDeque<Config>| {
            *ids.entry(c).or_insert_with(|| {
                order.push(c);
                queue.push_back(c);
                StateId(order.len() as u32 - 1)
            })
        };
        let initial: BTreeSet<StateId> =
            self.initial_configs().map(|c| intern(c, &mut ids, &mut queue)).collect();
        let mut transitions = BTreeSet::new();
        while let Some(c) = queue.pop_front() {
            let src = ids[&c];
            for t in out.get(&c.state).into_iter().flatten() {
                if let Some(reg) = t.fire(c.reg) {
                    let dst = intern(Config { state: t.dst, reg }, &mut ids, &mut queue);
                    transitions.insert((src, t.sym, dst));
                }
            }
        }
        let names = ids
            .iter()
            .map(|(c, &id)| {
                let reg = c.reg.map_or_else(|| "_".to_string(), |v| v.to_string());
                (id, format!("{}@{}", self.state_name(c.state), reg))
            })
            .collect();
        let finals = ids
            .iter()
            .filter(|(c, _)| self.finals.contains(&c.state))
            .map(|(_, &id)| id)
            .collect();
        Nfa {
            alphabet: self.alphabet.clone(),
            states: ids.values().copied().collect(),
            names,
            transitions,
            initial,
            finals,
        }
    }

    /// Runs the word through the configuration-set simulation.
    pub fn accepts(&self, word: &[Symbol]) -> Result<bool> {
        let out = self.out_index();
        let mut current: BTreeSet<Config> = self.initial_configs().collect();
        for &a in word {
            if a.0 as usize >= self.alphabet.len() {
                return Err(Error::UnknownSymbol(a.0));
            }
            current = self.step(&out, &current, a);
        }
        Ok(current.iter().any(|c| self.finals.contains(&c.state)))
    }

    pub fn accepts_names(&self, word: &[&str]) -> Result<bool> {
        let word = word
            .iter()
            .map(|n| self.symbol(n).ok_or_else(|| Error::UnknownSymbolName(n.to_string())))
            .collect::<Result<Vec<_>>>()?;
        self.accepts(&word)
    }

    pub(crate) fn step(
        &self,
        out: &HashMap<StateId, Vec<Transition>>,
        current: &BTreeSet<Config>,
        a: Symbol,
    ) -> BTreeSet<Config> {
        let mut next = BTreeSet::new();
        for c in current {
            for t in out.get(&c.state).into_iter().flatten().filter(|t| t.sym == a) {
                if let Some(reg) = t.fire(c.reg) {
                    next.insert(Config { state: t.dst, reg });
                }
            }
        }
        next
    }

    pub(crate) fn initial_set(&self) -> BTreeSet<Config> {
        self.initial_configs().collect()
    }

    pub(crate) fn is_accepting_set(&self, set: &BTreeSet<Config>) -> bool {
        set.iter().any(|c| self.finals.contains(&c.state))
    }

    /// Same construction as [`Nfa::normalize_terminals`]; register labels are
    /// copied unchanged since runs start with the default value either way.
    pub fn normalize_terminals(&self) -> Sra {
        let mut out = self.clone();
        let init_name = fresh_name(&out.names, "init");
        let init = out.add_state(init_name);
        let fin_name = fresh_name(&out.names, "fin");
        let fin = out.add_state(fin_name);
        let accepts_empty = !self.initial.is_disjoint(&self.finals);
        for t in &self.transitions {
            let from_initial = self.initial.contains(&t.src);
            let into_final = self.finals.contains(&t.dst);
            if from_initial {
                out.transitions.insert(Transition { src: init, ..*t });
            }
            if into_final {
                out.transitions.insert(Transition { dst: fin, ..*t });
            }
            if from_initial && into_final {
                out.transitions.insert(Transition { src: init, dst: fin, ..*t });
            }
        }
        out.initial = BTreeSet::from([init]);
        out.finals = BTreeSet::from([fin]);
        if accepts_empty {
            out.finals.insert(init);
        }
        out
    }
}

/// The register-free SRA isomorphic to `n`: every transition becomes `Bot/Bot`.
pub fn lift_nfa(n: &Nfa) -> Sra {
    Sra {
        alphabet: n.alphabet.clone(),
        states: n.states.clone(),
        names: n.names.clone(),
        registers: BTreeSet::new(),
        transitions: n.transitions.iter().map(|&(r, a, s)| Transition::plain(r, a, s)).collect(),
        initial: n.initial.clone(),
        finals: n.finals.clone(),
        next_proc: 0,
        next_state: n.states.iter().next_back().map_or(0, |q| q.0 + 1),
        provenance: BTreeMap::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word_ab() -> Nfa {
        let mut b = NfaBuilder::new();
        b.initial("0").transition("0", "a", "1").transition("1", "b", "2").accepting("2");
        b.build().unwrap()
    }

    #[test]
    fn mixed_wildcard_is_rejected() {
        let mut b = SraBuilder::new();
        b.initial("q0").transition("q0", "a", Reg::Star, Reg::Sym(1), "q1");
        assert_eq!(b.build().unwrap_err(), Error::MixedWildcard("*/1".into()));
        let mut b = SraBuilder::new();
        b.initial("q0").transition("q0", "a", Reg::Bot, Reg::Star, "q1");
        assert!(matches!(b.build(), Err(Error::MixedWildcard(_))));
    }

    #[test]
    fn nfa_requires_initial_state() {
        let mut b = NfaBuilder::new();
        b.transition("0", "a", "1");
        assert_eq!(b.build().unwrap_err(), Error::NoInitialState);
    }

    #[test]
    fn empty_transition_nfa_accepts_only_epsilon() {
        let mut b = NfaBuilder::new();
        b.initial("q").accepting("q");
        b.symbol("a");
        let sra = b.build().unwrap().lift();
        assert!(sra.accepts(&[]).unwrap());
        assert!(!sra.accepts(&[Symbol(0)]).unwrap());
    }

    #[test]
    fn lifted_word_automaton() {
        let sra = word_ab().lift();
        assert!(sra.registers().is_empty());
        assert!(sra.transitions().iter().all(|t| t.test == Reg::Bot && t.set == Reg::Bot));
        assert!(sra.accepts_names(&["a", "b"]).unwrap());
        assert!(!sra.accepts_names(&["a"]).unwrap());
        assert!(!sra.accepts_names(&["b", "a"]).unwrap());
        assert!(matches!(sra.accepts_names(&["z"]), Err(Error::UnknownSymbolName(_))));
        assert_eq!(sra.accepts(&[Symbol(7)]), Err(Error::UnknownSymbol(7)));
    }

    #[test]
    fn lifted_reach_is_bot_only() {
        let sra = word_ab().lift();
        let reach = sra.reach();
        assert_eq!(reach.len(), 3);
        assert!(reach.iter().all(|c| c.reg.is_none()));
        assert!(sra.signatures().iter().all(|(_, s)| s.is_empty()));
    }

    #[test]
    fn wildcard_keeps_register_value() {
        let mut b = SraBuilder::new();
        b.initial("i")
            .transition("i", "a", Reg::Bot, Reg::Sym(3), "p")
            .transition("p", "b", Reg::Star, Reg::Star, "q")
            .transition("q", "c", Reg::Sym(3), Reg::Bot, "f")
            .accepting("f");
        let sra = b.build().unwrap();
        let q = sra.state_by_name("q").unwrap();
        assert!(sra.reach().contains(&Config { state: q, reg: Some(3) }));
        assert!(sra.accepts_names(&["a", "b", "c"]).unwrap());
        let induced = sra.induced_nfa();
        assert_eq!(induced.states().len(), 4);
        assert_eq!(induced.transitions().len(), 3);
    }

    #[test]
    fn normalize_with_epsilon() {
        let mut b = NfaBuilder::new();
        b.initial("0").accepting("0").initial("1").accepting("2").accepting("3");
        b.transition("0", "a", "1").transition("1", "b", "2").transition("2", "a", "3");
        let n = b.build().unwrap();
        let norm = n.normalize_terminals();
        assert_eq!(norm.initial().len(), 1);
        let terminals: BTreeSet<_> = norm.initial().union(norm.finals()).collect();
        assert_eq!(terminals.len(), 2);
        let init = *norm.initial().iter().next().unwrap();
        assert!(norm.finals().contains(&init));
        assert!(norm.accepts(&[]).unwrap());
    }

    #[test]
    fn normalize_without_epsilon() {
        let mut b = NfaBuilder::new();
        b.initial("0").initial("1").accepting("2").accepting("3").accepting("4");
        b.transition("0", "a", "2").transition("1", "b", "3").transition("3", "c", "4");
        let n = b.build().unwrap();
        let norm = n.normalize_terminals();
        assert_eq!(norm.initial().len(), 1);
        assert_eq!(norm.finals().len(), 1);
        assert!(norm.initial().is_disjoint(norm.finals()));
        assert!(!norm.accepts(&[]).unwrap());
        for w in [vec![0], vec![1], vec![1, 2]] {
            let w: Vec<Symbol> = w.into_iter().map(Symbol).collect();
            assert_eq!(norm.accepts(&w).unwrap(), n.accepts(&w).unwrap());
        }
    }
}
