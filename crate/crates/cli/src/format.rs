//! Text formats: the native line format for NFAs and SRAs, and BA import.
//!
//! Native grammar, one item per line, `#` starts a comment:
//!
//! ```text
//! @SRA name
//! %Initial q0
//! %Final q7
//! %Registers 1 2
//! q0 x _/1 q12
//! q12 a */* q34
//! ```
//!
//! Under `@NFA`, transitions are `src sym dst`. Under `@SRA`, a three-token
//! line is a register-free transition (`_/_`). States and symbols are declared
//! by use and numbered in order of first appearance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::path::Path;

use procred_core::{Reg, RegSym, Sra, StateId, Symbol, Transition};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Native,
    Ba,
}

impl Format {
    /// `.ba` files are BA, everything else native.
    pub fn detect(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("ba") => Format::Ba,
            _ => Format::Native,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Kind {
    Nfa,
    Sra,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Nfa => "NFA",
            Kind::Sra => "SRA",
        })
    }
}

/// A parsed automaton file. NFAs are held as register-free SRAs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomatonFile {
    pub format: Format,
    pub kind: Kind,
    pub name: String,
    pub automaton: Sra,
    /// Non-fatal findings, e.g. a BA file without final states.
    pub warnings: Vec<String>,
}

impl AutomatonFile {
    pub fn new(kind: Kind, name: impl Into<String>, automaton: Sra) -> Self {
        AutomatonFile { format: Format::Native, kind, name: name.into(), automaton, warnings: Vec::new() }
    }

    /// Name-based view used for structural comparison: ids differ between
    /// parses of equivalent texts, names do not.
    pub fn canonical(&self) -> Canonical {
        canonical(&self.automaton)
    }
}

/// An automaton described by state and symbol names only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub transitions: BTreeSet<(String, String, Reg, Reg, String)>,
    pub initial: BTreeSet<String>,
    pub finals: BTreeSet<String>,
    pub registers: BTreeSet<RegSym>,
}

pub fn canonical(a: &Sra) -> Canonical {
    let names = |set: &BTreeSet<StateId>| set.iter().map(|&q| a.state_name(q)).collect();
    Canonical {
        transitions: a
            .transitions()
            .iter()
            .map(|t| (a.state_name(t.src), a.alphabet()[t.sym.0 as usize].clone(), t.test, t.set, a.state_name(t.dst)))
            .collect(),
        initial: names(a.initial()),
        finals: names(a.finals()),
        registers: a.registers().clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing `@NFA` or `@SRA` header")]
    MissingHeader,
    #[error("unknown header `{0}`")]
    BadHeader(String),
    #[error("duplicate header")]
    DuplicateHeader,
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("expected `src sym dst` or `src sym T/S dst`, found {0} tokens")]
    Arity(usize),
    #[error("register labels are not allowed in an NFA")]
    RegisterInNfa,
    #[error("malformed register label `{0}`")]
    BadRegister(String),
    #[error("wildcard must be paired with a wildcard in `{0}`")]
    MixedWildcard(String),
    #[error("register symbol {0} is not listed in %Registers")]
    UndeclaredRegister(RegSym),
    #[error("no initial state")]
    NoInitial,
    #[error("malformed BA line `{0}`")]
    BadBaLine(String),
    #[error("BA state lines must come before or after all transitions")]
    BaStateInBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    pub kind: ParseErrorKind,
}

/// Interns states and symbols in order of first appearance.
#[derive(Default)]
struct Tables {
    states: BTreeMap<String, StateId>,
    names: BTreeMap<StateId, String>,
    symbols: BTreeMap<String, Symbol>,
    alphabet: Vec<String>,
}

impl Tables {
    fn state(&mut self, name: &str) -> StateId {
        if let Some(&q) = self.states.get(name) {
            return q;
        }
        let q = StateId(self.names.len() as u32);
        self.states.insert(name.to_string(), q);
        self.names.insert(q, name.to_string());
        q
    }

    fn symbol(&mut self, name: &str) -> Symbol {
        if let Some(&s) = self.symbols.get(name) {
            return s;
        }
        let s = Symbol(self.alphabet.len() as u32);
        self.symbols.insert(name.to_string(), s);
        self.alphabet.push(name.to_string());
        s
    }

    fn build(
        self,
        registers: BTreeSet<RegSym>,
        transitions: BTreeSet<Transition>,
        initial: BTreeSet<StateId>,
        finals: BTreeSet<StateId>,
    ) -> Result<Sra, ParseErrorKind> {
        let states = self.names.keys().copied().collect();
        Sra::new(self.alphabet, states, self.names, registers, transitions, initial, finals).map_err(|e| match e {
            procred_core::Error::NoInitialState => ParseErrorKind::NoInitial,
            procred_core::Error::UndeclaredRegister(r) => ParseErrorKind::UndeclaredRegister(r),
            other => unreachable!("parser produced an inconsistent automaton: {other}"),
        })
    }
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, (byte, ch)) in line.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((col, from)) = start.take() {
                out.push((col, &line[from..byte]));
            }
        } else if start.is_none() {
            start = Some((i + 1, byte));
        }
    }
    if let Some((col, from)) = start {
        out.push((col, &line[from..]));
    }
    out
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn parse_reg(tok: &str) -> Option<Reg> {
    match tok {
        "_" => Some(Reg::Bot),
        "*" => Some(Reg::Star),
        _ if !tok.is_empty() && tok.bytes().all(|b| b.is_ascii_digit()) => tok.parse().ok().map(Reg::Sym),
        _ => None,
    }
}

fn parse_label(tok: &str) -> Result<(Reg, Reg), ParseErrorKind> {
    let bad = || ParseErrorKind::BadRegister(tok.to_string());
    let (t, s) = tok.split_once('/').ok_or_else(bad)?;
    let (t, s) = (parse_reg(t).ok_or_else(bad)?, parse_reg(s).ok_or_else(bad)?);
    if (t == Reg::Star) != (s == Reg::Star) {
        return Err(ParseErrorKind::MixedWildcard(tok.to_string()));
    }
    Ok((t, s))
}

pub fn parse_native(text: &str) -> Result<AutomatonFile, ParseError> {
    let mut header: Option<(Kind, String)> = None;
    let mut tables = Tables::default();
    let mut declared: Option<BTreeSet<RegSym>> = None;
    let mut used: BTreeMap<RegSym, (usize, usize)> = BTreeMap::new();
    let mut transitions = BTreeSet::new();
    let mut initial = BTreeSet::new();
    let mut finals = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokens(strip_comment(raw));
        let Some(&(col, first)) = toks.first() else { continue };
        let err = |column: usize, kind: ParseErrorKind| ParseError { line, column, kind };

        if let Some(tag) = first.strip_prefix('@') {
            if header.is_some() {
                return Err(err(col, ParseErrorKind::DuplicateHeader));
            }
            let kind = match tag {
                "NFA" => Kind::Nfa,
                "SRA" => Kind::Sra,
                _ => return Err(err(col, ParseErrorKind::BadHeader(first.to_string()))),
            };
            let name = toks[1..].iter().map(|&(_, t)| t).collect::<Vec<_>>().join(" ");
            header = Some((kind, name));
            continue;
        }
        let Some((kind, _)) = &header else {
            return Err(err(col, ParseErrorKind::MissingHeader));
        };
        let kind = *kind;

        if let Some(directive) = first.strip_prefix('%') {
            let args = &toks[1..];
            match directive {
                "Initial" => initial.extend(args.iter().map(|&(_, t)| tables.state(t))),
                "Final" => finals.extend(args.iter().map(|&(_, t)| tables.state(t))),
                "Registers" if kind == Kind::Sra => {
                    let set = declared.get_or_insert_with(BTreeSet::new);
                    for &(c, t) in args {
                        match parse_reg(t) {
                            Some(Reg::Sym(r)) => {
                                set.insert(r);
                            }
                            _ => return Err(err(c, ParseErrorKind::BadRegister(t.to_string()))),
                        }
                    }
                }
                "Registers" => return Err(err(col, ParseErrorKind::RegisterInNfa)),
                _ => return Err(err(col, ParseErrorKind::UnknownDirective(first.to_string()))),
            }
            continue;
        }

        let (src, sym, label, dst) = match toks.as_slice() {
            [s, a, d] => (s, a, None, d),
            [s, a, l, d] if kind == Kind::Sra => (s, a, Some(l), d),
            [_, _, l, _] => return Err(err(l.0, ParseErrorKind::RegisterInNfa)),
            _ => return Err(err(col, ParseErrorKind::Arity(toks.len()))),
        };
        let (test, set) = match label {
            None => (Reg::Bot, Reg::Bot),
            Some(&(c, l)) => {
                let (t, s) = parse_label(l).map_err(|k| err(c, k))?;
                for r in [t, s].into_iter().filter_map(Reg::symbol) {
                    used.entry(r).or_insert((line, c));
                }
                (t, s)
            }
        };
        let (src, dst) = (tables.state(src.1), tables.state(dst.1));
        let sym = tables.symbol(sym.1);
        transitions.insert(Transition::new(src, sym, test, set, dst));
    }

    let Some((kind, name)) = header else {
        return Err(ParseError { line: 1, column: 1, kind: ParseErrorKind::MissingHeader });
    };
    let registers = match declared {
        Some(set) => {
            if let Some((&r, &(line, column))) = used.iter().find(|(r, _)| !set.contains(r)) {
                return Err(ParseError { line, column, kind: ParseErrorKind::UndeclaredRegister(r) });
            }
            set
        }
        None => used.keys().copied().collect(),
    };
    let last = text.lines().count().max(1);
    let automaton = tables
        .build(registers, transitions, initial, finals)
        .map_err(|kind| ParseError { line: last, column: 1, kind })?;
    Ok(AutomatonFile { format: Format::Native, kind, name, automaton, warnings: Vec::new() })
}

// Output is ordered by names, so printing a reparsed file reproduces it.
fn sorted_names(a: &Sra, set: &BTreeSet<StateId>) -> Vec<String> {
    let mut v: Vec<String> = set.iter().map(|&q| a.state_name(q)).collect();
    v.sort();
    v
}

fn by_name(a: &Sra) -> BTreeSet<(String, String, Reg, Reg, String)> {
    canonical(a).transitions
}

fn reg_token(r: Reg) -> String {
    match r {
        Reg::Bot => "_".into(),
        Reg::Star => "*".into(),
        Reg::Sym(v) => v.to_string(),
    }
}

/// Prints `file` in the native format. An NFA-kind file prints as `@SRA` if
/// its automaton uses registers.
pub fn print_native(file: &AutomatonFile) -> String {
    let a = &file.automaton;
    let register_free = a.registers().is_empty() && a.transitions().iter().all(|t| t.test == Reg::Bot && t.set == Reg::Bot);
    let kind = if file.kind == Kind::Nfa && register_free { Kind::Nfa } else { Kind::Sra };
    let mut out = String::new();
    let header = if file.name.is_empty() { format!("@{kind}") } else { format!("@{kind} {}", file.name) };
    let list = |set: &BTreeSet<StateId>| sorted_names(a, set).join(" ");
    writeln!(out, "{header}").unwrap();
    writeln!(out, "%Initial {}", list(a.initial())).unwrap();
    writeln!(out, "%Final {}", list(a.finals())).unwrap();
    if kind == Kind::Sra && !a.registers().is_empty() {
        let regs: Vec<String> = a.registers().iter().map(|r| r.to_string()).collect();
        writeln!(out, "%Registers {}", regs.join(" ")).unwrap();
    }
    for (src, sym, test, set, dst) in by_name(a) {
        match kind {
            Kind::Nfa => writeln!(out, "{src} {sym} {dst}").unwrap(),
            Kind::Sra => writeln!(out, "{src} {sym} {}/{} {dst}", reg_token(test), reg_token(set)).unwrap(),
        }
    }
    out
}

fn ba_state(tok: &str) -> Option<&str> {
    tok.strip_prefix('[')?.strip_suffix(']').filter(|s| !s.is_empty() && !s.contains([',', '[', ']']))
}

/// `a,[p]->[q]`
fn ba_transition(tok: &str) -> Option<(&str, &str, &str)> {
    let (sym, rest) = tok.split_once(',')?;
    let (p, q) = rest.split_once("->")?;
    Some((sym, ba_state(p)?, ba_state(q)?)).filter(|(s, _, _)| !s.is_empty())
}

/// Parses a BA file. Without leading state lines, the source of the first
/// transition is initial. Without trailing state lines, nothing is accepted.
pub fn parse_ba(text: &str) -> Result<AutomatonFile, ParseError> {
    let mut tables = Tables::default();
    let mut initial = BTreeSet::new();
    let mut finals = BTreeSet::new();
    let mut transitions = BTreeSet::new();
    let mut seen_transition = false;
    let mut in_tail = false;
    let mut first_src = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let column = raw.chars().take_while(|c| c.is_whitespace()).count() + 1;
        let err = |kind| ParseError { line, column, kind };
        if let Some(s) = ba_state(trimmed) {
            let q = tables.state(s);
            if seen_transition {
                in_tail = true;
                finals.insert(q);
            } else {
                initial.insert(q);
            }
        } else if let Some((sym, p, q)) = ba_transition(trimmed) {
            if in_tail {
                return Err(err(ParseErrorKind::BaStateInBody));
            }
            seen_transition = true;
            let (p, q) = (tables.state(p), tables.state(q));
            first_src.get_or_insert(p);
            let sym = tables.symbol(sym);
            transitions.insert(Transition::plain(p, sym, q));
        } else {
            return Err(err(ParseErrorKind::BadBaLine(trimmed.to_string())));
        }
    }

    let mut warnings = Vec::new();
    if initial.is_empty() {
        initial.extend(first_src);
    }
    if !seen_transition && !initial.is_empty() {
        // A lone state list is read as initial states of an empty automaton.
        warnings.push("no transitions; the listed states are taken as initial".to_string());
    }
    if finals.is_empty() {
        warnings.push("no final states; the language is empty".to_string());
    }
    let last = text.lines().count().max(1);
    let automaton = tables
        .build(BTreeSet::new(), transitions, initial, finals)
        .map_err(|kind| ParseError { line: last, column: 1, kind })?;
    Ok(AutomatonFile { format: Format::Ba, kind: Kind::Nfa, name: String::new(), automaton, warnings })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("BA files hold NFAs only; this automaton uses registers")]
pub struct NotAnNfa;

pub fn print_ba(a: &Sra) -> Result<String, NotAnNfa> {
    if a.transitions().iter().any(|t| t.test != Reg::Bot || t.set != Reg::Bot) {
        return Err(NotAnNfa);
    }
    let mut out = String::new();
    for q in sorted_names(a, a.initial()) {
        writeln!(out, "[{q}]").unwrap();
    }
    for (src, sym, _, _, dst) in by_name(a) {
        writeln!(out, "{sym},[{src}]->[{dst}]").unwrap();
    }
    for q in sorted_names(a, a.finals()) {
        writeln!(out, "[{q}]").unwrap();
    }
    Ok(out)
}

pub fn parse(text: &str, format: Format) -> Result<AutomatonFile, ParseError> {
    match format {
        Format::Native => parse_native(text),
        Format::Ba => parse_ba(text),
    }
}
