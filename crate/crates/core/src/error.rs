use thiserror::Error;

use crate::automata::StateId;
use crate::simgraph::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("automaton has no initial state")]
    NoInitialState,
    #[error("transition references unknown state {0}")]
    UnknownState(StateId),
    #[error("transition uses symbol index {0} outside the alphabet")]
    UnknownSymbol(u32),
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbolName(String),
    #[error("register symbol {0} is not declared")]
    UndeclaredRegister(u32),
    #[error("wildcard must be paired with a wildcard (got {0})")]
    MixedWildcard(String),
    #[error("invalid similarity graph: {0:?}")]
    InvalidGraph(Vec<Violation>),
    #[error("pick from an empty register symbol set")]
    EmptyPick,
    #[error("missing invocation data for state {0}")]
    MissingInvocation(StateId),
    #[error("alphabets differ: {0}")]
    AlphabetMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
