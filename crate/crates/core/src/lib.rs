//! Size reduction of nondeterministic finite automata by procedure finding.
//!
//! Repeating sub-graphs of an automaton are detected in its self-product and
//! folded into a single shared procedure. The procedure lives on a
//! single-finite-register automaton ([`Sra`]): call transitions store an
//! invocation id in the register, internal transitions may test it, and return
//! transitions test it and reset it to the default value.
//!
//! The pipeline is [`reduce`], which repeatedly runs [`find_sim_graph`] and
//! [`create_procedure`] and finishes with the passes in [`postprocess`].
//! [`oracle`] holds the language-equivalence checks used to validate results.

pub mod automata;
pub mod error;
pub mod fixtures;
pub mod oracle;
pub mod postprocess;
pub mod procedure;
pub mod reducer;
pub mod simgraph;

pub use automata::{Config, Nfa, NfaBuilder, Reg, RegSym, SignatureMap, Sra, SraBuilder, StateId, Symbol, Transition};
pub use error::{Error, Result};
pub use oracle::{equivalent_bounded, equivalent_exact, metrics, Equivalence, Metrics};
pub use postprocess::{merge_register_symbols, remove_vacuous_guards};
pub use procedure::{create_procedure, create_procedure_transitions, new_id_symbol, pick};
pub use reducer::{find_sim_graph, gain_d, reduce, reduce_observed, IterationRecord, ReductionReport, SearchConfig};
pub use simgraph::{classify_transitions, gain, validate_simgraph, Pair, SelfProduct, SimilarityGraph, TransitionPartition, Violation};
