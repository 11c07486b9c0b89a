//! The reduction loop: find a similarity graph with positive gain, merge its
//! invocations into a procedure, repeat; then compact the register alphabet.

mod search;

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::automata::Sra;
use crate::error::Result;
use crate::oracle::{metrics, Metrics};
use crate::postprocess::postprocess;
use crate::simgraph::{Pair, SelfProduct, SimilarityGraph};

pub use search::Found;
use search::{search, SearchContext};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Horizon of the per-vertex gain estimate.
    pub depth_limit: usize,
    /// `None` runs until no positive-gain graph is left.
    pub max_iterations: Option<usize>,
    pub enable_postprocess: bool,
    /// Node expansions allowed per depth-limited estimate.
    pub expansion_budget: usize,
    /// Roots tried per iteration before giving up.
    pub root_retries: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            depth_limit: 10,
            max_iterations: None,
            enable_postprocess: true,
            expansion_budget: 100_000,
            root_retries: 5,
        }
    }
}

impl SearchConfig {
    pub fn with_depth(depth_limit: usize) -> Self {
        SearchConfig { depth_limit, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IterationRecord {
    /// State names of the root vertex.
    pub root: (String, String),
    pub vertices: usize,
    pub gain: i64,
    pub transitions_before: usize,
    pub transitions_after: usize,
    pub states_after: usize,
    pub registers_after: usize,
}

impl IterationRecord {
    pub fn decrease(&self) -> i64 {
        self.transitions_before as i64 - self.transitions_after as i64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionReport {
    pub input: Metrics,
    /// Terminal states were folded into one fresh initial and final state.
    pub normalized: bool,
    /// Transitions dropped up front because they can never fire.
    pub trimmed: usize,
    pub iterations: Vec<IterationRecord>,
    /// Before post-processing.
    pub reduced: Metrics,
    pub output: Metrics,
    /// Register alphabet before and after symbol merging.
    pub registers_before_merge: usize,
    pub registers_after_merge: usize,
    pub guards_collapsed: usize,
    /// The iteration budget ran out while a positive-gain graph remained.
    pub truncated: bool,
    /// Depth-limited estimates that hit the expansion budget.
    pub budget_hits: usize,
    pub duration: Duration,
}

impl ReductionReport {
    pub fn total_gain(&self) -> i64 {
        self.iterations.iter().map(|r| r.gain).sum()
    }
}

/// Best gain over admissible linear graphs of at most `d` edges rooted at `n`;
/// `i64::MIN` if `n` itself is not admissible.
pub fn gain_d(a: &Sra, _p: &SelfProduct, n: Pair, d: usize) -> i64 {
    SearchContext::new(a, &SearchConfig::with_depth(d)).gain_d(n, d)
}

/// Greedy similarity-graph search; `None` if no positive-gain graph is found.
pub fn find_sim_graph(a: &Sra, d: usize) -> Option<SimilarityGraph> {
    find_with(a, &SearchConfig::with_depth(d)).map(|f| f.graph)
}

pub fn find_with(a: &Sra, cfg: &SearchConfig) -> Option<Found> {
    search(&mut SearchContext::new(a, cfg), cfg)
}

/// Gain of `path` computed incrementally by the search; `None` if the path is
/// not admissible.
pub fn incremental_gain(a: &Sra, path: &[Pair]) -> Option<i64> {
    let mut ctx = SearchContext::new(a, &SearchConfig::default());
    ctx.path_gain(path)
}

pub fn reduce(a: &Sra, cfg: &SearchConfig) -> Result<(Sra, ReductionReport)> {
    reduce_observed(a, cfg, |_, _| {})
}

/// Like [`reduce`], calling `observer(iteration, automaton)` after every merge.
pub fn reduce_observed(
    a: &Sra,
    cfg: &SearchConfig,
    mut observer: impl FnMut(usize, &Sra),
) -> Result<(Sra, ReductionReport)> {
    let start = Instant::now();
    let input = metrics(a);
    let normalized = a.terminal_count() > 2;
    let prepared = if normalized { a.normalize_terminals() } else { a.clone() };
    // Dead transitions could coincide after merging and break exact gains.
    let mut current = prepared.trim();
    let trimmed = prepared.transitions().len() - current.transitions().len();
    let mut iterations = Vec::new();
    let mut truncated = false;
    let mut budget_hits = 0;

    loop {
        let mut ctx = SearchContext::new(&current, cfg);
        let found = search(&mut ctx, cfg);
        budget_hits += ctx.budget_hits;
        let Some(found) = found else { break };
        if cfg.max_iterations.is_some_and(|m| iterations.len() >= m) {
            truncated = true;
            break;
        }
        let before = current.transitions().len();
        let after = found.merged.transitions().len();
        if after >= before {
            log::warn!("merge did not shrink the automaton ({before} -> {after}); stopping");
            break;
        }
        let root = found.graph.root().expect("found graphs are nonempty");
        let record = IterationRecord {
            root: (current.state_name(root.0), current.state_name(root.1)),
            vertices: found.graph.len(),
            gain: found.gain,
            transitions_before: before,
            transitions_after: after,
            states_after: found.merged.states().len(),
            registers_after: found.merged.registers().len(),
        };
        if record.decrease() != record.gain {
            log::warn!("predicted gain {} but realized {}", record.gain, record.decrease());
        }
        log::debug!("iteration {}: {:?}", iterations.len() + 1, record);
        iterations.push(record);
        current = found.merged;
        observer(iterations.len(), &current);
    }

    let reduced = metrics(&current);
    let (output, registers_after_merge, guards_collapsed) = if cfg.enable_postprocess {
        let (out, pp) = postprocess(&current);
        (out, pp.registers_after, pp.collapsed.len())
    } else {
        (current, reduced.registers, 0)
    };
    let report = ReductionReport {
        input,
        normalized,
        trimmed,
        iterations,
        reduced,
        output: metrics(&output),
        registers_before_merge: reduced.registers,
        registers_after_merge,
        guards_collapsed,
        truncated,
        budget_hits,
        duration: start.elapsed(),
    };
    Ok((output, report))
}
