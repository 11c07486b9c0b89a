//! Subcommands. Every command writes its report to `out` and returns the
//! process exit status; I/O and parse failures surface as errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use procred_core::oracle::{align_alphabets, default_bound};
use procred_core::{equivalent_bounded, equivalent_exact, metrics, reduce, Equivalence, Metrics, SearchConfig, Sra};
use serde::Serialize;

use crate::format::{parse, print_ba, print_native, AutomatonFile, Format, Kind};

/// Subset cap of the exact equivalence check before falling back to the
/// bounded one.
const EXACT_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    /// The automata differ.
    VerificationFailed,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::VerificationFailed => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "procred", version, about = "Shrink NFAs by folding repeated sub-automata into register-guarded procedures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce an automaton and report per-iteration gains.
    Reduce(ReduceArgs),
    /// Check two automata for language equality.
    Verify(VerifyArgs),
    /// Print size metrics.
    Stats(StatsArgs),
    /// Fold all initial and final states into one fresh initial and one fresh final state.
    Normalize(NormalizeArgs),
    /// Export the NFA over reachable configurations of an SRA.
    Induce(InduceArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Input format; `.ba` files default to BA, others to native.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Reduced SRA in native format; printed after the report if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub depth: usize,
    #[arg(long = "max-iters")]
    pub max_iters: Option<usize>,
    #[arg(long = "no-postprocess")]
    pub no_postprocess: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub against: PathBuf,
    /// Compare words up to this length only, instead of the exact check.
    #[arg(long)]
    pub bound: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InduceArgs {
    /// Native SRA file.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Native)]
    pub format: Format,
}

pub fn load(path: &Path, format: Option<Format>) -> Result<AutomatonFile> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let file = parse(&text, format.unwrap_or_else(|| Format::detect(path)))
        .with_context(|| format!("cannot parse {}", path.display()))?;
    for w in &file.warnings {
        log::warn!("{}: {w}", path.display());
    }
    Ok(file)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(Into::into),
    }
}

fn metrics_table(out: &mut dyn Write, rows: &[(&str, &Metrics)]) -> Result<()> {
    writeln!(out, "{:<10} {:>8} {:>11} {:>9} {:>7} {:>12} {:>8}", "", "states", "transitions", "registers", "Q+Γ", "register-ops", "bits")?;
    for (label, m) in rows {
        writeln!(
            out,
            "{:<10} {:>8} {:>11} {:>9} {:>7} {:>12} {:>8}",
            label, m.states, m.transitions, m.registers, m.states_plus_registers, m.register_transitions, m.bits
        )?;
    }
    Ok(())
}

fn run_reduce(args: &ReduceArgs, out: &mut dyn Write) -> Result<ExitStatus> {
    let file = load(&args.input.input, args.input.format)?;
    let cfg = SearchConfig {
        depth_limit: args.depth,
        max_iterations: args.max_iters,
        enable_postprocess: !args.no_postprocess,
        ..SearchConfig::default()
    };
    let (reduced, report) = reduce(&file.automaton, &cfg)?;
    let result = AutomatonFile::new(Kind::Sra, file.name.clone(), reduced);
    let text = print_native(&result);
    if let Some(p) = &args.out {
        emit(out, Some(p), &text)?;
    }
    let inline = args.out.is_none().then_some(text);

    if args.json {
        #[derive(Serialize)]
        struct Doc<'a> {
            report: &'a procred_core::ReductionReport,
            #[serde(skip_serializing_if = "Option::is_none")]
            automaton: Option<&'a str>,
        }
        let doc = Doc { report: &report, automaton: inline.as_deref() };
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        return Ok(ExitStatus::Success);
    }

    writeln!(out, "depth limit {}, {} iteration(s), {:?}", args.depth, report.iterations.len(), report.duration)?;
    if report.normalized {
        writeln!(out, "initial and final states were normalized")?;
    }
    if report.trimmed > 0 {
        writeln!(out, "{} transition(s) that can never fire were dropped", report.trimmed)?;
    }
    if !report.iterations.is_empty() {
        writeln!(out, "{:>4}  {:<24} {:>8} {:>5} {:>13}", "iter", "root", "vertices", "gain", "transitions")?;
        for (i, r) in report.iterations.iter().enumerate() {
            let root = format!("({}, {})", r.root.0, r.root.1);
            let trans = format!("{} -> {}", r.transitions_before, r.transitions_after);
            writeln!(out, "{:>4}  {:<24} {:>8} {:>5} {:>13}", i + 1, root, r.vertices, r.gain, trans)?;
        }
    }
    metrics_table(out, &[("input", &report.input), ("reduced", &report.reduced), ("output", &report.output)])?;
    if cfg.enable_postprocess {
        writeln!(
            out,
            "register symbols {} -> {} after merging; {} guard set(s) collapsed",
            report.registers_before_merge, report.registers_after_merge, report.guards_collapsed
        )?;
    }
    if report.truncated {
        writeln!(out, "stopped at the iteration limit; further reduction is possible")?;
    }
    if report.budget_hits > 0 {
        writeln!(out, "{} gain estimate(s) hit the expansion budget", report.budget_hits)?;
    }
    if let Some(text) = inline {
        writeln!(out)?;
        out.write_all(text.as_bytes())?;
    }
    Ok(ExitStatus::Success)
}

#[derive(Debug, Serialize)]
struct Verdict {
    equal: bool,
    method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    accepted_by: Option<&'static str>,
}

/// Exact check, or the bounded one if `bound` is given or the exact check
/// exceeds its cap.
pub fn compare(x: &Sra, y: &Sra, bound: Option<usize>) -> Result<(Equivalence, &'static str, Option<usize>)> {
    if let Some(b) = bound {
        return Ok((equivalent_bounded(x, y, b)?, "bounded", Some(b)));
    }
    match equivalent_exact(x, y, EXACT_CAP)? {
        Equivalence::CapExceeded => {
            let b = default_bound(x, y);
            log::info!("exact check exceeded {EXACT_CAP} subsets; comparing words up to length {b}");
            Ok((equivalent_bounded(x, y, b)?, "bounded", Some(b)))
        }
        v => Ok((v, "exact", None)),
    }
}

fn run_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<ExitStatus> {
    let a = load(&args.input.input, args.input.format)?;
    let b = load(&args.against, args.input.format)?;
    let (x, y) = align_alphabets(&a.automaton, &b.automaton);
    let (v, method, bound) = compare(&x, &y, args.bound)?;
    let verdict = match &v {
        Equivalence::Counterexample(w) => Verdict {
            equal: false,
            method,
            bound,
            counterexample: Some(w.iter().map(|s| x.alphabet()[s.0 as usize].clone()).collect()),
            accepted_by: Some(if x.accepts(w)? { "in" } else { "against" }),
        },
        _ => Verdict { equal: true, method, bound, counterexample: None, accepted_by: None },
    };
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&verdict)?)?;
    } else if let Some(w) = &verdict.counterexample {
        let word = if w.is_empty() { "ε".to_string() } else { w.join(" ") };
        let who = if verdict.accepted_by == Some("in") { args.input.input.display() } else { args.against.display() };
        writeln!(out, "differ ({method}): `{word}` is accepted only by {who}")?;
    } else {
        match bound {
            Some(b) => writeln!(out, "equal on all words up to length {b}")?,
            None => writeln!(out, "equal")?,
        }
    }
    Ok(if verdict.equal { ExitStatus::Success } else { ExitStatus::VerificationFailed })
}

fn run_stats(args: &StatsArgs, out: &mut dyn Write) -> Result<ExitStatus> {
    let file = load(&args.input.input, args.input.format)?;
    let m = metrics(&file.automaton);
    if args.json {
        #[derive(Serialize)]
        struct Doc<'a> {
            name: &'a str,
            kind: Kind,
            alphabet: usize,
            #[serde(flatten)]
            metrics: Metrics,
        }
        let doc = Doc { name: &file.name, kind: file.kind, alphabet: file.automaton.alphabet().len(), metrics: m };
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    } else {
        writeln!(out, "{} {} over {} symbols", file.kind, file.name, file.automaton.alphabet().len())?;
        metrics_table(out, &[("", &m)])?;
    }
    Ok(ExitStatus::Success)
}

fn run_normalize(args: &NormalizeArgs, out: &mut dyn Write) -> Result<ExitStatus> {
    let file = load(&args.input.input, args.input.format)?;
    let normalized = AutomatonFile::new(file.kind, file.name.clone(), file.automaton.normalize_terminals());
    emit(out, args.out.as_deref(), &print_native(&normalized))?;
    Ok(ExitStatus::Success)
}

fn run_induce(args: &InduceArgs, out: &mut dyn Write) -> Result<ExitStatus> {
    let file = load(&args.input, Some(Format::Native))?;
    let induced = file.automaton.induced_nfa().lift();
    let text = match args.format {
        Format::Native => print_native(&AutomatonFile::new(Kind::Nfa, file.name.clone(), induced)),
        Format::Ba => print_ba(&induced)?,
    };
    emit(out, args.out.as_deref(), &text)?;
    Ok(ExitStatus::Success)
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<ExitStatus> {
    match &cli.command {
        Command::Reduce(a) => run_reduce(a, out),
        Command::Verify(a) => run_verify(a, out),
        Command::Stats(a) => run_stats(a, out),
        Command::Normalize(a) => run_normalize(a, out),
        Command::Induce(a) => run_induce(a, out),
    }
}
