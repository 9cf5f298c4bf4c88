//! The `qsat12` command line.
//!
//! Exit codes follow the SAT-solver convention: 10 for a true formula, 20
//! for a false one, 0 for other successful commands and 1 for any error.
//! Solving prints only the verdict line on standard output.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::analysis::{audit_trace, branching_number, BranchTuple};
use crate::formula::{Formula, Verdict};
use crate::qdimacs::{self, ParseMode};
use crate::solver::{SolveStats, Solver, SolverOptions};
use crate::testkit::{self, BatchConfig, GenParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Error = 1,
    True = 10,
    False = 20,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

impl From<Verdict> for ExitStatus {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::True => ExitStatus::True,
            Verdict::False => ExitStatus::False,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qsat12",
    version,
    about = "Decide (1,2)-QSAT formulas and analyze the search"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide a QDIMACS formula; exits 10 if true, 20 if false
    Solve(SolveArgs),
    /// Write a random (1,2) formula as QDIMACS
    Gen(GenArgs),
    /// Cross-check the solver and the simplifier against brute force
    Verify(VerifyArgs),
    /// Print the branching number of a tuple of measure decreases
    Lambda(LambdaArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub path: PathBuf,
    /// Accept clauses of 1 to 3 literals with at most one universal
    #[arg(long)]
    pub lax: bool,
    /// Write a JSON search report here (`-` for standard error)
    #[arg(long, value_name = "OUT")]
    pub stats: Option<PathBuf>,
    /// Explore both branches of every node, for exact tree sizes
    #[arg(long)]
    pub no_shortcircuit: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub n1: usize,
    pub n2: usize,
    pub m: usize,
    pub seed: u64,
    /// Output file; standard output if omitted
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(default_value_t = 1000)]
    pub count: usize,
    /// Universal block size range, e.g. `1-6`
    #[arg(long, default_value = "1-6", value_parser = parse_range)]
    pub n1: RangeInclusive<usize>,
    /// Existential block size range
    #[arg(long, default_value = "2-10", value_parser = parse_range)]
    pub n2: RangeInclusive<usize>,
    /// Clause count range
    #[arg(long, default_value = "1-30", value_parser = parse_range)]
    pub m: RangeInclusive<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Where the first disagreeing instance is written
    #[arg(long, default_value = "verify-failure.qdimacs")]
    pub repro: PathBuf,
}

#[derive(Debug, Args)]
pub struct LambdaArgs {
    #[arg(required = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub r: Vec<u32>,
}

/// Accepts `a`, `a-b`, `a..b` (inclusive) and `a..=b`.
fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    let (lo, hi) = if let Some((a, b)) = s.split_once("..=") {
        (num(a)?, num(b)?)
    } else if let Some((a, b)) = s.split_once("..") {
        (num(a)?, num(b)?)
    } else if let Some((a, b)) = s.split_once('-') {
        (num(a)?, num(b)?)
    } else {
        let v = num(s)?;
        (v, v)
    };
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok(lo..=hi)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return ExitStatus::Error;
            }
            let _ = write!(out, "{}", e.render());
            return ExitStatus::Success;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a, out, err),
        Command::Gen(a) => cmd_gen(&a, out),
        Command::Verify(a) => cmd_verify(&a, out, err),
        Command::Lambda(a) => cmd_lambda(&a, out),
    };
    result.unwrap_or_else(|msg| {
        let _ = writeln!(err, "error: {msg}");
        ExitStatus::Error
    })
}

/// Search report written by `solve --stats`.
#[derive(Debug, Serialize)]
pub struct StatsReport {
    pub verdict: Verdict,
    pub m: usize,
    pub n1: usize,
    pub n2: usize,
    pub u_count: usize,
    pub nodes: usize,
    pub max_depth: usize,
    pub reduce_passes: usize,
    pub skipped_branches: usize,
    pub qsat2_calls: usize,
    pub tuples: Vec<(i64, i64)>,
    pub case_tags: BTreeMap<String, usize>,
    pub worst_tuple: Option<BranchTuple>,
    pub worst_lambda: Option<f64>,
    pub bound_limit: f64,
    pub bound_holds: bool,
    pub violations: usize,
}

impl StatsReport {
    pub fn new(formula: &Formula, verdict: Verdict, stats: &SolveStats) -> StatsReport {
        let audit = audit_trace(stats, formula);
        let mut case_tags = BTreeMap::new();
        for r in &stats.records {
            *case_tags.entry(format!("{:?}", r.case_tag)).or_insert(0) += 1;
        }
        StatsReport {
            verdict,
            m: formula.m(),
            n1: formula.prefix().universals().len(),
            n2: formula.prefix().existentials().len(),
            u_count: formula.u_count(),
            nodes: stats.nodes,
            max_depth: stats.max_depth,
            reduce_passes: stats.reduce_passes,
            skipped_branches: stats.skipped_branches,
            qsat2_calls: stats.qsat2_calls,
            tuples: audit.tuples,
            case_tags,
            worst_tuple: audit.worst_tuple,
            worst_lambda: audit.worst_lambda,
            bound_limit: audit.bound_limit,
            bound_holds: audit.bound_holds,
            violations: audit.violations.len(),
        }
    }
}

fn cmd_solve(
    args: &SolveArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<ExitStatus, String> {
    let bytes = std::fs::read(&args.path).map_err(|e| format!("{}: {e}", args.path.display()))?;
    let mode = if args.lax {
        ParseMode::Lax
    } else {
        ParseMode::Strict
    };
    let parsed =
        qdimacs::parse(&bytes, mode).map_err(|d| format!("{}: {d}", args.path.display()))?;
    for w in &parsed.warnings {
        let _ = writeln!(err, "warning: {}: {w}", args.path.display());
    }

    let solver = Solver::new(SolverOptions {
        short_circuit: !args.no_shortcircuit,
    });
    let solution = solver.solve(&parsed.formula);
    writeln!(out, "{}", solution.verdict).map_err(|e| e.to_string())?;

    if let Some(path) = &args.stats {
        let report = StatsReport::new(&parsed.formula, solution.verdict, &solution.stats);
        let json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())? + "\n";
        if path == Path::new("-") {
            err.write_all(json.as_bytes()).map_err(|e| e.to_string())?;
        } else {
            std::fs::write(path, json).map_err(|e| format!("{}: {e}", path.display()))?;
        }
    }
    Ok(solution.verdict.into())
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<ExitStatus, String> {
    let params = GenParams {
        n1: args.n1,
        n2: args.n2,
        m: args.m,
        seed: args.seed,
    };
    let formula = testkit::generate(params).map_err(|e| e.to_string())?;
    let text = qdimacs::serialize(&formula);
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string())?,
    }
    Ok(ExitStatus::Success)
}

fn cmd_verify(
    args: &VerifyArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<ExitStatus, String> {
    let solver = Solver::default();
    verify_with(args, |f| solver.solve(f).verdict, out, err)
}

/// `verify` against an arbitrary decision procedure. On the first
/// disagreement the instance is written to `args.repro` and the status is
/// [`ExitStatus::Error`].
pub fn verify_with(
    args: &VerifyArgs,
    solve: impl Fn(&Formula) -> Verdict,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<ExitStatus, String> {
    let config = BatchConfig {
        count: args.count,
        n1: args.n1.clone(),
        n2: args.n2.clone(),
        m: args.m.clone(),
        seed: args.seed,
    };
    let report = testkit::verify(&config, solve).map_err(|e| e.to_string())?;
    writeln!(out, "{}/{} agree", report.agreed, report.checked).map_err(|e| e.to_string())?;
    let Some(mismatch) = report.first_mismatch else {
        return Ok(ExitStatus::Success);
    };
    std::fs::write(&args.repro, qdimacs::serialize(&mismatch.formula))
        .map_err(|e| format!("{}: {e}", args.repro.display()))?;
    let _ = writeln!(
        err,
        "instance {}: oracle {}, solver {}, reduced {}; written to {}",
        mismatch.index,
        mismatch.expected,
        mismatch.solver,
        mismatch.reduced,
        args.repro.display()
    );
    Ok(ExitStatus::Error)
}

fn cmd_lambda(args: &LambdaArgs, out: &mut dyn Write) -> Result<ExitStatus, String> {
    let tuple = BranchTuple::new(args.r.clone()).map_err(|e| e.to_string())?;
    writeln!(out, "{:.6}", branching_number(&tuple)).map_err(|e| e.to_string())?;
    Ok(ExitStatus::Success)
}
