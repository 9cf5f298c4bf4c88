//! The branching decision procedure.
//!
//! Each node reduces its formula to a fixpoint. A verdict ends the node.
//! Otherwise, while 3-clauses remain, the node branches on the universal
//! variable of a 3-clause and requires both children to be true. Once only
//! 2-clauses are left the quantified 2-CNF engine decides the node.

use serde::Serialize;

use crate::formula::{Formula, Lit, Var, Verdict};
use crate::qsat2;
use crate::reduce::{reduce_with_stats, ReduceOutcome};

/// Which pattern around the branching literal `ℓ` a node matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseTag {
    /// `¬ℓ` occurs in another 3-clause.
    C41,
    /// `¬ℓ` occurs in a 2-clause `(¬ℓ ∨ a)` and `¬a` occurs in a 3-clause.
    C42,
    /// `¬ℓ` occurs in a 2-clause `(¬ℓ ∨ a)` and `¬a` occurs in a 2-clause.
    C43,
    Other,
}

/// One branching node. Child counts are taken after the child's reduction;
/// a child that reduced to a verdict counts 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchRecord {
    pub depth: usize,
    pub branch_var: u32,
    pub u_count_parent: usize,
    pub u_count_child_true: usize,
    pub u_count_child_false: usize,
    pub case_tag: CaseTag,
}

impl BranchRecord {
    /// Decrease of the universal-clause count in each branch.
    pub fn tuple(&self) -> (i64, i64) {
        let p = self.u_count_parent as i64;
        (
            p - self.u_count_child_true as i64,
            p - self.u_count_child_false as i64,
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    /// Solve invocations, root included.
    pub nodes: usize,
    pub max_depth: usize,
    pub records: Vec<BranchRecord>,
    pub reduce_passes: usize,
    /// Second branches not explored because the first one decided the node.
    pub skipped_branches: usize,
    /// Nodes decided by the 2-CNF engine.
    pub qsat2_calls: usize,
    /// Disjunctive branches, taken only for 3-clauses with no universal
    /// literal once every universal is assigned.
    pub existential_branches: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    /// Skip the second branch once the first one decides the node.
    pub short_circuit: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            short_circuit: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub verdict: Verdict,
    pub stats: SolveStats,
}

/// Solves with default options.
pub fn solve(formula: &Formula) -> Solution {
    Solver::new(SolverOptions::default()).solve(formula)
}

#[derive(Clone, Debug, Default)]
pub struct Solver {
    options: SolverOptions,
}

impl Solver {
    pub fn new(options: SolverOptions) -> Solver {
        Solver { options }
    }

    pub fn solve(&self, formula: &Formula) -> Solution {
        let mut stats = SolveStats::default();
        let outcome = self.reduce(formula, &mut stats);
        let verdict = self.node(outcome, 0, &mut stats);
        Solution { verdict, stats }
    }

    fn reduce(&self, formula: &Formula, stats: &mut SolveStats) -> ReduceOutcome {
        let (outcome, r) = reduce_with_stats(formula);
        stats.reduce_passes += r.passes;
        outcome
    }

    // Recursion depth is bounded by the number of universal variables,
    // since each level assigns one of them.
    fn node(&self, outcome: ReduceOutcome, depth: usize, stats: &mut SolveStats) -> Verdict {
        stats.nodes += 1;
        stats.max_depth = stats.max_depth.max(depth);
        let formula = match outcome {
            ReduceOutcome::Verdict(v) => return v,
            ReduceOutcome::Formula(f) => f,
        };
        // A reduced formula has no empty clause; the guard mirrors the
        // empty-clause exit of the procedure.
        if formula.is_empty() {
            return Verdict::True;
        }
        if formula.has_empty_clause() {
            return Verdict::False;
        }

        if let Some((var, case_tag)) = select_branch_variable(&formula) {
            return self.branch_universal(&formula, var, case_tag, depth, stats);
        }
        if formula.clauses().iter().all(|c| c.len() <= 2) {
            stats.qsat2_calls += 1;
            return qsat2::decide(&formula).expect("clauses have 1 or 2 literals");
        }
        // Only lax inputs get here: 3-clauses without a universal literal.
        // Universals must be fixed before any existential can be.
        match most_frequent(&formula, |l| formula.is_universal(l)) {
            Some(var) => self.branch_universal(&formula, var, CaseTag::Other, depth, stats),
            None => {
                let var = most_frequent(&formula, |_| true).expect("formula is nonempty");
                self.branch_existential(&formula, var, depth, stats)
            }
        }
    }

    fn branch_universal(
        &self,
        formula: &Formula,
        var: Var,
        case_tag: CaseTag,
        depth: usize,
        stats: &mut SolveStats,
    ) -> Verdict {
        let on_true = self.reduce(&formula.assign(var.positive()), stats);
        let on_false = self.reduce(&formula.assign(var.negative()), stats);
        stats.records.push(BranchRecord {
            depth,
            branch_var: var.id(),
            u_count_parent: formula.u_count(),
            u_count_child_true: on_true.u_count(),
            u_count_child_false: on_false.u_count(),
            case_tag,
        });

        let first = self.node(on_true, depth + 1, stats);
        if first == Verdict::False && self.options.short_circuit {
            stats.skipped_branches += 1;
            return Verdict::False;
        }
        let second = self.node(on_false, depth + 1, stats);
        Verdict::from_bool(first.is_true() && second.is_true())
    }

    fn branch_existential(
        &self,
        formula: &Formula,
        var: Var,
        depth: usize,
        stats: &mut SolveStats,
    ) -> Verdict {
        stats.existential_branches += 1;
        let on_true = self.reduce(&formula.assign(var.positive()), stats);
        let first = self.node(on_true, depth + 1, stats);
        if first == Verdict::True && self.options.short_circuit {
            stats.skipped_branches += 1;
            return Verdict::True;
        }
        let on_false = self.reduce(&formula.assign(var.negative()), stats);
        let second = self.node(on_false, depth + 1, stats);
        Verdict::from_bool(first.is_true() || second.is_true())
    }
}

fn most_frequent(formula: &Formula, keep: impl Fn(Lit) -> bool) -> Option<Var> {
    let occ = formula.occurrences();
    formula
        .clauses()
        .iter()
        .flat_map(|c| c.lits().iter().copied())
        .filter(|&l| keep(l))
        .map(Lit::var)
        .min_by_key(|&v| {
            (
                std::cmp::Reverse(occ[v.positive().index()] + occ[v.negative().index()]),
                v,
            )
        })
}

/// Node budget implied by a per-branch drop of at least two universal
/// clauses: `2·2^⌈u/2⌉`.
pub fn tree_size_limit(u_count: usize) -> usize {
    2usize.saturating_mul(
        1usize
            .checked_shl(u_count.div_ceil(2) as u32)
            .unwrap_or(usize::MAX),
    )
}

/// Picks the universal variable of a 3-clause with the most occurrences,
/// lowest id on ties, and classifies the node. `None` when no 3-clause
/// contains a universal literal.
pub fn select_branch_variable(formula: &Formula) -> Option<(Var, CaseTag)> {
    let occ = formula.occurrences();
    let total = |v: Var| occ[v.positive().index()] + occ[v.negative().index()];
    let var = formula
        .clauses()
        .iter()
        .filter(|c| c.len() == 3)
        .flat_map(|c| c.lits().iter().copied())
        .filter(|&l| formula.is_universal(l))
        .map(Lit::var)
        .min_by_key(|&v| (std::cmp::Reverse(total(v)), v))?;
    Some((var, classify(formula, var)))
}

fn classify(formula: &Formula, var: Var) -> CaseTag {
    let in_clause_of = |lit: Lit, len: usize| {
        formula
            .clauses()
            .iter()
            .any(|c| c.len() == len && c.contains(lit))
    };

    let both_in_3 = in_clause_of(var.positive(), 3) && in_clause_of(var.negative(), 3);
    if both_in_3 {
        return CaseTag::C41;
    }
    let lit = if in_clause_of(var.positive(), 3) {
        var.positive()
    } else {
        var.negative()
    };
    let partners: Vec<Lit> = formula
        .clauses()
        .iter()
        .filter(|c| c.len() == 2 && c.contains(!lit))
        .flat_map(|c| c.lits().iter().copied().filter(|&l| l != !lit))
        .collect();
    if partners.iter().any(|&a| in_clause_of(!a, 3)) {
        CaseTag::C42
    } else if partners.iter().any(|&a| in_clause_of(!a, 2)) {
        CaseTag::C43
    } else {
        CaseTag::Other
    }
}
