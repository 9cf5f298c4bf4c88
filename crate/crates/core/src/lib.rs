//! Exact decision procedure for (1,2)-QSAT: closed formulas `∀X ∃Y φ` whose
//! clauses each hold one universal and two existential literals.
//!
//! - [`formula`]: the formula model and literal substitution.
//! - [`qdimacs`]: reading and writing the QDIMACS subset for this prefix.
//! - [`reduce`]: fixpoint simplification by truth-preserving rules.
//! - [`qsat2`]: polynomial-time truth of quantified 2-CNF.
//! - [`solver`]: branching on universal variables down to 2-CNF.
//! - [`testkit`]: brute-force oracles and seeded instance generators.
//! - [`analysis`]: branching numbers and search-tree audits.
//! - [`cli`]: the commands behind the `qsat12` binary.
//!
//! ```
//! use qsat12::{qdimacs, solver, Verdict};
//!
//! let text = "p cnf 3 2\na 1 0\ne 2 3 0\n1 2 3 0\n-1 -2 -3 0\n";
//! let formula = qdimacs::parse_str(text, qdimacs::ParseMode::Strict).unwrap().formula;
//! assert_eq!(solver::solve(&formula).verdict, Verdict::True);
//! ```

pub mod analysis;
pub mod cli;
pub mod formula;
pub mod qdimacs;
pub mod qsat2;
pub mod reduce;
pub mod solver;
pub mod testkit;

pub use formula::{Clause, Formula, FormulaError, Lit, Prefix, Quantifier, Var, Verdict};
pub use reduce::{reduce, ReduceOutcome};
pub use solver::{solve, Solution, SolveStats, Solver, SolverOptions};
