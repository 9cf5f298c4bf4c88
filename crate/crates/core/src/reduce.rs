//! Simplification to a fixpoint under four truth-preserving rules:
//!
//! 1. trivial falsity: a nonempty clause of universal literals only falsifies
//!    the formula;
//! 2. unit propagation over existential unit clauses;
//! 3. monotone literals: an existential one is set true, a universal one is
//!    set false (stripped from its clauses);
//! 4. repeat while anything changed.
//!
//! Within a rule, lower variable ids are processed first, so the outcome is
//! deterministic.

use crate::formula::{Formula, Lit, Verdict};

/// Either an early verdict or a formula that no rule applies to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReduceOutcome {
    Verdict(Verdict),
    Formula(Formula),
}

impl ReduceOutcome {
    pub fn verdict(&self) -> Option<Verdict> {
        match self {
            ReduceOutcome::Verdict(v) => Some(*v),
            ReduceOutcome::Formula(_) => None,
        }
    }

    pub fn formula(&self) -> Option<&Formula> {
        match self {
            ReduceOutcome::Verdict(_) => None,
            ReduceOutcome::Formula(f) => Some(f),
        }
    }

    /// Clauses with a universal literal; 0 for a verdict.
    pub fn u_count(&self) -> usize {
        self.formula().map_or(0, Formula::u_count)
    }
}

/// `Some(False)` when a clause has no existential literal. This includes
/// the empty clause.
pub fn trivial_falsity(formula: &Formula) -> Option<Verdict> {
    formula
        .clauses()
        .iter()
        .any(|c| c.lits().iter().all(|&l| formula.is_universal(l)))
        .then_some(Verdict::False)
}

/// The lowest existential unit literal, if any.
pub fn existential_unit(formula: &Formula) -> Option<Lit> {
    formula
        .clauses()
        .iter()
        .filter(|c| c.len() == 1 && !formula.is_universal(c.lits()[0]))
        .map(|c| c.lits()[0])
        .min()
}

/// Assigns existential unit literals until none remain or an empty clause
/// appears. Universal units are left for [`trivial_falsity`].
pub fn unit_propagate(formula: &Formula) -> Formula {
    propagate_counting(formula).0
}

fn propagate_counting(formula: &Formula) -> (Formula, usize) {
    let mut current = formula.clone();
    let mut fired = 0;
    while !current.has_empty_clause() {
        let Some(unit) = existential_unit(&current) else {
            break;
        };
        current = current.assign(unit);
        fired += 1;
    }
    (current, fired)
}

/// Literals that occur while their complement does not, ascending by
/// variable.
pub fn monotone_literals(formula: &Formula) -> Vec<Lit> {
    let occ = formula.occurrences();
    (0..occ.len())
        .map(Lit::from_index)
        .filter(|&l| occ[l.index()] > 0 && occ[(!l).index()] == 0)
        .collect()
}

/// One sweep of the monotone literal rule over the literals that are
/// monotone on entry.
pub fn monotone_eliminate(formula: &Formula) -> Formula {
    monotone_counting(formula).0
}

fn monotone_counting(formula: &Formula) -> (Formula, usize) {
    let mut current = formula.clone();
    let mut fired = 0;
    // Eliminating a monotone literal never gives another one's complement
    // an occurrence, so the entry snapshot stays valid.
    for lit in monotone_literals(formula) {
        current = if formula.is_universal(lit) {
            current.strip(lit)
        } else {
            current.assign(lit)
        };
        fired += 1;
    }
    (current, fired)
}

/// Counters from a [`reduce_with_stats`] call.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReduceStats {
    /// Completed rule sweeps, including the final one that changed nothing.
    pub passes: usize,
    pub units: usize,
    pub monotone: usize,
}

pub fn reduce(formula: &Formula) -> ReduceOutcome {
    reduce_with_stats(formula).0
}

pub fn reduce_with_stats(formula: &Formula) -> (ReduceOutcome, ReduceStats) {
    let mut stats = ReduceStats::default();
    let mut current = formula.clone();
    loop {
        stats.passes += 1;
        if let Some(v) = trivial_falsity(&current) {
            return (ReduceOutcome::Verdict(v), stats);
        }
        let (next, units) = propagate_counting(&current);
        stats.units += units;
        if next.has_empty_clause() {
            return (ReduceOutcome::Verdict(Verdict::False), stats);
        }
        let (next, monotone) = monotone_counting(&next);
        stats.monotone += monotone;
        current = next;
        if units + monotone == 0 {
            break;
        }
    }
    if current.is_empty() {
        (ReduceOutcome::Verdict(Verdict::True), stats)
    } else {
        (ReduceOutcome::Formula(current), stats)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Clause, Prefix};

    // ∀x₁ ∃x₂ x₃ unless stated otherwise.
    fn f(n1: usize, n2: usize, clauses: &[&[i32]]) -> Formula {
        Formula::from_dimacs(Prefix::standard(n1, n2), clauses).unwrap()
    }

    fn clauses(f: &Formula) -> Vec<Vec<i32>> {
        let mut out: Vec<Vec<i32>> = f
            .clauses()
            .iter()
            .map(|c| c.lits().iter().map(|l| l.to_dimacs()).collect())
            .collect();
        out.sort();
        out
    }

    #[test]
    fn trivial_falsity_examples() {
        assert_eq!(trivial_falsity(&f(1, 0, &[&[1]])), Some(Verdict::False));
        assert_eq!(trivial_falsity(&f(1, 2, &[&[1, 2, 3]])), None);
        assert_eq!(
            trivial_falsity(&f(2, 1, &[&[1, 2], &[1, 2, 3]])),
            Some(Verdict::False)
        );
        let empty_clause = f(1, 2, &[]).with_clauses(vec![Clause::empty()]);
        assert_eq!(trivial_falsity(&empty_clause), Some(Verdict::False));
    }

    #[test]
    fn unit_propagation_examples() {
        // x=1 universal, y=2, z=3
        let g = f(1, 2, &[&[2], &[-2, 3], &[-3, 1]]);
        assert_eq!(clauses(&unit_propagate(&g)), vec![vec![1]]);

        let h = f(0, 1, &[&[1], &[-1]]);
        assert!(unit_propagate(&h).has_empty_clause());
        assert_eq!(unit_propagate(&h).m(), 1);

        let k = f(1, 2, &[&[1, 2, 3], &[-1, -2, -3]]);
        assert_eq!(unit_propagate(&k), k);
    }

    #[test]
    fn universal_unit_not_propagated() {
        let g = f(1, 1, &[&[1], &[-1, 2]]);
        assert_eq!(unit_propagate(&g), g);
    }

    #[test]
    fn monotone_examples() {
        let g = f(1, 2, &[&[-1, 2, 3]]);
        assert_eq!(monotone_literals(&g).len(), 3);
        // the second clause keeps y and z non-monotone, so only ¬x is stripped
        let after = f(1, 2, &[&[-1, 2, 3], &[-2, -3]]);
        assert_eq!(
            clauses(&monotone_eliminate(&after)),
            vec![vec![-2, -3], vec![2, 3]]
        );

        let h = f(0, 2, &[&[1, 2], &[1, -2]]);
        assert!(monotone_eliminate(&h).is_empty());

        let k = f(0, 2, &[&[1, 2], &[-1, -2]]);
        assert_eq!(monotone_eliminate(&k), k);
    }

    #[test]
    fn reduce_examples() {
        let g = f(1, 2, &[&[2], &[-2, 3], &[-3, 1]]);
        assert_eq!(reduce(&g), ReduceOutcome::Verdict(Verdict::False));

        let h = f(0, 2, &[&[1], &[-1, 2]]);
        assert_eq!(reduce(&h), ReduceOutcome::Verdict(Verdict::True));

        let k = f(1, 2, &[&[1, 2, 3], &[-1, -2, -3]]);
        assert_eq!(reduce(&k), ReduceOutcome::Formula(k.clone()));
    }

    #[test]
    fn reduce_of_empty_formula_is_true() {
        assert_eq!(reduce(&f(2, 2, &[])), ReduceOutcome::Verdict(Verdict::True));
    }

    #[test]
    fn stats_count_passes() {
        let k = f(1, 2, &[&[1, 2, 3], &[-1, -2, -3]]);
        let (_, stats) = reduce_with_stats(&k);
        assert_eq!(
            stats,
            ReduceStats {
                passes: 1,
                units: 0,
                monotone: 0
            }
        );
    }
}
