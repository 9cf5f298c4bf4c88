//! Truth of `∀X ∃Y` formulas whose clauses have at most two literals.
//!
//! The formula is false iff one of the following holds in its implication
//! graph:
//!
//! - an existential `y` and `¬y` share a strong component;
//! - a universal literal reaches its own complement;
//! - a universal literal reaches a universal literal of another variable.
//!
//! Paths from a universal literal into an outer existential cannot occur
//! here since every existential is quantified inside every universal.

use thiserror::Error;

use crate::formula::{Formula, Lit, Verdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("clause {index} has {len} literals, the implication graph needs 1 or 2")]
    ClauseSize { index: usize, len: usize },
}

/// Digraph over the `2n` literals of a formula, in [`Lit::index`] order.
#[derive(Clone, Debug)]
pub struct ImplicationGraph {
    succ: Vec<Vec<usize>>,
    num_edges: usize,
}

impl ImplicationGraph {
    /// `(a ∨ b)` contributes `¬a → b` and `¬b → a`; `(a)` contributes `¬a → a`.
    pub fn build(formula: &Formula) -> Result<ImplicationGraph, GraphError> {
        let mut g = ImplicationGraph {
            succ: vec![Vec::new(); 2 * formula.prefix().num_vars()],
            num_edges: 0,
        };
        for (index, c) in formula.clauses().iter().enumerate() {
            match *c.lits() {
                [a] => g.add_edge(!a, a),
                [a, b] => {
                    g.add_edge(!a, b);
                    g.add_edge(!b, a);
                }
                _ => {
                    return Err(GraphError::ClauseSize {
                        index,
                        len: c.len(),
                    })
                }
            }
        }
        Ok(g)
    }

    fn add_edge(&mut self, from: Lit, to: Lit) {
        self.succ[from.index()].push(to.index());
        self.num_edges += 1;
    }

    pub fn num_vertices(&self) -> usize {
        self.succ.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn successors(&self, lit: Lit) -> impl Iterator<Item = Lit> + '_ {
        self.succ[lit.index()].iter().map(|&i| Lit::from_index(i))
    }

    pub fn has_edge(&self, from: Lit, to: Lit) -> bool {
        self.succ[from.index()].contains(&to.index())
    }

    /// Iterative Tarjan. Components are numbered in reverse topological
    /// order: every edge goes from a higher or equal id to a lower or equal id.
    pub fn components(&self) -> ComponentLabeling {
        const UNSET: usize = usize::MAX;
        let n = self.succ.len();
        let mut comp = vec![UNSET; n];
        let mut order = vec![UNSET; n];
        let mut low = vec![0; n];
        let mut stack = Vec::new();
        let mut call: Vec<(usize, usize)> = Vec::new();
        let mut timer = 0;
        let mut count = 0;

        for root in 0..n {
            if order[root] != UNSET {
                continue;
            }
            call.push((root, 0));
            order[root] = timer;
            low[root] = timer;
            timer += 1;
            stack.push(root);

            while let Some(top) = call.last_mut() {
                let v = top.0;
                if let Some(&w) = self.succ[v].get(top.1) {
                    top.1 += 1;
                    if order[w] == UNSET {
                        order[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push(w);
                        call.push((w, 0));
                    } else if comp[w] == UNSET {
                        low[v] = low[v].min(order[w]);
                    }
                    continue;
                }
                call.pop();
                if low[v] == order[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack holds v");
                        comp[w] = count;
                        if w == v {
                            break;
                        }
                    }
                    count += 1;
                }
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }

        let mut dag = vec![Vec::new(); count];
        for (v, succ) in self.succ.iter().enumerate() {
            for &w in succ {
                if comp[v] != comp[w] {
                    dag[comp[v]].push(comp[w]);
                }
            }
        }
        for edges in &mut dag {
            edges.sort_unstable();
            edges.dedup();
        }
        ComponentLabeling { comp, dag }
    }
}

/// Strong components of an [`ImplicationGraph`] and their condensation.
#[derive(Clone, Debug)]
pub struct ComponentLabeling {
    comp: Vec<usize>,
    dag: Vec<Vec<usize>>,
}

impl ComponentLabeling {
    pub fn component(&self, lit: Lit) -> usize {
        self.comp[lit.index()]
    }

    pub fn num_components(&self) -> usize {
        self.dag.len()
    }

    /// Components reachable from `lit`'s component, its own included.
    pub fn reachable_from(&self, lit: Lit) -> Vec<bool> {
        let mut seen = vec![false; self.dag.len()];
        let start = self.component(lit);
        seen[start] = true;
        let mut todo = vec![start];
        while let Some(c) = todo.pop() {
            for &d in &self.dag[c] {
                if !seen[d] {
                    seen[d] = true;
                    todo.push(d);
                }
            }
        }
        seen
    }

    /// Whether a nonempty path leads from `from` to `to`. Distinct literals
    /// in one component always qualify.
    pub fn reaches(&self, from: Lit, to: Lit) -> bool {
        from != to && self.reachable_from(from)[self.component(to)]
    }
}

/// Why [`decide_with_reason`] returned false.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Refutation {
    EmptyClause,
    /// `y` and `¬y` share a component.
    ExistentialConflict(Lit),
    /// A universal literal reaches its complement.
    UniversalToComplement(Lit),
    /// A universal literal reaches a universal literal of another variable.
    UniversalToUniversal(Lit, Lit),
}

/// Decides a formula whose clauses all have at most two literals.
pub fn decide(formula: &Formula) -> Result<Verdict, GraphError> {
    decide_with_reason(formula).map(|r| Verdict::from_bool(r.is_none()))
}

pub fn decide_with_reason(formula: &Formula) -> Result<Option<Refutation>, GraphError> {
    if formula.has_empty_clause() {
        return Ok(Some(Refutation::EmptyClause));
    }
    let graph = ImplicationGraph::build(formula)?;
    let labels = graph.components();
    let prefix = formula.prefix();

    for &y in prefix.existentials() {
        if labels.component(y.positive()) == labels.component(y.negative()) {
            return Ok(Some(Refutation::ExistentialConflict(y.positive())));
        }
    }

    let universal_lits: Vec<Lit> = prefix
        .universals()
        .iter()
        .flat_map(|&x| [x.positive(), x.negative()])
        .collect();
    for &u in &universal_lits {
        let reach = labels.reachable_from(u);
        if reach[labels.component(!u)] {
            return Ok(Some(Refutation::UniversalToComplement(u)));
        }
        if let Some(&v) = universal_lits
            .iter()
            .find(|v| v.var() != u.var() && reach[labels.component(**v)])
        {
            return Ok(Some(Refutation::UniversalToUniversal(u, v)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Clause, Prefix};

    fn f(n1: usize, n2: usize, clauses: &[&[i32]]) -> Formula {
        Formula::from_dimacs(Prefix::standard(n1, n2), clauses).unwrap()
    }

    fn l(v: i32) -> Lit {
        Lit::from_dimacs(v)
    }

    #[test]
    fn graph_examples() {
        // x=1, y=2
        let g = ImplicationGraph::build(&f(1, 1, &[&[-1, 2]])).unwrap();
        assert!(g.has_edge(l(1), l(2)) && g.has_edge(l(-2), l(-1)));
        assert_eq!(g.num_edges(), 2);

        let g = ImplicationGraph::build(&f(0, 1, &[&[1]])).unwrap();
        assert!(g.has_edge(l(-1), l(1)));
        assert_eq!(g.num_edges(), 1);

        let g = ImplicationGraph::build(&f(0, 0, &[])).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (0, 0));
    }

    #[test]
    fn graph_rejects_other_sizes() {
        assert_eq!(
            ImplicationGraph::build(&f(1, 2, &[&[1, 2, 3]])).unwrap_err(),
            GraphError::ClauseSize { index: 0, len: 3 }
        );
        let empty = f(0, 1, &[]).with_clauses(vec![Clause::empty()]);
        assert!(ImplicationGraph::build(&empty).is_err());
    }

    #[test]
    fn components_are_reverse_topological() {
        let g =
            ImplicationGraph::build(&f(0, 4, &[&[-1, 2], &[-2, 3], &[-3, 1], &[-3, 4]])).unwrap();
        let labels = g.components();
        assert_eq!(labels.component(l(1)), labels.component(l(3)));
        assert_ne!(labels.component(l(1)), labels.component(l(4)));
        for v in 0..g.num_vertices() {
            let from = Lit::from_index(v);
            for to in g.successors(from) {
                assert!(labels.component(from) >= labels.component(to));
            }
        }
        assert!(labels.reaches(l(1), l(4)));
        assert!(!labels.reaches(l(4), l(1)));
    }

    #[test]
    fn copy_is_true() {
        // ∀x ∃y: y ↔ x
        assert_eq!(decide(&f(1, 1, &[&[-1, 2], &[1, -2]])), Ok(Verdict::True));
    }

    #[test]
    fn universal_chain_is_false() {
        // ∀x₁ x₂ ∃y: (¬x₁ ∨ y)(¬y ∨ ¬x₂)
        let g = f(2, 1, &[&[-1, 3], &[-3, -2]]);
        assert_eq!(
            decide_with_reason(&g),
            Ok(Some(Refutation::UniversalToUniversal(l(1), l(-2))))
        );
    }

    #[test]
    fn plain_2sat() {
        assert_eq!(
            decide(&f(0, 2, &[&[1, 2], &[-1, 2], &[1, -2]])),
            Ok(Verdict::True)
        );
        assert_eq!(
            decide(&f(0, 2, &[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]])),
            Ok(Verdict::False)
        );
    }

    #[test]
    fn universal_to_complement() {
        // ∀x ∃y: (¬x ∨ y)(¬x ∨ ¬y)
        let g = f(1, 1, &[&[-1, 2], &[-1, -2]]);
        assert_eq!(
            decide_with_reason(&g),
            Ok(Some(Refutation::UniversalToComplement(l(1))))
        );
    }

    #[test]
    fn universal_unit_is_false() {
        assert_eq!(decide(&f(1, 0, &[&[1]])), Ok(Verdict::False));
    }

    #[test]
    fn empty_clause_is_false() {
        let g = f(0, 1, &[]).with_clauses(vec![Clause::empty()]);
        assert_eq!(decide_with_reason(&g), Ok(Some(Refutation::EmptyClause)));
    }
}
