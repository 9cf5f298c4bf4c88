//! Prenex `∀X ∃Y` CNF formulas.
//!
//! A [`Formula`] is an immutable value: every transformation returns a new
//! formula and leaves its input untouched. The quantifier prefix is shared
//! between a formula and everything derived from it, so substitution only
//! copies the clause list.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A propositional variable, identified by a dense 1-based id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Panics if `id` is zero.
    pub fn new(id: u32) -> Var {
        assert!(id > 0, "variable ids are 1-based");
        Var(id)
    }

    pub fn id(self) -> u32 {
        self.0
    }

    /// Zero-based position, for flat per-variable arrays.
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }

    pub fn positive(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn negative(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A literal in DIMACS convention: `v` or `-v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lit(i32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        let v = var.0 as i32;
        Lit(if positive { v } else { -v })
    }

    /// Builds a literal from a signed DIMACS integer. Panics on zero.
    pub fn from_dimacs(value: i32) -> Lit {
        assert!(value != 0, "0 is not a literal");
        Lit(value)
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    pub fn var(self) -> Var {
        Var(self.0.unsigned_abs())
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// Zero-based position among the `2n` literals: `2·index(v)` for `v`,
    /// `2·index(v)+1` for `¬v`.
    pub fn index(self) -> usize {
        2 * self.var().index() + usize::from(!self.is_positive())
    }

    pub fn from_index(index: usize) -> Lit {
        Lit::new(Var((index / 2 + 1) as u32), index & 1 == 0)
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

// Literals are ordered by variable first so clauses have a canonical form.
impl Ord for Lit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.var(), !self.is_positive()).cmp(&(other.var(), !other.is_positive()))
    }
}

impl PartialOrd for Lit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("variable {0} is declared in both the universal and the existential block")]
    OverlappingBlocks(u32),
    #[error("variable {0} is declared twice in the same block")]
    DuplicateDeclaration(u32),
    #[error("variables are not dense: {0} is missing from the prefix")]
    NonDense(u32),
    #[error("variable {0} is undeclared")]
    UndeclaredVariable(u32),
    #[error("clause has {0} literals, at most 3 are allowed")]
    ClauseTooLong(usize),
}

/// The two-block prefix `∀X ∃Y`. Every id in `1..=num_vars` belongs to
/// exactly one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefix {
    universals: Vec<Var>,
    existentials: Vec<Var>,
    quant: Vec<Quantifier>,
}

impl Prefix {
    pub fn new(universals: Vec<Var>, existentials: Vec<Var>) -> Result<Prefix, FormulaError> {
        let n = universals.len() + existentials.len();
        let mut quant: Vec<Option<Quantifier>> = vec![None; n];
        for (block, q) in [
            (&universals, Quantifier::Forall),
            (&existentials, Quantifier::Exists),
        ] {
            for &v in block.iter() {
                if v.index() >= n {
                    return Err(FormulaError::NonDense(first_missing(
                        &universals,
                        &existentials,
                    )));
                }
                let slot = &mut quant[v.index()];
                match *slot {
                    Some(prev) if prev == q => {
                        return Err(FormulaError::DuplicateDeclaration(v.id()))
                    }
                    Some(_) => return Err(FormulaError::OverlappingBlocks(v.id())),
                    None => *slot = Some(q),
                }
            }
        }
        let quant = quant
            .into_iter()
            .enumerate()
            .map(|(i, q)| q.ok_or(FormulaError::NonDense(i as u32 + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Prefix {
            universals,
            existentials,
            quant,
        })
    }

    /// `∀{1..=n1} ∃{n1+1..=n1+n2}`.
    pub fn standard(n1: usize, n2: usize) -> Prefix {
        let universals = (1..=n1 as u32).map(Var).collect();
        let existentials = (n1 as u32 + 1..=(n1 + n2) as u32).map(Var).collect();
        Prefix::new(universals, existentials).expect("standard prefix is dense")
    }

    pub fn universals(&self) -> &[Var] {
        &self.universals
    }

    pub fn existentials(&self) -> &[Var] {
        &self.existentials
    }

    pub fn num_vars(&self) -> usize {
        self.quant.len()
    }

    pub fn is_declared(&self, v: Var) -> bool {
        v.index() < self.quant.len()
    }

    /// Panics if `v` is undeclared.
    pub fn quantifier(&self, v: Var) -> Quantifier {
        self.quant[v.index()]
    }

    pub fn is_universal(&self, v: Var) -> bool {
        self.quantifier(v) == Quantifier::Forall
    }
}

/// A disjunction of at most three literals over distinct variables, kept
/// sorted by variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Collapses duplicate literals. Returns `None` for a tautology.
    pub fn new(mut lits: Vec<Lit>) -> Option<Clause> {
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0].var() == w[1].var()) {
            return None;
        }
        Some(Clause { lits })
    }

    pub fn from_dimacs(lits: &[i32]) -> Option<Clause> {
        Clause::new(lits.iter().map(|&l| Lit::from_dimacs(l)).collect())
    }

    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.contains(&lit)
    }

    fn without(&self, lit: Lit) -> Clause {
        Clause {
            lits: self.lits.iter().copied().filter(|&l| l != lit).collect(),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// Truth value of a closed formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    True,
    False,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Verdict::True
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "TRUE",
            Verdict::False => "FALSE",
        })
    }
}

/// A closed `∀X ∃Y` CNF formula.
///
/// Equality compares the prefix and the clause multiset; clause order is
/// ignored.
#[derive(Clone, Debug)]
pub struct Formula {
    prefix: Arc<Prefix>,
    clauses: Vec<Clause>,
    u_count: usize,
}

impl Formula {
    /// Validates and builds a formula. Tautological clauses are dropped and
    /// duplicate literals collapse.
    pub fn new(prefix: Prefix, clauses: Vec<Clause>) -> Result<Formula, FormulaError> {
        Formula::with_shared_prefix(Arc::new(prefix), clauses)
    }

    pub fn with_shared_prefix(
        prefix: Arc<Prefix>,
        clauses: Vec<Clause>,
    ) -> Result<Formula, FormulaError> {
        for c in &clauses {
            if c.len() > 3 {
                return Err(FormulaError::ClauseTooLong(c.len()));
            }
            if let Some(l) = c.lits.iter().find(|l| !prefix.is_declared(l.var())) {
                return Err(FormulaError::UndeclaredVariable(l.var().id()));
            }
        }
        Ok(Formula::from_parts(prefix, clauses))
    }

    /// Builds from raw DIMACS clauses, dropping tautologies.
    pub fn from_dimacs(prefix: Prefix, clauses: &[&[i32]]) -> Result<Formula, FormulaError> {
        for c in clauses {
            if let Some(&l) = c.iter().find(|&&l| l == 0) {
                return Err(FormulaError::UndeclaredVariable(l as u32));
            }
        }
        let clauses = clauses
            .iter()
            .filter_map(|c| Clause::from_dimacs(c))
            .collect();
        Formula::new(prefix, clauses)
    }

    fn from_parts(prefix: Arc<Prefix>, clauses: Vec<Clause>) -> Formula {
        let u_count = clauses
            .iter()
            .filter(|c| count_universal(&prefix, c) > 0)
            .count();
        Formula {
            prefix,
            clauses,
            u_count,
        }
    }

    pub fn prefix(&self) -> &Prefix {
        &self.prefix
    }

    pub fn shared_prefix(&self) -> &Arc<Prefix> {
        &self.prefix
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Number of clauses.
    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    /// Number of clauses still containing a universal literal.
    pub fn u_count(&self) -> usize {
        self.u_count
    }

    pub fn is_universal(&self, lit: Lit) -> bool {
        self.prefix.is_universal(lit.var())
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    /// Number of universal literals in `c`.
    pub fn universal_count(&self, c: &Clause) -> usize {
        count_universal(&self.prefix, c)
    }

    /// True iff every clause is a 3-clause with one universal and two
    /// existential literals.
    pub fn is_12_shape(&self) -> bool {
        self.clauses
            .iter()
            .all(|c| c.len() == 3 && self.universal_count(c) == 1)
    }

    /// Sets `lit` true: clauses containing it are dropped and `¬lit` is
    /// stripped from the rest. Stripping can leave empty clauses behind.
    pub fn assign(&self, lit: Lit) -> Formula {
        let neg = !lit;
        let clauses = self
            .clauses
            .iter()
            .filter(|c| !c.contains(lit))
            .map(|c| {
                if c.contains(neg) {
                    c.without(neg)
                } else {
                    c.clone()
                }
            })
            .collect();
        Formula::from_parts(self.prefix.clone(), clauses)
    }

    /// Removes `lit` from every clause containing it, leaving clauses with
    /// `¬lit` alone. This is setting `lit` false when `¬lit` does not occur.
    pub fn strip(&self, lit: Lit) -> Formula {
        self.assign(!lit)
    }

    /// Occurrence counts indexed by [`Lit::index`].
    pub fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0; 2 * self.prefix.num_vars()];
        for c in &self.clauses {
            for l in c.lits() {
                occ[l.index()] += 1;
            }
        }
        occ
    }

    /// Total number of literal occurrences.
    pub fn num_literals(&self) -> usize {
        self.clauses.iter().map(Clause::len).sum()
    }

    pub fn with_clauses(&self, clauses: Vec<Clause>) -> Formula {
        Formula::from_parts(self.prefix.clone(), clauses)
    }
}

fn first_missing(universals: &[Var], existentials: &[Var]) -> u32 {
    let n = (universals.len() + existentials.len()) as u32;
    (1..=n)
        .find(|&id| !universals.contains(&Var(id)) && !existentials.contains(&Var(id)))
        .unwrap_or(n + 1)
}

fn count_universal(prefix: &Prefix, c: &Clause) -> usize {
    c.lits
        .iter()
        .filter(|l| prefix.is_universal(l.var()))
        .count()
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        if self.prefix != other.prefix || self.clauses.len() != other.clauses.len() {
            return false;
        }
        let mut a = self.clauses.clone();
        let mut b = other.clauses.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

impl Eq for Formula {}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "∀")?;
        for v in self.prefix.universals() {
            write!(f, " {v}")?;
        }
        write!(f, " ∃")?;
        for v in self.prefix.existentials() {
            write!(f, " {v}")?;
        }
        write!(f, " :")?;
        for c in &self.clauses {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}
