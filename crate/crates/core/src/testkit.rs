//! Ground truth and random instances.
//!
//! [`oracle`] decides a formula straight from the definition of truth:
//! every assignment to the universal block must leave a satisfiable
//! existential residue. It shares no code with the solver or the quantified
//! 2-CNF engine. [`oracle_by_enumeration`] also avoids implication graphs
//! and checks residues by exhaustive enumeration.
//!
//! # Generator
//!
//! [`generate`] draws from a ChaCha8 stream seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`. For each clause, in order: the
//! universal variable (uniform over `X`), its sign (fair coin), the first
//! existential variable (uniform over `Y`), the second (uniform over the
//! rest of `Y`), then the two existential signs.

use std::ops::RangeInclusive;

use petgraph::algo::kosaraju_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{Clause, Formula, Lit, Prefix, Var, Verdict};
use crate::reduce::{reduce, ReduceOutcome};

/// Largest block the oracles enumerate.
pub const ENUMERATION_LIMIT: usize = 25;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} universal variables exceed the enumeration limit of {ENUMERATION_LIMIT}")]
    TooManyUniversals(usize),
    #[error("{0} existential variables exceed the enumeration limit of {ENUMERATION_LIMIT}")]
    TooManyExistentials(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("need at least 2 existential variables, got {0}")]
    TooFewExistentials(usize),
    #[error("clauses need a universal variable but n1 = 0")]
    NoUniversals,
    #[error("empty parameter range {0}")]
    EmptyRange(&'static str),
}

fn universal_guard(formula: &Formula) -> Result<(), OracleError> {
    let n1 = formula.prefix().universals().len();
    if n1 > ENUMERATION_LIMIT {
        return Err(OracleError::TooManyUniversals(n1));
    }
    Ok(())
}

/// Assignments to the universal block, as literal lists, in binary
/// counting order over the block.
fn universal_assignments(formula: &Formula) -> impl Iterator<Item = Vec<Lit>> + '_ {
    let xs = formula.prefix().universals();
    (0u64..1 << xs.len()).map(move |bits| {
        xs.iter()
            .enumerate()
            .map(|(i, &x)| Lit::new(x, bits >> i & 1 == 1))
            .collect()
    })
}

/// Existential clauses left once `assignment` fixes every universal.
/// `None` if some clause is falsified outright.
fn residual(formula: &Formula, assignment: &[Lit]) -> Option<Vec<Vec<Lit>>> {
    let mut out = Vec::with_capacity(formula.m());
    'clauses: for c in formula.clauses() {
        let mut rest = Vec::with_capacity(c.len());
        for &l in c.lits() {
            if formula.is_universal(l) {
                if assignment.contains(&l) {
                    continue 'clauses;
                }
            } else {
                rest.push(l);
            }
        }
        if rest.is_empty() {
            return None;
        }
        out.push(rest);
    }
    Some(out)
}

/// Truth by enumerating the universal block. Residues are decided by 2-SAT
/// over strong components when every clause has at most two literals, and by
/// enumerating the existential block otherwise.
pub fn oracle(formula: &Formula) -> Result<Verdict, OracleError> {
    universal_guard(formula)?;
    let n = formula.prefix().num_vars();
    for assignment in universal_assignments(formula) {
        let Some(clauses) = residual(formula, &assignment) else {
            return Ok(Verdict::False);
        };
        let sat = if clauses.iter().all(|c| c.len() <= 2) {
            two_sat(n, &clauses)
        } else {
            brute_sat(formula.prefix(), &clauses)?
        };
        if !sat {
            return Ok(Verdict::False);
        }
    }
    Ok(Verdict::True)
}

fn two_sat(num_vars: usize, clauses: &[Vec<Lit>]) -> bool {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(2 * num_vars, 2 * clauses.len());
    for _ in 0..2 * num_vars {
        g.add_node(());
    }
    let node = |l: Lit| NodeIndex::new(l.index());
    for c in clauses {
        let (a, b) = match c[..] {
            [a] => (a, a),
            [a, b] => (a, b),
            _ => unreachable!("2-SAT residue"),
        };
        g.add_edge(node(!a), node(b), ());
        g.add_edge(node(!b), node(a), ());
    }
    let mut comp = vec![0; 2 * num_vars];
    for (id, scc) in kosaraju_scc(&g).into_iter().enumerate() {
        for v in scc {
            comp[v.index()] = id;
        }
    }
    (0..num_vars).all(|i| comp[2 * i] != comp[2 * i + 1])
}

fn brute_sat(prefix: &Prefix, clauses: &[Vec<Lit>]) -> Result<bool, OracleError> {
    let ys = prefix.existentials();
    if ys.len() > ENUMERATION_LIMIT {
        return Err(OracleError::TooManyExistentials(ys.len()));
    }
    let mut position = vec![usize::MAX; prefix.num_vars()];
    for (i, y) in ys.iter().enumerate() {
        position[y.index()] = i;
    }
    let masks: Vec<(u32, u32)> = clauses.iter().map(|c| sign_masks(c, &position)).collect();
    Ok((0u32..1 << ys.len()).any(|e| {
        masks
            .iter()
            .all(|&(pos, neg)| e & pos != 0 || !e & neg != 0)
    }))
}

fn sign_masks(lits: &[Lit], position: &[usize]) -> (u32, u32) {
    let mut pos = 0;
    let mut neg = 0;
    for l in lits {
        let bit = 1 << position[l.var().index()];
        if l.is_positive() {
            pos |= bit;
        } else {
            neg |= bit;
        }
    }
    (pos, neg)
}

/// Truth by enumerating both blocks, with no graph reasoning at all.
pub fn oracle_by_enumeration(formula: &Formula) -> Result<Verdict, OracleError> {
    universal_guard(formula)?;
    let prefix = formula.prefix();
    let (xs, ys) = (prefix.universals(), prefix.existentials());
    if ys.len() > ENUMERATION_LIMIT {
        return Err(OracleError::TooManyExistentials(ys.len()));
    }
    let mut position = vec![0; prefix.num_vars()];
    for (i, v) in xs.iter().chain(ys).enumerate() {
        position[v.index()] = if i < xs.len() { i } else { i - xs.len() };
    }
    // Per clause: sign masks of its universal part and of its existential part.
    let parts: Vec<((u32, u32), (u32, u32))> = formula
        .clauses()
        .iter()
        .map(|c| {
            let (u, e): (Vec<Lit>, Vec<Lit>) =
                c.lits().iter().partition(|&&l| formula.is_universal(l));
            (sign_masks(&u, &position), sign_masks(&e, &position))
        })
        .collect();
    let falsified = |(pos, neg): (u32, u32), a: u32| a & pos == 0 && !a & neg == 0;

    let words = formula.m().div_ceil(64);
    let bitset = |part: &dyn Fn(usize) -> bool| -> Vec<u64> {
        let mut set = vec![0u64; words];
        for i in (0..parts.len()).filter(|&i| part(i)) {
            set[i / 64] |= 1 << (i % 64);
        }
        set
    };

    // Clauses whose existential part each assignment falsifies; tabulated
    // when the block is small enough.
    let table: Option<Vec<Vec<u64>>> = (ys.len() <= 16).then(|| {
        (0u32..1 << ys.len())
            .map(|e| bitset(&|i| falsified(parts[i].1, e)))
            .collect()
    });

    for x in 0u32..1 << xs.len() {
        let open = bitset(&|i| falsified(parts[i].0, x));
        let sat = match &table {
            Some(table) => table
                .iter()
                .any(|row| row.iter().zip(&open).all(|(a, b)| a & b == 0)),
            None => (0u32..1 << ys.len()).any(|e| {
                parts
                    .iter()
                    .all(|&(u, ex)| !falsified(u, x) || !falsified(ex, e))
            }),
        };
        if !sat {
            return Ok(Verdict::False);
        }
    }
    Ok(Verdict::True)
}

/// Parameters of the random `(1,2)` model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub n1: usize,
    pub n2: usize,
    pub m: usize,
    pub seed: u64,
}

/// A random `(1,2)` formula over `∀{1..=n1} ∃{n1+1..=n1+n2}`. Duplicate
/// clauses are allowed.
pub fn generate(params: GenParams) -> Result<Formula, GenError> {
    let GenParams { n1, n2, m, seed } = params;
    if n2 < 2 {
        return Err(GenError::TooFewExistentials(n2));
    }
    if n1 == 0 && m > 0 {
        return Err(GenError::NoUniversals);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..m)
        .map(|_| {
            let x = rng.gen_range(0..n1);
            let x_sign = rng.gen_bool(0.5);
            let y1 = rng.gen_range(0..n2);
            let mut y2 = rng.gen_range(0..n2 - 1);
            if y2 >= y1 {
                y2 += 1;
            }
            let lits = vec![
                Lit::new(Var::new(x as u32 + 1), x_sign),
                Lit::new(Var::new((n1 + y1) as u32 + 1), rng.gen_bool(0.5)),
                Lit::new(Var::new((n1 + y2) as u32 + 1), rng.gen_bool(0.5)),
            ];
            Clause::new(lits).expect("distinct variables")
        })
        .collect();
    Ok(Formula::new(Prefix::standard(n1, n2), clauses).expect("generated variables are declared"))
}

/// A random `∀X ∃Y` formula of 1- and 2-clauses, each independently one of
/// `(u ∨ e)`, `(e ∨ e)` or `(e)` with equal probability (kinds that the
/// block sizes cannot supply are skipped).
pub fn generate_2cnf(params: GenParams) -> Result<Formula, GenError> {
    let GenParams { n1, n2, m, seed } = params;
    if n2 == 0 && m > 0 {
        return Err(GenError::TooFewExistentials(n2));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds: Vec<u8> = [(0, n1 > 0), (1, n2 >= 2), (2, true)]
        .into_iter()
        .filter_map(|(k, ok)| ok.then_some(k))
        .collect();
    let universal =
        |rng: &mut ChaCha8Rng| Lit::new(Var::new(rng.gen_range(1..=n1) as u32), rng.gen_bool(0.5));
    let existential = |rng: &mut ChaCha8Rng| {
        Lit::new(
            Var::new((n1 + rng.gen_range(1..=n2)) as u32),
            rng.gen_bool(0.5),
        )
    };
    let mut clauses = Vec::with_capacity(m);
    while clauses.len() < m {
        let lits = match kinds[rng.gen_range(0..kinds.len())] {
            0 => vec![universal(&mut rng), existential(&mut rng)],
            1 => vec![existential(&mut rng), existential(&mut rng)],
            _ => vec![existential(&mut rng)],
        };
        // Redraw instead of collapsing so every clause keeps its kind.
        if lits.len() == 2 && lits[0].var() == lits[1].var() {
            continue;
        }
        clauses.push(Clause::new(lits).expect("distinct variables"));
    }
    Ok(Formula::new(Prefix::standard(n1, n2), clauses).expect("generated variables are declared"))
}

/// Parameter ranges for a batch of random instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchConfig {
    pub count: usize,
    pub n1: RangeInclusive<usize>,
    pub n2: RangeInclusive<usize>,
    pub m: RangeInclusive<usize>,
    pub seed: u64,
}

impl Default for BatchConfig {
    fn default() -> Self {
        BatchConfig {
            count: 1000,
            n1: 1..=6,
            n2: 2..=10,
            m: 1..=30,
            seed: 0,
        }
    }
}

impl BatchConfig {
    /// Parameters of every instance, drawn from one stream seeded by
    /// `seed`: `n1`, `n2`, `m`, then the instance seed.
    pub fn params(&self) -> Result<Vec<GenParams>, GenError> {
        for (name, r) in [("n1", &self.n1), ("n2", &self.n2), ("m", &self.m)] {
            if r.is_empty() {
                return Err(GenError::EmptyRange(name));
            }
        }
        if *self.n2.start() < 2 {
            return Err(GenError::TooFewExistentials(*self.n2.start()));
        }
        if *self.n1.start() == 0 && *self.m.end() > 0 {
            return Err(GenError::NoUniversals);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        Ok((0..self.count)
            .map(|_| GenParams {
                n1: rng.gen_range(self.n1.clone()),
                n2: rng.gen_range(self.n2.clone()),
                m: rng.gen_range(self.m.clone()),
                seed: rng.gen(),
            })
            .collect())
    }

    pub fn instances(&self) -> Result<Vec<Formula>, GenError> {
        self.params()?.into_iter().map(generate).collect()
    }
}

/// The first instance a [`verify`] run disagreed on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub index: usize,
    pub formula: Formula,
    pub expected: Verdict,
    pub solver: Verdict,
    /// Truth of the reduced formula, or the verdict reduction returned.
    pub reduced: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub checked: usize,
    pub agreed: usize,
    pub first_mismatch: Option<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.agreed == self.checked
    }
}

/// Cross-checks `solve` and reduction against [`oracle`] on a random batch.
pub fn verify(
    config: &BatchConfig,
    solve: impl Fn(&Formula) -> Verdict,
) -> Result<VerifyReport, VerifyError> {
    let mut report = VerifyReport {
        checked: 0,
        agreed: 0,
        first_mismatch: None,
    };
    for (index, formula) in config.instances()?.into_iter().enumerate() {
        let expected = oracle(&formula)?;
        let solver = solve(&formula);
        let reduced = match reduce(&formula) {
            ReduceOutcome::Verdict(v) => v,
            ReduceOutcome::Formula(f) => oracle(&f)?,
        };
        report.checked += 1;
        if solver == expected && reduced == expected {
            report.agreed += 1;
        } else if report.first_mismatch.is_none() {
            report.first_mismatch = Some(Mismatch {
                index,
                formula,
                expected,
                solver,
                reduced,
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n1: usize, n2: usize, clauses: &[&[i32]]) -> Formula {
        Formula::from_dimacs(Prefix::standard(n1, n2), clauses).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let t = f(1, 2, &[&[1, 2, 3], &[-1, -2, -3]]);
        let all_signs = f(1, 2, &[&[1, 2, 3], &[1, -2, 3], &[1, 2, -3], &[1, -2, -3]]);
        for o in [oracle, oracle_by_enumeration] {
            assert_eq!(o(&t), Ok(Verdict::True));
            assert_eq!(o(&all_signs), Ok(Verdict::False));
            assert_eq!(o(&f(3, 3, &[])), Ok(Verdict::True));
        }
    }

    #[test]
    fn oracles_on_2cnf_examples() {
        let cases: [(Formula, Verdict); 4] = [
            (f(1, 1, &[&[-1, 2], &[1, -2]]), Verdict::True),
            (f(2, 1, &[&[-1, 3], &[-3, -2]]), Verdict::False),
            (f(0, 2, &[&[1, 2], &[-1, 2], &[1, -2]]), Verdict::True),
            (f(1, 1, &[&[-1, 2], &[-1, -2]]), Verdict::False),
        ];
        for (formula, expected) in cases {
            assert_eq!(oracle(&formula), Ok(expected), "{formula}");
            assert_eq!(oracle_by_enumeration(&formula), Ok(expected), "{formula}");
        }
    }

    #[test]
    fn oracle_handles_existential_3_clauses() {
        // three 3-clauses rule out three of the eight assignments
        let g = f(0, 3, &[&[1, 2, 3], &[-1, 2, 3], &[1, -2, 3]]);
        assert_eq!(oracle(&g), Ok(Verdict::True));
    }

    #[test]
    fn oracle_guard() {
        let g = f(26, 2, &[]);
        assert_eq!(oracle(&g), Err(OracleError::TooManyUniversals(26)));
        assert_eq!(
            oracle_by_enumeration(&f(0, 26, &[])),
            Err(OracleError::TooManyExistentials(26))
        );
    }

    #[test]
    fn enumeration_without_table_matches() {
        // 17 existentials forces the untabulated path
        let g = f(
            1,
            17,
            &[&[1, 2, 3], &[-1, -2, 3], &[-3, 4, 5], &[1, -4, -18]],
        );
        assert_eq!(oracle_by_enumeration(&g), oracle(&g));
        let h = f(1, 17, &[&[1, 2], &[1, -2], &[-1, 3], &[-1, -3]]);
        assert_eq!(oracle_by_enumeration(&h), Ok(Verdict::False));
    }

    #[test]
    fn generate_contract() {
        let p = GenParams {
            n1: 2,
            n2: 3,
            m: 5,
            seed: 42,
        };
        let g = generate(p).unwrap();
        assert_eq!(g.m(), 5);
        assert!(g.is_12_shape());
        assert_eq!(generate(p).unwrap().clauses(), g.clauses());

        let empty = generate(GenParams {
            n1: 2,
            n2: 3,
            m: 0,
            seed: 1,
        })
        .unwrap();
        assert_eq!(oracle(&empty), Ok(Verdict::True));

        assert_eq!(
            generate(GenParams {
                n1: 2,
                n2: 1,
                m: 5,
                seed: 0
            }),
            Err(GenError::TooFewExistentials(1))
        );
        assert_eq!(
            generate(GenParams {
                n1: 0,
                n2: 3,
                m: 5,
                seed: 0
            }),
            Err(GenError::NoUniversals)
        );
    }

    #[test]
    fn generate_2cnf_kinds() {
        let g = generate_2cnf(GenParams {
            n1: 3,
            n2: 5,
            m: 300,
            seed: 9,
        })
        .unwrap();
        assert_eq!(g.m(), 300);
        let kinds = |len: usize, univ: usize| {
            g.clauses()
                .iter()
                .filter(|c| c.len() == len && g.universal_count(c) == univ)
                .count()
        };
        assert!(kinds(2, 1) > 50 && kinds(2, 0) > 50 && kinds(1, 0) > 50);
        assert_eq!(kinds(1, 0) + kinds(2, 0) + kinds(2, 1), 300);
    }

    #[test]
    fn verify_detects_a_wrong_solver() {
        let config = BatchConfig {
            count: 50,
            seed: 3,
            ..BatchConfig::default()
        };
        let good = verify(&config, |f| oracle(f).unwrap()).unwrap();
        assert!(good.passed());
        assert_eq!(good.checked, 50);

        let bad = verify(&config, |_| Verdict::True).unwrap();
        assert!(!bad.passed());
        let m = bad.first_mismatch.unwrap();
        assert_eq!((m.expected, m.solver), (Verdict::False, Verdict::True));
    }

    #[test]
    fn batch_config_validation() {
        let bad = BatchConfig {
            n2: 1..=3,
            ..BatchConfig::default()
        };
        assert!(bad.params().is_err());
        #[allow(clippy::reversed_empty_ranges)]
        let empty = BatchConfig {
            m: 5..=1,
            ..BatchConfig::default()
        };
        assert_eq!(empty.params(), Err(GenError::EmptyRange("m")));
        let none = BatchConfig {
            count: 0,
            ..BatchConfig::default()
        };
        assert_eq!(none.instances().unwrap().len(), 0);
    }
}
