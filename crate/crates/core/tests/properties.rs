use proptest::prelude::*;

use qsat12::analysis::{branching_number, BranchTuple, LAMBDA_TOLERANCE};
use qsat12::qdimacs::{self, ParseMode};
use qsat12::reduce::{existential_unit, monotone_literals, reduce, trivial_falsity};
use qsat12::testkit::{generate, generate_2cnf, oracle, oracle_by_enumeration, GenParams};
use qsat12::{Clause, Formula, Lit, Prefix, ReduceOutcome, Solver, SolverOptions, Var, Verdict};

fn strict_formula() -> impl Strategy<Value = Formula> {
    (1..=4usize, 2..=6usize, 0..=14usize, any::<u64>())
        .prop_map(|(n1, n2, m, seed)| generate(GenParams { n1, n2, m, seed }).unwrap())
}

/// Clauses of 1 to 3 literals with at most one universal literal.
fn lax_formula() -> impl Strategy<Value = Formula> {
    (0..=3usize, 1..=5usize).prop_flat_map(|(n1, n2)| {
        let clause = (
            proptest::option::of((1..=n1.max(1) as i32, any::<bool>())),
            proptest::collection::vec((1..=n2 as i32, any::<bool>()), 1..=2),
        );
        proptest::collection::vec(clause, 0..12).prop_map(move |raw| {
            let clauses = raw
                .into_iter()
                .filter_map(|(u, es)| {
                    let mut lits: Vec<Lit> = es
                        .into_iter()
                        .map(|(v, s)| Lit::new(Var::new((n1 as i32 + v) as u32), s))
                        .collect();
                    if let (Some((v, s)), true) = (u, n1 > 0) {
                        lits.push(Lit::new(Var::new(v as u32), s));
                    }
                    Clause::new(lits)
                })
                .collect();
            Formula::new(Prefix::standard(n1, n2), clauses).unwrap()
        })
    })
}

fn recount(f: &Formula) -> (usize, usize) {
    let u = f
        .clauses()
        .iter()
        .filter(|c| c.lits().iter().any(|&l| f.is_universal(l)))
        .count();
    (f.clauses().len(), u)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn reduce_preserves_truth(f in lax_formula()) {
        let expected = oracle(&f).unwrap();
        let got = match reduce(&f) {
            ReduceOutcome::Verdict(v) => v,
            ReduceOutcome::Formula(g) => oracle(&g).unwrap(),
        };
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn reduce_fixpoint_postconditions(f in lax_formula()) {
        if let ReduceOutcome::Formula(g) = reduce(&f) {
            prop_assert_eq!(trivial_falsity(&g), None);
            prop_assert!(!g.has_empty_clause());
            prop_assert!(!g.is_empty());
            prop_assert_eq!(existential_unit(&g), None);
            prop_assert!(monotone_literals(&g).is_empty());
            prop_assert!(g.clauses().iter().all(|c| g.universal_count(c) <= 1));
            prop_assert_eq!(reduce(&g), ReduceOutcome::Formula(g.clone()));
        }
    }

    #[test]
    fn assign_shrinks(f in lax_formula(), pick in any::<prop::sample::Index>(), sign in any::<bool>()) {
        let n = f.prefix().num_vars();
        prop_assume!(n > 0);
        let lit = Lit::new(Var::new(pick.index(n) as u32 + 1), sign);
        let g = f.assign(lit);
        prop_assert!(g.m() <= f.m());
        prop_assert!(g.u_count() <= f.u_count());
        prop_assert!(g.clauses().iter().all(|c| c.lits().iter().all(|l| l.var() != lit.var())));
        prop_assert_eq!(recount(&g), (g.m(), g.u_count()));
        prop_assert!(g.clauses().iter().all(|c| g.universal_count(c) <= 1));
    }

    #[test]
    fn solver_matches_oracle(f in strict_formula(), short_circuit in any::<bool>()) {
        let solution = Solver::new(SolverOptions { short_circuit }).solve(&f);
        prop_assert_eq!(solution.verdict, oracle(&f).unwrap());
        prop_assert!(solution.stats.max_depth <= f.prefix().universals().len());
        for r in &solution.stats.records {
            let (a, b) = r.tuple();
            prop_assert!(a >= 2 && b >= 2, "{:?}", r);
        }
    }

    #[test]
    fn solver_on_lax_inputs(f in lax_formula()) {
        prop_assert_eq!(Solver::default().solve(&f).verdict, oracle(&f).unwrap());
    }

    #[test]
    fn solver_is_deterministic(f in strict_formula()) {
        let a = Solver::default().solve(&f);
        let b = Solver::default().solve(&f);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn qsat2_matches_enumeration(n1 in 0..=4usize, n2 in 1..=6usize, m in 0..=16usize, seed in any::<u64>()) {
        let f = generate_2cnf(GenParams { n1, n2, m, seed }).unwrap();
        prop_assert_eq!(qsat12::qsat2::decide(&f).unwrap(), oracle_by_enumeration(&f).unwrap());
    }

    #[test]
    fn qsat2_without_universals_is_2sat(n2 in 1..=8usize, m in 0..=20usize, seed in any::<u64>()) {
        let f = generate_2cnf(GenParams { n1: 0, n2, m, seed }).unwrap();
        let refutation = qsat12::qsat2::decide_with_reason(&f).unwrap();
        prop_assert!(matches!(refutation, None | Some(qsat12::qsat2::Refutation::ExistentialConflict(_))));
        prop_assert_eq!(Verdict::from_bool(refutation.is_none()), oracle(&f).unwrap());
    }

    #[test]
    fn implication_graph_is_skew_symmetric(n1 in 0..=4usize, n2 in 1..=6usize, m in 0..=16usize, seed in any::<u64>()) {
        let f = generate_2cnf(GenParams { n1, n2, m, seed }).unwrap();
        let g = qsat12::qsat2::ImplicationGraph::build(&f).unwrap();
        let units = f.clauses().iter().filter(|c| c.len() == 1).count();
        prop_assert_eq!(g.num_edges(), 2 * (f.m() - units) + units);
        for i in 0..g.num_vertices() {
            let u = Lit::from_index(i);
            for v in g.successors(u) {
                prop_assert!(g.has_edge(!v, !u));
            }
        }
    }

    #[test]
    fn oracle_ignores_clause_order_and_renaming(f in strict_formula(), shift in any::<prop::sample::Index>()) {
        let expected = oracle(&f).unwrap();
        let mut reversed = f.clauses().to_vec();
        reversed.reverse();
        prop_assert_eq!(oracle(&f.with_clauses(reversed)).unwrap(), expected);

        // rotate ids within each block
        let (n1, n2) = (f.prefix().universals().len(), f.prefix().existentials().len());
        let k1 = shift.index(n1);
        let k2 = shift.index(n2);
        let rename = |l: Lit| {
            let i = l.var().index();
            let j = if i < n1 { (i + k1) % n1 } else { n1 + (i - n1 + k2) % n2 };
            Lit::new(Var::new(j as u32 + 1), l.is_positive())
        };
        let renamed: Vec<Clause> = f
            .clauses()
            .iter()
            .map(|c| Clause::new(c.lits().iter().map(|&l| rename(l)).collect()).unwrap())
            .collect();
        prop_assert_eq!(oracle(&f.with_clauses(renamed)).unwrap(), expected);
    }

    #[test]
    fn oracles_agree(f in lax_formula()) {
        prop_assert_eq!(oracle(&f).unwrap(), oracle_by_enumeration(&f).unwrap());
    }

    #[test]
    fn qdimacs_round_trip(f in strict_formula()) {
        let text = qdimacs::serialize(&f);
        let parsed = qdimacs::parse_str(&text, ParseMode::Strict).unwrap();
        prop_assert_eq!(&parsed.formula, &f);
        prop_assert_eq!(qdimacs::serialize(&parsed.formula), text);
    }

    #[test]
    fn parse_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
        let _ = qdimacs::parse(&bytes, ParseMode::Strict);
        let _ = qdimacs::parse(&bytes, ParseMode::Lax);
    }

    #[test]
    fn parse_never_panics_on_near_misses(lines in proptest::collection::vec("(p cnf [0-9] [0-9]|a( -?[0-9])* 0?|e( -?[0-9])* 0?|(-?[0-9] ){0,4}0?|c.*)", 0..8)) {
        let text = lines.join("\n");
        let _ = qdimacs::parse_str(&text, ParseMode::Strict);
        let _ = qdimacs::parse_str(&text, ParseMode::Lax);
    }

    #[test]
    fn branching_number_residual(r in proptest::collection::vec(1..=6u32, 2..=4)) {
        let tuple = BranchTuple::new(r.clone()).unwrap();
        let x = branching_number(&tuple);
        prop_assert!(x > 1.0);
        prop_assert!(tuple.characteristic(x).abs() < LAMBDA_TOLERANCE);

        let mut permuted = r.clone();
        permuted.rotate_left(1);
        prop_assert!((branching_number(&BranchTuple::new(permuted).unwrap()) - x).abs() < 1e-12);

        let mut larger = r;
        larger[0] += 1;
        prop_assert!(branching_number(&BranchTuple::new(larger).unwrap()) < x);
    }
}
