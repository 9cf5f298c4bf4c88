//! Step through the simplification rules on small formulas.

use qsat12::reduce::{
    existential_unit, monotone_literals, reduce_with_stats, trivial_falsity, unit_propagate,
};
use qsat12::{Formula, Prefix, ReduceOutcome};

fn show(name: &str, formula: &Formula) {
    println!("== {name}");
    println!("{formula}");
    println!("  all-universal clause: {:?}", trivial_falsity(formula));
    println!("  first existential unit: {:?}", existential_unit(formula));
    println!("  monotone literals: {:?}", monotone_literals(formula));
    let (outcome, stats) = reduce_with_stats(formula);
    print!(
        "  fixpoint after {} passes ({} units, {} monotone): ",
        stats.passes, stats.units, stats.monotone
    );
    match outcome {
        ReduceOutcome::Verdict(v) => println!("{v}\n"),
        ReduceOutcome::Formula(g) => println!("{g}\n"),
    }
}

fn main() {
    let p = Prefix::standard(2, 3);

    // a unit on y3 forces y3 and shortens (x1 ∨ ¬y3)
    let units =
        Formula::from_dimacs(p.clone(), &[&[5], &[1, -5], &[-1, 3, 4], &[2, -3, -4]]).unwrap();
    show("unit propagation", &units);
    println!("after one propagation round:\n{}\n", unit_propagate(&units));

    // y3 occurs only positively
    let monotone =
        Formula::from_dimacs(p.clone(), &[&[1, 3, 5], &[-1, -3, 4], &[2, 3, -4]]).unwrap();
    show("monotone literals", &monotone);

    let falsified = Formula::from_dimacs(p, &[&[-2], &[1, 3, 4]]).unwrap();
    show("all-universal clause", &falsified);
}
