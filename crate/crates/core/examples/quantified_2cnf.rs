//! Decide ∀∃ formulas of width two through the implication graph.

use qsat12::qsat2::{decide_with_reason, ImplicationGraph};
use qsat12::{Formula, Prefix};

fn explain(name: &str, clauses: &[&[i32]]) {
    let formula = Formula::from_dimacs(Prefix::standard(2, 2), clauses).unwrap();
    let graph = ImplicationGraph::build(&formula).unwrap();
    let components = graph.components();
    println!(
        "{name}: {} edges, {} components",
        graph.num_edges(),
        components.num_components()
    );
    match decide_with_reason(&formula).unwrap() {
        None => println!("  TRUE"),
        Some(reason) => println!("  FALSE: {reason:?}"),
    }
}

fn main() {
    // y3 ↔ x1 is satisfiable for every x1
    explain("copy", &[&[-1, 3], &[1, -3]]);
    // x1 → y3 → ¬x1
    explain("universal to complement", &[&[-1, 3], &[-3, -1]]);
    // x1 → y3 → x2 forces one universal by another
    explain("universal to universal", &[&[-1, 3], &[-3, 2]]);
    // y3 ↔ ¬y3
    explain(
        "existential conflict",
        &[&[3, 4], &[3, -4], &[-3, 4], &[-3, -4]],
    );
}
