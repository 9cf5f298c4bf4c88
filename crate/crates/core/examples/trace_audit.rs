//! Solve random instances with full trees and audit every branching node.

use std::collections::BTreeMap;

use qsat12::analysis::audit_trace;
use qsat12::testkit::{generate, GenParams};
use qsat12::{Solver, SolverOptions};

fn main() {
    let solver = Solver::new(SolverOptions {
        short_circuit: false,
    });
    println!(
        "{:>3} {:>6} {:>6} {:>10} {:>8}  tags",
        "m", "nodes", "depth", "bound", "λ max"
    );
    for m in (4..=28).step_by(4) {
        let formula = generate(GenParams {
            n1: 6,
            n2: 8,
            m,
            seed: m as u64,
        })
        .unwrap();
        let solution = solver.solve(&formula);
        let audit = audit_trace(&solution.stats, &formula);
        assert!(audit.violations.is_empty());

        let mut tags = BTreeMap::new();
        for r in &solution.stats.records {
            *tags.entry(format!("{:?}", r.case_tag)).or_insert(0) += 1;
        }
        println!(
            "{m:>3} {:>6} {:>6} {:>10.1} {:>8}  {tags:?}",
            audit.total_nodes,
            solution.stats.max_depth,
            audit.bound_limit,
            audit.worst_lambda.map_or("-".into(), |l| format!("{l:.4}")),
        );
    }
}
