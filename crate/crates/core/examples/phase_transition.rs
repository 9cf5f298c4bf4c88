//! Fraction of TRUE random instances as the clause count grows.
//!
//! ```text
//! cargo run --release --example phase_transition [SAMPLES]
//! ```

use qsat12::testkit::{generate, GenParams};
use qsat12::Solver;

fn main() {
    let samples: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(300);
    let (n1, n2) = (3, 12);
    let solver = Solver::default();
    println!("n1 = {n1}, n2 = {n2}, {samples} samples per row");
    for m in [3, 6, 9, 12, 18, 24, 30, 36, 48, 60] {
        let mut trues = 0;
        let mut nodes = 0;
        for seed in 0..samples {
            let solution = solver.solve(&generate(GenParams { n1, n2, m, seed }).unwrap());
            trues += u64::from(solution.verdict.is_true());
            nodes += solution.stats.nodes;
        }
        let p = trues as f64 / samples as f64;
        println!(
            "m = {m:>2}  TRUE {p:.3}  {}  mean nodes {:.1}",
            "#".repeat((p * 40.0) as usize),
            nodes as f64 / samples as f64
        );
    }
}
