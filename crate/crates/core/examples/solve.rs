//! Decide a formula given on the command line or a built-in one.
//!
//! ```text
//! cargo run --example solve [FILE.qdimacs]
//! ```

use qsat12::qdimacs::{self, ParseMode};
use qsat12::{solve, Formula, Prefix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let formula = match std::env::args().nth(1) {
        Some(path) => qdimacs::parse(&std::fs::read(path)?, ParseMode::Strict)?.formula,
        // ∀x ∃y z. (x ∨ y ∨ z) ∧ (¬x ∨ ¬y ∨ ¬z)
        None => Formula::from_dimacs(Prefix::standard(1, 2), &[&[1, 2, 3], &[-1, -2, -3]])?,
    };

    let solution = solve(&formula);
    println!("{formula}");
    println!("verdict: {}", solution.verdict);
    println!(
        "nodes {}, depth {}, qsat2 calls {}",
        solution.stats.nodes, solution.stats.max_depth, solution.stats.qsat2_calls
    );
    Ok(())
}
