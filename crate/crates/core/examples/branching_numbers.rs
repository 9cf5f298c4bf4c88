//! Branching numbers of measure-decrease tuples.
//!
//! ```text
//! cargo run --example branching_numbers [r1 r2 ...]
//! ```

use qsat12::analysis::{branching_number, BranchTuple};

fn main() {
    let args: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let tuples: Vec<Vec<u32>> = if args.is_empty() {
        vec![
            vec![1, 1],
            vec![1, 2],
            vec![2, 2],
            vec![2, 3],
            vec![1, 1, 1],
            vec![3, 3],
            vec![2, 4],
        ]
    } else {
        vec![args]
    };
    for r in tuples {
        let tuple = match BranchTuple::new(r.clone()) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("{r:?}: {e}");
                std::process::exit(1);
            }
        };
        let x = branching_number(&tuple);
        println!(
            "{r:?}  λ = {x:.6}  residual {:.1e}",
            tuple.characteristic(x)
        );
    }
}
