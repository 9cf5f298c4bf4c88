//! Generate, serialize, parse back, and show parser diagnostics.

use qsat12::qdimacs::{parse_str, serialize, ParseMode};
use qsat12::testkit::{generate, GenParams};

fn main() {
    let formula = generate(GenParams {
        n1: 2,
        n2: 3,
        m: 4,
        seed: 1,
    })
    .unwrap();
    let text = serialize(&formula);
    print!("{text}");
    let parsed = parse_str(&text, ParseMode::Strict).unwrap();
    assert_eq!(parsed.formula, formula);
    println!("round trip ok\n");

    let lax = "p cnf 4 3\na 1 0\ne 2 3 0\n-1 0\n2 3 0\n1 -2 0\n";
    match parse_str(lax, ParseMode::Lax) {
        Ok(p) => println!(
            "lax input: {} clauses, warnings {:?}",
            p.formula.m(),
            p.warnings
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
        ),
        Err(d) => println!("lax input rejected: {d}"),
    }
    for bad in [
        "p cnf 3 1\na 1 0\ne 2 3 0\n1 2 0\n",
        "p cnf 3 1\na 1 0\ne 2 3 0\n1 2 7 0\n",
        "a 1 0\n",
    ] {
        println!("strict: {}", parse_str(bad, ParseMode::Strict).unwrap_err());
    }
}
