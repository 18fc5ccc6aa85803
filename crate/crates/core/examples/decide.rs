//! Parsing and deciding quantifier-free formulas.

use power_circuits::termlang::{eval_formula, parse, Assignment, ParseOptions, Parsed, RealizeOptions};

fn main() {
    let env = Assignment::from_ints([("x", 10), ("y", 11), ("z", -3)]);
    let opts = RealizeOptions::default();
    for src in [
        "1 + 1 = 2",
        "2^(2^x) <= 2^(2^y)",
        "x * y - z > x <<^ 3",
        "(z >>^ 1) = -1",
        "z >>^ 1 = 0 | 1 = 1",
        "!(x = y) & tower(4) - 1 >= 2^16 - 1",
    ] {
        let Parsed::Formula(f) = parse(src, &ParseOptions::default()).unwrap() else {
            unreachable!()
        };
        println!("{:<40} {}", f.to_string(), eval_formula(&f, &env, &opts).unwrap());
    }
}
