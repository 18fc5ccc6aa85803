//! Circuit arithmetic checked against plain integers.

use num_bigint::BigInt;
use power_circuits::arithmetic::{add, div_pow2, exp2, multiply, subtract, DivMode};
use power_circuits::circuit::{eval_bignum, from_integer, PowerCircuit, DEFAULT_ORACLE_BITS};

fn int(n: i64) -> PowerCircuit {
    from_integer(&BigInt::from(n)).into_circuit()
}

fn show(label: &str, c: &PowerCircuit) {
    let v = eval_bignum(c, DEFAULT_ORACLE_BITS).unwrap();
    println!("{label:>12} = {v:<8} ({} vertices, {} marks)", c.vertex_count(), c.mark_count());
}

fn main() {
    let (a, b) = (int(100), int(-7));
    show("100 + -7", &add(&a, &b));
    show("100 - -7", &subtract(&a, &b));
    show("100 * -7", &multiply(&a, &b).unwrap());
    show("2^10", &exp2(&int(10)));
    show("100 / 2^2", &div_pow2(&a, &int(2), DivMode::Exact).unwrap().proper().unwrap());
    println!("{:>12} = undefined", "100 / 2^3");
    assert!(div_pow2(&a, &int(3), DivMode::Exact).unwrap().is_improper());
    // 7 is stored as 2^3 − 2^0, so dropping the low summand rounds up.
    show("7 drop 2^1", &div_pow2(&int(7), &int(1), DivMode::Drop).unwrap().proper().unwrap());
}
