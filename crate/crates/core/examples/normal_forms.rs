//! Different constructions of one integer normalize to the same bytes.

use num_bigint::BigInt;
use power_circuits::arithmetic::{add, exp2, mul_pow2, subtract};
use power_circuits::circuit::{canonical_hash, from_integer, isomorphic, PowerCircuit};
use power_circuits::reduction::normalize;

fn int(n: i64) -> PowerCircuit {
    from_integer(&BigInt::from(n)).into_circuit()
}

fn main() {
    let paths = [
        ("from_integer(96)", int(96)),
        ("100 - 4", subtract(&int(100), &int(4))),
        ("3 · 2^5", mul_pow2(&int(3), &int(5)).unwrap()),
        ("2^6 + 2^5", add(&exp2(&int(6)), &exp2(&int(5)))),
    ];
    let normal: Vec<_> = paths.iter().map(|(_, c)| normalize(c).unwrap().proper().unwrap()).collect();
    for ((name, raw), nf) in paths.iter().zip(&normal) {
        println!("{name:>18}: {:>2} vertices -> {:>2}, {}", raw.vertex_count(), nf.circuit().vertex_count(), canonical_hash(nf).unwrap());
    }
    assert!(normal.windows(2).all(|w| isomorphic(&w[0], &w[1]).unwrap()));
}
