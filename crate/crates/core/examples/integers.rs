//! Normal circuits of integers and their size against ⌈log₂ n⌉ + 2.

use num_bigint::BigInt;
use power_circuits::circuit::{eval_bignum, from_integer, integer_vertex_bound, DEFAULT_ORACLE_BITS};

fn main() {
    println!("{:>22} {:>8} {:>6} {:>6}", "n", "vertices", "bound", "marks");
    for n in [1i64, 2, 3, 7, 35, 1000, 65535, 65536, -12345, 1 << 40, i64::MAX] {
        let n = BigInt::from(n);
        let c = from_integer(&n);
        assert_eq!(eval_bignum(c.circuit(), DEFAULT_ORACLE_BITS).unwrap(), n);
        let k = c.circuit();
        println!("{n:>22} {:>8} {:>6} {:>6}", k.vertex_count(), integer_vertex_bound(&n), k.mark_count());
    }
}
