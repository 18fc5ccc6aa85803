use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::standard::trim_from;
use super::{Certificate, Certified, Kind, PowerCircuit};
use crate::sign::Sign;
use crate::signed_binary::compact_of_integer;

/// The normal circuit of `n`: vertices `0, 2^0, …, 2^k`, each `2^q` pointing
/// to the compact form of `q`, marks given by the compact form of `n`.
pub fn from_integer(n: &BigInt) -> Certified {
    if n.is_zero() {
        return Certified::trivial();
    }
    let marks = compact_of_integer(n);
    let k = marks.digits()[0].key;
    let mut c = PowerCircuit::new();
    let z = c.add_zero();
    let p: Vec<_> = (0..=k).map(|_| c.add_gate()).collect();
    c.set_edge(p[0], z, Sign::Plus);
    for q in 1..=k {
        for d in compact_of_integer(&BigInt::from(q)).digits() {
            c.set_edge(p[q as usize], p[d.key as usize], d.sign);
        }
    }
    for d in marks.digits() {
        c.set_mark(p[d.key as usize], Some(d.sign));
    }
    let all: Vec<_> = c.vertices().collect();
    trim_from(&mut c, all);
    let (c, map) = c.compacted();

    let mut order = vec![map[z].unwrap()];
    let mut doubles = vec![false];
    let mut last: Option<u64> = None;
    for (q, &v) in p.iter().enumerate() {
        if let Some(id) = map[v] {
            if let Some(prev) = last {
                doubles.push(prev + 1 == q as u64);
            }
            order.push(id);
            last = Some(q as u64);
        }
    }
    Certified::new_unchecked(c, Certificate::new(order, doubles), Kind::Normal)
}

/// The circuit with value 1: a marked vertex over the zero leaf.
pub fn one() -> PowerCircuit {
    let mut c = PowerCircuit::new();
    let z = c.add_zero();
    let v = c.add_gate();
    c.set_edge(v, z, Sign::Plus);
    c.set_mark(v, Some(Sign::Plus));
    c
}

/// `𝒫_n` for `n ≥ 2`: a chain `n → n−1 → … → 1 → 0` with marks on 1 and `n`,
/// valued `tower₂(n−1) + 1`.
pub fn tower_circuit(n: usize) -> PowerCircuit {
    assert!(n >= 2, "tower circuits start at n = 2");
    let mut c = PowerCircuit::new();
    let mut prev = c.add_zero();
    let mut first = None;
    for _ in 1..=n {
        let v = c.add_gate();
        c.set_edge(v, prev, Sign::Plus);
        first.get_or_insert(v);
        prev = v;
    }
    c.set_mark(first.unwrap(), Some(Sign::Plus));
    c.set_mark(prev, Some(Sign::Plus));
    c
}

/// `⌈log₂|n|⌉ + 2`, the vertex bound for [`from_integer`] when `n ≠ 0`.
pub fn integer_vertex_bound(n: &BigInt) -> usize {
    let m = n.abs();
    let bits = m.bits();
    let ceil_log = if (&m & (&m - 1u32)).is_zero() { bits - 1 } else { bits };
    (ceil_log + 2).to_usize().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{check_normal, eval_bignum, DEFAULT_ORACLE_BITS};

    fn value(c: &PowerCircuit) -> BigInt {
        eval_bignum(c, DEFAULT_ORACLE_BITS).unwrap()
    }

    #[test]
    fn small_cases() {
        let zero = from_integer(&BigInt::zero());
        assert_eq!(zero.circuit().vertex_count(), 1);
        let one = from_integer(&BigInt::from(1));
        assert_eq!(one.circuit().vertex_count(), 2);
        assert_eq!(value(one.circuit()), BigInt::from(1));
        let big = from_integer(&(BigInt::from(1) << 16));
        assert!(big.circuit().vertex_count() <= 18);
        assert_eq!(value(big.circuit()), BigInt::from(65536));
    }

    #[test]
    fn negative_values_and_certificates() {
        for n in -300i64..=300 {
            let n = BigInt::from(n);
            let c = from_integer(&n);
            assert_eq!(value(c.circuit()), n);
            check_normal(c.circuit(), c.certificate()).unwrap();
            if !n.is_zero() {
                assert!(c.circuit().vertex_count() <= integer_vertex_bound(&n));
            }
        }
    }

    #[test]
    fn vertex_bound_helper() {
        assert_eq!(integer_vertex_bound(&BigInt::from(1)), 2);
        assert_eq!(integer_vertex_bound(&BigInt::from(2)), 3);
        assert_eq!(integer_vertex_bound(&BigInt::from(3)), 4);
        assert_eq!(integer_vertex_bound(&BigInt::from(-4)), 4);
    }
}
