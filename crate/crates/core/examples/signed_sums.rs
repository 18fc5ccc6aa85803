//! Signed binary sums: five-way comparison and compact forms.

use num_bigint::BigInt;
use power_circuits::signed_binary::{compact_of_integer, compare_counted, make_compact_int, Integers, SignedSum};

fn main() {
    let a = SignedSum::from_pairs(&[(5, 1), (4, 1), (3, 1), (2, 1), (1, 1)]);
    let b = SignedSum::from_pairs(&[(6, 1), (1, -1)]);
    let (r, steps) = compare_counted(&Integers, &a, &b);
    println!("a = {a} = {}", a.value());
    println!("b = {b} = {}", b.value());
    println!("compare(a, b) = {r} after {steps} iterations");

    let compact = make_compact_int(&a);
    println!("compact(a) = {compact}: {} terms instead of {}", compact.len(), a.len());

    let n = BigInt::from(0b1011_0111_0111u32);
    println!("{n} = {}", compact_of_integer(&n));
}
