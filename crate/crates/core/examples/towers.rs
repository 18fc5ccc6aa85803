//! Comparing numbers far too large to write down.

use std::time::Instant;

use power_circuits::arithmetic::{add, subtract};
use power_circuits::circuit::one;
use power_circuits::demos::tower;
use power_circuits::reduction::{compare_circuits, sign};

fn main() {
    for k in [5, 20, 50, 200] {
        let start = Instant::now();
        let t = tower(k);
        let d = subtract(&add(&t, &one()), &t);
        let s = sign(&d).unwrap().proper().unwrap();
        println!("sign(tower({k}) + 1 - tower({k})) = {s:+}  [{} vertices, {:?}]", d.vertex_count(), start.elapsed());
    }
    let ord = compare_circuits(&tower(30), &add(&tower(29), &tower(29))).unwrap().proper().unwrap();
    println!("tower(30) vs 2·tower(29): {ord:?}");
}
