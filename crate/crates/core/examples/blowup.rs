//! Two families whose circuits must grow: products of tower circuits, and
//! quotients by three.

use power_circuits::demos::{blowup, div3, DIV3_MAX_J};

fn main() {
    println!("product of tower circuits");
    println!("{:>3} {:>6} {:>6} {:>8}", "n", "marks", "2^n-3", "vertices");
    for n in 4..=12 {
        let row = blowup(n, 1_000_000).unwrap();
        println!("{:>3} {:>6} {:>6} {:>8}", row.n, row.marks, row.lower_bound, row.vertices);
    }
    println!("\n(4^(i+1) - 1) / 3 for i = tower(j)");
    println!("{:>3} {:>6} {:>14} {:>20}", "j", "i", "compact terms", "numerator vertices");
    for j in 0..=DIV3_MAX_J {
        let row = div3(j).unwrap();
        println!("{:>3} {:>6} {:>14} {:>20}", row.j, row.i, row.compact_terms, row.numerator_vertices);
    }
}
