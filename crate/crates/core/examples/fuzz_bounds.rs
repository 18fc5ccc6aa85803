//! Random terms through τ, checking the size bounds on each.

use power_circuits::generate::random_l0_term;
use power_circuits::termlang::tau;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn main() {
    let mut rng = StdRng::seed_from_u64(42);
    let mut worst = (0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let ops = rng.gen_range(0..60);
        let t = random_l0_term(&mut rng, ops, &["x", "y"]);
        let c = tau(&t).unwrap();
        let n = t.size() as f64;
        assert!(c.mark_count() <= t.size() + 1);
        assert!(c.vertex_count() <= 2 * t.size() + 2);
        worst.0 = worst.0.max(c.mark_count() as f64 / (n + 1.0));
        worst.1 = worst.1.max(c.vertex_count() as f64 / (2.0 * n + 2.0));
    }
    println!("10000 terms: marks reach {:.0}% of |t|+1, vertices {:.0}% of 2|t|+2", 100.0 * worst.0, 100.0 * worst.1);
}
