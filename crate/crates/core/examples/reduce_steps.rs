//! Walks the reduction one vertex at a time and prints the certificate.

use power_circuits::circuit::{check_reduced, eval_bignum, DEFAULT_ORACLE_BITS};
use power_circuits::generate::{random_circuit, CircuitShape};
use power_circuits::reduction::Reducer;
use power_circuits::Outcome;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn main() {
    let mut rng = StdRng::seed_from_u64(7);
    let c = random_circuit(&mut rng, &CircuitShape::all_plus(12));
    let value = eval_bignum(&c, DEFAULT_ORACLE_BITS).unwrap();
    println!("input: {} vertices, value has {} bits", c.vertex_count(), value.bits());

    let mut r = Reducer::new(&c).unwrap();
    loop {
        match r.step() {
            Outcome::Improper => unreachable!("all edges are positive"),
            Outcome::Proper(None) => break,
            Outcome::Proper(Some(v)) => {
                let doubles: String = r.doubles().iter().map(|&d| if d { '1' } else { '0' }).collect();
                println!("processed {v:>2}: order {:?} doubles {doubles}", r.order());
            }
        }
    }
    let (reduced, stats) = r.finish().proper().unwrap();
    check_reduced(reduced.circuit(), reduced.certificate()).unwrap();
    assert_eq!(eval_bignum(reduced.circuit(), DEFAULT_ORACLE_BITS).unwrap(), value);
    println!("reduced: {} vertices, {stats:?}", reduced.circuit().vertex_count());
}
