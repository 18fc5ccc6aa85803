//! JSON and Graphviz output of a circuit and its normal form.

use power_circuits::circuit::{from_json, to_dot, to_json};
use power_circuits::reduction::normalize;
use power_circuits::termlang::{parse_term, tau};

fn main() {
    let c = tau(&parse_term("(1 + 1 + 1) <<^ (1 + 1) - 1").unwrap()).unwrap();
    let nf = normalize(&c).unwrap().proper().unwrap();
    let json = to_json(nf.circuit(), Some(nf.certificate()));
    let (back, cert) = from_json(&json).unwrap();
    assert_eq!(to_json(&back, cert.as_ref()), json);
    println!("{json}");
    println!("{}", to_dot(nf.circuit()));
}
