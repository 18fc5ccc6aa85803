mod common;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use power_circuits::arithmetic::{add, div_pow2, exp2, mul_pow2, multiply, subtract, DivMode};
use power_circuits::circuit::{
    canonical_bytes, check_normal, eval_bignum, from_integer, from_json, isomorphic, to_json, Certified, Kind,
    OracleError, PowerCircuit, DEFAULT_ORACLE_BITS,
};
use power_circuits::generate::{random_circuit, random_l0_term, CircuitShape};
use power_circuits::reduction::{compare_circuits, normalize, reduce};
use power_circuits::sign::Sign;
use power_circuits::signed_binary::{compact_of_integer, make_compact, make_compact_ascending, Digit, Integers};
use power_circuits::termlang::{realize, Assignment, RealizeOptions, Realized};

fn int(n: i64) -> PowerCircuit {
    from_integer(&BigInt::from(n)).into_circuit()
}

fn value(c: &PowerCircuit) -> Result<BigInt, OracleError> {
    eval_bignum(c, DEFAULT_ORACLE_BITS)
}

/// Marks that contribute a summand; the trivial circuit marks its zero leaf.
fn nonzero_marks(c: &PowerCircuit) -> usize {
    c.marks().filter(|&(v, _)| !c.is_zero_leaf(v)).count()
}

fn normal(c: &PowerCircuit) -> Certified {
    normalize(c).unwrap().proper().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn reduction_preserves_value(seed in any::<u64>(), n in 2usize..16) {
        let mut rng = StdRng::seed_from_u64(seed);
        let c = random_circuit(&mut rng, &CircuitShape::small(n));
        match value(&c) {
            Ok(v) => {
                let r = reduce(&c).unwrap().proper().expect("proper input");
                prop_assert_eq!(value(r.circuit()).unwrap(), v.clone());
                let nf = normalize(&c).unwrap().proper().unwrap();
                prop_assert!(check_normal(nf.circuit(), nf.certificate()).is_ok());
                prop_assert_eq!(value(nf.circuit()).unwrap(), v);
            }
            Err(OracleError::Improper) => prop_assert!(reduce(&c).unwrap().is_improper()),
            Err(_) => {}
        }
    }

    #[test]
    fn compaction_is_independent_of_rewrite_order(mut digits in prop::collection::vec((0u64..30, prop::bool::ANY), 0..16), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let expected: BigInt = digits.iter().map(|&(k, neg)| if neg { -(BigInt::from(1) << k) } else { BigInt::from(1) << k }).sum();
        digits.shuffle(&mut StdRng::seed_from_u64(seed));
        digits.sort_by_key(|&(k, _)| k);
        let input = digits.iter().map(|&(k, neg)| Digit::new(k, if neg { Sign::Minus } else { Sign::Plus }));
        let compact = make_compact_ascending(&Integers, input).unwrap();
        prop_assert_eq!(compact.value(), expected.clone());
        prop_assert!(compact.is_compact(&Integers));
        prop_assert_eq!(&compact, &compact_of_integer(&expected));
        prop_assert_eq!(make_compact(&Integers, &compact).unwrap(), compact);
    }

    #[test]
    fn arithmetic_matches_integers(a in -5000i64..5000, b in -5000i64..5000, k in 0i64..24) {
        let (ca, cb, ck) = (int(a), int(b), int(k));
        prop_assert_eq!(value(&add(&ca, &cb)).unwrap(), BigInt::from(a + b));
        prop_assert_eq!(value(&subtract(&ca, &cb)).unwrap(), BigInt::from(a - b));
        prop_assert_eq!(value(&multiply(&ca, &cb).unwrap()).unwrap(), BigInt::from(a * b));
        prop_assert_eq!(value(&exp2(&ck)).unwrap(), BigInt::from(1i64 << k));
        prop_assert_eq!(value(&mul_pow2(&ca, &ck).unwrap()).unwrap(), BigInt::from(a) << k);
        let exact = div_pow2(&ca, &ck, DivMode::Exact).unwrap();
        if a % (1i64 << k) == 0 {
            prop_assert_eq!(value(&exact.proper().unwrap()).unwrap(), BigInt::from(a >> k));
        } else {
            prop_assert!(exact.is_improper());
        }
        prop_assert_eq!(compare_circuits(&ca, &cb).unwrap().proper().unwrap(), a.cmp(&b));
    }

    #[test]
    fn drop_division_floors_non_negative_numerators(a in 0i64..100_000, k in 0i64..20) {
        let q = div_pow2(&int(a), &int(k), DivMode::Drop).unwrap().proper().unwrap();
        let v = value(&q).unwrap();
        // Dropped summands of a mixed-sign form can round either way.
        prop_assert!((v - BigInt::from(a >> k)).abs() <= BigInt::from(1));
    }

    #[test]
    fn normal_forms_are_isomorphic_exactly_when_equal(a in -3000i64..3000, b in -3000i64..3000, c in -3000i64..3000) {
        let left = normal(&add(&int(a), &int(b)));
        let right = normal(&subtract(&int(a + b + c), &int(c)));
        prop_assert!(isomorphic(&left, &right).unwrap());
        prop_assert_eq!(canonical_bytes(&left).unwrap(), canonical_bytes(&right).unwrap());
        let other = normal(&int(a + b + 1));
        prop_assert!(!isomorphic(&left, &other).unwrap());
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), n in 2usize..20) {
        let mut rng = StdRng::seed_from_u64(seed);
        let c = random_circuit(&mut rng, &CircuitShape::small(n));
        let (back, cert) = from_json(&to_json(&c, None)).unwrap();
        prop_assert!(cert.is_none());
        prop_assert_eq!(to_json(&back, None), to_json(&c, None));
        if let Ok(nf) = normalize(&c).unwrap().proper().ok_or(()) {
            let text = to_json(nf.circuit(), Some(nf.certificate()));
            let (circuit, cert) = from_json(&text).unwrap();
            let again = Certified::verify(circuit, cert.unwrap(), Kind::Normal).unwrap();
            prop_assert_eq!(canonical_bytes(&again).unwrap(), canonical_bytes(&nf).unwrap());
        }
    }

    #[test]
    fn realized_marks_within_bound(seed in any::<u64>(), ops in 0usize..14, x in -300i64..300, y in -300i64..300) {
        let mut rng = StdRng::seed_from_u64(seed);
        let t = random_l0_term(&mut rng, ops, &["x", "y"]);
        let env = Assignment::from_ints([("x", x), ("y", y)]);
        let oracle = common::eval_term(&t, &common::Env::from([("x".into(), x.into()), ("y".into(), y.into())]), 4096);
        let Ok(expected) = oracle else { return Ok(()) };
        match realize(&t, &env, &RealizeOptions::default()).unwrap() {
            Realized::Defined(c) => {
                prop_assert_eq!(Some(value(c.circuit()).unwrap()), expected);
                let marks = |v| nonzero_marks(env.get(v).unwrap().circuit());
                let bound = t.occurrences("x") * marks("x") + t.occurrences("y") * marks("y") + t.ones();
                let got = nonzero_marks(c.circuit());
                prop_assert!(got <= bound, "{} marks > {}", got, bound);
            }
            Realized::Undefined(w) => {
                prop_assert_eq!(expected, None);
                prop_assert_eq!(t.at(&w.path).unwrap().to_string(), w.subterm);
            }
        }
    }
}

#[test]
fn realize_examples() {
    let opts = RealizeOptions::default();
    let parse = |s| power_circuits::termlang::parse_term(s).unwrap();
    let env = Assignment::from_ints([("x", 3), ("y", 4)]);
    let sum = realize(&parse("x+y"), &env, &opts).unwrap().defined().unwrap();
    assert!(isomorphic(&sum, &from_integer(&BigInt::from(7))).unwrap());
    assert!(matches!(realize(&parse("1 >>^ 1"), &Assignment::new(), &opts).unwrap(), Realized::Undefined(_)));
    let zero = realize(&parse("x <<^ x"), &Assignment::from_ints([("x", 0)]), &opts).unwrap().defined().unwrap();
    assert!(isomorphic(&zero, &from_integer(&BigInt::zero())).unwrap());
}

#[test]
fn equal_terms_realize_to_identical_bytes() {
    let opts = RealizeOptions::default();
    let parse = |s| power_circuits::termlang::parse_term(s).unwrap();
    let env = Assignment::from_ints([("x", 11)]);
    let forms = ["x <<^ 3 - x", "x * 7", "(x + x + x) <<^ 1 + x", "2^(1+1+1) * x - x"];
    let bytes: Vec<_> = forms
        .iter()
        .map(|s| canonical_bytes(&realize(&parse(s), &env, &opts).unwrap().defined().unwrap()).unwrap())
        .collect();
    assert!(bytes.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn variables_stay_symbolic_in_tau() {
    let t = power_circuits::termlang::parse_term("1 <<^ x + x").unwrap();
    let c = power_circuits::termlang::tau(&t).unwrap();
    let env = BTreeMap::from([("x".to_string(), BigInt::from(5))]);
    let substituted = power_circuits::termlang::tau(&t.substitute(&env)).unwrap();
    assert_eq!(value(&substituted).unwrap(), BigInt::from(37));
    assert_eq!(c.variables().into_iter().collect::<Vec<_>>(), ["x"]);
}
