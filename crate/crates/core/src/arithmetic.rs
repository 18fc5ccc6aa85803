//! Circuit constructions for `+`, `−`, `2^x`, `∗`, `x·2^y` and `x·2^(−y)`.
//!
//! Everything except [`div_pow2`] returns an unreduced circuit; reduce or
//! normalize the result when a canonical form is needed.

use crate::circuit::{fold_zeros_in_place, marked_to_sources, Leaf, PowerCircuit, VertexId};
use crate::error::{Error, Outcome, Result};
use crate::reduction::{reduce, sign};
use crate::sign::Sign;

/// Disjoint union with both mark sets.
pub fn add(a: &PowerCircuit, b: &PowerCircuit) -> PowerCircuit {
    let mut c = a.clone();
    c.append(b);
    c
}

/// Disjoint union with the marks of `b` negated.
pub fn subtract(a: &PowerCircuit, b: &PowerCircuit) -> PowerCircuit {
    let mut c = a.clone();
    let map = c.append(b);
    for (v, s) in b.marks() {
        c.set_mark(map[v].unwrap(), Some(-s));
    }
    c
}

/// `2^𝒯(a)`: a new marked apex pointing to the former marks with their signs.
pub fn exp2(a: &PowerCircuit) -> PowerCircuit {
    let mut c = a.clone();
    let marks: Vec<_> = c.marks().collect();
    let apex = c.add_gate();
    for &(v, s) in &marks {
        c.set_mark(v, None);
        c.set_edge(apex, v, s);
    }
    if marks.is_empty() {
        let existing = c.zero_leaves().next();
        let z = existing.unwrap_or_else(|| c.add_zero());
        c.set_edge(apex, z, Sign::Plus);
    }
    c.set_mark(apex, Some(Sign::Plus));
    c
}

fn all_marks_zero(c: &PowerCircuit) -> bool {
    c.marks().all(|(v, _)| c.is_zero_leaf(v))
}

fn is_unit_gate(c: &PowerCircuit, v: VertexId) -> bool {
    c.leaf(v).is_none() && c.out_edges(v).all(|(t, _)| c.is_zero_leaf(t))
}

fn var_name(c: &PowerCircuit, v: VertexId) -> Option<&str> {
    match c.leaf(v) {
        Some(Leaf::Var(x)) => Some(x),
        _ => None,
    }
}

/// Product. Each pair of marks becomes a vertex carrying both out-edge sets.
///
/// A variable leaf can only be multiplied by a vertex of value 1; any other
/// pairing with a variable has no vertex representation.
pub fn multiply(a: &PowerCircuit, b: &PowerCircuit) -> Result<PowerCircuit> {
    let a = marked_to_sources(a);
    let b = marked_to_sources(b);
    let mut c = PowerCircuit::new();
    let ma = c.append(&a);
    let mb = c.append(&b);
    let mut any = false;
    for (v1, s1) in a.marks() {
        for (v2, s2) in b.marks() {
            if a.is_zero_leaf(v1) || b.is_zero_leaf(v2) {
                continue;
            }
            let s = s1 * s2;
            let p = match (var_name(&a, v1), var_name(&b, v2)) {
                (Some(x), None) if is_unit_gate(&b, v2) => c.add_var(x),
                (None, Some(y)) if is_unit_gate(&a, v1) => c.add_var(y),
                (Some(x), _) | (_, Some(x)) => return Err(Error::VariableFactor(x.to_string())),
                (None, None) => {
                    let p = c.add_gate();
                    for (t, e) in a.out_edges(v1) {
                        c.set_edge(p, ma[t].unwrap(), e);
                    }
                    for (t, e) in b.out_edges(v2) {
                        c.set_edge(p, mb[t].unwrap(), e);
                    }
                    p
                }
            };
            c.set_mark(p, Some(s));
            any = true;
        }
    }
    for (v, _) in a.marks() {
        c.remove_vertex(ma[v].unwrap());
    }
    for (v, _) in b.marks() {
        c.remove_vertex(mb[v].unwrap());
    }
    if !any {
        return Ok(PowerCircuit::trivial());
    }
    Ok(c.compacted().0)
}

/// Joins `b` below `a` and gives every non-zero mark of `a` an edge to every
/// mark of `b`, signed by `sign_of(ν(b))`. Marks of `b` are dropped.
fn wire(a: &PowerCircuit, b: &PowerCircuit, flip: bool) -> Result<PowerCircuit> {
    let a = marked_to_sources(a);
    let mut c = a.clone();
    let map = c.append(b);
    let targets: Vec<_> = b
        .marks()
        .filter(|&(v, _)| !b.is_zero_leaf(v))
        .map(|(v, s)| (map[v].unwrap(), if flip { -s } else { s }))
        .collect();
    for (v, _) in b.marks() {
        c.set_mark(map[v].unwrap(), None);
    }
    if !targets.is_empty() {
        for (v, _) in a.marks() {
            if a.is_zero_leaf(v) {
                continue;
            }
            if let Some(x) = var_name(&a, v) {
                return Err(Error::VariableFactor(x.to_string()));
            }
            for &(t, s) in &targets {
                c.set_edge(v, t, s);
            }
        }
    }
    Ok(c)
}

/// `𝒯(a)·2^𝒯(b)`.
pub fn mul_pow2(a: &PowerCircuit, b: &PowerCircuit) -> Result<PowerCircuit> {
    if all_marks_zero(b) {
        return Ok(a.clone());
    }
    wire(a, b, false)
}

/// `𝒯(a)·2^(−𝒯(b))` without any properness check, zero leaves merged.
pub fn div_pow2_unchecked(a: &PowerCircuit, b: &PowerCircuit) -> Result<PowerCircuit> {
    if all_marks_zero(b) {
        return Ok(a.clone());
    }
    let mut c = wire(a, b, true)?;
    if let Some(z) = fold_zeros_in_place(&mut c) {
        // A marked zero leaf adds nothing; unmarking it keeps marks on sources.
        c.set_mark(z, None);
    }
    Ok(c)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DivMode {
    /// Improper unless `2^ℰ(b)` divides `ℰ(a)`.
    #[default]
    Exact,
    /// Unmark every summand `2^e` of the reduced `a` with `e < ℰ(b)` first.
    /// This is the floor for non-negative `a` and truncates toward zero when
    /// all summands are negative; on mixed signs it is neither.
    Drop,
}

/// Division by a power of two on constant circuits. The result is reduced.
pub fn div_pow2(a: &PowerCircuit, b: &PowerCircuit, mode: DivMode) -> Result<Outcome<PowerCircuit>> {
    if all_marks_zero(b) {
        return Ok(Outcome::Proper(a.clone()));
    }
    a.require_constant()?;
    b.require_constant()?;
    let (Outcome::Proper(ra), Outcome::Proper(rb)) = (reduce(a)?, reduce(b)?) else {
        return Ok(Outcome::Improper);
    };
    let mut ra = ra.into_circuit();
    let rb = rb.into_circuit();
    if mode == DivMode::Drop {
        let marks: Vec<_> = ra.marks().collect();
        for (v, _) in marks {
            if exponent_minus(&ra, v, &rb)? < 0 {
                ra.set_mark(v, None);
            }
        }
        if ra.marks().next().is_none() {
            return Ok(Outcome::Proper(PowerCircuit::trivial()));
        }
    }
    let c = div_pow2_unchecked(&ra, &rb)?;
    Ok(reduce(&c)?.map(|r| r.into_circuit()))
}

/// Sign of `e − ℰ(b)` where `ℰ(v) = 2^e`.
fn exponent_minus(c: &PowerCircuit, v: VertexId, b: &PowerCircuit) -> Result<i8> {
    let mut e = c.clone();
    let marked: Vec<_> = e.marks().map(|(u, _)| u).collect();
    for u in marked {
        e.set_mark(u, None);
    }
    let children: Vec<_> = c.out_edges(v).collect();
    for (t, s) in children {
        e.set_mark(t, Some(s));
    }
    Ok(sign(&subtract(&e, b))?.expect_proper("a reduced circuit and a proper b give a proper difference"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{eval_bignum, from_integer, DEFAULT_ORACLE_BITS};
    use num_bigint::BigInt;

    fn int(n: i64) -> PowerCircuit {
        from_integer(&BigInt::from(n)).into_circuit()
    }

    fn value(c: &PowerCircuit) -> i64 {
        eval_bignum(c, DEFAULT_ORACLE_BITS).unwrap().try_into().unwrap()
    }

    fn var(x: &str) -> PowerCircuit {
        let mut c = PowerCircuit::new();
        let v = c.add_var(x);
        c.set_mark(v, Some(Sign::Plus));
        c
    }

    #[test]
    fn sums_and_sizes() {
        let (a, b) = (int(35), int(-12));
        let s = add(&a, &b);
        assert_eq!(value(&s), 23);
        assert_eq!(s.vertex_count(), a.vertex_count() + b.vertex_count());
        assert_eq!(s.edge_count(), a.edge_count() + b.edge_count());
        assert_eq!(s.mark_count(), a.mark_count() + b.mark_count());
        assert_eq!(value(&subtract(&a, &b)), 47);
        assert_eq!(value(&subtract(&a, &a)), 0);
    }

    #[test]
    fn exponentiation() {
        assert_eq!(value(&exp2(&int(0))), 1);
        assert_eq!(value(&exp2(&int(3))), 8);
        let a = int(-2);
        let e = exp2(&a);
        assert_eq!(e.vertex_count(), a.vertex_count() + 1);
        assert!(reduce(&e).unwrap().is_improper());
        let mut t = int(1);
        for k in 1..=4 {
            t = exp2(&t);
            assert!(t.vertex_count() <= k + 2);
        }
        assert_eq!(value(&t), 65536);
    }

    #[test]
    fn products() {
        assert_eq!(value(&multiply(&int(17), &int(17)).unwrap()), 289);
        assert_eq!(value(&multiply(&int(-6), &int(7)).unwrap()), -42);
        assert!(multiply(&int(0), &int(9)).unwrap().is_trivial());
        let (a, b) = (int(11), int(13));
        let p = multiply(&a, &b).unwrap();
        assert_eq!(p.mark_count(), a.mark_count() * b.mark_count());
        assert!(p.vertex_count() <= a.vertex_count() + b.vertex_count() + a.mark_count() * b.mark_count());
        let x = multiply(&int(1), &var("x")).unwrap();
        assert_eq!(x.variables().into_iter().collect::<Vec<_>>(), ["x"]);
        assert_eq!(multiply(&int(3), &var("x")).unwrap_err(), Error::VariableFactor("x".into()));
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(value(&mul_pow2(&int(3), &int(4)).unwrap()), 48);
        for k in 0..=16 {
            assert_eq!(value(&mul_pow2(&int(1), &int(k)).unwrap()), value(&exp2(&int(k))));
        }
        let x = var("x");
        assert_eq!(mul_pow2(&x, &int(0)).unwrap().variables().len(), 1);
        assert!(mul_pow2(&x, &int(2)).is_err());
        let exp_var = mul_pow2(&int(5), &var("y")).unwrap();
        assert_eq!(exp_var.mark_count(), int(5).mark_count());
    }

    #[test]
    fn exact_division() {
        let q = div_pow2(&int(48), &int(4), DivMode::Exact).unwrap().expect_proper("48/16");
        assert_eq!(value(&q), 3);
        assert!(div_pow2(&int(3), &int(1), DivMode::Exact).unwrap().is_improper());
        assert_eq!(value(&div_pow2(&int(-40), &int(3), DivMode::Exact).unwrap().expect_proper("-5")), -5);
        assert_eq!(value(&div_pow2(&int(5), &int(-2), DivMode::Exact).unwrap().expect_proper("20")), 20);
        let x = var("x");
        let same = div_pow2(&x, &int(0), DivMode::Exact).unwrap().expect_proper("x / 1");
        assert_eq!(same.variables(), x.variables());
        assert!(div_pow2(&x, &int(1), DivMode::Exact).is_err());
    }

    #[test]
    fn dropping_division() {
        let drop = |a: i64, b: i64| value(&div_pow2(&int(a), &int(b), DivMode::Drop).unwrap().expect_proper("drop"));
        // The normal form of 3 is 2^2 − 2^0, so nothing rounds down.
        assert_eq!(drop(3, 1), 2);
        let three = add(&int(2), &int(1));
        let q = div_pow2(&three, &int(1), DivMode::Drop).unwrap().expect_proper("2 + 1");
        assert_eq!(value(&q), 1);
        assert_eq!(drop(7, 1), 4);
        assert_eq!(drop(1, 3), 0);
        assert_eq!(drop(100, 3), 12);
        // −3 = −2^2 + 2^0 loses the 2^0.
        assert_eq!(drop(-3, 1), -2);
    }
}
