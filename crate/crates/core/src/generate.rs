//! Seeded generators for random circuits, terms and formulas, used by tests,
//! benchmarks and the examples.

use rand::seq::index::sample;
use rand::Rng;

use crate::circuit::PowerCircuit;
use crate::sign::Sign;
use crate::termlang::{Formula, Rel, Term};

/// Shape parameters for [`random_circuit`].
#[derive(Clone, Copy, Debug)]
pub struct CircuitShape {
    pub vertices: usize,
    pub max_out_degree: usize,
    pub max_marks: usize,
    /// Probability that an edge or mark is positive.
    pub plus: f64,
    /// Probability of an extra zero leaf.
    pub extra_zero: f64,
}

impl CircuitShape {
    pub fn small(vertices: usize) -> Self {
        CircuitShape { vertices, max_out_degree: 3, max_marks: 3, plus: 0.8, extra_zero: 0.2 }
    }

    /// Only positive edges, so every vertex is proper.
    pub fn all_plus(vertices: usize) -> Self {
        CircuitShape { vertices, max_out_degree: 3, max_marks: 4, plus: 1.0, extra_zero: 0.0 }
    }
}

/// A random constant circuit. Vertex ids follow a topological order; the first
/// one or two are zero leaves. Values may be improper or astronomically large.
pub fn random_circuit<R: Rng + ?Sized>(rng: &mut R, shape: &CircuitShape) -> PowerCircuit {
    let n = shape.vertices.max(2);
    let mut c = PowerCircuit::new();
    c.add_zero();
    let zeros = if n > 2 && rng.gen_bool(shape.extra_zero) {
        c.add_zero();
        2
    } else {
        1
    };
    let sign = |rng: &mut R| if rng.gen_bool(shape.plus) { Sign::Plus } else { Sign::Minus };
    for i in zeros..n {
        let g = c.add_gate();
        let k = rng.gen_range(1..=shape.max_out_degree.min(i));
        for t in sample(rng, i, k) {
            let s = sign(rng);
            c.set_edge(g, t, s);
        }
    }
    let m = rng.gen_range(1..=shape.max_marks.min(n));
    // Favour the later vertices so that most of the circuit stays reachable.
    let lo = n / 3;
    for v in sample(rng, n - lo, m.min(n - lo)) {
        let s = sign(rng);
        c.set_mark(v + lo, Some(s));
    }
    c
}

fn bin(f: fn(Box<Term>, Box<Term>) -> Term, a: Term, b: Term) -> Term {
    f(Box::new(a), Box::new(b))
}

/// A random term of `ops` operations over `+`, `−`, `<<^`, `>>^` with leaves
/// 0, 1 and the given variables. Variables appear only where `τ` accepts them:
/// never inside the left operand of a shift.
pub fn random_l0_term<R: Rng + ?Sized>(rng: &mut R, ops: usize, vars: &[&str]) -> Term {
    l0(rng, ops, vars, true)
}

fn l0<R: Rng + ?Sized>(rng: &mut R, ops: usize, vars: &[&str], allow_vars: bool) -> Term {
    if ops == 0 {
        let leaves = if allow_vars { 2 + vars.len() } else { 2 };
        return match rng.gen_range(0..leaves) {
            0 => Term::int(0),
            1 => Term::int(1),
            i => Term::var(vars[i - 2]),
        };
    }
    let left = rng.gen_range(0..ops);
    let right = ops - 1 - left;
    match rng.gen_range(0..4) {
        0 => bin(Term::Add, l0(rng, left, vars, allow_vars), l0(rng, right, vars, allow_vars)),
        1 => bin(Term::Sub, l0(rng, left, vars, allow_vars), l0(rng, right, vars, allow_vars)),
        2 => bin(Term::MulPow2, l0(rng, left, vars, false), l0(rng, right, vars, allow_vars)),
        _ => bin(Term::DivPow2, l0(rng, left, vars, false), l0(rng, right, vars, allow_vars)),
    }
}

/// Parameters for random terms with integer constants.
#[derive(Clone, Copy, Debug)]
pub struct TermShape {
    pub ops: usize,
    /// Constants are drawn from `-max_const..=max_const`.
    pub max_const: i64,
    /// Shift amounts are terms of at most this many operations.
    pub shift_ops: usize,
}

impl Default for TermShape {
    fn default() -> Self {
        TermShape { ops: 6, max_const: 40, shift_ops: 1 }
    }
}

/// A random multiplication-free term with integer constants and variables.
/// Shift amounts are small so the values stay within reach of big integers.
pub fn random_const_term<R: Rng + ?Sized>(rng: &mut R, shape: &TermShape, vars: &[&str]) -> Term {
    const_term(rng, shape.ops, shape, vars, false)
}

fn const_term<R: Rng + ?Sized>(rng: &mut R, ops: usize, shape: &TermShape, vars: &[&str], small: bool) -> Term {
    if ops == 0 {
        if small {
            return Term::int(if rng.gen_bool(0.03) { -1 } else { rng.gen_range(0..=3) });
        }
        if !vars.is_empty() && rng.gen_bool(0.3) {
            return Term::var(vars[rng.gen_range(0..vars.len())]);
        }
        return Term::int(rng.gen_range(-shape.max_const..=shape.max_const));
    }
    match rng.gen_range(0..8) {
        op @ 0..=4 => {
            let left = rng.gen_range(0..ops);
            let a = const_term(rng, left, shape, vars, small);
            let b = const_term(rng, ops - 1 - left, shape, vars, small);
            if op < 3 || small {
                bin(Term::Add, a, b)
            } else {
                bin(Term::Sub, a, b)
            }
        }
        op => {
            let amount = if small { 0 } else { rng.gen_range(0..=shape.shift_ops.min(ops - 1)) };
            let a = const_term(rng, ops - 1 - amount, shape, vars, small);
            let b = const_term(rng, amount, shape, vars, true);
            if op < 7 {
                bin(Term::MulPow2, a, b)
            } else {
                bin(Term::DivPow2, a, b)
            }
        }
    }
}

/// A random formula with `atoms` comparisons joined by `&`, `|` and `!`.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, atoms: usize, shape: &TermShape, vars: &[&str]) -> Formula {
    if atoms <= 1 {
        let l = random_const_term(rng, shape, vars);
        let r = random_const_term(rng, shape, vars);
        let f = match rng.gen_range(0..3) {
            0 => Formula::Atom(l, Rel::Le, r),
            1 => Formula::Atom(l, Rel::Eq, r),
            _ => Formula::less(l, r),
        };
        return if rng.gen_bool(0.2) { Formula::Not(Box::new(f)) } else { f };
    }
    let left = rng.gen_range(1..atoms);
    let a = random_formula(rng, left, shape, vars);
    let b = random_formula(rng, atoms - left, shape, vars);
    let f = if rng.gen_bool(0.5) { Formula::And(Box::new(a), Box::new(b)) } else { Formula::Or(Box::new(a), Box::new(b)) };
    if rng.gen_bool(0.15) {
        Formula::Not(Box::new(f))
    } else {
        f
    }
}
