//! The realization map `τ`, term evaluation to normal circuits, and the
//! three-valued decision procedure for formulas.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Formula, Rel, Term};
use crate::arithmetic::{add, div_pow2, div_pow2_unchecked, mul_pow2, multiply, subtract, DivMode};
use crate::circuit::{from_integer, one, Certified, Kind, PowerCircuit};
use crate::error::{Error, Outcome, Result};
use crate::reduction::{normalize_reduced, reduce};
use crate::sign::Sign;

/// `τ(t)`: each operation mapped to its circuit construction, no reduction.
///
/// A variable cannot stand as the left operand of `<<^`, `>>^` or `*` unless
/// the other side is trivially 0 or 1; substitute values first in that case.
pub fn tau(t: &Term) -> Result<PowerCircuit> {
    Ok(match t {
        Term::Const(n) if n.is_zero() => PowerCircuit::trivial(),
        Term::Const(n) if n.is_one() => one(),
        Term::Const(n) => from_integer(n).into_circuit(),
        Term::Var(x) => {
            let mut c = PowerCircuit::new();
            let v = c.add_var(x.clone());
            c.set_mark(v, Some(Sign::Plus));
            c
        }
        Term::Add(a, b) => add(&tau(a)?, &tau(b)?),
        Term::Sub(a, b) => subtract(&tau(a)?, &tau(b)?),
        Term::Mul(a, b) => multiply(&tau(a)?, &tau(b)?)?,
        Term::MulPow2(a, b) => mul_pow2(&tau(a)?, &tau(b)?)?,
        Term::DivPow2(a, b) => div_pow2_unchecked(&tau(a)?, &tau(b)?)?,
    })
}

/// Values for the variables of a term, as normal circuits.
#[derive(Clone, Debug, Default)]
pub struct Assignment {
    values: BTreeMap<String, Certified>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_ints<'a>(pairs: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        let mut a = Self::new();
        for (x, n) in pairs {
            a.bind_int(x, &BigInt::from(n));
        }
        a
    }

    pub fn bind_int(&mut self, x: impl Into<String>, n: &BigInt) {
        self.values.insert(x.into(), from_integer(n));
    }

    /// Binds `x` to a normal circuit.
    pub fn bind_circuit(&mut self, x: impl Into<String>, c: Certified) -> Result<()> {
        if c.kind() != Kind::Normal {
            return Err(Error::MissingCertificate("normal"));
        }
        self.values.insert(x.into(), c);
        Ok(())
    }

    pub fn get(&self, x: &str) -> Option<&Certified> {
        self.values.get(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RealizeOptions {
    /// Abort when an intermediate circuit has more vertices than this.
    pub max_vertices: usize,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions { max_vertices: 1_000_000 }
    }
}

/// The first subterm whose value is not an integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Operand choices from the evaluated term's root: 0 left, 1 right.
    pub path: Vec<usize>,
    pub subterm: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<_> = self.path.iter().map(usize::to_string).collect();
        write!(f, "`{}` at [{}] is not an integer", self.subterm, path.join("."))
    }
}

#[derive(Clone, Debug)]
pub enum Realized {
    Defined(Certified),
    Undefined(Witness),
}

impl Realized {
    pub fn defined(self) -> Option<Certified> {
        match self {
            Realized::Defined(c) => Some(c),
            Realized::Undefined(_) => None,
        }
    }
}

fn budget(c: &PowerCircuit, opts: &RealizeOptions) -> Result<()> {
    if c.vertex_count() > opts.max_vertices {
        return Err(Error::VertexBudget { vertices: c.vertex_count(), limit: opts.max_vertices });
    }
    Ok(())
}

fn step(t: &Term, env: &Assignment, opts: &RealizeOptions, path: &mut Vec<usize>) -> Result<Result<Certified, Witness>> {
    let undefined = |path: &Vec<usize>| Witness { path: path.clone(), subterm: t.to_string() };
    let (a, b) = match t {
        Term::Const(n) => return Ok(Ok(from_integer(n))),
        Term::Var(x) => return env.get(x).cloned().map(Ok).ok_or_else(|| Error::UnboundVariable(x.clone())),
        _ => t.children().unwrap(),
    };
    path.push(0);
    let a = step(a, env, opts, path)?;
    path.pop();
    let a = match a {
        Ok(c) => c.into_circuit(),
        Err(w) => return Ok(Err(w)),
    };
    path.push(1);
    let b = step(b, env, opts, path)?;
    path.pop();
    let b = match b {
        Ok(c) => c.into_circuit(),
        Err(w) => return Ok(Err(w)),
    };
    let c = match t {
        Term::Add(..) => add(&a, &b),
        Term::Sub(..) => subtract(&a, &b),
        Term::Mul(..) => multiply(&a, &b)?,
        Term::MulPow2(..) => mul_pow2(&a, &b)?,
        Term::DivPow2(..) => match div_pow2(&a, &b, DivMode::Exact)? {
            Outcome::Proper(c) => c,
            Outcome::Improper => return Ok(Err(undefined(path))),
        },
        Term::Const(_) | Term::Var(_) => unreachable!(),
    };
    budget(&c, opts)?;
    match reduce(&c)? {
        Outcome::Proper(r) => {
            budget(r.circuit(), opts)?;
            Ok(Ok(r))
        }
        Outcome::Improper => Ok(Err(undefined(path))),
    }
}

/// Evaluates `t` under `env` to its normal circuit, reducing after every
/// operation. Undefined when some subterm is not an integer.
pub fn realize(t: &Term, env: &Assignment, opts: &RealizeOptions) -> Result<Realized> {
    Ok(match step(t, env, opts, &mut Vec::new())? {
        Ok(r) => Realized::Defined(normalize_reduced(r)),
        Err(w) => Realized::Undefined(w),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalOutcome {
    True,
    False,
    /// The witness is relative to the difference `lhs − rhs` of the failing atom.
    Undefined(Witness),
}

impl EvalOutcome {
    fn from_bool(b: bool) -> Self {
        if b {
            EvalOutcome::True
        } else {
            EvalOutcome::False
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            EvalOutcome::True => Some(true),
            EvalOutcome::False => Some(false),
            EvalOutcome::Undefined(_) => None,
        }
    }
}

impl fmt::Display for EvalOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalOutcome::True => "True",
            EvalOutcome::False => "False",
            EvalOutcome::Undefined(_) => "Undefined",
        })
    }
}

/// Kleene three-valued evaluation; each atom `l ◇ r` is decided by the sign
/// of the normal circuit of `l − r`.
pub fn eval_formula(f: &Formula, env: &Assignment, opts: &RealizeOptions) -> Result<EvalOutcome> {
    use EvalOutcome::*;
    Ok(match f {
        Formula::Atom(l, rel, r) => {
            let diff = Term::Sub(Box::new(l.clone()), Box::new(r.clone()));
            match realize(&diff, env, opts)? {
                Realized::Undefined(w) => Undefined(w),
                Realized::Defined(c) => {
                    let s = c.sign();
                    EvalOutcome::from_bool(match rel {
                        Rel::Le => s <= 0,
                        Rel::Eq => s == 0,
                    })
                }
            }
        }
        Formula::Not(a) => match eval_formula(a, env, opts)? {
            True => False,
            False => True,
            u => u,
        },
        Formula::And(a, b) => match (eval_formula(a, env, opts)?, eval_formula(b, env, opts)?) {
            (False, _) | (_, False) => False,
            (True, True) => True,
            (Undefined(w), _) | (_, Undefined(w)) => Undefined(w),
        },
        Formula::Or(a, b) => match (eval_formula(a, env, opts)?, eval_formula(b, env, opts)?) {
            (True, _) | (_, True) => True,
            (False, False) => False,
            (Undefined(w), _) | (_, Undefined(w)) => Undefined(w),
        },
    })
}
