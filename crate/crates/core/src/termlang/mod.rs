//! Terms over `+, −, ∗, x·2^y, x·2^(−y)` with integer constants, quantifier-free
//! formulas over them, and their evaluation through power circuits.

mod eval;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

pub use eval::{eval_formula, realize, tau, Assignment, EvalOutcome, RealizeOptions, Realized, Witness};
pub use parse::{parse, parse_formula, parse_term, ParseError, ParseOptions, Parsed};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Const(BigInt),
    Var(String),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    /// `x·2^y`
    MulPow2(Box<Term>, Box<Term>),
    /// `x·2^(−y)`
    DivPow2(Box<Term>, Box<Term>),
}

impl Term {
    pub fn int(n: i64) -> Term {
        Term::Const(BigInt::from(n))
    }

    pub fn var(x: impl Into<String>) -> Term {
        Term::Var(x.into())
    }

    /// `2^e`, written as `1·2^e`.
    pub fn pow2(e: Term) -> Term {
        Term::MulPow2(Box::new(Term::int(1)), Box::new(e))
    }

    /// `tower₂(k)`: `k` nested powers of two over 1.
    pub fn tower(k: usize) -> Term {
        (0..k).fold(Term::int(1), |t, _| Term::pow2(t))
    }

    pub fn children(&self) -> Option<(&Term, &Term)> {
        match self {
            Term::Const(_) | Term::Var(_) => None,
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) | Term::MulPow2(a, b) | Term::DivPow2(a, b) => {
                Some((a, b))
            }
        }
    }

    /// `|t|`, the number of operations.
    pub fn size(&self) -> usize {
        self.children().map_or(0, |(a, b)| 1 + a.size() + b.size())
    }

    /// Whether the term avoids `∗`.
    pub fn is_multiplication_free(&self) -> bool {
        match self {
            Term::Mul(..) => false,
            _ => self.children().is_none_or(|(a, b)| a.is_multiplication_free() && b.is_multiplication_free()),
        }
    }

    /// Number of occurrences of the variable `x`.
    pub fn occurrences(&self, x: &str) -> usize {
        match self {
            Term::Var(y) => usize::from(x == y),
            Term::Const(_) => 0,
            _ => self.children().map_or(0, |(a, b)| a.occurrences(x) + b.occurrences(x)),
        }
    }

    /// Number of occurrences of the constant 1.
    pub fn ones(&self) -> usize {
        match self {
            Term::Const(n) => usize::from(n.is_one()),
            Term::Var(_) => 0,
            _ => self.children().map_or(0, |(a, b)| a.ones() + b.ones()),
        }
    }

    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(x) => out.push(x.clone()),
            Term::Const(_) => {}
            _ => {
                let (a, b) = self.children().unwrap();
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Replaces bound variables by constants.
    pub fn substitute(&self, env: &BTreeMap<String, BigInt>) -> Term {
        let bin = |a: &Term, b: &Term| (Box::new(a.substitute(env)), Box::new(b.substitute(env)));
        match self {
            Term::Var(x) => env.get(x).map_or_else(|| self.clone(), |n| Term::Const(n.clone())),
            Term::Const(_) => self.clone(),
            Term::Add(a, b) => {
                let (a, b) = bin(a, b);
                Term::Add(a, b)
            }
            Term::Sub(a, b) => {
                let (a, b) = bin(a, b);
                Term::Sub(a, b)
            }
            Term::Mul(a, b) => {
                let (a, b) = bin(a, b);
                Term::Mul(a, b)
            }
            Term::MulPow2(a, b) => {
                let (a, b) = bin(a, b);
                Term::MulPow2(a, b)
            }
            Term::DivPow2(a, b) => {
                let (a, b) = bin(a, b);
                Term::DivPow2(a, b)
            }
        }
    }

    /// The subterm at `path`, each step choosing the left (0) or right (1) operand.
    pub fn at(&self, path: &[usize]) -> Option<&Term> {
        let Some((&step, rest)) = path.split_first() else {
            return Some(self);
        };
        let (a, b) = self.children()?;
        match step {
            0 => a.at(rest),
            1 => b.at(rest),
            _ => None,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Add(..) | Term::Sub(..) => 1,
            Term::Mul(..) => 2,
            Term::MulPow2(a, _) if is_one(a) => 4,
            Term::MulPow2(..) | Term::DivPow2(..) => 3,
            Term::Const(n) if n.is_negative() => 1,
            Term::Const(_) | Term::Var(_) => 4,
        }
    }
}

fn is_one(t: &Term) -> bool {
    matches!(t, Term::Const(n) if n.is_one())
}

fn write_at(f: &mut fmt::Formatter<'_>, t: &Term, min: u8) -> fmt::Result {
    if t.precedence() < min {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(n) => write!(f, "{n}"),
            Term::Var(x) => f.write_str(x),
            Term::Add(a, b) => {
                write_at(f, a, 1)?;
                f.write_str(" + ")?;
                write_at(f, b, 2)
            }
            Term::Sub(a, b) => {
                write_at(f, a, 1)?;
                f.write_str(" - ")?;
                write_at(f, b, 2)
            }
            Term::Mul(a, b) => {
                write_at(f, a, 2)?;
                f.write_str(" * ")?;
                write_at(f, b, 3)
            }
            Term::MulPow2(a, e) if is_one(a) => {
                let atomic = matches!(**e, Term::Var(_)) || matches!(&**e, Term::Const(n) if !n.is_negative());
                if atomic {
                    write!(f, "2^{e}")
                } else {
                    write!(f, "2^({e})")
                }
            }
            Term::MulPow2(a, b) => {
                write_at(f, a, 4)?;
                f.write_str(" <<^ ")?;
                write_at(f, b, 3)
            }
            Term::DivPow2(a, b) => {
                write_at(f, a, 4)?;
                f.write_str(" >>^ ")?;
                write_at(f, b, 3)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rel {
    Le,
    Eq,
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rel::Le => "<=",
            Rel::Eq => "=",
        })
    }
}

/// Quantifier-free formula. `<`, `>`, `>=` and `!=` are rewritten into these
/// by the parser.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Term, Rel, Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
}

impl Formula {
    pub fn atom(l: Term, rel: Rel, r: Term) -> Formula {
        Formula::Atom(l, rel, r)
    }

    /// `a < b` as `a <= b & !(a = b)`.
    pub fn less(l: Term, r: Term) -> Formula {
        Formula::And(
            Box::new(Formula::Atom(l.clone(), Rel::Le, r.clone())),
            Box::new(Formula::Not(Box::new(Formula::Atom(l, Rel::Eq, r)))),
        )
    }

    pub fn atoms(&self) -> Vec<(&Term, Rel, &Term)> {
        match self {
            Formula::Atom(l, r, t) => vec![(l, *r, t)],
            Formula::And(a, b) | Formula::Or(a, b) => {
                let mut v = a.atoms();
                v.extend(b.atoms());
                v
            }
            Formula::Not(a) => a.atoms(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Not(..) | Formula::Atom(..) => 3,
        }
    }
}

fn write_formula_at(f: &mut fmt::Formatter<'_>, x: &Formula, min: u8) -> fmt::Result {
    if x.precedence() < min {
        write!(f, "({x})")
    } else {
        write!(f, "{x}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(l, r, t) => write!(f, "{l} {r} {t}"),
            Formula::And(a, b) => {
                write_formula_at(f, a, 2)?;
                f.write_str(" & ")?;
                write_formula_at(f, b, 3)
            }
            Formula::Or(a, b) => {
                write_formula_at(f, a, 1)?;
                f.write_str(" | ")?;
                write_formula_at(f, b, 2)
            }
            Formula::Not(a) => match **a {
                Formula::Atom(..) => write!(f, "!({a})"),
                _ => {
                    f.write_str("!")?;
                    write_formula_at(f, a, 3)
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_uses_minimal_parentheses() {
        let t = Term::Sub(
            Box::new(Term::int(1)),
            Box::new(Term::Add(Box::new(Term::var("x")), Box::new(Term::int(2)))),
        );
        assert_eq!(t.to_string(), "1 - (x + 2)");
        assert_eq!(Term::tower(2).to_string(), "2^(2^1)");
        let s = Term::MulPow2(Box::new(Term::int(3)), Box::new(Term::DivPow2(Box::new(Term::int(4)), Box::new(Term::int(1)))));
        assert_eq!(s.to_string(), "3 <<^ 4 >>^ 1");
        assert_eq!(Term::int(-5).to_string(), "-5");
        let neg = Term::Mul(Box::new(Term::int(2)), Box::new(Term::int(-5)));
        assert_eq!(neg.to_string(), "2 * (-5)");
    }

    #[test]
    fn sizes_and_counts() {
        let t = Term::Add(Box::new(Term::var("x")), Box::new(Term::Sub(Box::new(Term::var("x")), Box::new(Term::int(1)))));
        assert_eq!(t.size(), 2);
        assert_eq!(t.occurrences("x"), 2);
        assert_eq!(t.ones(), 1);
        assert_eq!(t.variables(), ["x"]);
        assert_eq!(t.at(&[1, 0]), Some(&Term::var("x")));
    }
}
