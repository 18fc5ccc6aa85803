//! Recursive-descent parser for terms and formulas. See the README for the grammar.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Num, ToPrimitive};

use super::{Formula, Rel, Term};

/// Largest `k` accepted in `tower(k)`.
pub const MAX_TOWER: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source.
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at column {}: {}", self.pos + 1, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, Default)]
pub struct ParseOptions {
    /// Values for identifiers used as `tower(k)` arguments.
    pub lets: BTreeMap<String, BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Term(Term),
    Formula(Formula),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Shl,
    Shr,
    Caret,
    LParen,
    RParen,
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
    Ne,
    Bang,
    And,
    Or,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Int(n) => return write!(f, "`{n}`"),
            Tok::Ident(x) => return write!(f, "`{x}`"),
            Tok::Plus => "`+`",
            Tok::Minus => "`-`",
            Tok::Star => "`*`",
            Tok::Shl => "`<<^`",
            Tok::Shr => "`>>^`",
            Tok::Caret => "`^`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Le => "`<=`",
            Tok::Lt => "`<`",
            Tok::Ge => "`>=`",
            Tok::Gt => "`>`",
            Tok::Eq => "`=`",
            Tok::Ne => "`!=`",
            Tok::Bang => "`!`",
            Tok::And => "`&`",
            Tok::Or => "`|`",
            Tok::End => "end of input",
        };
        f.write_str(s)
    }
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, message: message.into() })
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &src[i..];
        let fixed = [
            ("<<^", Tok::Shl),
            (">>^", Tok::Shr),
            ("<=", Tok::Le),
            (">=", Tok::Ge),
            ("!=", Tok::Ne),
            ("==", Tok::Eq),
            ("&&", Tok::And),
            ("||", Tok::Or),
            ("<", Tok::Lt),
            (">", Tok::Gt),
            ("=", Tok::Eq),
            ("!", Tok::Bang),
            ("&", Tok::And),
            ("|", Tok::Or),
            ("+", Tok::Plus),
            ("-", Tok::Minus),
            ("*", Tok::Star),
            ("^", Tok::Caret),
            ("(", Tok::LParen),
            (")", Tok::RParen),
        ];
        if let Some((s, t)) = fixed.iter().find(|(s, _)| rest.starts_with(s)) {
            out.push((t.clone(), start));
            i += s.len();
            continue;
        }
        if c.is_ascii_digit() {
            let (radix, digits_from) = if rest.starts_with("0b") || rest.starts_with("0B") { (2, i + 2) } else { (10, i) };
            let mut j = digits_from;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            let digits: String = src[digits_from..j].chars().filter(|&ch| ch != '_').collect();
            match BigInt::from_str_radix(&digits, radix) {
                Ok(n) if !digits.is_empty() => out.push((Tok::Int(n), start)),
                _ => return err(start, format!("invalid integer literal `{}`", &src[start..j])),
            }
            i = j;
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let mut j = i;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            out.push((Tok::Ident(src[i..j].to_string()), start));
            i = j;
            continue;
        }
        let ch = rest.chars().next().unwrap();
        return err(start, format!("unexpected character `{ch}`"));
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

enum Node {
    Term(Term),
    Formula(Formula),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    i: usize,
    opts: &'a ParseOptions,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if t != Tok::End {
            self.i += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            err(self.pos(), format!("expected {t}, found {}", self.peek()))
        }
    }

    fn formula_of(&self, n: Node, pos: usize) -> Result<Formula, ParseError> {
        match n {
            Node::Formula(f) => Ok(f),
            Node::Term(_) => err(pos, "expected a formula (a comparison), found a term"),
        }
    }

    fn or(&mut self) -> Result<Node, ParseError> {
        let pos = self.pos();
        let mut n = self.and()?;
        while self.peek() == &Tok::Or {
            self.bump();
            let lhs = self.formula_of(n, pos)?;
            let rhs_pos = self.pos();
            let rhs = self.and()?;
            let rhs = self.formula_of(rhs, rhs_pos)?;
            n = Node::Formula(Formula::Or(Box::new(lhs), Box::new(rhs)));
        }
        Ok(n)
    }

    fn and(&mut self) -> Result<Node, ParseError> {
        let pos = self.pos();
        let mut n = self.not()?;
        while self.peek() == &Tok::And {
            self.bump();
            let lhs = self.formula_of(n, pos)?;
            let rhs_pos = self.pos();
            let rhs = self.not()?;
            let rhs = self.formula_of(rhs, rhs_pos)?;
            n = Node::Formula(Formula::And(Box::new(lhs), Box::new(rhs)));
        }
        Ok(n)
    }

    fn not(&mut self) -> Result<Node, ParseError> {
        if self.peek() == &Tok::Bang {
            self.bump();
            let pos = self.pos();
            let inner = self.not()?;
            let f = self.formula_of(inner, pos)?;
            return Ok(Node::Formula(Formula::Not(Box::new(f))));
        }
        if self.peek() == &Tok::LParen {
            let save = self.i;
            self.bump();
            if let Ok(Node::Formula(f)) = self.or() {
                if self.eat(&Tok::RParen) && !self.continues_term() {
                    return Ok(Node::Formula(f));
                }
            }
            self.i = save;
        }
        self.atom()
    }

    fn continues_term(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Plus | Tok::Minus | Tok::Star | Tok::Shl | Tok::Shr | Tok::Le | Tok::Lt | Tok::Ge | Tok::Gt | Tok::Eq | Tok::Ne
        )
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        let lhs = self.sum()?;
        let rel = match self.peek() {
            Tok::Le | Tok::Lt | Tok::Ge | Tok::Gt | Tok::Eq | Tok::Ne => self.bump(),
            _ => return Ok(Node::Term(lhs)),
        };
        let rhs = self.sum()?;
        let f = match rel {
            Tok::Le => Formula::Atom(lhs, Rel::Le, rhs),
            Tok::Eq => Formula::Atom(lhs, Rel::Eq, rhs),
            Tok::Lt => Formula::less(lhs, rhs),
            Tok::Ge => Formula::Atom(rhs, Rel::Le, lhs),
            Tok::Gt => Formula::less(rhs, lhs),
            Tok::Ne => Formula::Not(Box::new(Formula::Atom(lhs, Rel::Eq, rhs))),
            _ => unreachable!(),
        };
        if matches!(self.peek(), Tok::Le | Tok::Lt | Tok::Ge | Tok::Gt | Tok::Eq | Tok::Ne) {
            return err(self.pos(), "comparisons do not chain; combine them with `&`");
        }
        Ok(Node::Formula(f))
    }

    fn sum(&mut self) -> Result<Term, ParseError> {
        let mut t = self.product()?;
        loop {
            if self.eat(&Tok::Plus) {
                t = Term::Add(Box::new(t), Box::new(self.product()?));
            } else if self.eat(&Tok::Minus) {
                t = Term::Sub(Box::new(t), Box::new(self.product()?));
            } else {
                return Ok(t);
            }
        }
    }

    fn product(&mut self) -> Result<Term, ParseError> {
        let mut t = self.shift()?;
        while self.eat(&Tok::Star) {
            t = Term::Mul(Box::new(t), Box::new(self.shift()?));
        }
        Ok(t)
    }

    fn shift(&mut self) -> Result<Term, ParseError> {
        let t = self.unary()?;
        if self.eat(&Tok::Shl) {
            Ok(Term::MulPow2(Box::new(t), Box::new(self.shift()?)))
        } else if self.eat(&Tok::Shr) {
            Ok(Term::DivPow2(Box::new(t), Box::new(self.shift()?)))
        } else {
            Ok(t)
        }
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        if self.eat(&Tok::Minus) {
            return Ok(match self.unary()? {
                Term::Const(n) => Term::Const(-n),
                t => Term::Sub(Box::new(Term::int(0)), Box::new(t)),
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => {
                if self.peek() == &Tok::Caret {
                    if n != BigInt::from(2) {
                        return err(self.pos(), "`^` is only defined with base 2");
                    }
                    self.bump();
                    return Ok(Term::pow2(self.unary()?));
                }
                Ok(Term::Const(n))
            }
            Tok::Ident(x) if x == "tower" && self.peek() == &Tok::LParen => {
                self.bump();
                let arg_pos = self.pos();
                let k = match self.bump() {
                    Tok::Int(n) => n,
                    Tok::Ident(y) => match self.opts.lets.get(&y) {
                        Some(n) => n.clone(),
                        None => return err(arg_pos, format!("`{y}` has no value; bind it with --let {y}=...")),
                    },
                    t => return err(arg_pos, format!("expected a tower height, found {t}")),
                };
                self.expect(Tok::RParen)?;
                match k.to_usize() {
                    Some(k) if k <= MAX_TOWER => Ok(Term::tower(k)),
                    _ => err(arg_pos, format!("tower height must be between 0 and {MAX_TOWER}")),
                }
            }
            Tok::Ident(x) => Ok(Term::Var(x)),
            Tok::LParen => {
                let t = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            t => err(pos, format!("expected a term, found {t}")),
        }
    }
}

fn run(src: &str, opts: &ParseOptions) -> Result<Parsed, ParseError> {
    let mut p = Parser { toks: lex(src)?, i: 0, opts };
    let n = p.or()?;
    if p.peek() != &Tok::End {
        return err(p.pos(), format!("unexpected {}", p.peek()));
    }
    Ok(match n {
        Node::Term(t) => Parsed::Term(t),
        Node::Formula(f) => Parsed::Formula(f),
    })
}

/// Parses a term or a formula, whichever the source is.
pub fn parse(src: &str, opts: &ParseOptions) -> Result<Parsed, ParseError> {
    run(src, opts)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    match run(src, &ParseOptions::default())? {
        Parsed::Term(t) => Ok(t),
        Parsed::Formula(_) => err(0, "expected a term, found a formula"),
    }
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    match run(src, &ParseOptions::default())? {
        Parsed::Formula(f) => Ok(f),
        Parsed::Term(_) => err(0, "expected a formula, found a term"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Box<Term> {
        Box::new(Term::int(n))
    }

    #[test]
    fn basic_terms() {
        assert_eq!(parse_term("1+1").unwrap(), Term::Add(c(1), c(1)));
        assert_eq!(parse_term("3 >>^ 1").unwrap(), Term::DivPow2(c(3), c(1)));
        assert_eq!(parse_term("0b101").unwrap(), Term::int(5));
        assert_eq!(parse_term("1 - 2 - 3").unwrap(), Term::Sub(Box::new(Term::Sub(c(1), c(2))), c(3)));
        assert_eq!(
            parse_term("1 <<^ 2 <<^ 3").unwrap(),
            Term::MulPow2(c(1), Box::new(Term::MulPow2(c(2), c(3))))
        );
        assert_eq!(parse_term("-7").unwrap(), Term::int(-7));
        assert_eq!(parse_term("-x").unwrap(), Term::Sub(c(0), Box::new(Term::var("x"))));
        assert_eq!(parse_term("2 * 3 + 4").unwrap(), Term::Add(Box::new(Term::Mul(c(2), c(3))), c(4)));
    }

    #[test]
    fn power_sugar() {
        let p = parse_formula("2^(2^(x)) <= 2^(2^(y))").unwrap();
        let tx = Term::pow2(Term::pow2(Term::var("x")));
        let ty = Term::pow2(Term::pow2(Term::var("y")));
        assert_eq!(p, Formula::Atom(tx, Rel::Le, ty));
        assert_eq!(parse_term("2^x").unwrap(), parse_term("1 <<^ x").unwrap());
        assert_eq!(parse_term("2").unwrap(), Term::int(2));
        assert!(parse_term("3^2").is_err());
    }

    #[test]
    fn towers_and_lets() {
        assert_eq!(parse_term("tower(2)").unwrap(), Term::pow2(Term::pow2(Term::int(1))));
        let opts = ParseOptions { lets: BTreeMap::from([("x".to_string(), BigInt::from(3))]) };
        assert_eq!(parse("tower(x)", &opts).unwrap(), Parsed::Term(Term::tower(3)));
        assert!(parse("tower(y)", &opts).is_err());
        assert_eq!(parse("tower + 1", &opts).unwrap(), Parsed::Term(Term::Add(Box::new(Term::var("tower")), c(1))));
    }

    #[test]
    fn formulas() {
        let f = parse_formula("(3 >>^ 1) = 1").unwrap();
        assert_eq!(f, Formula::Atom(Term::DivPow2(c(3), c(1)), Rel::Eq, Term::int(1)));
        let g = parse_formula("!(1 = 2) & (1 <= 2 | 2 <= 1)").unwrap();
        assert!(matches!(g, Formula::And(..)));
        assert_eq!(parse_formula("1 < 2").unwrap(), Formula::less(Term::int(1), Term::int(2)));
        assert_eq!(parse_formula("1 >= 2").unwrap(), Formula::Atom(Term::int(2), Rel::Le, Term::int(1)));
        assert!(matches!(parse_formula("1 != 2").unwrap(), Formula::Not(_)));
        assert_eq!(parse_formula("((1)) = (1)").unwrap(), Formula::Atom(Term::int(1), Rel::Eq, Term::int(1)));
    }

    #[test]
    fn errors_have_positions() {
        let e = parse_term("1 + ").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_term("1 + $").unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(parse_formula("1 = 1 = 1").is_err());
        assert!(parse_formula("1 & 2").is_err());
        assert!(parse_term("(1").is_err());
        assert!(e.to_string().contains("column 5"));
    }

    #[test]
    fn display_round_trip() {
        for src in ["1 - (x + 2)", "2^(2^x) + 3 <<^ y >>^ 1", "-5 * (-x)", "(a <<^ b) >>^ c", "2^(-1)"] {
            let t = parse_term(src).unwrap();
            assert_eq!(parse_term(&t.to_string()).unwrap(), t, "{src}");
        }
        let f = parse_formula("!(x = 1) | x <= 2 & !(y < 3)").unwrap();
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }
}
