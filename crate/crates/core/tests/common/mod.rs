//! Independent reference computations shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use power_circuits::termlang::{Formula, Rel, Term};

pub type Env = BTreeMap<String, BigInt>;

/// Direct big-integer evaluation. `Ok(None)` when a subterm is not an integer;
/// `Err` when a shift amount is too large to expand.
pub fn eval_term(t: &Term, env: &Env, max_shift: u64) -> Result<Option<BigInt>, String> {
    let amount = |e: &BigInt| -> Result<usize, String> {
        match u64::try_from(e.magnitude()) {
            Ok(k) if k <= max_shift => Ok(k as usize),
            _ => Err(format!("shift {e} too large")),
        }
    };
    let pair = |a: &Term, b: &Term| -> Result<Option<(BigInt, BigInt)>, String> {
        let Some(x) = eval_term(a, env, max_shift)? else { return Ok(None) };
        let Some(y) = eval_term(b, env, max_shift)? else { return Ok(None) };
        Ok(Some((x, y)))
    };
    // x·2^k for any integer k, or None if that leaves the integers.
    let scale = |x: BigInt, k: BigInt| -> Result<Option<BigInt>, String> {
        if x.is_zero() {
            return Ok(Some(x));
        }
        let n = amount(&k)?;
        if !k.is_negative() {
            return Ok(Some(x << n));
        }
        let d = BigInt::from(1) << n;
        Ok((&x % &d).is_zero().then(|| x / d))
    };
    Ok(match t {
        Term::Const(n) => Some(n.clone()),
        Term::Var(x) => Some(env.get(x).cloned().ok_or_else(|| format!("unbound {x}"))?),
        Term::Add(a, b) => pair(a, b)?.map(|(x, y)| x + y),
        Term::Sub(a, b) => pair(a, b)?.map(|(x, y)| x - y),
        Term::Mul(a, b) => pair(a, b)?.map(|(x, y)| x * y),
        Term::MulPow2(a, b) => match pair(a, b)? {
            Some((x, y)) => scale(x, y)?,
            None => None,
        },
        Term::DivPow2(a, b) => match pair(a, b)? {
            Some((x, y)) => scale(x, -y)?,
            None => None,
        },
    })
}

/// Kleene evaluation with big integers; `None` stands for undefined.
pub fn eval_formula(f: &Formula, env: &Env, max_shift: u64) -> Result<Option<bool>, String> {
    Ok(match f {
        Formula::Atom(l, rel, r) => match (eval_term(l, env, max_shift)?, eval_term(r, env, max_shift)?) {
            (Some(x), Some(y)) => Some(match rel {
                Rel::Le => x <= y,
                Rel::Eq => x == y,
            }),
            _ => None,
        },
        Formula::Not(a) => eval_formula(a, env, max_shift)?.map(|b| !b),
        Formula::And(a, b) => match (eval_formula(a, env, max_shift)?, eval_formula(b, env, max_shift)?) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        },
        Formula::Or(a, b) => match (eval_formula(a, env, max_shift)?, eval_formula(b, env, max_shift)?) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        },
    })
}

/// Minimum number of signed powers of two summing to each `n` with
/// `|n| < 2^bits`, by enumerating every digit vector in `{−1,0,1}^(bits+1)`.
/// Index `n + 2^(bits+1)`.
pub fn min_weight_table(bits: u32) -> Vec<u8> {
    let len = bits + 1;
    let offset = 1i64 << len;
    let mut best = vec![u8::MAX; (2 * offset + 1) as usize];
    let total = 3u64.pow(len);
    for code in 0..total {
        let (mut c, mut value, mut weight) = (code, 0i64, 0u8);
        for k in 0..len {
            let d = (c % 3) as i64 - 1;
            c /= 3;
            if d != 0 {
                value += d << k;
                weight += 1;
            }
        }
        let slot = &mut best[(value + offset) as usize];
        *slot = (*slot).min(weight);
    }
    best
}

/// Five-way clamp of an integer difference.
pub fn five_way(d: i64) -> i8 {
    d.clamp(-2, 2) as i8
}
