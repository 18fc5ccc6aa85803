//! Signed binary sums `ε₁2^{q₁} + … + ε_k2^{q_k}` with `εᵢ ∈ {−1, +1}`.
//!
//! Exponents are abstract keys supplied by a [`KeyDomain`]. The concrete
//! domain [`Integers`] uses `u64` exponents; reduction of power circuits
//! uses certificate positions whose only known relations are order and
//! "is exactly twice".

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, Sign as BigSign};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::sign::Sign;

/// Ordered exponent keys together with the doubling relation.
pub trait KeyDomain {
    type Key: Copy + Ord + fmt::Debug;

    /// Whether `2^hi = 2 · 2^lo`, i.e. the exponents differ by exactly one.
    fn is_double(&self, hi: Self::Key, lo: Self::Key) -> bool;
    /// The key one below `k`, if the domain has it.
    fn half(&self, k: Self::Key) -> Option<Self::Key>;
    /// The key one above `k`, if the domain has it.
    fn double(&self, k: Self::Key) -> Option<Self::Key>;
    /// Whether `k` is exponent zero, the smallest possible key.
    fn is_unit(&self, k: Self::Key) -> bool;
}

/// Non-negative integer exponents.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl KeyDomain for Integers {
    type Key = u64;

    fn is_double(&self, hi: u64, lo: u64) -> bool {
        lo.checked_add(1) == Some(hi)
    }
    fn half(&self, k: u64) -> Option<u64> {
        k.checked_sub(1)
    }
    fn double(&self, k: u64) -> Option<u64> {
        k.checked_add(1)
    }
    fn is_unit(&self, k: u64) -> bool {
        k == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Digit<K> {
    pub key: K,
    pub sign: Sign,
}

impl<K> Digit<K> {
    pub fn new(key: K, sign: Sign) -> Self {
        Digit { key, sign }
    }
}

/// A reduced signed binary sum: keys strictly decreasing. The empty sum is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedSum<K> {
    digits: Vec<Digit<K>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SumError {
    #[error("key {0} occurs twice")]
    DuplicateKey(String),
    #[error("compaction needs the double of key {0}, which the domain lacks")]
    MissingDouble(String),
}

impl<K: Copy + Ord + fmt::Debug> SignedSum<K> {
    pub fn zero() -> Self {
        SignedSum { digits: Vec::new() }
    }

    /// Sorts digits with distinct keys into reduced order.
    ///
    /// This is the whole of reduction for abstract keys: equal keys would need
    /// a carry, which only the integer domain can build (see [`reduce_sum`]).
    pub fn from_distinct(digits: impl IntoIterator<Item = Digit<K>>) -> Result<Self, SumError> {
        let mut digits: Vec<_> = digits.into_iter().collect();
        digits.sort_by_key(|d| std::cmp::Reverse(d.key));
        if let Some(w) = digits.windows(2).find(|w| w[0].key == w[1].key) {
            return Err(SumError::DuplicateKey(format!("{:?}", w[0].key)));
        }
        Ok(SignedSum { digits })
    }

    /// Digits in decreasing key order.
    pub fn digits(&self) -> &[Digit<K>] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = K> + '_ {
        self.digits.iter().map(|d| d.key)
    }

    /// `ε(P, q)`: the coefficient at key `q`, or 0.
    pub fn coeff(&self, q: K) -> i8 {
        self.digits
            .binary_search_by(|d| q.cmp(&d.key))
            .map(|i| self.digits[i].sign.as_i8())
            .unwrap_or(0)
    }

    pub fn negated(&self) -> Self {
        SignedSum {
            digits: self.digits.iter().map(|d| Digit::new(d.key, -d.sign)).collect(),
        }
    }

    pub fn has_superfluous<D: KeyDomain<Key = K>>(&self, dom: &D) -> bool {
        self.digits
            .windows(2)
            .any(|w| w[0].sign != w[1].sign && dom.is_double(w[0].key, w[1].key))
    }

    /// No two keys are adjacent in the doubling relation.
    pub fn is_compact<D: KeyDomain<Key = K>>(&self, dom: &D) -> bool {
        self.digits.windows(2).all(|w| !dom.is_double(w[0].key, w[1].key))
    }
}

impl SignedSum<u64> {
    /// Builds from `(exponent, ±1)` pairs written highest first, e.g. `&[(3, 1), (0, -1)]`.
    ///
    /// Panics if the pairs are not strictly decreasing or a coefficient is not ±1.
    pub fn from_pairs(pairs: &[(u64, i8)]) -> Self {
        let digits: Vec<_> = pairs
            .iter()
            .map(|&(k, c)| Digit::new(k, Sign::from_i64(c as i64).expect("coefficient must be ±1")))
            .collect();
        assert!(digits.windows(2).all(|w| w[0].key > w[1].key), "exponents must decrease");
        SignedSum { digits }
    }

    pub fn to_pairs(&self) -> Vec<(u64, i8)> {
        self.digits.iter().map(|d| (d.key, d.sign.as_i8())).collect()
    }

    /// `N(ε̄, q̄)` with arbitrary precision.
    pub fn value(&self) -> BigInt {
        self.digits.iter().fold(BigInt::zero(), |acc, d| {
            let p = BigInt::one() << d.key as usize;
            match d.sign {
                Sign::Plus => acc + p,
                Sign::Minus => acc - p,
            }
        })
    }
}

impl<K: fmt::Display> fmt::Display for SignedSum<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("0");
        }
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}2^{}", d.sign, d.key)?;
        }
        Ok(())
    }
}

/// Reduces an arbitrary multiset of integer-exponent digits, carrying equal
/// keys into the next exponent.
pub fn reduce_sum(digits: impl IntoIterator<Item = (u64, Sign)>) -> SignedSum<u64> {
    let mut coeffs: BTreeMap<u64, i64> = BTreeMap::new();
    for (k, s) in digits {
        *coeffs.entry(k).or_default() += s.as_i8() as i64;
    }
    let mut out = Vec::new();
    let mut carry: i64 = 0;
    let mut next_key = coeffs.keys().next().copied();
    while let Some(k) = next_key {
        let c = coeffs.get(&k).copied().unwrap_or(0) + carry;
        let rest = if c % 2 != 0 {
            let s = if c > 0 { Sign::Plus } else { Sign::Minus };
            out.push(Digit::new(k, s));
            c - s.as_i8() as i64
        } else {
            c
        };
        carry = rest / 2;
        next_key = if carry != 0 {
            Some(k + 1)
        } else {
            coeffs.range(k + 1..).next().map(|(&k, _)| k)
        };
    }
    out.reverse();
    SignedSum { digits: out }
}

/// Replaces every superfluous pair `∓2^{i+1} ± 2^i` by `∓2^i`.
pub fn remove_superfluous<D: KeyDomain>(dom: &D, s: &SignedSum<D::Key>) -> SignedSum<D::Key> {
    let mut out: Vec<Digit<D::Key>> = Vec::with_capacity(s.len());
    for &d in &s.digits {
        let mut d = d;
        while let Some(&hi) = out.last() {
            if hi.sign != d.sign && dom.is_double(hi.key, d.key) {
                out.pop();
                d = Digit::new(d.key, hi.sign);
            } else {
                break;
            }
        }
        out.push(d);
    }
    SignedSum { digits: out }
}

/// Five-way comparison: the result is `N(a) − N(b)` clamped to `{−2, …, 2}`.
pub fn compare<D: KeyDomain>(dom: &D, a: &SignedSum<D::Key>, b: &SignedSum<D::Key>) -> i8 {
    compare_counted(dom, a, b).0
}

/// [`compare`], also returning the number of loop iterations taken.
pub fn compare_counted<D: KeyDomain>(
    dom: &D,
    a: &SignedSum<D::Key>,
    b: &SignedSum<D::Key>,
) -> (i8, usize) {
    // Stacks with the largest key on top.
    let mut x: Vec<Digit<D::Key>> = remove_superfluous(dom, a).digits;
    let mut y: Vec<Digit<D::Key>> = remove_superfluous(dom, b).digits;
    x.reverse();
    y.reverse();
    let mut flip = false;
    let mut iterations = 0;
    let finish = |r: i8, flip: bool| if flip { -r } else { r };

    loop {
        iterations += 1;
        let n = match (x.last(), y.last()) {
            (None, None) => return (0, iterations),
            (Some(p), None) => p.key,
            (None, Some(q)) => q.key,
            (Some(p), Some(q)) => p.key.max(q.key),
        };
        let top = |v: &Vec<Digit<D::Key>>| match v.last() {
            Some(d) if d.key == n => d.sign.as_i8(),
            _ => 0,
        };
        let (mut a1, mut b1) = (top(&x), top(&y));

        if dom.is_unit(n) {
            return (finish(a1 - b1, flip), iterations);
        }
        if a1 == 0 {
            std::mem::swap(&mut x, &mut y);
            std::mem::swap(&mut a1, &mut b1);
            flip = !flip;
        }
        if a1 == b1 {
            x.pop();
            y.pop();
            continue;
        }
        if a1 == -b1 {
            return (finish(2 * a1, flip), iterations);
        }

        // b1 == 0: mirror onto the α₁ = 1 case by the sign s.
        let s = a1;
        let half = dom.half(n);
        let a2 = match (half, x.len().checked_sub(2).map(|i| x[i])) {
            (Some(h), Some(d)) if d.key == h => s * d.sign.as_i8(),
            _ => 0,
        };
        let b2 = match (half, y.last()) {
            (Some(h), Some(d)) if d.key == h => s * d.sign.as_i8(),
            _ => 0,
        };
        if a2 == 1 || b2 < 1 {
            return (finish(2 * s, flip), iterations);
        }
        let h = half.expect("β₂ = 1 implies the half key exists");
        x.pop();
        let sign = if s > 0 { Sign::Plus } else { Sign::Minus };
        push_reducing(dom, &mut x, Digit::new(h, sign));
        y.pop();
    }
}

/// Pushes `d` below the current top of an ascending stack, removing any
/// superfluous pair it forms with the digit beneath it.
fn push_reducing<D: KeyDomain>(dom: &D, stack: &mut Vec<Digit<D::Key>>, d: Digit<D::Key>) {
    let mut hi = d;
    while let Some(&lo) = stack.last() {
        if lo.sign != hi.sign && dom.is_double(hi.key, lo.key) {
            stack.pop();
            hi = Digit::new(lo.key, hi.sign);
        } else {
            break;
        }
    }
    stack.push(hi);
}

/// Rewrites `s` into its compact form with the system
/// `2^m+2^m → 2^{m+1}`, `2^m−2^m → 0`, `2^{m+1}+2^m → 2^{m+2}−2^m`,
/// `2^{m+1}−2^m → 2^m` (and their negations), lowest exponents first.
pub fn make_compact<D: KeyDomain>(
    dom: &D,
    s: &SignedSum<D::Key>,
) -> Result<SignedSum<D::Key>, SumError> {
    make_compact_ascending(dom, s.digits.iter().rev().copied())
}

/// [`make_compact`] for digits given in non-decreasing key order, where equal
/// keys are allowed.
pub fn make_compact_ascending<D: KeyDomain>(
    dom: &D,
    digits: impl IntoIterator<Item = Digit<D::Key>>,
) -> Result<SignedSum<D::Key>, SumError> {
    let succ = |k: D::Key| dom.double(k).ok_or_else(|| SumError::MissingDouble(format!("{k:?}")));
    let mut stack: Vec<Digit<D::Key>> = Vec::new();
    // Carries can overtake later input; overtaken digits wait here, smallest on top.
    let mut pending: Vec<Digit<D::Key>> = Vec::new();
    for input in digits {
        pending.push(input);
        while let Some(mut d) = pending.pop() {
            loop {
                let Some(&top) = stack.last() else {
                    stack.push(d);
                    break;
                };
                if top.key > d.key {
                    stack.pop();
                    pending.push(top);
                    continue;
                }
                if top.key == d.key {
                    stack.pop();
                    if top.sign == d.sign {
                        d = Digit::new(succ(d.key)?, d.sign);
                        continue;
                    }
                    break;
                }
                if dom.is_double(d.key, top.key) {
                    stack.pop();
                    if top.sign == d.sign {
                        stack.push(Digit::new(top.key, -d.sign));
                        d = Digit::new(succ(d.key)?, d.sign);
                    } else {
                        d = Digit::new(top.key, d.sign);
                    }
                    continue;
                }
                stack.push(d);
                break;
            }
        }
    }
    stack.reverse();
    Ok(SignedSum { digits: stack })
}

/// [`make_compact`] over integer exponents, where doubles always exist.
pub fn make_compact_int(s: &SignedSum<u64>) -> SignedSum<u64> {
    make_compact(&Integers, s).expect("integer exponents always have a successor")
}

/// Sign of `N(s)`: the leading coefficient, or 0 for the empty sum.
pub fn sum_sign<K>(s: &SignedSum<K>) -> i8 {
    s.digits.first().map_or(0, |d| d.sign.as_i8())
}

/// Whether `2^n` divides `N(s)`: the smallest exponent is at least `n`.
pub fn divisible_by_pow2(s: &SignedSum<u64>, n: u64) -> bool {
    s.digits.last().is_none_or(|d| d.key >= n)
}

/// The compact signed binary form of `n`.
pub fn compact_of_integer(n: &BigInt) -> SignedSum<u64> {
    let (sign, mag) = n.to_u32_digits();
    let bits = mag.iter().enumerate().flat_map(|(w, &word)| {
        (0..32).filter(move |b| word >> b & 1 == 1).map(move |b| w as u64 * 32 + b)
    });
    let binary = SignedSum {
        digits: bits.collect::<Vec<_>>().into_iter().rev().map(|k| Digit::new(k, Sign::Plus)).collect(),
    };
    let compact = make_compact_int(&binary);
    if sign == BigSign::Minus {
        compact.negated()
    } else {
        compact
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sum(pairs: &[(u64, i8)]) -> SignedSum<u64> {
        SignedSum::from_pairs(pairs)
    }

    fn plus(k: u64) -> (u64, Sign) {
        (k, Sign::Plus)
    }

    #[test]
    fn carry_overtaking_later_input() {
        // 2^10 + 2^11 carries to 2^12 − 2^10 before the second 2^11 arrives.
        let digits = [10, 11, 11].map(|k| Digit::new(k, Sign::Plus));
        let s = make_compact_ascending(&Integers, digits).unwrap();
        assert_eq!(s, sum(&[(12, 1), (10, 1)]));
    }

    #[test]
    fn reduce_carries_and_cancels() {
        assert_eq!(reduce_sum([plus(0), plus(0)]).to_pairs(), vec![(1, 1)]);
        assert!(reduce_sum([plus(3), (3, Sign::Minus)]).is_empty());
        assert_eq!(
            reduce_sum([plus(2), plus(1), plus(1), plus(0)]).to_pairs(),
            vec![(3, 1), (0, 1)]
        );
    }

    #[test]
    fn superfluous_pairs_collapse() {
        assert_eq!(remove_superfluous(&Integers, &sum(&[(5, 1), (4, -1)])).to_pairs(), vec![(4, 1)]);
        assert_eq!(
            remove_superfluous(&Integers, &sum(&[(6, 1), (5, -1), (4, 1)])).to_pairs(),
            vec![(5, 1), (4, 1)]
        );
        let gap = sum(&[(3, 1), (1, -1)]);
        assert_eq!(remove_superfluous(&Integers, &gap), gap);
    }

    #[test]
    fn superfluous_removal_cascades_downward() {
        // 2^3 − 2^2 − 2^1 − 2^0 = 1
        let s = sum(&[(3, 1), (2, -1), (1, -1), (0, -1)]);
        let r = remove_superfluous(&Integers, &s);
        assert_eq!(r.to_pairs(), vec![(0, 1)]);
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare(&Integers, &sum(&[(3, 1)]), &sum(&[(2, 1), (1, 1), (0, 1)])), 1);
        let a = sum(&[(4, 1), (0, -1)]);
        assert_eq!(compare(&Integers, &a, &a), 0);
        assert_eq!(compare(&Integers, &sum(&[(5, 1)]), &sum(&[(5, -1)])), 2);
        assert_eq!(compare(&Integers, &sum(&[(5, -1)]), &sum(&[(5, 1)])), -2);
        assert_eq!(compare(&Integers, &sum(&[(0, 1)]), &SignedSum::zero()), 1);
        assert_eq!(compare(&Integers, &SignedSum::zero(), &SignedSum::zero()), 0);
    }

    #[test]
    fn compact_examples() {
        assert_eq!(make_compact_int(&sum(&[(2, 1), (1, 1), (0, 1)])).to_pairs(), vec![(3, 1), (0, -1)]);
        assert!(make_compact_int(&SignedSum::zero()).is_empty());
        assert_eq!(compact_of_integer(&BigInt::from(7)).to_pairs(), vec![(3, 1), (0, -1)]);
        assert!(compact_of_integer(&BigInt::zero()).is_empty());
        for k in 0..=62u64 {
            let n = BigInt::one() << k as usize;
            assert_eq!(compact_of_integer(&n).to_pairs(), vec![(k, 1)]);
        }
    }

    #[test]
    fn sign_and_divisibility() {
        assert_eq!(sum_sign(&sum(&[(7, -1), (0, 1)])), -1);
        assert_eq!(sum_sign::<u64>(&SignedSum::zero()), 0);
        let s = sum(&[(5, 1), (3, -1)]);
        assert!(divisible_by_pow2(&s, 3));
        assert!(!divisible_by_pow2(&s, 4));
    }

    #[test]
    fn display_renders_signed_powers() {
        assert_eq!(sum(&[(5, 1), (3, -1), (0, 1)]).to_string(), "+2^5 -2^3 +2^0");
        assert_eq!(SignedSum::<u64>::zero().to_string(), "0");
    }

    #[test]
    fn abstract_keys_reject_duplicates() {
        let d = [Digit::new(4u64, Sign::Plus), Digit::new(4, Sign::Minus)];
        assert!(SignedSum::from_distinct(d).is_err());
    }

    /// A domain with a hole: key 7 has no double and 5 is not the double of 3.
    struct Sparse;
    impl KeyDomain for Sparse {
        type Key = u64;
        fn is_double(&self, hi: u64, lo: u64) -> bool {
            matches!((hi, lo), (1, 0) | (2, 1) | (3, 2) | (6, 5) | (7, 6))
        }
        fn half(&self, k: u64) -> Option<u64> {
            (1..=7).find(|&l| self.is_double(k, l - 1)).map(|l| l - 1)
        }
        fn double(&self, k: u64) -> Option<u64> {
            (k + 1..=7).find(|&h| self.is_double(h, k))
        }
        fn is_unit(&self, k: u64) -> bool {
            k == 0
        }
    }

    #[test]
    fn compaction_reports_missing_double() {
        let s = SignedSum::from_distinct([Digit::new(7u64, Sign::Plus), Digit::new(6, Sign::Plus)]).unwrap();
        assert!(matches!(make_compact(&Sparse, &s), Err(SumError::MissingDouble(_))));
    }

    fn arb_sum(max_exp: u64) -> impl Strategy<Value = SignedSum<u64>> {
        prop::collection::vec(-1i8..=1, max_exp as usize).prop_map(|cs| {
            let pairs: Vec<_> = cs
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, &c)| c != 0)
                .map(|(k, &c)| (k as u64, c))
                .collect();
            SignedSum::from_pairs(&pairs)
        })
    }

    fn five_way(d: &BigInt) -> i8 {
        let two = BigInt::from(2);
        if *d >= two {
            2
        } else if *d <= -two {
            -2
        } else {
            i8::try_from(d).unwrap()
        }
    }

    proptest! {
        #[test]
        fn compact_round_trip(n in -(1i64 << 32)..(1i64 << 32)) {
            let n = BigInt::from(n);
            let c = compact_of_integer(&n);
            prop_assert!(c.is_compact(&Integers));
            prop_assert_eq!(c.value(), n);
        }

        #[test]
        fn compare_agrees_with_bignum(a in arb_sum(20), b in arb_sum(20)) {
            let a = remove_superfluous(&Integers, &a);
            let b = remove_superfluous(&Integers, &b);
            let (r, iters) = compare_counted(&Integers, &a, &b);
            prop_assert_eq!(r, five_way(&(a.value() - b.value())));
            prop_assert!(iters <= 4 * (a.len() + b.len()) + 8);
        }

        #[test]
        fn superfluous_removal_preserves_value(s in arb_sum(20)) {
            let r = remove_superfluous(&Integers, &s);
            prop_assert_eq!(r.value(), s.value());
            prop_assert!(!r.has_superfluous(&Integers));
        }

        #[test]
        fn compact_support_lemma(s in arb_sum(16)) {
            let exps: std::collections::BTreeSet<u64> = s.keys().collect();
            let near = |d: u64| exps.contains(&d) || (d > 0 && exps.contains(&(d - 1)));
            let c = make_compact_int(&s);
            prop_assert_eq!(c.value(), s.value());
            prop_assert!(c.keys().all(near));
            // For N + 1 the exponent 0 of the added unit joins the support.
            if !s.is_empty() {
                let with_unit = |d: u64| near(d) || d <= 1;
                let plus_one = compact_of_integer(&(s.value() + 1));
                prop_assert!(plus_one.keys().all(with_unit));
            }
        }

        #[test]
        fn reduce_sum_preserves_value(ds in prop::collection::vec((0u64..10, any::<bool>()), 0..16)) {
            let digits: Vec<_> = ds.iter().map(|&(k, p)| (k, if p { Sign::Plus } else { Sign::Minus })).collect();
            let expected: BigInt = digits.iter().map(|&(k, s)| BigInt::from(s.as_i8()) << k as usize).sum();
            let r = reduce_sum(digits);
            prop_assert!(r.digits().windows(2).all(|w| w[0].key > w[1].key));
            prop_assert_eq!(r.value(), expected);
        }
    }
}
