//! Reduction of constant power circuits, normal forms, and sign.
//!
//! Vertices are processed in geometric order and inserted into a set `C`
//! kept sorted by value, with a doubles bit between neighbours. Exponent sums
//! of vertices are compared as signed binary sums whose keys are positions in
//! `C`. On a collision the newer vertex is doubled until it is unique.

use std::cmp::Ordering;

use crate::circuit::{
    exponent_sum, geometric_order, make_unreachable_in, standardize, trim_from, unit_position, CertDomain,
    Certificate, Certified, Kind, PowerCircuit, VertexId,
};
use crate::error::{Error, Outcome, Result};
use crate::sign::Sign;
use crate::signed_binary::{
    compare_counted, make_compact, make_compact_ascending, remove_superfluous, sum_sign, Digit, SignedSum,
};

const ABSENT: usize = usize::MAX;

/// Work counters for one reduction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReduceStats {
    /// Basic operations: comparison iterations, edge edits and position updates.
    pub ops: u64,
    pub comparisons: u64,
    pub doublings: u64,
    pub auxiliary_vertices: u64,
}

enum Slot {
    Insert(usize),
    Collides(VertexId),
}

/// Step-by-step reduction state. Most callers want [`reduce`].
#[derive(Clone, Debug)]
pub struct Reducer {
    c: PowerCircuit,
    order: Vec<VertexId>,
    bits: Vec<bool>,
    pos: Vec<usize>,
    pending: Vec<VertexId>,
    trim_queue: Vec<VertexId>,
    stats: ReduceStats,
}

impl Reducer {
    /// Standardizes `c` and seeds `C` with the zero vertex and the vertex valued 1.
    pub fn new(c: &PowerCircuit) -> Result<Self> {
        c.require_constant()?;
        geometric_order(c)?;
        let s = standardize(c);
        let geo = geometric_order(&s)?;
        let (order, bits, pending) = if s.is_trivial() {
            (geo, vec![], vec![])
        } else {
            debug_assert!(s.is_zero_leaf(geo[0]));
            debug_assert!(s.out_edges(geo[1]).all(|(t, _)| t == geo[0]));
            let mut rest = geo[2..].to_vec();
            rest.reverse();
            (geo[..2].to_vec(), vec![false], rest)
        };
        let mut r = Reducer {
            pos: vec![ABSENT; s.id_bound()],
            c: s,
            order,
            bits,
            pending,
            trim_queue: Vec::new(),
            stats: ReduceStats::default(),
        };
        r.renumber(0);
        Ok(r)
    }

    fn from_certified(cert: Certified) -> Self {
        let (c, cert, _) = cert.into_parts();
        let mut r = Reducer {
            pos: vec![ABSENT; c.id_bound()],
            c,
            order: cert.order().to_vec(),
            bits: cert.doubles().to_vec(),
            pending: Vec::new(),
            trim_queue: Vec::new(),
            stats: ReduceStats::default(),
        };
        r.renumber(0);
        r
    }

    pub fn circuit(&self) -> &PowerCircuit {
        &self.c
    }

    /// The processed set `C` in increasing value order.
    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn doubles(&self) -> &[bool] {
        &self.bits
    }

    pub fn stats(&self) -> ReduceStats {
        self.stats
    }

    /// The next vertex [`Reducer::step`] will process.
    pub fn next_pending(&self) -> Option<VertexId> {
        self.pending.iter().rev().copied().find(|&v| self.c.contains(v))
    }

    pub fn in_processed_set(&self, v: VertexId) -> bool {
        self.pos.get(v).is_some_and(|&p| p != ABSENT)
    }

    fn renumber(&mut self, from: usize) {
        if self.pos.len() < self.c.id_bound() {
            self.pos.resize(self.c.id_bound(), ABSENT);
        }
        for (i, &v) in self.order.iter().enumerate().skip(from) {
            self.pos[v] = i;
        }
        self.stats.ops += (self.order.len() - from.min(self.order.len())) as u64;
    }

    fn zero(&self) -> Option<VertexId> {
        self.order.first().copied().filter(|&v| self.c.is_zero_leaf(v))
    }

    fn ensure_zero(&mut self) -> VertexId {
        if let Some(z) = self.zero() {
            return z;
        }
        let z = self.c.add_zero();
        if !self.order.is_empty() {
            self.bits.insert(0, false);
        }
        self.order.insert(0, z);
        self.renumber(0);
        z
    }

    fn sum(&self, v: VertexId) -> SignedSum<usize> {
        exponent_sum(&self.c, &self.pos, v)
    }

    fn cmp(&mut self, a: &SignedSum<usize>, b: &SignedSum<usize>) -> i8 {
        let dom = CertDomain { doubles: &self.bits, unit: unit_position(&self.c, &self.order) };
        let (r, iterations) = compare_counted(&dom, a, b);
        self.stats.comparisons += 1;
        self.stats.ops += iterations as u64;
        r
    }

    fn cmp_vertices(&mut self, u: VertexId, v: VertexId) -> i8 {
        let (a, b) = (self.sum(u), self.sum(v));
        self.cmp(&a, &b)
    }

    /// Sets the non-zero out-edges of `v` to `s`, keeping the zero edge exactly
    /// when `s` is empty.
    fn rewrite_edges(&mut self, v: VertexId, s: &SignedSum<usize>) {
        let old: Vec<_> = self.c.out_edges(v).map(|(t, _)| t).collect();
        for t in old {
            self.c.remove_edge(v, t);
            self.trim_queue.push(t);
        }
        if s.is_empty() {
            let z = self.ensure_zero();
            self.c.set_edge(v, z, Sign::Plus);
        } else {
            for d in s.digits() {
                self.c.set_edge(v, self.order[d.key], d.sign);
            }
        }
        self.stats.ops += (self.c.out_degree(v) + 1) as u64;
    }

    /// Removes superfluous pairs and redundant zero edges from `v`.
    fn clean(&mut self, v: VertexId) {
        let s = self.sum(v);
        let dom = CertDomain { doubles: &self.bits, unit: None };
        let r = remove_superfluous(&dom, &s);
        let zero_edge = self.zero().and_then(|z| self.c.edge(v, z)).is_some();
        let zero_ok = if r.is_empty() { zero_edge } else { !zero_edge };
        if r != s || !zero_ok {
            self.rewrite_edges(v, &r);
        }
    }

    fn locate(&mut self, v: VertexId) -> Outcome<Slot> {
        let s = self.sum(v);
        if sum_sign(&s) < 0 {
            return Outcome::Improper;
        }
        let mut lo = usize::from(self.zero().is_some());
        let mut hi = self.order.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            let other = self.sum(self.order[mid]);
            match self.cmp(&s, &other) {
                0 => return Outcome::Proper(Slot::Collides(self.order[mid])),
                r if r > 0 => lo = mid + 1,
                _ => hi = mid,
            }
        }
        Outcome::Proper(Slot::Insert(lo))
    }

    fn insert_with_bits(&mut self, v: VertexId, at: usize, prev: bool, next: bool) {
        let len = self.order.len();
        self.order.insert(at, v);
        if len > 0 {
            if at == 0 {
                self.bits.insert(0, next);
            } else if at == len {
                self.bits.push(prev);
            } else {
                self.bits[at - 1] = prev;
                self.bits.insert(at, next);
            }
        }
        self.renumber(at);
    }

    fn insert(&mut self, v: VertexId, at: usize) {
        let prev = at > 0 && !self.c.is_zero_leaf(self.order[at - 1]) && self.cmp_vertices(v, self.order[at - 1]) == 1;
        let next = at < self.order.len() && self.cmp_vertices(v, self.order[at]) == -1;
        self.insert_with_bits(v, at, prev, next);
    }

    fn remove_from_order(&mut self, v: VertexId) {
        let p = self.pos[v];
        self.pos[v] = ABSENT;
        let len = self.order.len();
        self.order.remove(p);
        if len > 1 {
            if p == 0 {
                self.bits.remove(0);
            } else if p == len - 1 {
                self.bits.pop();
            } else {
                // Values are powers of two, so nothing lies strictly between a value and its double.
                self.bits[p - 1] = false;
                self.bits.remove(p);
            }
        }
        self.renumber(p);
    }

    fn flush_trim(&mut self) {
        let work = std::mem::take(&mut self.trim_queue);
        let removed = trim_from(&mut self.c, work);
        self.stats.ops += removed.len() as u64;
        for v in removed {
            if self.in_processed_set(v) {
                self.remove_from_order(v);
            }
        }
    }

    fn check_double_args(&mut self, vi: VertexId, vj: VertexId) -> Result<()> {
        for v in [vi, vj] {
            if !self.c.contains(v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        if !self.in_processed_set(vi) || self.in_processed_set(vj) {
            return Err(Error::Precondition("need a processed vertex and an unprocessed one".into()));
        }
        if self.c.out_edges(vj).any(|(t, _)| !self.in_processed_set(t)) {
            return Err(Error::Precondition(format!("children of {vj} are not all processed")));
        }
        if self.c.is_zero_leaf(vi) || self.c.leaf(vj).is_some() || self.cmp_vertices(vi, vj) != 0 {
            return Err(Error::Precondition(format!("vertices {vi} and {vj} are not of equal value")));
        }
        Ok(())
    }

    /// Doubles the value of `vj`, where `vi` is processed, `vj` is not, and
    /// both have the same value. Every other vertex keeps its value and the
    /// circuit keeps its value. May add one auxiliary vertex to `C`.
    pub fn double_vertex(&mut self, vi: VertexId, vj: VertexId) -> Result<()> {
        self.check_double_args(vi, vj)?;
        self.double_unchecked(vi, vj);
        self.flush_trim();
        Ok(())
    }

    fn double_unchecked(&mut self, vi: VertexId, vj: VertexId) {
        self.stats.doublings += 1;
        let lost = make_unreachable_in(&mut self.c, vi, vj);
        self.stats.ops += (lost.len() + self.c.out_degree(vj)) as u64;
        self.trim_queue.extend(lost);

        // Add 1 to the exponent sum of vj.
        let mut chain = Vec::new();
        if let Some(u) = unit_position(&self.c, &self.order) {
            let mut p = u;
            chain.push(self.order[p]);
            while self.bits.get(p) == Some(&true) {
                p += 1;
                chain.push(self.order[p]);
            }
        }
        let n = chain.iter().take_while(|&&w| self.c.edge(vj, w) == Some(Sign::Plus)).count();
        for &w in &chain[..n] {
            self.c.remove_edge(vj, w);
            self.trim_queue.push(w);
        }
        self.stats.ops += (chain.len() + n) as u64;
        match chain.get(n) {
            Some(&t) => match self.c.edge(vj, t) {
                None => {
                    self.c.set_edge(vj, t, Sign::Plus);
                }
                // 2^0 + … + 2^(n−1) + 1 cancels −2^n.
                Some(Sign::Minus) => {
                    self.c.remove_edge(vj, t);
                    self.trim_queue.push(t);
                }
                Some(Sign::Plus) => unreachable!("the run of + edges along the chain is maximal"),
            },
            None => {
                let d = self.c.add_gate();
                self.stats.auxiliary_vertices += 1;
                let at = if n == 0 {
                    let z = self.ensure_zero();
                    self.c.set_edge(d, z, Sign::Plus);
                    1
                } else {
                    for (k, &w) in chain.iter().enumerate().take(usize::BITS as usize) {
                        if n >> k & 1 == 1 {
                            self.c.set_edge(d, w, Sign::Plus);
                        }
                    }
                    self.pos[chain[n - 1]] + 1
                };
                if self.pos.len() < self.c.id_bound() {
                    self.pos.resize(self.c.id_bound(), ABSENT);
                }
                let next = at < self.order.len() && self.cmp_vertices(d, self.order[at]) == -1;
                self.insert_with_bits(d, at, n > 0, next);
                self.c.set_edge(vj, d, Sign::Plus);
            }
        }
        self.clean(vj);

        // Move incoming edges from vj to vi.
        let parents: Vec<_> = self.c.in_edges(vj).collect();
        self.stats.ops += parents.len() as u64;
        for k in parents {
            if k == vi {
                continue;
            }
            let sj = self.c.edge(k, vj).unwrap();
            match self.c.edge(k, vi) {
                Some(si) if si == sj => {
                    self.c.remove_edge(k, vi);
                    self.trim_queue.push(vi);
                }
                Some(_) => {
                    self.c.remove_edge(k, vi);
                    self.c.remove_edge(k, vj);
                    self.trim_queue.extend([vi, vj]);
                    if self.c.out_degree(k) == 0 {
                        let z = self.ensure_zero();
                        self.c.set_edge(k, z, Sign::Plus);
                    }
                }
                None => {
                    self.c.remove_edge(k, vj);
                    self.c.set_edge(k, vi, sj);
                    self.trim_queue.push(vj);
                }
            }
        }

        match (self.c.mark(vi), self.c.mark(vj)) {
            (Some(a), Some(b)) if a == b => {
                self.c.set_mark(vi, None);
            }
            (Some(_), Some(_)) => {
                self.c.set_mark(vi, None);
                self.c.set_mark(vj, None);
            }
            (None, Some(b)) => {
                self.c.set_mark(vj, None);
                self.c.set_mark(vi, Some(b));
            }
            _ => {}
        }
        self.trim_queue.extend([vi, vj]);
    }

    /// Cleans `v` and finds the processed vertex of equal value, if any.
    pub fn collision(&mut self, v: VertexId) -> Result<Outcome<Option<VertexId>>> {
        if !self.c.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
        self.clean(v);
        self.flush_trim();
        Ok(self.locate(v).map(|slot| match slot {
            Slot::Collides(u) => Some(u),
            Slot::Insert(_) => None,
        }))
    }

    fn separate_to_slot(&mut self, v: VertexId) -> Outcome<Option<usize>> {
        loop {
            self.clean(v);
            let slot = match self.locate(v) {
                Outcome::Improper => return Outcome::Improper,
                Outcome::Proper(slot) => slot,
            };
            match slot {
                Slot::Insert(at) => return Outcome::Proper(Some(at)),
                Slot::Collides(u) => {
                    self.double_unchecked(u, v);
                    self.flush_trim();
                    if !self.c.contains(v) {
                        return Outcome::Proper(None);
                    }
                }
            }
        }
    }

    /// Doubles `v` (trimming in between) until its value differs from every
    /// processed vertex or it disappears. Returns whether `v` survived.
    pub fn separate(&mut self, v: VertexId) -> Result<Outcome<bool>> {
        if !self.c.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
        if self.in_processed_set(v) || self.c.out_edges(v).any(|(t, _)| !self.in_processed_set(t)) {
            return Err(Error::Precondition(format!("vertex {v} is not ready to be separated")));
        }
        Ok(self.separate_to_slot(v).map(|slot| slot.is_some()))
    }

    /// Processes the next vertex in geometric order. Returns the vertex, or
    /// `None` once every vertex is processed.
    pub fn step(&mut self) -> Outcome<Option<VertexId>> {
        let Some(v) = self.pending.pop() else {
            return Outcome::Proper(None);
        };
        if !self.c.contains(v) {
            return self.step();
        }
        match self.separate_to_slot(v) {
            Outcome::Improper => Outcome::Improper,
            Outcome::Proper(slot) => {
                if let Some(at) = slot {
                    self.insert(v, at);
                }
                self.flush_trim();
                Outcome::Proper(Some(v))
            }
        }
    }

    /// Runs to completion.
    pub fn finish(mut self) -> Outcome<(Certified, ReduceStats)> {
        loop {
            match self.step() {
                Outcome::Improper => return Outcome::Improper,
                Outcome::Proper(None) => break,
                Outcome::Proper(Some(_)) => {}
            }
        }
        let all: Vec<_> = self.c.vertices().collect();
        self.trim_queue.extend(all);
        self.flush_trim();
        let stats = self.stats;
        Outcome::Proper((self.certify(Kind::Reduced), stats))
    }

    fn certify(self, kind: Kind) -> Certified {
        if self.c.marks().next().is_none() {
            return Certified::trivial();
        }
        debug_assert_eq!(self.order.len(), self.c.vertex_count());
        let (c, map) = self.c.compacted();
        let order = self.order.iter().map(|&v| map[v].unwrap()).collect();
        Certified::new_unchecked(c, Certificate::new(order, self.bits), kind)
    }

    fn normalize(mut self) -> Certified {
        if self.c.is_trivial() {
            return Certified::trivial();
        }
        let originals: Vec<_> = self.order[1..].to_vec();

        // Give every vertex a double.
        for &v in &originals {
            let p = self.pos[v];
            if self.bits.get(p) == Some(&true) {
                continue;
            }
            let s = self.sum(v);
            let plus_one = {
                let dom = CertDomain { doubles: &self.bits, unit: Some(1) };
                let ascending = std::iter::once(Digit::new(1, Sign::Plus)).chain(s.digits().iter().rev().copied());
                make_compact_ascending(&dom, ascending).expect("doubles of lower vertices already exist")
            };
            let w = self.c.add_gate();
            for d in plus_one.digits() {
                self.c.set_edge(w, self.order[d.key], d.sign);
            }
            if self.pos.len() < self.c.id_bound() {
                self.pos.resize(self.c.id_bound(), ABSENT);
            }
            let next = p + 1 < self.order.len() && self.cmp_vertices(w, self.order[p + 1]) == -1;
            self.insert_with_bits(w, p + 1, true, next);
        }

        // Compact every exponent sum and the mark sum.
        for &v in &originals {
            let s = self.sum(v);
            let dom = CertDomain { doubles: &self.bits, unit: Some(1) };
            let compact = make_compact(&dom, &s).expect("doubles of all vertices exist");
            self.rewrite_edges(v, &compact);
        }
        let marks = SignedSum::from_distinct(self.c.marks().map(|(v, s)| Digit::new(self.pos[v], s))).unwrap();
        let dom = CertDomain { doubles: &self.bits, unit: Some(1) };
        let compact = make_compact(&dom, &marks).expect("doubles of all vertices exist");
        let marked: Vec<_> = self.c.marks().map(|(v, _)| v).collect();
        for v in marked {
            self.c.set_mark(v, None);
            self.trim_queue.push(v);
        }
        for d in compact.digits() {
            self.c.set_mark(self.order[d.key], Some(d.sign));
        }

        let all: Vec<_> = self.c.vertices().collect();
        self.trim_queue.extend(all);
        self.flush_trim();
        self.certify(Kind::Normal)
    }
}

/// An equivalent reduced circuit with its certificate, or `Improper`.
pub fn reduce(c: &PowerCircuit) -> Result<Outcome<Certified>> {
    Ok(reduce_with_stats(c)?.map(|(r, _)| r))
}

pub fn reduce_with_stats(c: &PowerCircuit) -> Result<Outcome<(Certified, ReduceStats)>> {
    Ok(Reducer::new(c)?.finish())
}

/// The unique normal circuit equivalent to `c`, or `Improper`.
pub fn normalize(c: &PowerCircuit) -> Result<Outcome<Certified>> {
    Ok(match reduce(c)? {
        Outcome::Improper => Outcome::Improper,
        Outcome::Proper(r) => Outcome::Proper(normalize_reduced(r)),
    })
}

/// Normal form of an already reduced circuit.
pub fn normalize_reduced(r: Certified) -> Certified {
    if r.kind() == Kind::Normal {
        return r;
    }
    Reducer::from_certified(r).normalize()
}

/// Sign of `ℰ(c)`.
pub fn sign(c: &PowerCircuit) -> Result<Outcome<i8>> {
    Ok(reduce(c)?.map(|r| r.sign()))
}

/// Orders `ℰ(a)` against `ℰ(b)` through the sign of `a − b`.
pub fn compare_circuits(a: &PowerCircuit, b: &PowerCircuit) -> Result<Outcome<Ordering>> {
    let d = crate::arithmetic::subtract(a, b);
    Ok(sign(&d)?.map(|s| s.cmp(&0)))
}
