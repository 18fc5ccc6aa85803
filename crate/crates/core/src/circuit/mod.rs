//! The power circuit data type.
//!
//! A vertex `v` with out-edges denotes `2^(Σ μ(e)·value(target))`; a leaf
//! denotes 0 or a variable. The circuit denotes the signed sum of its marked
//! vertices.

mod certified;
mod format;
mod integer;
mod oracle;
mod standard;

use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::cmp::Reverse;

use crate::error::{Error, Result};
use crate::sign::Sign;
use crate::termlang::Term;

pub use certified::{canonical_bytes, canonical_hash, check_normal, check_reduced, isomorphic, Certificate, Certified, Kind};
pub use format::{from_json, to_dot, to_json, CircuitJson};
pub use integer::{from_integer, integer_vertex_bound, one, tower_circuit};
pub use oracle::{eval_bignum, vertex_values, OracleError, DEFAULT_ORACLE_BITS};
pub use standard::{fold_zeros, make_unreachable, marked_to_sources, standardize, trim};

pub(crate) use certified::{exponent_sum, unit_position, CertDomain};
pub(crate) use standard::{fold_zeros_in_place, make_unreachable_in, trim_from};

pub type VertexId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Leaf {
    Zero,
    Var(String),
}

#[derive(Clone, Debug, Default)]
struct Vertex {
    leaf: Option<Leaf>,
    out: BTreeMap<VertexId, Sign>,
    inc: BTreeSet<VertexId>,
    mark: Option<Sign>,
}

/// A power circuit. Vertex ids are stable: removal leaves a tombstone
/// until [`PowerCircuit::compacted`] renumbers.
#[derive(Clone, Debug, Default)]
pub struct PowerCircuit {
    slots: Vec<Option<Vertex>>,
    live: usize,
    edges: usize,
}

impl PowerCircuit {
    pub fn new() -> Self {
        Self::default()
    }

    /// The circuit with a single marked zero vertex, value 0.
    pub fn trivial() -> Self {
        let mut c = Self::new();
        let z = c.add_zero();
        c.set_mark(z, Some(Sign::Plus));
        c
    }

    fn push(&mut self, v: Vertex) -> VertexId {
        self.slots.push(Some(v));
        self.live += 1;
        self.slots.len() - 1
    }

    pub fn add_zero(&mut self) -> VertexId {
        self.push(Vertex { leaf: Some(Leaf::Zero), ..Vertex::default() })
    }

    pub fn add_var(&mut self, name: impl Into<String>) -> VertexId {
        self.push(Vertex { leaf: Some(Leaf::Var(name.into())), ..Vertex::default() })
    }

    /// A vertex that will receive out-edges; until it has some, the circuit is malformed.
    pub fn add_gate(&mut self) -> VertexId {
        self.push(Vertex::default())
    }

    fn slot(&self, v: VertexId) -> &Vertex {
        self.slots
            .get(v)
            .and_then(Option::as_ref)
            .unwrap_or_else(|| panic!("vertex {v} does not exist"))
    }

    fn slot_mut(&mut self, v: VertexId) -> &mut Vertex {
        self.slots
            .get_mut(v)
            .and_then(Option::as_mut)
            .unwrap_or_else(|| panic!("vertex {v} does not exist"))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        matches!(self.slots.get(v), Some(Some(_)))
    }

    /// Inserts or relabels the edge `from → to`, returning the old label.
    ///
    /// Panics if `from` is a leaf or either vertex is missing.
    pub fn set_edge(&mut self, from: VertexId, to: VertexId, sign: Sign) -> Option<Sign> {
        assert!(self.slot(from).leaf.is_none(), "leaf {from} cannot have out-edges");
        assert!(self.contains(to), "vertex {to} does not exist");
        let old = self.slot_mut(from).out.insert(to, sign);
        if old.is_none() {
            self.slot_mut(to).inc.insert(from);
            self.edges += 1;
        }
        old
    }

    pub fn remove_edge(&mut self, from: VertexId, to: VertexId) -> Option<Sign> {
        let old = self.slot_mut(from).out.remove(&to);
        if old.is_some() {
            self.slot_mut(to).inc.remove(&from);
            self.edges -= 1;
        }
        old
    }

    pub fn edge(&self, from: VertexId, to: VertexId) -> Option<Sign> {
        self.slot(from).out.get(&to).copied()
    }

    pub fn set_mark(&mut self, v: VertexId, mark: Option<Sign>) -> Option<Sign> {
        std::mem::replace(&mut self.slot_mut(v).mark, mark)
    }

    pub fn mark(&self, v: VertexId) -> Option<Sign> {
        self.slot(v).mark
    }

    /// Removes `v` together with all incident edges.
    pub fn remove_vertex(&mut self, v: VertexId) {
        let vx = self.slots[v].take().unwrap_or_else(|| panic!("vertex {v} does not exist"));
        for &t in vx.out.keys() {
            if t != v {
                self.slot_mut(t).inc.remove(&v);
            }
        }
        for &s in &vx.inc {
            self.slot_mut(s).out.remove(&v);
        }
        self.edges -= vx.out.len() + vx.inc.len();
        self.live -= 1;
    }

    pub fn leaf(&self, v: VertexId) -> Option<&Leaf> {
        self.slot(v).leaf.as_ref()
    }

    pub fn is_zero_leaf(&self, v: VertexId) -> bool {
        self.slot(v).leaf == Some(Leaf::Zero)
    }

    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = (VertexId, Sign)> + '_ {
        self.slot(v).out.iter().map(|(&t, &s)| (t, s))
    }

    pub fn in_edges(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.slot(v).inc.iter().copied()
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.slot(v).out.len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.slot(v).inc.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.slots.iter().enumerate().filter(|(_, s)| s.is_some()).map(|(i, _)| i)
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, Sign)> + '_ {
        self.vertices().flat_map(move |v| self.out_edges(v).map(move |(t, s)| (v, t, s)))
    }

    pub fn marks(&self) -> impl Iterator<Item = (VertexId, Sign)> + '_ {
        self.vertices().filter_map(move |v| self.slot(v).mark.map(|s| (v, s)))
    }

    pub fn vertex_count(&self) -> usize {
        self.live
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn mark_count(&self) -> usize {
        self.marks().count()
    }

    /// `|𝒫| = |V| + |E|`.
    pub fn size(&self) -> usize {
        self.live + self.edges
    }

    /// One past the largest id ever issued.
    pub fn id_bound(&self) -> usize {
        self.slots.len()
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.vertices()
            .filter_map(|v| match self.leaf(v) {
                Some(Leaf::Var(x)) => Some(x.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn is_constant(&self) -> bool {
        self.vertices().all(|v| !matches!(self.leaf(v), Some(Leaf::Var(_))))
    }

    pub fn require_constant(&self) -> Result<()> {
        match self.variables().into_iter().next() {
            Some(x) => Err(Error::VariableLeaf(x)),
            None => Ok(()),
        }
    }

    /// A single marked zero vertex.
    pub fn is_trivial(&self) -> bool {
        self.live == 1 && self.vertices().all(|v| self.is_zero_leaf(v) && self.mark(v).is_some())
    }

    pub fn zero_leaves(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(move |&v| self.is_zero_leaf(v))
    }

    /// Renumbers live vertices densely in id order. The returned map sends
    /// old ids to new ones.
    pub fn compacted(&self) -> (PowerCircuit, Vec<Option<VertexId>>) {
        let mut map = vec![None; self.slots.len()];
        for (new, old) in self.vertices().enumerate() {
            map[old] = Some(new);
        }
        let slots = self
            .slots
            .iter()
            .flatten()
            .map(|vx| Vertex {
                leaf: vx.leaf.clone(),
                out: vx.out.iter().map(|(&t, &s)| (map[t].unwrap(), s)).collect(),
                inc: vx.inc.iter().map(|&t| map[t].unwrap()).collect(),
                mark: vx.mark,
            })
            .map(Some)
            .collect();
        (PowerCircuit { slots, live: self.live, edges: self.edges }, map)
    }

    pub fn is_dense(&self) -> bool {
        self.live == self.slots.len()
    }

    /// Copies `other` into `self` as a disjoint component, marks included.
    /// Returns the id map from `other`.
    pub fn append(&mut self, other: &PowerCircuit) -> Vec<Option<VertexId>> {
        let base = self.slots.len();
        let mut map = vec![None; other.slots.len()];
        for (next, v) in (base..).zip(other.vertices()) {
            map[v] = Some(next);
        }
        for vx in other.slots.iter().flatten() {
            self.slots.push(Some(Vertex {
                leaf: vx.leaf.clone(),
                out: vx.out.iter().map(|(&t, &s)| (map[t].unwrap(), s)).collect(),
                inc: vx.inc.iter().map(|&t| map[t].unwrap()).collect(),
                mark: vx.mark,
            }));
        }
        self.live += other.live;
        self.edges += other.edges;
        map
    }

    /// Checks the structural invariants: labels exactly on sinks, marks
    /// present, no cycles.
    pub fn validate(&self) -> Result<()> {
        for v in self.vertices() {
            let vx = self.slot(v);
            match (&vx.leaf, vx.out.is_empty()) {
                (None, true) => return Err(Error::Malformed(format!("vertex {v} has no out-edges and no leaf label"))),
                (Some(_), false) => return Err(Error::Malformed(format!("leaf {v} has out-edges"))),
                _ => {}
            }
        }
        if self.marks().next().is_none() {
            return Err(Error::Malformed("no marked vertex".into()));
        }
        geometric_order(self).map(|_| ())
    }

    /// Vertices reachable from some marked vertex, as a membership table over ids.
    pub fn reachable_from_marks(&self) -> Vec<bool> {
        let mut seen = vec![false; self.slots.len()];
        let mut stack: Vec<_> = self.marks().map(|(v, _)| v).collect();
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            stack.extend(self.slot(v).out.keys().copied().filter(|&t| !seen[t]));
        }
        seen
    }

    /// Whether a directed path leads from `from` to `to` (length zero counts).
    pub fn reaches(&self, from: VertexId, to: VertexId) -> bool {
        let mut seen = BTreeSet::new();
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            if v == to {
                return true;
            }
            if seen.insert(v) {
                stack.extend(self.slot(v).out.keys().copied());
            }
        }
        false
    }
}

/// A topological order in which every edge points from a later vertex to an
/// earlier one. Ties go to the smaller id, so the order is deterministic.
pub fn geometric_order(c: &PowerCircuit) -> Result<Vec<VertexId>> {
    let mut pending: Vec<usize> = vec![0; c.id_bound()];
    let mut ready = BinaryHeap::new();
    for v in c.vertices() {
        pending[v] = c.out_degree(v);
        if pending[v] == 0 {
            ready.push(Reverse(v));
        }
    }
    let mut order = Vec::with_capacity(c.vertex_count());
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for u in c.in_edges(v) {
            pending[u] -= 1;
            if pending[u] == 0 {
                ready.push(Reverse(u));
            }
        }
    }
    if order.len() == c.vertex_count() {
        Ok(order)
    } else {
        Err(Error::Cycle)
    }
}

/// The term `𝒯_𝒫`, children summed in ascending id order.
pub fn term_of(c: &PowerCircuit) -> Result<Term> {
    let order = geometric_order(c)?;
    let mut terms: Vec<Option<Term>> = vec![None; c.id_bound()];
    for &v in &order {
        let t = match c.leaf(v) {
            Some(Leaf::Zero) => Term::int(0),
            Some(Leaf::Var(x)) => Term::Var(x.clone()),
            None => {
                let exponent = signed_sum_term(c.out_edges(v).map(|(u, s)| (terms[u].clone().unwrap(), s)));
                Term::pow2(exponent)
            }
        };
        terms[v] = Some(t);
    }
    Ok(signed_sum_term(c.marks().map(|(v, s)| (terms[v].clone().unwrap(), s))))
}

fn signed_sum_term(parts: impl Iterator<Item = (Term, Sign)>) -> Term {
    let mut acc: Option<Term> = None;
    for (t, s) in parts {
        acc = Some(match (acc, s) {
            (None, Sign::Plus) => t,
            (None, Sign::Minus) => Term::Sub(Box::new(Term::int(0)), Box::new(t)),
            (Some(a), Sign::Plus) => Term::Add(Box::new(a), Box::new(t)),
            (Some(a), Sign::Minus) => Term::Sub(Box::new(a), Box::new(t)),
        });
    }
    acc.unwrap_or_else(|| Term::int(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> (PowerCircuit, [VertexId; 3]) {
        let mut c = PowerCircuit::new();
        let z = c.add_zero();
        let a = c.add_gate();
        let b = c.add_gate();
        c.set_edge(a, z, Sign::Plus);
        c.set_edge(b, a, Sign::Plus);
        c.set_mark(b, Some(Sign::Plus));
        (c, [z, a, b])
    }

    #[test]
    fn edge_bookkeeping() {
        let (mut c, [z, a, b]) = chain();
        assert_eq!(c.edge_count(), 2);
        assert_eq!(c.set_edge(b, a, Sign::Minus), Some(Sign::Plus));
        assert_eq!(c.edge_count(), 2);
        c.set_edge(b, z, Sign::Plus);
        assert_eq!(c.in_degree(z), 2);
        c.remove_vertex(a);
        assert_eq!(c.edge_count(), 1);
        assert_eq!(c.vertex_count(), 2);
        assert!(!c.is_dense());
        let (d, map) = c.compacted();
        assert!(d.is_dense());
        assert_eq!(map[b], Some(1));
        assert_eq!(d.edge(1, 0), Some(Sign::Plus));
    }

    #[test]
    fn geometric_order_on_chain() {
        let (c, ids) = chain();
        assert_eq!(geometric_order(&c).unwrap(), ids.to_vec());
    }

    #[test]
    fn cycles_are_rejected() {
        let (mut c, [_, a, b]) = chain();
        c.set_edge(a, b, Sign::Plus);
        assert_eq!(geometric_order(&c), Err(Error::Cycle));
        assert_eq!(c.validate(), Err(Error::Cycle));
    }

    #[test]
    fn term_rendering() {
        assert_eq!(term_of(&PowerCircuit::trivial()).unwrap().to_string(), "0");
        let mut c = PowerCircuit::new();
        let z = c.add_zero();
        let v = c.add_gate();
        c.set_edge(v, z, Sign::Plus);
        c.set_mark(v, Some(Sign::Plus));
        assert_eq!(term_of(&c).unwrap().to_string(), "2^0");
        let (c, _) = chain();
        assert_eq!(term_of(&c).unwrap().to_string(), "2^(2^0)");
    }

    #[test]
    fn validation_finds_unlabeled_sinks() {
        let mut c = PowerCircuit::new();
        let g = c.add_gate();
        c.set_mark(g, Some(Sign::Plus));
        assert!(matches!(c.validate(), Err(Error::Malformed(_))));
    }
}
