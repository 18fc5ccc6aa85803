//! Value-preserving clean-up passes: zero folding, trimming, standard form,
//! marked vertices to sources, and breaking reachability between equal vertices.

use super::{PowerCircuit, VertexId};
use crate::error::{Error, Result};
use crate::sign::Sign;

/// Merges every zero leaf into the first one. Returns the survivor.
pub(crate) fn fold_zeros_in_place(c: &mut PowerCircuit) -> Option<VertexId> {
    let zeros: Vec<_> = c.zero_leaves().collect();
    let (&z, rest) = zeros.split_first()?;
    for &other in rest {
        let parents: Vec<_> = c.in_edges(other).collect();
        for u in parents {
            let s = c.remove_edge(u, other).unwrap();
            if c.edge(u, z).is_none() {
                c.set_edge(u, z, s);
            }
        }
        if let Some(s) = c.mark(other) {
            if c.mark(z).is_none() {
                c.set_mark(z, Some(s));
            }
        }
        c.remove_vertex(other);
    }
    Some(z)
}

pub fn fold_zeros(c: &PowerCircuit) -> PowerCircuit {
    let mut c = c.clone();
    fold_zeros_in_place(&mut c);
    c.compacted().0
}

/// Repeatedly deletes unmarked sources, starting from `work`. Returns what was removed.
pub(crate) fn trim_from(c: &mut PowerCircuit, mut work: Vec<VertexId>) -> Vec<VertexId> {
    let mut removed = Vec::new();
    while let Some(v) = work.pop() {
        if !c.contains(v) || c.mark(v).is_some() || c.in_degree(v) > 0 {
            continue;
        }
        work.extend(c.out_edges(v).map(|(t, _)| t));
        c.remove_vertex(v);
        removed.push(v);
    }
    removed
}

/// Keeps exactly the vertices reachable from a marked vertex.
pub fn trim(c: &PowerCircuit) -> PowerCircuit {
    let mut c = c.clone();
    let all: Vec<_> = c.vertices().collect();
    trim_from(&mut c, all);
    c.compacted().0
}

/// Brings `c` into standard form: one unmarked zero vertex, no edge to zero
/// from a vertex with other out-edges, trimmed. If every mark sits on a zero
/// leaf the result is the trivial circuit.
pub fn standardize(c: &PowerCircuit) -> PowerCircuit {
    if c.marks().all(|(v, _)| c.is_zero_leaf(v)) {
        return PowerCircuit::trivial();
    }
    let mut c = c.clone();
    if let Some(z) = fold_zeros_in_place(&mut c) {
        c.set_mark(z, None);
        let parents: Vec<_> = c.in_edges(z).collect();
        for u in parents {
            if c.out_degree(u) > 1 {
                c.remove_edge(u, z);
            }
        }
    }
    let all: Vec<_> = c.vertices().collect();
    trim_from(&mut c, all);
    c.compacted().0
}

/// Gives every marked vertex with incoming edges an unmarked twin that keeps
/// the incoming edges, so that all marked vertices become sources.
pub fn marked_to_sources(c: &PowerCircuit) -> PowerCircuit {
    let mut c = c.clone();
    let busy: Vec<_> = c.marks().filter(|&(v, _)| c.in_degree(v) > 0).collect();
    for (v, s) in busy {
        let copy = match c.leaf(v).cloned() {
            Some(super::Leaf::Zero) => c.add_zero(),
            Some(super::Leaf::Var(x)) => c.add_var(x),
            None => {
                let g = c.add_gate();
                let out: Vec<_> = c.out_edges(v).collect();
                for (t, sign) in out {
                    c.set_edge(g, t, sign);
                }
                g
            }
        };
        c.set_mark(v, None);
        c.set_mark(copy, Some(s));
    }
    c.compacted().0
}

fn replace_out_edges(c: &mut PowerCircuit, target: VertexId, source: VertexId) -> Vec<VertexId> {
    let old: Vec<_> = c.out_edges(target).map(|(t, _)| t).collect();
    for &t in &old {
        c.remove_edge(target, t);
    }
    let new: Vec<(VertexId, Sign)> = c.out_edges(source).collect();
    for (t, s) in new {
        c.set_edge(target, t, s);
    }
    old
}

/// In place; returns vertices that lost an incoming edge.
pub(crate) fn make_unreachable_in(c: &mut PowerCircuit, vi: VertexId, vj: VertexId) -> Vec<VertexId> {
    if c.reaches(vj, vi) {
        replace_out_edges(c, vj, vi)
    } else if c.reaches(vi, vj) {
        replace_out_edges(c, vi, vj)
    } else {
        Vec::new()
    }
}

/// For two distinct gates of equal value, copies the out-edges of the lower one
/// onto the one that reaches it, so neither reaches the other afterwards.
///
/// The circuit is not trimmed, so vertex ids are preserved.
pub fn make_unreachable(c: &PowerCircuit, vi: VertexId, vj: VertexId) -> Result<PowerCircuit> {
    for v in [vi, vj] {
        if !c.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
        if c.leaf(v).is_some() {
            return Err(Error::Precondition(format!("vertex {v} is a leaf")));
        }
    }
    if vi == vj {
        return Err(Error::Precondition("the two vertices coincide".into()));
    }
    let mut c = c.clone();
    make_unreachable_in(&mut c, vi, vj);
    Ok(c)
}
