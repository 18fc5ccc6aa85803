//! Certificates (the ℰ-sorted vertex list with doubles bits), structural
//! checks for reduced and normal circuits, and canonical serialization.

use sha2::{Digest, Sha256};

use super::{Leaf, PowerCircuit, VertexId};
use crate::error::{Error, Result};
use crate::sign::Sign;
use crate::signed_binary::{compare, Digit, KeyDomain, SignedSum};

const CANONICAL_VERSION: u8 = 1;

/// Vertices in strictly increasing value order; `doubles[i]` says the value
/// at position `i+1` is twice the value at `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Certificate {
    order: Vec<VertexId>,
    doubles: Vec<bool>,
}

impl Certificate {
    /// Panics unless `doubles` has one entry fewer than `order` (or both are empty).
    pub fn new(order: Vec<VertexId>, doubles: Vec<bool>) -> Self {
        assert_eq!(doubles.len(), order.len().saturating_sub(1), "one doubles bit per adjacent pair");
        Certificate { order, doubles }
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn doubles(&self) -> &[bool] {
        &self.doubles
    }

    /// Position of each vertex id, `usize::MAX` for ids not listed.
    pub fn positions(&self, id_bound: usize) -> Vec<usize> {
        let mut pos = vec![usize::MAX; id_bound];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    pub fn doubles_string(&self) -> String {
        self.doubles.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Reduced,
    Normal,
}

/// A dense circuit together with a certificate it has been checked against.
#[derive(Clone, Debug)]
pub struct Certified {
    circuit: PowerCircuit,
    certificate: Certificate,
    kind: Kind,
}

impl Certified {
    pub(crate) fn new_unchecked(circuit: PowerCircuit, certificate: Certificate, kind: Kind) -> Self {
        debug_assert!(circuit.is_dense());
        Certified { circuit, certificate, kind }
    }

    /// Checks the circuit against the certificate before accepting the claim.
    pub fn verify(circuit: PowerCircuit, certificate: Certificate, kind: Kind) -> Result<Self> {
        let (circuit, certificate) = if circuit.is_dense() {
            (circuit, certificate)
        } else {
            let (dense, map) = circuit.compacted();
            let order = certificate
                .order
                .iter()
                .map(|&v| map.get(v).copied().flatten().ok_or(Error::UnknownVertex(v)))
                .collect::<Result<_>>()?;
            (dense, Certificate::new(order, certificate.doubles))
        };
        match kind {
            Kind::Reduced => check_reduced(&circuit, &certificate),
            Kind::Normal => check_normal(&circuit, &certificate),
        }
        .map_err(Error::Malformed)?;
        Ok(Certified { circuit, certificate, kind })
    }

    pub fn trivial() -> Self {
        Certified::new_unchecked(PowerCircuit::trivial(), Certificate::new(vec![0], vec![]), Kind::Normal)
    }

    pub fn circuit(&self) -> &PowerCircuit {
        &self.circuit
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn into_circuit(self) -> PowerCircuit {
        self.circuit
    }

    pub fn into_parts(self) -> (PowerCircuit, Certificate, Kind) {
        (self.circuit, self.certificate, self.kind)
    }

    pub fn is_trivial(&self) -> bool {
        self.circuit.is_trivial()
    }

    /// Sign of the value, read off the highest marked vertex.
    pub fn sign(&self) -> i8 {
        if self.is_trivial() {
            return 0;
        }
        self.certificate
            .order
            .iter()
            .rev()
            .find_map(|&v| self.circuit.mark(v))
            .map_or(0, Sign::as_i8)
    }
}

/// Exponent keys given by certificate positions.
pub(crate) struct CertDomain<'a> {
    pub(crate) doubles: &'a [bool],
    pub(crate) unit: Option<usize>,
}

impl KeyDomain for CertDomain<'_> {
    type Key = usize;

    fn is_double(&self, hi: usize, lo: usize) -> bool {
        hi == lo + 1 && self.doubles.get(lo).copied().unwrap_or(false)
    }
    fn half(&self, k: usize) -> Option<usize> {
        (k > 0 && self.doubles[k - 1]).then(|| k - 1)
    }
    fn double(&self, k: usize) -> Option<usize> {
        self.doubles.get(k).copied().unwrap_or(false).then_some(k + 1)
    }
    fn is_unit(&self, k: usize) -> bool {
        self.unit == Some(k)
    }
}

/// Position of the vertex valued 1, if the order has one: the first non-zero
/// vertex, provided its only child is a zero leaf.
pub(crate) fn unit_position(c: &PowerCircuit, order: &[VertexId]) -> Option<usize> {
    let p = order.iter().position(|&v| !c.is_zero_leaf(v))?;
    let v = order[p];
    let only_zero = c.out_degree(v) > 0 && c.out_edges(v).all(|(t, _)| c.is_zero_leaf(t));
    only_zero.then_some(p)
}

/// The exponent sum of `v` keyed by positions; edges to zero contribute nothing.
pub(crate) fn exponent_sum(c: &PowerCircuit, pos: &[usize], v: VertexId) -> SignedSum<usize> {
    let digits = c
        .out_edges(v)
        .filter(|&(t, _)| !c.is_zero_leaf(t))
        .map(|(t, s)| Digit::new(pos[t], s));
    SignedSum::from_distinct(digits).expect("distinct targets have distinct positions")
}

fn check_order_covers(c: &PowerCircuit, cert: &Certificate) -> std::result::Result<Vec<usize>, String> {
    if cert.order.len() != c.vertex_count() {
        return Err(format!("certificate lists {} vertices, circuit has {}", cert.order.len(), c.vertex_count()));
    }
    let mut pos = vec![usize::MAX; c.id_bound()];
    for (i, &v) in cert.order.iter().enumerate() {
        if !c.contains(v) {
            return Err(format!("certificate names missing vertex {v}"));
        }
        if pos[v] != usize::MAX {
            return Err(format!("vertex {v} listed twice"));
        }
        pos[v] = i;
    }
    Ok(pos)
}

/// Structural check of the reduced-circuit conditions against a certificate:
/// standard form, increasing values along the order with correct doubles bits,
/// and no superfluous edge pairs.
pub fn check_reduced(c: &PowerCircuit, cert: &Certificate) -> std::result::Result<(), String> {
    let pos = check_order_covers(c, cert)?;
    if c.is_trivial() {
        return Ok(());
    }
    if c.marks().next().is_none() {
        return Err("no marked vertex".into());
    }
    let zeros: Vec<_> = c.zero_leaves().collect();
    match zeros.as_slice() {
        [z] if pos[*z] == 0 => {
            if c.mark(*z).is_some() {
                return Err("zero vertex is marked".into());
            }
        }
        [] => return Err("no zero vertex".into()),
        [_] => return Err("zero vertex is not first in the order".into()),
        _ => return Err("more than one zero vertex".into()),
    }
    for v in c.vertices() {
        match c.leaf(v) {
            Some(Leaf::Var(x)) => return Err(format!("variable leaf {x}")),
            Some(Leaf::Zero) => {}
            None if c.out_degree(v) == 0 => return Err(format!("vertex {v} has no out-edges")),
            None => {}
        }
        if c.mark(v).is_none() && c.in_degree(v) == 0 {
            return Err(format!("unmarked source {v}"));
        }
        if c.out_degree(v) > 1 && c.out_edges(v).any(|(t, _)| c.is_zero_leaf(t)) {
            return Err(format!("vertex {v} has a redundant edge to zero"));
        }
        if let Some((t, _)) = c.out_edges(v).find(|&(t, _)| pos[t] >= pos[v]) {
            return Err(format!("edge {v} → {t} does not point down the order"));
        }
    }
    let dom = CertDomain { doubles: &cert.doubles, unit: unit_position(c, &cert.order) };
    if dom.unit != Some(1) {
        return Err("second vertex is not valued 1".into());
    }
    if cert.doubles[0] {
        return Err("doubles bit set after the zero vertex".into());
    }
    let sums: Vec<_> = cert.order.iter().map(|&v| exponent_sum(c, &pos, v)).collect();
    for i in 1..cert.order.len() {
        if sums[i].has_superfluous(&dom) {
            return Err(format!("vertex {} has a superfluous edge pair", cert.order[i]));
        }
        if sums[i].digits().first().is_some_and(|d| d.sign == Sign::Minus) {
            return Err(format!("vertex {} has a negative exponent", cert.order[i]));
        }
        if i + 1 < cert.order.len() {
            let expected = if cert.doubles[i] { -1 } else { -2 };
            if compare(&dom, &sums[i], &sums[i + 1]) != expected {
                return Err(format!("positions {i} and {} are not ordered as certified", i + 1));
            }
        }
    }
    Ok(())
}

/// [`check_reduced`] plus compactness of every exponent sum and of the mark sum.
pub fn check_normal(c: &PowerCircuit, cert: &Certificate) -> std::result::Result<(), String> {
    check_reduced(c, cert)?;
    if c.is_trivial() {
        return Ok(());
    }
    let pos = cert.positions(c.id_bound());
    let dom = CertDomain { doubles: &cert.doubles, unit: Some(1) };
    for &v in &cert.order {
        if !exponent_sum(c, &pos, v).is_compact(&dom) {
            return Err(format!("exponent sum of vertex {v} is not compact"));
        }
        if c.out_edges(v).any(|(t, s)| c.is_zero_leaf(t) && s == Sign::Minus) {
            return Err(format!("vertex {v} has a negative edge to zero"));
        }
    }
    let marks = SignedSum::from_distinct(c.marks().map(|(v, s)| Digit::new(pos[v], s))).unwrap();
    if !marks.is_compact(&dom) {
        return Err("mark sum is not compact".into());
    }
    Ok(())
}

/// Version byte, vertex count, then per vertex in certificate order: the
/// out-degree, `(target position, sign)` pairs sorted by position, and the mark.
/// Integers are unsigned LEB128; signs are `0` for + and `1` for −; marks are
/// `0` none, `1` plus, `2` minus.
pub fn canonical_bytes(c: &Certified) -> Result<Vec<u8>> {
    if c.kind != Kind::Normal {
        return Err(Error::MissingCertificate("normal"));
    }
    let circuit = &c.circuit;
    let pos = c.certificate.positions(circuit.id_bound());
    let mut out = vec![CANONICAL_VERSION];
    let leb = |out: &mut Vec<u8>, n: usize| {
        leb128::write::unsigned(out, n as u64).expect("writing to a Vec cannot fail");
    };
    leb(&mut out, circuit.vertex_count());
    for &v in &c.certificate.order {
        let mut edges: Vec<_> = circuit.out_edges(v).map(|(t, s)| (pos[t], s)).collect();
        edges.sort_unstable_by_key(|&(p, _)| p);
        leb(&mut out, edges.len());
        for (p, s) in edges {
            leb(&mut out, p);
            out.push(if s.is_plus() { 0 } else { 1 });
        }
        out.push(match circuit.mark(v) {
            None => 0,
            Some(Sign::Plus) => 1,
            Some(Sign::Minus) => 2,
        });
    }
    Ok(out)
}

/// SHA-256 of [`canonical_bytes`], hex encoded.
pub fn canonical_hash(c: &Certified) -> Result<String> {
    Ok(hex::encode(Sha256::digest(canonical_bytes(c)?)))
}

/// Isomorphism of normal circuits. For constant normal circuits this is
/// equality of values.
pub fn isomorphic(a: &Certified, b: &Certified) -> Result<bool> {
    Ok(canonical_bytes(a)? == canonical_bytes(b)?)
}
