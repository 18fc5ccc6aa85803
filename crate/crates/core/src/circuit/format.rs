//! JSON import/export and Graphviz rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Certificate, Leaf, PowerCircuit};
use crate::error::{Error, Result};
use crate::sign::Sign;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum LeafJson {
    Zero,
    Var(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VertexJson {
    pub id: usize,
    pub leaf: Option<LeafJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeJson {
    pub from: usize,
    pub to: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MarkJson {
    pub vertex: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateJson {
    pub order: Vec<usize>,
    pub doubles: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CircuitJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
    pub marks: Vec<MarkJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateJson>,
}

fn sign_of(v: i8) -> Result<Sign> {
    match v {
        1 => Ok(Sign::Plus),
        -1 => Ok(Sign::Minus),
        _ => Err(Error::Format(format!("sign must be 1 or -1, got {v}"))),
    }
}

/// Serializes with vertex ids renumbered densely in id order.
pub fn to_json(c: &PowerCircuit, cert: Option<&Certificate>) -> String {
    let (dense, map) = c.compacted();
    let vertices = dense
        .vertices()
        .map(|v| VertexJson {
            id: v,
            leaf: dense.leaf(v).map(|l| match l {
                Leaf::Zero => LeafJson::Zero,
                Leaf::Var(x) => LeafJson::Var(x.clone()),
            }),
        })
        .collect();
    let edges = dense.edges().map(|(from, to, s)| EdgeJson { from, to, sign: s.as_i8() }).collect();
    let marks = dense.marks().map(|(vertex, s)| MarkJson { vertex, sign: s.as_i8() }).collect();
    let certificate = cert.map(|cert| CertificateJson {
        order: cert.order().iter().map(|&v| map[v].expect("certificate names a live vertex")).collect(),
        doubles: cert.doubles_string(),
    });
    let doc = CircuitJson { vertices, edges, marks, certificate };
    serde_json::to_string_pretty(&doc).expect("plain data serializes") + "\n"
}

/// Parses and validates a circuit. Vertex ids must be exactly `0..n`.
pub fn from_json(text: &str) -> Result<(PowerCircuit, Option<Certificate>)> {
    let doc: CircuitJson = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let n = doc.vertices.len();
    let mut leaves = vec![None; n];
    let mut seen = vec![false; n];
    for v in &doc.vertices {
        if v.id >= n || std::mem::replace(&mut seen[v.id], true) {
            return Err(Error::Format(format!("vertex ids must be 0..{n} without repeats; got {}", v.id)));
        }
        leaves[v.id] = v.leaf.clone();
    }
    let mut c = PowerCircuit::new();
    for leaf in leaves {
        match leaf {
            Some(LeafJson::Zero) => c.add_zero(),
            Some(LeafJson::Var(x)) => c.add_var(x),
            None => c.add_gate(),
        };
    }
    for e in &doc.edges {
        if e.from >= n || e.to >= n {
            return Err(Error::Format(format!("edge {} → {} names a missing vertex", e.from, e.to)));
        }
        if c.leaf(e.from).is_some() {
            return Err(Error::Format(format!("leaf {} has an out-edge", e.from)));
        }
        if c.set_edge(e.from, e.to, sign_of(e.sign)?).is_some() {
            return Err(Error::Format(format!("duplicate edge {} → {}", e.from, e.to)));
        }
    }
    for m in &doc.marks {
        if m.vertex >= n {
            return Err(Error::Format(format!("mark on missing vertex {}", m.vertex)));
        }
        if c.set_mark(m.vertex, Some(sign_of(m.sign)?)).is_some() {
            return Err(Error::Format(format!("vertex {} marked twice", m.vertex)));
        }
    }
    c.validate().map_err(|e| Error::Format(e.to_string()))?;
    let cert = match doc.certificate {
        None => None,
        Some(cj) => {
            let doubles = cj
                .doubles
                .chars()
                .map(|ch| match ch {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::Format(format!("doubles must be a bit string, found {ch:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            if doubles.len() != cj.order.len().saturating_sub(1) {
                return Err(Error::Format("doubles must have one bit fewer than order".into()));
            }
            Some(Certificate::new(cj.order, doubles))
        }
    };
    Ok((c, cert))
}

/// Graphviz: marked vertices black, unmarked white, signs as labels.
pub fn to_dot(c: &PowerCircuit) -> String {
    let mut s = String::from("digraph power_circuit {\n  node [shape=circle, style=filled];\n");
    for v in c.vertices() {
        let label = match c.leaf(v) {
            Some(Leaf::Zero) => "0".to_string(),
            Some(Leaf::Var(x)) => x.clone(),
            None => String::new(),
        };
        match c.mark(v) {
            Some(m) => writeln!(s, "  v{v} [label=\"{label}\", fillcolor=black, fontcolor=white, xlabel=\"{m}\"];"),
            None => writeln!(s, "  v{v} [label=\"{label}\", fillcolor=white];"),
        }
        .unwrap();
    }
    for (from, to, sign) in c.edges() {
        writeln!(s, "  v{from} -> v{to} [label=\"{sign}\"];").unwrap();
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::from_integer;
    use num_bigint::BigInt;

    #[test]
    fn round_trip_is_byte_identical() {
        let c = from_integer(&BigInt::from(35));
        let text = to_json(c.circuit(), Some(c.certificate()));
        let (back, cert) = from_json(&text).unwrap();
        assert_eq!(to_json(&back, cert.as_ref()), text);
    }

    #[test]
    fn leaf_encoding() {
        let mut c = PowerCircuit::new();
        let x = c.add_var("x");
        c.set_mark(x, Some(Sign::Minus));
        let text = to_json(&c, None);
        assert!(text.contains("\"var\": \"x\""));
        assert!(!text.contains("certificate"));
        assert_eq!(to_json(&from_json(&text).unwrap().0, None), text);
    }

    #[test]
    fn malformed_inputs() {
        assert!(from_json("{").is_err());
        let bad_sign = r#"{"vertices":[{"id":0,"leaf":"zero"}],"edges":[],"marks":[{"vertex":0,"sign":2}]}"#;
        assert!(from_json(bad_sign).is_err());
        let cycle = r#"{"vertices":[{"id":0,"leaf":null},{"id":1,"leaf":null}],
            "edges":[{"from":0,"to":1,"sign":1},{"from":1,"to":0,"sign":1}],
            "marks":[{"vertex":0,"sign":1}]}"#;
        assert!(from_json(cycle).is_err());
    }

    #[test]
    fn dot_colours() {
        let dot = to_dot(from_integer(&BigInt::from(2)).circuit());
        assert!(dot.contains("fillcolor=black"));
        assert!(dot.contains("fillcolor=white"));
        assert!(dot.contains("label=\"+\""));
    }
}
