//! Tower circuits and the two growth demonstrations: products of tower
//! circuits need exponentially many marks, and dividing by 3 needs
//! super-exponentially many vertices.

use num_bigint::BigInt;
use num_traits::One;

use crate::arithmetic::{exp2, multiply};
use crate::circuit::{from_integer, one, tower_circuit, Certified, PowerCircuit};
use crate::error::{Error, Result};
use crate::reduction::normalize;
use crate::signed_binary::compact_of_integer;

/// `tower₂(k)` built by `k` applications of [`exp2`] to 1: `k + 2` vertices.
pub fn tower(k: usize) -> PowerCircuit {
    (0..k).fold(one(), |c, _| exp2(&c))
}

/// `tower₂(k)` as a machine integer, when it fits.
pub fn tower_u64(k: usize) -> Option<u64> {
    let mut v: u64 = 1;
    for _ in 0..k {
        v = 1u64.checked_shl(u32::try_from(v).ok()?)?;
    }
    Some(v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupRow {
    pub n: usize,
    pub marks: usize,
    pub lower_bound: u64,
    pub vertices: usize,
    pub edges: usize,
}

/// Normal form of `𝒫_4 · 𝒫_5 · … · 𝒫_n`, normalizing after each factor.
pub fn blowup_product(n: usize, max_vertices: usize) -> Result<Certified> {
    if n < 4 {
        return Err(Error::Precondition("the product starts at 𝒫_4".into()));
    }
    let mut acc = normalize(&tower_circuit(4))?.expect_proper("tower circuits are proper");
    for k in 5..=n {
        let p = multiply(acc.circuit(), &tower_circuit(k))?;
        if p.vertex_count() > max_vertices {
            return Err(Error::VertexBudget { vertices: p.vertex_count(), limit: max_vertices });
        }
        acc = normalize(&p)?.expect_proper("products of proper circuits are proper");
    }
    Ok(acc)
}

pub fn blowup(n: usize, max_vertices: usize) -> Result<BlowupRow> {
    let c = blowup_product(n, max_vertices)?;
    Ok(BlowupRow {
        n,
        marks: c.circuit().mark_count(),
        lower_bound: 1u64 << (n - 3),
        vertices: c.circuit().vertex_count(),
        edges: c.circuit().edge_count(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Div3Row {
    pub j: usize,
    /// `i = tower₂(j)`
    pub i: u64,
    /// Terms in the compact form of `(4^{i+1} − 1)/3`, a lower bound on the
    /// vertices of any circuit for it.
    pub compact_terms: usize,
    /// Vertices of the normal circuit for `4^{i+1} − 1`.
    pub numerator_vertices: usize,
}

/// Largest `j` for which [`div3`] expands the quotient.
pub const DIV3_MAX_J: usize = 4;

pub fn div3(j: usize) -> Result<Div3Row> {
    if j > DIV3_MAX_J {
        return Err(Error::Precondition(format!("j ≤ {DIV3_MAX_J}: the quotient has about 2·tower₂(j) bits")));
    }
    let i = tower_u64(j).unwrap();
    let numerator = (BigInt::one() << (2 * i + 2)) - 1;
    let quotient = &numerator / 3;
    Ok(Div3Row {
        j,
        i,
        compact_terms: compact_of_integer(&quotient).len(),
        numerator_vertices: from_integer(&numerator).circuit().vertex_count(),
    })
}
