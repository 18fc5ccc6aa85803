//! Arbitrary-precision evaluation, used as a reference for everything else.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::{geometric_order, Leaf, PowerCircuit, VertexId};

/// Default limit on the bit length of any intermediate value.
pub const DEFAULT_ORACLE_BITS: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("improper circuit: a vertex has a negative exponent")]
    Improper,
    #[error("value needs more than {0} bits")]
    BudgetExceeded(u64),
    #[error("variable leaf `{0}`")]
    VariableLeaf(String),
    #[error("circuit contains a cycle")]
    Cycle,
}

/// `ℰ(v)` for every vertex reachable from a mark.
pub fn vertex_values(c: &PowerCircuit, budget_bits: u64) -> Result<BTreeMap<VertexId, BigInt>, OracleError> {
    let reachable = c.reachable_from_marks();
    let order = geometric_order(c).map_err(|_| OracleError::Cycle)?;
    let mut values = BTreeMap::new();
    for v in order.into_iter().filter(|&v| reachable[v]) {
        let value = match c.leaf(v) {
            Some(Leaf::Zero) => BigInt::zero(),
            Some(Leaf::Var(x)) => return Err(OracleError::VariableLeaf(x.clone())),
            None => {
                let exponent: BigInt = c
                    .out_edges(v)
                    .map(|(t, s)| BigInt::from(s.as_i8()) * &values[&t])
                    .sum();
                if exponent < BigInt::zero() {
                    return Err(OracleError::Improper);
                }
                match exponent.to_u64() {
                    Some(e) if e < budget_bits => BigInt::from(1) << e as usize,
                    _ => return Err(OracleError::BudgetExceeded(budget_bits)),
                }
            }
        };
        values.insert(v, value);
    }
    Ok(values)
}

/// `ℰ(𝒫)`, or why it cannot be computed.
///
/// Properness is judged on the vertices reachable from marks; unreachable
/// vertices do not contribute to the value and are ignored.
pub fn eval_bignum(c: &PowerCircuit, budget_bits: u64) -> Result<BigInt, OracleError> {
    let values = vertex_values(c, budget_bits)?;
    Ok(c.marks().map(|(v, s)| BigInt::from(s.as_i8()) * &values[&v]).sum())
}
