//! Power circuits: integers as DAGs whose vertices denote powers of two, with
//! reduction to a unique normal form, arithmetic, comparison without
//! decompression, and a decision procedure for quantifier-free formulas over
//! `+`, `−`, `x·2^y`, `x·2^(−y)` and `≤`.
//!
//! ```
//! use power_circuits::arithmetic::{add, exp2, subtract};
//! use power_circuits::circuit::one;
//! use power_circuits::reduction::sign;
//!
//! // tower₂(50) + 1 − tower₂(50), never expanded.
//! let mut t = one();
//! for _ in 0..50 {
//!     t = exp2(&t);
//! }
//! let d = subtract(&add(&t, &one()), &t);
//! assert_eq!(sign(&d).unwrap().proper(), Some(1));
//! ```

pub mod arithmetic;
pub mod circuit;
pub mod demos;
pub mod error;
pub mod generate;
pub mod reduction;
pub mod sign;
pub mod signed_binary;
pub mod termlang;

pub use circuit::{Certified, PowerCircuit};
pub use error::{Error, Outcome, Result};
pub use sign::Sign;
