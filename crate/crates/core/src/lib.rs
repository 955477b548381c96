//! Pointless and maximal hyperelliptic curves over odd finite fields.
//!
//! A curve `y^2 = f(x)` over `F_q` with `2q + 2` rational points has a
//! quadratic twist with none. This crate builds such curves from explicit
//! trinomial families, certifies them by squarefree tests and exact point
//! counts, and tabulates for each small prime the genera its constructions
//! cannot reach.

pub mod algebra;
pub mod arith;
pub mod census;
pub mod cli;
pub mod constructions;
pub mod curve;
pub mod error;
pub mod json;

pub use error::{Error, Result};
