//! Computer algebra for genus-2 curves `y^2 + h(x) y = f(x)` over binary fields,
//! with tools to study how Frobenius pull-back acts on rank-2 bundles.

// In characteristic 2 subtraction is addition and division is multiplication
// by an inverse, so operator impls legitimately use the "wrong" operator.
#![allow(clippy::suspicious_arithmetic_impl, clippy::suspicious_op_assign_impl)]

pub mod cartier;
pub mod curve;
pub mod error;
pub mod frobext;
pub mod galois;
pub mod higgs;
pub mod jacobian;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod rrspace;
pub mod scans;
pub mod selftest;
pub mod series;

pub use error::{Error, Result};
