//! Exact verification toolkit for group-invariant decompositions of the
//! 3×3 matrix multiplication tensor.

pub mod arith;
pub mod brent;
pub mod catalog;
pub mod error;
pub mod grammar;
pub mod group;
pub mod invariants;
pub mod poly;
pub mod prover;
pub mod tensor;

pub use arith::{Cyclotomic, Rational};
pub use error::{Error, Result};
pub use poly::{Letter, Monomial, ParamId, Polynomial, Var};
