pub mod automaton;
pub mod commands;
pub mod config;
pub mod coxeter;
pub mod error;
pub mod field;
pub mod hecke;
pub mod renewal;
pub mod stats;
pub mod walk;

pub use coxeter::{Classification, CoxeterSystem, Gen, GroupElement, Root, TriangleClass, Word};
pub use error::{Error, Result};
pub use field::{AlgebraicField, FieldScalar, Order};
