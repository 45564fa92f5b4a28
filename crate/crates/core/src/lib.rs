//! Exact computation of the Arf closure of an algebroid curve given through
//! a power-series parametrization with any number of branches.
//!
//! The crate produces the full blow-up (Lipman) sequence, the multiplicity
//! and minimal trees, the value semigroup of the closure (conductor and
//! small elements), a finite linear presentation of the closure, and degree
//! bounds that let the input be truncated without changing any of it.

pub mod algebra;
pub mod bounds;
pub mod closure;
pub mod curve;
pub mod error;
pub mod lipman;
pub mod locality;
pub mod parse;
pub mod pipeline;
pub mod render;
pub mod tree;

pub use error::{Error, Result};
