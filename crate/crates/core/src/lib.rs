//! Exact toolkit for the word algebras `A(m,w)` and their unital extensions.

pub mod algebra;
pub mod error;
pub mod phi;
pub mod polyspace;
pub mod real;
pub mod reptheory;
pub mod witness;
pub mod words;

pub use error::{Error, Result};
