//! Sparsification of linear codes over prime fields.
//!
//! A code is the column span of an `n x k` generator matrix. A sparsifier
//! keeps a weighted subset of coordinates so that every codeword's weighted
//! Hamming weight is preserved within a factor `1 +- eps`. The crate provides
//! the counting and decomposition machinery behind such sparsifiers, the
//! sampling pipeline itself, exhaustive exact verification, and reductions
//! from graph cuts, hypergraph cuts, Cayley-graph spectra and affine CSPs.

pub mod cayley;
pub mod cli;
pub mod code;
pub mod corpus;
pub mod counting;
pub mod csp;
pub mod error;
pub mod field;
pub mod graphs;
pub mod hypergraphs;
pub mod io;
pub mod numeric;
pub mod rng;
pub mod sparsify;

pub use code::{CoordinateWeights, GeneratorMatrix, Sparsifier, VerificationReport};
pub use error::{Error, Result};
pub use field::PrimeField;
pub use numeric::Rational;
