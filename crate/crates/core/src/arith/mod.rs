//! Exact and certified arithmetic: rationals, polynomials, dense linear
//! algebra, cyclotomic fields, subfields and complex balls.

pub mod ball;
pub mod cyclotomic;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod subfield;

pub use cyclotomic::{ArithError, CyclotomicField, CyclotomicNumber, EmbeddingIndex, Sign};
pub use linalg::{Matrix, QMatrix, Scalar};
pub use poly::QPoly;
pub use rational::Q;
pub use subfield::SubfieldSpec;
