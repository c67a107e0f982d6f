//! Finite groups, conjugacy classes, exact character tables, central
//! idempotents and character fields.

pub mod chartab;
pub mod classes;
pub mod finite_group;
pub mod idempotent;
pub mod library;

use thiserror::Error;

pub use chartab::{character_table, character_table_seeded, CharacterTable};
pub use classes::{conjugacy_classes, ConjugacyClassData};
pub use finite_group::FiniteGroup;
pub use idempotent::{
    central_element, central_idempotent, centre_decomposition, galois_orbits, CentreComponent, FieldTag,
    GaloisOrbit, GaloisOrbitDecomposition,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("multiplication is not associative: ({0}*{1})*{2} differs from {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("invalid permutation {0}")]
    InvalidPermutation(String),
    #[error("group has more than {0} elements")]
    TooLarge(usize),
    #[error("character table construction failed: {0}")]
    CharacterTableFailure(String),
    #[error("rational idempotent of the orbit of character {0} has irrational coefficients")]
    IrrationalIdempotent(usize),
}
