//! Weight-one rational Hodge structures with a finite group action: Hodge
//! characters, rigidity by three independent routes, isotypic splitting and
//! enumeration of rigid Hodge types.

pub mod character;
pub mod decomposition;
pub mod fixtures;
pub mod rep;
pub mod report;
pub mod split;
pub mod symbolic;

use thiserror::Error;

pub use character::{
    hodge_character_from_numeric, rigidity_by_character, CharacterRigidity, HodgeCharacter, HodgeTolerances,
    NumericComplexStructure,
};
pub use decomposition::{brute_force_hom_dimension, brute_force_hom_dimension_numeric, HodgeDecomposition};
pub use rep::IntegralRepresentation;
pub use report::{rigidity_report, RigidityReport};
pub use split::{centre_action, f_module_basis, isotypic_split, IsotypicPiece};
pub use symbolic::{enumerate_rigid_types, rigidity_by_centre, FieldSummand, SymbolicHodgeSpec};

use crate::group::GroupError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HodgeError {
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("invalid complex structure: {0}")]
    InvalidComplexStructure(String),
    #[error("J does not commute with element {element} (residual {residual:e})")]
    NotInvariant { element: usize, residual: f64 },
    #[error("Hodge character value at element {element} is not close to an algebraic integer (residual {residual:e})")]
    RoundingFailure { element: usize, residual: f64 },
    #[error("inconsistent Hodge character: {0}")]
    InconsistentCharacter(String),
    #[error("Hodge symmetry violated in summand {summand} at embedding {residue}: {detail}")]
    HSViolation { summand: usize, residue: u32, detail: String },
    #[error("invalid Hodge decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("rank {0} exceeds the cap of the exact brute-force pathway")]
    RankTooLarge(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}
