//! Rational polarizations of rigid actions: CM trace forms, certified
//! verification of the Riemann relations and the Rosati condition, and the
//! existence decision for fields given by a defining polynomial.

pub mod assemble;
pub mod existence;
pub mod roots;
pub mod zeta;

use thiserror::Error;

pub use assemble::{
    assemble_polarization, verify_polarization, HodgeData, PolarizationCertificate, PolarizationForm,
    PolarizeOptions, PolarizeTolerances,
};
pub use existence::{character_field_polynomial, polarization_exists, ExistenceCertificate, Obstruction, Verdict};
pub use zeta::{find_zeta, imaginary_subspace, trace_form, ImaginaryElement};

use crate::arith::ArithError;
use crate::group::GroupError;
use crate::hodge::HodgeError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolarizeError {
    #[error("the field has a real embedding")]
    RealEmbeddingPresent,
    #[error("no imaginary element has the prescribed signs: {0}")]
    NotCMField(String),
    #[error("embedding set must contain exactly one embedding of each conjugate pair: {0}")]
    InvalidEmbeddingSet(String),
    #[error("the action is not rigid (hom dimension {hom_dimension})")]
    NotRigid { hom_dimension: u64 },
    #[error("summand {orbit} is active but its field is not CM")]
    NonCMFieldActive { orbit: usize },
    #[error("the form is not alternating")]
    NotAlternating,
    #[error("first bilinear relation fails: E(Jx, Jy) != E(x, y) at x = e_{0}, y = e_{1} ({2})")]
    RelationIFails(usize, usize, String),
    #[error("E(x, Jx) is not positive: witness {witness:?}, value {value:e}")]
    NotPositiveDefinite { witness: Vec<f64>, value: f64 },
    #[error("Rosati condition fails for a basis element of summand {orbit}")]
    RosatiFails { orbit: usize, element: usize },
    #[error("polynomial is not monic with integer coefficients")]
    NotMonicIntegral,
    #[error("polynomial degree {0} is outside 1..=16")]
    DegreeOutOfRange(usize),
    #[error("polynomial is reducible: factor {0}")]
    ReduciblePolynomial(String),
    #[error("field is not totally imaginary: {0} real roots")]
    NotTotallyImaginary(usize),
    #[error("certification did not succeed within the precision budget")]
    CertificationFailed,
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
