//! Finite group actions on complex tori: rigidity, polarizations and
//! projective deformations.

pub mod arith;
pub mod group;
pub mod hodge;
pub mod deform;
pub mod polarize;
