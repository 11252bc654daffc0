//! Fundamental groups of output complexes, their abelianized signatures,
//! and the pointed-homomorphism test behind implementability verdicts.

mod decide;
mod matrix;
mod presentation;
mod signature;
mod smith;

use thiserror::Error;

use crate::complex::VertexId;

pub use decide::{
    decide_implements, is_abelian_certified, tasks_equivalent, Equivalence, EquivalenceKind,
    Verdict, VerdictKind,
};
pub use matrix::IntMatrix;
pub use presentation::{presentation, presentation_with_order, GroupPresentation, Letter, Word};
pub use signature::{
    abelian_signature, direct_sum, find_pointed_hom, pointed_hom_exists, task_abelianization,
    task_signature, AbelianHom, Abelianization, HomError, Obstruction, PointedAbelianSignature,
};
pub use smith::{ext_gcd, is_smith_form, multi_ext_gcd, smith_normal_form, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("complex is not connected")]
    NotConnected,
    #[error("basepoint `{0}` is not a vertex of the complex")]
    UnknownBasepoint(VertexId),
    #[error("vertex order must list every vertex exactly once")]
    BadVertexOrder,
    #[error("loop uses {0}–{1}, which is not an edge")]
    InvalidLoop(VertexId, VertexId),
    #[error("at least one source task is required")]
    NoSources,
}
