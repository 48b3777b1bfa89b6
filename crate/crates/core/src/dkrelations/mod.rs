//! Drinfel'd–Kohno presentations and exact graded bases of the infinitesimal
//! braid ideal, used to decide equality of numeric series modulo the relations.

mod ideal;
mod presentation;

pub use ideal::{
    ideal_component, is_zero_mod_ideal, reduce_mod_ideal, GradedIdealBasis, IdealReducer, IdealRow, ReducedForm,
    RowEntry,
};
pub use presentation::{build_presentation, BraidPresentation};

use crate::freeseries::SeriesError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IdealError {
    #[error("a braid presentation needs n >= 2 strands, got {0}")]
    TooFewStrands(usize),
    #[error("strand indices ({0}, {1}) are invalid for this presentation")]
    BadPair(usize, usize),
    #[error("series alphabet does not match the presentation")]
    AlphabetMismatch,
    #[error("relation is not homogeneous of word length 2")]
    InhomogeneousRelation,
    #[error("invalid ideal basis: {0}")]
    InvalidBasis(&'static str),
    #[error(transparent)]
    Series(#[from] SeriesError),
}
