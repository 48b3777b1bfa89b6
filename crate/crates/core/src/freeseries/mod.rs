//! Truncated power series in λ with coefficients in a free associative algebra.

mod alphabet;
mod element;
mod series;
mod word;

pub use alphabet::{Alphabet, Generator};
pub use element::AlgebraElement;
pub use series::{SeriesNorm, Substitution, TruncatedSeries};
pub use word::Word;

use alloc::string::String;

use crate::scalar::C64;

pub type Element = AlgebraElement<C64>;
pub type Series = TruncatedSeries<C64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("series are over different alphabets")]
    AlphabetMismatch,
    #[error("generator name {0:?} appears twice")]
    DuplicateGenerator(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("alphabets are limited to 256 generators")]
    TooManyGenerators,
    #[error("exponential needs a series without constant term")]
    NonzeroConstantTerm,
    #[error("series is not of the form 1 + λ(…)")]
    NotGroupLike,
    #[error("no image given for generator {0:?}")]
    MissingImage(String),
}
