//! Truncated noncommutative power series, parallel transport of formal
//! connections and numerical Drinfel'd associators.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the basis cache
//! and the command line live in the `kzassoc` crate.
#![no_std]

// Float methods come from `num_traits::Float` (libm). When std is linked elsewhere in the
// graph its inherent methods take precedence, so those imports carry `allow(unused_imports)`.
extern crate alloc;

pub mod associator;
pub mod dkrelations;
pub mod freeseries;
pub mod kzgeom;
pub mod scalar;
pub mod transport;

pub use freeseries::{
    AlgebraElement, Alphabet, Element, Generator, Series, SeriesError, SeriesNorm, Substitution, TruncatedSeries, Word,
};
pub use scalar::{Scalar, C64};
