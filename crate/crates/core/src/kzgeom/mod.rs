//! Formal connections with analytic partials, curvature, pullbacks and the
//! named path families used for the associator, hexagon and pentagon.

mod connection;
mod families;
mod maps;

pub use connection::{
    curvature, flatness_residual, interval_connection, kz_connection, pentagon_connection, punctured_plane_connection,
    CurvatureSample, Domain, FormalConnection, PairImages, PoleTerm,
};
pub use families::{
    exponential_half_path, hexagon_paths, interval_paths, iota, pentagon_paths, theta, zeta, zeta_squared, HalfPath,
    HexagonPaths, IntervalPaths, PentagonPaths,
};
pub use maps::{AffineMap, Mobius};

use alloc::vec::Vec;

use crate::dkrelations::IdealError;
use crate::freeseries::SeriesError;
use crate::scalar::C64;
use crate::transport::TransportError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("regulator {0} outside ]0, 1/4]")]
    RegulatorOutOfRange(f64),
    #[error("point {0:?} is on or too close to the singular locus")]
    Inadmissible(Vec<C64>),
    #[error("dimensions do not match")]
    DimensionMismatch,
    #[error("need n >= 2 strands, got {0}")]
    TooFewStrands(usize),
    #[error("no image for the pair ({0}, {1})")]
    BadPair(usize, usize),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}
