//! Regularized associators `Φ_{δ,ε}`, their limit, the L/B/H diagnostics and the
//! hexagon and pentagon verifiers.

mod lbh;
mod phi;
mod verify;

pub use lbh::{classify_lbh, DegreeFit, LbhClass, LbhDiagnostics, LbhModel};
pub use phi::{
    ab_alphabet, dyadic_grid, pair_substitution, phi_from_halves, phi_limit, phi_limit_universal, phi_sample, psi_half,
    universal_sample, validate_grid, AssociatorEstimate, HalfPathFactor, DEEP_GRID, DEFAULT_GRID,
};
pub use verify::{
    check_braid_relations, check_centrality, hexagon_remainder, lambda2_antisymmetry, verify_hexagon, verify_pentagon,
    Identity, Mode, VerificationReport, VerifyConfig,
};

use alloc::string::String;

use crate::dkrelations::IdealError;
use crate::freeseries::SeriesError;
use crate::kzgeom::GeometryError;
use crate::transport::TransportError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AssociatorError {
    #[error("regulator {0} outside ]0, 1/4]")]
    RegulatorOutOfRange(f64),
    #[error("grid must be non-empty, strictly decreasing and inside ]0, 1/4]")]
    BadGrid,
    #[error("need at least 5 grid points, got {0}")]
    TooFewSamples(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}
