//! Piecewise-smooth paths, pulled-back fields and propagators of `dW/ds = λ Y(s) W`.

mod field;
mod path;
mod propagate;

pub use field::{FieldPiece, FieldSampler, PulledBackField};
pub use path::{
    compose_chain, compose_paths, distance, reverse_path, Affine, AnalyticCurve, Curve, PathPiece, PiecewisePath,
    Point, PointMap, Reparametrization, ENDPOINT_TOLERANCE,
};
pub use propagate::{compose_transports, factorize, propagate, Propagator, QuadratureInfo};

use crate::freeseries::SeriesError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransportError {
    #[error("non-finite field value at s = {0}")]
    NonFinite(f64),
    #[error("endpoints differ by {0:e}")]
    EndpointMismatch(f64),
    #[error("parameter {0} outside [0, 1]")]
    ParameterOutOfRange(f64),
    #[error("quadrature needs at least one panel")]
    BadSteps,
    #[error("closed-form factor must be one constant summand")]
    NotClosedForm,
    #[error("dimensions do not match")]
    DimensionMismatch,
    #[error("field pieces must tile [0, 1] in order")]
    BadPieces,
    #[error("nothing to compose")]
    EmptyPath,
    #[error("fields are over different alphabets")]
    AlphabetMismatch,
    #[error(transparent)]
    Series(#[from] SeriesError),
}
