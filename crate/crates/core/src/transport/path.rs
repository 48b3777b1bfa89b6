use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::TransportError;
use crate::scalar::C64;

pub type Point = Vec<C64>;

/// Tolerance for matching endpoints when composing paths or transports.
pub const ENDPOINT_TOLERANCE: f64 = 1e-10;

/// Smooth curve on the local parameter interval `[0, 1]` with analytic derivative.
pub trait Curve: Send + Sync + fmt::Debug {
    fn dimension(&self) -> usize;
    fn value(&self, u: f64) -> Point;
    fn derivative(&self, u: f64) -> Point;
}

/// Holomorphic (or real-analytic) map between coordinate spaces.
pub trait PointMap: Send + Sync + fmt::Debug {
    fn source_dimension(&self) -> usize;
    fn target_dimension(&self) -> usize;
    fn apply(&self, x: &[C64]) -> Point;
    /// `J[i][j] = ∂y_i/∂x_j`.
    fn jacobian(&self, x: &[C64]) -> Vec<Vec<C64>>;
    /// `H[i][j][l] = ∂²y_i/∂x_j∂x_l`.
    fn hessian(&self, x: &[C64]) -> Vec<Vec<Vec<C64>>>;
}

type PointFn = Arc<dyn Fn(f64) -> Point + Send + Sync>;

/// Curve given by closed-form value and derivative closures on `[0, 1]`.
#[derive(Clone)]
pub struct AnalyticCurve {
    dimension: usize,
    value: PointFn,
    derivative: PointFn,
}

impl AnalyticCurve {
    pub fn new(
        dimension: usize,
        value: impl Fn(f64) -> Point + Send + Sync + 'static,
        derivative: impl Fn(f64) -> Point + Send + Sync + 'static,
    ) -> Self {
        AnalyticCurve { dimension, value: Arc::new(value), derivative: Arc::new(derivative) }
    }
}

impl fmt::Debug for AnalyticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AnalyticCurve(dim {})", self.dimension)
    }
}

impl Curve for AnalyticCurve {
    fn dimension(&self) -> usize {
        self.dimension
    }
    fn value(&self, u: f64) -> Point {
        (self.value)(u)
    }
    fn derivative(&self, u: f64) -> Point {
        (self.derivative)(u)
    }
}

#[derive(Debug, Clone)]
pub struct Affine {
    pub from: Point,
    pub to: Point,
}

impl Curve for Affine {
    fn dimension(&self) -> usize {
        self.from.len()
    }
    fn value(&self, u: f64) -> Point {
        self.from.iter().zip(&self.to).map(|(a, b)| a + (b - a) * u).collect()
    }
    fn derivative(&self, _u: f64) -> Point {
        self.from.iter().zip(&self.to).map(|(a, b)| b - a).collect()
    }
}

#[derive(Debug, Clone)]
struct Reversed(Arc<dyn Curve>);

impl Curve for Reversed {
    fn dimension(&self) -> usize {
        self.0.dimension()
    }
    fn value(&self, u: f64) -> Point {
        self.0.value(1.0 - u)
    }
    fn derivative(&self, u: f64) -> Point {
        self.0.derivative(1.0 - u).into_iter().map(|d| -d).collect()
    }
}

#[derive(Debug, Clone)]
struct Mapped {
    inner: Arc<dyn Curve>,
    map: Arc<dyn PointMap>,
}

impl Curve for Mapped {
    fn dimension(&self) -> usize {
        self.map.target_dimension()
    }
    fn value(&self, u: f64) -> Point {
        self.map.apply(&self.inner.value(u))
    }
    fn derivative(&self, u: f64) -> Point {
        let x = self.inner.value(u);
        let dx = self.inner.derivative(u);
        self.map.jacobian(&x).iter().map(|row| row.iter().zip(&dx).map(|(j, d)| j * d).sum()).collect()
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Monotone increasing bijection `θ` of `[0, 1]` with its derivative and inverse.
#[derive(Clone)]
pub struct Reparametrization {
    pub theta: RealFn,
    pub dtheta: RealFn,
    pub inverse: RealFn,
}

impl fmt::Debug for Reparametrization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Reparametrization")
    }
}

impl Reparametrization {
    /// `θ(s) = s²`
    pub fn square() -> Self {
        Reparametrization {
            theta: Arc::new(|s| s * s),
            dtheta: Arc::new(|s| 2.0 * s),
            inverse: Arc::new(num_traits::Float::sqrt),
        }
    }
}

/// `u ↦ inner((θ(a + u(b−a)) − s0)/(s1 − s0))`, the piece `[s0,s1]` seen through θ.
#[derive(Debug, Clone)]
struct Reparametrized {
    inner: Arc<dyn Curve>,
    theta: Reparametrization,
    a: f64,
    b: f64,
    s0: f64,
    s1: f64,
}

impl Reparametrized {
    fn local(&self, u: f64) -> (f64, f64) {
        let s = self.a + u * (self.b - self.a);
        let t = ((self.theta.theta)(s) - self.s0) / (self.s1 - self.s0);
        let dt = (self.theta.dtheta)(s) * (self.b - self.a) / (self.s1 - self.s0);
        (t, dt)
    }
}

impl Curve for Reparametrized {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }
    fn value(&self, u: f64) -> Point {
        self.inner.value(self.local(u).0)
    }
    fn derivative(&self, u: f64) -> Point {
        let (t, dt) = self.local(u);
        self.inner.derivative(t).into_iter().map(|d| d * dt).collect()
    }
}

/// A smooth curve occupying the parameter range `[s0, s1]` of a path.
#[derive(Debug, Clone)]
pub struct PathPiece {
    pub s0: f64,
    pub s1: f64,
    pub curve: Arc<dyn Curve>,
}

impl PathPiece {
    fn local(&self, s: f64) -> f64 {
        ((s - self.s0) / (self.s1 - self.s0)).clamp(0.0, 1.0)
    }

    pub fn value(&self, s: f64) -> Point {
        self.curve.value(self.local(s))
    }

    pub fn derivative(&self, s: f64) -> Point {
        let scale = 1.0 / (self.s1 - self.s0);
        self.curve.derivative(self.local(s)).into_iter().map(|d| d * scale).collect()
    }
}

/// Continuous piecewise-smooth path `[0,1] → ℂ^m`.
#[derive(Debug, Clone)]
pub struct PiecewisePath {
    dimension: usize,
    pieces: Vec<PathPiece>,
}

impl PiecewisePath {
    /// Single-piece path from a curve on `[0, 1]`.
    pub fn from_curve(curve: Arc<dyn Curve>) -> Self {
        PiecewisePath { dimension: curve.dimension(), pieces: vec![PathPiece { s0: 0.0, s1: 1.0, curve }] }
    }

    pub fn affine(from: Point, to: Point) -> Result<Self, TransportError> {
        if from.len() != to.len() {
            return Err(TransportError::DimensionMismatch);
        }
        Ok(Self::from_curve(Arc::new(Affine { from, to })))
    }

    pub fn constant(p: Point) -> Self {
        Self::from_curve(Arc::new(Affine { from: p.clone(), to: p }))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn pieces(&self) -> &[PathPiece] {
        &self.pieces
    }

    /// Breakpoints including 0 and 1.
    pub fn singular_set(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.pieces.iter().map(|p| p.s0).collect();
        out.push(1.0);
        out
    }

    /// Piece used for sampling at `s`: the one to the right of an interior breakpoint.
    pub fn piece_at(&self, s: f64) -> &PathPiece {
        self.pieces.iter().find(|p| s < p.s1).unwrap_or_else(|| self.pieces.last().expect("paths have a piece"))
    }

    pub fn value(&self, s: f64) -> Point {
        self.piece_at(s).value(s)
    }

    pub fn derivative(&self, s: f64) -> Point {
        self.piece_at(s).derivative(s)
    }

    pub fn start(&self) -> Point {
        self.pieces[0].value(0.0)
    }

    pub fn end(&self) -> Point {
        let last = self.pieces.last().expect("paths have a piece");
        last.value(last.s1)
    }

    /// `Θ ∘ c`
    pub fn map(&self, map: Arc<dyn PointMap>) -> Result<Self, TransportError> {
        if map.source_dimension() != self.dimension {
            return Err(TransportError::DimensionMismatch);
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| PathPiece {
                s0: p.s0,
                s1: p.s1,
                curve: Arc::new(Mapped { inner: p.curve.clone(), map: map.clone() }),
            })
            .collect();
        Ok(PiecewisePath { dimension: map.target_dimension(), pieces })
    }

    /// `c ∘ θ`
    pub fn reparametrize(&self, theta: &Reparametrization) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let a = (theta.inverse)(p.s0);
                let b = (theta.inverse)(p.s1);
                PathPiece {
                    s0: a,
                    s1: b,
                    curve: Arc::new(Reparametrized {
                        inner: p.curve.clone(),
                        theta: theta.clone(),
                        a,
                        b,
                        s0: p.s0,
                        s1: p.s1,
                    }),
                }
            })
            .collect();
        PiecewisePath { dimension: self.dimension, pieces }
    }
}

pub fn distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `c2 * c1`: run `c1` on `[0, ½]`, then `c2` on `[½, 1]`.
pub fn compose_paths(c2: &PiecewisePath, c1: &PiecewisePath) -> Result<PiecewisePath, TransportError> {
    if c1.dimension != c2.dimension {
        return Err(TransportError::DimensionMismatch);
    }
    let gap = distance(&c1.end(), &c2.start());
    if gap > ENDPOINT_TOLERANCE {
        return Err(TransportError::EndpointMismatch(gap));
    }
    let first = c1.pieces.iter().map(|p| PathPiece { s0: p.s0 / 2.0, s1: p.s1 / 2.0, curve: p.curve.clone() });
    let second =
        c2.pieces.iter().map(|p| PathPiece { s0: 0.5 + p.s0 / 2.0, s1: 0.5 + p.s1 / 2.0, curve: p.curve.clone() });
    Ok(PiecewisePath { dimension: c1.dimension, pieces: first.chain(second).collect() })
}

/// Right-to-left composition of a list `[c_1, …, c_k]` as `c_k * (… * (c_2 * c_1))`.
pub fn compose_chain(paths: &[PiecewisePath]) -> Result<PiecewisePath, TransportError> {
    let (first, rest) = paths.split_first().ok_or(TransportError::EmptyPath)?;
    rest.iter().try_fold(first.clone(), |acc, c| compose_paths(c, &acc))
}

/// `c ∘ ι` with `ι(s) = 1 − s`.
pub fn reverse_path(c: &PiecewisePath) -> PiecewisePath {
    let pieces = c
        .pieces
        .iter()
        .rev()
        .map(|p| PathPiece { s0: 1.0 - p.s1, s1: 1.0 - p.s0, curve: Arc::new(Reversed(p.curve.clone())) })
        .collect();
    PiecewisePath { dimension: c.dimension, pieces }
}
