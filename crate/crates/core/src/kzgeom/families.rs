use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::maps::{AffineMap, Mobius};
use super::GeometryError;
use crate::scalar::C64;
use crate::transport::{compose_chain, AnalyticCurve, PiecewisePath, Point};
#[allow(unused_imports)]
use num_traits::Float;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn check_delta(delta: f64) -> Result<(), GeometryError> {
    if delta > 0.0 && delta <= 0.25 {
        Ok(())
    } else {
        Err(GeometryError::RegulatorOutOfRange(delta))
    }
}

/// Probes `c` at 64 points per piece and requires distance ≥ `margin` from the locus.
/// A NaN distance counts as inadmissible.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn check_margin(c: &PiecewisePath, margin: f64, distance: impl Fn(&[C64]) -> f64) -> Result<(), GeometryError> {
    for piece in c.pieces() {
        for j in 0..64 {
            let s = piece.s0 + (piece.s1 - piece.s0) * (j as f64 + 0.5) / 64.0;
            let x = piece.value(s);
            if !(distance(&x) >= margin) {
                return Err(GeometryError::Inadmissible(x));
            }
        }
        for s in [piece.s0, piece.s1] {
            let x = piece.value(s);
            if !(distance(&x) >= margin) {
                return Err(GeometryError::Inadmissible(x));
            }
        }
    }
    Ok(())
}

fn plane_distance(x: &[C64]) -> f64 {
    x[0].norm().min((x[0] - 1.0).norm())
}

fn triangle_distance(x: &[C64]) -> f64 {
    let (a, b) = (x[0].re, x[1].re);
    a.min(b - a).min(1.0 - b) - x[0].im.abs().max(x[1].im.abs())
}

fn interval_distance(x: &[C64]) -> f64 {
    x[0].re.min(1.0 - x[0].re) - x[0].im.abs()
}

fn curve1(
    value: impl Fn(f64) -> C64 + Send + Sync + 'static,
    derivative: impl Fn(f64) -> C64 + Send + Sync + 'static,
) -> PiecewisePath {
    PiecewisePath::from_curve(Arc::new(AnalyticCurve::new(1, move |s| vec![value(s)], move |s| vec![derivative(s)])))
}

/// The six legs around `0` and `1` in the lower half plane and their composite loop.
#[derive(Clone, Debug)]
pub struct HexagonPaths {
    pub delta: f64,
    /// Legs I to VI.
    pub legs: Vec<PiecewisePath>,
    /// `c_VI * (c_V * (… * c_I))`, based at `δ`.
    pub loop_path: PiecewisePath,
}

pub fn hexagon_paths(delta: f64) -> Result<HexagonPaths, GeometryError> {
    check_delta(delta)?;
    let d = delta;
    let rot = |s: f64| C64::new(0.0, -PI * s).exp();
    let legs = vec![
        curve1(move |s| re(d + s * (1.0 - 2.0 * d)), move |_| re(1.0 - 2.0 * d)),
        curve1(
            move |s| {
                let den = rot(s) * (1.0 - d / 2.0) + d / 2.0;
                re(1.0) - re(d) / den
            },
            move |s| {
                let den = rot(s) * (1.0 - d / 2.0) + d / 2.0;
                let dden = rot(s) * C64::new(0.0, -PI) * (1.0 - d / 2.0);
                dden * d / (den * den)
            },
        ),
        curve1(
            move |s| re(1.0 / (1.0 - d - s * (1.0 - 2.0 * d))),
            move |s| {
                let q = 1.0 - d - s * (1.0 - 2.0 * d);
                re((1.0 - 2.0 * d) / (q * q))
            },
        ),
        curve1(move |s| rot(s) * (1.0 / d - 0.5) + 0.5, move |s| rot(s) * C64::new(0.0, -PI) * (1.0 / d - 0.5)),
        curve1(
            move |s| {
                let u = d + s * (1.0 - 2.0 * d);
                re((u - 1.0) / u)
            },
            move |s| {
                let u = d + s * (1.0 - 2.0 * d);
                re((1.0 - 2.0 * d) / (u * u))
            },
        ),
        curve1(
            move |s| {
                let den = -rot(s) * (1.0 - d / 2.0) + d / 2.0;
                re(d) / den
            },
            move |s| {
                let den = -rot(s) * (1.0 - d / 2.0) + d / 2.0;
                let dden = -rot(s) * C64::new(0.0, -PI) * (1.0 - d / 2.0);
                -dden * d / (den * den)
            },
        ),
    ];
    for leg in &legs {
        check_margin(leg, d * d / 4.0, plane_distance)?;
    }
    let loop_path = compose_chain(&legs)?;
    Ok(HexagonPaths { delta, legs, loop_path })
}

/// Which half of a pentagon leg an exponential half-path traces.
#[derive(Clone, Debug)]
pub struct HalfPath {
    /// `"I-1"`, `"I-2"`, `"II-1"`, `"II-2"`, `"IV-1"` or `"IV-2"`.
    pub name: String,
    pub path: PiecewisePath,
}

/// Zone vertices, the five affine legs and the exponential half-paths.
#[derive(Clone, Debug)]
pub struct PentagonPaths {
    pub delta: f64,
    /// `p₁ … p₅`.
    pub vertices: Vec<Point>,
    /// Legs I to V: `p₁→p₂`, `p₂→p₃`, `p₃→p₄`, `p₁→p₅`, `p₅→p₄`.
    pub legs: Vec<PiecewisePath>,
    pub half_paths: Vec<HalfPath>,
    /// `c_III * (c_II * c_I)`
    pub upper: PiecewisePath,
    /// `c_V * c_IV`
    pub lower: PiecewisePath,
}

impl PentagonPaths {
    pub fn half_path(&self, name: &str) -> Option<&PiecewisePath> {
        self.half_paths.iter().find(|h| h.name == name).map(|h| &h.path)
    }
}

fn curve2(
    value: impl Fn(f64) -> [f64; 2] + Send + Sync + 'static,
    derivative: impl Fn(f64) -> [f64; 2] + Send + Sync + 'static,
) -> PiecewisePath {
    PiecewisePath::from_curve(Arc::new(AnalyticCurve::new(
        2,
        move |s| value(s).iter().map(|&x| re(x)).collect(),
        move |s| derivative(s).iter().map(|&x| re(x)).collect(),
    )))
}

pub fn pentagon_paths(delta: f64) -> Result<PentagonPaths, GeometryError> {
    check_delta(delta)?;
    let d = delta;
    let d2 = d * d;
    let pt = |a: f64, b: f64| vec![re(a), re(b)];
    let vertices = vec![pt(d2, d), pt(d - d2, d), pt(1.0 - d, 1.0 - d + d2), pt(1.0 - d, 1.0 - d2), pt(d2, 1.0 - d2)];
    let affine = |a: usize, b: usize| PiecewisePath::affine(vertices[a].clone(), vertices[b].clone());
    let legs = vec![affine(0, 1)?, affine(1, 2)?, affine(2, 3)?, affine(0, 4)?, affine(4, 3)?];

    let l1 = (2.0 * d).ln();
    let l2 = (2.0 * d2).ln();
    let dhat = d * (1.0 - d / 2.0);
    let lh = (2.0 * dhat).ln();
    let ii2 = curve2(
        move |s| {
            let e = 1.0 - 0.5 * (lh * s).exp();
            [e - d2 / 2.0, e + d2 / 2.0]
        },
        move |s| {
            let e = -0.5 * lh * (lh * s).exp();
            [e, e]
        },
    );
    let half_paths = vec![
        HalfPath {
            name: "I-1".into(),
            path: curve2(move |s| [d / 2.0 * (l1 * s).exp(), d], move |s| [d / 2.0 * l1 * (l1 * s).exp(), 0.0]),
        },
        HalfPath {
            name: "I-2".into(),
            path: curve2(move |s| [d - d / 2.0 * (l1 * s).exp(), d], move |s| [-d / 2.0 * l1 * (l1 * s).exp(), 0.0]),
        },
        HalfPath { name: "II-1".into(), path: ii2.map(Arc::new(AffineMap::theta()))? },
        HalfPath { name: "II-2".into(), path: ii2 },
        HalfPath {
            name: "IV-1".into(),
            path: curve2(move |s| [d2, 0.5 * (l1 * s).exp()], move |s| [0.0, 0.5 * l1 * (l1 * s).exp()]),
        },
        HalfPath {
            name: "IV-2".into(),
            path: curve2(move |s| [d2, 1.0 - 0.5 * (l2 * s).exp()], move |s| [0.0, -0.5 * l2 * (l2 * s).exp()]),
        },
    ];
    for c in legs.iter().chain(half_paths.iter().map(|h| &h.path)) {
        check_margin(c, d2 / 4.0, triangle_distance)?;
    }
    let upper = compose_chain(&legs[0..3])?;
    let lower = compose_chain(&legs[3..5])?;
    Ok(PentagonPaths { delta, vertices, legs, half_paths, upper, lower })
}

/// The affine path `δ → 1−ε` and its two exponential halves.
#[derive(Clone, Debug)]
pub struct IntervalPaths {
    pub delta: f64,
    pub epsilon: f64,
    pub affine: PiecewisePath,
    /// `½ → 1 − ε`
    pub half_epsilon: PiecewisePath,
    /// `δ → ½`
    pub half_delta: PiecewisePath,
}

pub fn interval_paths(delta: f64, epsilon: f64) -> Result<IntervalPaths, GeometryError> {
    check_delta(delta)?;
    check_delta(epsilon)?;
    let affine = PiecewisePath::affine(vec![re(delta)], vec![re(1.0 - epsilon)])?;
    let half_epsilon = exponential_half_path(epsilon)?;
    let ld = (2.0 * delta).ln();
    let half_delta = curve1(move |s| re(0.5 * (ld * (1.0 - s)).exp()), move |s| re(-0.5 * ld * (ld * (1.0 - s)).exp()));
    for c in [&affine, &half_epsilon, &half_delta] {
        check_margin(c, delta.min(epsilon).powi(2) / 4.0, interval_distance)?;
    }
    Ok(IntervalPaths { delta, epsilon, affine, half_epsilon, half_delta })
}

/// `s ↦ 1 − ½e^{ln(2ε)s}`, from `½` to `1 − ε`.
pub fn exponential_half_path(epsilon: f64) -> Result<PiecewisePath, GeometryError> {
    check_delta(epsilon)?;
    let l = (2.0 * epsilon).ln();
    Ok(curve1(move |s| re(1.0 - 0.5 * (l * s).exp()), move |s| re(-0.5 * l * (l * s).exp())))
}

/// `ζ`, `ζ∘ζ`, `ι` and `Θ` as shared maps.
pub fn zeta() -> Arc<Mobius> {
    Arc::new(Mobius::zeta())
}

pub fn zeta_squared() -> Arc<Mobius> {
    Arc::new(Mobius::zeta_squared())
}

pub fn iota() -> Arc<Mobius> {
    Arc::new(Mobius::iota())
}

pub fn theta() -> Arc<AffineMap> {
    Arc::new(AffineMap::theta())
}
