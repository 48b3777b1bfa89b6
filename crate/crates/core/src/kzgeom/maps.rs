use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::C64;
use crate::transport::{Point, PointMap};

/// `z ↦ (az + b)/(cz + d)` on one complex coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl Mobius {
    fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        let r = |x| C64::new(x, 0.0);
        Mobius { a: r(a), b: r(b), c: r(c), d: r(d) }
    }

    /// `ζ(z) = 1/(1 − z)`, cyclically permuting `0 → 1 → ∞`.
    pub fn zeta() -> Self {
        Self::real(0.0, 1.0, -1.0, 1.0)
    }

    /// `ζ∘ζ(z) = (z − 1)/z`
    pub fn zeta_squared() -> Self {
        Self::real(1.0, -1.0, 1.0, 0.0)
    }

    /// `ι(x) = 1 − x`
    pub fn iota() -> Self {
        Self::real(-1.0, 1.0, 0.0, 1.0)
    }

    fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }
}

impl PointMap for Mobius {
    fn source_dimension(&self) -> usize {
        1
    }
    fn target_dimension(&self) -> usize {
        1
    }
    fn apply(&self, x: &[C64]) -> Point {
        vec![(self.a * x[0] + self.b) / (self.c * x[0] + self.d)]
    }
    fn jacobian(&self, x: &[C64]) -> Vec<Vec<C64>> {
        let q = self.c * x[0] + self.d;
        vec![vec![self.det() / (q * q)]]
    }
    fn hessian(&self, x: &[C64]) -> Vec<Vec<Vec<C64>>> {
        let q = self.c * x[0] + self.d;
        vec![vec![vec![self.det() * self.c * -2.0 / (q * q * q)]]]
    }
}

/// `x ↦ Mx + v`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    pub matrix: Vec<Vec<C64>>,
    pub shift: Vec<C64>,
}

impl AffineMap {
    /// `Θ(x₂, x₃) = (1 − x₃, 1 − x₂)`
    pub fn theta() -> Self {
        let r = |x| C64::new(x, 0.0);
        AffineMap { matrix: vec![vec![r(0.0), r(-1.0)], vec![r(-1.0), r(0.0)]], shift: vec![r(1.0), r(1.0)] }
    }

    /// `z ↦ z + (v, …, v)`
    pub fn translation(dimension: usize, v: C64) -> Self {
        AffineMap { matrix: identity(dimension, C64::new(1.0, 0.0)), shift: vec![v; dimension] }
    }

    /// `z ↦ a·z`
    pub fn homothety(dimension: usize, a: C64) -> Self {
        AffineMap { matrix: identity(dimension, a), shift: vec![C64::new(0.0, 0.0); dimension] }
    }
}

fn identity(n: usize, diag: C64) -> Vec<Vec<C64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { diag } else { C64::new(0.0, 0.0) }).collect()).collect()
}

impl PointMap for AffineMap {
    fn source_dimension(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }
    fn target_dimension(&self) -> usize {
        self.matrix.len()
    }
    fn apply(&self, x: &[C64]) -> Point {
        self.matrix
            .iter()
            .zip(&self.shift)
            .map(|(row, v)| row.iter().zip(x).map(|(m, x)| m * x).sum::<C64>() + v)
            .collect()
    }
    fn jacobian(&self, _x: &[C64]) -> Vec<Vec<C64>> {
        self.matrix.clone()
    }
    fn hessian(&self, _x: &[C64]) -> Vec<Vec<Vec<C64>>> {
        let (m, n) = (self.target_dimension(), self.source_dimension());
        vec![vec![vec![C64::new(0.0, 0.0); n]; n]; m]
    }
}
