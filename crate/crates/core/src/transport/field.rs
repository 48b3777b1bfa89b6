use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::path::Reparametrization;
use super::TransportError;
use crate::freeseries::{AlgebraElement, Alphabet, Element};
use crate::scalar::C64;

/// Writes `f_k(s)` for every summand `k` into `out`.
pub trait FieldSampler: Send + Sync {
    fn sample(&self, s: f64, out: &mut [C64]);
}

impl<F> FieldSampler for F
where
    F: Fn(f64, &mut [C64]) + Send + Sync,
{
    fn sample(&self, s: f64, out: &mut [C64]) {
        self(s, out)
    }
}

/// Samplers valid on the closed range `[s0, s1]`.
#[derive(Clone)]
pub struct FieldPiece {
    pub s0: f64,
    pub s1: f64,
    pub sampler: Arc<dyn FieldSampler>,
}

impl fmt::Debug for FieldPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldPiece[{}, {}]", self.s0, self.s1)
    }
}

/// `Y(s) = Σ_k f_k(s) A_k` with λ-degree-0 coefficients `A_k`.
#[derive(Clone, Debug)]
pub struct PulledBackField {
    alphabet: Arc<Alphabet>,
    summands: Vec<Element>,
    pieces: Vec<FieldPiece>,
}

impl PulledBackField {
    /// Pieces must tile `[0, 1]` in order.
    pub fn new(
        alphabet: Arc<Alphabet>,
        summands: Vec<Element>,
        pieces: Vec<FieldPiece>,
    ) -> Result<Self, TransportError> {
        let mut expect = 0.0;
        for p in &pieces {
            if (p.s0 - expect).abs() > 1e-15 || p.s1 <= p.s0 {
                return Err(TransportError::BadPieces);
            }
            expect = p.s1;
        }
        if pieces.is_empty() || (expect - 1.0).abs() > 1e-15 {
            return Err(TransportError::BadPieces);
        }
        Ok(PulledBackField { alphabet, summands, pieces })
    }

    /// One smooth piece over `[0, 1]`.
    pub fn smooth(alphabet: Arc<Alphabet>, summands: Vec<Element>, sampler: Arc<dyn FieldSampler>) -> Self {
        PulledBackField { alphabet, summands, pieces: vec![FieldPiece { s0: 0.0, s1: 1.0, sampler }] }
    }

    /// `Y(s) = c·E`.
    pub fn constant(alphabet: Arc<Alphabet>, element: Element, c: C64) -> Self {
        Self::smooth(alphabet, vec![element], Arc::new(move |_s: f64, out: &mut [C64]| out[0] = c))
    }

    pub fn zero(alphabet: Arc<Alphabet>) -> Self {
        Self::smooth(alphabet, Vec::new(), Arc::new(|_s: f64, _out: &mut [C64]| {}))
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn summands(&self) -> &[Element] {
        &self.summands
    }

    pub fn pieces(&self) -> &[FieldPiece] {
        &self.pieces
    }

    pub fn singular_set(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.pieces.iter().map(|p| p.s0).collect();
        out.push(1.0);
        out
    }

    pub fn piece_at(&self, s: f64) -> &FieldPiece {
        self.pieces.iter().find(|p| s < p.s1).unwrap_or_else(|| self.pieces.last().expect("fields have a piece"))
    }

    pub fn coefficients(&self, s: f64) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.summands.len()];
        self.piece_at(s).sampler.sample(s, &mut out);
        out
    }

    /// `Y(s)` as an algebra element.
    pub fn value(&self, s: f64) -> Element {
        let mut out = AlgebraElement::zero();
        for (f, a) in self.coefficients(s).iter().zip(&self.summands) {
            out.add_scaled(a, f);
        }
        out
    }

    /// Same field with `f_k` replaced by `f_k + c`.
    pub fn shifted(&self, k: usize, c: C64) -> Result<Self, TransportError> {
        if k >= self.summands.len() {
            return Err(TransportError::DimensionMismatch);
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let inner = p.sampler.clone();
                FieldPiece {
                    s0: p.s0,
                    s1: p.s1,
                    sampler: Arc::new(move |s: f64, out: &mut [C64]| {
                        inner.sample(s, out);
                        out[k] += c;
                    }),
                }
            })
            .collect();
        Ok(PulledBackField { alphabet: self.alphabet.clone(), summands: self.summands.clone(), pieces })
    }

    /// `Y_θ(s) = Y(θ(s))·θ'(s)`, the field seen along `c ∘ θ`.
    pub fn reparametrize(&self, theta: &Reparametrization) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let inner = p.sampler.clone();
                let th = theta.clone();
                FieldPiece {
                    s0: (theta.inverse)(p.s0),
                    s1: (theta.inverse)(p.s1),
                    sampler: Arc::new(move |s: f64, out: &mut [C64]| {
                        inner.sample((th.theta)(s), out);
                        let d = (th.dtheta)(s);
                        for v in out.iter_mut() {
                            *v *= d;
                        }
                    }),
                }
            })
            .collect();
        PulledBackField { alphabet: self.alphabet.clone(), summands: self.summands.clone(), pieces }
    }

    /// Field with the same samplers and the summand coefficients replaced.
    pub fn with_summands(&self, alphabet: Arc<Alphabet>, summands: Vec<Element>) -> Result<Self, TransportError> {
        if summands.len() != self.summands.len() {
            return Err(TransportError::DimensionMismatch);
        }
        Ok(PulledBackField { alphabet, summands, pieces: self.pieces.clone() })
    }
}
