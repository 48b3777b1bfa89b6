use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::AssociatorError;
use crate::freeseries::{AlgebraElement, Alphabet, Element, Series, SeriesNorm, Substitution};
use crate::kzgeom::{exponential_half_path, interval_connection, interval_paths};
use crate::scalar::C64;
use crate::transport::{factorize, propagate, FieldPiece, PulledBackField};

fn check_regulator(x: f64) -> Result<(), AssociatorError> {
    if x > 0.0 && x <= 0.25 {
        Ok(())
    } else {
        Err(AssociatorError::RegulatorOutOfRange(x))
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// The two-letter alphabet `{A, B}` over which the universal associator lives.
pub fn ab_alphabet() -> Arc<Alphabet> {
    Alphabet::ab()
}

/// `Φ_{δ,ε}(A,B) = e^{−λ ln(ε)B} · W · e^{λ ln(δ)A}`, with `W` the transport of
/// `Γ(B,A)` along the affine path `δ → 1−ε`.
pub fn phi_sample(
    a: &Element,
    b: &Element,
    alphabet: &Arc<Alphabet>,
    delta: f64,
    epsilon: f64,
    order: usize,
    steps: usize,
) -> Result<Series, AssociatorError> {
    check_regulator(delta)?;
    check_regulator(epsilon)?;
    let paths = interval_paths(delta, epsilon)?;
    let conn = Arc::new(interval_connection(a, b, alphabet.clone()));
    let field = conn.pull_back_to_path(&paths.affine)?;
    let w = propagate(&field, 0.0, 1.0, order, steps)?.value;
    let left = Series::exp_lambda(alphabet.clone(), order, re(-epsilon.ln()), b);
    let right = Series::exp_lambda(alphabet.clone(), order, re(delta.ln()), a);
    Ok(left.try_mul(&w)?.try_mul(&right)?)
}

/// `ψ_ε(B,A) = e^{−λ ln(ε)B} · W`, with `W` the transport of `Γ(B,A)` along the
/// exponential half-path `½ → 1−ε`.
#[derive(Clone, Debug)]
pub struct HalfPathFactor {
    pub epsilon: f64,
    pub value: Series,
}

/// Computed as `e^{λ ln(2) B} · Ξ` from the factorization with the constant
/// `B`-coefficient `ln(2ε)` split off.
pub fn psi_half(
    b: &Element,
    a: &Element,
    alphabet: &Arc<Alphabet>,
    epsilon: f64,
    order: usize,
    steps: usize,
) -> Result<HalfPathFactor, AssociatorError> {
    check_regulator(epsilon)?;
    let path = exponential_half_path(epsilon)?;
    let conn = Arc::new(interval_connection(a, b, alphabet.clone()));
    let field = conn.pull_back_to_path(&path)?;
    let l = (2.0 * epsilon).ln();
    let y0 = PulledBackField::constant(alphabet.clone(), b.clone(), re(l));
    let pieces = field
        .pieces()
        .iter()
        .map(|p| {
            let inner = p.sampler.clone();
            FieldPiece {
                s0: p.s0,
                s1: p.s1,
                sampler: Arc::new(move |s: f64, out: &mut [C64]| {
                    let mut both = [C64::new(0.0, 0.0); 2];
                    inner.sample(s, &mut both);
                    out[0] = both[0];
                }),
            }
        })
        .collect();
    let z = PulledBackField::new(alphabet.clone(), vec![a.clone()], pieces)?;
    let (_u, xi) = factorize(&y0, &z, 0.0, 1.0, order, steps)?;
    let lead = Series::exp_lambda(alphabet.clone(), order, re(2.0.ln()), b);
    Ok(HalfPathFactor { epsilon, value: lead.try_mul(&xi.value)? })
}

/// `Φ_{δ,ε}(A,B) = ψ_ε(B,A) · ψ_δ(A,B)⁻¹`.
pub fn phi_from_halves(
    a: &Element,
    b: &Element,
    alphabet: &Arc<Alphabet>,
    delta: f64,
    epsilon: f64,
    order: usize,
    steps: usize,
) -> Result<Series, AssociatorError> {
    let upper = psi_half(b, a, alphabet, epsilon, order, steps)?;
    let lower = psi_half(a, b, alphabet, delta, order, steps)?;
    Ok(upper.value.try_mul(&lower.value.invert_group()?)?)
}

/// `Φ_{δ,δ}` over `{A, B}` from the half-path factors.
pub fn universal_sample(delta: f64, order: usize, steps: usize) -> Result<Series, AssociatorError> {
    let ab = ab_alphabet();
    let (a, b) = (AlgebraElement::generator(0), AlgebraElement::generator(1));
    phi_from_halves(&a, &b, &ab, delta, delta, order, steps)
}

/// Grid samples `Φ_{δ,δ}` and their limit estimate.
#[derive(Clone, Debug)]
pub struct AssociatorEstimate {
    pub order: usize,
    /// `(δ, ε, Φ_{δ,ε})` in grid order.
    pub samples: Vec<(f64, f64, Series)>,
    /// The sample at the last (smallest) regulator.
    pub extrapolated: Series,
    /// `‖Φ_{k+1} − Φ_k‖` per degree for successive samples.
    pub convergence: Vec<SeriesNorm>,
    /// False when the last difference exceeds the one before it.
    pub converged: bool,
}

impl AssociatorEstimate {
    /// Builds the estimate from samples ordered by decreasing regulator.
    pub fn from_samples(order: usize, samples: Vec<(f64, f64, Series)>) -> Result<Self, AssociatorError> {
        let extrapolated = samples.last().ok_or(AssociatorError::BadGrid)?.2.clone();
        let convergence = samples
            .windows(2)
            .map(|w| Ok(w[1].2.try_sub(&w[0].2)?.sup_norm()))
            .collect::<Result<Vec<_>, AssociatorError>>()?;
        let converged = match convergence.as_slice() {
            [.., prev, last] => last.max() <= prev.max(),
            _ => true,
        };
        Ok(AssociatorEstimate { order, samples, extrapolated, convergence, converged })
    }

    /// Applies `A ↦ images[0]`, `B ↦ images[1]` to every sample.
    pub fn substitute(&self, images: &Substitution<C64>) -> Result<Self, AssociatorError> {
        let samples = self
            .samples
            .iter()
            .map(|(d, e, s)| Ok((*d, *e, s.substitute(images)?)))
            .collect::<Result<Vec<_>, AssociatorError>>()?;
        Self::from_samples(self.order, samples)
    }

    /// Opt-in three-point extrapolation on the last three samples that removes
    /// error terms `a·δ·ln δ + b·δ`, the leading behaviour of the `λ²` coefficients.
    pub fn richardson(&self) -> Result<Series, AssociatorError> {
        let n = self.samples.len();
        if n < 3 {
            return Err(AssociatorError::BadGrid);
        }
        let tail = &self.samples[n - 3..];
        let d: Vec<f64> = tail.iter().map(|s| s.0).collect();
        let w = log_richardson_weights([d[0], d[1], d[2]]).ok_or(AssociatorError::BadGrid)?;
        let mut out = Series::zero(self.extrapolated.alphabet().clone(), self.order);
        for (wi, (_, _, s)) in w.iter().zip(tail) {
            out = out.try_add(&s.scale(&re(*wi)))?;
        }
        Ok(out)
    }
}

/// Weights `w` with `Σw = 1`, `Σw·δ·ln δ = 0` and `Σw·δ = 0`.
fn log_richardson_weights(d: [f64; 3]) -> Option<[f64; 3]> {
    let m = [[1.0, 1.0, 1.0], [d[0] * d[0].ln(), d[1] * d[1].ln(), d[2] * d[2].ln()], [d[0], d[1], d[2]]];
    let det3 = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let det = det3(&m);
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let mut w = [0.0; 3];
    for (i, wi) in w.iter_mut().enumerate() {
        let mut mi = m;
        for (r, row) in mi.iter_mut().enumerate() {
            row[i] = if r == 0 { 1.0 } else { 0.0 };
        }
        *wi = det3(&mi) / det;
    }
    Some(w)
}

/// Exponent range of the default limit grid `δ = 2^{−4} … 2^{−10}`.
pub const DEFAULT_GRID: (i32, i32) = (4, 10);

/// Exponent range used by the limit-mode verifiers. The regulator error at `λ^r`
/// behaves like `δ·|ln δ|^{r−1}`, which is still `O(10⁻¹)` at `2^{−10}` for `r = 4`.
pub const DEEP_GRID: (i32, i32) = (4, 24);

/// `δ = 2^{−k}` for `k` in `lo..=hi`.
pub fn dyadic_grid(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2.0.powi(-k)).collect()
}

/// Non-empty, strictly decreasing and inside `]0, 1/4]`.
pub fn validate_grid(grid: &[f64]) -> Result<(), AssociatorError> {
    if grid.is_empty() || grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(AssociatorError::BadGrid);
    }
    grid.iter().try_for_each(|&d| check_regulator(d))
}

/// Universal estimate over `{A, B}` on a strictly decreasing grid `δ = ε`.
pub fn phi_limit_universal(order: usize, grid: &[f64], steps: usize) -> Result<AssociatorEstimate, AssociatorError> {
    validate_grid(grid)?;
    let samples = grid
        .iter()
        .map(|&d| Ok((d, d, universal_sample(d, order, steps)?)))
        .collect::<Result<Vec<_>, AssociatorError>>()?;
    AssociatorEstimate::from_samples(order, samples)
}

/// `Φ(A, B)` for images `a`, `b` over `alphabet`, via the universal series.
pub fn phi_limit(
    a: &Element,
    b: &Element,
    alphabet: &Arc<Alphabet>,
    order: usize,
    grid: &[f64],
    steps: usize,
) -> Result<AssociatorEstimate, AssociatorError> {
    phi_limit_universal(order, grid, steps)?.substitute(&pair_substitution(alphabet, a, b))
}

/// `A ↦ a`, `B ↦ b`.
pub fn pair_substitution(alphabet: &Arc<Alphabet>, a: &Element, b: &Element) -> Substitution<C64> {
    Substitution::from_images(ab_alphabet(), alphabet.clone(), vec![a.clone(), b.clone()])
        .expect("two images for two letters")
}
