use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use smallvec::SmallVec;

use super::field::PulledBackField;
use super::path::{distance, Point, ENDPOINT_TOLERANCE};
use super::TransportError;
use crate::freeseries::{Alphabet, Element, Series, Substitution, TruncatedSeries, Word};
use crate::scalar::{inverse_factorial, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureInfo {
    /// Simpson panels on every smooth segment.
    pub panels_per_piece: usize,
    pub segments: usize,
    /// `|S_h − S_2h|/15` for the degree-1 integrals, summed over segments.
    pub error_estimate: f64,
}

/// `W_{βα}` together with where it came from.
#[derive(Clone, Debug)]
pub struct Propagator {
    pub value: Series,
    pub from_param: f64,
    pub to_param: f64,
    pub from_point: Option<Point>,
    pub to_point: Option<Point>,
    pub quadrature: QuadratureInfo,
}

impl Propagator {
    pub fn identity(alphabet: Arc<Alphabet>, order: usize, param: f64) -> Self {
        Propagator {
            value: Series::one(alphabet, order),
            from_param: param,
            to_param: param,
            from_point: None,
            to_point: None,
            quadrature: QuadratureInfo { panels_per_piece: 0, segments: 0, error_estimate: 0.0 },
        }
    }

    /// `W_{αβ} = W_{βα}⁻¹`
    pub fn inverse(&self) -> Self {
        Propagator {
            value: self.value.invert_group().expect("propagators are group-like"),
            from_param: self.to_param,
            to_param: self.from_param,
            from_point: self.to_point.clone(),
            to_point: self.from_point.clone(),
            quadrature: self.quadrature.clone(),
        }
    }

    pub fn with_points(mut self, from: Point, to: Point) -> Self {
        self.from_point = Some(from);
        self.to_point = Some(to);
        self
    }
}

/// `w2 · w1`, requiring `w1` to end where `w2` starts.
pub fn compose_transports(w2: &Propagator, w1: &Propagator) -> Result<Propagator, TransportError> {
    let gap = match (&w1.to_point, &w2.from_point) {
        (Some(a), Some(b)) => distance(a, b),
        _ => (w1.to_param - w2.from_param).abs(),
    };
    if gap > ENDPOINT_TOLERANCE {
        return Err(TransportError::EndpointMismatch(gap));
    }
    Ok(Propagator {
        value: w2.value.try_mul(&w1.value)?,
        from_param: w1.from_param,
        to_param: w2.to_param,
        from_point: w1.from_point.clone(),
        to_point: w2.to_point.clone(),
        quadrature: QuadratureInfo {
            panels_per_piece: w1.quadrature.panels_per_piece.max(w2.quadrature.panels_per_piece),
            segments: w1.quadrature.segments + w2.quadrature.segments,
            error_estimate: w1.quadrature.error_estimate + w2.quadrature.error_estimate,
        },
    })
}

/// Solves `dW/ds = λ Y(s) W`, `W(α) = 1`, up to `λ^order` and returns `W(β)`.
pub fn propagate(
    y: &PulledBackField,
    alpha: f64,
    beta: f64,
    order: usize,
    steps: usize,
) -> Result<Propagator, TransportError> {
    let letters: Vec<(Element, usize)> = y.summands().iter().map(|a| (a.clone(), 1)).collect();
    let sample = |mid: f64, s: f64, out: &mut [C64]| y.piece_at(mid).sampler.sample(s, out);
    let (value, quadrature) =
        transport_graded(y.alphabet(), &letters, &y.singular_set(), alpha, beta, order, steps, &sample)?;
    Ok(Propagator { value, from_param: alpha, to_param: beta, from_point: None, to_point: None, quadrature })
}

/// Splits `W = U·Ξ` where `Y0 = c·E` is constant: `U = exp(λc(s−α)E)` and `Ξ`
/// solves the equation with `U⁻¹ Z U`.
pub fn factorize(
    y0: &PulledBackField,
    z: &PulledBackField,
    alpha: f64,
    beta: f64,
    order: usize,
    steps: usize,
) -> Result<(Propagator, Propagator), TransportError> {
    if y0.alphabet().names() != z.alphabet().names() {
        return Err(TransportError::AlphabetMismatch);
    }
    let c = closed_form_constant(y0, alpha, beta)?;
    let e = y0.summands()[0].clone();
    let alphabet = z.alphabet().clone();
    let u_value = Series::exp_lambda(alphabet.clone(), order, c * (beta - alpha), &e);
    let mut u = Propagator::identity(alphabet.clone(), order, alpha);
    u.value = u_value;
    u.to_param = beta;

    // letter (k, l): weight l+1, element ad_E^l(A_k), coefficient f_k(s)(−c(s−α))^l/l!
    let mut letters = Vec::new();
    let mut index = Vec::new();
    for (k, a) in z.summands().iter().enumerate() {
        for l in 0..order {
            let el = e.ad_power(a, l);
            if el.is_zero() {
                continue;
            }
            letters.push((el, l + 1));
            index.push((k, l));
        }
    }
    let nz = z.summands().len();
    let sample = |mid: f64, s: f64, out: &mut [C64]| {
        let mut buf: SmallVec<[C64; 16]> = SmallVec::from_elem(C64::new(0.0, 0.0), nz);
        z.piece_at(mid).sampler.sample(s, &mut buf);
        let x = -c * (s - alpha);
        for (slot, &(k, l)) in out.iter_mut().zip(&index) {
            *slot = buf[k] * x.powu(l as u32) * inverse_factorial::<C64>(l).re;
        }
    };
    let (value, quadrature) =
        transport_graded(&alphabet, &letters, &z.singular_set(), alpha, beta, order, steps, &sample)?;
    u.quadrature = quadrature.clone();
    let xi = Propagator { value, from_param: alpha, to_param: beta, from_point: None, to_point: None, quadrature };
    Ok((u, xi))
}

fn closed_form_constant(y0: &PulledBackField, alpha: f64, beta: f64) -> Result<C64, TransportError> {
    if y0.summands().len() != 1 {
        return Err(TransportError::NotClosedForm);
    }
    let (lo, hi) = (alpha.min(beta), alpha.max(beta));
    let mut reference = None;
    for seg in segments(&y0.singular_set(), lo, hi) {
        for j in 0..=8 {
            let s = seg.0 + (seg.1 - seg.0) * j as f64 / 8.0;
            let mut v = [C64::new(0.0, 0.0)];
            y0.piece_at(0.5 * (seg.0 + seg.1)).sampler.sample(s, &mut v);
            let c0 = *reference.get_or_insert(v[0]);
            if (v[0] - c0).norm() > 1e-12 * c0.norm().max(1.0) {
                return Err(TransportError::NotClosedForm);
            }
        }
    }
    Ok(reference.unwrap_or(C64::new(0.0, 0.0)))
}

/// Oriented smooth sub-intervals from `alpha` to `beta`.
fn segments(breaks: &[f64], alpha: f64, beta: f64) -> Vec<(f64, f64)> {
    let (lo, hi) = (alpha.min(beta), alpha.max(beta));
    let mut cuts: Vec<f64> = vec![lo];
    cuts.extend(breaks.iter().copied().filter(|&b| b > lo && b < hi));
    cuts.push(hi);
    let mut out: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    if beta < alpha {
        out.reverse();
        for seg in out.iter_mut() {
            *seg = (seg.1, seg.0);
        }
    }
    out
}

type LetterSampler<'a> = dyn Fn(f64, f64, &mut [C64]) + 'a;

/// Transport for letters of prescribed λ-weights; `sample(mid, s, out)` evaluates the
/// letter coefficients at `s` using the smooth piece containing `mid`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn transport_graded(
    alphabet: &Arc<Alphabet>,
    letters: &[(Element, usize)],
    breaks: &[f64],
    alpha: f64,
    beta: f64,
    order: usize,
    steps: usize,
    sample: &LetterSampler<'_>,
) -> Result<(Series, QuadratureInfo), TransportError> {
    for p in [alpha, beta] {
        if !(-1e-12..=1.0 + 1e-12).contains(&p) {
            return Err(TransportError::ParameterOutOfRange(p));
        }
    }
    if steps == 0 {
        return Err(TransportError::BadSteps);
    }
    let letter_names: Vec<_> = (0..letters.len()).map(|i| format!("x{i}")).collect();
    let letter_alphabet = Alphabet::new(letter_names)?;
    let weights: Vec<usize> = letters.iter().map(|l| l.1).collect();
    let segs = if alpha == beta { Vec::new() } else { segments(breaks, alpha, beta) };
    let mut total = TruncatedSeries::one(letter_alphabet.clone(), order);
    let mut error = 0.0;
    for &(a, b) in &segs {
        let mid = 0.5 * (a + b);
        let (sig, err) =
            segment_signature(&letter_alphabet, &weights, order, a, b, steps, &|s, out| sample(mid, s, out))?;
        total = sig.try_mul(&total)?;
        error += err;
    }
    let images = letters.iter().map(|l| l.0.clone()).collect();
    let subst = Substitution::from_images(letter_alphabet, alphabet.clone(), images)?;
    let value = total.substitute(&subst)?;
    Ok((value, QuadratureInfo { panels_per_piece: steps, segments: segs.len(), error_estimate: error }))
}

/// Iterated integrals `I_{k·w}(s) = ∫_a^s f_k I_w` over one smooth segment by
/// composite Simpson with `panels` panels.
fn segment_signature(
    letter_alphabet: &Arc<Alphabet>,
    weights: &[usize],
    order: usize,
    a: f64,
    b: f64,
    panels: usize,
    sample: &dyn Fn(f64, &mut [C64]),
) -> Result<(Series, f64), TransportError> {
    let k = weights.len();
    let nodes = 2 * panels + 1;
    let h = (b - a) / (2 * panels) as f64;
    let zero = C64::new(0.0, 0.0);

    // f[letter][node]
    let mut f = vec![vec![zero; nodes]; k];
    let mut buf = vec![zero; k];
    #[allow(clippy::needless_range_loop)]
    for j in 0..nodes {
        let s = if j == nodes - 1 { b } else { a + h * j as f64 };
        sample(s, &mut buf);
        for (l, v) in buf.iter().enumerate() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(TransportError::NonFinite(s));
            }
            f[l][j] = *v;
        }
    }

    let min_weight = weights.iter().copied().min().unwrap_or(usize::MAX);
    let mut coeffs: Vec<Vec<(Word, C64)>> = vec![Vec::new(); order + 1];
    coeffs[0].push((Word::empty(), C64::new(1.0, 0.0)));
    // words that can still be extended, with their cumulative integrals
    let mut frontier: Vec<(Word, usize, Option<Vec<C64>>)> = vec![(Word::empty(), 0, None)];
    let mut error = 0.0f64;
    let mut g = vec![zero; nodes];
    while let Some((word, weight, values)) = frontier.pop() {
        for (l, &wl) in weights.iter().enumerate() {
            let new_weight = weight + wl;
            if new_weight > order {
                continue;
            }
            match &values {
                Some(v) => g.iter_mut().zip(&f[l]).zip(v).for_each(|((g, f), v)| *g = f * v),
                None => g.copy_from_slice(&f[l]),
            }
            let mut new_word = Word::letter(l as u8);
            for &x in word.letters() {
                new_word.push(x);
            }
            let extendable = new_weight + min_weight <= order;
            let (last, cumulative) = simpson(&g, h, extendable);
            if values.is_none() && panels.is_multiple_of(2) {
                let coarse = simpson_coarse(&g, h);
                error = error.max((last - coarse).norm() / 15.0);
            }
            coeffs[new_weight].push((new_word.clone(), last));
            if extendable {
                frontier.push((new_word, new_weight, cumulative));
            }
        }
    }
    let elements = coeffs.into_iter().map(crate::freeseries::AlgebraElement::from_terms).collect();
    Ok((TruncatedSeries::from_coeffs(letter_alphabet.clone(), elements), error))
}

/// Composite Simpson integral of nodal values, optionally with the running integral
/// at every node (odd nodes use the three-point interior rule).
fn simpson(g: &[C64], h: f64, cumulative: bool) -> (C64, Option<Vec<C64>>) {
    let panels = (g.len() - 1) / 2;
    let mut acc = C64::new(0.0, 0.0);
    let mut out = if cumulative { Some(Vec::with_capacity(g.len())) } else { None };
    if let Some(o) = out.as_mut() {
        o.push(acc);
    }
    for p in 0..panels {
        let (g0, g1, g2) = (g[2 * p], g[2 * p + 1], g[2 * p + 2]);
        if let Some(o) = out.as_mut() {
            o.push(acc + (g0 * 5.0 + g1 * 8.0 - g2) * (h / 12.0));
        }
        acc += (g0 + g1 * 4.0 + g2) * (h / 3.0);
        if let Some(o) = out.as_mut() {
            o.push(acc);
        }
    }
    (acc, out)
}

/// Simpson on every other node (step `2h`); needs an even panel count.
fn simpson_coarse(g: &[C64], h: f64) -> C64 {
    let panels = (g.len() - 1) / 4;
    let mut acc = C64::new(0.0, 0.0);
    for p in 0..panels {
        acc += (g[4 * p] + g[4 * p + 2] * 4.0 + g[4 * p + 4]) * (2.0 * h / 3.0);
    }
    acc
}
