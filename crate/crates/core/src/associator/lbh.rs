use alloc::vec::Vec;

use super::AssociatorError;
use crate::freeseries::Series;
#[allow(unused_imports)]
use num_traits::Float;

/// At most logarithmically divergent, bounded, or harmless (power-law vanishing).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LbhClass {
    L,
    B,
    H,
}

/// Fitted model for one λ-degree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LbhModel {
    /// `C·|ln δ|^α`
    Log { c: f64, alpha: f64 },
    /// `C`
    Bounded { c: f64 },
    /// `C·δ^β`
    Power { c: f64, beta: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeFit {
    pub degree: usize,
    pub model: LbhModel,
    /// Root-mean-square residual of the chosen fit in `log ‖F_r‖`.
    pub residual: f64,
    pub class: LbhClass,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LbhDiagnostics {
    pub grid: Vec<f64>,
    /// `norms[i][r] = ‖F_r(δ_i)‖`.
    pub norms: Vec<Vec<f64>>,
    pub fits: Vec<DegreeFit>,
    /// Worst class over the nonzero degrees `r ≥ 1` (`L` over `B` over `H`), i.e.
    /// the class of `F − F_0`.
    pub class: LbhClass,
}

impl LbhDiagnostics {
    pub fn fit(&self, degree: usize) -> Option<&DegreeFit> {
        self.fits.iter().find(|f| f.degree == degree)
    }
}

/// Exponents smaller than this in magnitude are read as a constant.
const EXPONENT_FLOOR: f64 = 0.05;

/// Least squares `y ≈ p + q·x`; returns `(p, q, rms)`.
fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let q = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let p = my - q * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - p - q * a).powi(2)).sum();
    (p, q, (rss / n).sqrt())
}

fn classify_degree(degree: usize, grid: &[f64], norms: &[f64]) -> DegreeFit {
    let peak = norms.iter().copied().fold(0.0, f64::max);
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        grid.iter().zip(norms).filter(|(_, &n)| n > 1e-300 && n >= 1e-14 * peak).map(|(&d, &n)| (d, n.ln())).unzip();
    if xs.len() < 2 {
        return DegreeFit { degree, model: LbhModel::Bounded { c: peak }, residual: 0.0, class: LbhClass::B };
    }
    let loglog: Vec<f64> = xs.iter().map(|d| d.ln().abs().ln()).collect();
    let logd: Vec<f64> = xs.iter().map(|d| d.ln()).collect();
    let (pl, alpha, rl) = line_fit(&loglog, &ys);
    let (ph, beta, rh) = line_fit(&logd, &ys);
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let rb = (ys.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / ys.len() as f64).sqrt();

    // Tail ordered by decreasing δ: the last two norms must decrease for H, and for L the
    // last local slope against ln|ln δ| must keep at least half the fitted exponent.
    let m = ys.len();
    let tail_decreasing = ys[m - 1] < ys[m - 2];
    let tail_alpha = (ys[m - 1] - ys[m - 2]) / (loglog[m - 1] - loglog[m - 2]);
    let bounded = DegreeFit { degree, model: LbhModel::Bounded { c: mean.exp() }, residual: rb, class: LbhClass::B };
    let log = DegreeFit { degree, model: LbhModel::Log { c: pl.exp(), alpha }, residual: rl, class: LbhClass::L };
    let power = DegreeFit { degree, model: LbhModel::Power { c: ph.exp(), beta }, residual: rh, class: LbhClass::H };

    let mut candidates = Vec::new();
    if alpha > EXPONENT_FLOOR && tail_alpha >= 0.5 * alpha {
        candidates.push(log);
    }
    if beta > EXPONENT_FLOOR && tail_decreasing {
        candidates.push(power);
    }
    candidates.push(bounded);
    candidates
        .into_iter()
        .min_by(|a, b| a.residual.partial_cmp(&b.residual).unwrap_or(core::cmp::Ordering::Equal))
        .expect("bounded is always a candidate")
}

/// Fits `log ‖F_r(δ)‖` per λ-degree against the L, B and H model families and
/// keeps the best-residual admissible one. Samples are `(δ, F(δ))`.
pub fn classify_lbh(samples: &[(f64, Series)]) -> Result<LbhDiagnostics, AssociatorError> {
    if samples.len() < 5 {
        return Err(AssociatorError::TooFewSamples(samples.len()));
    }
    let mut ordered: Vec<&(f64, Series)> = samples.iter().collect();
    ordered.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(core::cmp::Ordering::Equal));
    let grid: Vec<f64> = ordered.iter().map(|s| s.0).collect();
    if grid.iter().any(|&d| !(d > 0.0 && d < 1.0)) {
        return Err(AssociatorError::BadGrid);
    }
    let order = ordered.iter().map(|s| s.1.order()).min().unwrap_or(0);
    let norms: Vec<Vec<f64>> =
        ordered.iter().map(|s| (0..=order).map(|r| s.1.sup_norm().degree(r)).collect()).collect();
    let fits: Vec<DegreeFit> = (0..=order)
        .map(|r| {
            let column: Vec<f64> = norms.iter().map(|n| n[r]).collect();
            classify_degree(r, &grid, &column)
        })
        .collect();
    let positive = fits.iter().filter(|f| f.degree > 0 && !is_zero_fit(f));
    let class = positive.fold(LbhClass::H, |acc, f| match (acc, f.class) {
        (LbhClass::L, _) | (_, LbhClass::L) => LbhClass::L,
        (LbhClass::B, _) | (_, LbhClass::B) => LbhClass::B,
        _ => LbhClass::H,
    });
    Ok(LbhDiagnostics { grid, norms, fits, class })
}

fn is_zero_fit(f: &DegreeFit) -> bool {
    matches!(f.model, LbhModel::Bounded { c } if c == 0.0)
}
