use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::phi::{pair_substitution, phi_limit_universal, validate_grid, AssociatorEstimate};
use super::AssociatorError;
use crate::dkrelations::IdealReducer;
use crate::freeseries::{AlgebraElement, Alphabet, Element, Series, SeriesNorm, Word};
use crate::kzgeom::{hexagon_paths, pentagon_connection, pentagon_paths, punctured_plane_connection, PairImages};
use crate::scalar::C64;
use crate::transport::{factorize, propagate, PulledBackField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// One regulator, transports only.
    Finite,
    /// Associators extrapolated over a regulator grid.
    Limit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    Hexagon,
    Pentagon,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub mode: Mode,
    pub order: usize,
    pub tolerance: f64,
    pub steps: usize,
    /// Regulator for finite mode.
    pub delta: f64,
    /// Strictly decreasing `δ = ε` grid for limit mode.
    pub grid: Vec<f64>,
}

impl VerifyConfig {
    pub fn finite(order: usize, delta: f64, tolerance: f64) -> Self {
        VerifyConfig { mode: Mode::Finite, order, tolerance, steps: 2048, delta, grid: Vec::new() }
    }

    pub fn limit(order: usize, grid: Vec<f64>, tolerance: f64) -> Self {
        VerifyConfig { mode: Mode::Limit, order, tolerance, steps: 2048, delta: 0.125, grid }
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub identity: Identity,
    pub mode: Mode,
    pub order: usize,
    pub tolerance: f64,
    /// Sup norm per λ-degree of the difference of both sides after reduction.
    pub residual_norm: Vec<f64>,
    pub max_residual: f64,
    /// Extra structural checks, each `(name, residual)`.
    pub checks: Vec<(String, f64)>,
    /// Grid convergence of the universal associator in limit mode.
    pub convergence: Vec<SeriesNorm>,
    pub converged: bool,
    pub passed: bool,
}

impl VerificationReport {
    fn new(identity: Identity, config: &VerifyConfig, residual_norm: Vec<f64>) -> Self {
        let max_residual = residual_norm.iter().copied().fold(0.0, f64::max);
        VerificationReport {
            identity,
            mode: config.mode,
            order: config.order,
            tolerance: config.tolerance,
            residual_norm,
            max_residual,
            checks: Vec::new(),
            convergence: Vec::new(),
            converged: true,
            passed: max_residual <= config.tolerance,
        }
    }
}

fn exp_pi_i(alphabet: &Arc<Alphabet>, order: usize, x: &Element) -> Series {
    Series::exp_lambda(alphabet.clone(), order, C64::new(0.0, PI), x)
}

/// `Λ = A+B+C` must commute with `A`, `B`, `C` modulo the reducer's ideal.
pub fn check_centrality(
    a: &Element,
    b: &Element,
    c: &Element,
    reducer: &mut IdealReducer,
) -> Result<(), AssociatorError> {
    let total = &(a + b) + c;
    for (name, x) in [("A", a), ("B", b), ("C", c)] {
        let bracket = total.commutator(x);
        let residual = reducer.reduce_element(&bracket)?.sup_norm();
        if residual > 1e-12 * bracket.sup_norm().max(1.0) {
            return Err(AssociatorError::Precondition(format!(
                "A+B+C does not commute with {name} (residual {residual:e})"
            )));
        }
    }
    Ok(())
}

/// Every infinitesimal braid relation, evaluated on the images, must vanish modulo the reducer's ideal.
pub fn check_braid_relations(images: &PairImages, reducer: &mut IdealReducer) -> Result<(), AssociatorError> {
    let p = crate::dkrelations::build_presentation(images.n())?;
    let subst = images.substitution(&p)?;
    for (index, rel) in p.relations().iter().enumerate() {
        let value = subst.apply(&rel.to_complex())?;
        let residual = reducer.reduce_element(&value)?.sup_norm();
        if residual > 1e-12 * value.sup_norm().max(1.0) {
            let pretty = format_relation(rel, p.alphabet());
            return Err(AssociatorError::Precondition(format!(
                "relation #{index} {pretty} fails on the images (residual {residual:e})"
            )));
        }
    }
    Ok(())
}

fn format_relation(rel: &AlgebraElement<num_rational::BigRational>, alphabet: &Alphabet) -> String {
    let mut out = String::new();
    for (w, c) in rel.terms() {
        let word: Vec<&str> = w.letters().iter().map(|&l| alphabet.name(l)).collect();
        out.push_str(&format!("{}{}·{}", if out.is_empty() { "" } else { " + " }, c, word.join("")));
    }
    out
}

/// `H^{(δ)}(B,A)`, the factor left after splitting `e^{λiπB}` off the transport of
/// `Γ(B,A)` along the small half-circle `c_II`.
pub fn hexagon_remainder(
    b: &Element,
    a: &Element,
    alphabet: &Arc<Alphabet>,
    delta: f64,
    order: usize,
    steps: usize,
) -> Result<Series, AssociatorError> {
    let paths = hexagon_paths(delta)?;
    let conn = Arc::new(punctured_plane_connection(a, b, alphabet.clone()));
    let field = conn.pull_back_to_path(&paths.legs[1])?;
    let y0 = PulledBackField::constant(alphabet.clone(), b.clone(), C64::new(0.0, PI));
    let z = field.shifted(1, C64::new(0.0, -PI))?;
    let (_u, xi) = factorize(&y0, &z, 0.0, 1.0, order, steps)?;
    Ok(xi.value)
}

fn residual_of(diff: &Series, reducer: &mut IdealReducer) -> Result<Vec<f64>, AssociatorError> {
    Ok(reducer.reduce(diff)?.residual_norm)
}

/// Hexagon identity for images `A`, `B`, `C` with `A+B+C` central.
///
/// Finite mode transports `Γ(B,A)` around the six-leg loop and compares with 1.
/// Limit mode compares `e^{λπiΛ}` with `e^{λπiA}Φ(C,A)e^{λπiC}Φ(B,C)e^{λπiB}Φ(A,B)`.
pub fn verify_hexagon(
    a: &Element,
    b: &Element,
    c: &Element,
    reducer: &mut IdealReducer,
    config: &VerifyConfig,
    universal: Option<&AssociatorEstimate>,
) -> Result<VerificationReport, AssociatorError> {
    check_centrality(a, b, c, reducer)?;
    let alphabet = reducer.alphabet().clone();
    let n = config.order;
    match config.mode {
        Mode::Finite => {
            let paths = hexagon_paths(config.delta)?;
            let conn = Arc::new(punctured_plane_connection(a, b, alphabet.clone()));
            let field = conn.pull_back_to_path(&paths.loop_path)?;
            let w = propagate(&field, 0.0, 1.0, n, config.steps)?.value;
            let diff = w.try_sub(&Series::one(alphabet, n))?;
            Ok(VerificationReport::new(Identity::Hexagon, config, residual_of(&diff, reducer)?))
        }
        Mode::Limit => {
            let owned;
            let est = match universal {
                Some(e) => e,
                None => {
                    owned = phi_limit_universal(n, &config.grid, config.steps)?;
                    &owned
                }
            };
            let phi =
                |x: &Element, y: &Element| est.extrapolated.truncate(n).substitute(&pair_substitution(&alphabet, x, y));
            let total = &(a + b) + c;
            let rhs = [
                exp_pi_i(&alphabet, n, a),
                phi(c, a)?,
                exp_pi_i(&alphabet, n, c),
                phi(b, c)?,
                exp_pi_i(&alphabet, n, b),
                phi(a, b)?,
            ]
            .into_iter()
            .try_fold(Series::one(alphabet.clone(), n), |acc, f| acc.try_mul(&f))?;
            let lhs = exp_pi_i(&alphabet, n, &total);
            let diff = rhs.try_sub(&lhs)?;
            let mut report = VerificationReport::new(Identity::Hexagon, config, residual_of(&diff, reducer)?);
            report.convergence = est.convergence.clone();
            report.converged = est.converged;
            Ok(report)
        }
    }
}

/// Pentagon identity for images `A_ij` of `t_ij` in `𝒯₄`.
///
/// Finite mode compares the transports along `c_III*(c_II*c_I)` and `c_V*c_IV`.
/// Limit mode compares
/// `Φ(A₁₂,A₂₃+A₂₄)Φ(A₁₃+A₂₃,A₃₄)` with `Φ(A₂₃,A₃₄)Φ(A₁₂+A₁₃,A₂₄+A₃₄)Φ(A₁₂,A₂₃)`.
pub fn verify_pentagon(
    images: &PairImages,
    reducer: &mut IdealReducer,
    config: &VerifyConfig,
    universal: Option<&AssociatorEstimate>,
) -> Result<VerificationReport, AssociatorError> {
    check_braid_relations(images, reducer)?;
    let alphabet = reducer.alphabet().clone();
    let n = config.order;
    match config.mode {
        Mode::Finite => {
            let paths = pentagon_paths(config.delta)?;
            let conn = Arc::new(pentagon_connection(images)?);
            let upper = propagate(&conn.pull_back_to_path(&paths.upper)?, 0.0, 1.0, n, config.steps)?.value;
            let lower = propagate(&conn.pull_back_to_path(&paths.lower)?, 0.0, 1.0, n, config.steps)?.value;
            let diff = upper.try_sub(&lower)?;
            Ok(VerificationReport::new(Identity::Pentagon, config, residual_of(&diff, reducer)?))
        }
        Mode::Limit => {
            validate_grid(&config.grid)?;
            let owned;
            let est = match universal {
                Some(e) => e,
                None => {
                    owned = phi_limit_universal(n, &config.grid, config.steps)?;
                    &owned
                }
            };
            let universal_phi = est.extrapolated.truncate(n);
            let phi = |x: &Element, y: &Element| universal_phi.substitute(&pair_substitution(&alphabet, x, y));
            let t = |i, j| images.get(i, j).cloned();
            let (a12, a13, a23, a24, a34) = (t(1, 2)?, t(1, 3)?, t(2, 3)?, t(2, 4)?, t(3, 4)?);
            let lhs = phi(&a12, &(&a23 + &a24))?.try_mul(&phi(&(&a13 + &a23), &a34)?)?;
            let rhs = phi(&a23, &a34)?.try_mul(&phi(&(&a12 + &a13), &(&a24 + &a34))?)?.try_mul(&phi(&a12, &a23)?)?;
            let diff = lhs.try_sub(&rhs)?;
            let mut report = VerificationReport::new(Identity::Pentagon, config, residual_of(&diff, reducer)?);
            let anti = lambda2_antisymmetry(&universal_phi);
            report.checks.push((String::from("lambda2 antisymmetry"), anti));
            report.passed &= anti <= config.tolerance;
            report.convergence = est.convergence.clone();
            report.converged = est.converged;
            Ok(report)
        }
    }
}

/// `max(|c(AB) + c(BA)|, |c(AA)|, |c(BB)|)` at `λ²` of a series over `{A, B}`;
/// duality forces all three to vanish in the limit.
pub fn lambda2_antisymmetry(phi: &Series) -> f64 {
    if phi.order() < 2 {
        return 0.0;
    }
    let w = |x: u8, y: u8| phi.coeff_of(2, &Word::from_letters(&[x, y]));
    [(w(0, 1) + w(1, 0)).norm(), w(0, 0).norm(), w(1, 1).norm()].into_iter().fold(0.0, f64::max)
}
