//! The five subcommands. Each returns a [`RunReport`]; failures that should still
//! produce a report are turned into one by [`error_report`].

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use kzassoc_core::associator::{
    ab_alphabet, classify_lbh, hexagon_remainder, lambda2_antisymmetry, psi_half, universal_sample, validate_grid,
    verify_hexagon, verify_pentagon, AssociatorError, AssociatorEstimate, LbhClass, LbhDiagnostics, LbhModel, Mode,
    VerificationReport, VerifyConfig,
};
use kzassoc_core::dkrelations::{build_presentation, IdealError, IdealReducer};
use kzassoc_core::kzgeom::{
    flatness_residual, hexagon_paths, interval_connection, interval_paths, kz_connection, pentagon_connection,
    pentagon_paths, punctured_plane_connection, FormalConnection, GeometryError, PairImages,
};
use kzassoc_core::transport::{compose_paths, propagate, reverse_path, PiecewisePath, TransportError};
use kzassoc_core::{AlgebraElement, Alphabet, Element, Series, SeriesError, SeriesNorm, C64};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cache::{braid_reducer, BasisCache, CacheError, CacheStats};
use crate::config::{ConfigError, RunConfig};
use crate::format::SeriesJson;
use crate::report::{Outcome, RunReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error(transparent)]
    Associator(#[from] AssociatorError),
    #[error("{0}")]
    Usage(String),
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Associator(e.into())
    }
}

impl From<TransportError> for CliError {
    fn from(e: TransportError) -> Self {
        CliError::Associator(e.into())
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        CliError::Associator(e.into())
    }
}

impl From<IdealError> for CliError {
    fn from(e: IdealError) -> Self {
        CliError::Associator(e.into())
    }
}

impl CliError {
    pub fn outcome(&self) -> Outcome {
        use AssociatorError as A;
        use GeometryError as G;
        match self {
            CliError::Config(_) | CliError::Usage(_) => Outcome::Precondition,
            CliError::Cache(_) => Outcome::Fail,
            CliError::Associator(e) => match e {
                A::RegulatorOutOfRange(_) | A::BadGrid | A::TooFewSamples(_) | A::Precondition(_) => {
                    Outcome::Precondition
                }
                A::Geometry(G::Inadmissible(_) | G::RegulatorOutOfRange(_) | G::BadPair(..) | G::TooFewStrands(_)) => {
                    Outcome::Precondition
                }
                _ => Outcome::Fail,
            },
        }
    }
}

/// A report for a run that stopped with `err`.
pub fn error_report(command: &str, config: RunConfig, err: &CliError) -> RunReport {
    RunReport::new(command, config, json!({ "error": err.to_string() }), err.outcome())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Extrapolation {
    /// The sample at the smallest regulator.
    Plain,
    /// Three-point elimination of `δ·ln δ` and `δ` on the last samples.
    Richardson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Which {
    Hexagon,
    Pentagon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeArg {
    Finite,
    Limit,
}

/// Images of the `t_ij`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Images {
    /// Generators of the braid algebra, compared modulo its relations.
    Braid,
    /// Distinct multiples of a single letter `X`.
    Commuting,
    /// Generators of the braid algebra with no relations imposed.
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum PathFamily {
    /// Straight segment `δ → 1−ε` on the interval.
    Interval,
    /// Exponential half path `½ → 1−ε`.
    HalfEpsilon,
    /// Exponential half path `δ → ½`.
    HalfDelta,
    /// One leg (1..=6) of the hexagon loop around `0` and `1`.
    HexagonLeg,
    /// The composed hexagon loop.
    HexagonLoop,
    /// One leg (1..=5) of the pentagon boundary.
    PentagonLeg,
    PentagonUpper,
    PentagonLower,
    /// Upper path followed by the reversed lower path.
    PentagonLoop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FlatConnection {
    Pentagon,
    Kz,
    Interval,
    PuncturedPlane,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ClassifyTarget {
    /// `e^{λ ln δ A}`
    ExpLog,
    /// Remainder of the small half circle after splitting off `e^{λiπB}`.
    HexagonRemainder,
    /// Half-path factor `ψ_δ(B, A)`.
    PsiHalf,
    /// `Φ_{δ,δ}(A, B)`.
    Associator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ClassArg {
    L,
    B,
    H,
}

impl From<ClassArg> for LbhClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::L => LbhClass::L,
            ClassArg::B => LbhClass::B,
            ClassArg::H => LbhClass::H,
        }
    }
}

#[derive(Default)]
struct Stopwatch {
    laps: BTreeMap<String, f64>,
}

impl Stopwatch {
    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        *self.laps.entry(name.to_string()).or_default() += start.elapsed().as_secs_f64() * 1e3;
        out
    }
}

fn finish(mut report: RunReport, clock: Stopwatch, cache: Option<CacheStats>) -> RunReport {
    report.timings_ms = clock.laps;
    report.cache = cache;
    report
}

/// Universal samples `Φ_{δ,δ}` over `{A, B}`, one grid point per rayon task.
pub fn universal_estimate(order: usize, grid: &[f64], steps: usize) -> Result<AssociatorEstimate, AssociatorError> {
    validate_grid(grid)?;
    let samples = grid
        .par_iter()
        .map(|&d| Ok((d, d, universal_sample(d, order, steps)?)))
        .collect::<Result<Vec<_>, AssociatorError>>()?;
    AssociatorEstimate::from_samples(order, samples)
}

fn norms_table(norms: &[SeriesNorm]) -> Value {
    json!(norms.iter().map(|n| n.per_degree.clone()).collect::<Vec<_>>())
}

fn x_alphabet() -> Arc<Alphabet> {
    Alphabet::new(["X"]).expect("one letter")
}

fn x_times(s: f64) -> Element {
    AlgebraElement::generator(0).scale(&C64::new(s, 0.0))
}

fn commutator_relation() -> AlgebraElement<BigRational> {
    let a = AlgebraElement::<BigRational>::generator(0);
    let b = AlgebraElement::<BigRational>::generator(1);
    a.commutator(&b)
}

// associator

pub fn cmd_associator(
    config: &RunConfig,
    commuting: bool,
    extrapolation: Option<Extrapolation>,
) -> Result<RunReport, CliError> {
    config.validate()?;
    let mut clock = Stopwatch::default();
    let n = config.order;
    let est = clock.time("samples", || universal_estimate(n, &config.grid, config.steps))?;
    let extrapolation =
        extrapolation.unwrap_or(if commuting { Extrapolation::Richardson } else { Extrapolation::Plain });
    let phi = match extrapolation {
        Extrapolation::Plain => est.extrapolated.clone(),
        Extrapolation::Richardson => est.richardson()?,
    };
    let ab = ab_alphabet();
    let (reported, defect) = if commuting {
        let mut reducer = IdealReducer::with_relations(ab.clone(), vec![commutator_relation()]);
        let reduced = reducer.reduce(&phi)?.residual;
        let defect = reduced.try_sub(&Series::one(ab, n))?.sup_norm().per_degree;
        (reduced, defect)
    } else {
        let mut defect = vec![(phi.coeff_of(0, &kzassoc_core::Word::empty()) - C64::new(1.0, 0.0)).norm()];
        if n >= 1 {
            defect.push(phi.coeff(1).sup_norm());
        }
        (phi.clone(), defect)
    };
    let max_defect = defect.iter().copied().fold(0.0, f64::max);
    let outcome = if !est.converged {
        Outcome::NonConvergence
    } else if max_defect <= config.tolerance {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    let results = json!({
        "commuting": commuting,
        "extrapolation": format!("{extrapolation:?}").to_lowercase(),
        "phi": SeriesJson::from_series(&reported),
        "checked_defect": defect,
        "max_defect": max_defect,
        "lambda2_antisymmetry": lambda2_antisymmetry(&est.extrapolated),
        "grid": config.grid,
        "convergence": norms_table(&est.convergence),
        "converged": est.converged,
    });
    Ok(finish(RunReport::new("associator", config.clone(), results, outcome), clock, None))
}

// verify

struct HexagonImages {
    a: Element,
    b: Element,
    c: Element,
    reducer: IdealReducer,
}

fn hexagon_images(
    images: Images,
    order: usize,
    cache: Option<&BasisCache>,
) -> Result<(HexagonImages, Option<CacheStats>), CliError> {
    Ok(match images {
        Images::Commuting => {
            let reducer = IdealReducer::free(x_alphabet());
            (HexagonImages { a: x_times(1.0), b: x_times(2.0), c: x_times(-0.5), reducer }, None)
        }
        Images::Braid | Images::Free => {
            let p = build_presentation(3)?;
            let (reducer, stats) = if images == Images::Braid {
                let (r, s) = braid_reducer(cache, &p, order)?;
                (r, Some(s))
            } else {
                (IdealReducer::free(p.alphabet().clone()), None)
            };
            (HexagonImages { a: p.t(1, 2)?, b: p.t(2, 3)?, c: p.t(1, 3)?, reducer }, stats)
        }
    })
}

fn pentagon_images(
    images: Images,
    order: usize,
    cache: Option<&BasisCache>,
) -> Result<(PairImages, IdealReducer, Option<CacheStats>), CliError> {
    Ok(match images {
        Images::Commuting => {
            let x = x_alphabet();
            let mut pi = PairImages::new(4, x.clone());
            for (i, j, s) in [(1, 2, 1.0), (1, 3, 2.0), (1, 4, 3.0), (2, 3, -1.0), (2, 4, 0.5), (3, 4, 1.5)] {
                pi.set(i, j, x_times(s))?;
            }
            (pi, IdealReducer::free(x), None)
        }
        Images::Braid => {
            let p = build_presentation(4)?;
            let (reducer, stats) = braid_reducer(cache, &p, order)?;
            (PairImages::generators(&p), reducer, Some(stats))
        }
        Images::Free => {
            let p = build_presentation(4)?;
            (PairImages::generators(&p), IdealReducer::free(p.alphabet().clone()), None)
        }
    })
}

fn verification_json(r: &VerificationReport) -> Value {
    json!({
        "identity": format!("{:?}", r.identity).to_lowercase(),
        "mode": format!("{:?}", r.mode).to_lowercase(),
        "residual_norm": r.residual_norm,
        "max_residual": r.max_residual,
        "checks": r.checks.iter().map(|(name, v)| json!({ "name": name, "residual": v })).collect::<Vec<_>>(),
        "convergence": norms_table(&r.convergence),
        "converged": r.converged,
    })
}

pub fn cmd_verify(config: &RunConfig, which: Which, mode: ModeArg, images: Images) -> Result<RunReport, CliError> {
    config.validate()?;
    let mut clock = Stopwatch::default();
    let cache = BasisCache::resolve(config.cache_dir.as_deref());
    let n = config.order;
    let mut vc = match mode {
        ModeArg::Finite => VerifyConfig::finite(n, config.delta, config.tolerance),
        ModeArg::Limit => VerifyConfig::limit(n, config.grid.clone(), config.tolerance),
    };
    vc.steps = config.steps;
    let universal = match mode {
        ModeArg::Limit => Some(clock.time("samples", || universal_estimate(n, &config.grid, config.steps))?),
        ModeArg::Finite => None,
    };
    let (report, stats) = match which {
        Which::Hexagon => {
            let (mut h, stats) = clock.time("ideal", || hexagon_images(images, n, cache.as_ref()))?;
            let r =
                clock.time("verify", || verify_hexagon(&h.a, &h.b, &h.c, &mut h.reducer, &vc, universal.as_ref()))?;
            (r, stats)
        }
        Which::Pentagon => {
            let (pi, mut reducer, stats) = clock.time("ideal", || pentagon_images(images, n, cache.as_ref()))?;
            let r = clock.time("verify", || verify_pentagon(&pi, &mut reducer, &vc, universal.as_ref()))?;
            (r, stats)
        }
    };
    let outcome = if report.passed {
        Outcome::Pass
    } else if report.mode == Mode::Limit && !report.converged {
        Outcome::NonConvergence
    } else {
        Outcome::Fail
    };
    let command = format!("verify {}", format!("{which:?}").to_lowercase());
    Ok(finish(RunReport::new(&command, config.clone(), verification_json(&report), outcome), clock, stats))
}

// transport

fn point_json(p: &[C64]) -> Value {
    json!(p.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
}

fn pick_leg(legs: &[PiecewisePath], leg: Option<usize>) -> Result<&PiecewisePath, CliError> {
    let k = leg.ok_or_else(|| CliError::Usage(String::from("this family needs --leg")))?;
    k.checked_sub(1)
        .and_then(|i| legs.get(i))
        .ok_or_else(|| CliError::Usage(format!("--leg must be in 1..={}, got {k}", legs.len())))
}

struct TransportSetup {
    conn: FormalConnection,
    path: PiecewisePath,
    /// Closed loops are compared with 1 modulo the ideal.
    closed: bool,
    reducer: IdealReducer,
    /// Commuting images `(a, b)` on the interval, where the transport has a closed form.
    closed_form: Option<(Element, Element)>,
    stats: Option<CacheStats>,
}

type TwoImages = (Arc<Alphabet>, Element, Element, IdealReducer, Option<CacheStats>);

/// Images of `A`, `B` for the two-pole connections.
fn two_images(images: Images, order: usize, cache: Option<&BasisCache>) -> Result<TwoImages, CliError> {
    match images {
        Images::Commuting => Ok((x_alphabet(), x_times(1.0), x_times(2.0), IdealReducer::free(x_alphabet()), None)),
        Images::Braid | Images::Free => {
            let p = build_presentation(3)?;
            let (reducer, stats) = if images == Images::Braid {
                let (r, s) = braid_reducer(cache, &p, order)?;
                (r, Some(s))
            } else {
                (IdealReducer::free(p.alphabet().clone()), None)
            };
            Ok((p.alphabet().clone(), p.t(1, 2)?, p.t(2, 3)?, reducer, stats))
        }
    }
}

pub fn cmd_transport(
    config: &RunConfig,
    family: PathFamily,
    leg: Option<usize>,
    images: Images,
) -> Result<RunReport, CliError> {
    config.validate()?;
    let mut clock = Stopwatch::default();
    let cache = BasisCache::resolve(config.cache_dir.as_deref());
    let n = config.order;
    let (delta, epsilon) = (config.delta, config.epsilon);

    let setup = clock.time("setup", || -> Result<TransportSetup, CliError> {
        Ok(match family {
            PathFamily::Interval | PathFamily::HalfEpsilon | PathFamily::HalfDelta => {
                let (al, a, b, reducer, stats) = two_images(images, n, cache.as_ref())?;
                let paths = interval_paths(delta, epsilon)?;
                let path = match family {
                    PathFamily::Interval => paths.affine,
                    PathFamily::HalfEpsilon => paths.half_epsilon,
                    _ => paths.half_delta,
                };
                let closed_form = (images == Images::Commuting).then(|| (a.clone(), b.clone()));
                TransportSetup {
                    conn: interval_connection(&a, &b, al),
                    path,
                    closed: false,
                    reducer,
                    closed_form,
                    stats,
                }
            }
            PathFamily::HexagonLeg | PathFamily::HexagonLoop => {
                let (al, a, b, reducer, stats) = two_images(images, n, cache.as_ref())?;
                let paths = hexagon_paths(delta)?;
                let (path, closed) = match family {
                    PathFamily::HexagonLoop => (paths.loop_path, true),
                    _ => (pick_leg(&paths.legs, leg)?.clone(), false),
                };
                let conn = punctured_plane_connection(&a, &b, al);
                TransportSetup { conn, path, closed, reducer, closed_form: None, stats }
            }
            _ => {
                let (pi, reducer, stats) = pentagon_images(images, n, cache.as_ref())?;
                let paths = pentagon_paths(delta)?;
                let (path, closed) = match family {
                    PathFamily::PentagonLeg => (pick_leg(&paths.legs, leg)?.clone(), false),
                    PathFamily::PentagonUpper => (paths.upper, false),
                    PathFamily::PentagonLower => (paths.lower, false),
                    _ => (compose_paths(&reverse_path(&paths.lower), &paths.upper)?, true),
                };
                TransportSetup { conn: pentagon_connection(&pi)?, path, closed, reducer, closed_form: None, stats }
            }
        })
    })?;
    let TransportSetup { conn, path, closed, mut reducer, closed_form, stats } = setup;

    let alphabet = conn.alphabet().clone();
    let conn = Arc::new(conn);
    let field = conn.pull_back_to_path(&path)?;
    let w = clock.time("propagate", || propagate(&field, 0.0, 1.0, n, config.steps))?;
    let (start, end) = (path.start(), path.end());

    let lambda0_defect = (w.value.coeff_of(0, &kzassoc_core::Word::empty()) - C64::new(1.0, 0.0)).norm();
    let mut worst = lambda0_defect;

    let closed_form_defect = match closed_form {
        Some((a, b)) => {
            let (x0, x1) = (start[0].re, end[0].re);
            let mut exponent = a.scale(&C64::new((x1 / x0).ln(), 0.0));
            exponent.add_scaled(&b, &C64::new(((1.0 - x1) / (1.0 - x0)).ln(), 0.0));
            let exact = Series::exp_lambda(alphabet.clone(), n, C64::new(1.0, 0.0), &exponent);
            let d = w.value.try_sub(&exact)?.sup_norm().per_degree;
            worst = d.iter().copied().fold(worst, f64::max);
            Some(d)
        }
        None => None,
    };
    let loop_residual = if closed {
        let diff = w.value.try_sub(&Series::one(alphabet.clone(), n))?;
        let d = clock.time("reduce", || reducer.reduce(&diff))?.residual_norm;
        worst = d.iter().copied().fold(worst, f64::max);
        Some(d)
    } else {
        None
    };

    let outcome = if worst <= config.tolerance { Outcome::Pass } else { Outcome::Fail };
    let results = json!({
        "family": format!("{family:?}"),
        "leg": leg,
        "images": format!("{images:?}").to_lowercase(),
        "start": point_json(&start),
        "end": point_json(&end),
        "singular_set": path.singular_set(),
        "propagator": SeriesJson::from_series(&w.value),
        "quadrature": {
            "panels_per_piece": w.quadrature.panels_per_piece,
            "segments": w.quadrature.segments,
            "error_estimate": w.quadrature.error_estimate,
        },
        "lambda0_defect": lambda0_defect,
        "closed_form_defect": closed_form_defect,
        "loop_residual": loop_residual,
    });
    Ok(finish(RunReport::new("transport", config.clone(), results, outcome), clock, stats))
}

// flatness

/// Admissible points with rational coordinates `p/q`, `2 ≤ q ≤ 64`, drawn from a seeded stream.
pub fn rational_points(
    conn: &FormalConnection,
    complex: bool,
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<C64>>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = conn.dimension();
    let mut points = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while points.len() < count {
        attempts += 1;
        if attempts > 1000 * count.max(1) {
            return Err(CliError::Usage(String::from("could not find admissible sample points")));
        }
        let q: i64 = rng.random_range(2..=64);
        let x: Vec<C64> = (0..dim)
            .map(|_| {
                let re = rng.random_range(if complex { -q..=q } else { 1..=q - 1 }) as f64 / q as f64;
                let im = if complex { rng.random_range(-q..=q) as f64 / q as f64 } else { 0.0 };
                C64::new(re, im)
            })
            .collect();
        if conn.is_admissible(&x) {
            points.push(x);
        }
    }
    Ok(points)
}

pub fn cmd_flatness(
    config: &RunConfig,
    connection: FlatConnection,
    images: Images,
    strands: usize,
    samples: usize,
    seed: u64,
) -> Result<RunReport, CliError> {
    config.validate()?;
    let mut clock = Stopwatch::default();
    let cache = BasisCache::resolve(config.cache_dir.as_deref());
    let mut stats = None;
    let (conn, mut reducer) = clock.time("setup", || -> Result<_, CliError> {
        let strands = match connection {
            FlatConnection::Pentagon => 4,
            FlatConnection::Kz => strands,
            _ => 2,
        };
        if images == Images::Commuting {
            return Err(CliError::Usage(String::from("flatness takes --images braid or free")));
        }
        let p = build_presentation(strands)?;
        let reducer = if images == Images::Braid {
            let (r, s) = braid_reducer(cache.as_ref(), &p, 2)?;
            stats = Some(s);
            r
        } else {
            IdealReducer::free(p.alphabet().clone())
        };
        let conn = match connection {
            FlatConnection::Pentagon => pentagon_connection(&PairImages::generators(&p))?,
            FlatConnection::Kz => kz_connection(&PairImages::generators(&p))?,
            FlatConnection::Interval | FlatConnection::PuncturedPlane => {
                let ab = ab_alphabet();
                let (a, b) = (AlgebraElement::generator(0), AlgebraElement::generator(1));
                let conn = if connection == FlatConnection::Interval {
                    interval_connection(&a, &b, ab.clone())
                } else {
                    punctured_plane_connection(&a, &b, ab.clone())
                };
                return Ok((conn, IdealReducer::free(ab)));
            }
        };
        Ok((conn, reducer))
    })?;
    let complex = matches!(connection, FlatConnection::Kz | FlatConnection::PuncturedPlane);
    let points = rational_points(&conn, complex, samples, seed)?;
    let residuals = clock.time("curvature", || {
        points
            .iter()
            .map(|x| flatness_residual(&conn, std::slice::from_ref(x), &mut reducer))
            .collect::<Result<Vec<f64>, GeometryError>>()
    })?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let outcome = if max_residual <= config.tolerance { Outcome::Pass } else { Outcome::Fail };
    let results = json!({
        "connection": format!("{connection:?}"),
        "images": format!("{images:?}").to_lowercase(),
        "dimension": conn.dimension(),
        "vacuous": conn.dimension() < 2,
        "seed": seed,
        "points": points.iter().map(|x| point_json(x)).collect::<Vec<_>>(),
        "residuals": residuals,
        "max_residual": max_residual,
    });
    Ok(finish(RunReport::new("flatness", config.clone(), results, outcome), clock, stats))
}

// classify

fn diagnostics_json(d: &LbhDiagnostics) -> Value {
    let fits: Vec<Value> = d
        .fits
        .iter()
        .map(|f| {
            let model = match f.model {
                LbhModel::Log { c, alpha } => json!({ "kind": "log", "c": c, "alpha": alpha }),
                LbhModel::Bounded { c } => json!({ "kind": "bounded", "c": c }),
                LbhModel::Power { c, beta } => json!({ "kind": "power", "c": c, "beta": beta }),
            };
            json!({ "degree": f.degree, "model": model, "residual": f.residual, "class": format!("{:?}", f.class) })
        })
        .collect();
    json!({ "grid": d.grid, "norms": d.norms, "fits": fits, "class": format!("{:?}", d.class) })
}

pub fn cmd_classify(
    config: &RunConfig,
    target: ClassifyTarget,
    expect: Option<ClassArg>,
) -> Result<RunReport, CliError> {
    config.validate()?;
    let mut clock = Stopwatch::default();
    let (n, steps) = (config.order, config.steps);
    let ab = ab_alphabet();
    let (a, b): (Element, Element) = (AlgebraElement::generator(0), AlgebraElement::generator(1));
    let sample = |d: f64| -> Result<Series, AssociatorError> {
        Ok(match target {
            ClassifyTarget::ExpLog => Series::exp_lambda(ab.clone(), n, C64::new(d.ln(), 0.0), &a),
            ClassifyTarget::HexagonRemainder => hexagon_remainder(&b, &a, &ab, d, n, steps)?,
            ClassifyTarget::PsiHalf => psi_half(&b, &a, &ab, d, n, steps)?.value,
            ClassifyTarget::Associator => universal_sample(d, n, steps)?,
        })
    };
    let samples = clock.time("samples", || {
        config.grid.par_iter().map(|&d| Ok((d, sample(d)?))).collect::<Result<Vec<_>, AssociatorError>>()
    })?;
    let diag = classify_lbh(&samples)?;
    let outcome = match expect {
        Some(c) if LbhClass::from(c) != diag.class => Outcome::Fail,
        _ => Outcome::Pass,
    };
    let mut results = diagnostics_json(&diag);
    results["target"] = json!(format!("{target:?}"));
    results["expected"] = json!(expect.map(|c| format!("{:?}", LbhClass::from(c))));
    Ok(finish(RunReport::new("classify", config.clone(), results, outcome), clock, None))
}
