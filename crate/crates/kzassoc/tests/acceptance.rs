//! Acceptance suite: one PASS/FAIL line per criterion on stderr, then a single
//! assertion that every criterion passed.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use kzassoc::commands::{rational_points, universal_estimate};
use kzassoc_core::associator::{
    ab_alphabet, classify_lbh, dyadic_grid, hexagon_remainder, lambda2_antisymmetry, pair_substitution, verify_hexagon,
    verify_pentagon, LbhClass, LbhModel, VerifyConfig, DEEP_GRID, DEFAULT_GRID,
};
use kzassoc_core::dkrelations::{build_presentation, IdealReducer};
use kzassoc_core::kzgeom::{flatness_residual, interval_connection, interval_paths, pentagon_connection, PairImages};
use kzassoc_core::transport::{propagate, PulledBackField, Reparametrization};
use kzassoc_core::{AlgebraElement, Alphabet, Element, Series, Word, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STEPS: usize = 2048;

struct Verdict {
    passed: bool,
    detail: String,
}

fn report(n: usize, title: &str, elapsed: Duration, v: &Verdict) {
    let status = if v.passed { "PASS" } else { "FAIL" };
    let line = format!("acceptance {n:>2} {status} [{:>7.2}s] {title}: {}\n", elapsed.as_secs_f64(), v.detail);
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn max_norm(x: &Series) -> f64 {
    x.sup_norm().max()
}

fn diff(x: &Series, y: &Series) -> f64 {
    max_norm(&x.try_sub(y).unwrap())
}

fn word(letters: &[u8]) -> Word {
    Word::from_letters(letters)
}

/// `Y(s) = f(s)A + g(s)B` with random trigonometric coefficients of frequency ≤ 2.
fn random_field(rng: &mut ChaCha8Rng) -> PulledBackField {
    let mut coef = [[C64::new(0.0, 0.0); 5]; 2];
    for row in coef.iter_mut() {
        for c in row.iter_mut() {
            *c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    let (a, b) = (AlgebraElement::generator(0), AlgebraElement::generator(1));
    PulledBackField::smooth(
        Alphabet::ab(),
        vec![a, b],
        Arc::new(move |s: f64, out: &mut [C64]| {
            for (slot, c) in out.iter_mut().zip(&coef) {
                let t = PI * s;
                *slot = c[0] + c[1] * t.cos() + c[2] * t.sin() + c[3] * (2.0 * t).cos() + c[4] * (2.0 * t).sin();
            }
        }),
    )
}

/// `θ(s) = (e^{ks} − 1)/(e^k − 1)`.
fn exponential_reparametrization(k: f64) -> Reparametrization {
    let scale = k.exp() - 1.0;
    Reparametrization {
        theta: Arc::new(move |s| ((k * s).exp() - 1.0) / scale),
        dtheta: Arc::new(move |s| k * (k * s).exp() / scale),
        inverse: Arc::new(move |t| (1.0 + scale * t).ln() / k),
    }
}

fn criterion_1() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut groupoid, mut reparam) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let y = random_field(&mut rng);
        let mut t = [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)];
        t.sort_by(f64::total_cmp);
        let [alpha, beta, gamma] = t;
        let w = |a: f64, b: f64| propagate(&y, a, b, 5, STEPS).unwrap().value;
        let split = w(beta, gamma).try_mul(&w(alpha, beta)).unwrap();
        groupoid = groupoid.max(diff(&split, &w(alpha, gamma)));
        let theta = exponential_reparametrization(rng.random_range(0.5..2.0));
        let wr = propagate(&y.reparametrize(&theta), 0.0, 1.0, 5, STEPS).unwrap().value;
        reparam = reparam.max(diff(&wr, &w(0.0, 1.0)));
    }
    Verdict {
        passed: groupoid <= 1e-9 && reparam <= 1e-8,
        detail: format!("groupoid {groupoid:.2e} (<= 1e-9), reparametrization {reparam:.2e} (<= 1e-8)"),
    }
}

/// Per-degree defect of the commuting interval transport at `δ = ε = ¼` against
/// `exp(λ(a·ln((1−ε)/δ) + b·ln(ε/(1−δ))))`.
fn commuting_defect(order: usize, steps: usize) -> Vec<f64> {
    let x = Alphabet::new(["X"]).unwrap();
    let gen: Element = AlgebraElement::generator(0);
    let (a, b) = (gen.scale(&re(1.5)), gen.scale(&re(-0.75)));
    let (d, e) = (0.25, 0.25);
    let conn = Arc::new(interval_connection(&a, &b, x.clone()));
    let path = interval_paths(d, e).unwrap().affine;
    let w = propagate(&conn.pull_back_to_path(&path).unwrap(), 0.0, 1.0, order, steps).unwrap().value;
    let mut exponent = a.scale(&re(((1.0 - e) / d).ln()));
    exponent.add_scaled(&b, &re((e / (1.0 - d)).ln()));
    let exact = Series::exp_lambda(x, order, re(1.0), &exponent);
    w.try_sub(&exact).unwrap().sup_norm().per_degree
}

fn criterion_2() -> Verdict {
    let defect = commuting_defect(6, STEPS);
    let worst = defect.iter().copied().fold(0.0, f64::max);
    Verdict { passed: worst <= 1e-8, detail: format!("max per-degree defect {worst:.2e} (<= 1e-8) at N=6") }
}

fn criterion_3() -> Verdict {
    let p = build_presentation(4).unwrap();
    let conn = pentagon_connection(&PairImages::generators(&p)).unwrap();
    let points = rational_points(&conn, false, 10, 3).unwrap();
    let mut reducer = IdealReducer::new(&p);
    let free = flatness_residual(&conn, &points, &mut IdealReducer::free(p.alphabet().clone())).unwrap();
    let residual = flatness_residual(&conn, &points, &mut reducer).unwrap();
    Verdict {
        passed: residual <= 1e-10 && free > 1e-3,
        detail: format!("residual mod ideal {residual:.2e} (<= 1e-10), without relations {free:.2e}"),
    }
}

fn t3() -> (Element, Element, Element, IdealReducer) {
    let p = build_presentation(3).unwrap();
    (p.t(1, 2).unwrap(), p.t(2, 3).unwrap(), p.t(1, 3).unwrap(), IdealReducer::new(&p))
}

fn criterion_4() -> Verdict {
    let (a, b, c, mut reducer) = t3();
    let mut cfg = VerifyConfig::finite(4, 0.125, 1e-6);
    cfg.steps = STEPS;
    let r = verify_hexagon(&a, &b, &c, &mut reducer, &cfg, None).unwrap();
    Verdict { passed: r.passed, detail: format!("loop residual {:.2e} (<= 1e-6)", r.max_residual) }
}

fn criterion_5() -> Verdict {
    let p = build_presentation(4).unwrap();
    let mut cfg = VerifyConfig::finite(4, 0.125, 1e-6);
    cfg.steps = STEPS;
    let r = verify_pentagon(&PairImages::generators(&p), &mut IdealReducer::new(&p), &cfg, None).unwrap();
    Verdict { passed: r.passed, detail: format!("upper vs lower residual {:.2e} (<= 1e-6)", r.max_residual) }
}

fn criterion_6() -> Verdict {
    let grid = dyadic_grid(DEFAULT_GRID.0, DEFAULT_GRID.1);
    let est = universal_estimate(4, &grid, STEPS).unwrap();
    let phi = &est.extrapolated;
    let ab = ab_alphabet();
    let (a, b): (Element, Element) = (AlgebraElement::generator(0), AlgebraElement::generator(1));

    let lambda1 = phi.coeff(1).sup_norm();
    let swapped = phi.substitute(&pair_substitution(&ab, &b, &a)).unwrap();
    let duality = diff(&phi.try_mul(&swapped).unwrap(), &Series::one(ab, 4));

    let (t12, t23, _, mut reducer) = t3();
    let total = &(&t12 + &t23) + &build_presentation(3).unwrap().t(1, 3).unwrap();
    let al = reducer.alphabet().clone();
    let plain = phi.substitute(&pair_substitution(&al, &t12, &t23)).unwrap();
    let shifted = phi.substitute(&pair_substitution(&al, &(&t12 + &total), &(&t23 + &total))).unwrap();
    let shift = reducer.reduce(&shifted.try_sub(&plain).unwrap()).unwrap().max_norm();

    Verdict {
        passed: lambda1 <= 1e-3 && duality <= 1e-4 && shift <= 1e-4,
        detail: format!(
            "lambda^1 {lambda1:.2e} (<= 1e-3), duality {duality:.2e} (<= 1e-4), central shift {shift:.2e} (<= 1e-4)"
        ),
    }
}

/// `∫∫_{δ<u₂<u₁<1−δ} du₁du₂ / (u₁(u₂−1))`: inner integral in closed form, outer by
/// composite Simpson in `ln u` on `[δ, ½]` and in `ln(1−u)` on `[½, 1−δ]`.
fn double_integral_oracle(d: f64) -> f64 {
    let inner = |u: f64| ((1.0 - u) / (1.0 - d)).ln();
    let simpson = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, n: usize| {
        let h = (hi - lo) / n as f64;
        let mut s = f(lo) + f(hi);
        for i in 1..n {
            s += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    };
    let n = 8192;
    // u = e^t: du/u = dt.
    let left = simpson(&|t: f64| inner(t.exp()), d.ln(), 0.5f64.ln(), n);
    // u = 1 − e^t: du = −e^t dt.
    let right = simpson(&|t: f64| inner(1.0 - t.exp()) * t.exp() / (1.0 - t.exp()), d.ln(), 0.5f64.ln(), n);
    left + right
}

/// Weights `w` with `Σw = 1`, `Σw·δ ln δ = 0`, `Σw·δ = 0` by Gaussian elimination.
fn richardson_weights(d: [f64; 3]) -> [f64; 3] {
    let mut m =
        [[1.0, 1.0, 1.0, 1.0], [d[0] * d[0].ln(), d[1] * d[1].ln(), d[2] * d[2].ln(), 0.0], [d[0], d[1], d[2], 0.0]];
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs())).unwrap();
        m.swap(col, pivot);
        for row in 0..3 {
            if row != col {
                let f = m[row][col] / m[col][col];
                let pivot_row = m[col];
                for (x, p) in m[row][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
            }
        }
    }
    [m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]]
}

fn criterion_7() -> Verdict {
    let zeta2 = PI * PI / 6.0;
    let grid = dyadic_grid(6, 11);
    let est = universal_estimate(2, &grid, STEPS).unwrap();
    let oracle: Vec<f64> = grid.iter().map(|&d| double_integral_oracle(d)).collect();
    let sample_gap = est
        .samples
        .iter()
        .zip(&oracle)
        .map(|((_, _, s), o)| (s.coeff_of(2, &word(&[0, 1])) - re(*o)).norm())
        .fold(0.0, f64::max);

    let c_ab = est.richardson().unwrap().coeff_of(2, &word(&[0, 1]));
    let w = richardson_weights([grid[3], grid[4], grid[5]]);
    let oracle_limit: f64 = w.iter().zip(&oracle[3..]).map(|(w, o)| w * o).sum();
    let zeta_gap = (c_ab.norm() - zeta2).abs();
    let oracle_gap = (c_ab - re(oracle_limit)).norm();
    let anti = lambda2_antisymmetry(&est.extrapolated);
    let plain_gap = (est.extrapolated.coeff_of(2, &word(&[0, 1])).norm() - zeta2).abs();
    Verdict {
        passed: zeta_gap <= 5e-3 && anti <= 1e-6 && sample_gap <= 1e-8 && oracle_gap <= 1e-8,
        detail: format!(
            "|c(AB)| - zeta(2) = {zeta_gap:.2e} (<= 5e-3; plain {plain_gap:.2e}), antisymmetry {anti:.2e} (<= 1e-6), \
             oracle per sample {sample_gap:.2e}, oracle limit {oracle_gap:.2e}"
        ),
    }
}

fn criterion_8() -> Verdict {
    let deep = dyadic_grid(DEEP_GRID.0, DEEP_GRID.1);
    let default = dyadic_grid(DEFAULT_GRID.0, DEFAULT_GRID.1);
    let run = |grid: &[f64]| {
        let est = universal_estimate(4, grid, STEPS).unwrap();
        let (a, b, c, mut r3) = t3();
        let mut cfg = VerifyConfig::limit(3, grid.to_vec(), 1e-3);
        cfg.steps = STEPS;
        let hex = verify_hexagon(&a, &b, &c, &mut r3, &cfg, Some(&est)).unwrap();
        let p = build_presentation(4).unwrap();
        cfg.order = 4;
        let pent = verify_pentagon(&PairImages::generators(&p), &mut IdealReducer::new(&p), &cfg, Some(&est)).unwrap();
        (hex, pent)
    };
    let (hex, pent) = run(&deep);
    let (hex_default, pent_default) = run(&default);
    Verdict {
        passed: hex.passed && pent.passed,
        detail: format!(
            "grid 2^-4..2^-24: hexagon N=3 {:.2e}, pentagon N=4 {:.2e} (<= 1e-3); \
             grid 2^-4..2^-10: hexagon {:.2e}, pentagon {:.2e}",
            hex.max_residual, pent.max_residual, hex_default.max_residual, pent_default.max_residual
        ),
    }
}

fn criterion_9() -> Verdict {
    let grid = dyadic_grid(DEFAULT_GRID.0, DEFAULT_GRID.1);
    let ab = ab_alphabet();
    let (a, b): (Element, Element) = (AlgebraElement::generator(0), AlgebraElement::generator(1));
    let exp_log: Vec<(f64, Series)> =
        grid.iter().map(|&d| (d, Series::exp_lambda(ab.clone(), 4, re(d.ln()), &a))).collect();
    let diag = classify_lbh(&exp_log).unwrap();
    let alpha_gap = (1..=4)
        .map(|r| match diag.fit(r).map(|f| f.model) {
            Some(LbhModel::Log { alpha, .. }) => (alpha - r as f64).abs(),
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max);

    let rem: Vec<(f64, Series)> =
        grid.iter().map(|&d| (d, hexagon_remainder(&b, &a, &ab, d, 3, STEPS).unwrap())).collect();
    let hdiag = classify_lbh(&rem).unwrap();
    let beta_min = (1..=3)
        .map(|r| match hdiag.fit(r).map(|f| f.model) {
            Some(LbhModel::Power { beta, .. }) => beta,
            _ => f64::NEG_INFINITY,
        })
        .fold(f64::INFINITY, f64::min);
    Verdict {
        passed: diag.class == LbhClass::L && alpha_gap <= 0.2 && hdiag.class == LbhClass::H && beta_min >= 0.3,
        detail: format!(
            "exp(lambda ln(delta) A): {:?}, max |alpha - r| {alpha_gap:.2e} (<= 0.2); hexagon remainder: {:?}, \
             min beta {beta_min:.2} (>= 0.3)",
            diag.class, hdiag.class
        ),
    }
}

fn criterion_10() -> Verdict {
    const FLOOR: f64 = 1e-12;
    let defects: Vec<f64> = (0..13).map(|k| commuting_defect(6, 1 << k).iter().copied().fold(0.0, f64::max)).collect();
    let mut ok = true;
    let mut ratios = Vec::new();
    for w in defects.windows(2) {
        if w[1] <= FLOOR {
            break;
        }
        let ratio = w[0] / w[1];
        ratios.push(ratio);
        ok &= ratio >= 8.0;
    }
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.1}")).collect();
    Verdict {
        passed: ok && !ratios.is_empty(),
        detail: format!(
            "ratios [{}] (>= 8) from 1 to {} panels, defect {:.1e} -> {:.1e}, then {:.1e} at the floor",
            shown.join(", "),
            1 << ratios.len(),
            defects[0],
            defects[ratios.len()],
            defects.get(ratios.len() + 1).copied().unwrap_or(f64::NAN)
        ),
    }
}

#[test]
fn acceptance_criteria() {
    type Criterion = (usize, &'static str, Option<Duration>, fn() -> Verdict);
    let criteria: [Criterion; 10] = [
        (1, "groupoid and reparametrization", Some(Duration::from_secs(30)), criterion_1),
        (2, "commuting closed form", Some(Duration::from_secs(5)), criterion_2),
        (3, "pentagon flatness", Some(Duration::from_secs(60)), criterion_3),
        (4, "hexagon loop, finite delta", Some(Duration::from_secs(120)), criterion_4),
        (5, "pentagon transports, finite delta", Some(Duration::from_secs(600)), criterion_5),
        (6, "associator structure", None, criterion_6),
        (7, "zeta(2) cross-check", None, criterion_7),
        (8, "hexagon and pentagon, limit", None, criterion_8),
        (9, "L/B/H classifier", None, criterion_9),
        (10, "quadrature order", None, criterion_10),
    ];
    let mut failed = Vec::new();
    for (n, title, budget, run) in criteria {
        let start = Instant::now();
        let mut verdict = run();
        let elapsed = start.elapsed();
        if let Some(limit) = budget {
            if elapsed > limit {
                verdict.passed = false;
                verdict.detail.push_str(&format!("; runtime over {}s", limit.as_secs()));
            }
        }
        report(n, title, elapsed, &verdict);
        if !verdict.passed {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
