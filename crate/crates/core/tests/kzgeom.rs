use std::f64::consts::PI;
use std::sync::Arc;

use kzassoc_core::dkrelations::{build_presentation, IdealReducer};
use kzassoc_core::freeseries::*;
use kzassoc_core::kzgeom::*;
use kzassoc_core::transport::{distance, propagate, PiecewisePath, PointMap};
use kzassoc_core::C64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn r(x: f64) -> C64 {
    c(x, 0.0)
}

fn ab() -> (Arc<Alphabet>, Element, Element) {
    (Alphabet::ab(), AlgebraElement::generator(0), AlgebraElement::generator(1))
}

fn close(x: &Element, y: &Element, tol: f64) -> bool {
    (x - y).sup_norm() <= tol
}

fn close_all(x: &[Element], y: &[Element], tol: f64) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(a, b)| close(a, b, tol))
}

fn lin(terms: &[(f64, &Element)]) -> Element {
    let mut out = AlgebraElement::zero();
    for (k, e) in terms {
        out.add_scaled(e, &r(*k));
    }
    out
}

fn t4() -> (IdealReducer, PairImages) {
    let p = build_presentation(4).unwrap();
    (IdealReducer::new(&p), PairImages::generators(&p))
}

#[test]
fn interval_connection_at_a_half() {
    let (al, a, b) = ab();
    let conn = interval_connection(&a, &b, al.clone());
    assert!(close(&conn.components(&[r(0.5)]).unwrap()[0], &lin(&[(2.0, &a), (-2.0, &b)]), 1e-15));
    let plane = punctured_plane_connection(&a, &b, al);
    assert!(close(&plane.components(&[r(-1.0)]).unwrap()[0], &lin(&[(-1.0, &a), (-0.5, &b)]), 1e-15));
}

#[test]
fn connections_reject_points_off_their_domain() {
    let (al, a, b) = ab();
    let conn = interval_connection(&a, &b, al.clone());
    assert!(matches!(conn.components(&[r(1.5)]), Err(GeometryError::Inadmissible(_))));
    assert!(matches!(conn.components(&[c(0.5, 0.1)]), Err(GeometryError::Inadmissible(_))));
    let plane = punctured_plane_connection(&a, &b, al);
    assert!(plane.components(&[c(0.5, 0.1)]).is_ok());
    assert!(matches!(plane.components(&[r(1.0)]), Err(GeometryError::Inadmissible(_))));
}

#[test]
fn involution_swaps_the_two_poles() {
    let (al, a, b) = ab();
    let conn = Arc::new(interval_connection(&a, &b, al.clone()));
    let swapped = interval_connection(&b, &a, al);
    let pulled = conn.pull_back(iota()).unwrap();
    for x in [0.1, 0.37, 0.8] {
        assert!(close_all(&pulled.components(&[r(x)]).unwrap(), &swapped.components(&[r(x)]).unwrap(), 1e-13));
    }
}

#[test]
fn rotation_permutes_the_three_punctures() {
    let (al, a, b) = ab();
    let minus = lin(&[(-1.0, &a), (-1.0, &b)]);
    let conn = Arc::new(punctured_plane_connection(&a, &b, al.clone()));
    let once = conn.pull_back(zeta()).unwrap();
    let twice = conn.pull_back(zeta_squared()).unwrap();
    // ζ*Γ(B,A) = Γ(−A−B, B) and (ζ∘ζ)*Γ(B,A) = Γ(A, −A−B)
    let expect_once = punctured_plane_connection(&b, &minus, al.clone());
    let expect_twice = punctured_plane_connection(&minus, &a, al);
    let via_once = Arc::new(once.clone()).pull_back(zeta()).unwrap();
    for z in [c(0.3, 0.7), c(-2.0, -0.5), c(1.5, 0.01)] {
        assert!(close_all(&once.components(&[z]).unwrap(), &expect_once.components(&[z]).unwrap(), 1e-12));
        assert!(close_all(&twice.components(&[z]).unwrap(), &expect_twice.components(&[z]).unwrap(), 1e-12));
        assert!(close_all(&via_once.components(&[z]).unwrap(), &twice.components(&[z]).unwrap(), 1e-12));
    }
}

#[test]
fn two_point_kz_connection() {
    let p = build_presentation(2).unwrap();
    let images = PairImages::generators(&p);
    let conn = kz_connection(&images).unwrap();
    let t = AlgebraElement::generator(0);
    let comps = conn.components(&[c(0.5, 1.0), c(-0.5, 1.0)]).unwrap();
    assert!(close(&comps[0], &t, 1e-15));
    assert!(close(&comps[1], &lin(&[(-1.0, &t)]), 1e-15));
    assert!(matches!(conn.components(&[r(1.0), r(1.0)]), Err(GeometryError::Inadmissible(_))));
    assert_eq!(kz_connection(&PairImages::new(1, p.alphabet().clone())).unwrap_err(), GeometryError::TooFewStrands(1));
}

#[test]
fn kz_connection_is_translation_and_scale_invariant() {
    let p = build_presentation(3).unwrap();
    let conn = Arc::new(kz_connection(&PairImages::generators(&p)).unwrap());
    let x = [c(0.1, 0.2), c(-1.0, 0.5), c(2.0, -1.0)];
    let base = conn.components(&x).unwrap();
    for map in [AffineMap::translation(3, c(0.7, -3.0)), AffineMap::homothety(3, c(-2.0, 0.5))] {
        let pulled = conn.pull_back(Arc::new(map)).unwrap();
        assert!(close_all(&pulled.components(&x).unwrap(), &base, 1e-13));
    }
}

#[test]
fn pentagon_connection_at_a_sample_point() {
    let (_, images) = t4();
    let p = build_presentation(4).unwrap();
    let t = |i, j| p.t(i, j).unwrap();
    let conn = pentagon_connection(&images).unwrap();
    let comps = conn.components(&[r(0.25), r(0.5)]).unwrap();
    let x2 = lin(&[(4.0, &t(1, 2)), (-4.0, &t(2, 3)), (-4.0 / 3.0, &t(2, 4))]);
    let x3 = lin(&[(2.0, &t(1, 3)), (4.0, &t(2, 3)), (-2.0, &t(3, 4))]);
    assert!(close(&comps[0], &x2, 1e-14));
    assert!(close(&comps[1], &x3, 1e-14));
    assert!(matches!(conn.components(&[r(0.5), r(0.25)]), Err(GeometryError::Inadmissible(_))));
}

#[test]
fn pentagon_reflection_reverses_the_strands() {
    let (_, images) = t4();
    let p = build_presentation(4).unwrap();
    let conn = Arc::new(pentagon_connection(&images).unwrap());
    let sigma = p.permutation(&[4, 3, 2, 1]).unwrap();
    let reflected = conn.pull_back(theta()).unwrap();
    let expected = conn.substitute(&sigma).unwrap();
    for x in [[0.2, 0.7], [0.05, 0.9], [0.4, 0.45]] {
        let x = [r(x[0]), r(x[1])];
        assert!(close_all(&reflected.components(&x).unwrap(), &expected.components(&x).unwrap(), 1e-12));
    }
}

#[test]
fn curvature_is_antisymmetric() {
    let (_, images) = t4();
    let conn = kz_connection(&images).unwrap();
    let x = [c(0.0, 0.0), c(1.0, 0.3), c(-0.4, 2.0), c(3.0, -1.0)];
    assert!(curvature(&conn, &x, 2, 2).unwrap().value.is_zero());
    let k01 = curvature(&conn, &x, 0, 1).unwrap().value;
    let k10 = curvature(&conn, &x, 1, 0).unwrap().value;
    assert!(close(&(&k01 + &k10), &AlgebraElement::zero(), 1e-12));
    assert_eq!(curvature(&conn, &x, 0, 4).unwrap_err(), GeometryError::DimensionMismatch);
}

#[test]
fn curvature_needs_the_relations() {
    let (mut reducer, images) = t4();
    let conn = kz_connection(&images).unwrap();
    let points: Vec<Vec<C64>> = vec![vec![c(0.0, 0.0), c(1.0, 0.3), c(-0.4, 2.0), c(3.0, -1.0)]];
    assert!(flatness_residual(&conn, &points, &mut reducer).unwrap() <= 1e-10);
    let mut free = IdealReducer::free(images.alphabet().clone());
    assert!(flatness_residual(&conn, &points, &mut free).unwrap() > 1e-3);
}

#[test]
fn pullbacks_to_paths_commute_with_maps() {
    let (al, a, b) = ab();
    let conn = Arc::new(punctured_plane_connection(&a, &b, al));
    let path = PiecewisePath::affine(vec![c(0.2, -0.3)], vec![c(2.5, -1.0)]).unwrap();
    let direct = conn.pull_back_to_path(&path.map(zeta()).unwrap()).unwrap();
    let pulled = Arc::new(conn.pull_back(zeta()).unwrap()).pull_back_to_path(&path).unwrap();
    for s in [0.0, 0.3, 0.9] {
        let (x, y) = (direct.coefficients(s), pulled.coefficients(s));
        assert!(x.iter().zip(&y).all(|(x, y)| (x - y).norm() < 1e-12));
    }
    let w1 = propagate(&direct, 0.0, 1.0, 3, 256).unwrap().value;
    let w2 = propagate(&pulled, 0.0, 1.0, 3, 256).unwrap().value;
    assert!(w1.try_sub(&w2).unwrap().sup_norm().max() < 1e-12);
}

#[test]
fn hexagon_legs_form_a_closed_loop_below_the_axis() {
    let d = 0.125;
    let paths = hexagon_paths(d).unwrap();
    assert_eq!(paths.legs.len(), 6);
    for (i, leg) in paths.legs.iter().enumerate() {
        let next = &paths.legs[(i + 1) % 6];
        assert!(distance(&leg.end(), &next.start()) < 1e-12, "leg {i}");
        for k in 0..=32 {
            assert!(leg.value(k as f64 / 32.0)[0].im <= 1e-15);
        }
    }
    assert!(distance(&paths.loop_path.start(), &[r(d)]) < 1e-15);
    assert!(distance(&paths.loop_path.end(), &[r(d)]) < 1e-12);
    let (radius, centre) = (1.0 / d - 0.5, r(0.5));
    for s in [0.0, 0.2, 0.5, 1.0] {
        assert!(((paths.legs[3].value(s)[0] - centre).norm() - radius).abs() < 1e-12);
    }
    assert!(distance(&paths.legs[1].end(), &[r(1.0 / (1.0 - d))]) < 1e-12);
    assert_eq!(hexagon_paths(0.3).unwrap_err(), GeometryError::RegulatorOutOfRange(0.3));
}

#[test]
fn hexagon_even_legs_match_their_exact_parametrization() {
    let d = 0.125;
    let paths = hexagon_paths(d).unwrap();
    let (radius, offset) = ((2.0 * d - d * d) / (2.0 - 2.0 * d), d * d / (2.0 - 2.0 * d));
    for k in 0..=16 {
        let s = k as f64 / 16.0;
        let e = C64::new(0.0, PI * s).exp();
        let exact = (r(1.0 - d / 2.0) - e * (d / 2.0)) / (r(1.0 - d / 2.0) + e * (d / 2.0));
        let two = paths.legs[1].value(s)[0];
        assert!((two - exact).norm() < 1e-14, "s = {s}");
        assert!(((two - r(1.0 + offset)).norm() - radius).abs() < 1e-12);
        assert!(((paths.legs[5].value(s)[0] - r(-offset)).norm() - radius).abs() < 1e-12);
    }
}

#[test]
fn hexagon_loop_has_trivial_transport() {
    let (al, a, b) = ab();
    let conn = Arc::new(punctured_plane_connection(&a, &b, al.clone()));
    let field = conn.pull_back_to_path(&hexagon_paths(0.125).unwrap().loop_path).unwrap();
    let w = propagate(&field, 0.0, 1.0, 3, 2048).unwrap().value;
    assert!(w.try_sub(&Series::one(al, 3)).unwrap().sup_norm().max() < 1e-9);
}

#[test]
fn pentagon_zone_vertices_and_reflection() {
    let d = 0.125;
    let paths = pentagon_paths(d).unwrap();
    let pt = |a: f64, b: f64| vec![r(a), r(b)];
    let v = &paths.vertices;
    assert_eq!(v[0], pt(d * d, d));
    assert_eq!(v[3], pt(1.0 - d, 1.0 - d * d));
    let th = AffineMap::theta();
    for (i, j) in [(0, 3), (1, 2), (4, 4)] {
        assert!(distance(&th.apply(&v[i]), &v[j]) < 1e-15);
    }
    assert!(distance(&paths.upper.start(), &paths.lower.start()) < 1e-15);
    assert!(distance(&paths.upper.end(), &paths.lower.end()) < 1e-15);
}

#[test]
fn pentagon_paths_stay_in_the_triangle() {
    let paths = pentagon_paths(0.0625).unwrap();
    let curves = paths.legs.iter().chain(paths.half_paths.iter().map(|h| &h.path));
    for curve in curves {
        for k in 0..=64 {
            let x = curve.value(k as f64 / 64.0);
            assert!(x.iter().all(|v| v.im == 0.0));
            assert!(0.0 < x[0].re && x[0].re < x[1].re && x[1].re < 1.0);
        }
    }
}

#[test]
fn pentagon_half_paths_end_at_vertices() {
    let paths = pentagon_paths(0.125).unwrap();
    let v = &paths.vertices;
    for (name, vertex) in [("I-1", 0), ("I-2", 1), ("II-1", 1), ("II-2", 2), ("IV-1", 0), ("IV-2", 4)] {
        let h = paths.half_path(name).unwrap();
        assert!(distance(&h.end(), &v[vertex]) < 1e-12, "{name}");
    }
    assert!(paths.half_path("III-1").is_none());
}

#[test]
fn constant_path_has_a_zero_field() {
    let (al, a, b) = ab();
    let conn = Arc::new(interval_connection(&a, &b, al.clone()));
    let field = conn.pull_back_to_path(&PiecewisePath::constant(vec![r(0.3)])).unwrap();
    assert!(field.value(0.4).is_zero());
    assert_eq!(propagate(&field, 0.0, 1.0, 3, 16).unwrap().value, Series::one(al, 3));
}

#[test]
fn exponential_half_path_has_constant_coefficient_on_the_far_pole() {
    let (al, a, b) = ab();
    let eps = 0.01;
    let conn = Arc::new(interval_connection(&a, &b, al));
    let path = exponential_half_path(eps).unwrap();
    assert!(distance(&path.start(), &[r(0.5)]) < 1e-15);
    assert!(distance(&path.end(), &[r(1.0 - eps)]) < 1e-15);
    let field = conn.pull_back_to_path(&path).unwrap();
    for s in [0.0, 0.25, 0.8, 1.0] {
        assert!((field.coefficients(s)[1] - r((2.0 * eps).ln())).norm() < 1e-13);
    }
}

#[test]
fn interval_paths_share_endpoints() {
    let paths = interval_paths(0.125, 0.0625).unwrap();
    assert!(distance(&paths.affine.start(), &paths.half_delta.start()) < 1e-15);
    assert!(distance(&paths.half_delta.end(), &paths.half_epsilon.start()) < 1e-15);
    assert!(distance(&paths.affine.end(), &paths.half_epsilon.end()) < 1e-15);
    assert_eq!(interval_paths(0.0, 0.1).unwrap_err(), GeometryError::RegulatorOutOfRange(0.0));
}

#[test]
fn pair_images_validate_pairs() {
    let (al, a, _) = ab();
    let mut images = PairImages::new(3, al);
    images.set(2, 1, a.clone()).unwrap();
    assert_eq!(images.get(1, 2).unwrap(), &a);
    assert_eq!(images.set(2, 2, a.clone()).unwrap_err(), GeometryError::BadPair(2, 2));
    assert_eq!(images.set(1, 4, a).unwrap_err(), GeometryError::BadPair(1, 4));
    assert_eq!(images.get(1, 3).unwrap_err(), GeometryError::BadPair(1, 3));
}

fn config_point(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), n)
        .prop_map(|v| v.into_iter().map(|(x, y)| c(x, y)).collect())
        .prop_filter("distinct coordinates", |x: &Vec<C64>| {
            (0..x.len()).all(|i| (i + 1..x.len()).all(|j| (x[i] - x[j]).norm() > 0.05))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn kz_connection_is_flat_modulo_the_relations(x in config_point(4)) {
        let (mut reducer, images) = t4();
        let conn = kz_connection(&images).unwrap();
        prop_assert!(flatness_residual(&conn, &[x], &mut reducer).unwrap() <= 1e-10);
    }

    #[test]
    fn pentagon_connection_is_flat_modulo_the_relations(a in 0.02..0.98f64, t in 0.02..0.98f64) {
        let (mut reducer, images) = t4();
        let conn = pentagon_connection(&images).unwrap();
        let x = vec![r(a * t), r(a * t + (1.0 - a * t) * 0.5 * (1.0 + t) * 0.99)];
        prop_assume!(conn.is_admissible(&x));
        prop_assert!(flatness_residual(&conn, &[x], &mut reducer).unwrap() <= 1e-10);
    }
}
