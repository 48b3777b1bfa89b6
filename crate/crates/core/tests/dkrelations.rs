use std::sync::{LazyLock, Mutex};

use kzassoc_core::dkrelations::*;
use kzassoc_core::freeseries::*;
use kzassoc_core::C64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn lam(order: usize, degree: usize, e: Element, p: &BraidPresentation) -> Series {
    Series::monomial(p.alphabet().clone(), order, degree, e)
}

/// Rank of the span of all `u·r·v` in degree `d`, by dense exact elimination.
fn brute_force_rank(p: &BraidPresentation, d: usize) -> usize {
    let k = p.alphabet().len();
    let cols = k.pow(d as u32);
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for left in 0..=d - 2 {
        let right = d - 2 - left;
        for ui in 0..k.pow(left as u32) {
            for vi in 0..k.pow(right as u32) {
                let u = Word::unrank(ui, left, k);
                let v = Word::unrank(vi, right, k);
                for r in p.relations() {
                    let mut row = vec![BigRational::zero(); cols];
                    for (w, c) in r.terms() {
                        row[u.concat(w).concat(&v).rank(k)] += c.clone();
                    }
                    rows.push(row);
                }
            }
        }
    }
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(rank, pivot);
        let inv = BigRational::one() / rows[rank][col].clone();
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let f = rows[i][col].clone() * inv.clone();
                let pivot_row = rows[rank].clone();
                for (x, p) in rows[i][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= p * &f;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Coefficient of `t^d` in `Π_{j=1}^{n−1} 1/(1 − j·t)`.
fn hilbert(n: usize, d: usize) -> usize {
    let mut coeffs = vec![0usize; d + 1];
    coeffs[0] = 1;
    for j in 1..n {
        for i in 1..=d {
            coeffs[i] += j * coeffs[i - 1];
        }
    }
    coeffs[d]
}

#[test]
fn presentation_sizes() {
    let p2 = build_presentation(2).unwrap();
    assert_eq!((p2.alphabet().len(), p2.relations().len()), (1, 0));
    let p3 = build_presentation(3).unwrap();
    assert_eq!((p3.alphabet().len(), p3.relations().len()), (3, 3));
    let p4 = build_presentation(4).unwrap();
    assert_eq!((p4.alphabet().len(), p4.relations().len()), (6, 15));
    assert_eq!(build_presentation(1).unwrap_err(), IdealError::TooFewStrands(1));
}

#[test]
fn four_strands_have_three_disjoint_pair_relations() {
    let p = build_presentation(4).unwrap();
    let commutator = |a: u8, b: u8| {
        let mut e = AlgebraElement::<BigRational>::zero();
        e.add_term(Word::from_letters(&[a, b]), BigRational::one());
        e.add_term(Word::from_letters(&[b, a]), -BigRational::one());
        e
    };
    let g = |i, j| p.generator(i, j).unwrap();
    for (a, b) in [(g(1, 2), g(3, 4)), (g(1, 3), g(2, 4)), (g(1, 4), g(2, 3))] {
        let target = commutator(a, b);
        let negated = -&target;
        assert!(p.relations().iter().any(|r| *r == target || *r == negated));
    }
}

#[test]
fn indices_are_canonicalized() {
    let p = build_presentation(4).unwrap();
    assert_eq!(p.generator(3, 1).unwrap(), p.generator(1, 3).unwrap());
    assert_eq!(p.alphabet().name(p.generator(1, 3).unwrap()), "t13");
    assert_eq!(p.generator(2, 2).unwrap_err(), IdealError::BadPair(2, 2));
    assert_eq!(p.generator(1, 5).unwrap_err(), IdealError::BadPair(1, 5));
    for r in p.relations() {
        assert!(r.terms().all(|(w, _)| w.len() == 2));
    }
}

#[test]
fn reversal_maps_t12_to_t34() {
    let p = build_presentation(4).unwrap();
    let sigma = p.permutation(&[4, 3, 2, 1]).unwrap();
    let image = sigma.apply(&p.t(1, 2).unwrap()).unwrap();
    assert_eq!(image, p.t(3, 4).unwrap());
}

#[test]
fn three_strand_degree_two_rank() {
    let p = build_presentation(3).unwrap();
    let basis = ideal_component(3, p.relations(), 2).unwrap();
    assert_eq!(basis.rank(), 2);
    assert_eq!(basis.quotient_dimension(), 7);
    assert_eq!(brute_force_rank(&p, 2), 2);
}

#[test]
fn ranks_match_the_brute_force_oracle() {
    for (n, max_d) in [(3, 4), (4, 3)] {
        let p = build_presentation(n).unwrap();
        for d in 2..=max_d {
            let basis = ideal_component(p.alphabet().len(), p.relations(), d).unwrap();
            assert_eq!(basis.rank(), brute_force_rank(&p, d), "n={n} d={d}");
        }
    }
}

#[test]
fn quotient_dimensions_follow_the_hilbert_series() {
    let p3 = build_presentation(3).unwrap();
    for d in 2..=5 {
        let basis = ideal_component(3, p3.relations(), d).unwrap();
        assert_eq!(basis.quotient_dimension(), (1 << (d + 1)) - 1, "n=3 d={d}");
        assert_eq!(basis.quotient_dimension(), hilbert(3, d));
    }
    let p4 = build_presentation(4).unwrap();
    for d in 2..=4 {
        let basis = ideal_component(6, p4.relations(), d).unwrap();
        assert_eq!(basis.quotient_dimension(), hilbert(4, d), "n=4 d={d}");
    }
}

#[test]
fn two_strands_have_an_empty_ideal() {
    let p = build_presentation(2).unwrap();
    for d in 0..5 {
        assert_eq!(ideal_component(1, p.relations(), d).unwrap().rank(), 0);
    }
}

#[test]
fn basis_rows_are_reduced_echelon() {
    let p = build_presentation(4).unwrap();
    let basis = ideal_component(6, p.relations(), 3).unwrap();
    let pivots: Vec<usize> = basis.rows().iter().map(|r| r.pivot).collect();
    assert!(pivots.windows(2).all(|w| w[0] < w[1]));
    for row in basis.rows() {
        let lead = row.entries.iter().find(|(c, _)| *c == row.pivot).unwrap();
        assert!(lead.1.is_one());
        for (c, _) in &row.entries {
            assert!(*c == row.pivot || !pivots.contains(c));
        }
    }
    assert!(GradedIdealBasis::from_rows(3, 6, basis.rows().to_vec()).is_ok());
    let mut broken = basis.rows().to_vec();
    broken.swap(0, 1);
    assert!(GradedIdealBasis::from_rows(3, 6, broken).is_err());
}

#[test]
fn relations_reduce_to_zero() {
    let p = build_presentation(3).unwrap();
    let (t12, t13, t23) = (p.t(1, 2).unwrap(), p.t(1, 3).unwrap(), p.t(2, 3).unwrap());
    let x = lam(3, 2, (&t12 + &t13).commutator(&t23), &p);
    let reduced = reduce_mod_ideal(&x, &p).unwrap();
    assert_eq!(reduced.max_norm(), 0.0);

    let y = lam(3, 2, &t12 * &t23, &p);
    assert!(reduce_mod_ideal(&y, &p).unwrap().max_norm() > 0.1);
    assert_eq!(reduce_mod_ideal(&Series::zero(p.alphabet().clone(), 3), &p).unwrap().max_norm(), 0.0);
}

#[test]
fn disjoint_commutator_is_in_the_ideal_exactly() {
    let p = build_presentation(4).unwrap();
    let (a, b) = (p.generator(1, 2).unwrap(), p.generator(3, 4).unwrap());
    let mut e = AlgebraElement::<BigRational>::zero();
    e.add_term(Word::from_letters(&[a, b]), BigRational::one());
    e.add_term(Word::from_letters(&[b, a]), -BigRational::one());
    let x = TruncatedSeries::monomial(p.alphabet().clone(), 2, 2, e);
    let (zero, reduced) = is_zero_mod_ideal(&x, &p, 0.0).unwrap();
    assert!(zero);
    assert!(reduced.residual.is_zero());
}

#[test]
fn degree_one_is_never_in_the_ideal() {
    let p = build_presentation(3).unwrap();
    let x = lam(2, 1, p.t(1, 2).unwrap(), &p);
    assert!(!is_zero_mod_ideal(&x, &p, 1e-6).unwrap().0);
}

#[test]
fn total_is_central_modulo_the_ideal() {
    for n in [3, 4] {
        let p = build_presentation(n).unwrap();
        let mut reducer = IdealReducer::new(&p);
        let total = p.total();
        for id in 0..p.alphabet().len() as u8 {
            let bracket = total.commutator(&AlgebraElement::generator(id));
            assert!(reducer.reduce_element(&bracket).unwrap().sup_norm() < 1e-14);
        }
    }
}

#[test]
fn reducer_rejects_foreign_alphabets() {
    let p = build_presentation(3).unwrap();
    let x = Series::one(Alphabet::ab(), 2);
    assert_eq!(reduce_mod_ideal(&x, &p).unwrap_err(), IdealError::AlphabetMismatch);
}

#[test]
fn bases_are_cached_on_demand() {
    let p = build_presentation(3).unwrap();
    let mut reducer = IdealReducer::new(&p);
    let x = Series::exp_lambda(p.alphabet().clone(), 4, C64::new(1.0, 0.0), &p.total());
    reducer.reduce(&x).unwrap();
    assert_eq!(reducer.cached_degrees().collect::<Vec<_>>(), vec![2, 3, 4]);
}

fn random_relation_product(p: &BraidPresentation) -> impl Strategy<Value = (usize, Vec<u8>, Vec<u8>, f64)> {
    let k = p.alphabet().len() as u8;
    let m = p.relations().len();
    (0..m, 0..=2usize, -3.0..3.0f64).prop_flat_map(move |(r, len, s)| {
        (Just(r), prop::collection::vec(0..k, len), prop::collection::vec(0..k, 0..=2 - len), Just(s))
    })
}

fn shared_reducer(n: usize) -> std::sync::MutexGuard<'static, IdealReducer> {
    static R3: LazyLock<Mutex<IdealReducer>> =
        LazyLock::new(|| Mutex::new(IdealReducer::new(&build_presentation(3).unwrap())));
    static R4: LazyLock<Mutex<IdealReducer>> =
        LazyLock::new(|| Mutex::new(IdealReducer::new(&build_presentation(4).unwrap())));
    match n {
        3 => R3.lock().unwrap(),
        _ => R4.lock().unwrap(),
    }
}

fn element_in(k: u8) -> impl Strategy<Value = Element> {
    prop::collection::vec((prop::collection::vec(0..k, 0..=4), -2.0..2.0f64), 1..6).prop_map(|terms| {
        AlgebraElement::from_terms(terms.into_iter().map(|(w, c)| (Word::from_letters(&w), C64::new(c, 0.5 * c))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn two_sided_products_of_relations_vanish(
        (r, u, v, s) in random_relation_product(&build_presentation(4).unwrap())
    ) {
        let p = build_presentation(4).unwrap();
        let rel = p.relations()[r].to_complex();
        let x = AlgebraElement::monomial(Word::from_letters(&u), C64::new(s, 0.0))
            * rel
            * AlgebraElement::monomial(Word::from_letters(&v), C64::new(1.0, 0.0));
        prop_assert!(shared_reducer(4).reduce_element(&x).unwrap().sup_norm() <= 1e-12);
    }

    #[test]
    fn exact_two_sided_products_vanish(
        (r, u, v, _s) in random_relation_product(&build_presentation(3).unwrap())
    ) {
        let p = build_presentation(3).unwrap();
        let rel = p.relations()[r].clone();
        let x = AlgebraElement::monomial(Word::from_letters(&u), BigRational::one())
            * rel
            * AlgebraElement::monomial(Word::from_letters(&v), BigRational::one());
        prop_assert!(shared_reducer(3).reduce_element(&x).unwrap().is_zero());
    }

    #[test]
    fn permutations_map_the_ideal_into_itself(x in element_in(6), perm in Just(()).prop_perturb(|_, mut rng| {
        let mut s = vec![1usize, 2, 3, 4];
        for i in (1..4).rev() {
            let j = (rng.next_u32() as usize) % (i + 1);
            s.swap(i, j);
        }
        s
    })) {
        let p = build_presentation(4).unwrap();
        let mut reducer = shared_reducer(4);
        let sigma = p.permutation(&perm).unwrap();
        // x minus its residual lies in the ideal, and so must its image
        let inside = &x - &reducer.reduce_element(&x).unwrap();
        prop_assert!(reducer.reduce_element(&inside).unwrap().sup_norm() <= 1e-10);
        let moved = sigma.apply(&inside).unwrap();
        prop_assert!(reducer.reduce_element(&moved).unwrap().sup_norm() <= 1e-10);
    }

    #[test]
    fn reduction_is_linear(x in element_in(3), y in element_in(3)) {
        let mut reducer = shared_reducer(3);
        let sum = reducer.reduce_element(&(&x + &y)).unwrap();
        let parts = &reducer.reduce_element(&x).unwrap() + &reducer.reduce_element(&y).unwrap();
        prop_assert!((&sum - &parts).sup_norm() <= 1e-12);
    }
}
