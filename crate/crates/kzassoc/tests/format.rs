use kzassoc::{series_from_str, series_to_string, FormatError, SeriesJson};
use kzassoc_core::{AlgebraElement, Alphabet, Series, Word, C64};
use proptest::prelude::*;

fn sample() -> Series {
    let ab = Alphabet::ab();
    let x = AlgebraElement::from_terms([
        (Word::from_letters(&[1, 0]), C64::new(0.25, -1.0)),
        (Word::from_letters(&[0]), C64::new(1.5, 0.0)),
    ]);
    Series::exp_lambda(ab, 3, C64::new(0.0, 1.0), &x)
}

#[test]
fn round_trip_is_exact() {
    let x = sample();
    let back = series_from_str(&series_to_string(&x)).unwrap();
    assert_eq!(back, x);
}

#[test]
fn terms_are_sorted_by_degree_then_word() {
    let json = SeriesJson::from_series(&sample());
    let keys: Vec<(usize, usize, Vec<String>)> =
        json.terms.iter().map(|t| (t.lambda, t.word.len(), t.word.clone())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(json.terms[0].lambda, 0);
    assert!(json.terms[0].word.is_empty());
}

#[test]
fn rejects_malformed_documents() {
    let unknown = r#"{"order":1,"alphabet":["A"],"terms":[{"lambda":1,"word":["Z"],"re":1.0,"im":0.0}]}"#;
    assert!(matches!(series_from_str(unknown), Err(FormatError::Series(_))));
    let high = r#"{"order":1,"alphabet":["A"],"terms":[{"lambda":2,"word":["A"],"re":1.0,"im":0.0}]}"#;
    assert!(matches!(series_from_str(high), Err(FormatError::LambdaAboveOrder(2, 1))));
    let dup = r#"{"order":1,"alphabet":["A"],"terms":[
        {"lambda":1,"word":["A"],"re":1.0,"im":0.0},{"lambda":1,"word":["A"],"re":2.0,"im":0.0}]}"#;
    assert!(matches!(series_from_str(dup), Err(FormatError::DuplicateTerm(1))));
    assert!(matches!(series_from_str("[1, 2]"), Err(FormatError::Json(_))));
}

#[test]
fn missing_terms_are_zero() {
    let doc = r#"{"order":2,"alphabet":["A","B"],"terms":[]}"#;
    assert_eq!(series_from_str(doc).unwrap(), Series::zero(Alphabet::ab(), 2));
}

proptest! {
    #[test]
    fn random_series_round_trip(
        terms in proptest::collection::vec((0usize..=3, proptest::collection::vec(0u8..3, 0..4), -1e3..1e3f64, -1e3..1e3f64), 0..12)
    ) {
        let al = Alphabet::new(["X", "Y", "Z"]).unwrap();
        let mut coeffs = vec![AlgebraElement::zero(); 4];
        for (r, w, re, im) in terms {
            coeffs[r].add_term(Word::from_letters(&w), C64::new(re, im));
        }
        let x = Series::from_coeffs(al, coeffs);
        prop_assert_eq!(series_from_str(&series_to_string(&x)).unwrap(), x);
    }
}
