//! JSON form of truncated series.
//!
//! ```json
//! {"order": 2, "alphabet": ["A", "B"],
//!  "terms": [{"lambda": 2, "word": ["A", "B"], "re": -1.6449, "im": 0.0}]}
//! ```
//!
//! Terms are sorted by λ-degree, then by word (shorter first, then lexicographic
//! in alphabet order). Omitted terms are zero.

use std::collections::BTreeMap;

use kzassoc_core::{AlgebraElement, Alphabet, Series, SeriesError, Word, C64};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub order: usize,
    pub alphabet: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub lambda: usize,
    pub word: Vec<String>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("term at λ^{0} exceeds the truncation order {1}")]
    LambdaAboveOrder(usize, usize),
    #[error("duplicate term at λ^{0}")]
    DuplicateTerm(usize),
}

impl SeriesJson {
    pub fn from_series(x: &Series) -> Self {
        let alphabet = x.alphabet();
        let terms = x
            .coeffs()
            .iter()
            .enumerate()
            .flat_map(|(lambda, e)| {
                e.terms().map(move |(w, c)| TermJson {
                    lambda,
                    word: w.letters().iter().map(|&l| alphabet.name(l).to_string()).collect(),
                    re: c.re,
                    im: c.im,
                })
            })
            .collect();
        SeriesJson { order: x.order(), alphabet: alphabet.names().to_vec(), terms }
    }

    pub fn to_series(&self) -> Result<Series, FormatError> {
        let alphabet = Alphabet::new(self.alphabet.iter().cloned())?;
        let mut coeffs: Vec<BTreeMap<Word, C64>> = vec![BTreeMap::new(); self.order + 1];
        for t in &self.terms {
            if t.lambda > self.order {
                return Err(FormatError::LambdaAboveOrder(t.lambda, self.order));
            }
            let letters = t.word.iter().map(|n| alphabet.id(n)).collect::<Result<Vec<u8>, _>>()?;
            if coeffs[t.lambda].insert(Word::from_letters(&letters), C64::new(t.re, t.im)).is_some() {
                return Err(FormatError::DuplicateTerm(t.lambda));
            }
        }
        let coeffs = coeffs.into_iter().map(AlgebraElement::from_terms).collect();
        Ok(Series::from_coeffs(alphabet, coeffs))
    }
}

pub fn series_to_string(x: &Series) -> String {
    serde_json::to_string_pretty(&SeriesJson::from_series(x)).expect("series JSON is always serializable")
}

pub fn series_from_str(s: &str) -> Result<Series, FormatError> {
    serde_json::from_str::<SeriesJson>(s)?.to_series()
}
