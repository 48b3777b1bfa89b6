use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{BraidPresentation, IdealError};
use crate::freeseries::{AlgebraElement, Alphabet, TruncatedSeries, Word};
use crate::scalar::{Scalar, C64};

/// One row of a reduced row-echelon basis: pivot entry 1, sorted sparse entries.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealRow {
    pub pivot: usize,
    pub entries: Vec<(usize, BigRational)>,
}

/// Reduced row-echelon basis of the degree-`d` component of a two-sided ideal,
/// in the basis of words of length `d` ordered lexicographically.
#[derive(Clone, Debug)]
pub struct GradedIdealBasis {
    degree: usize,
    generators: usize,
    rows: Vec<IdealRow>,
    approx: Vec<Vec<(usize, f64)>>,
}

impl GradedIdealBasis {
    /// Wraps rows loaded from elsewhere after checking the echelon structure.
    pub fn from_rows(degree: usize, generators: usize, rows: Vec<IdealRow>) -> Result<Self, IdealError> {
        let columns = generators.checked_pow(degree as u32).ok_or(IdealError::InvalidBasis("word space too large"))?;
        let mut last_pivot = None;
        for row in &rows {
            if last_pivot.is_some_and(|p| p >= row.pivot) {
                return Err(IdealError::InvalidBasis("pivots not increasing"));
            }
            last_pivot = Some(row.pivot);
            match row.entries.first() {
                Some((c, v)) if *c == row.pivot && *v == BigRational::from_integer(1.into()) => {}
                _ => return Err(IdealError::InvalidBasis("row does not start with a unit pivot")),
            }
            if row.entries.windows(2).any(|w| w[0].0 >= w[1].0) || row.entries.last().is_some_and(|e| e.0 >= columns) {
                return Err(IdealError::InvalidBasis("entries unsorted or out of range"));
            }
        }
        let pivots: Vec<usize> = rows.iter().map(|r| r.pivot).collect();
        for row in &rows {
            if row.entries[1..].iter().any(|(c, _)| pivots.binary_search(c).is_ok()) {
                return Err(IdealError::InvalidBasis("not reduced at another pivot"));
            }
        }
        Ok(Self::assemble(degree, generators, rows))
    }

    fn assemble(degree: usize, generators: usize, rows: Vec<IdealRow>) -> Self {
        let approx = rows
            .iter()
            .map(|r| r.entries.iter().map(|(c, v)| (*c, v.to_f64().unwrap_or(f64::NAN))).collect())
            .collect();
        GradedIdealBasis { degree, generators, rows, approx }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn rows(&self) -> &[IdealRow] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Dimension of the degree-`d` word space.
    pub fn columns(&self) -> usize {
        self.generators.pow(self.degree as u32)
    }

    /// Dimension of the quotient in this degree.
    pub fn quotient_dimension(&self) -> usize {
        self.columns() - self.rank()
    }

    /// Projects a dense coordinate vector onto the span of non-pivot columns.
    fn eliminate<S: Scalar + RowEntry>(&self, x: &mut [S]) {
        for (row, approx) in self.rows.iter().zip(&self.approx) {
            let c = x[row.pivot].clone();
            if c.is_zero() {
                continue;
            }
            S::subtract_row(x, &c, row, approx);
            x[row.pivot] = S::zero();
        }
    }
}

/// How a scalar type consumes the exact and approximate copies of a basis row.
pub trait RowEntry: Sized {
    fn subtract_row(x: &mut [Self], c: &Self, exact: &IdealRow, approx: &[(usize, f64)]);
}

impl RowEntry for C64 {
    fn subtract_row(x: &mut [Self], c: &Self, _exact: &IdealRow, approx: &[(usize, f64)]) {
        for &(col, v) in approx {
            x[col] -= c * v;
        }
    }
}

impl RowEntry for BigRational {
    fn subtract_row(x: &mut [Self], c: &Self, exact: &IdealRow, _approx: &[(usize, f64)]) {
        for (col, v) in &exact.entries {
            x[*col] -= c * v;
        }
    }
}

/// Degree-`d` component of the ideal generated by homogeneous quadratic `relations`
/// over an alphabet of `generators` letters.
pub fn ideal_component(
    generators: usize,
    relations: &[AlgebraElement<BigRational>],
    d: usize,
) -> Result<GradedIdealBasis, IdealError> {
    if relations.iter().any(|r| r.terms().any(|(w, _)| w.len() != 2)) {
        return Err(IdealError::InhomogeneousRelation);
    }
    if d < 2 || relations.is_empty() || generators == 0 {
        return Ok(GradedIdealBasis::assemble(d, generators, Vec::new()));
    }
    let k = generators;
    let mut echelon = Echelon::default();
    for a in 0..=d - 2 {
        let b = d - 2 - a;
        let (ka, kb) = (k.pow(a as u32), k.pow(b as u32));
        let shift_rel = kb;
        let shift_left = k.pow((b + 2) as u32);
        for rel in relations {
            let rel_cols: Vec<(usize, &BigRational)> = rel.terms().map(|(w, c)| (w.rank(k), c)).collect();
            for u in 0..ka {
                for v in 0..kb {
                    let mut row: Vec<(usize, BigRational)> =
                        rel_cols.iter().map(|(rc, c)| (u * shift_left + rc * shift_rel + v, (*c).clone())).collect();
                    row.sort_by_key(|e| e.0);
                    echelon.insert(row);
                }
            }
        }
    }
    Ok(GradedIdealBasis::assemble(d, generators, echelon.finish()))
}

/// Incrementally maintained reduced row-echelon form.
#[derive(Default)]
struct Echelon {
    rows: Vec<IdealRow>,
    pivot_index: BTreeMap<usize, usize>,
}

impl Echelon {
    fn insert(&mut self, mut v: Vec<(usize, BigRational)>) {
        // Rows are reduced, so subtracting one of them never reintroduces another pivot.
        let hits: Vec<(usize, BigRational)> =
            v.iter().filter_map(|(c, x)| self.pivot_index.get(c).map(|&r| (r, x.clone()))).collect();
        for (r, coeff) in hits {
            v = axpy(&v, &-coeff, &self.rows[r].entries);
        }
        let Some((pivot, lead)) = v.first().cloned() else {
            return;
        };
        let inv = BigRational::from_integer(1.into()) / lead;
        for e in v.iter_mut() {
            e.1 = &e.1 * &inv;
        }
        for row in self.rows.iter_mut() {
            if let Ok(pos) = row.entries.binary_search_by_key(&pivot, |e| e.0) {
                let coeff = -row.entries[pos].1.clone();
                row.entries = axpy(&row.entries, &coeff, &v);
            }
        }
        self.pivot_index.insert(pivot, self.rows.len());
        self.rows.push(IdealRow { pivot, entries: v });
    }

    fn finish(mut self) -> Vec<IdealRow> {
        self.rows.sort_by_key(|r| r.pivot);
        self.rows
    }
}

/// `x + a·y` on sorted sparse vectors.
fn axpy(x: &[(usize, BigRational)], a: &BigRational, y: &[(usize, BigRational)]) -> Vec<(usize, BigRational)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            out.push((y[j].0, a * &y[j].1));
            j += 1;
        } else {
            let s = &x[i].1 + a * &y[j].1;
            if !s.is_zero() {
                out.push((x[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Residual of a series after projecting away the ideal, per λ-degree.
#[derive(Clone, Debug)]
pub struct ReducedForm<S> {
    pub residual: TruncatedSeries<S>,
    pub residual_norm: Vec<f64>,
}

impl<S: Scalar> ReducedForm<S> {
    pub fn max_norm(&self) -> f64 {
        self.residual_norm.iter().copied().fold(0.0, f64::max)
    }
}

/// Reduction modulo a fixed set of quadratic relations, with bases built on demand.
#[derive(Clone, Debug)]
pub struct IdealReducer {
    alphabet: Arc<Alphabet>,
    relations: Vec<AlgebraElement<BigRational>>,
    bases: BTreeMap<usize, Arc<GradedIdealBasis>>,
}

impl IdealReducer {
    pub fn new(p: &BraidPresentation) -> Self {
        Self::with_relations(p.alphabet().clone(), p.relations().to_vec())
    }

    /// No relations: reduction is the identity.
    pub fn free(alphabet: Arc<Alphabet>) -> Self {
        Self::with_relations(alphabet, Vec::new())
    }

    pub fn with_relations(alphabet: Arc<Alphabet>, relations: Vec<AlgebraElement<BigRational>>) -> Self {
        IdealReducer { alphabet, relations, bases: BTreeMap::new() }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn relations(&self) -> &[AlgebraElement<BigRational>] {
        &self.relations
    }

    pub fn cached_degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.bases.keys().copied()
    }

    /// Installs a precomputed basis, e.g. one read from a cache.
    pub fn insert_basis(&mut self, basis: GradedIdealBasis) -> Result<(), IdealError> {
        if basis.generators() != self.alphabet.len() {
            return Err(IdealError::InvalidBasis("generator count differs from the alphabet"));
        }
        self.bases.insert(basis.degree(), Arc::new(basis));
        Ok(())
    }

    pub fn basis(&mut self, d: usize) -> Result<Arc<GradedIdealBasis>, IdealError> {
        if let Some(b) = self.bases.get(&d) {
            return Ok(b.clone());
        }
        let b = Arc::new(ideal_component(self.alphabet.len(), &self.relations, d)?);
        self.bases.insert(d, b.clone());
        Ok(b)
    }

    /// Removes the ideal part of every word length of `x`.
    pub fn reduce_element<S: Scalar + RowEntry>(
        &mut self,
        x: &AlgebraElement<S>,
    ) -> Result<AlgebraElement<S>, IdealError> {
        let k = self.alphabet.len();
        let mut out = AlgebraElement::zero();
        for len in 0..=x.max_word_len() {
            let part = x.homogeneous_part(len);
            if part.is_zero() {
                continue;
            }
            if len < 2 || self.relations.is_empty() {
                out.add_scaled(&part, &S::one());
                continue;
            }
            let basis = self.basis(len)?;
            let mut dense = vec![S::zero(); basis.columns()];
            for (w, c) in part.terms() {
                dense[w.rank(k)] = c.clone();
            }
            basis.eliminate(&mut dense);
            for (i, c) in dense.into_iter().enumerate() {
                if !c.is_zero() {
                    out.add_term(Word::unrank(i, len, k), c);
                }
            }
        }
        Ok(out)
    }

    pub fn reduce<S: Scalar + RowEntry>(&mut self, x: &TruncatedSeries<S>) -> Result<ReducedForm<S>, IdealError> {
        if x.alphabet().names() != self.alphabet.names() {
            return Err(IdealError::AlphabetMismatch);
        }
        let coeffs = x.coeffs().iter().map(|c| self.reduce_element(c)).collect::<Result<Vec<_>, _>>()?;
        let residual = TruncatedSeries::from_coeffs(x.alphabet().clone(), coeffs);
        let residual_norm = residual.sup_norm().per_degree;
        Ok(ReducedForm { residual, residual_norm })
    }

    /// True iff each residual norm is at most `tol · max(1, ‖x_r‖)`.
    pub fn is_zero<S: Scalar + RowEntry>(
        &mut self,
        x: &TruncatedSeries<S>,
        tol: f64,
    ) -> Result<(bool, ReducedForm<S>), IdealError> {
        let reduced = self.reduce(x)?;
        let norms = x.sup_norm();
        let ok = reduced.residual_norm.iter().enumerate().all(|(r, &res)| res <= tol * norms.degree(r).max(1.0));
        Ok((ok, reduced))
    }
}

/// One-shot reduction; prefer [`IdealReducer`] when reducing repeatedly.
pub fn reduce_mod_ideal<S: Scalar + RowEntry>(
    x: &TruncatedSeries<S>,
    p: &BraidPresentation,
) -> Result<ReducedForm<S>, IdealError> {
    IdealReducer::new(p).reduce(x)
}

pub fn is_zero_mod_ideal<S: Scalar + RowEntry>(
    x: &TruncatedSeries<S>,
    p: &BraidPresentation,
    tol: f64,
) -> Result<(bool, ReducedForm<S>), IdealError> {
    IdealReducer::new(p).is_zero(x, tol)
}
