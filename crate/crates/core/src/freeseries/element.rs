use alloc::collections::btree_map::{self, BTreeMap};
use core::ops::{Add, Mul, Neg, Sub};

use super::Word;
use crate::scalar::{Scalar, C64};

/// Sparse element of the free algebra: a finite map from words to nonzero scalars.
#[derive(Clone, PartialEq, Debug)]
pub struct AlgebraElement<S> {
    terms: BTreeMap<Word, S>,
}

impl<S: Scalar> Default for AlgebraElement<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn zero() -> Self {
        AlgebraElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Word::empty(), S::one())
    }

    pub fn scalar(s: S) -> Self {
        Self::monomial(Word::empty(), s)
    }

    pub fn generator(id: u8) -> Self {
        Self::monomial(Word::letter(id), S::one())
    }

    pub fn monomial(word: Word, coeff: S) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(word, coeff);
        }
        AlgebraElement { terms }
    }

    /// Sums the given terms; repeated words accumulate.
    pub fn from_terms<I: IntoIterator<Item = (Word, S)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (w, c) in iter {
            out.add_term(w, c);
        }
        out
    }

    pub fn terms(&self) -> btree_map::Iter<'_, Word, S> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &Word) -> Option<&S> {
        self.terms.get(word)
    }

    /// Coefficient of `word`, zero when absent.
    pub fn coeff_or_zero(&self, word: &Word) -> S {
        self.terms.get(word).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().next_back().map_or(0, Word::len)
    }

    pub fn add_term(&mut self, word: Word, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, other: &Self, s: &S) {
        if s.is_zero() {
            return;
        }
        for (w, c) in other.terms.iter() {
            self.add_term(w.clone(), c.clone() * s.clone());
        }
    }

    /// `self += s * a * b`
    pub fn add_product(&mut self, a: &Self, b: &Self, s: &S) {
        for (wa, ca) in a.terms.iter() {
            let cas = ca.clone() * s.clone();
            for (wb, cb) in b.terms.iter() {
                self.add_term(wa.concat(wb), cas.clone() * cb.clone());
            }
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (w, c) in self.terms.iter() {
            out.add_term(w.clone(), c.clone() * s.clone());
        }
        out
    }

    /// `[self, other] = self·other − other·self`
    pub fn commutator(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        out.add_product(self, other, &S::one());
        out.add_product(other, self, &-S::one());
        out
    }

    /// `ad_self^l(y)`
    pub fn ad_power(&self, y: &Self, l: usize) -> Self {
        let mut out = y.clone();
        for _ in 0..l {
            out = self.commutator(&out);
        }
        out
    }

    pub fn sup_norm(&self) -> f64 {
        self.terms.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Terms whose word has exactly `len` letters.
    pub fn homogeneous_part(&self, len: usize) -> Self {
        AlgebraElement {
            terms: self.terms.iter().filter(|(w, _)| w.len() == len).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    /// Drops inexact coefficients below `relative` times the largest one.
    pub fn prune_relative(&mut self, relative: f64) {
        if S::EXACT {
            return;
        }
        let floor = self.sup_norm() * relative;
        self.terms.retain(|_, c| !c.is_zero() && c.magnitude() >= floor);
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AlgebraElement<T> {
        AlgebraElement::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }

    pub fn to_complex(&self) -> AlgebraElement<C64> {
        self.map_scalars(Scalar::to_complex)
    }
}

impl<S: Scalar> Add for &AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn add(self, rhs: Self) -> AlgebraElement<S> {
        let mut out = self.clone();
        out.add_scaled(rhs, &S::one());
        out
    }
}

impl<S: Scalar> Sub for &AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn sub(self, rhs: Self) -> AlgebraElement<S> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-S::one());
        out
    }
}

impl<S: Scalar> Mul for &AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn mul(self, rhs: Self) -> AlgebraElement<S> {
        let mut out = AlgebraElement::zero();
        out.add_product(self, rhs, &S::one());
        out
    }
}

impl<S: Scalar> Neg for &AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn neg(self) -> AlgebraElement<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Add for AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn add(self, rhs: Self) -> AlgebraElement<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn sub(self, rhs: Self) -> AlgebraElement<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Mul for AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn mul(self, rhs: Self) -> AlgebraElement<S> {
        &self * &rhs
    }
}

impl<S: Scalar> Neg for AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn neg(self) -> AlgebraElement<S> {
        -&self
    }
}
