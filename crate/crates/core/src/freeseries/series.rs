use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use super::alphabet::same_alphabet;
use super::{AlgebraElement, Alphabet, SeriesError, Word};
use crate::scalar::{inverse_factorial, Scalar, C64, PRUNE_RELATIVE};

/// Element of `𝒜[λ]/(λ^{N+1})`: one algebra element per λ-degree `0..=N`.
#[derive(Clone, PartialEq, Debug)]
pub struct TruncatedSeries<S> {
    alphabet: Arc<Alphabet>,
    coeffs: Vec<AlgebraElement<S>>,
}

/// Largest absolute coefficient at each λ-degree.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct SeriesNorm {
    pub per_degree: Vec<f64>,
}

impl SeriesNorm {
    pub fn max(&self) -> f64 {
        self.per_degree.iter().copied().fold(0.0, f64::max)
    }

    pub fn degree(&self, r: usize) -> f64 {
        self.per_degree.get(r).copied().unwrap_or(0.0)
    }
}

impl<S: Scalar> TruncatedSeries<S> {
    pub fn zero(alphabet: Arc<Alphabet>, order: usize) -> Self {
        TruncatedSeries { alphabet, coeffs: (0..=order).map(|_| AlgebraElement::zero()).collect() }
    }

    pub fn one(alphabet: Arc<Alphabet>, order: usize) -> Self {
        let mut out = Self::zero(alphabet, order);
        out.coeffs[0] = AlgebraElement::one();
        out
    }

    /// Builds a series from its λ-coefficients; the order is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_coeffs(alphabet: Arc<Alphabet>, coeffs: Vec<AlgebraElement<S>>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least the λ⁰ coefficient");
        let mut out = TruncatedSeries { alphabet, coeffs };
        out.normalize();
        out
    }

    /// `λ^degree · element`, truncated at `order`.
    pub fn monomial(alphabet: Arc<Alphabet>, order: usize, degree: usize, element: AlgebraElement<S>) -> Self {
        let mut out = Self::zero(alphabet, order);
        if degree <= order {
            out.coeffs[degree] = element;
        }
        out
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn coeff(&self, r: usize) -> &AlgebraElement<S> {
        &self.coeffs[r]
    }

    pub fn coeffs(&self) -> &[AlgebraElement<S>] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<AlgebraElement<S>> {
        self.coeffs
    }

    /// Coefficient of `λ^r · word`.
    pub fn coeff_of(&self, r: usize, word: &Word) -> S {
        self.coeffs.get(r).map_or_else(S::zero, |c| c.coeff_or_zero(word))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(AlgebraElement::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = (order + 1).min(self.coeffs.len());
        TruncatedSeries { alphabet: self.alphabet.clone(), coeffs: self.coeffs[..keep].to_vec() }
    }

    fn normalize(&mut self) {
        for c in self.coeffs.iter_mut() {
            c.prune_relative(PRUNE_RELATIVE);
        }
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if same_alphabet(&self.alphabet, &other.alphabet) {
            Ok(())
        } else {
            Err(SeriesError::AlphabetMismatch)
        }
    }

    fn combine(&self, other: &Self, sign: S) -> Result<Self, SeriesError> {
        self.check(other)?;
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|r| {
                let mut c = self.coeffs[r].clone();
                c.add_scaled(&other.coeffs[r], &sign);
                c
            })
            .collect();
        Ok(Self::from_coeffs(self.alphabet.clone(), coeffs))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, S::one())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, -S::one())
    }

    /// Cauchy product, truncated at the smaller order.
    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let order = self.order().min(other.order());
        let one = S::one();
        let coeffs = (0..=order)
            .map(|r| {
                let mut c = AlgebraElement::zero();
                for u in 0..=r {
                    c.add_product(&self.coeffs[u], &other.coeffs[r - u], &one);
                }
                c
            })
            .collect();
        Ok(Self::from_coeffs(self.alphabet.clone(), coeffs))
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::from_coeffs(self.alphabet.clone(), self.coeffs.iter().map(|c| c.scale(s)).collect())
    }

    fn constant_is(&self, value: &AlgebraElement<S>) -> bool {
        self.coeffs[0] == *value
    }

    /// `Σ_{k≤N} x^k/k!` for `x` without λ⁰ part.
    pub fn exp_proper(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let mut out = Self::one(self.alphabet.clone(), self.order());
        let mut power = out.clone();
        for k in 1..=self.order() {
            power = &power * self;
            if power.is_zero() {
                break;
            }
            out = &out + &power.scale(&inverse_factorial::<S>(k));
        }
        Ok(out)
    }

    /// `Σ_{k≥1} (−1)^{k+1}(g−1)^k/k` for `g = 1 + λ(…)`.
    pub fn log_group(&self) -> Result<Self, SeriesError> {
        if !self.constant_is(&AlgebraElement::one()) {
            return Err(SeriesError::NotGroupLike);
        }
        let y = self - &Self::one(self.alphabet.clone(), self.order());
        let mut out = Self::zero(self.alphabet.clone(), self.order());
        let mut power = Self::one(self.alphabet.clone(), self.order());
        for k in 1..=self.order() {
            power = &power * &y;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = &out + &power.scale(&S::from_ratio(sign, k as i64));
        }
        Ok(out)
    }

    /// Geometric series `Σ (1−g)^k` for `g = 1 + λ(…)`.
    pub fn invert_group(&self) -> Result<Self, SeriesError> {
        if !self.constant_is(&AlgebraElement::one()) {
            return Err(SeriesError::NotGroupLike);
        }
        let one = Self::one(self.alphabet.clone(), self.order());
        let y = &one - self;
        let mut out = one.clone();
        let mut power = one;
        for _ in 1..=self.order() {
            power = &power * &y;
            if power.is_zero() {
                break;
            }
            out = &out + &power;
        }
        Ok(out)
    }

    pub fn substitute(&self, images: &Substitution<S>) -> Result<Self, SeriesError> {
        if !same_alphabet(&self.alphabet, &images.source) {
            return Err(SeriesError::AlphabetMismatch);
        }
        if let Some(missing) = images.images.iter().position(Option::is_none) {
            return Err(SeriesError::MissingImage(images.source.name(missing as u8).to_string()));
        }
        let coeffs = self.coeffs.iter().map(|c| images.apply_unchecked(c)).collect();
        Ok(Self::from_coeffs(images.target.clone(), coeffs))
    }

    pub fn sup_norm(&self) -> SeriesNorm {
        SeriesNorm { per_degree: self.coeffs.iter().map(AlgebraElement::sup_norm).collect() }
    }

    /// True when every word at `λ^r` has at most `r` letters.
    pub fn respects_word_length(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(r, c)| c.max_word_len() <= r)
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TruncatedSeries<T> {
        TruncatedSeries::from_coeffs(self.alphabet.clone(), self.coeffs.iter().map(|c| c.map_scalars(&f)).collect())
    }

    pub fn to_complex(&self) -> TruncatedSeries<C64> {
        self.map_scalars(Scalar::to_complex)
    }

    /// Same coefficients read over a different alphabet with the same generator count.
    pub fn with_alphabet(&self, alphabet: Arc<Alphabet>) -> Result<Self, SeriesError> {
        if alphabet.len() != self.alphabet.len() {
            return Err(SeriesError::AlphabetMismatch);
        }
        Ok(TruncatedSeries { alphabet, coeffs: self.coeffs.clone() })
    }
}

impl TruncatedSeries<C64> {
    /// `exp(λ·c·x)` for a degree-0 element `x`.
    pub fn exp_lambda(alphabet: Arc<Alphabet>, order: usize, c: C64, x: &AlgebraElement<C64>) -> Self {
        Self::monomial(alphabet, order, 1, x.scale(&c)).exp_proper().expect("no constant term by construction")
    }
}

/// Algebra morphism given by generator images over a target alphabet.
#[derive(Clone, Debug)]
pub struct Substitution<S> {
    source: Arc<Alphabet>,
    target: Arc<Alphabet>,
    images: Vec<Option<AlgebraElement<S>>>,
}

impl<S: Scalar> Substitution<S> {
    pub fn new(source: Arc<Alphabet>, target: Arc<Alphabet>) -> Self {
        let images = (0..source.len()).map(|_| None).collect();
        Substitution { source, target, images }
    }

    pub fn identity(alphabet: Arc<Alphabet>) -> Self {
        let mut out = Self::new(alphabet.clone(), alphabet.clone());
        for i in 0..alphabet.len() {
            out.images[i] = Some(AlgebraElement::generator(i as u8));
        }
        out
    }

    /// Images listed in generator order.
    pub fn from_images(
        source: Arc<Alphabet>,
        target: Arc<Alphabet>,
        images: Vec<AlgebraElement<S>>,
    ) -> Result<Self, SeriesError> {
        if images.len() != source.len() {
            return Err(SeriesError::AlphabetMismatch);
        }
        Ok(Substitution { source, target, images: images.into_iter().map(Some).collect() })
    }

    pub fn set(&mut self, generator: u8, image: AlgebraElement<S>) -> &mut Self {
        self.images[generator as usize] = Some(image);
        self
    }

    pub fn set_by_name(&mut self, name: &str, image: AlgebraElement<S>) -> Result<&mut Self, SeriesError> {
        let id = self.source.id(name)?;
        Ok(self.set(id, image))
    }

    pub fn source(&self) -> &Arc<Alphabet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Alphabet> {
        &self.target
    }

    pub fn image(&self, generator: u8) -> Option<&AlgebraElement<S>> {
        self.images.get(generator as usize).and_then(Option::as_ref)
    }

    pub fn apply(&self, x: &AlgebraElement<S>) -> Result<AlgebraElement<S>, SeriesError> {
        for (w, _) in x.terms() {
            for &l in w.letters() {
                if self.image(l).is_none() {
                    return Err(SeriesError::MissingImage(self.source.name(l).to_string()));
                }
            }
        }
        Ok(self.apply_unchecked(x))
    }

    fn apply_unchecked(&self, x: &AlgebraElement<S>) -> AlgebraElement<S> {
        let mut out = AlgebraElement::zero();
        for (w, c) in x.terms() {
            let mut prod = AlgebraElement::scalar(c.clone());
            for &l in w.letters() {
                let img = self.images[l as usize].as_ref().expect("checked by caller");
                prod = &prod * img;
                if prod.is_zero() {
                    break;
                }
            }
            out.add_scaled(&prod, &S::one());
        }
        out
    }
}

impl<S: Scalar> Add for &TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;
    /// # Panics
    /// On alphabet mismatch; use [`TruncatedSeries::try_add`] to handle it.
    fn add(self, rhs: Self) -> TruncatedSeries<S> {
        self.try_add(rhs).expect("series over the same alphabet")
    }
}

impl<S: Scalar> Sub for &TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;
    fn sub(self, rhs: Self) -> TruncatedSeries<S> {
        self.try_sub(rhs).expect("series over the same alphabet")
    }
}

impl<S: Scalar> Mul for &TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;
    fn mul(self, rhs: Self) -> TruncatedSeries<S> {
        self.try_mul(rhs).expect("series over the same alphabet")
    }
}

impl<S: Scalar> Neg for &TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;
    fn neg(self) -> TruncatedSeries<S> {
        self.scale(&-S::one())
    }
}
